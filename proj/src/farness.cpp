#include "ordmatch/farness.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace ordmatch {

namespace {

std::vector<Edge> image_edges(const Copy& c, const OrderedMatchingPattern& h) {
  std::vector<Edge> out;
  out.reserve(h.edges.size());
  for (const auto& pe : h.edges) {
    Edge e;
    e.reserve(pe.size());
    for (Vertex v : pe) e.push_back(c.image[v - 1]);
    out.push_back(std::move(e));
  }
  return out;
}

void require_edges(const OrderedMatchingPattern& h) {
  if (h.edges.empty())
    throw std::invalid_argument("farness: pattern has no edges, deletion number is undefined");
}

// Single-edge patterns: a copy dies iff its one image edge dies, so the
// distinct image edges are simultaneously the minimum deletion set and an
// edge-disjoint packing of the same size.
std::set<Edge> single_edge_images(const OrderedHypergraph& g, const OrderedMatchingPattern& h) {
  std::set<Edge> images;
  for_each_copy(g, h, [&](const Copy& c) {
    Edge e;
    for (Vertex v : h.edges[0]) e.push_back(c.image[v - 1]);
    images.insert(std::move(e));
    return true;
  });
  return images;
}

struct Search {
  const OrderedMatchingPattern& h;
  long long budget;
  long long nodes = 0;
  bool aborted = false;
  BigInt best = 0;
  std::vector<Edge> best_witness = {};

  void run(const OrderedHypergraph& work, const BigInt& depth, std::set<Edge> forbidden,
           std::vector<Edge>& chosen) {
    if (aborted) return;
    if (++nodes > budget) {
      aborted = true;
      return;
    }
    const PackingResult pack = disjoint_packing_lower(work, h);
    if (depth + pack.count >= best) return;  // cannot strictly improve
    if (pack.count == 0) {                   // pattern-free: new incumbent
      best = depth;
      best_witness = chosen;
      return;
    }

    // Globally rarest live edge outside the forbidden set, lex tiebreak.
    const auto counts = per_edge_copy_counts(work, h);
    const Edge* rare = nullptr;
    BigInt rare_count = 0;
    for (const auto& [e, c] : counts) {
      if (forbidden.count(e)) continue;
      if (rare == nullptr || c < rare_count) {
        rare = &e;
        rare_count = c;
      }
    }
    if (rare == nullptr) return;  // every live edge forbidden: infeasible branch

    // Lex-first copy through that edge supplies the branching edge set.
    std::vector<Edge> branch_edges;
    for_each_copy(work, h, [&](const Copy& c) {
      auto imgs = image_edges(c, h);
      if (std::find(imgs.begin(), imgs.end(), *rare) == imgs.end()) return true;
      branch_edges = std::move(imgs);
      return false;
    });

    std::sort(branch_edges.begin(), branch_edges.end());
    for (const Edge& f : branch_edges) {
      if (forbidden.count(f)) continue;
      chosen.push_back(f);
      run(delete_edges(work, {f}), depth + 1, forbidden, chosen);
      chosen.pop_back();
      if (aborted) return;
      forbidden.insert(f);  // later siblings must hit this copy elsewhere
    }
  }
};

}  // namespace

GreedyResult greedy_deletion_upper(const OrderedHypergraph& g, const OrderedMatchingPattern& h) {
  require_edges(h);
  GreedyResult res;
  if (h.m() == 1) {
    auto images = single_edge_images(g, h);
    res.deletions.assign(images.begin(), images.end());
    res.deleted = BigInt(res.deletions.size());
    return res;
  }
  OrderedHypergraph work = g;
  for (;;) {
    const auto counts = per_edge_copy_counts(work, h);
    const Edge* pick = nullptr;
    BigInt pick_count = 0;
    for (const auto& [e, c] : counts)
      if (c > pick_count) {  // strict: map order keeps the lex-smallest max
        pick = &e;
        pick_count = c;
      }
    if (pick == nullptr) break;
    res.deletions.push_back(*pick);
    work = delete_edges(work, {*pick});
    res.deleted += 1;
  }
  return res;
}

PackingResult disjoint_packing_lower(const OrderedHypergraph& g,
                                     const OrderedMatchingPattern& h) {
  require_edges(h);
  PackingResult res;
  if (h.m() == 1) {
    auto images = single_edge_images(g, h);
    res.count = BigInt(images.size());
    // One witness copy per image edge, first in lex order.
    std::set<Edge> seen;
    for_each_copy(g, h, [&](const Copy& c) {
      Edge e;
      for (Vertex v : h.edges[0]) e.push_back(c.image[v - 1]);
      if (seen.insert(e).second) res.packing.push_back(c);
      return seen.size() < images.size();
    });
    return res;
  }
  std::set<Edge> used;
  for_each_copy(g, h, [&](const Copy& c) {
    const auto imgs = image_edges(c, h);
    for (const auto& e : imgs)
      if (used.count(e)) return true;
    for (const auto& e : imgs) used.insert(e);
    res.packing.push_back(c);
    return true;
  });
  res.count = BigInt(res.packing.size());
  return res;
}

ExactResult exact_deletion_number(const OrderedHypergraph& g, const OrderedMatchingPattern& h,
                                  long long budget) {
  require_edges(h);
  ExactResult res;
  if (h.m() == 1) {
    auto images = single_edge_images(g, h);
    res.witness.assign(images.begin(), images.end());
    res.lower = res.upper = BigInt(res.witness.size());
    res.exact = true;
    res.nodes = 1;
    return res;
  }

  const GreedyResult greedy = greedy_deletion_upper(g, h);
  const PackingResult root_pack = disjoint_packing_lower(g, h);

  Search search{h, budget};
  search.best = greedy.deleted;
  search.best_witness = greedy.deletions;
  if (root_pack.count < greedy.deleted) {
    std::vector<Edge> chosen;
    search.run(g, 0, {}, chosen);
  }

  res.nodes = search.nodes;
  res.budget_exhausted = search.aborted;
  res.upper = search.best;
  res.witness = search.best_witness;
  res.lower = search.aborted ? root_pack.count : search.best;
  res.exact = !search.aborted;
  return res;
}

FarnessReport farness_bounds(const OrderedHypergraph& g, const OrderedMatchingPattern& h,
                             long long exact_budget) {
  require_edges(h);
  FarnessReport rep;
  if (exact_budget > 0) {
    const ExactResult ex = exact_deletion_number(g, h, exact_budget);
    rep.lower = ex.lower;
    rep.upper = ex.upper;
    rep.exact = ex.exact;
    rep.witness = ex.witness;
  } else {
    const GreedyResult greedy = greedy_deletion_upper(g, h);
    const PackingResult pack = disjoint_packing_lower(g, h);
    rep.lower = pack.count;
    rep.upper = greedy.deleted;
    rep.exact = rep.lower == rep.upper;
    rep.witness = greedy.deletions;
  }
  rep.epsilon_lower = Rational(rep.lower) / Rational(bigint_pow(BigInt(g.n), g.s));
  return rep;
}

EpsFarVerdict is_eps_far(const FarnessReport& report, int n, int s, const Rational& eps) {
  const Rational threshold = eps * Rational(bigint_pow(BigInt(n), s));
  if (Rational(report.lower) >= threshold) return EpsFarVerdict::far;
  if (Rational(report.upper) < threshold) return EpsFarVerdict::not_far;
  return EpsFarVerdict::indeterminate;
}

}  // namespace ordmatch
