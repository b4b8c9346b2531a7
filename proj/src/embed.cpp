#include "ordmatch/embed.hpp"

#include <algorithm>
#include <stdexcept>
#include <thread>
#include <unordered_map>

namespace ordmatch {

namespace {

// Static description of the pattern from the walker's point of view: pattern
// vertices are assigned left to right, and an edge is tested the moment its
// rightmost vertex receives an image.
struct Plan {
  int t = 0;
  int s = 0;
  std::vector<int> completes;           // [1..t] edge finished at this vertex, or -1
  std::vector<std::vector<int>> others;  // per edge: its vertices except the last
  std::vector<char> suffix_free;         // [1..t+1] no vertex >= a lies in any edge
};

Plan make_plan(const OrderedMatchingPattern& h) {
  Plan plan;
  plan.t = h.t;
  plan.s = h.s;
  plan.completes.assign(static_cast<size_t>(h.t) + 1, -1);
  plan.others.resize(h.edges.size());
  std::vector<char> in_edge(static_cast<size_t>(h.t) + 1, 0);
  for (size_t f = 0; f < h.edges.size(); ++f) {
    const Edge& e = h.edges[f];
    plan.completes[static_cast<size_t>(e.back())] = static_cast<int>(f);
    plan.others[f].assign(e.begin(), e.end() - 1);
    for (Vertex v : e) in_edge[static_cast<size_t>(v)] = 1;
  }
  plan.suffix_free.assign(static_cast<size_t>(h.t) + 2, 1);
  for (int a = h.t; a >= 1; --a) {
    plan.suffix_free[static_cast<size_t>(a)] =
        plan.suffix_free[static_cast<size_t>(a) + 1] && !in_edge[static_cast<size_t>(a)];
  }
  return plan;
}

// Maps each (s-1)-prefix of a host edge to the sorted list of last vertices.
// Edge lookups during the walk complete in one hash probe plus a scan of the
// tail list, which is the hot path of the whole counter.
struct TailIndex {
  std::unordered_map<Edge, std::vector<Vertex>, EdgeHash> tails;

  static TailIndex build(const OrderedHypergraph& g) {
    TailIndex idx;
    idx.tails.reserve(g.edges.size());
    Edge prefix;
    for (const Edge& e : g.edges) {
      prefix.assign(e.begin(), e.end() - 1);
      idx.tails[prefix].push_back(e.back());  // sorted: edges arrive in lex order
    }
    return idx;
  }

  const std::vector<Vertex>* find(const Edge& prefix) const {
    auto it = tails.find(prefix);
    return it == tails.end() ? nullptr : &it->second;
  }
};

struct Walker {
  const OrderedHypergraph& g;
  const Plan& plan;
  const TailIndex& index;

  std::vector<Vertex> img;  // 1-based images of pattern vertices
  Edge prefix_buf;
  BigInt count = 0;
  long long cap = -1;  // >= 0 enables capped counting
  bool truncated = false;
  const std::function<bool(const Copy&)>* visitor = nullptr;
  bool stopped = false;

  Walker(const OrderedHypergraph& host, const Plan& p, const TailIndex& idx)
      : g(host), plan(p), index(idx), img(static_cast<size_t>(p.t) + 1, 0) {
    prefix_buf.reserve(static_cast<size_t>(p.s));
  }

  bool done() const { return stopped || truncated; }

  void add(const BigInt& delta) {
    count += delta;
    if (cap >= 0 && count >= cap) {
      count = cap;
      truncated = true;
    }
  }

  void emit() {
    if (visitor) {
      Copy c;
      c.image.assign(img.begin() + 1, img.end());
      if (!(*visitor)(c)) {
        stopped = true;
        return;
      }
    }
    add(1);
  }

  void walk(int a, Vertex prev) {
    if (done()) return;
    if (a > plan.t) {
      emit();
      return;
    }
    if (!visitor && plan.suffix_free[static_cast<size_t>(a)]) {
      // Every remaining pattern vertex is isolated: any increasing completion
      // works, so close the subtree combinatorially.
      add(binomial(g.n - prev, plan.t - a + 1));
      return;
    }
    const Vertex hi = static_cast<Vertex>(g.n - (plan.t - a));
    const int fe = plan.completes[static_cast<size_t>(a)];
    if (fe >= 0) {
      prefix_buf.clear();
      for (int other : plan.others[static_cast<size_t>(fe)]) {
        prefix_buf.push_back(img[static_cast<size_t>(other)]);
      }
      const std::vector<Vertex>* tails = index.find(prefix_buf);
      if (!tails) return;
      auto it = std::upper_bound(tails->begin(), tails->end(), prev);
      for (; it != tails->end() && *it <= hi; ++it) {
        img[static_cast<size_t>(a)] = *it;
        walk(a + 1, *it);
        if (done()) return;
      }
    } else {
      for (Vertex v = prev + 1; v <= hi; ++v) {
        img[static_cast<size_t>(a)] = v;
        walk(a + 1, v);
        if (done()) return;
      }
    }
  }
};

void check_compatible(const OrderedHypergraph& g, const OrderedMatchingPattern& h) {
  if (g.s != h.s) {
    throw std::invalid_argument("host and pattern have different arity s");
  }
}

}  // namespace

bool for_each_copy(const OrderedHypergraph& g, const OrderedMatchingPattern& h,
                   const std::function<bool(const Copy&)>& visit) {
  check_compatible(g, h);
  const Plan plan = make_plan(h);
  const TailIndex index = TailIndex::build(g);
  Walker w(g, plan, index);
  w.visitor = &visit;
  w.walk(1, 0);
  return !w.stopped;
}

std::vector<Copy> enumerate_copies(const OrderedHypergraph& g, const OrderedMatchingPattern& h,
                                   std::optional<long long> cap) {
  std::vector<Copy> out;
  for_each_copy(g, h, [&](const Copy& c) {
    out.push_back(c);
    return !cap || static_cast<long long>(out.size()) < *cap;
  });
  return out;
}

CopyCount count_copies(const OrderedHypergraph& g, const OrderedMatchingPattern& h,
                       int threads) {
  check_compatible(g, h);
  const Plan plan = make_plan(h);
  const TailIndex index = TailIndex::build(g);
  CopyCount result;
  if (threads <= 1 || plan.suffix_free[1]) {
    Walker w(g, plan, index);
    w.walk(1, 0);
    result.total = w.count;
    return result;
  }
  // Pattern vertex 1 never completes an edge (s >= 2), so its image can be
  // partitioned round-robin across workers; the per-worker subtotals do not
  // depend on scheduling and neither does their sum.
  std::vector<BigInt> partial(static_cast<size_t>(threads));
  std::vector<std::thread> pool;
  pool.reserve(static_cast<size_t>(threads));
  for (int tid = 0; tid < threads; ++tid) {
    pool.emplace_back([&, tid]() {
      Walker w(g, plan, index);
      const Vertex hi = static_cast<Vertex>(g.n - (plan.t - 1));
      for (Vertex v1 = static_cast<Vertex>(tid + 1); v1 <= hi;
           v1 = static_cast<Vertex>(v1 + threads)) {
        w.img[1] = v1;
        w.walk(2, v1);
      }
      partial[static_cast<size_t>(tid)] = w.count;
    });
  }
  for (auto& th : pool) th.join();
  for (const BigInt& p : partial) result.total += p;
  return result;
}

CopyCount count_copies_capped(const OrderedHypergraph& g, const OrderedMatchingPattern& h,
                              long long cap) {
  check_compatible(g, h);
  if (cap < 0) throw std::invalid_argument("cap must be non-negative");
  const Plan plan = make_plan(h);
  const TailIndex index = TailIndex::build(g);
  Walker w(g, plan, index);
  w.cap = cap;
  w.walk(1, 0);
  CopyCount result;
  result.total = w.count;
  result.truncated = w.truncated;
  return result;
}

CopyCount count_copies_bruteforce(const OrderedHypergraph& g, const OrderedMatchingPattern& h,
                                  const BigInt& subset_bound) {
  check_compatible(g, h);
  if (binomial(g.n, h.t) > subset_bound) {
    throw std::invalid_argument("bruteforce: C(n,t) exceeds the configured bound");
  }
  CopyCount result;
  if (h.t > g.n) return result;
  Copy c;
  c.image.resize(static_cast<size_t>(h.t));
  for (int i = 0; i < h.t; ++i) c.image[static_cast<size_t>(i)] = i + 1;
  const int t = h.t;
  while (true) {
    if (is_copy(g, h, c)) result.total += 1;
    // next increasing t-tuple over [1..n]
    int i = t - 1;
    while (i >= 0 && c.image[static_cast<size_t>(i)] == g.n - (t - 1 - i)) --i;
    if (i < 0) break;
    ++c.image[static_cast<size_t>(i)];
    for (int j = i + 1; j < t; ++j) {
      c.image[static_cast<size_t>(j)] = c.image[static_cast<size_t>(j - 1)] + 1;
    }
  }
  return result;
}

std::map<Edge, BigInt> per_edge_copy_counts(const OrderedHypergraph& g,
                                            const OrderedMatchingPattern& h) {
  std::map<Edge, BigInt> counts;
  Edge img(static_cast<size_t>(h.s));
  for_each_copy(g, h, [&](const Copy& c) {
    for (const Edge& e : h.edges) {
      for (size_t j = 0; j < e.size(); ++j) {
        img[j] = c.image[static_cast<size_t>(e[j]) - 1];
      }
      counts[img] += 1;
    }
    return true;
  });
  return counts;
}

BigInt copies_through_edge(const OrderedHypergraph& g, const OrderedMatchingPattern& h,
                           const Edge& e) {
  if (!g.has_edge(e)) {
    throw std::invalid_argument("copies_through_edge: edge is not in the hypergraph");
  }
  BigInt count = 0;
  Edge img(static_cast<size_t>(h.s));
  for_each_copy(g, h, [&](const Copy& c) {
    for (const Edge& f : h.edges) {
      for (size_t j = 0; j < f.size(); ++j) {
        img[j] = c.image[static_cast<size_t>(f[j]) - 1];
      }
      if (img == e) {
        count += 1;
        break;  // pattern edges are disjoint: at most one maps onto e
      }
    }
    return true;
  });
  return count;
}

}  // namespace ordmatch
