#include "ordmatch/amplify.hpp"

#include <algorithm>
#include <set>
#include <sstream>
#include <stdexcept>

namespace ordmatch {

namespace {

// Sorted insert of w into a sorted (s-1)-tuple.
std::vector<Vertex> edge_with(const std::vector<Vertex>& tuple, Vertex w) {
  std::vector<Vertex> e = tuple;
  e.insert(std::upper_bound(e.begin(), e.end(), w), w);
  return e;
}

void erase_if_not(std::vector<Vertex>& pool, bool keep_left, Vertex w) {
  pool.erase(std::remove_if(pool.begin(), pool.end(),
                            [&](Vertex v) { return keep_left ? v >= w : v <= w; }),
             pool.end());
}

}  // namespace

BigInt ReplacementFamily::combinations() const {
  BigInt prod = 1;
  for (const auto& slot : slots) prod *= BigInt(slot.pool.size());
  return prod;
}

bool ReplacementFamily::ordered() const {
  for (std::size_t i = 0; i + 1 < slots.size(); ++i) {
    const auto& a = slots[i].pool;
    const auto& b = slots[i + 1].pool;
    if (a.empty() || b.empty()) continue;  // empty pool zeroes the product instead
    if (!(a.back() < b.front())) return false;
  }
  return true;
}

ReplacementFamily replacement_sets(const CleaningTrace& trace, int step, const Copy& copy,
                                   const OrderedMatchingPattern& pattern) {
  const IntervalScheme& scheme = trace.scheme;
  if (step < 1 || step > scheme.k) throw std::invalid_argument("replacement_sets: step out of range");
  const OrderedHypergraph& stage = trace.stage(step);
  if (!is_copy(stage, pattern, copy))
    throw std::invalid_argument("replacement_sets: not a copy in the requested stage");

  // Positions of the copy's image inside the step's top interval, in order.
  std::vector<int> positions;
  for (int pos = 0; pos < static_cast<int>(copy.image.size()); ++pos)
    if (scheme.top_index_of(copy.image[pos]) == step) positions.push_back(pos);

  ReplacementFamily fam;
  fam.step = step;
  fam.base = copy;
  const int m = static_cast<int>(positions.size());

  for (int i = 1; i <= m; ++i) {
    const int pos = positions[i - 1];
    const Vertex w = copy.image[pos];

    ReplacementSlot slot;
    slot.image_pos = pos;
    slot.w = w;
    slot.level_interval = scheme.interval_of(w, i);
    slot.threshold = scheme.threshold(slot.level_interval);

    // The pattern vertex at this position (1-based) lies in at most one edge.
    const int pv = pos + 1;
    const std::vector<Vertex>* pedge = nullptr;
    for (const auto& e : pattern.edges)
      if (std::binary_search(e.begin(), e.end(), pv)) {
        pedge = &e;
        break;
      }

    if (pedge == nullptr) {
      slot.edge_incident = false;
      slot.pool = {w};  // isolated pattern vertex: nothing to re-route, keep w
    } else {
      slot.edge_incident = true;
      for (Vertex q : *pedge)
        if (q != pv) slot.incident_tuple.push_back(copy.image[q - 1]);
      for (Vertex u : slot.incident_tuple)
        if (scheme.top_index_of(u) == step)
          throw std::invalid_argument(
              "replacement_sets: pattern edge maps two vertices into the top interval");
      const IntervalRef ref = scheme.ref_of(w, i);
      slot.pool = trace.lset_at(step, slot.incident_tuple, ref);
      if (i < m) {
        const Interval next = scheme.interval_of(w, i + 1);
        slot.pool.erase(std::remove_if(slot.pool.begin(), slot.pool.end(),
                                       [&](Vertex v) { return next.contains(v); }),
                        slot.pool.end());
      }
    }
    fam.slots.push_back(std::move(slot));
  }

  // Fixed singletons split the line: trim neighbouring pools so every product
  // choice stays strictly increasing around each fixed w.
  for (std::size_t i = 0; i < fam.slots.size(); ++i) {
    if (fam.slots[i].edge_incident) continue;
    const Vertex w = fam.slots[i].w;
    if (i > 0) erase_if_not(fam.slots[i - 1].pool, /*keep_left=*/true, w);
    if (i + 1 < fam.slots.size()) erase_if_not(fam.slots[i + 1].pool, /*keep_left=*/false, w);
  }
  return fam;
}

FamilyCheck check_replacement_family(const CleaningTrace& trace, int step, const Copy& copy,
                                     const OrderedMatchingPattern& pattern,
                                     long long product_cap) {
  ReplacementFamily fam = replacement_sets(trace, step, copy, pattern);
  const IntervalScheme& scheme = trace.scheme;
  const OrderedHypergraph& prev = trace.stage(step - 1);

  FamilyCheck chk;
  chk.step = step;
  chk.m = fam.m();
  if (chk.m == 0) {
    chk.vacuous = true;
    return chk;
  }

  {  // (a) setwise ordering of consecutive pools
    FamilyCheckItem item;
    item.name = "pools ordered";
    item.pass = fam.ordered();
    std::ostringstream os;
    for (const auto& slot : fam.slots)
      os << " [" << (slot.pool.empty() ? 0 : slot.pool.front()) << ".."
         << (slot.pool.empty() ? 0 : slot.pool.back()) << "]#" << slot.pool.size();
    item.detail = "pool spans:" + os.str();
    chk.ordering_pass = item.pass;
    chk.items.push_back(std::move(item));
  }

  // (b) size lower bounds for edge-incident pools
  for (int i = 0; i < chk.m; ++i) {
    const auto& slot = fam.slots[i];
    if (!slot.edge_incident) continue;
    const Rational size(static_cast<long long>(slot.pool.size()));
    const Rational half_beta_j = scheme.beta / 2 * slot.level_interval.size();
    FamilyCheckItem item;
    std::ostringstream os;
    if (scheme.mode == SchemeMode::exact) {
      const Rational delta_n = scheme.delta * scheme.n;
      item.pass = size >= half_beta_j && size >= delta_n;
      os << "|pool " << (i + 1) << "| = " << size << " >= " << to_fraction(half_beta_j)
         << " and >= " << to_fraction(delta_n);
    } else {
      item.pass = size >= half_beta_j - 1;
      os << "|pool " << (i + 1) << "| = " << size << " >= " << to_fraction(half_beta_j) << " - 1";
    }
    item.name = "pool " + std::to_string(i + 1) + " size";
    item.detail = os.str();
    if (!item.pass) chk.size_pass = false;
    chk.items.push_back(std::move(item));
  }

  // (c) membership: every pool element closes its incident tuple into an edge
  // of the previous stage.
  for (int i = 0; i < chk.m; ++i) {
    const auto& slot = fam.slots[i];
    if (!slot.edge_incident) continue;
    FamilyCheckItem item;
    item.name = "pool " + std::to_string(i + 1) + " membership";
    long long bad = 0;
    for (Vertex v : slot.pool)
      if (!prev.has_edge(edge_with(slot.incident_tuple, v))) ++bad;
    item.pass = bad == 0;
    item.detail = std::to_string(slot.pool.size()) + " elements, " + std::to_string(bad) + " bad";
    if (!item.pass) chk.membership_pass = false;
    chk.items.push_back(std::move(item));
  }

  // Full product tuples, evenly spaced across the combination space.
  const BigInt total = fam.combinations();
  if (total > 0 && product_cap > 0) {
    const BigInt want = std::min(BigInt(product_cap), total);
    const BigInt stride = total / want;
    long long checked = 0, bad = 0;
    for (BigInt c = 0; c < want; ++c) {
      BigInt idx = c * stride;
      Copy cand = fam.base;
      for (int i = chk.m - 1; i >= 0; --i) {
        const auto& slot = fam.slots[i];
        const BigInt sz(slot.pool.size());
        const auto digit = static_cast<std::size_t>(idx % sz);
        idx /= sz;
        cand.image[slot.image_pos] = slot.pool[digit];
      }
      if (!is_copy(prev, pattern, cand)) ++bad;
      ++checked;
    }
    chk.product_tuples_checked = checked;
    FamilyCheckItem item;
    item.name = "product tuples valid";
    item.pass = bad == 0;
    item.detail = std::to_string(checked) + " sampled, " + std::to_string(bad) + " invalid";
    if (!item.pass) chk.membership_pass = false;
    chk.items.push_back(std::move(item));
  }
  return chk;
}

Expansion expand_copy(const CleaningTrace& trace, int step, const Copy& copy,
                      const OrderedMatchingPattern& pattern, long long cap) {
  ReplacementFamily fam = replacement_sets(trace, step, copy, pattern);
  if (!fam.ordered())
    throw std::runtime_error("expand_copy: replacement pools are not setwise ordered");
  const OrderedHypergraph& prev = trace.stage(step - 1);
  if (cap < 0) cap = 0;

  Expansion ex;
  for (const auto& slot : fam.slots) ex.factors.push_back(static_cast<long long>(slot.pool.size()));
  ex.total = fam.combinations();

  const int m = fam.m();
  if (m == 0) {
    if (cap >= 1) {
      if (!is_copy(prev, pattern, copy))
        throw std::runtime_error("expand_copy: copy not present in previous stage");
      ex.copies.push_back(copy);
    }
    ex.complete = !ex.copies.empty();
    return ex;
  }
  if (ex.total == 0) {
    ex.complete = true;
    return ex;
  }

  std::vector<std::size_t> idx(static_cast<std::size_t>(m), 0);
  while (static_cast<long long>(ex.copies.size()) < cap) {
    Copy cand = fam.base;
    for (int i = 0; i < m; ++i) cand.image[fam.slots[i].image_pos] = fam.slots[i].pool[idx[i]];
    if (!is_copy(prev, pattern, cand))
      throw std::runtime_error("expand_copy: constructed copy invalid in previous stage");
    ex.copies.push_back(std::move(cand));
    // Odometer, rightmost fastest: yields lexicographic order of choices.
    int i = m - 1;
    while (i >= 0) {
      if (++idx[i] < fam.slots[i].pool.size()) break;
      idx[i] = 0;
      --i;
    }
    if (i < 0) break;
  }
  ex.complete = BigInt(ex.copies.size()) == ex.total;
  return ex;
}

AmplificationCertificate reconstruct_all(const CleaningTrace& trace, const Copy& base,
                                         const OrderedMatchingPattern& pattern, long long cap,
                                         int sample_size) {
  const IntervalScheme& scheme = trace.scheme;
  if (cap < 1) throw std::invalid_argument("reconstruct_all: cap must be at least 1");
  if (!is_copy(trace.stage(scheme.k), pattern, base))
    throw std::invalid_argument("reconstruct_all: base is not a copy in the final stage");

  AmplificationCertificate cert;
  cert.base = base;
  cert.m_per_level.assign(scheme.k, 0);
  for (Vertex v : base.image) cert.m_per_level[scheme.top_index_of(v) - 1]++;

  std::vector<Copy> family = {base};
  BigInt total = 1;
  for (int step = scheme.k; step >= 1; --step) {
    LevelSummary sum;
    sum.step = step;
    sum.m = cert.m_per_level[step - 1];
    sum.parents_expanded = static_cast<long long>(family.size());

    std::vector<Copy> next;
    BigInt next_total = 0;
    bool first = true;
    for (const Copy& parent : family) {
      const long long room = cap - static_cast<long long>(next.size());
      Expansion ex = expand_copy(trace, step, parent, pattern, room);
      next_total += ex.total;
      if (first) {
        sum.spine_factors = ex.factors;
        sum.min_factor = ex.total;
        sum.max_factor = ex.total;
        first = false;
      } else {
        sum.min_factor = std::min(sum.min_factor, ex.total);
        sum.max_factor = std::max(sum.max_factor, ex.total);
      }
      for (auto& c : ex.copies) next.push_back(std::move(c));
    }
    sum.level_total = next_total;
    if (BigInt(next.size()) != next_total) cert.exact = false;
    family = std::move(next);
    total = next_total;
    cert.levels.push_back(std::move(sum));
  }

  cert.certified_total = total;
  cert.copies = std::move(family);

  cert.all_valid_in_g0 = true;
  const OrderedHypergraph& g0 = trace.stage(0);
  for (const Copy& c : cert.copies)
    if (!is_copy(g0, pattern, c)) {
      cert.all_valid_in_g0 = false;
      break;
    }
  std::set<Copy> uniq(cert.copies.begin(), cert.copies.end());
  cert.all_distinct = uniq.size() == cert.copies.size();

  if (sample_size > 0 && !cert.copies.empty()) {
    const std::size_t count = std::min<std::size_t>(sample_size, cert.copies.size());
    for (std::size_t i = 0; i < count; ++i)
      cert.sample.push_back(cert.copies[i * cert.copies.size() / count]);
  }
  return cert;
}

}  // namespace ordmatch
