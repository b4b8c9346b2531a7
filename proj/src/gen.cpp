#include "ordmatch/gen.hpp"

#include "ordmatch/embed.hpp"
#include "ordmatch/farness.hpp"

#include <limits>
#include <ostream>
#include <random>
#include <set>
#include <stdexcept>

namespace ordmatch {

namespace {

// Visits all increasing s-tuples of [1, n] in lexicographic order.
template <typename F>
void for_each_tuple(int n, int s, F&& fn) {
  if (s > n) return;
  std::vector<Vertex> tup(s);
  for (int i = 0; i < s; ++i) tup[i] = i + 1;
  for (;;) {
    fn(tup);
    int i = s - 1;
    while (i >= 0 && tup[i] == n - (s - 1 - i)) --i;
    if (i < 0) break;
    ++tup[i];
    for (int j = i + 1; j < s; ++j) tup[j] = tup[j - 1] + 1;
  }
}

// Uniform draw from [0, den) without modulo bias: reject the partial block
// at the top of the 64-bit range.
std::uint64_t bounded(std::mt19937_64& rng, std::uint64_t den) {
  const std::uint64_t max = std::numeric_limits<std::uint64_t>::max();
  const std::uint64_t wrap = (max % den + 1) % den;  // 2^64 mod den
  for (;;) {
    const std::uint64_t x = rng();
    if (wrap == 0 || x < max - wrap + 1) return x % den;
  }
}

}  // namespace

OrderedHypergraph random_binomial(int n, int s, const Rational& p, std::uint64_t seed) {
  if (p < 0 || p > 1) throw std::invalid_argument("random_binomial: p must lie in [0, 1]");
  const BigInt num_big = boost::multiprecision::numerator(p);
  const BigInt den_big = boost::multiprecision::denominator(p);
  if (den_big > (BigInt(1) << 63))
    throw std::invalid_argument("random_binomial: denominator of p exceeds 63 bits");
  const auto num = num_big.convert_to<std::uint64_t>();
  const auto den = den_big.convert_to<std::uint64_t>();

  std::mt19937_64 rng(seed);
  std::vector<Edge> edges;
  for_each_tuple(n, s, [&](const std::vector<Vertex>& tup) {
    const bool accept = den == 1 ? num == 1 : bounded(rng, den) < num;
    if (accept) edges.push_back(tup);
  });
  return build_hypergraph(n, s, std::move(edges));
}

OrderedHypergraph complete_hypergraph(int n, int s) {
  std::vector<Edge> edges;
  for_each_tuple(n, s, [&](const std::vector<Vertex>& tup) { edges.push_back(tup); });
  return build_hypergraph(n, s, std::move(edges));
}

PlantResult planted(int n, const OrderedMatchingPattern& h, const std::vector<Copy>& placements) {
  std::set<Edge> edges;
  bool overlap = false;
  for (const Copy& c : placements) {
    if (static_cast<int>(c.image.size()) != h.t)
      throw std::invalid_argument("planted: placement arity mismatch");
    for (std::size_t i = 0; i < c.image.size(); ++i) {
      if (c.image[i] < 1 || c.image[i] > n)
        throw std::invalid_argument("planted: placement vertex out of range");
      if (i > 0 && c.image[i - 1] >= c.image[i])
        throw std::invalid_argument("planted: placement not increasing");
    }
    for (const auto& pe : h.edges) {
      Edge e;
      for (Vertex v : pe) e.push_back(c.image[v - 1]);
      if (!edges.insert(std::move(e)).second) overlap = true;
    }
  }
  PlantResult res;
  res.graph = build_hypergraph(n, h.s, {edges.begin(), edges.end()});
  res.overlap_warning = overlap;
  return res;
}

ExperimentSummary proposition_experiment(int n, const OrderedMatchingPattern& h, const Rational& p,
                                         int seeds, std::uint64_t base_seed) {
  if (seeds < 1) throw std::invalid_argument("proposition_experiment: need at least one seed");
  ExperimentSummary sum;
  sum.n = n;
  sum.s = h.s;
  sum.t = h.t;
  sum.m = h.m();
  sum.p = p;
  sum.base_seed = base_seed;
  sum.expected = Rational(binomial(n, h.t)) * rational_pow(p, h.m());
  sum.per_edge_bound = 5 * rational_pow(Rational(n), h.t - h.s) * rational_pow(p, h.m() - 1);

  BigInt copies_sum = 0;
  for (int i = 0; i < seeds; ++i) {
    ExperimentRecord rec;
    rec.seed = base_seed + static_cast<std::uint64_t>(i);
    const OrderedHypergraph g = random_binomial(n, h.s, p, rec.seed);
    rec.copies = count_copies(g, h).total;
    for (const auto& [e, c] : per_edge_copy_counts(g, h))
      rec.max_edge_copies = std::max(rec.max_edge_copies, c);
    rec.packing_lower = disjoint_packing_lower(g, h).count;
    copies_sum += rec.copies;
    if (Rational(rec.max_edge_copies) <= sum.per_edge_bound) sum.per_edge_ok++;
    sum.records.push_back(std::move(rec));
  }

  const int N = seeds;
  sum.mean = Rational(copies_sum) / N;
  if (N >= 2) {
    Rational sq = 0;
    for (const auto& rec : sum.records) {
      const Rational d = Rational(rec.copies) - sum.mean;
      sq += d * d;
    }
    sum.variance = sq / (N - 1);
  }
  const Rational dev = sum.mean - sum.expected;
  sum.mean_within_3se = dev * dev * N <= 9 * sum.variance;
  return sum;
}

void write_experiment_csv(const ExperimentSummary& summary, std::ostream& out) {
  out << "# prng=" << summary.prng << " base_seed=" << summary.base_seed << "\n";
  out << "seed,n,s,t,m,p,copies,expected,max_edge_copies,packing_lower\n";
  for (const auto& rec : summary.records)
    out << rec.seed << ',' << summary.n << ',' << summary.s << ',' << summary.t << ','
        << summary.m << ',' << to_fraction(summary.p) << ',' << rec.copies << ','
        << to_fraction(summary.expected) << ',' << rec.max_edge_copies << ','
        << rec.packing_lower << "\n";
}

}  // namespace ordmatch
