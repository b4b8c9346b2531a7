#pragma once

#include "ordmatch/hypergraph.hpp"
#include "ordmatch/numbers.hpp"

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace ordmatch {

// Every random draw goes through one generator so outputs are reproducible
// from (parameters, seed) alone; recorded in files and reports.
inline constexpr const char* kPrngName = "mt19937_64/rejection";

// Includes each increasing s-tuple independently with probability exactly
// p = num/den: one uniform draw from [0, den) via rejection sampling, accept
// iff it lands below num. den == 1 consumes no draw. Candidates are visited
// in lexicographic order. Throws unless 0 <= p <= 1 and den fits in 63 bits.
OrderedHypergraph random_binomial(int n, int s, const Rational& p, std::uint64_t seed);

OrderedHypergraph complete_hypergraph(int n, int s);

struct PlantResult {
  OrderedHypergraph graph;
  bool overlap_warning = false;  // two placements shared an edge
};

// Union of the edge images of the given placements (each an increasing
// t-tuple in [1, n]); placements may accidentally create further copies.
PlantResult planted(int n, const OrderedMatchingPattern& h, const std::vector<Copy>& placements);

struct ExperimentRecord {
  std::uint64_t seed = 0;
  BigInt copies = 0;
  BigInt max_edge_copies = 0;
  BigInt packing_lower = 0;
};

struct ExperimentSummary {
  int n = 0, s = 0, t = 0, m = 0;
  Rational p;
  std::uint64_t base_seed = 0;
  std::vector<ExperimentRecord> records;
  Rational expected;        // C(n, t) * p^m
  Rational mean;            // exact mean of observed copy counts
  Rational variance;        // unbiased sample variance, 0 when < 2 records
  bool mean_within_3se = false;  // (mean - expected)^2 * N <= 9 * variance
  Rational per_edge_bound;  // 5 * n^(t-s) * p^(m-1)
  int per_edge_ok = 0;      // records with max_edge_copies <= per_edge_bound
  std::string prng = kPrngName;
};

// Draws `seeds` graphs with seeds base_seed, base_seed+1, ... and compares
// the copy-count statistics against their exact expectations. All summary
// arithmetic is rational; the 3-standard-error test is evaluated in its
// squared form so no square root is ever taken.
ExperimentSummary proposition_experiment(int n, const OrderedMatchingPattern& h, const Rational& p,
                                         int seeds, std::uint64_t base_seed);

// CSV: one comment line naming the generator, a header, one row per seed.
void write_experiment_csv(const ExperimentSummary& summary, std::ostream& out);

}  // namespace ordmatch
