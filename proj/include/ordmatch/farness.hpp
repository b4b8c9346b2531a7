#pragma once

#include "ordmatch/embed.hpp"
#include "ordmatch/hypergraph.hpp"
#include "ordmatch/numbers.hpp"

#include <vector>

namespace ordmatch {

// Upper bound on the deletion number: repeatedly delete the edge carrying the
// most copies (lex-smallest among ties) until the graph is pattern-free. The
// deletion list is a certified witness. Single-edge patterns are solved
// exactly: each copy pins exactly one edge, so the distinct image edges form
// the unique minimum deletion set.
struct GreedyResult {
  BigInt deleted = 0;
  std::vector<Edge> deletions;
};
GreedyResult greedy_deletion_upper(const OrderedHypergraph& g, const OrderedMatchingPattern& h);

// Lower bound: greedy edge-disjoint packing of copies in lexicographic order.
// Any deletion set must remove at least one edge per packed copy.
struct PackingResult {
  BigInt count = 0;
  std::vector<Copy> packing;
};
PackingResult disjoint_packing_lower(const OrderedHypergraph& g, const OrderedMatchingPattern& h);

// Branch-and-bound for the exact deletion number (minimum hitting set over
// the copies' edge sets). Branches on the copy through the rarest live edge;
// sibling branches forbid previously tried edges; packing bound prunes; the
// greedy result seeds the incumbent. `budget` caps the number of search
// nodes: when exhausted the result degrades to certified bounds.
struct ExactResult {
  BigInt lower = 0;
  BigInt upper = 0;
  bool exact = false;           // lower == upper proven within budget
  std::vector<Edge> witness;    // deletion set of size `upper`
  long long nodes = 0;
  bool budget_exhausted = false;
};
ExactResult exact_deletion_number(const OrderedHypergraph& g, const OrderedMatchingPattern& h,
                                  long long budget = 200000);

struct FarnessReport {
  BigInt lower = 0;            // no deletion set smaller than this exists
  BigInt upper = 0;            // witnessed deletion set size
  bool exact = false;
  Rational epsilon_lower = 0;  // lower / n^s
  std::vector<Edge> witness;
};

// Packing + greedy bounds; pass a budget > 0 to refine with branch-and-bound.
FarnessReport farness_bounds(const OrderedHypergraph& g, const OrderedMatchingPattern& h,
                             long long exact_budget = 0);

enum class EpsFarVerdict { far, not_far, indeterminate };

// Compares the certified bounds against the eps * n^s deletion threshold.
// far: even the lower bound meets the threshold. not_far: the witnessed
// upper bound stays below it. Otherwise the bounds straddle the threshold.
EpsFarVerdict is_eps_far(const FarnessReport& report, int n, int s, const Rational& eps);

}  // namespace ordmatch
