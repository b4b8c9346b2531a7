#pragma once

#include "ordmatch/hypergraph.hpp"
#include "ordmatch/numbers.hpp"

#include <functional>
#include <map>
#include <optional>
#include <vector>

namespace ordmatch {

struct CopyCount {
  BigInt total = 0;
  bool truncated = false;  // set when a caller-supplied cap stopped the walk
};

// Visits copies in lexicographic order of the image tuple, each exactly once.
// The visitor returns false to stop early. Returns true iff the walk ran to
// completion (i.e. was not stopped by the visitor).
bool for_each_copy(const OrderedHypergraph& g, const OrderedMatchingPattern& h,
                   const std::function<bool(const Copy&)>& visit);

// Materializes copies in lexicographic order; stops after `cap` when given.
std::vector<Copy> enumerate_copies(const OrderedHypergraph& g, const OrderedMatchingPattern& h,
                                   std::optional<long long> cap = std::nullopt);

// Exact count via ordered backtracking. `threads` > 1 partitions the search
// on the image of pattern vertex 1; the result is independent of `threads`.
CopyCount count_copies(const OrderedHypergraph& g, const OrderedMatchingPattern& h,
                       int threads = 1);

// Like count_copies but stops counting at `cap` (sets truncated).
CopyCount count_copies_capped(const OrderedHypergraph& g, const OrderedMatchingPattern& h,
                              long long cap);

// Independent oracle: tests every increasing t-tuple. Throws if C(n, t)
// exceeds `subset_bound`.
CopyCount count_copies_bruteforce(const OrderedHypergraph& g, const OrderedMatchingPattern& h,
                                  const BigInt& subset_bound = BigInt(10'000'000));

// Number of copies whose edge image contains e; throws if e is not in g.
BigInt copies_through_edge(const OrderedHypergraph& g, const OrderedMatchingPattern& h,
                           const Edge& e);

// One enumeration pass; edges never used by a copy are absent from the map.
std::map<Edge, BigInt> per_edge_copy_counts(const OrderedHypergraph& g,
                                            const OrderedMatchingPattern& h);

}  // namespace ordmatch
