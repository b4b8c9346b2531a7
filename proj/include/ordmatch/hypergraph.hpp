#pragma once

#include <compare>
#include <cstddef>
#include <vector>

namespace ordmatch {

// Vertices are 1-based and carry the linear order of the integers.
using Vertex = int;

// An edge is a strictly increasing tuple of s vertices.
using Edge = std::vector<Vertex>;

struct EdgeHash {
  std::size_t operator()(const Edge& e) const {
    std::size_t h = 14695981039346656037ull;
    for (Vertex v : e) {
      h ^= static_cast<std::size_t>(v);
      h *= 1099511628211ull;
    }
    return h;
  }
};

// Ordered s-uniform hypergraph on vertex set {1..n}. The edge list is kept
// lexicographically sorted and duplicate-free; that is the canonical form
// used by serialization and by all deterministic iteration.
struct OrderedHypergraph {
  int n = 0;
  int s = 2;
  std::vector<Edge> edges;

  long long edge_count() const { return static_cast<long long>(edges.size()); }
  bool has_edge(const Edge& e) const;
};

// Ordered matching pattern on t vertices: pairwise vertex-disjoint edges.
// Vertices outside every edge are permitted (callers may warn on them).
struct OrderedMatchingPattern {
  int t = 0;
  int s = 2;
  std::vector<Edge> edges;

  int m() const { return static_cast<int>(edges.size()); }
  bool has_isolated_vertices() const {
    return static_cast<long long>(s) * m() < t;
  }
};

// An order-preserving embedding of a pattern: image[i] is where pattern
// vertex i+1 lands; the tuple is strictly increasing.
struct Copy {
  std::vector<Vertex> image;

  bool operator==(const Copy& other) const { return image == other.image; }
  bool operator<(const Copy& other) const { return image < other.image; }
};

// Validates, sorts each tuple, sorts the edge list, drops duplicates.
// Throws std::invalid_argument on out-of-range vertices, repeated vertices
// inside a tuple, wrong arity, or n < s or s < 2.
OrderedHypergraph build_hypergraph(int n, int s, std::vector<Edge> edges);

// Additionally requires the edges to be pairwise vertex-disjoint.
OrderedMatchingPattern validate_pattern(int t, int s, std::vector<Edge> edges);

// Total predicate: true iff c has t strictly increasing entries in [1..n]
// and every pattern edge maps onto an edge of g.
bool is_copy(const OrderedHypergraph& g, const OrderedMatchingPattern& h, const Copy& c);

// Value-semantics removal; throws if some edge of removal is not in g.
// Duplicates inside removal are tolerated (the removal is a set).
OrderedHypergraph delete_edges(const OrderedHypergraph& g, const std::vector<Edge>& removal);

}  // namespace ordmatch
