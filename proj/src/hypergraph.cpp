#include "ordmatch/hypergraph.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>
#include <unordered_set>

namespace ordmatch {

namespace {

std::vector<Edge> normalize_edges(int n, int s, std::vector<Edge> edges, const char* what) {
  for (Edge& e : edges) {
    if (static_cast<int>(e.size()) != s) {
      throw std::invalid_argument(std::string(what) + ": edge arity " +
                                  std::to_string(e.size()) + " does not match s=" +
                                  std::to_string(s));
    }
    std::sort(e.begin(), e.end());
    for (size_t i = 0; i < e.size(); ++i) {
      if (e[i] < 1 || e[i] > n) {
        throw std::invalid_argument(std::string(what) + ": vertex " + std::to_string(e[i]) +
                                    " out of range [1," + std::to_string(n) + "]");
      }
      if (i > 0 && e[i] == e[i - 1]) {
        throw std::invalid_argument(std::string(what) + ": repeated vertex " +
                                    std::to_string(e[i]) + " inside an edge");
      }
    }
  }
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  return edges;
}

}  // namespace

bool OrderedHypergraph::has_edge(const Edge& e) const {
  return std::binary_search(edges.begin(), edges.end(), e);
}

OrderedHypergraph build_hypergraph(int n, int s, std::vector<Edge> edges) {
  if (s < 2) throw std::invalid_argument("hypergraph: s must be at least 2");
  if (n < s) throw std::invalid_argument("hypergraph: n must be at least s");
  OrderedHypergraph g;
  g.n = n;
  g.s = s;
  g.edges = normalize_edges(n, s, std::move(edges), "hypergraph");
  return g;
}

OrderedMatchingPattern validate_pattern(int t, int s, std::vector<Edge> edges) {
  if (s < 2) throw std::invalid_argument("pattern: s must be at least 2");
  if (t < s) throw std::invalid_argument("pattern: t must be at least s");
  OrderedMatchingPattern h;
  h.t = t;
  h.s = s;
  h.edges = normalize_edges(t, s, std::move(edges), "pattern");
  std::unordered_set<Vertex> seen;
  for (const Edge& e : h.edges) {
    for (Vertex v : e) {
      if (!seen.insert(v).second) {
        throw std::invalid_argument("pattern: vertex " + std::to_string(v) +
                                    " appears in two edges; edges must be disjoint");
      }
    }
  }
  return h;
}

bool is_copy(const OrderedHypergraph& g, const OrderedMatchingPattern& h, const Copy& c) {
  if (static_cast<int>(c.image.size()) != h.t) return false;
  if (g.s != h.s) return false;
  for (size_t i = 0; i < c.image.size(); ++i) {
    if (c.image[i] < 1 || c.image[i] > g.n) return false;
    if (i > 0 && c.image[i] <= c.image[i - 1]) return false;
  }
  Edge img(static_cast<size_t>(h.s));
  for (const Edge& e : h.edges) {
    for (size_t j = 0; j < e.size(); ++j) {
      img[j] = c.image[static_cast<size_t>(e[j]) - 1];
    }
    // e is increasing and the image tuple is increasing, so img is sorted.
    if (!g.has_edge(img)) return false;
  }
  return true;
}

OrderedHypergraph delete_edges(const OrderedHypergraph& g, const std::vector<Edge>& removal) {
  std::unordered_set<Edge, EdgeHash> gone;
  for (const Edge& e : removal) {
    if (!g.has_edge(e)) {
      std::string repr;
      for (Vertex v : e) repr += std::to_string(v) + " ";
      throw std::invalid_argument("delete_edges: edge [ " + repr + "] is not present");
    }
    gone.insert(e);
  }
  OrderedHypergraph out;
  out.n = g.n;
  out.s = g.s;
  out.edges.reserve(g.edges.size() - gone.size());
  for (const Edge& e : g.edges) {
    if (!gone.count(e)) out.edges.push_back(e);
  }
  return out;
}

}  // namespace ordmatch
