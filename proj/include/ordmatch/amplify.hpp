#pragma once

#include "ordmatch/cleaning.hpp"
#include "ordmatch/embed.hpp"
#include "ordmatch/hypergraph.hpp"
#include "ordmatch/numbers.hpp"

#include <string>
#include <vector>

namespace ordmatch {

// One replaceable position of a copy inside the step's top interval. Rank i
// (1-based, by increasing w) uses the level-i interval of w: the stored left
// set there, minus the level-(i+1) interval of w for every rank but the
// last. Isolated pattern vertices have no incident edge to re-route, so they
// stay fixed: their pool is the singleton {w}.
struct ReplacementSlot {
  int image_pos = 0;  // 0-based index into the copy's image
  Vertex w = 0;
  bool edge_incident = false;
  std::vector<Vertex> incident_tuple;  // images of the edge's other vertices
  Interval level_interval;             // J_i(w)
  long long threshold = 0;             // B of that interval
  std::vector<Vertex> pool;            // sorted candidate replacements
};

struct ReplacementFamily {
  int step = 0;
  Copy base;
  std::vector<ReplacementSlot> slots;  // ascending w

  int m() const { return static_cast<int>(slots.size()); }
  BigInt combinations() const;
  // True when every choice tuple is increasing: consecutive pools are
  // separated setwise (empty pools are ignored here; they zero the product).
  bool ordered() const;
};

// Builds the family for a copy valid in stage G_step. Throws if the copy is
// not a copy in that stage, or if a pattern edge maps two vertices into the
// step's top interval (impossible for post-strip stages).
ReplacementFamily replacement_sets(const CleaningTrace& trace, int step, const Copy& copy,
                                   const OrderedMatchingPattern& pattern);

struct FamilyCheckItem {
  std::string name;
  std::string detail;
  bool pass = true;
};

// Runtime verification of the replacement construction for one (step, copy):
//  (a) the pools are setwise ordered left to right;
//  (b) each edge-incident pool meets its size lower bound — exact mode:
//      |L_i| >= (beta/2)|J_i(w_i)| and |L_i| >= delta*n; floor mode:
//      |L_i| >= (beta/2)|J_i(w_i)| - 1;
//  (c) every substitution yields edges of G_(step-1): per-pool membership is
//      checked exhaustively, full product tuples on an evenly spaced sample.
struct FamilyCheck {
  int step = 0;
  int m = 0;
  bool vacuous = false;  // m == 0: nothing to check
  bool ordering_pass = true;
  bool size_pass = true;
  bool membership_pass = true;
  long long product_tuples_checked = 0;
  std::vector<FamilyCheckItem> items;

  bool all_pass() const { return ordering_pass && size_pass && membership_pass; }
};

FamilyCheck check_replacement_family(const CleaningTrace& trace, int step, const Copy& copy,
                                     const OrderedMatchingPattern& pattern,
                                     long long product_cap = 1000);

struct Expansion {
  BigInt total = 0;                 // exact product of pool sizes
  std::vector<Copy> copies;         // first min(total, cap) in lex order
  bool complete = true;             // copies.size() == total
  std::vector<long long> factors;   // pool sizes, slot order
};

// Materializes substitutions of the copy through the step's top interval.
// Every returned copy is validated against G_(step-1). Throws if the family
// is not ordered (nothing could be certified then). m = 0 returns the copy
// itself with total 1.
Expansion expand_copy(const CleaningTrace& trace, int step, const Copy& copy,
                      const OrderedMatchingPattern& pattern, long long cap);

struct LevelSummary {
  int step = 0;
  int m = 0;
  long long parents_expanded = 0;
  std::vector<long long> spine_factors;  // pool sizes seen by the first parent
  BigInt min_factor = 0;                 // smallest per-parent product
  BigInt max_factor = 0;
  BigInt level_total = 0;                // running certified count
};

struct AmplificationCertificate {
  Copy base;
  std::vector<int> m_per_level;       // base-copy vertices per top interval
  std::vector<LevelSummary> levels;   // processing order: step k down to 1
  BigInt certified_total = 0;
  bool exact = true;                  // false once materialization was capped
  std::vector<Copy> copies;           // materialized copies in G_0
  std::vector<Copy> sample;           // evenly spaced subset of `copies`
  bool all_valid_in_g0 = false;
  bool all_distinct = false;
};

// Reverse induction from a copy of G_k: expand through interval k, then k-1,
// down to 1. While every intermediate family fits under `cap` the certified
// total is the exact size of the constructed family (sum over parents of
// their pool-size products); once capped it is a certified lower bound and
// `exact` turns false.
AmplificationCertificate reconstruct_all(const CleaningTrace& trace, const Copy& base,
                                         const OrderedMatchingPattern& pattern,
                                         long long cap = 10000, int sample_size = 5);

}  // namespace ordmatch
