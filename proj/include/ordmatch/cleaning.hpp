#pragma once

#include "ordmatch/hypergraph.hpp"
#include "ordmatch/numbers.hpp"

#include <map>
#include <string>
#include <tuple>
#include <vector>

namespace ordmatch {

// Closed integer interval [lo, hi].
struct Interval {
  Vertex lo = 0;
  Vertex hi = -1;

  long long size() const { return static_cast<long long>(hi) - lo + 1; }
  bool contains(Vertex v) const { return lo <= v && v <= hi; }
  bool operator==(const Interval& other) const { return lo == other.lo && hi == other.hi; }
};

enum class SchemeMode { exact, floor };

// Position of an interval inside a scheme: cleaning step (= index of the top
// interval, 1..k), refinement level (1..t), and 0-based index at that level.
struct IntervalRef {
  int step = 0;
  int level = 0;
  int index = 0;

  bool operator==(const IntervalRef& o) const {
    return step == o.step && level == o.level && index == o.index;
  }
};

// k top intervals covering [1..n]; inside each, t nested refinement levels.
// Level 1 is the top interval itself; each level-(j-1) interval splits into
// r = 4tk children (fewer in floor mode when the parent is shorter than r).
//
// exact mode: every split is exact, so all intervals at a level share one
//   size and the deletion threshold floor(beta*|J|) equals beta*|J| whenever
//   2(n/k) is divisible by r^t (`thresholds_integral`).
// floor mode: splits are as even as possible (sibling sizes differ by at
//   most one) and thresholds round up: ceil(beta*|J|).
struct IntervalScheme {
  int n = 0;
  int k = 0;
  int t = 0;
  SchemeMode mode = SchemeMode::exact;
  long long r = 0;  // 1/gamma = 4tk
  Rational eps, gamma, beta, delta;
  bool thresholds_integral = false;

  // levels[l-1][j-1] = the level-j intervals inside top interval l, sorted.
  std::vector<std::vector<std::vector<Interval>>> levels;

  const Interval& top(int l) const { return levels.at(static_cast<size_t>(l) - 1)[0][0]; }
  const std::vector<Interval>& level_intervals(int l, int j) const {
    return levels.at(static_cast<size_t>(l) - 1).at(static_cast<size_t>(j) - 1);
  }
  long long intervals_in_step(int l) const;

  int top_index_of(Vertex v) const;                 // 1..k
  Interval interval_of(Vertex v, int j) const;      // level-j interval containing v
  IntervalRef ref_of(Vertex v, int j) const;
  const Interval& at(const IntervalRef& ref) const;
  // Locates J inside step l; throws std::invalid_argument if absent.
  IntervalRef find_in_step(int l, const Interval& J) const;

  // Deletion threshold B_J.
  long long threshold(const Interval& J) const;
};

// exact mode requires k | n and all split sizes integral ((n/k) divisible by
// r^(t-1)); floor mode only requires n >= k >= 1. t >= 1 always.
IntervalScheme build_scheme(int n, int k, int t, SchemeMode mode);

struct DeletionLedger {
  long long strip_deletions = 0;
  std::vector<long long> per_step;                // distinct edges, index l-1
  std::vector<std::vector<long long>> per_level;  // selections, [l-1][j-1]
};

struct LSetKey {
  int step = 0;
  int level = 0;
  int index = 0;
  std::vector<Vertex> tuple;  // the (s-1) vertices outside the top interval

  bool operator<(const LSetKey& o) const {
    return std::tie(step, level, index, tuple) < std::tie(o.step, o.level, o.index, o.tuple);
  }
  bool operator==(const LSetKey& o) const {
    return std::tie(step, level, index, tuple) == std::tie(o.step, o.level, o.index, o.tuple);
  }
};

using LSetMap = std::map<LSetKey, std::vector<Vertex>>;

// Everything one cleaning run produces: the stage chain G_0 .. G_k, the
// deletion ledger, and every nonempty left set, keyed sparsely.
struct CleaningTrace {
  IntervalScheme scheme;
  int s = 2;
  OrderedHypergraph input;
  std::vector<OrderedHypergraph> stages;  // stages[l] = G_l, l in 0..k
  DeletionLedger ledger;
  LSetMap lsets;

  const OrderedHypergraph& stage(int l) const { return stages.at(static_cast<size_t>(l)); }
  // Empty vector when nothing was stored (sparse representation).
  const std::vector<Vertex>& lset_at(int step, const std::vector<Vertex>& tuple,
                                     const IntervalRef& ref) const;
};

// Removes every edge with two or more vertices in one top interval.
std::pair<OrderedHypergraph, long long> strip_step(const OrderedHypergraph& g,
                                                   const IntervalScheme& scheme);

// Left set of (tuple, J) against g_prev: the leftmost B_J vertices w of J
// with tuple+{w} an edge (all of them if fewer). The tuple must avoid the
// step's top interval; J must belong to the step's interval family.
std::vector<Vertex> l_set(const OrderedHypergraph& g_prev, const IntervalScheme& scheme,
                          int step, const std::vector<Vertex>& tuple, const Interval& J);

struct CleanStepResult {
  OrderedHypergraph result;
  long long deletions = 0;              // distinct edges removed
  std::vector<long long> per_level;     // selections per level, index j-1
  LSetMap lsets;
};

// One cleaning round: all left sets are computed against g_prev (snapshot
// semantics) and their union is deleted in one batch.
CleanStepResult clean_step(const OrderedHypergraph& g_prev, const IntervalScheme& scheme,
                           int step);

// Strip, then one cleaning round per top interval, left to right.
CleaningTrace clean_all(const OrderedHypergraph& g, const IntervalScheme& scheme);

struct InequalityCheck {
  std::string name;
  Rational lhs;
  Rational rhs;
  std::string relation;  // "<", "<=", or "=="
  bool pass = false;
};

struct LedgerReport {
  std::vector<InequalityCheck> checks;
  bool all_pass = true;
};

// Evaluates every deletion bound in exact rational arithmetic, with both
// sides reported. In floor mode the per-round bounds carry the additive
// slack t * n^(s-1) * |family(l)| caused by thresholds that round up.
LedgerReport verify_ledger(const CleaningTrace& trace);

struct SurvivalReport {
  long long checks_run = 0;  // (edge, interval vertex, level) triples tested
  long long violations = 0;
  std::vector<std::string> details;  // first few violations, for diagnostics
  bool pass() const { return violations == 0; }
};

// For every edge of every stage G_l whose interval vertex w lies in an
// already-cleaned top interval: the stored left set of (tuple, J_j(w)) must
// have size exactly B and sit strictly left of w, for every level j.
SurvivalReport check_survival(const CleaningTrace& trace);

// Trace directory layout: scheme.json, stage_input.txt, stage_<l>.txt,
// ledger.csv (step,level,deletions), lsets.txt.
void save_trace(const CleaningTrace& trace, const std::string& dir);
CleaningTrace load_trace(const std::string& dir);

const char* mode_name(SchemeMode mode);
SchemeMode parse_mode(const std::string& name);

}  // namespace ordmatch
