#include "doctest.h"

#include "ordmatch/cleaning.hpp"
#include "ordmatch/gen.hpp"
#include "ordmatch/io.hpp"

#include <cstdio>
#include <filesystem>

using namespace ordmatch;

namespace {

// All 32x32 cross edges between the two halves of [1, 64].
OrderedHypergraph cross_64() {
  std::vector<Edge> edges;
  for (Vertex a = 1; a <= 32; ++a)
    for (Vertex b = 33; b <= 64; ++b) edges.push_back({a, b});
  return build_hypergraph(64, 2, std::move(edges));
}

}  // namespace

TEST_CASE("scheme 256/2/2 exact: frozen parameters") {
  const IntervalScheme sc = build_scheme(256, 2, 2, SchemeMode::exact);
  CHECK(sc.eps == Rational(1, 2));
  CHECK(sc.gamma == Rational(1, 16));
  CHECK(sc.beta == Rational(1, 8));
  CHECK(sc.delta == Rational(1, 4096));
  CHECK(sc.r == 16);
  CHECK(sc.thresholds_integral);

  CHECK(sc.top(1) == Interval{1, 128});
  CHECK(sc.top(2) == Interval{129, 256});
  CHECK(sc.level_intervals(1, 2).size() == 16);
  CHECK(sc.level_intervals(1, 2)[0] == Interval{1, 8});
  CHECK(sc.level_intervals(1, 2)[15] == Interval{121, 128});

  CHECK(sc.threshold(sc.top(1)) == 16);              // beta * 128
  CHECK(sc.threshold(sc.level_intervals(1, 2)[3]) == 1);  // beta * 8
  CHECK(sc.intervals_in_step(1) == 1 + 16);
}

TEST_CASE("scheme 8/4/1 floor: frozen top intervals") {
  const IntervalScheme sc = build_scheme(8, 4, 1, SchemeMode::floor);
  CHECK(sc.eps == Rational(1, 4));
  CHECK(sc.r == 16);
  CHECK(sc.beta == Rational(1, 8));
  CHECK(sc.top(1) == Interval{1, 2});
  CHECK(sc.top(2) == Interval{3, 4});
  CHECK(sc.top(3) == Interval{5, 6});
  CHECK(sc.top(4) == Interval{7, 8});
  CHECK(sc.threshold(sc.top(3)) == 1);  // ceil(2/8)
}

TEST_CASE("scheme preconditions") {
  CHECK_THROWS_AS(build_scheme(10, 3, 2, SchemeMode::exact), std::invalid_argument);  // 3 | 10
  CHECK_THROWS_AS(build_scheme(16, 2, 2, SchemeMode::exact), std::invalid_argument);  // 16 | 8
  CHECK_THROWS_AS(build_scheme(8, 9, 1, SchemeMode::exact), std::invalid_argument);   // n < k
  CHECK_THROWS_AS(build_scheme(8, 0, 1, SchemeMode::floor), std::invalid_argument);
  CHECK_NOTHROW(build_scheme(16, 2, 2, SchemeMode::floor));
}

TEST_CASE("scheme 512/4/2 exact: integral split sizes, zero level-2 threshold") {
  const IntervalScheme sc = build_scheme(512, 4, 2, SchemeMode::exact);
  CHECK(sc.r == 32);
  CHECK(sc.beta == Rational(1, 16));
  CHECK(sc.top(1).size() == 128);
  CHECK(sc.level_intervals(2, 2).size() == 32);
  CHECK(sc.level_intervals(2, 2)[0].size() == 4);
  CHECK(sc.threshold(sc.top(1)) == 8);                    // 128/16
  CHECK(sc.threshold(sc.level_intervals(2, 2)[0]) == 0);  // floor(4/16)
  CHECK_FALSE(sc.thresholds_integral);                    // 4 not divisible by 16
}

TEST_CASE("interval lookups nest and tile") {
  const IntervalScheme sc = build_scheme(256, 2, 2, SchemeMode::exact);
  CHECK(sc.top_index_of(1) == 1);
  CHECK(sc.top_index_of(128) == 1);
  CHECK(sc.top_index_of(129) == 2);
  CHECK(sc.top_index_of(256) == 2);

  CHECK(sc.interval_of(200, 1) == Interval{129, 256});
  CHECK(sc.interval_of(200, 2) == Interval{193, 200});
  const IntervalRef ref = sc.ref_of(200, 2);
  CHECK(ref.step == 2);
  CHECK(ref.level == 2);
  CHECK(sc.at(ref) == Interval{193, 200});
  CHECK(sc.find_in_step(2, Interval{193, 200}) == ref);
  CHECK_THROWS_AS(sc.find_in_step(1, Interval{193, 200}), std::invalid_argument);

  // Levels tile each top interval contiguously.
  for (int l = 1; l <= 2; ++l)
    for (int j = 1; j <= 2; ++j) {
      const auto& row = sc.level_intervals(l, j);
      CHECK(row.front().lo == sc.top(l).lo);
      CHECK(row.back().hi == sc.top(l).hi);
      for (std::size_t i = 1; i < row.size(); ++i) CHECK(row[i].lo == row[i - 1].hi + 1);
    }

  // Floor mode tiles too, with sibling sizes differing by at most one.
  const IntervalScheme fl = build_scheme(30, 2, 2, SchemeMode::floor);
  const auto& row = fl.level_intervals(1, 2);
  CHECK(row.front().lo == 1);
  CHECK(row.back().hi == 15);
  long long mn = row[0].size(), mx = row[0].size();
  for (const auto& J : row) {
    mn = std::min(mn, J.size());
    mx = std::max(mx, J.size());
  }
  CHECK(mx - mn <= 1);
}

TEST_CASE("strip removes edges doubled in one top interval") {
  const OrderedHypergraph g = build_hypergraph(4, 2, {{1, 2}, {1, 3}, {3, 4}});
  const IntervalScheme sc = build_scheme(4, 2, 1, SchemeMode::floor);
  const auto [g0, removed] = strip_step(g, sc);
  CHECK(removed == 2);
  CHECK(g0.edges == std::vector<Edge>{{1, 3}});

  const auto [g00, removed2] = strip_step(g0, sc);  // idempotent
  CHECK(removed2 == 0);
  CHECK(g00.edges == g0.edges);
}

TEST_CASE("left set takes the leftmost members up to the threshold") {
  const IntervalScheme sc = build_scheme(16, 2, 1, SchemeMode::exact);
  REQUIRE(sc.threshold(sc.top(2)) == 2);  // beta = 1/4, |J| = 8
  const OrderedHypergraph g = build_hypergraph(16, 2, {{1, 10}, {1, 13}, {1, 14}});
  const auto L = l_set(g, sc, 2, {1}, sc.top(2));
  CHECK(L == std::vector<Vertex>{10, 13});  // W = {10,13,14}, B = 2

  // Fewer members than the threshold: take them all.
  const OrderedHypergraph g2 = build_hypergraph(16, 2, {{1, 13}});
  CHECK(l_set(g2, sc, 2, {1}, sc.top(2)) == std::vector<Vertex>{13});

  // The tuple must avoid the step's top interval.
  CHECK_THROWS_AS(l_set(g, sc, 2, {10}, sc.top(2)), std::invalid_argument);
  // J must belong to the step's family.
  CHECK_THROWS_AS(l_set(g, sc, 2, {1}, Interval{9, 12}), std::invalid_argument);
}

TEST_CASE("cleaning selections are computed against the snapshot") {
  // Edges (w, 40) for w in 1..5. Level-1 threshold 4 dooms {1,2,3,4}; the
  // level-2 interval [3,4] still selects 3 from the snapshot even though
  // level 1 already doomed it. A sequential implementation would find [3,4]
  // empty and store nothing.
  const IntervalScheme sc = build_scheme(64, 2, 2, SchemeMode::floor);
  REQUIRE(sc.threshold(sc.top(1)) == 4);
  REQUIRE(sc.level_intervals(1, 2)[1] == Interval{3, 4});
  REQUIRE(sc.threshold(Interval{3, 4}) == 1);

  const OrderedHypergraph g =
      build_hypergraph(64, 2, {{1, 40}, {2, 40}, {3, 40}, {4, 40}, {5, 40}});
  const CleanStepResult step = clean_step(g, sc, 1);
  CHECK(step.deletions == 5);
  CHECK(step.per_level == std::vector<long long>{4, 3});
  CHECK(step.result.edge_count() == 0);

  const auto l1 = step.lsets.find(LSetKey{1, 1, 0, {40}});
  REQUIRE(l1 != step.lsets.end());
  CHECK(l1->second == std::vector<Vertex>{1, 2, 3, 4});

  const auto l2 = step.lsets.find(LSetKey{1, 2, 1, {40}});
  REQUIRE(l2 != step.lsets.end());
  CHECK(l2->second == std::vector<Vertex>{3});  // snapshot, not the residue

  CHECK(step.lsets.count(LSetKey{1, 2, 3, {40}}) == 0);  // empty sets stay sparse
}

TEST_CASE("dense cross instance saturates thresholds with overlapping selections") {
  const IntervalScheme sc = build_scheme(64, 2, 2, SchemeMode::floor);
  const CleaningTrace trace = clean_all(cross_64(), sc);

  CHECK(trace.ledger.strip_deletions == 0);
  // Per tuple: level 1 dooms {1..4} (4 selections), level 2 selects the 16
  // leftmost-per-interval (overlapping on 1 and 3), 18 distinct in total.
  CHECK(trace.ledger.per_step == std::vector<long long>{32 * 18, 14 * 18});
  CHECK(trace.ledger.per_level[0] == std::vector<long long>{32 * 4, 32 * 16});
  CHECK(trace.ledger.per_level[1] == std::vector<long long>{14 * 4, 14 * 16});
  CHECK(trace.stage(1).edge_count() == 32 * 14);
  CHECK(trace.stage(2).edge_count() == 14 * 14);

  CHECK(verify_ledger(trace).all_pass);
  const SurvivalReport survival = check_survival(trace);
  CHECK(survival.checks_run > 0);
  CHECK(survival.violations == 0);
}

TEST_CASE("ledger and survival hold on random instances in both modes") {
  std::uint64_t seed = 40;
  for (const auto mode : {SchemeMode::exact, SchemeMode::floor}) {
    const int n = mode == SchemeMode::exact ? 256 : 60;
    const int k = 2;
    const IntervalScheme sc = build_scheme(n, k, 2, mode);
    for (const auto& p : {Rational(1, 8), Rational(1, 2)}) {
      const OrderedHypergraph g = random_binomial(n, 2, p, seed++);
      const CleaningTrace trace = clean_all(g, sc);
      const LedgerReport rep = verify_ledger(trace);
      CHECK(rep.all_pass);
      CHECK(check_survival(trace).violations == 0);
      // Stage chain shrinks monotonically.
      for (int l = 0; l < k; ++l)
        CHECK(trace.stage(l + 1).edge_count() <= trace.stage(l).edge_count());
    }
  }
}

TEST_CASE("relaxed exact scheme with zero thresholds cleans consistently") {
  const IntervalScheme sc = build_scheme(512, 4, 2, SchemeMode::exact);
  const OrderedHypergraph g = random_binomial(512, 2, Rational(1, 4), 99);
  const CleaningTrace trace = clean_all(g, sc);
  CHECK(verify_ledger(trace).all_pass);
  CHECK(check_survival(trace).violations == 0);
}

TEST_CASE("stored left sets agree with freshly computed ones") {
  const IntervalScheme sc = build_scheme(64, 2, 2, SchemeMode::floor);
  const OrderedHypergraph g = random_binomial(64, 2, Rational(1, 3), 77);
  const CleaningTrace trace = clean_all(g, sc);
  REQUIRE(!trace.lsets.empty());
  for (const auto& [key, stored] : trace.lsets) {
    const Interval J = sc.level_intervals(key.step, key.level)[key.index];
    CHECK(l_set(trace.stage(key.step - 1), sc, key.step, key.tuple, J) == stored);
  }
}

TEST_CASE("tampered traces are caught") {
  const IntervalScheme sc = build_scheme(64, 2, 2, SchemeMode::floor);
  CleaningTrace trace = clean_all(cross_64(), sc);

  SUBCASE("wrong deletion count breaks the ledger") {
    trace.ledger.per_step[0] += 1;
    CHECK_FALSE(verify_ledger(trace).all_pass);
  }
  SUBCASE("shrunken left set breaks survival") {
    auto it = trace.lsets.find(LSetKey{1, 1, 0, {33}});
    REQUIRE(it != trace.lsets.end());
    it->second.pop_back();
    const SurvivalReport rep = check_survival(trace);
    CHECK(rep.violations > 0);
    CHECK_FALSE(rep.pass());
  }
  SUBCASE("left set member moved right of the surviving vertex") {
    auto it = trace.lsets.find(LSetKey{1, 1, 0, {33}});
    REQUIRE(it != trace.lsets.end());
    it->second.back() = 32;  // >= every surviving vertex of interval 1
    CHECK(check_survival(trace).violations > 0);
  }
}

TEST_CASE("traces round-trip through disk") {
  const IntervalScheme sc = build_scheme(64, 2, 2, SchemeMode::floor);
  const OrderedHypergraph g = random_binomial(64, 2, Rational(1, 3), 123);
  const CleaningTrace trace = clean_all(g, sc);

  const std::string dir =
      (std::filesystem::temp_directory_path() / "ordmatch_trace_rt").string();
  save_trace(trace, dir);
  const CleaningTrace back = load_trace(dir);

  CHECK(back.scheme.n == sc.n);
  CHECK(back.scheme.k == sc.k);
  CHECK(back.scheme.t == sc.t);
  CHECK(back.scheme.mode == sc.mode);
  CHECK(back.scheme.eps == sc.eps);
  CHECK(back.scheme.delta == sc.delta);
  CHECK(back.s == trace.s);
  REQUIRE(back.stages.size() == trace.stages.size());
  for (std::size_t i = 0; i < trace.stages.size(); ++i)
    CHECK(back.stages[i].edges == trace.stages[i].edges);
  CHECK(back.input.edges == trace.input.edges);
  CHECK(back.ledger.strip_deletions == trace.ledger.strip_deletions);
  CHECK(back.ledger.per_step == trace.ledger.per_step);
  CHECK(back.ledger.per_level == trace.ledger.per_level);
  CHECK(back.lsets == trace.lsets);
  std::filesystem::remove_all(dir);
}

TEST_CASE("mode names round-trip") {
  CHECK(parse_mode("exact") == SchemeMode::exact);
  CHECK(parse_mode("floor") == SchemeMode::floor);
  CHECK(std::string(mode_name(SchemeMode::exact)) == "exact");
  CHECK(std::string(mode_name(SchemeMode::floor)) == "floor");
  CHECK_THROWS_AS(parse_mode("banana"), std::invalid_argument);
}
