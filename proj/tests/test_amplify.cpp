#include "doctest.h"

#include "ordmatch/amplify.hpp"
#include "ordmatch/cleaning.hpp"

#include <algorithm>

using namespace ordmatch;

namespace {

// Hand-assembled trace with two replaceable positions in interval 1.
// Pattern {(1,3),(2,4)} on 4 vertices; base copy (11,16,200,210).
// Stored sets: level 1 of (200) = {4,6,9}; level 2 of (210) at [13,16]
// = {13,14,15}. Rank 1 drops the level-2 interval of 11 ([9,12]), leaving
// {4,6}; rank 2 keeps its full stored set.
struct Fabricated {
  OrderedMatchingPattern h = validate_pattern(4, 2, {{1, 3}, {2, 4}});
  Copy base{{11, 16, 200, 210}};
  CleaningTrace trace;

  Fabricated() {
    trace.scheme = build_scheme(256, 2, 4, SchemeMode::floor);
    trace.s = 2;
    const OrderedHypergraph g0 = build_hypergraph(
        256, 2,
        {{4, 200}, {6, 200}, {11, 200}, {13, 210}, {14, 210}, {15, 210}, {16, 210}});
    const OrderedHypergraph g1 = build_hypergraph(256, 2, {{11, 200}, {16, 210}});
    trace.input = g0;
    trace.stages = {g0, g1, g1};
    trace.lsets[LSetKey{1, 1, 0, {200}}] = {4, 6, 9};
    trace.lsets[LSetKey{1, 2, 3, {210}}] = {13, 14, 15};
  }
};

std::vector<Vertex> images_at(const std::vector<Copy>& copies, std::size_t i) {
  return copies.at(i).image;
}

}  // namespace

TEST_CASE("replacement slots: pools, intervals, thresholds") {
  const Fabricated f;
  const ReplacementFamily fam = replacement_sets(f.trace, 1, f.base, f.h);
  REQUIRE(fam.m() == 2);

  CHECK(fam.slots[0].w == 11);
  CHECK(fam.slots[0].image_pos == 0);
  CHECK(fam.slots[0].edge_incident);
  CHECK(fam.slots[0].incident_tuple == std::vector<Vertex>{200});
  CHECK(fam.slots[0].level_interval == Interval{1, 128});
  CHECK(fam.slots[0].pool == std::vector<Vertex>{4, 6});  // 9 lies in [9,12]

  CHECK(fam.slots[1].w == 16);
  CHECK(fam.slots[1].image_pos == 1);
  CHECK(fam.slots[1].incident_tuple == std::vector<Vertex>{210});
  CHECK(fam.slots[1].level_interval == Interval{13, 16});
  CHECK(fam.slots[1].pool == std::vector<Vertex>{13, 14, 15});

  CHECK(fam.ordered());
  CHECK(fam.combinations() == 6);
}

TEST_CASE("expansion materializes the full product in lexicographic order") {
  const Fabricated f;
  const Expansion ex = expand_copy(f.trace, 1, f.base, f.h, 100);
  CHECK(ex.total == 6);
  CHECK(ex.complete);
  CHECK(ex.factors == std::vector<long long>{2, 3});
  REQUIRE(ex.copies.size() == 6);
  CHECK(images_at(ex.copies, 0) == std::vector<Vertex>{4, 13, 200, 210});
  CHECK(images_at(ex.copies, 1) == std::vector<Vertex>{4, 14, 200, 210});
  CHECK(images_at(ex.copies, 2) == std::vector<Vertex>{4, 15, 200, 210});
  CHECK(images_at(ex.copies, 3) == std::vector<Vertex>{6, 13, 200, 210});
  CHECK(images_at(ex.copies, 4) == std::vector<Vertex>{6, 14, 200, 210});
  CHECK(images_at(ex.copies, 5) == std::vector<Vertex>{6, 15, 200, 210});
}

TEST_CASE("expansion respects the cap but keeps the exact total") {
  const Fabricated f;
  const Expansion ex = expand_copy(f.trace, 1, f.base, f.h, 4);
  CHECK(ex.total == 6);
  CHECK_FALSE(ex.complete);
  CHECK(ex.copies.size() == 4);
  CHECK(images_at(ex.copies, 3) == std::vector<Vertex>{6, 13, 200, 210});
}

TEST_CASE("family checks verify ordering, sizes, and membership") {
  const Fabricated f;
  const FamilyCheck chk = check_replacement_family(f.trace, 1, f.base, f.h, 100);
  CHECK(chk.m == 2);
  CHECK(chk.ordering_pass);
  CHECK(chk.membership_pass);
  CHECK(chk.product_tuples_checked == 6);
  // The fabricated pools are deliberately far below the floor-mode size
  // bound ceil(beta/2 * |J|) - 1 at level 1 ((1/32)*128 - 1 = 3 > 2).
  CHECK_FALSE(chk.size_pass);
}

TEST_CASE("corrupted traces surface as membership or ordering failures") {
  SUBCASE("missing edge in the previous stage") {
    Fabricated f;
    f.trace.stages[0] = delete_edges(f.trace.stages[0], {{6, 200}});
    const FamilyCheck chk = check_replacement_family(f.trace, 1, f.base, f.h, 100);
    CHECK_FALSE(chk.membership_pass);
    CHECK_THROWS_AS(expand_copy(f.trace, 1, f.base, f.h, 100), std::runtime_error);
  }
  SUBCASE("pools out of order") {
    Fabricated f;
    f.trace.lsets[LSetKey{1, 2, 3, {210}}] = {5, 6, 7};  // overlaps rank-1 pool
    const FamilyCheck chk = check_replacement_family(f.trace, 1, f.base, f.h, 100);
    CHECK_FALSE(chk.ordering_pass);
    CHECK_THROWS_AS(expand_copy(f.trace, 1, f.base, f.h, 100), std::runtime_error);
  }
}

TEST_CASE("copies untouched by a step pass through unchanged") {
  CleaningTrace trace;
  trace.scheme = build_scheme(16, 4, 2, SchemeMode::floor);
  trace.s = 2;
  const OrderedHypergraph g = build_hypergraph(16, 2, {{1, 14}});
  trace.input = g;
  trace.stages = {g, g, g, g, g};
  const OrderedMatchingPattern h = validate_pattern(2, 2, {{1, 2}});
  const Copy base{{1, 14}};

  const ReplacementFamily fam = replacement_sets(trace, 2, base, h);
  CHECK(fam.m() == 0);  // neither vertex lies in interval 2 = [5,8]
  CHECK(fam.combinations() == 1);

  const Expansion ex = expand_copy(trace, 2, base, h, 10);
  CHECK(ex.total == 1);
  CHECK(ex.complete);
  REQUIRE(ex.copies.size() == 1);
  CHECK(ex.copies[0] == base);

  const FamilyCheck chk = check_replacement_family(trace, 2, base, h, 10);
  CHECK(chk.vacuous);
  CHECK(chk.all_pass());
}

TEST_CASE("isolated pattern vertices stay fixed and trim their neighbours") {
  // Pattern (1,3) on 3 vertices: vertex 2 is isolated. Base (5,20,40).
  // Stored set {3,5,26} first loses the level-2 interval of 5 (rank 1 of 2),
  // then everything right of the fixed vertex 20.
  CleaningTrace trace;
  trace.scheme = build_scheme(64, 2, 3, SchemeMode::floor);
  trace.s = 2;
  const OrderedHypergraph g0 = build_hypergraph(64, 2, {{3, 40}, {5, 40}, {26, 40}});
  const OrderedHypergraph g1 = build_hypergraph(64, 2, {{5, 40}});
  trace.input = g0;
  trace.stages = {g0, g1, g1};
  trace.lsets[LSetKey{1, 1, 0, {40}}] = {3, 5, 26};

  const OrderedMatchingPattern h = validate_pattern(3, 2, {{1, 3}});
  REQUIRE(h.has_isolated_vertices());
  const Copy base{{5, 20, 40}};

  const ReplacementFamily fam = replacement_sets(trace, 1, base, h);
  REQUIRE(fam.m() == 2);
  CHECK(fam.slots[0].edge_incident);
  CHECK(fam.slots[0].pool == std::vector<Vertex>{3});  // 5 in own level-2, 26 > 20
  CHECK_FALSE(fam.slots[1].edge_incident);
  CHECK(fam.slots[1].pool == std::vector<Vertex>{20});

  const Expansion ex = expand_copy(trace, 1, base, h, 10);
  CHECK(ex.total == 1);
  REQUIRE(ex.copies.size() == 1);
  CHECK(ex.copies[0].image == std::vector<Vertex>{3, 20, 40});
}

TEST_CASE("full reconstruction on a cleaned dense instance") {
  std::vector<Edge> edges;
  for (Vertex a = 1; a <= 32; ++a)
    for (Vertex b = 33; b <= 64; ++b) edges.push_back({a, b});
  const OrderedHypergraph g = build_hypergraph(64, 2, std::move(edges));
  const IntervalScheme sc = build_scheme(64, 2, 2, SchemeMode::floor);
  const CleaningTrace trace = clean_all(g, sc);
  const OrderedMatchingPattern h = validate_pattern(2, 2, {{1, 2}});

  REQUIRE(trace.stage(2).edge_count() == 14 * 14);
  const Copy base{trace.stage(2).edges.front()};

  SUBCASE("uncapped: exact certified family") {
    const AmplificationCertificate cert = reconstruct_all(trace, base, h, 1000, 3);
    CHECK(cert.m_per_level == std::vector<int>{1, 1});
    CHECK(cert.certified_total == 16);  // threshold 4 at each of the two levels
    CHECK(cert.exact);
    CHECK(cert.copies.size() == 16);
    CHECK(cert.all_valid_in_g0);
    CHECK(cert.all_distinct);
    CHECK(cert.sample.size() == 3);
    REQUIRE(cert.levels.size() == 2);
    CHECK(cert.levels[0].step == 2);
    CHECK(cert.levels[0].parents_expanded == 1);
    CHECK(cert.levels[0].level_total == 4);
    CHECK(cert.levels[0].spine_factors == std::vector<long long>{4});
    CHECK(cert.levels[1].step == 1);
    CHECK(cert.levels[1].parents_expanded == 4);
    CHECK(cert.levels[1].level_total == 16);
    CHECK(cert.levels[1].min_factor == 4);
    CHECK(cert.levels[1].max_factor == 4);

    // Every family check along the way passes on a genuine trace.
    std::vector<Copy> family = {base};
    for (int step = 2; step >= 1; --step) {
      std::vector<Copy> next;
      for (const Copy& parent : family) {
        CHECK(check_replacement_family(trace, step, parent, h, 100).all_pass());
        const Expansion ex = expand_copy(trace, step, parent, h, 1000);
        next.insert(next.end(), ex.copies.begin(), ex.copies.end());
      }
      family = std::move(next);
    }
    CHECK(family.size() == 16);
  }

  SUBCASE("capped: total stays a certified lower bound") {
    const AmplificationCertificate cert = reconstruct_all(trace, base, h, 5, 2);
    CHECK(cert.certified_total == 16);  // all parents of the last level survived
    CHECK_FALSE(cert.exact);
    CHECK(cert.copies.size() == 5);
    CHECK(cert.all_valid_in_g0);
    CHECK(cert.all_distinct);
  }
}

TEST_CASE("reconstruction rejects bad inputs") {
  const Fabricated f;
  CHECK_THROWS_AS(reconstruct_all(f.trace, Copy{{1, 2, 3, 4}}, f.h, 10, 1),
                  std::invalid_argument);
  CHECK_THROWS_AS(reconstruct_all(f.trace, f.base, f.h, 0, 1), std::invalid_argument);
  CHECK_THROWS_AS(replacement_sets(f.trace, 5, f.base, f.h), std::invalid_argument);
}
