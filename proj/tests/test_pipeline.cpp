#include "doctest.h"

#include "ordmatch/gen.hpp"
#include "ordmatch/io.hpp"
#include "ordmatch/verify.hpp"

#include "json.hpp"

#include <cstdlib>
#include <filesystem>
#include <string>
#include <sys/wait.h>

using namespace ordmatch;
namespace fs = std::filesystem;

namespace {

OrderedMatchingPattern single_edge() { return validate_pattern(2, 2, {{1, 2}}); }

int run_cli(const std::string& args) {
  const std::string cmd = std::string(ORDMATCH_CLI_PATH) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  REQUIRE(status != -1);
  REQUIRE(WIFEXITED(status));
  return WEXITSTATUS(status);
}

struct TempDir {
  fs::path path;
  TempDir() : path(fs::temp_directory_path() / "ordmatch_pipeline_cli") {
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string operator/(const std::string& name) const { return (path / name).string(); }
};

}  // namespace

TEST_CASE("full verification is byte-identical across thread counts") {
  const OrderedHypergraph g = random_binomial(256, 2, Rational(1, 4), 9);
  const OrderedMatchingPattern h = single_edge();

  VerifyOptions opt;
  opt.k = 2;
  opt.mode = SchemeMode::exact;
  opt.threads = 1;
  const VerifyReport one = run_verify(g, h, opt);
  opt.threads = 4;
  const VerifyReport four = run_verify(g, h, opt);

  CHECK(one.canonical_text() == four.canonical_text());
  CHECK(one.report_digest() == four.report_digest());
  CHECK(one.to_json().dump() == four.to_json().dump());

  CHECK(one.pass);
  CHECK(one.verdict == EpsFarVerdict::not_far);  // < half of all pairs present
  CHECK_FALSE(one.theorem_required);
  CHECK(one.canonical_text().rfind("ordmatch-verify/1", 0) == 0);
  CHECK(one.input_copies == g.edge_count());  // single-edge pattern
}

TEST_CASE("a provably far instance certifies end to end") {
  // The complete graph needs every edge deleted to kill the single-edge
  // pattern: C(72,2) = 2556 >= (1/3) * 72^2 = 1728.
  const OrderedHypergraph g = complete_hypergraph(72, 2);
  VerifyOptions opt;
  opt.k = 3;
  opt.mode = SchemeMode::exact;
  const VerifyReport rep = run_verify(g, single_edge(), opt);

  CHECK(rep.verdict == EpsFarVerdict::far);
  CHECK(rep.farness.lower == 2556);
  CHECK(rep.theorem_required);
  CHECK(rep.theorem_pass);
  CHECK(rep.gk_copy_found);
  CHECK(rep.has_certificate);
  CHECK(rep.certificate.certified_total >= 1);
  CHECK(rep.consistent);
  CHECK(rep.witness_pass);
  CHECK(rep.pass);
}

TEST_CASE("pattern-free inputs come out not far and still pass") {
  SUBCASE("star graph against two disjoint edges") {
    std::vector<Edge> edges;
    for (Vertex v = 2; v <= 16; ++v) edges.push_back({1, v});
    const OrderedHypergraph g = build_hypergraph(16, 2, std::move(edges));
    const OrderedMatchingPattern h = validate_pattern(4, 2, {{1, 3}, {2, 4}});
    VerifyOptions opt;
    opt.k = 2;
    opt.mode = SchemeMode::floor;
    const VerifyReport rep = run_verify(g, h, opt);
    CHECK(rep.input_copies == 0);
    CHECK_FALSE(rep.gk_copy_found);
    CHECK_FALSE(rep.has_certificate);
    CHECK(rep.verdict == EpsFarVerdict::not_far);
    CHECK(rep.consistent);
    CHECK(rep.pass);
  }
  SUBCASE("empty graph") {
    const OrderedHypergraph g = build_hypergraph(64, 2, {});
    VerifyOptions opt;
    opt.k = 2;
    opt.mode = SchemeMode::exact;
    const VerifyReport rep = run_verify(g, single_edge(), opt);
    CHECK(rep.input_copies == 0);
    CHECK(rep.verdict == EpsFarVerdict::not_far);
    CHECK(rep.pass);
  }
}

TEST_CASE("verification rejects arity mismatches") {
  const OrderedHypergraph g = build_hypergraph(8, 2, {{1, 2}});
  const OrderedMatchingPattern h3 = validate_pattern(3, 3, {{1, 2, 3}});
  CHECK_THROWS_AS(run_verify(g, h3, VerifyOptions{}), std::invalid_argument);
}

TEST_CASE("command-line pipeline: generate, inspect, clean, verify") {
  const TempDir dir;
  const std::string graph = dir / "graph.txt";
  const std::string p21 = dir / "p21.txt";
  const std::string p22 = dir / "p22.txt";
  write_file(p21, "2 2 1\n1 2\n");
  write_file(p22, "4 2 2\n1 3\n2 4\n");

  REQUIRE(run_cli("gen binomial --n 64 --s 2 --p 1/4 --seed 3 -o " + graph + " --quiet") == 0);
  const OrderedHypergraph g = load_hypergraph(graph);
  CHECK(g.n == 64);
  CHECK(g.edge_count() > 0);

  SUBCASE("round trips") {
    CHECK(run_cli("roundtrip " + graph + " --quiet") == 0);
    CHECK(run_cli("roundtrip " + p22 + " --pattern --quiet") == 0);
    const std::string bad = dir / "bad.txt";
    write_file(bad, "3 2\n1 2\n");  // header too short
    CHECK(run_cli("roundtrip " + bad + " --quiet") == 2);
    CHECK(run_cli("count --graph " + dir / "missing.txt" + " --pattern " + p21) == 2);
    CHECK(run_cli("definitely-not-a-command") == 2);
  }

  SUBCASE("counting and cleaning") {
    CHECK(run_cli("count --graph " + graph + " --pattern " + p21 + " --quiet") == 0);
    const std::string trace = dir / "trace";
    CHECK(run_cli("clean --graph " + graph + " --k 2 --t 2 --mode exact --trace " + trace +
                  " --quiet") == 0);
    CHECK(run_cli("verify-ledger --trace " + trace + " --quiet") == 0);
  }

  SUBCASE("verify output files are deterministic") {
    const std::string v1 = dir / "v1.txt";
    const std::string v4 = dir / "v4.txt";
    const std::string vj = dir / "vj.json";
    const std::string common = "verify --graph " + graph + " --pattern " + p21 +
                               " --k 2 --mode exact --quiet";
    REQUIRE(run_cli(common + " --threads 1 -o " + v1) == 0);
    REQUIRE(run_cli(common + " --threads 4 -o " + v4) == 0);
    const std::string text = read_file(v1);
    CHECK(text == read_file(v4));
    CHECK(text.rfind("ordmatch-verify/1", 0) == 0);

    REQUIRE(run_cli(common + " --json -o " + vj) == 0);
    const auto parsed = nlohmann::json::parse(read_file(vj));
    CHECK(parsed.at("pass").get<bool>());
    CHECK(parsed.at("format").get<std::string>() == "ordmatch-verify/1");
  }

  SUBCASE("certificates reconstruct through the command line") {
    std::vector<Edge> cross;
    for (Vertex a = 1; a <= 32; ++a)
      for (Vertex b = 33; b <= 64; ++b) cross.push_back({a, b});
    const std::string cross_path = dir / "cross.txt";
    save_hypergraph(build_hypergraph(64, 2, std::move(cross)), cross_path);
    const std::string trace = dir / "cross-trace";
    const std::string cert = dir / "cert.json";
    REQUIRE(run_cli("clean --graph " + cross_path + " --k 2 --t 2 --mode floor --trace " +
                    trace + " --quiet") == 0);
    REQUIRE(run_cli("amplify --trace " + trace + " --pattern " + p21 + " --cap 100 --sample 2 -o " +
                    cert + " --quiet") == 0);
    const auto parsed = nlohmann::json::parse(read_file(cert));
    CHECK(parsed.at("certified_total").get<std::string>() == "16");
    CHECK(parsed.at("exact").get<bool>());
    CHECK(parsed.at("valid_in_g0").get<bool>());
  }

  SUBCASE("straddling farness bounds exit with the budget code") {
    const std::string g3 = dir / "three-pairs.txt";
    const std::string pairs = dir / "pairs.txt";
    write_file(g3, "6 2 3\n1 2\n3 4\n5 6\n");
    write_file(pairs, "4 2 2\n1 2\n3 4\n");
    // Greedy needs 2 deletions but the lexicographic packing finds only 1
    // disjoint copy, so eps = 1/18 (threshold 2) stays undecided.
    CHECK(run_cli("farness --graph " + g3 + " --pattern " + pairs + " --eps 1/18 --quiet") == 3);
    CHECK(run_cli("farness --graph " + g3 + " --pattern " + pairs +
                  " --eps 1/18 --exact --quiet") == 0);
  }
}
