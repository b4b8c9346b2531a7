// Command-line front end for the ordered-matching removal pipeline.
// Exit codes: 0 success / checks passed, 1 a verified check failed,
// 2 usage or input parse error, 3 a budget ran out before a verdict.
#include "CLI11.hpp"
#include "json.hpp"

#include "ordmatch/amplify.hpp"
#include "ordmatch/cleaning.hpp"
#include "ordmatch/embed.hpp"
#include "ordmatch/farness.hpp"
#include "ordmatch/gen.hpp"
#include "ordmatch/hypergraph.hpp"
#include "ordmatch/io.hpp"
#include "ordmatch/numbers.hpp"
#include "ordmatch/verify.hpp"

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace {

using namespace ordmatch;

constexpr int kExitPass = 0;
constexpr int kExitCheckFailed = 1;
constexpr int kExitUsage = 2;
constexpr int kExitBudget = 3;

std::vector<Vertex> parse_vertex_list(const std::string& text) {
  std::vector<Vertex> out;
  std::string item;
  std::istringstream is(text);
  while (std::getline(is, item, ',')) {
    if (item.empty()) throw std::invalid_argument("empty vertex in list '" + text + "'");
    out.push_back(std::stoi(item));
  }
  if (out.empty()) throw std::invalid_argument("empty vertex list");
  return out;
}

void emit(const std::string& text, const std::string& out_path, bool quiet) {
  if (!out_path.empty()) write_file(out_path, text);
  if (out_path.empty() || !quiet) std::cout << text;
}

struct GenBinomialArgs {
  int n = 8, s = 2;
  std::string p = "1/2";
  std::uint64_t seed = 1;
  std::string out;
};

struct GenPlantedArgs {
  int n = 8;
  std::string pattern;
  std::vector<std::string> at;
  std::string out;
};

std::string graph_comment(const std::string& kind, const std::string& params) {
  return "generator=" + kind + " " + params + " prng=" + std::string(kPrngName);
}

int cmd_count(const std::string& graph_path, const std::string& pattern_path, bool brute,
              long long cap, const std::string& per_edge_path, int threads, bool quiet) {
  const OrderedHypergraph g = load_hypergraph(graph_path);
  const OrderedMatchingPattern h = load_pattern(pattern_path);
  CopyCount cc;
  if (brute) cc = count_copies_bruteforce(g, h);
  else if (cap > 0) cc = count_copies_capped(g, h, cap);
  else cc = count_copies(g, h, threads);
  if (!per_edge_path.empty()) {
    std::ostringstream os;
    os << "edge,count\n";
    for (const auto& [e, c] : per_edge_copy_counts(g, h)) {
      for (std::size_t i = 0; i < e.size(); ++i) os << (i ? " " : "") << e[i];
      os << ',' << c << "\n";
    }
    write_file(per_edge_path, os.str());
  }
  if (!quiet) {
    std::cout << "copies " << cc.total << "\n";
    if (cc.truncated) std::cout << "truncated true\n";
  }
  return kExitPass;
}

int cmd_farness(const std::string& graph_path, const std::string& pattern_path, bool exact,
                long long budget, const std::string& eps_text, bool quiet) {
  const OrderedHypergraph g = load_hypergraph(graph_path);
  const OrderedMatchingPattern h = load_pattern(pattern_path);

  FarnessReport rep;
  bool exhausted = false;
  if (exact) {
    const ExactResult ex = exact_deletion_number(g, h, budget);
    rep.lower = ex.lower;
    rep.upper = ex.upper;
    rep.exact = ex.exact;
    rep.witness = ex.witness;
    rep.epsilon_lower = Rational(ex.lower) / Rational(bigint_pow(BigInt(g.n), g.s));
    exhausted = ex.budget_exhausted;
    if (!quiet) std::cout << "nodes " << ex.nodes << "\n";
  } else {
    rep = farness_bounds(g, h, 0);
  }
  if (!quiet) {
    std::cout << "lower " << rep.lower << "\n";
    std::cout << "upper " << rep.upper << "\n";
    std::cout << "exact " << (rep.exact ? "true" : "false") << "\n";
    std::cout << "epsilon-lower " << to_fraction(rep.epsilon_lower) << "\n";
  }
  if (!eps_text.empty()) {
    const Rational eps = parse_fraction(eps_text);
    const EpsFarVerdict v = is_eps_far(rep, g.n, g.s, eps);
    if (!quiet) std::cout << "verdict " << verdict_name(v) << "\n";
    if (v == EpsFarVerdict::indeterminate) return kExitBudget;
  }
  return exhausted ? kExitBudget : kExitPass;
}

int cmd_clean(const std::string& graph_path, int k, int t, const std::string& mode_text,
              const std::string& trace_dir, bool quiet) {
  const OrderedHypergraph g = load_hypergraph(graph_path);
  const IntervalScheme scheme = build_scheme(g.n, k, t, parse_mode(mode_text));
  const CleaningTrace trace = clean_all(g, scheme);
  save_trace(trace, trace_dir);
  if (!quiet) {
    std::cout << "strip " << trace.ledger.strip_deletions << "\n";
    for (int l = 1; l <= scheme.k; ++l)
      std::cout << "step " << l << " deletions "
                << trace.ledger.per_step[static_cast<size_t>(l) - 1] << " edges-left "
                << trace.stage(l).edge_count() << "\n";
    std::cout << "trace " << trace_dir << "\n";
  }
  return kExitPass;
}

int cmd_verify_ledger(const std::string& trace_dir, bool quiet) {
  const CleaningTrace trace = load_trace(trace_dir);
  const LedgerReport rep = verify_ledger(trace);
  for (const auto& c : rep.checks)
    if (!quiet || !c.pass)
      std::cout << (c.pass ? "PASS " : "FAIL ") << c.name << ": " << to_fraction(c.lhs) << " "
                << c.relation << " " << to_fraction(c.rhs) << "\n";
  if (!quiet) std::cout << (rep.all_pass ? "all checks passed" : "checks FAILED") << "\n";
  return rep.all_pass ? kExitPass : kExitCheckFailed;
}

nlohmann::ordered_json certificate_json(const AmplificationCertificate& cert) {
  nlohmann::ordered_json j;
  j["base"] = cert.base.image;
  j["m_per_level"] = cert.m_per_level;
  nlohmann::ordered_json levels = nlohmann::ordered_json::array();
  for (const auto& lvl : cert.levels)
    levels.push_back({{"step", lvl.step},
                      {"m", lvl.m},
                      {"parents", lvl.parents_expanded},
                      {"spine", lvl.spine_factors},
                      {"min", lvl.min_factor.str()},
                      {"max", lvl.max_factor.str()},
                      {"total", lvl.level_total.str()}});
  j["levels"] = std::move(levels);
  j["certified_total"] = cert.certified_total.str();
  j["exact"] = cert.exact;
  j["materialized"] = cert.copies.size();
  nlohmann::ordered_json sample = nlohmann::ordered_json::array();
  for (const auto& c : cert.sample) sample.push_back(c.image);
  j["sample"] = std::move(sample);
  j["valid_in_g0"] = cert.all_valid_in_g0;
  j["distinct"] = cert.all_distinct;
  return j;
}

int cmd_amplify(const std::string& trace_dir, const std::string& pattern_path,
                const std::string& base_text, long long cap, int sample,
                const std::string& out, bool quiet) {
  const CleaningTrace trace = load_trace(trace_dir);
  const OrderedMatchingPattern h = load_pattern(pattern_path);
  Copy base;
  if (!base_text.empty()) {
    base.image = parse_vertex_list(base_text);
  } else {
    const auto first = enumerate_copies(trace.stage(trace.scheme.k), h, 1);
    if (first.empty()) {
      if (!quiet) std::cout << "no copy in final stage\n";
      return kExitPass;
    }
    base = first[0];
  }
  const AmplificationCertificate cert = reconstruct_all(trace, base, h, cap, sample);
  emit(certificate_json(cert).dump(2) + "\n", out, quiet);
  return cert.all_valid_in_g0 && cert.all_distinct && cert.certified_total >= 1
             ? kExitPass
             : kExitCheckFailed;
}

int cmd_experiment(int n, const std::string& pattern_path, const std::string& p_text, int seeds,
                   std::uint64_t base_seed, const std::string& out, bool quiet) {
  const OrderedMatchingPattern h = load_pattern(pattern_path);
  const ExperimentSummary sum =
      proposition_experiment(n, h, parse_fraction(p_text), seeds, base_seed);
  std::ostringstream os;
  write_experiment_csv(sum, os);
  emit(os.str(), out, /*quiet=*/true);
  if (!quiet) {
    std::cout << "prng " << sum.prng << "\n";
    std::cout << "expected " << to_fraction(sum.expected) << "\n";
    std::cout << "mean " << to_fraction(sum.mean) << "\n";
    std::cout << "variance " << to_fraction(sum.variance) << "\n";
    std::cout << "mean-within-3se " << (sum.mean_within_3se ? "true" : "false") << "\n";
    std::cout << "per-edge-bound " << to_fraction(sum.per_edge_bound) << "\n";
    std::cout << "per-edge-ok " << sum.per_edge_ok << "/" << sum.records.size() << "\n";
  }
  return sum.mean_within_3se ? kExitPass : kExitCheckFailed;
}

int cmd_roundtrip(const std::string& path, bool as_pattern, bool quiet) {
  const std::string original = read_file(path);
  std::string canonical;
  bool equal = false;
  if (as_pattern) {
    std::istringstream is(original);
    const OrderedMatchingPattern h = parse_pattern(is);
    canonical = serialize(h);
    std::istringstream is2(canonical);
    const OrderedMatchingPattern h2 = parse_pattern(is2);
    equal = h.t == h2.t && h.s == h2.s && h.edges == h2.edges;
  } else {
    std::istringstream is(original);
    const OrderedHypergraph g = parse_hypergraph(is);
    canonical = serialize(g);
    std::istringstream is2(canonical);
    const OrderedHypergraph g2 = parse_hypergraph(is2);
    equal = g.n == g2.n && g.s == g2.s && g.edges == g2.edges;
  }
  if (!equal) {
    std::cout << "roundtrip FAILED\n";
    return kExitCheckFailed;
  }
  if (!quiet)
    std::cout << "roundtrip ok ("
              << (original == canonical ? "byte-canonical" : "input differs from canonical form")
              << ")\n";
  return kExitPass;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ordered-matching removal pipeline"};
  app.require_subcommand(1);
  app.fallthrough();  // lets --threads/--quiet/--json appear after the subcommand

  int threads = 1;
  bool quiet = false;
  bool json = false;
  app.add_option("--threads", threads, "worker threads for copy counting")
      ->check(CLI::PositiveNumber);
  app.add_flag("--quiet", quiet, "suppress informational output");
  app.add_flag("--json", json, "prefer JSON output where available");

  // gen ------------------------------------------------------------------
  auto* gen = app.add_subcommand("gen", "generate instances");
  gen->require_subcommand(1);

  GenBinomialArgs gb;
  auto* gen_binomial = gen->add_subcommand("binomial", "each s-tuple kept with probability p");
  gen_binomial->add_option("--n", gb.n)->required();
  gen_binomial->add_option("--s", gb.s)->required();
  gen_binomial->add_option("--p", gb.p, "rational probability p/q")->required();
  gen_binomial->add_option("--seed", gb.seed)->required();
  gen_binomial->add_option("-o,--out", gb.out)->required();

  int gc_n = 8, gc_s = 2;
  std::string gc_out;
  auto* gen_complete = gen->add_subcommand("complete", "all s-tuples");
  gen_complete->add_option("--n", gc_n)->required();
  gen_complete->add_option("--s", gc_s)->required();
  gen_complete->add_option("-o,--out", gc_out)->required();

  GenPlantedArgs gp;
  auto* gen_planted = gen->add_subcommand("planted", "union of pattern placements");
  gen_planted->add_option("--n", gp.n)->required();
  gen_planted->add_option("--pattern", gp.pattern)->required();
  gen_planted->add_option("--at", gp.at, "comma-separated image tuple, repeatable")->required();
  gen_planted->add_option("-o,--out", gp.out)->required();

  // count ------------------------------------------------------------------
  std::string ct_graph, ct_pattern, ct_per_edge;
  bool ct_brute = false;
  long long ct_cap = 0;
  auto* count = app.add_subcommand("count", "count copies of a pattern");
  count->add_option("--graph", ct_graph)->required();
  count->add_option("--pattern", ct_pattern)->required();
  count->add_flag("--brute", ct_brute, "use the subset-scan oracle");
  count->add_option("--cap", ct_cap, "stop counting at this many");
  count->add_option("--per-edge", ct_per_edge, "write per-edge counts CSV here");

  // farness ------------------------------------------------------------------
  std::string fa_graph, fa_pattern, fa_eps;
  bool fa_exact = false;
  long long fa_budget = 200000;
  auto* farness = app.add_subcommand("farness", "deletion-number bounds");
  farness->add_option("--graph", fa_graph)->required();
  farness->add_option("--pattern", fa_pattern)->required();
  farness->add_flag("--exact", fa_exact, "run branch-and-bound");
  farness->add_option("--budget", fa_budget, "search node budget");
  farness->add_option("--eps", fa_eps, "compare against eps * n^s");

  // clean ------------------------------------------------------------------
  std::string cl_graph, cl_mode = "exact", cl_trace;
  int cl_k = 2, cl_t = 2;
  auto* clean = app.add_subcommand("clean", "run strip + cleaning, save a trace");
  clean->add_option("--graph", cl_graph)->required();
  clean->add_option("--k", cl_k)->required();
  clean->add_option("--t", cl_t)->required();
  clean->add_option("--mode", cl_mode, "exact|floor");
  clean->add_option("--trace", cl_trace, "output trace directory")->required();

  // verify-ledger ------------------------------------------------------------
  std::string vl_trace;
  auto* vledger = app.add_subcommand("verify-ledger", "re-check deletion bounds of a trace");
  vledger->add_option("--trace", vl_trace)->required();

  // amplify ------------------------------------------------------------------
  std::string am_trace, am_pattern, am_base, am_out;
  long long am_cap = 10000;
  int am_sample = 5;
  auto* amplify = app.add_subcommand("amplify", "reconstruct copies from a trace");
  amplify->add_option("--trace", am_trace)->required();
  amplify->add_option("--pattern", am_pattern)->required();
  amplify->add_option("--base", am_base, "comma-separated copy image (default: first found)");
  amplify->add_option("--cap", am_cap, "max copies materialized per stage");
  amplify->add_option("--sample", am_sample, "copies echoed into the certificate");
  amplify->add_option("-o,--out", am_out, "write the certificate JSON here");

  // verify ------------------------------------------------------------------
  std::string vf_graph, vf_pattern, vf_mode = "exact", vf_out;
  int vf_k = 2, vf_sample = 5;
  long long vf_cap = 10000, vf_budget = 0;
  auto* verify = app.add_subcommand("verify", "full pipeline with every check re-evaluated");
  verify->add_option("--graph", vf_graph)->required();
  verify->add_option("--pattern", vf_pattern)->required();
  verify->add_option("--k", vf_k)->required();
  verify->add_option("--mode", vf_mode, "exact|floor");
  verify->add_option("--cap", vf_cap, "max copies materialized per stage");
  verify->add_option("--sample", vf_sample);
  verify->add_option("--budget", vf_budget, "farness branch-and-bound budget (0 = bounds only)");
  verify->add_option("-o,--out", vf_out, "write the report here");

  // experiment ----------------------------------------------------------------
  auto* experiment = app.add_subcommand("experiment", "statistical experiments");
  experiment->require_subcommand(1);
  int ex_n = 20, ex_seeds = 30;
  std::uint64_t ex_base_seed = 1;
  std::string ex_pattern, ex_p = "1/10", ex_out;
  auto* ex_prop =
      experiment->add_subcommand("proposition", "copy counts in binomial random graphs");
  ex_prop->add_option("--n", ex_n)->required();
  ex_prop->add_option("--pattern", ex_pattern)->required();
  ex_prop->add_option("--p", ex_p)->required();
  ex_prop->add_option("--seeds", ex_seeds)->required();
  ex_prop->add_option("--base-seed", ex_base_seed);
  ex_prop->add_option("-o,--out", ex_out, "write records CSV here");

  // roundtrip -----------------------------------------------------------------
  std::string rt_file;
  bool rt_pattern = false;
  auto* roundtrip = app.add_subcommand("roundtrip", "parse, canonicalize, re-parse");
  roundtrip->add_option("file", rt_file)->required();
  roundtrip->add_flag("--pattern", rt_pattern, "treat the file as a pattern");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (gen_binomial->parsed()) {
      const Rational p = parse_fraction(gb.p);
      const OrderedHypergraph g = random_binomial(gb.n, gb.s, p, gb.seed);
      std::ostringstream params;
      params << "kind=binomial n=" << gb.n << " s=" << gb.s << " p=" << to_fraction(p)
             << " seed=" << gb.seed;
      save_hypergraph(g, gb.out, graph_comment("binomial", params.str()));
      if (!quiet) std::cout << "edges " << g.edge_count() << "\n";
      return kExitPass;
    }
    if (gen_complete->parsed()) {
      const OrderedHypergraph g = complete_hypergraph(gc_n, gc_s);
      std::ostringstream params;
      params << "kind=complete n=" << gc_n << " s=" << gc_s;
      save_hypergraph(g, gc_out, graph_comment("complete", params.str()));
      if (!quiet) std::cout << "edges " << g.edge_count() << "\n";
      return kExitPass;
    }
    if (gen_planted->parsed()) {
      const OrderedMatchingPattern h = load_pattern(gp.pattern);
      std::vector<Copy> placements;
      for (const auto& text : gp.at) placements.push_back(Copy{parse_vertex_list(text)});
      const PlantResult res = planted(gp.n, h, placements);
      std::ostringstream params;
      params << "kind=planted n=" << gp.n << " placements=" << placements.size();
      save_hypergraph(res.graph, gp.out, graph_comment("planted", params.str()));
      if (!quiet) {
        std::cout << "edges " << res.graph.edge_count() << "\n";
        if (res.overlap_warning) std::cout << "warning: placements share an edge\n";
      }
      return kExitPass;
    }
    if (count->parsed())
      return cmd_count(ct_graph, ct_pattern, ct_brute, ct_cap, ct_per_edge, threads, quiet);
    if (farness->parsed())
      return cmd_farness(fa_graph, fa_pattern, fa_exact, fa_budget, fa_eps, quiet);
    if (clean->parsed()) return cmd_clean(cl_graph, cl_k, cl_t, cl_mode, cl_trace, quiet);
    if (vledger->parsed()) return cmd_verify_ledger(vl_trace, quiet);
    if (amplify->parsed())
      return cmd_amplify(am_trace, am_pattern, am_base, am_cap, am_sample, am_out, quiet);
    if (verify->parsed()) {
      const OrderedHypergraph g = load_hypergraph(vf_graph);
      const OrderedMatchingPattern h = load_pattern(vf_pattern);
      VerifyOptions opt;
      opt.k = vf_k;
      opt.mode = parse_mode(vf_mode);
      opt.expand_cap = vf_cap;
      opt.sample = vf_sample;
      opt.farness_budget = vf_budget;
      opt.threads = threads;
      const VerifyReport rep = run_verify(g, h, opt);
      const std::string text =
          json ? rep.to_json().dump(2) + "\n" : rep.canonical_text();
      emit(text, vf_out, quiet);
      return rep.pass ? kExitPass : kExitCheckFailed;
    }
    if (ex_prop->parsed())
      return cmd_experiment(ex_n, ex_pattern, ex_p, ex_seeds, ex_base_seed, ex_out, quiet);
    if (roundtrip->parsed()) return cmd_roundtrip(rt_file, rt_pattern, quiet);
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitCheckFailed;
  }
  return kExitUsage;
}
