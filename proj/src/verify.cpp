#include "ordmatch/verify.hpp"

#include "ordmatch/embed.hpp"
#include "ordmatch/io.hpp"

#include <sstream>
#include <stdexcept>

namespace ordmatch {

namespace {

const char* yn(bool b) { return b ? "true" : "false"; }

std::string join(const std::vector<Vertex>& vs) {
  std::ostringstream os;
  for (std::size_t i = 0; i < vs.size(); ++i) os << (i ? " " : "") << vs[i];
  return os.str();
}

std::string join_ll(const std::vector<long long>& vs) {
  std::ostringstream os;
  for (std::size_t i = 0; i < vs.size(); ++i) os << (i ? "," : "") << vs[i];
  return os.str();
}

}  // namespace

const char* verdict_name(EpsFarVerdict v) {
  switch (v) {
    case EpsFarVerdict::far: return "far";
    case EpsFarVerdict::not_far: return "not-far";
    default: return "indeterminate";
  }
}

VerifyReport run_verify(const OrderedHypergraph& g, const OrderedMatchingPattern& h,
                        const VerifyOptions& options) {
  if (g.s != h.s) throw std::invalid_argument("run_verify: graph and pattern arity differ");

  VerifyReport rep;
  rep.input_digest = hex64(digest(g));
  rep.pattern_digest = hex64(digest(h));
  rep.n = g.n;
  rep.s = g.s;
  rep.t = h.t;
  rep.m = h.m();

  const IntervalScheme scheme = build_scheme(g.n, options.k, h.t, options.mode);
  rep.k = scheme.k;
  rep.mode = scheme.mode;
  rep.r = scheme.r;
  rep.eps = scheme.eps;
  rep.gamma = scheme.gamma;
  rep.beta = scheme.beta;
  rep.delta = scheme.delta;
  rep.thresholds_integral = scheme.thresholds_integral;

  rep.input_copies = count_copies(g, h, options.threads).total;

  const CleaningTrace trace = clean_all(g, scheme);
  rep.ledger = verify_ledger(trace);
  rep.survival = check_survival(trace);

  rep.pipeline_deletions = trace.ledger.strip_deletions;
  for (long long d : trace.ledger.per_step) rep.pipeline_deletions += d;

  const BigInt n_pow_s = bigint_pow(BigInt(g.n), static_cast<unsigned>(g.s));
  rep.eps_threshold = scheme.eps * Rational(n_pow_s);
  rep.deletion_allowance = rep.eps_threshold;
  if (scheme.mode == SchemeMode::floor) {
    const BigInt n_pow_s1 = bigint_pow(BigInt(g.n), static_cast<unsigned>(g.s - 1));
    for (int l = 1; l <= scheme.k; ++l)
      rep.deletion_allowance +=
          Rational(scheme.t) * Rational(n_pow_s1) * Rational(scheme.intervals_in_step(l));
  }
  rep.witness_pass = Rational(rep.pipeline_deletions) < rep.deletion_allowance;

  const OrderedHypergraph& gk = trace.stage(scheme.k);
  const auto first = enumerate_copies(gk, h, 1);
  rep.gk_copy_found = !first.empty();

  if (rep.gk_copy_found) {
    rep.gk_witness = first[0];
    rep.certificate =
        reconstruct_all(trace, rep.gk_witness, h, options.expand_cap, options.sample);
    rep.has_certificate = true;

    // Re-run the pool construction checks along the same reverse induction.
    std::vector<Copy> family = {rep.gk_witness};
    for (int step = scheme.k; step >= 1; --step) {
      std::vector<Copy> next;
      for (const Copy& parent : family) {
        const FamilyCheck chk =
            check_replacement_family(trace, step, parent, h, options.family_product_cap);
        rep.families_checked++;
        if (!chk.all_pass()) rep.family_failures++;
        rep.product_tuples_checked += chk.product_tuples_checked;
        const long long room = options.expand_cap - static_cast<long long>(next.size());
        Expansion ex = expand_copy(trace, step, parent, h, room);
        for (auto& c : ex.copies) next.push_back(std::move(c));
      }
      family = std::move(next);
    }
  }

  rep.farness = farness_bounds(g, h, options.farness_budget);
  rep.verdict = is_eps_far(rep.farness, g.n, g.s, scheme.eps);

  rep.theorem_bound =
      rational_pow(scheme.delta, static_cast<unsigned>(h.t)) *
      Rational(bigint_pow(BigInt(g.n), static_cast<unsigned>(h.t)));
  rep.theorem_required = rep.verdict == EpsFarVerdict::far;
  rep.theorem_pass = rep.gk_copy_found &&
                     Rational(rep.certificate.certified_total) >= rep.theorem_bound;
  rep.consistent = !(rep.verdict == EpsFarVerdict::far && !rep.gk_copy_found);

  bool pass = rep.ledger.all_pass && rep.survival.pass() && rep.witness_pass && rep.consistent;
  if (rep.gk_copy_found)
    pass = pass && rep.certificate.all_valid_in_g0 && rep.certificate.all_distinct &&
           rep.family_failures == 0 && rep.certificate.certified_total >= 1;
  if (rep.theorem_required) pass = pass && rep.theorem_pass;
  rep.pass = pass;
  return rep;
}

std::string VerifyReport::canonical_text() const {
  std::ostringstream os;
  os << "ordmatch-verify/1\n";
  os << "input n=" << n << " s=" << s << " digest=" << input_digest << "\n";
  os << "pattern t=" << t << " s=" << s << " m=" << m << " digest=" << pattern_digest << "\n";
  os << "scheme k=" << k << " t=" << t << " mode=" << mode_name(mode) << " r=" << r << "\n";
  os << "scheme eps=" << to_fraction(eps) << " gamma=" << to_fraction(gamma)
     << " beta=" << to_fraction(beta) << " delta=" << to_fraction(delta)
     << " thresholds-integral=" << yn(thresholds_integral) << "\n";
  os << "input-copies " << input_copies << "\n";
  for (const auto& c : ledger.checks)
    os << "check " << c.name << ": " << to_fraction(c.lhs) << " " << c.relation << " "
       << to_fraction(c.rhs) << " pass=" << yn(c.pass) << "\n";
  os << "survival checks=" << survival.checks_run << " violations=" << survival.violations
     << " pass=" << yn(survival.pass()) << "\n";
  for (std::size_t i = 0; i < survival.details.size() && i < 3; ++i)
    os << "survival-detail " << survival.details[i] << "\n";
  os << "deletions pipeline=" << pipeline_deletions
     << " allowance=" << to_fraction(deletion_allowance) << " pass=" << yn(witness_pass)
     << "\n";
  os << "gk-copy found=" << yn(gk_copy_found);
  if (gk_copy_found) os << " witness=" << join(gk_witness.image);
  os << "\n";
  if (has_certificate) {
    for (const auto& lvl : certificate.levels)
      os << "certificate level step=" << lvl.step << " m=" << lvl.m
         << " parents=" << lvl.parents_expanded << " spine=" << join_ll(lvl.spine_factors)
         << " min=" << lvl.min_factor << " max=" << lvl.max_factor
         << " total=" << lvl.level_total << "\n";
    os << "certificate total=" << certificate.certified_total
       << " exact=" << yn(certificate.exact) << " materialized=" << certificate.copies.size()
       << " valid=" << yn(certificate.all_valid_in_g0)
       << " distinct=" << yn(certificate.all_distinct) << "\n";
    for (const auto& c : certificate.sample) os << "certificate sample " << join(c.image) << "\n";
    os << "families checked=" << families_checked << " failures=" << family_failures
       << " product-tuples=" << product_tuples_checked << "\n";
  }
  os << "farness lower=" << farness.lower << " upper=" << farness.upper
     << " exact=" << yn(farness.exact) << " eps-lower=" << to_fraction(farness.epsilon_lower)
     << "\n";
  os << "eps-threshold " << to_fraction(eps_threshold) << "\n";
  os << "verdict " << verdict_name(verdict) << "\n";
  os << "theorem bound=" << to_fraction(theorem_bound) << " required=" << yn(theorem_required)
     << " pass=" << yn(theorem_pass) << "\n";
  os << "consistent " << yn(consistent) << "\n";
  os << "result " << (pass ? "PASS" : "FAIL") << "\n";
  return os.str();
}

nlohmann::ordered_json VerifyReport::to_json() const {
  nlohmann::ordered_json j;
  j["format"] = "ordmatch-verify/1";
  j["input"] = {{"n", n}, {"s", s}, {"digest", input_digest}};
  j["pattern"] = {{"t", t}, {"s", s}, {"m", m}, {"digest", pattern_digest}};
  j["scheme"] = {{"k", k},
                 {"mode", mode_name(mode)},
                 {"r", r},
                 {"eps", to_fraction(eps)},
                 {"gamma", to_fraction(gamma)},
                 {"beta", to_fraction(beta)},
                 {"delta", to_fraction(delta)},
                 {"thresholds_integral", thresholds_integral}};
  j["input_copies"] = input_copies.str();
  nlohmann::ordered_json checks = nlohmann::ordered_json::array();
  for (const auto& c : ledger.checks)
    checks.push_back({{"name", c.name},
                      {"lhs", to_fraction(c.lhs)},
                      {"relation", c.relation},
                      {"rhs", to_fraction(c.rhs)},
                      {"pass", c.pass}});
  j["checks"] = std::move(checks);
  j["survival"] = {{"checks", survival.checks_run},
                   {"violations", survival.violations},
                   {"pass", survival.pass()}};
  j["deletions"] = {{"pipeline", pipeline_deletions},
                    {"allowance", to_fraction(deletion_allowance)},
                    {"pass", witness_pass}};
  j["gk_copy"] = {{"found", gk_copy_found},
                  {"witness", gk_copy_found ? nlohmann::ordered_json(gk_witness.image)
                                            : nlohmann::ordered_json(nullptr)}};
  if (has_certificate) {
    nlohmann::ordered_json levels = nlohmann::ordered_json::array();
    for (const auto& lvl : certificate.levels)
      levels.push_back({{"step", lvl.step},
                        {"m", lvl.m},
                        {"parents", lvl.parents_expanded},
                        {"spine", lvl.spine_factors},
                        {"min", lvl.min_factor.str()},
                        {"max", lvl.max_factor.str()},
                        {"total", lvl.level_total.str()}});
    nlohmann::ordered_json sample = nlohmann::ordered_json::array();
    for (const auto& c : certificate.sample) sample.push_back(c.image);
    j["certificate"] = {{"levels", std::move(levels)},
                        {"total", certificate.certified_total.str()},
                        {"exact", certificate.exact},
                        {"materialized", certificate.copies.size()},
                        {"valid_in_g0", certificate.all_valid_in_g0},
                        {"distinct", certificate.all_distinct},
                        {"sample", std::move(sample)}};
    j["families"] = {{"checked", families_checked},
                     {"failures", family_failures},
                     {"product_tuples", product_tuples_checked}};
  } else {
    j["certificate"] = nullptr;
  }
  j["farness"] = {{"lower", farness.lower.str()},
                  {"upper", farness.upper.str()},
                  {"exact", farness.exact},
                  {"eps_lower", to_fraction(farness.epsilon_lower)}};
  j["eps_threshold"] = to_fraction(eps_threshold);
  j["verdict"] = verdict_name(verdict);
  j["theorem"] = {{"bound", to_fraction(theorem_bound)},
                  {"required", theorem_required},
                  {"pass", theorem_pass}};
  j["consistent"] = consistent;
  j["pass"] = pass;
  return j;
}

std::string VerifyReport::report_digest() const { return hex64(fnv1a(canonical_text())); }

}  // namespace ordmatch
