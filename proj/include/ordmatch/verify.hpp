#pragma once

#include "ordmatch/amplify.hpp"
#include "ordmatch/cleaning.hpp"
#include "ordmatch/farness.hpp"
#include "ordmatch/hypergraph.hpp"

#include "json.hpp"

#include <string>

namespace ordmatch {

struct VerifyOptions {
  int k = 2;
  SchemeMode mode = SchemeMode::exact;
  long long expand_cap = 10000;       // max copies materialized per stage family
  int sample = 5;                     // copies echoed into the report
  long long family_product_cap = 1000;  // product tuples sampled per family check
  long long farness_budget = 0;       // > 0 refines bounds by branch-and-bound
  int threads = 1;                    // parallelism for copy counting only
};

// One full pipeline run with every claimed inequality re-evaluated. The
// canonical text rendering is deterministic byte for byte: exact integers
// and fractions only, no timestamps, no floating point, independent of the
// thread count.
struct VerifyReport {
  std::string input_digest;
  std::string pattern_digest;
  int n = 0, s = 0, t = 0, m = 0;

  int k = 0;
  SchemeMode mode = SchemeMode::exact;
  long long r = 0;
  Rational eps, gamma, beta, delta;
  bool thresholds_integral = false;

  BigInt input_copies;
  LedgerReport ledger;
  SurvivalReport survival;
  long long pipeline_deletions = 0;  // strip + all cleaning rounds
  Rational deletion_allowance;       // eps * n^s (+ rounding slack in floor mode)
  bool witness_pass = false;         // pipeline_deletions < deletion_allowance

  bool gk_copy_found = false;
  Copy gk_witness;
  bool has_certificate = false;
  AmplificationCertificate certificate;
  long long families_checked = 0;
  long long family_failures = 0;
  long long product_tuples_checked = 0;

  FarnessReport farness;
  Rational eps_threshold;  // eps * n^s
  EpsFarVerdict verdict = EpsFarVerdict::indeterminate;
  Rational theorem_bound;  // delta^t * n^t, the certified-count floor
  bool theorem_required = false;  // only binding when the graph is provably far
  bool theorem_pass = false;
  bool consistent = false;  // a provably far graph must leave a copy in G_k

  bool pass = false;

  std::string canonical_text() const;
  nlohmann::ordered_json to_json() const;
  std::string report_digest() const;  // FNV-1a of canonical_text()
};

VerifyReport run_verify(const OrderedHypergraph& g, const OrderedMatchingPattern& h,
                        const VerifyOptions& options);

const char* verdict_name(EpsFarVerdict v);

}  // namespace ordmatch
