#include "ordmatch/cleaning.hpp"

#include "ordmatch/io.hpp"

#include "json.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <unordered_set>

namespace ordmatch {

namespace {

// As-even-as-possible split of [lo..hi] into q parts: the first (size % q)
// parts are one longer. Exact splits are the special case size % q == 0.
Interval split_part(const Interval& parent, long long q, long long p) {
  const long long z = parent.size();
  const long long base = z / q;
  const long long rem = z % q;
  const long long start = parent.lo + p * base + std::min(p, rem);
  const long long len = base + (p < rem ? 1 : 0);
  return Interval{static_cast<Vertex>(start), static_cast<Vertex>(start + len - 1)};
}

long long split_locate(const Interval& parent, long long q, Vertex v) {
  const long long z = parent.size();
  const long long base = z / q;
  const long long rem = z % q;
  const long long off = v - parent.lo;
  if (off < rem * (base + 1)) return off / (base + 1);
  return rem + (off - rem * (base + 1)) / base;
}

long long children_count(const IntervalScheme& scheme, const Interval& parent) {
  if (scheme.mode == SchemeMode::exact) return scheme.r;
  return std::min<long long>(scheme.r, parent.size());
}

Edge edge_with(const std::vector<Vertex>& tuple, Vertex w) {
  Edge e;
  e.reserve(tuple.size() + 1);
  auto it = std::lower_bound(tuple.begin(), tuple.end(), w);
  e.assign(tuple.begin(), it);
  e.push_back(w);
  e.insert(e.end(), it, tuple.end());
  return e;
}

}  // namespace

long long IntervalScheme::intervals_in_step(int l) const {
  long long total = 0;
  for (int j = 1; j <= t; ++j) {
    total += static_cast<long long>(level_intervals(l, j).size());
  }
  return total;
}

int IntervalScheme::top_index_of(Vertex v) const {
  if (v < 1 || v > n) {
    throw std::invalid_argument("top_index_of: vertex " + std::to_string(v) + " out of range");
  }
  return static_cast<int>(split_locate(Interval{1, static_cast<Vertex>(n)}, k, v)) + 1;
}

Interval IntervalScheme::interval_of(Vertex v, int j) const {
  if (j < 1 || j > t) throw std::invalid_argument("interval_of: level out of range");
  const int l = top_index_of(v);
  Interval iv = top(l);
  for (int jj = 2; jj <= j; ++jj) {
    const long long q = children_count(*this, iv);
    iv = split_part(iv, q, split_locate(iv, q, v));
  }
  return iv;
}

IntervalRef IntervalScheme::ref_of(Vertex v, int j) const {
  const Interval iv = interval_of(v, j);
  const int l = top_index_of(v);
  const auto& list = level_intervals(l, j);
  const auto it = std::lower_bound(list.begin(), list.end(), iv.lo,
                                   [](const Interval& a, Vertex lo) { return a.lo < lo; });
  return IntervalRef{l, j, static_cast<int>(it - list.begin())};
}

const Interval& IntervalScheme::at(const IntervalRef& ref) const {
  return level_intervals(ref.step, ref.level).at(static_cast<size_t>(ref.index));
}

IntervalRef IntervalScheme::find_in_step(int l, const Interval& J) const {
  if (l < 1 || l > k) throw std::invalid_argument("find_in_step: step out of range");
  for (int j = 1; j <= t; ++j) {
    const auto& list = level_intervals(l, j);
    const auto it = std::lower_bound(list.begin(), list.end(), J.lo,
                                     [](const Interval& a, Vertex lo) { return a.lo < lo; });
    if (it != list.end() && *it == J) {
      return IntervalRef{l, j, static_cast<int>(it - list.begin())};
    }
  }
  throw std::invalid_argument("interval [" + std::to_string(J.lo) + "," + std::to_string(J.hi) +
                              "] is not part of step " + std::to_string(l));
}

long long IntervalScheme::threshold(const Interval& J) const {
  const long long denom = 2LL * t * k;  // 1/beta
  const long long z = J.size();
  if (mode == SchemeMode::exact) return z / denom;
  return (z + denom - 1) / denom;
}

IntervalScheme build_scheme(int n, int k, int t, SchemeMode mode) {
  if (k < 1) throw std::invalid_argument("scheme: k must be at least 1");
  if (t < 1) throw std::invalid_argument("scheme: t must be at least 1");
  if (n < k) throw std::invalid_argument("scheme: need n >= k");
  IntervalScheme scheme;
  scheme.n = n;
  scheme.k = k;
  scheme.t = t;
  scheme.mode = mode;
  scheme.r = 4LL * t * k;
  scheme.eps = Rational(1, k);
  scheme.gamma = Rational(1, scheme.r);
  scheme.beta = Rational(1, 2LL * t * k);
  scheme.delta = rational_pow(scheme.gamma, static_cast<unsigned>(t) + 1);
  if (mode == SchemeMode::exact) {
    if (n % k != 0) {
      throw std::invalid_argument("exact scheme: k must divide n (" + std::to_string(k) +
                                  " does not divide " + std::to_string(n) + ")");
    }
    long long z = n / k;
    for (int j = 2; j <= t; ++j) {
      if (z % scheme.r != 0) {
        throw std::invalid_argument(
            "exact scheme: level-" + std::to_string(j) +
            " intervals would not have integral size; need r^(t-1) | n/k");
      }
      z /= scheme.r;
    }
  }
  scheme.levels.resize(static_cast<size_t>(k));
  const Interval whole{1, static_cast<Vertex>(n)};
  for (int l = 1; l <= k; ++l) {
    auto& per_level = scheme.levels[static_cast<size_t>(l) - 1];
    per_level.resize(static_cast<size_t>(t));
    per_level[0] = {split_part(whole, k, l - 1)};
    for (int j = 2; j <= t; ++j) {
      for (const Interval& parent : per_level[static_cast<size_t>(j) - 2]) {
        const long long q = children_count(scheme, parent);
        for (long long p = 0; p < q; ++p) {
          per_level[static_cast<size_t>(j) - 1].push_back(split_part(parent, q, p));
        }
      }
    }
  }
  const long long denom = 2LL * t * k;
  scheme.thresholds_integral = true;
  for (int l = 1; l <= k && scheme.thresholds_integral; ++l) {
    for (int j = 1; j <= t && scheme.thresholds_integral; ++j) {
      for (const Interval& J : scheme.level_intervals(l, j)) {
        if (J.size() % denom != 0) {
          scheme.thresholds_integral = false;
          break;
        }
      }
    }
  }
  return scheme;
}

const std::vector<Vertex>& CleaningTrace::lset_at(int step, const std::vector<Vertex>& tuple,
                                                  const IntervalRef& ref) const {
  static const std::vector<Vertex> empty;
  LSetKey key{step, ref.level, ref.index, tuple};
  const auto it = lsets.find(key);
  return it == lsets.end() ? empty : it->second;
}

std::pair<OrderedHypergraph, long long> strip_step(const OrderedHypergraph& g,
                                                   const IntervalScheme& scheme) {
  if (g.n != scheme.n) throw std::invalid_argument("strip_step: scheme built for different n");
  OrderedHypergraph out;
  out.n = g.n;
  out.s = g.s;
  long long removed = 0;
  for (const Edge& e : g.edges) {
    bool crowded = false;
    for (size_t i = 1; i < e.size() && !crowded; ++i) {
      // vertices are sorted, so a repeated top interval shows up adjacently
      crowded = scheme.top_index_of(e[i]) == scheme.top_index_of(e[i - 1]);
    }
    if (crowded) {
      ++removed;
    } else {
      out.edges.push_back(e);
    }
  }
  return {std::move(out), removed};
}

std::vector<Vertex> l_set(const OrderedHypergraph& g_prev, const IntervalScheme& scheme,
                          int step, const std::vector<Vertex>& tuple, const Interval& J) {
  if (static_cast<int>(tuple.size()) != g_prev.s - 1) {
    throw std::invalid_argument("l_set: tuple must have s-1 vertices");
  }
  for (size_t i = 0; i < tuple.size(); ++i) {
    if (tuple[i] < 1 || tuple[i] > g_prev.n) throw std::invalid_argument("l_set: vertex out of range");
    if (i > 0 && tuple[i] <= tuple[i - 1]) {
      throw std::invalid_argument("l_set: tuple must be strictly increasing");
    }
  }
  const Interval& I = scheme.top(step);
  for (Vertex v : tuple) {
    if (I.contains(v)) {
      throw std::invalid_argument("l_set: tuple vertex " + std::to_string(v) +
                                  " lies inside the step's top interval");
    }
  }
  scheme.find_in_step(step, J);  // validates J
  const long long B = scheme.threshold(J);
  std::vector<Vertex> left;
  for (Vertex w = J.lo; w <= J.hi && static_cast<long long>(left.size()) < B; ++w) {
    if (g_prev.has_edge(edge_with(tuple, w))) left.push_back(w);
  }
  return left;
}

CleanStepResult clean_step(const OrderedHypergraph& g_prev, const IntervalScheme& scheme,
                           int step) {
  if (step < 1 || step > scheme.k) throw std::invalid_argument("clean_step: step out of range");
  if (g_prev.n != scheme.n) throw std::invalid_argument("clean_step: scheme built for different n");
  const Interval& I = scheme.top(step);

  // Group surviving edges by their (s-1)-tuple outside I. Edges with no
  // vertex in I are untouched; edges with two or more have no admissible
  // tuple (those are gone after the strip anyway).
  std::map<std::vector<Vertex>, std::vector<Vertex>> incident;
  for (const Edge& e : g_prev.edges) {
    Vertex w = 0;
    int inside = 0;
    for (Vertex v : e) {
      if (I.contains(v)) {
        w = v;
        ++inside;
      }
    }
    if (inside != 1) continue;
    std::vector<Vertex> tuple;
    tuple.reserve(e.size() - 1);
    for (Vertex v : e) {
      if (v != w) tuple.push_back(v);
    }
    incident[std::move(tuple)].push_back(w);
  }

  CleanStepResult res;
  res.per_level.assign(static_cast<size_t>(scheme.t), 0);
  std::unordered_set<Edge, EdgeHash> doomed;
  for (auto& entry : incident) {
    const std::vector<Vertex>& tuple = entry.first;
    std::vector<Vertex>& ws = entry.second;
    std::sort(ws.begin(), ws.end());
    for (int j = 1; j <= scheme.t; ++j) {
      size_t i = 0;
      while (i < ws.size()) {
        const IntervalRef ref = scheme.ref_of(ws[i], j);
        const Interval& J = scheme.at(ref);
        size_t end = i;
        while (end < ws.size() && ws[end] <= J.hi) ++end;
        const long long take =
            std::min<long long>(scheme.threshold(J), static_cast<long long>(end - i));
        if (take > 0) {
          std::vector<Vertex> chosen(ws.begin() + static_cast<long>(i),
                                     ws.begin() + static_cast<long>(i) + take);
          for (Vertex w : chosen) doomed.insert(edge_with(tuple, w));
          res.per_level[static_cast<size_t>(j) - 1] += take;
          res.lsets[LSetKey{step, j, ref.index, tuple}] = std::move(chosen);
        }
        i = end;
      }
    }
  }
  res.deletions = static_cast<long long>(doomed.size());
  res.result = delete_edges(g_prev, std::vector<Edge>(doomed.begin(), doomed.end()));
  return res;
}

CleaningTrace clean_all(const OrderedHypergraph& g, const IntervalScheme& scheme) {
  CleaningTrace trace;
  trace.scheme = scheme;
  trace.s = g.s;
  trace.input = g;
  auto [g0, stripped] = strip_step(g, scheme);
  trace.ledger.strip_deletions = stripped;
  trace.stages.push_back(std::move(g0));
  for (int l = 1; l <= scheme.k; ++l) {
    CleanStepResult step = clean_step(trace.stages.back(), scheme, l);
    trace.ledger.per_step.push_back(step.deletions);
    trace.ledger.per_level.push_back(std::move(step.per_level));
    trace.lsets.merge(step.lsets);
    trace.stages.push_back(std::move(step.result));
  }
  return trace;
}

LedgerReport verify_ledger(const CleaningTrace& trace) {
  LedgerReport report;
  const IntervalScheme& scheme = trace.scheme;
  const int s = trace.s;
  const BigInt n_pow_s = bigint_pow(scheme.n, static_cast<unsigned>(s));
  const BigInt n_pow_s1 = bigint_pow(scheme.n, static_cast<unsigned>(s - 1));
  const Rational half_eps_ns = scheme.eps / 2 * Rational(n_pow_s);
  const bool exact = scheme.mode == SchemeMode::exact;

  auto push = [&report](const std::string& name, const Rational& lhs, const Rational& rhs,
                        const std::string& relation) {
    bool pass = false;
    if (relation == "<") pass = lhs < rhs;
    else if (relation == "<=") pass = lhs <= rhs;
    else pass = lhs == rhs;
    report.checks.push_back(InequalityCheck{name, lhs, rhs, relation, pass});
    report.all_pass = report.all_pass && pass;
  };

  push("strip < (eps/2) n^s", Rational(trace.ledger.strip_deletions), half_eps_ns, "<");

  Rational total = 0;
  Rational total_rhs = half_eps_ns;
  for (int l = 1; l <= scheme.k; ++l) {
    const Rational deleted(trace.ledger.per_step[static_cast<size_t>(l) - 1]);
    total += deleted;
    Rational rhs = Rational(scheme.t) * scheme.beta * Rational(n_pow_s1) *
                   Rational(scheme.top(l).size());
    if (!exact) {
      // thresholds round up, each by strictly less than one selection
      const Rational slack =
          Rational(scheme.t) * Rational(n_pow_s1) * Rational(scheme.intervals_in_step(l));
      rhs += slack;
      total_rhs += slack;
    }
    push("step " + std::to_string(l) + " <= t beta n^(s-1) |I_" + std::to_string(l) + "|" +
             (exact ? "" : " + slack"),
         deleted, rhs, "<=");
  }
  push(exact ? "total cleaning < (eps/2) n^s" : "total cleaning < (eps/2) n^s + slack", total,
       total_rhs, "<");

  for (int l = 1; l <= scheme.k; ++l) {
    const long long diff = trace.stage(l - 1).edge_count() - trace.stage(l).edge_count();
    push("step " + std::to_string(l) + " distinct deletions == stage edge drop",
         Rational(trace.ledger.per_step[static_cast<size_t>(l) - 1]), Rational(diff), "==");
    long long selections = 0;
    for (long long c : trace.ledger.per_level[static_cast<size_t>(l) - 1]) selections += c;
    push("step " + std::to_string(l) + " distinct deletions <= selections",
         Rational(trace.ledger.per_step[static_cast<size_t>(l) - 1]), Rational(selections),
         "<=");
  }
  return report;
}

SurvivalReport check_survival(const CleaningTrace& trace) {
  SurvivalReport report;
  const IntervalScheme& scheme = trace.scheme;
  auto note = [&report](const std::string& text) {
    if (report.details.size() < 20) report.details.push_back(text);
    ++report.violations;
  };
  for (int l = 1; l <= scheme.k; ++l) {
    for (const Edge& e : trace.stage(l).edges) {
      for (Vertex w : e) {
        const int lw = scheme.top_index_of(w);
        if (lw > l) continue;  // that top interval has not been cleaned yet
        std::vector<Vertex> tuple;
        tuple.reserve(e.size() - 1);
        bool tuple_ok = true;
        for (Vertex v : e) {
          if (v == w) continue;
          if (scheme.top_index_of(v) == lw) tuple_ok = false;
          tuple.push_back(v);
        }
        if (!tuple_ok) {
          note("stage " + std::to_string(l) + ": edge has two vertices in top interval " +
               std::to_string(lw));
          continue;
        }
        for (int j = 1; j <= scheme.t; ++j) {
          const IntervalRef ref = scheme.ref_of(w, j);
          const std::vector<Vertex>& left = trace.lset_at(lw, tuple, ref);
          const long long B = scheme.threshold(scheme.at(ref));
          ++report.checks_run;
          const bool full = static_cast<long long>(left.size()) == B;
          const bool strictly_left = left.empty() || left.back() < w;
          if (!full || !strictly_left) {
            note("stage " + std::to_string(l) + " w=" + std::to_string(w) + " level " +
                 std::to_string(j) + ": |L|=" + std::to_string(left.size()) + " B=" +
                 std::to_string(B) + (strictly_left ? "" : " (element right of w)"));
          }
        }
      }
    }
  }
  return report;
}

const char* mode_name(SchemeMode mode) {
  return mode == SchemeMode::exact ? "exact" : "floor";
}

SchemeMode parse_mode(const std::string& name) {
  if (name == "exact") return SchemeMode::exact;
  if (name == "floor") return SchemeMode::floor;
  throw std::invalid_argument("unknown scheme mode '" + name + "'");
}

void save_trace(const CleaningTrace& trace, const std::string& dir) {
  namespace fs = std::filesystem;
  fs::create_directories(dir);
  const fs::path root(dir);

  nlohmann::ordered_json meta;
  meta["n"] = trace.scheme.n;
  meta["k"] = trace.scheme.k;
  meta["t"] = trace.scheme.t;
  meta["s"] = trace.s;
  meta["mode"] = mode_name(trace.scheme.mode);
  meta["r"] = trace.scheme.r;
  meta["eps"] = to_fraction(trace.scheme.eps);
  meta["gamma"] = to_fraction(trace.scheme.gamma);
  meta["beta"] = to_fraction(trace.scheme.beta);
  meta["delta"] = to_fraction(trace.scheme.delta);
  meta["thresholds_integral"] = trace.scheme.thresholds_integral;
  meta["input_digest"] = hex64(digest(trace.input));
  write_file((root / "scheme.json").string(), meta.dump(2) + "\n");

  write_file((root / "stage_input.txt").string(), serialize(trace.input));
  for (size_t l = 0; l < trace.stages.size(); ++l) {
    write_file((root / ("stage_" + std::to_string(l) + ".txt")).string(),
               serialize(trace.stages[l]));
  }

  std::ostringstream ledger;
  ledger << "step,level,deletions\n";
  ledger << "0,0," << trace.ledger.strip_deletions << "\n";
  for (size_t l = 0; l < trace.ledger.per_step.size(); ++l) {
    ledger << (l + 1) << ",0," << trace.ledger.per_step[l] << "\n";
    for (size_t j = 0; j < trace.ledger.per_level[l].size(); ++j) {
      ledger << (l + 1) << "," << (j + 1) << "," << trace.ledger.per_level[l][j] << "\n";
    }
  }
  write_file((root / "ledger.csv").string(), ledger.str());

  std::ostringstream lsets;
  for (const auto& [key, members] : trace.lsets) {
    lsets << key.step << ' ' << key.level << ' ' << key.index;
    for (Vertex v : key.tuple) lsets << ' ' << v;
    lsets << " :";
    for (Vertex v : members) lsets << ' ' << v;
    lsets << '\n';
  }
  write_file((root / "lsets.txt").string(), lsets.str());
}

CleaningTrace load_trace(const std::string& dir) {
  namespace fs = std::filesystem;
  const fs::path root(dir);
  const nlohmann::json meta = nlohmann::json::parse(read_file((root / "scheme.json").string()));

  CleaningTrace trace;
  trace.scheme = build_scheme(meta.at("n").get<int>(), meta.at("k").get<int>(),
                              meta.at("t").get<int>(), parse_mode(meta.at("mode").get<std::string>()));
  trace.s = meta.at("s").get<int>();
  trace.input = load_hypergraph((root / "stage_input.txt").string());
  for (int l = 0; l <= trace.scheme.k; ++l) {
    trace.stages.push_back(load_hypergraph((root / ("stage_" + std::to_string(l) + ".txt")).string()));
  }

  trace.ledger.per_step.assign(static_cast<size_t>(trace.scheme.k), 0);
  trace.ledger.per_level.assign(static_cast<size_t>(trace.scheme.k),
                                std::vector<long long>(static_cast<size_t>(trace.scheme.t), 0));
  std::istringstream ledger(read_file((root / "ledger.csv").string()));
  std::string line;
  std::getline(ledger, line);  // header
  while (std::getline(ledger, line)) {
    if (line.empty()) continue;
    long long step = 0, level = 0, deletions = 0;
    char c1 = 0, c2 = 0;
    std::istringstream row(line);
    if (!(row >> step >> c1 >> level >> c2 >> deletions) || c1 != ',' || c2 != ',') {
      throw ParseError("trace ledger: bad row '" + line + "'");
    }
    if (step == 0) {
      trace.ledger.strip_deletions = deletions;
    } else if (level == 0) {
      trace.ledger.per_step.at(static_cast<size_t>(step) - 1) = deletions;
    } else {
      trace.ledger.per_level.at(static_cast<size_t>(step) - 1)
          .at(static_cast<size_t>(level) - 1) = deletions;
    }
  }

  std::istringstream lsets(read_file((root / "lsets.txt").string()));
  while (std::getline(lsets, line)) {
    if (line.empty()) continue;
    std::istringstream row(line);
    LSetKey key;
    row >> key.step >> key.level >> key.index;
    key.tuple.resize(static_cast<size_t>(trace.s) - 1);
    for (Vertex& v : key.tuple) row >> v;
    std::string colon;
    row >> colon;
    if (colon != ":") throw ParseError("trace lsets: bad row '" + line + "'");
    std::vector<Vertex> members;
    Vertex w = 0;
    while (row >> w) members.push_back(w);
    trace.lsets.emplace(std::move(key), std::move(members));
  }
  return trace;
}

}  // namespace ordmatch
