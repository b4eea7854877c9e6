/*
 *   Copyright 2026 The isolab Authors
 *
 *   Licensed under the Apache License, Version 2.0 (the "License");
 *   you may not use this file except in compliance with the License.
 *   You may obtain a copy of the License at
 *
 *       http://www.apache.org/licenses/LICENSE-2.0
 *
 *   Unless required by applicable law or agreed to in writing, software
 *   distributed under the License is distributed on an "AS IS" BASIS,
 *   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 *   See the License for the specific language governing permissions and
 *   limitations under the License.
 */

/**
 * @file experiments.hpp
 * @brief Named, seeded experiments with key=value configuration, aggregate
 * CSV rows, per-trial CSV tables and JSON summaries.
 *
 * Seeding: trial t of a run with master seed s draws from substream(s, t).
 * Instance data (witness sets, subspaces, random operators) draws from
 * substream(s, kInstanceStream). Experiments with several configurations
 * give configuration i the master seed child_seed(s, i).
 */
#pragma once

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <functional>
#include <istream>
#include <limits>
#include <map>
#include <numbers>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "isolab/circuit.hpp"
#include "isolab/haar.hpp"
#include "isolab/hamiltonian.hpp"
#include "isolab/hashfam.hpp"
#include "isolab/qoperator.hpp"
#include "isolab/random.hpp"
#include "isolab/reduction.hpp"
#include "isolab/stats.hpp"
#include "isolab/verifier.hpp"

namespace isolab {

inline constexpr std::uint64_t kInstanceStream = ~std::uint64_t{0};

inline std::uint64_t child_seed(std::uint64_t master, std::uint64_t index) {
  return splitmix64(splitmix64(master) + 0x632be59bd9b4e019ULL * (index + 1));
}

inline Rng instance_stream(std::uint64_t seed) { return substream(seed, kInstanceStream); }

// ---------------------------------------------------------------------------
// Configuration

/// Invalid configuration value; `field()` names the offending key.
class ConfigError : public std::invalid_argument {
 public:
  ConfigError(std::string field, const std::string& message)
      : std::invalid_argument("invalid field '" + field + "': " + message), field_(std::move(field)) {}

  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

inline std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(first, last - first + 1));
}

inline std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    out.push_back(trim(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

/// String-valued parameters with typed, range-checked accessors.
class Params {
 public:
  void set(const std::string& key, const std::string& value) { values_[key] = value; }
  bool has(const std::string& key) const { return values_.count(key) != 0; }
  const std::map<std::string, std::string>& values() const noexcept { return values_; }

  std::string text(const std::string& key) const {
    const auto it = values_.find(key);
    if (it == values_.end()) throw ConfigError(key, "missing value");
    return it->second;
  }

  std::uint64_t uint(const std::string& key, std::uint64_t lo,
                     std::uint64_t hi = std::numeric_limits<std::uint64_t>::max()) const {
    return parse_uint(key, text(key), lo, hi);
  }

  double real(const std::string& key, double lo, double hi) const {
    return parse_real(key, text(key), lo, hi);
  }

  static std::uint64_t parse_uint(const std::string& key, const std::string& token, std::uint64_t lo,
                                  std::uint64_t hi) {
    std::uint64_t value = 0;
    std::size_t used = 0;
    try {
      if (token.empty() || token[0] == '-') throw std::invalid_argument("sign");
      value = std::stoull(token, &used);
    } catch (const std::exception&) {
      throw ConfigError(key, "expected a non-negative integer, got '" + token + "'");
    }
    if (used != token.size()) throw ConfigError(key, "expected a non-negative integer, got '" + token + "'");
    if (value < lo || value > hi)
      throw ConfigError(key, "value " + token + " outside [" + std::to_string(lo) + ", " +
                                 std::to_string(hi) + "]");
    return value;
  }

  /// Decimal number or fraction "a/b".
  static double parse_real(const std::string& key, const std::string& token, double lo, double hi) {
    auto number = [&](const std::string& t) {
      std::size_t used = 0;
      double v = 0.0;
      try {
        v = std::stod(t, &used);
      } catch (const std::exception&) {
        throw ConfigError(key, "expected a number, got '" + token + "'");
      }
      if (used != t.size() || !std::isfinite(v)) throw ConfigError(key, "expected a number, got '" + token + "'");
      return v;
    };
    double value = 0.0;
    if (const auto slash = token.find('/'); slash != std::string::npos) {
      const double den = number(trim(token.substr(slash + 1)));
      if (den == 0.0) throw ConfigError(key, "zero denominator");
      value = number(trim(token.substr(0, slash))) / den;
    } else {
      value = number(token);
    }
    if (value < lo || value > hi)
      throw ConfigError(key, "value " + token + " outside [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
    return value;
  }

 private:
  std::map<std::string, std::string> values_;
};

/// key=value lines; '#' starts a comment.
inline Params parse_config(std::istream& in) {
  Params params;
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos || eq == 0)
      throw ConfigError("line " + std::to_string(number), "expected key=value");
    params.set(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  return params;
}

// ---------------------------------------------------------------------------
// Output tables

inline std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  void add_row(std::vector<std::string> row) {
    if (row.size() != header.size()) throw std::logic_error("csv row width does not match header");
    rows.push_back(std::move(row));
  }

  std::string str() const {
    std::string out;
    auto line = [&](const std::vector<std::string>& cells) {
      for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) out += ',';
        out += cells[i];
      }
      out += '\n';
    };
    line(header);
    for (const auto& row : rows) line(row);
    return out;
  }
};

/// One bound check. `bound` is NaN when the row only reports a value.
struct AggregateRow {
  std::string experiment;
  unsigned l = 0;
  std::string parameterization;
  std::uint64_t trials = 0;
  double estimate = 0.0;
  double stderr_ = 0.0;
  double bound = std::numeric_limits<double>::quiet_NaN();
  bool pass = true;
};

inline CsvTable aggregate_table(const std::vector<AggregateRow>& rows) {
  CsvTable t{{"experiment", "l", "parameterization", "trials", "estimate", "stderr", "bound", "pass"}, {}};
  for (const auto& r : rows)
    t.add_row({r.experiment, std::to_string(r.l), r.parameterization, std::to_string(r.trials),
               format_double(r.estimate), format_double(r.stderr_), format_double(r.bound),
               r.pass ? "true" : "false"});
  return t;
}

struct ExperimentOutcome {
  std::string experiment;
  std::vector<AggregateRow> rows;
  std::vector<std::pair<std::string, CsvTable>> trial_tables;  // file stem -> table
  nlohmann::json summary = nlohmann::json::object();

  bool pass() const {
    return std::all_of(rows.begin(), rows.end(), [](const AggregateRow& r) { return r.pass; });
  }

  std::string aggregate_csv() const { return aggregate_table(rows).str(); }

  /// Every CSV the run produces, concatenated in a fixed order.
  std::string all_csv() const {
    std::string out = aggregate_csv();
    for (const auto& [stem, table] : trial_tables) out += "## " + stem + '\n' + table.str();
    return out;
  }
};

inline nlohmann::json to_json(const ReductionReport& report) {
  nlohmann::json queries = nlohmann::json::array();
  for (const QueryRecord& q : report.queries)
    queries.push_back({{"k", q.k}, {"b", q.b}, {"classification", to_string(q.classification)},
                       {"answer", q.answer}});
  return {{"accepted", report.accepted}, {"queries", std::move(queries)},
          {"unique_yes_hits", report.unique_yes_hits}};
}

inline UniqueVerdict parse_unique_verdict(std::string_view name) {
  if (name == "UmappYes") return UniqueVerdict::UmappYes;
  if (name == "UmappNo") return UniqueVerdict::UmappNo;
  if (name == "Neither") return UniqueVerdict::Neither;
  throw std::invalid_argument("unknown classification '" + std::string(name) + "'");
}

inline ReductionReport report_from_json(const nlohmann::json& j) {
  ReductionReport r;
  r.accepted = j.at("accepted").get<bool>();
  r.unique_yes_hits = j.at("unique_yes_hits").get<std::size_t>();
  for (const auto& q : j.at("queries"))
    r.queries.push_back({q.at("k").get<unsigned>(), q.at("b").get<unsigned>(),
                         parse_unique_verdict(q.at("classification").get<std::string>()),
                         q.at("answer").get<bool>()});
  return r;
}

/// Summary object {mean, stderr, bound, pass} of one statistic.
inline nlohmann::json stat_summary(double mean, double stderr_, double bound, bool pass) {
  return {{"mean", mean}, {"stderr", stderr_}, {"bound", bound}, {"pass", pass}};
}

// ---------------------------------------------------------------------------
// Shared parameter parsing

inline unsigned witness_bits_param(const Params& p, const std::string& key = "l") {
  return static_cast<unsigned>(p.uint(key, 1, kDefaultMaxWitnessBits));
}

inline std::uint64_t seed_param(const Params& p) {
  if (!p.has("seed") || p.text("seed").empty()) throw ConfigError("seed", "a seed is required for randomized runs");
  return p.uint("seed", 0);
}

inline std::uint64_t trials_param(const Params& p, std::uint64_t cap = 10'000'000) {
  return p.uint("trials", 1, cap);
}

inline OraclePolicy policy_param(const Params& p) {
  try {
    return parse_policy(p.text("policy"));
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError("policy", e.what());
  }
}

/// Comma-separated pairs "a:b".
inline std::vector<std::pair<std::uint64_t, std::uint64_t>> pair_list(const Params& p, const std::string& key,
                                                                      std::uint64_t hi) {
  std::vector<std::pair<std::uint64_t, std::uint64_t>> out;
  for (const auto& item : split(p.text(key), ',')) {
    const auto parts = split(item, ':');
    if (parts.size() != 2) throw ConfigError(key, "expected a list of a:b pairs, got '" + item + "'");
    out.emplace_back(Params::parse_uint(key, parts[0], 0, hi), Params::parse_uint(key, parts[1], 0, hi));
  }
  return out;
}

inline std::vector<std::uint64_t> uint_list(const Params& p, const std::string& key, std::uint64_t lo,
                                            std::uint64_t hi) {
  std::vector<std::uint64_t> out;
  for (const auto& item : split(p.text(key), ',')) out.push_back(Params::parse_uint(key, item, lo, hi));
  return out;
}

inline std::vector<double> real_list(const Params& p, const std::string& key, double lo, double hi) {
  std::vector<double> out;
  for (const auto& item : split(p.text(key), ',')) out.push_back(Params::parse_real(key, item, lo, hi));
  return out;
}

/// Row for a completeness lower bound or, when `bound` is zero, for perfect
/// soundness (no acceptance at all).
inline AggregateRow acceptance_row(std::string experiment, unsigned l, std::string parameterization,
                                   const BinomialEstimate& est, double bound) {
  AggregateRow row{std::move(experiment), l, std::move(parameterization), est.trials, est.frequency(),
                   est.standard_error(), bound, true};
  row.pass = bound == 0.0 ? est.successes == 0 : respects_lower_bound(est, bound);
  return row;
}

/// Runs a reduction once per trial on substream t and collects the outcome.
template <typename Reduction>
ExperimentOutcome run_reduction_trials(const std::string& name, unsigned l, const std::string& parameterization,
                                       const Reduction& reduction, OraclePolicy policy, std::uint64_t trials,
                                       std::uint64_t seed, double bound) {
  ExperimentOutcome out;
  out.experiment = name;
  BinomialEstimate accepted, isolated;
  CsvTable per_trial{{"trial", "accepted", "unique_yes_hits", "queries"}, {}};
  for (std::uint64_t t = 0; t < trials; ++t) {
    Rng rng = substream(seed, t);
    const ReductionReport report = reduction.run(policy, rng);
    if (t == 0) out.summary["first_report"] = to_json(report);
    accepted.add(report.accepted);
    isolated.add(report.unique_yes_hits > 0);
    per_trial.add_row({std::to_string(t), report.accepted ? "1" : "0", std::to_string(report.unique_yes_hits),
                       std::to_string(report.queries.size())});
  }
  out.rows.push_back(acceptance_row(name, l, parameterization, accepted, bound));
  AggregateRow hits{name, l, parameterization + ";event=unique_yes_query", trials, isolated.frequency(),
                    isolated.standard_error()};
  out.rows.push_back(hits);
  out.trial_tables.emplace_back(name + "_trials", std::move(per_trial));
  out.summary["acceptance"] = stat_summary(accepted.frequency(), accepted.standard_error(), bound, out.rows[0].pass);
  return out;
}

// ---------------------------------------------------------------------------
// Experiments

struct ParamSpec {
  std::string name;
  std::string default_value;  // empty: no default
  std::string help;
};

struct ExperimentSpec {
  std::string name;
  std::string summary;
  bool randomized = true;
  std::vector<ParamSpec> params;
  /// Parses and checks every field; with `validate_only` returns right after.
  std::function<ExperimentOutcome(const Params&, bool validate_only)> run;
};

namespace detail {

inline const char* kSeedHelp = "master seed (required)";

// vv-np ---------------------------------------------------------------------

inline ExperimentOutcome run_vv_np(const Params& p, bool validate_only) {
  const unsigned l = witness_bits_param(p);
  const std::uint64_t w = p.uint("w", 0, std::uint64_t{1} << l);
  const std::uint64_t trials = trials_param(p);
  const std::uint64_t seed = seed_param(p);
  const OraclePolicy policy = policy_param(p);
  if (validate_only) return {};
  Rng inst = instance_stream(seed);
  const auto witnesses = sample_distinct_witnesses(l, w, inst);
  const NpReduction reduction(deterministic_table(l, witnesses));
  const std::string params = "w=" + std::to_string(w) + ";policy=" + to_string(policy);
  return run_reduction_trials("vv-np", l, params, reduction, policy, trials, seed, w == 0 ? 0.0 : 1.0 / 8.0);
}

// vv-ma ---------------------------------------------------------------------

inline ExperimentOutcome run_vv_ma(const Params& p, bool validate_only) {
  const unsigned l = witness_bits_param(p);
  if (l < 3) throw ConfigError("l", "the interval sweep needs l >= 3");
  const double p1 = p.real("p1", 0.0, 1.0);
  const double p2 = p.real("p2", 0.0, 1.0);
  if (!(p1 < p2)) throw ConfigError("p2", "need p1 < p2");
  const std::uint64_t reps = p.uint("reps", 0, kMaxRepetitions);
  const std::string kind = p.text("instance");
  const std::uint64_t trials = trials_param(p);
  const std::uint64_t seed = seed_param(p);
  const OraclePolicy policy = policy_param(p);
  if (kind != "problematic" && kind != "single" && kind != "no")
    throw ConfigError("instance", "expected problematic, single or no, got '" + kind + "'");
  if (validate_only) return {};
  Rng inst = instance_stream(seed);
  std::optional<PromiseInstance> instance;
  double bound = 0.0;
  if (kind == "problematic") {
    const auto w = sample_distinct_witnesses(l, 2, inst);
    instance = problematic_instance(l, p1, p2, w[0], w[1]);
    bound = 1.0 / 24.0;
  } else if (kind == "single") {
    instance = single_witness_instance(l, p1, p2, uniform_below(inst, std::uint64_t{1} << l));
    bound = 1.0 / 8.0;
  } else if (kind == "no") {
    instance = random_no_instance(l, p1, p2, inst);
  } else {
    throw ConfigError("instance", "expected problematic, single or no, got '" + kind + "'");
  }
  std::optional<MaReduction> reduction;
  try {
    reduction.emplace(*instance, reps == 0 ? std::nullopt : std::optional<std::uint64_t>(reps));
  } catch (const std::invalid_argument& e) {
    throw ConfigError("reps", e.what());
  } catch (const std::range_error& e) {
    throw ConfigError("p1", e.what());
  }
  const std::string params =
      "instance=" + kind + ";reps=" + std::to_string(reduction->reps()) + ";policy=" + to_string(policy);
  ExperimentOutcome out = run_reduction_trials("vv-ma", l, params, *reduction, policy, trials, seed, bound);
  out.summary["reps"] = reduction->reps();
  return out;
}

// vv-qcma -------------------------------------------------------------------

inline ExperimentOutcome run_vv_qcma(const Params& p, bool validate_only) {
  const unsigned l = witness_bits_param(p);
  if (l < 3) throw ConfigError("l", "the interval sweep needs l >= 3");
  const std::string kind = p.text("circuit");
  const std::uint64_t trials = trials_param(p);
  const std::uint64_t seed = seed_param(p);
  const OraclePolicy policy = policy_param(p);
  if (kind != "point" && kind != "no" && kind != "reject")
    throw ConfigError("circuit", "expected point, no or reject, got '" + kind + "'");
  if (kind == "point" && 2 * l - 1 > kDefaultMaxQubits)
    throw ConfigError("l", "point circuit needs 2l-1 <= " + std::to_string(kDefaultMaxQubits) + " qubits");
  if (validate_only) return {};
  Rng inst = instance_stream(seed);
  std::optional<Circuit> circuit;
  double bound = 0.0;
  try {
    if (kind == "point") {
      circuit = point_acceptor(l, uniform_below(inst, std::uint64_t{1} << l));
      bound = 1.0 / 8.0;
    } else if (kind == "no") {
      circuit = bounded_acceptor(l, 0.999 / l, inst);
    } else if (kind == "reject") {
      circuit = bounded_acceptor(l, 0.0, inst);
    } else {
      throw ConfigError("circuit", "expected point, no or reject, got '" + kind + "'");
    }
  } catch (const ConfigError&) {
    throw;
  } catch (const std::invalid_argument& e) {
    throw ConfigError("l", e.what());
  }
  const PromiseInstance table = basis_witness_table(*circuit, 1.0 / l, 1.0 - 1.0 / l);
  const QcmaReduction reduction(table);
  const std::string params = "circuit=" + kind + ";policy=" + std::string(to_string(policy));
  return run_reduction_trials("vv-qcma", l, params, reduction, policy, trials, seed, bound);
}

// isolation -----------------------------------------------------------------

inline ExperimentOutcome run_isolation(const Params& p, bool validate_only) {
  const unsigned l = witness_bits_param(p);
  const std::uint64_t universe = std::uint64_t{1} << l;
  std::vector<std::pair<std::uint64_t, std::uint64_t>> sizes;
  if (p.has("w") && !p.text("w").empty()) {
    sizes.emplace_back(p.uint("w", 1, universe), 0);
  } else {
    sizes = pair_list(p, "sizes", universe);
  }
  const std::uint64_t trials = trials_param(p);
  const std::uint64_t seed = seed_param(p);
  const std::uint64_t m_override = p.uint("m", 0, kMaxOutputBits);
  for (const auto& [a, b] : sizes) {
    if (a + b == 0) throw ConfigError("sizes", "S1 and S2 cannot both be empty");
    if (a + b > universe) throw ConfigError("sizes", "S1 and S2 do not fit in 2^l witnesses");
  }
  if (validate_only) return {};
  ExperimentOutcome out;
  out.experiment = "isolation";
  out.summary["results"] = nlohmann::json::array();
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    const auto [a, b] = sizes[i];
    if (a + b == 0) throw ConfigError("sizes", "S1 and S2 cannot both be empty");
    if (a + b > universe) throw ConfigError("sizes", "S1 and S2 do not fit in 2^l witnesses");
    const std::uint64_t s = child_seed(seed, i);
    Rng inst = instance_stream(s);
    const auto all = sample_distinct_witnesses(l, a + b, inst);
    const std::vector<Bits> s1(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(a));
    const std::vector<Bits> s2(all.begin() + static_cast<std::ptrdiff_t>(a), all.end());
    const unsigned m = m_override ? static_cast<unsigned>(m_override) : isolation_hash_bits(a + b);
    const BinomialEstimate est = estimate_isolation_probability(l, s1, s2, m, trials, s);
    const double bound = isolation_lower_bound(a, a + b);
    AggregateRow row{"isolation", l,
                     "S1=" + std::to_string(a) + ";S2=" + std::to_string(b) + ";m=" + std::to_string(m), trials,
                     est.frequency(), est.standard_error(), bound, true};
    row.pass = a == 0 ? est.successes == 0 : respects_lower_bound(est, bound);
    out.summary["results"].push_back({{"S1", a}, {"S2", b}, {"m", m}, {"estimate", est.frequency()},
                                      {"stderr", est.standard_error()}, {"bound", bound}, {"pass", row.pass}});
    out.rows.push_back(std::move(row));
  }
  return out;
}

// second-moment -------------------------------------------------------------

inline ExperimentOutcome run_second_moment(const Params& p, bool validate_only) {
  const auto nk = pair_list(p, "nk", 64);
  const std::uint64_t xs = p.uint("xs", 1, 100);
  const std::uint64_t trials = trials_param(p);
  const std::uint64_t seed = seed_param(p);
  for (const auto& [n, k] : nk)
    if (n < 1 || k > n) throw ConfigError("nk", "need 1 <= N and 0 <= k <= N");
  if (validate_only) return {};
  ExperimentOutcome out;
  out.experiment = "second-moment";
  out.summary["results"] = nlohmann::json::array();
  std::uint64_t index = 0;
  for (const auto& [n, k] : nk) {
    for (std::uint64_t x = 0; x < xs; ++x, ++index) {
      const std::uint64_t s = child_seed(seed, index);
      Rng inst = instance_stream(s);
      const CMatrix xm = random_traceless_hermitian(static_cast<std::ptrdiff_t>(n), inst);
      const double exact = second_moment_formula(static_cast<std::ptrdiff_t>(n), static_cast<std::ptrdiff_t>(k), xm);
      const RunningStats mc = mc_second_moment(static_cast<std::ptrdiff_t>(n), static_cast<std::ptrdiff_t>(k), xm, trials, s);
      const double se = mc.standard_error();
      const double weingarten =
          second_moment_weingarten(static_cast<std::ptrdiff_t>(n), static_cast<std::ptrdiff_t>(k), xm);
      auto within = [&](double target) {
        return std::abs(mc.mean - target) <= std::max(kSigmaSlack * se, 1e-12 * std::max(1.0, std::abs(target)));
      };
      const bool pass = within(exact);
      const bool weingarten_ok = within(weingarten);
      unsigned bits = 0;
      while ((std::uint64_t{1} << bits) < n) ++bits;
      const std::string tag = "N=" + std::to_string(n) + ";k=" + std::to_string(k) + ";X=" + std::to_string(x);
      out.rows.push_back({"second-moment", bits, tag + ";ref=closed_form", trials, mc.mean, se, exact, pass});
      out.rows.push_back(
          {"second-moment", bits, tag + ";ref=weingarten", trials, mc.mean, se, weingarten, weingarten_ok});
      out.summary["results"].push_back({{"N", n}, {"k", k}, {"x", x}, {"mean", mc.mean}, {"stderr", se},
                                        {"bound", exact}, {"pass", pass}, {"weingarten", weingarten},
                                        {"weingarten_pass", weingarten_ok}});
    }
  }
  return out;
}

// projection-gap ------------------------------------------------------------

inline std::ptrdiff_t rank_token(const std::string& token, std::ptrdiff_t n) {
  if (token == "half") return n / 2;
  if (token == "last") return n - 1;
  if (token == "N") return n;
  return static_cast<std::ptrdiff_t>(Params::parse_uint("d", token, 1, static_cast<std::uint64_t>(n)));
}

/// Orthonormal pair: Gram-Schmidt on two random states.
inline std::pair<CVector, CVector> random_orthonormal_pair(std::ptrdiff_t n, Rng& rng) {
  CVector a = random_state(static_cast<std::size_t>(n), rng);
  CVector b = random_state(static_cast<std::size_t>(n), rng);
  b -= a.dot(b) * a;
  b /= b.norm();
  return {a, b};
}

/// Top-two eigenvectors of a random acceptance operator.
inline std::pair<CVector, CVector> q_top_pair(unsigned l, Rng& rng) {
  const QOperator q = random_q_operator(l, rng);
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(q.matrix());
  const std::ptrdiff_t n = q.dim();
  return {solver.eigenvectors().col(n - 1), solver.eigenvectors().col(n - 2)};
}

inline ExperimentOutcome run_projection_gap(const Params& p, bool validate_only) {
  const auto ls = uint_list(p, "l", 1, kDefaultMaxQubits);
  const auto d_tokens = split(p.text("d"), ',');
  const auto eps = real_list(p, "eps", 1e-9, 1.0);
  const std::string subspace = p.text("subspace");
  if (subspace != "random" && subspace != "qtop") throw ConfigError("subspace", "expected random or qtop");
  const std::string sampling_name = p.text("sampling");
  ProjectionSampling sampling;
  if (sampling_name == "frame")
    sampling = ProjectionSampling::Frame;
  else if (sampling_name == "full")
    sampling = ProjectionSampling::FullUnitary;
  else
    throw ConfigError("sampling", "expected frame or full");
  const std::uint64_t trials = trials_param(p);
  const std::uint64_t seed = seed_param(p);
  for (const auto l : ls)
    for (const auto& tok : d_tokens) rank_token(tok, std::ptrdiff_t{1} << l);
  if (validate_only) return {};
  ExperimentOutcome out;
  out.experiment = "projection-gap";
  out.summary["results"] = nlohmann::json::array();
  std::uint64_t index = 0;
  for (const auto l64 : ls) {
    const auto l = static_cast<unsigned>(l64);
    const std::ptrdiff_t n = std::ptrdiff_t{1} << l;
    for (const auto& tok : d_tokens) {
      const std::ptrdiff_t d = rank_token(tok, n);
      const std::uint64_t s = child_seed(seed, index++);
      Rng inst = instance_stream(s);
      const auto [v0, v1] = subspace == "random" ? random_orthonormal_pair(n, inst) : q_top_pair(l, inst);
      const ProjectionExperimentResult r = projection_gap_experiment(l, d, trials, s, v0, v1, sampling);
      const std::string tag = "N=" + std::to_string(n) + ";d=" + std::to_string(d);
      const double bound = r.bound();
      const bool mean_ok = r.stats.mean <= bound;
      out.rows.push_back({"projection-gap", l, tag + ";stat=mean_gap", trials, r.stats.mean,
                          r.stats.standard_error(), bound, mean_ok});
      nlohmann::json entry = stat_summary(r.stats.mean, r.stats.standard_error(), bound, mean_ok);
      entry["l"] = l;
      entry["d"] = d;
      entry["max_gap"] = r.stats.max;
      entry["tails"] = nlohmann::json::array();
      for (const double e : eps) {
        const double tail = r.tail_fraction(bound / e);
        char eps_text[32];
        std::snprintf(eps_text, sizeof eps_text, "%g", e);
        out.rows.push_back({"projection-gap", l, tag + ";stat=tail;eps=" + eps_text, trials, tail,
                            std::sqrt(tail * (1.0 - tail) / static_cast<double>(trials)), e, tail <= e});
        entry["tails"].push_back({{"eps", e}, {"threshold", bound / e}, {"fraction", tail}, {"pass", tail <= e}});
      }
      out.rows.push_back({"projection-gap", l, tag + ";stat=gersgorin_violations", trials,
                          static_cast<double>(r.gersgorin_violations), 0.0, 0.0, r.gersgorin_violations == 0});
      entry["gersgorin_violations"] = r.gersgorin_violations;
      entry["pass"] = mean_ok && r.gersgorin_violations == 0;
      out.summary["results"].push_back(std::move(entry));
      CsvTable per_trial{{"trial", "gap"}, {}};
      for (std::size_t t = 0; t < r.gaps.size(); ++t) per_trial.add_row({std::to_string(t), format_double(r.gaps[t])});
      out.trial_tables.emplace_back("projection-gap_l" + std::to_string(l) + "_d" + std::to_string(d),
                                    std::move(per_trial));
    }
  }
  return out;
}

// basis-tvd -----------------------------------------------------------------

inline ExperimentOutcome run_basis_tvd(const Params& p, bool validate_only) {
  const auto ns = uint_list(p, "n", 2, std::uint64_t{1} << kDefaultMaxQubits);
  for (const auto n : ns)
    if (n & (n - 1)) throw ConfigError("n", "dimension " + std::to_string(n) + " is not a power of two");
  const double floor = p.real("floor", 0.0, 1.0);
  const std::uint64_t trials = trials_param(p);
  const std::uint64_t seed = seed_param(p);
  if (validate_only) return {};
  ExperimentOutcome out;
  out.experiment = "basis-tvd";
  out.summary["results"] = nlohmann::json::array();
  for (std::size_t i = 0; i < ns.size(); ++i) {
    const auto n = static_cast<std::ptrdiff_t>(ns[i]);
    unsigned l = 0;
    while ((std::ptrdiff_t{1} << l) < n) ++l;
    const std::uint64_t s = child_seed(seed, 2 * i);
    Rng inst = instance_stream(s);
    const auto [a, b] = random_orthonormal_pair(n, inst);
    const TvdResult ortho = random_basis_tvd(a, b, trials, s, floor);
    const bool ortho_ok = ortho.stats.mean >= floor;
    const TvdResult same = random_basis_tvd(a, a, trials, child_seed(seed, 2 * i + 1), floor);
    const bool same_ok = same.stats.max == 0.0 && same.stats.min == 0.0;
    const std::string tag = "N=" + std::to_string(n);
    out.rows.push_back({"basis-tvd", l, tag + ";pair=orthogonal", trials, ortho.stats.mean,
                        ortho.stats.standard_error(), floor, ortho_ok});
    out.rows.push_back({"basis-tvd", l, tag + ";pair=identical;stat=max", trials, same.stats.max, 0.0, 0.0, same_ok});
    nlohmann::json entry = stat_summary(ortho.stats.mean, ortho.stats.standard_error(), floor, ortho_ok);
    entry["N"] = n;
    entry["min"] = ortho.stats.min;
    entry["fraction_below_floor"] = ortho.fraction_below(floor);
    entry["identical_max"] = same.stats.max;
    out.summary["results"].push_back(std::move(entry));
    CsvTable per_trial{{"trial", "tvd"}, {}};
    for (std::size_t t = 0; t < ortho.tvds.size(); ++t)
      per_trial.add_row({std::to_string(t), format_double(ortho.tvds[t])});
    out.trial_tables.emplace_back("basis-tvd_N" + std::to_string(n), std::move(per_trial));
  }
  return out;
}

// lh-classify ---------------------------------------------------------------

struct DualSolverCheck {
  double max_difference = 0.0;  // relative to max(1, ||H||)
  std::vector<double> primary;
  std::vector<double> secondary;
};

inline DualSolverCheck dual_solver_check(const CMatrix& h, std::size_t count) {
  DualSolverCheck c;
  const std::vector<double> all = low_spectrum(h, static_cast<std::size_t>(h.rows()));
  c.primary.assign(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(count));
  c.secondary = low_spectrum_bisection(h, count);
  const double scale = std::max({1.0, std::abs(all.front()), std::abs(all.back())});
  for (std::size_t i = 0; i < count; ++i)
    c.max_difference = std::max(c.max_difference, std::abs(c.primary[i] - c.secondary[i]) / scale);
  return c;
}

inline ExperimentOutcome run_lh_classify(const Params& p, bool validate_only) {
  const std::string model = p.text("model");
  const double a = p.real("a", -1e6, 1e6);
  const double b = p.real("b", -1e6, 1e6);
  if (!(a < b)) throw ConfigError("b", "need a < b");
  std::optional<double> gap_threshold;
  if (p.has("gap-threshold") && !p.text("gap-threshold").empty())
    gap_threshold = p.real("gap-threshold", 0.0, 1e6);
  std::optional<ChainHamiltonian> h;
  try {
    if (model == "heisenberg") {
      h = heisenberg_chain(static_cast<unsigned>(p.uint("n", 2, 12)));
    } else if (model == "zz") {
      const auto n = static_cast<unsigned>(p.uint("n", 2, 12));
      h.emplace(n, 2);
      for (unsigned i = 1; i < n; ++i) h->add_term(i, zz_term());
    } else if (model == "random") {
      const auto n = static_cast<unsigned>(p.uint("n", 2, 12));
      const auto d = static_cast<unsigned>(p.uint("d", 2, 64));
      Rng inst = instance_stream(seed_param(p));
      h = random_chain(n, d, inst);
    } else if (model == "file") {
      std::ifstream in(p.text("file"));
      if (!in) throw ConfigError("file", "cannot open '" + p.text("file") + "'");
      h = read_hamiltonian(in);
    } else {
      throw ConfigError("model", "expected heisenberg, zz, random or file, got '" + model + "'");
    }
  } catch (const ConfigError&) {
    throw;
  } catch (const std::invalid_argument& e) {
    throw ConfigError(model == "file" ? "file" : "n", e.what());
  }
  if (validate_only) return {};
  const CMatrix dense = assemble_dense(*h);
  const DualSolverCheck dual = dual_solver_check(dense, 2);
  const GapReport report = classify_lh_spectrum(dual.primary[0], dual.primary[1], a, b, gap_threshold);
  ExperimentOutcome out;
  out.experiment = "lh-classify";
  const std::string tag = "model=" + model + ";n=" + std::to_string(h->sites()) + ";d=" + std::to_string(h->local_dim());
  out.rows.push_back({"lh-classify", h->sites(), tag + ";stat=dual_solver", 0, dual.max_difference, 0.0, 1e-8,
                      dual.max_difference <= 1e-8});
  if (report.unique_lh_yes)
    out.rows.push_back({"lh-classify", h->sites(), tag + ";stat=unique_gap", 0, report.gap, 0.0, b - a,
                        report.gap > b - a});
  out.summary = {{"lambda0", report.lambda0}, {"lambda1", report.lambda1}, {"gap", report.gap},
                 {"flags", report.flags()}, {"dual_solver_difference", dual.max_difference},
                 {"pass", out.pass()}};
  return out;
}

// eigen-surgery -------------------------------------------------------------

/// Largest deviation between the padded spectrum and the expected multiset.
inline double surgery_deviation(const QOperator& q, const QOperator& padded) {
  std::vector<double> expected = q.spectrum();
  expected.push_back(1.0 / 3.0);
  expected.insert(expected.end(), static_cast<std::size_t>(q.dim() - 1), 0.0);
  std::vector<double> actual = padded.spectrum();
  if (actual.size() != expected.size()) return std::numeric_limits<double>::infinity();
  std::sort(expected.begin(), expected.end());
  std::sort(actual.begin(), actual.end());
  double worst = 0.0;
  for (std::size_t i = 0; i < actual.size(); ++i) worst = std::max(worst, std::abs(actual[i] - expected[i]));
  return worst;
}

inline ExperimentOutcome run_eigen_surgery(const Params& p, bool validate_only) {
  const auto ls = uint_list(p, "l", 1, kDefaultMaxQubits - 1);
  const std::uint64_t count = p.uint("count", 1, 100000);
  const std::uint64_t seed = seed_param(p);
  if (validate_only) return {};
  ExperimentOutcome out;
  out.experiment = "eigen-surgery";
  out.summary["results"] = nlohmann::json::array();
  for (std::size_t i = 0; i < ls.size(); ++i) {
    const auto l = static_cast<unsigned>(ls[i]);
    double worst = 0.0;
    for (std::uint64_t c = 0; c < count; ++c) {
      Rng rng = substream(child_seed(seed, i), c);
      const QOperator q = random_q_operator(l, rng);
      worst = std::max(worst, surgery_deviation(q, add_third_eigenvalue(q)));
    }
    const bool pass = worst <= 1e-8;
    out.rows.push_back({"eigen-surgery", l, "count=" + std::to_string(count) + ";stat=max_deviation", count, worst,
                        0.0, 1e-8, pass});
    out.summary["results"].push_back({{"l", l}, {"max_deviation", worst}, {"pass", pass}});
  }
  return out;
}

// pairwise-exact ------------------------------------------------------------

/// Joint-event counts over the whole family for every y1 != y2 and (a, b);
/// returns the number of (y1, y2, a, b) cells whose count is not exact.
inline std::uint64_t pairwise_exact_mismatches(unsigned l, unsigned m) {
  const std::uint64_t inputs = std::uint64_t{1} << l;
  const std::uint64_t outputs = std::uint64_t{1} << m;
  std::vector<std::uint64_t> counts(inputs * inputs * outputs * outputs, 0);
  std::uint64_t members = 0;
  for_each_member(l, m, [&](const AffineHash& h) {
    ++members;
    std::vector<Bits> image(inputs);
    for (Bits y = 0; y < inputs; ++y) image[y] = h.apply(y);
    for (Bits y1 = 0; y1 < inputs; ++y1)
      for (Bits y2 = 0; y2 < inputs; ++y2)
        if (y1 != y2) ++counts[((y1 * inputs + y2) * outputs + image[y1]) * outputs + image[y2]];
  });
  const std::uint64_t expected = members / (outputs * outputs);
  std::uint64_t bad = 0;
  for (Bits y1 = 0; y1 < inputs; ++y1)
    for (Bits y2 = 0; y2 < inputs; ++y2)
      if (y1 != y2)
        for (Bits a = 0; a < outputs; ++a)
          for (Bits b = 0; b < outputs; ++b)
            if (counts[((y1 * inputs + y2) * outputs + a) * outputs + b] != expected) ++bad;
  return bad;
}

inline ExperimentOutcome run_pairwise_exact(const Params& p, bool validate_only) {
  const auto lm = pair_list(p, "lm", 20);
  for (const auto& [l, m] : lm) {
    if (l < 1) throw ConfigError("lm", "l must be at least 1");
    if (m * (l + 1) > 24) throw ConfigError("lm", "family 2^{m(l+1)} too large to enumerate");
  }
  if (validate_only) return {};
  ExperimentOutcome out;
  out.experiment = "pairwise-exact";
  for (const auto& [l, m] : lm) {
    const std::uint64_t bad = pairwise_exact_mismatches(static_cast<unsigned>(l), static_cast<unsigned>(m));
    const std::uint64_t members = std::uint64_t{1} << (m * (l + 1));
    out.rows.push_back({"pairwise-exact", static_cast<unsigned>(l),
                        "m=" + std::to_string(m) + ";stat=mismatched_cells", members, static_cast<double>(bad), 0.0,
                        0.0, bad == 0});
  }
  out.summary["pass"] = out.pass();
  return out;
}

// component1 ----------------------------------------------------------------

inline ExperimentOutcome run_component1(const Params& p, bool validate_only) {
  const std::uint64_t w_max = p.uint("w-max", 1, 100'000'000);
  if (validate_only) return {};
  double min_value = 1.0;
  double worst_relative = 0.0;
  for (std::uint64_t w = 1; w <= w_max; ++w) {
    const double v = component1_success_prob(w);
    const double wd = static_cast<double>(w);
    const double reference = std::pow(1.0 - 1.0 / wd, wd - 1.0);
    min_value = std::min(min_value, v);
    worst_relative = std::max(worst_relative, std::abs(v - reference) / reference);
  }
  const double inv_e = 1.0 / std::numbers::e;
  ExperimentOutcome out;
  out.experiment = "component1";
  out.rows.push_back({"component1", 0, "w=1.." + std::to_string(w_max) + ";stat=min", w_max, min_value, 0.0, inv_e,
                      min_value >= inv_e});
  out.rows.push_back({"component1", 0, "w=1.." + std::to_string(w_max) + ";stat=closed_form_rel_error", w_max,
                      worst_relative, 0.0, 1e-9, worst_relative <= 1e-9});
  out.summary = {{"min", min_value}, {"closed_form_rel_error", worst_relative}, {"pass", out.pass()}};
  return out;
}

// q-consistency -------------------------------------------------------------

inline ExperimentOutcome run_q_consistency(const Params& p, bool validate_only) {
  const std::uint64_t circuits = p.uint("circuits", 1, 10000);
  const std::uint64_t states = p.uint("states", 1, 100000);
  const auto max_qubits = static_cast<unsigned>(p.uint("max-qubits", 1, kDefaultMaxQubits));
  const std::uint64_t gates = p.uint("gates", 0, 100000);
  const std::uint64_t seed = seed_param(p);
  if (validate_only) return {};
  double worst = 0.0;
  CsvTable per_circuit{{"trial", "l", "m", "max_deviation"}, {}};
  for (std::uint64_t c = 0; c < circuits; ++c) {
    Rng rng = substream(seed, c);
    const auto l = static_cast<unsigned>(1 + uniform_below(rng, max_qubits));
    const auto m = static_cast<unsigned>(uniform_below(rng, max_qubits - l + 1));
    const Circuit circuit = random_circuit(l, m, gates, rng);
    const QOperator q = build_q_operator(circuit);
    double dev = 0.0;
    for (std::uint64_t s = 0; s < states; ++s) {
      const CVector psi = random_state(std::size_t{1} << l, rng);
      dev = std::max(dev, std::abs(q.expectation(psi) - simulate(circuit, psi)));
    }
    worst = std::max(worst, dev);
    per_circuit.add_row({std::to_string(c), std::to_string(l), std::to_string(m), format_double(dev)});
  }
  ExperimentOutcome out;
  out.experiment = "q-consistency";
  out.rows.push_back({"q-consistency", max_qubits,
                      "circuits=" + std::to_string(circuits) + ";states=" + std::to_string(states) +
                          ";stat=max_deviation",
                      circuits * states, worst, 0.0, 1e-9, worst <= 1e-9});
  out.trial_tables.emplace_back("q-consistency_circuits", std::move(per_circuit));
  out.summary = {{"max_deviation", worst}, {"pass", out.pass()}};
  return out;
}

template <typename Run>
ExperimentSpec make_spec(std::string name, std::string summary, bool randomized, std::vector<ParamSpec> params,
                         Run run) {
  return {std::move(name), std::move(summary), randomized, std::move(params), run};
}

}  // namespace detail

/// Every experiment, in a fixed order.
inline const std::vector<ExperimentSpec>& experiment_catalog() {
  using detail::kSeedHelp;
  using detail::make_spec;
  static const std::vector<ExperimentSpec> catalog = [] {
    std::vector<ExperimentSpec> c;
    c.push_back(make_spec("vv-np", "isolation reduction for a deterministic verifier", true,
                          {{"l", "10", "witness bits"},
                           {"w", "1", "number of accepting witnesses (0 gives a no-instance)"},
                           {"policy", "AnswerNo", "oracle answer off the promise: AnswerNo, AnswerYes, AnswerRandom"},
                           {"trials", "10000", "independent runs"},
                           {"seed", "", kSeedHelp}},
                          detail::run_vv_np));
    c.push_back(make_spec("vv-ma", "isolation reduction for a probabilistic verifier", true,
                          {{"l", "10", "witness bits"},
                           {"instance", "problematic", "problematic, single or no"},
                           {"p1", "1/3", "no threshold"},
                           {"p2", "2/3", "yes threshold"},
                           {"reps", "0", "amplification repetitions (0 searches the smallest)"},
                           {"policy", "AnswerNo", "oracle answer off the promise"},
                           {"trials", "10000", "independent runs"},
                           {"seed", "", kSeedHelp}},
                          detail::run_vv_ma));
    c.push_back(make_spec("vv-qcma", "isolation reduction for a circuit verifier on basis witnesses", true,
                          {{"l", "6", "witness qubits"},
                           {"circuit", "point", "point (accepts one basis witness), no (all <= 1/l) or reject"},
                           {"policy", "AnswerNo", "oracle answer off the promise"},
                           {"trials", "10000", "independent runs"},
                           {"seed", "", kSeedHelp}},
                          detail::run_vv_qcma));
    c.push_back(make_spec("isolation", "probability of isolating one element of S1 while discarding S2", true,
                          {{"l", "12", "witness bits"},
                           {"w", "", "shorthand for sizes=w:0"},
                           {"sizes", "5:0", "comma list of |S1|:|S2|"},
                           {"m", "0", "hash output bits (0 picks k+2)"},
                           {"trials", "100000", "sampled hashes"},
                           {"seed", "", kSeedHelp}},
                          detail::run_isolation));
    c.push_back(make_spec("second-moment", "E|tr(U P_k U* X)|^2 against its closed form", true,
                          {{"nk", "2:1,4:2,8:4,8:1", "comma list of N:k"},
                           {"xs", "3", "random traceless Hermitian X per (N, k)"},
                           {"trials", "100000", "Haar samples"},
                           {"seed", "", kSeedHelp}},
                          detail::run_second_moment));
    c.push_back(make_spec("projection-gap", "gap created on a 2-dim subspace by random rank-d projectors", true,
                          {{"l", "6,8,10", "comma list of qubit counts"},
                           {"d", "1,half,last", "comma list of ranks: integers, half, last (N-1) or N"},
                           {"eps", "0.1,0.5", "tail parameters"},
                           {"subspace", "random", "random or qtop"},
                           {"sampling", "frame", "frame or full"},
                           {"trials", "10000", "Haar samples"},
                           {"seed", "", kSeedHelp}},
                          detail::run_projection_gap));
    c.push_back(make_spec("basis-tvd", "distinguishability of two states in a Haar-random basis", true,
                          {{"n", "2,16,64", "comma list of dimensions (powers of two)"},
                           {"floor", "0.2", "required mean TVD for orthogonal pairs"},
                           {"trials", "10000", "random bases"},
                           {"seed", "", kSeedHelp}},
                          detail::run_basis_tvd));
    c.push_back(make_spec("lh-classify", "low spectrum and promise flags of a chain Hamiltonian", false,
                          {{"model", "heisenberg", "heisenberg, zz, random or file"},
                           {"n", "2", "sites"},
                           {"d", "2", "local dimension (random model)"},
                           {"a", "-2", "yes threshold"},
                           {"b", "0", "no threshold"},
                           {"gap-threshold", "", "optional spectral gap threshold"},
                           {"file", "", "Hamiltonian file (model=file)"},
                           {"seed", "", "seed (model=random)"}},
                          detail::run_lh_classify));
    c.push_back(make_spec("eigen-surgery", "spectrum of Q padded with one 1/3 eigenvalue", true,
                          {{"l", "1,2,3", "comma list of witness qubits"},
                           {"count", "20", "random operators per l"},
                           {"seed", "", kSeedHelp}},
                          detail::run_eigen_surgery));
    c.push_back(make_spec("pairwise-exact", "exact pairwise independence by full family enumeration", false,
                          {{"lm", "2:1,3:2", "comma list of l:m"}}, detail::run_pairwise_exact));
    c.push_back(make_spec("component1", "closed form (1-1/w)^{w-1} against 1/e", false,
                          {{"w-max", "1000000", "largest w"}}, detail::run_component1));
    c.push_back(make_spec("q-consistency", "<psi|Q|psi> against direct simulation", true,
                          {{"circuits", "50", "random circuits"},
                           {"states", "100", "random states per circuit"},
                           {"max-qubits", "10", "largest l+m"},
                           {"gates", "40", "gates per circuit"},
                           {"seed", "", kSeedHelp}},
                          detail::run_q_consistency));
    return c;
  }();
  return catalog;
}

inline const ExperimentSpec* find_experiment(std::string_view name) {
  for (const auto& spec : experiment_catalog())
    if (spec.name == name) return &spec;
  return nullptr;
}

/// Defaults filled in, unknown keys rejected.
inline Params resolve_params(const ExperimentSpec& spec, const Params& given) {
  Params out;
  for (const auto& ps : spec.params) out.set(ps.name, ps.default_value);
  for (const auto& [key, value] : given.values()) {
    const bool known = std::any_of(spec.params.begin(), spec.params.end(),
                                   [&](const ParamSpec& ps) { return ps.name == key; });
    if (!known) throw ConfigError(key, "not a parameter of " + spec.name);
    out.set(key, value);
  }
  if (spec.randomized) seed_param(out);
  return out;
}

/// Parses every field without running the experiment.
inline void validate_params(const ExperimentSpec& spec, const Params& given) {
  spec.run(resolve_params(spec, given), true);
}

inline ExperimentOutcome run_experiment(const ExperimentSpec& spec, const Params& given) {
  return spec.run(resolve_params(spec, given), false);
}

inline ExperimentOutcome run_experiment(std::string_view name, const Params& given) {
  const ExperimentSpec* spec = find_experiment(name);
  if (!spec) throw std::invalid_argument("unknown experiment '" + std::string(name) + "'");
  return run_experiment(*spec, given);
}

/// Builds Params from an initializer list of key/value pairs.
inline Params make_params(std::initializer_list<std::pair<std::string, std::string>> items) {
  Params p;
  for (const auto& [k, v] : items) p.set(k, v);
  return p;
}

}  // namespace isolab
