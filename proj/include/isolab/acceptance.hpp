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
 * @file acceptance.hpp
 * @brief The fourteen acceptance criteria, each a fixed experiment
 * configuration with a fixed seed.
 */
#pragma once

#include <algorithm>
#include <chrono>
#include <iomanip>
#include <cstdint>
#include <cstdio>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "isolab/experiments.hpp"
#include "isolab/hamiltonian.hpp"

namespace isolab {

inline constexpr unsigned kCriterionCount = 14;
inline constexpr std::uint64_t kAcceptanceSeed = 20260101;

struct CriterionResult {
  unsigned id = 0;
  std::string title;
  bool pass = false;
  std::string detail;
  std::string csv;  // every CSV byte the criterion produced
  double seconds = 0.0;
  bool randomized = false;
};

namespace detail {

inline std::string brief(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

inline std::string seed_text(std::uint64_t offset = 0) { return std::to_string(kAcceptanceSeed + offset); }

inline std::string worst_row(const ExperimentOutcome& out) {
  for (const auto& row : out.rows)
    if (!row.pass)
      return "FAILED " + row.parameterization + " estimate=" + brief(row.estimate) +
             " bound=" + brief(row.bound);
  return std::to_string(out.rows.size()) + " checks";
}

inline CriterionResult from_outcomes(unsigned id, std::string title, const std::vector<ExperimentOutcome>& outs,
                                     std::string detail = {}) {
  CriterionResult r{id, std::move(title), true, std::move(detail), {}, 0.0, false};
  std::string rows_detail;
  for (const auto& out : outs) {
    r.pass = r.pass && out.pass();
    r.csv += out.all_csv();
    if (!rows_detail.empty()) rows_detail += "; ";
    rows_detail += out.experiment + ": " + worst_row(out);
  }
  if (r.detail.empty()) r.detail = rows_detail;
  while (!r.detail.empty() && (r.detail.back() == ' ' || r.detail.back() == ';')) r.detail.pop_back();
  return r;
}

inline ExperimentOutcome run(std::string_view name, std::initializer_list<std::pair<std::string, std::string>> kv) {
  return run_experiment(name, make_params(kv));
}

inline CriterionResult criterion_pairwise() {
  auto out = run("pairwise-exact", {{"lm", "2:1,3:2"}});
  return from_outcomes(1, "pairwise independence, exact enumeration", {out});
}

inline CriterionResult criterion_single_set_isolation() {
  auto out = run("isolation", {{"l", "12"}, {"sizes", "3:0,5:0,9:0,17:0"}, {"trials", "100000"}, {"seed", seed_text(2)}});
  std::ostringstream detail;
  for (const auto& row : out.rows)
    detail << row.parameterization << " est=" << brief(row.estimate) << (row.pass ? "" : " FAIL") << "; ";
  return from_outcomes(2, "single-set isolation >= 1/8", {out}, detail.str());
}

inline CriterionResult criterion_two_set_isolation() {
  auto out = run("isolation", {{"l", "12"}, {"sizes", "4:4,2:14,8:8"}, {"trials", "100000"}, {"seed", seed_text(3)}});
  std::ostringstream detail;
  for (const auto& row : out.rows)
    detail << row.parameterization << " est=" << brief(row.estimate) << " bound=" << brief(row.bound)
           << (row.pass ? "" : " FAIL") << "; ";
  return from_outcomes(3, "two-set isolation >= a/(8b)", {out}, detail.str());
}

inline CriterionResult criterion_component1() {
  auto out = run("component1", {{"w-max", "1000000"}});
  return from_outcomes(4, "(1-1/w)^{w-1} >= 1/e for w in [1, 10^6]", {out});
}

inline CriterionResult criterion_soundness() {
  std::vector<ExperimentOutcome> outs;
  std::uint64_t offset = 0;
  for (const char* policy : {"AnswerNo", "AnswerYes", "AnswerRandom"}) {
    outs.push_back(run("vv-np", {{"l", "10"}, {"w", "0"}, {"policy", policy}, {"trials", "10000"}, {"seed", seed_text(50 + offset)}}));
    outs.push_back(run("vv-ma", {{"l", "10"}, {"instance", "no"}, {"policy", policy}, {"trials", "10000"}, {"seed", seed_text(51 + offset)}}));
    outs.push_back(run("vv-qcma", {{"l", "10"}, {"circuit", "no"}, {"policy", policy}, {"trials", "10000"}, {"seed", seed_text(52 + offset)}}));
    offset += 3;
  }
  std::uint64_t accepted = 0;
  for (const auto& o : outs) accepted += static_cast<std::uint64_t>(o.rows[0].estimate * static_cast<double>(o.rows[0].trials) + 0.5);
  return from_outcomes(5, "perfect soundness on no-instances, all policies", outs,
                       "9 runs x 10000 trials, accepting runs: " + std::to_string(accepted));
}

inline CriterionResult criterion_completeness() {
  auto out = run("vv-ma", {{"l", "10"}, {"instance", "problematic"}, {"policy", "AnswerNo"}, {"trials", "10000"}, {"seed", seed_text(6)}});
  const auto& row = out.rows[0];
  return from_outcomes(6, "completeness on the two-witness instance >= 1/24", {out},
                       "estimate=" + brief(row.estimate) + " stderr=" + brief(row.stderr_) +
                           " bound=" + brief(row.bound) + " reps=" + out.summary["reps"].dump());
}

inline CriterionResult criterion_q_consistency() {
  auto out = run("q-consistency", {{"circuits", "50"}, {"states", "100"}, {"max-qubits", "10"}, {"gates", "40"}, {"seed", seed_text(7)}});
  return from_outcomes(7, "<psi|Q|psi> = simulate to 1e-9", {out},
                       "max deviation " + brief(out.rows[0].estimate));
}

inline CriterionResult criterion_surgery() {
  auto out = run("eigen-surgery", {{"l", "1,2,3"}, {"count", "20"}, {"seed", seed_text(8)}});
  double worst = 0.0;
  for (const auto& row : out.rows) worst = std::max(worst, row.estimate);
  return from_outcomes(8, "padded spectrum = input + {1/3} + zeros", {out}, "max deviation " + brief(worst));
}

inline CriterionResult criterion_second_moment() {
  auto out = run("second-moment", {{"nk", "2:1,4:2,8:4,8:1"}, {"xs", "3"}, {"trials", "100000"}, {"seed", seed_text(9)}});
  double worst_closed = 0.0, worst_weingarten = 0.0, ratio_lo = 1e300, ratio_hi = 0.0;
  std::size_t cases = 0;
  for (const auto& row : out.rows) {
    const bool closed = row.parameterization.find("ref=closed_form") != std::string::npos;
    if (closed) ++cases;
    if (closed && row.bound > 0.0) {
      ratio_lo = std::min(ratio_lo, row.estimate / row.bound);
      ratio_hi = std::max(ratio_hi, row.estimate / row.bound);
    }
    if (row.stderr_ <= 0.0) continue;
    const double z = std::abs(row.estimate - row.bound) / row.stderr_;
    (closed ? worst_closed : worst_weingarten) = std::max(closed ? worst_closed : worst_weingarten, z);
  }
  return from_outcomes(9, "Haar second moment matches closed form within 3 sigma", {out},
                       std::to_string(cases) + " cases, worst |z| vs closed form = " + brief(worst_closed) +
                           ", estimate/closed form in [" + brief(ratio_lo) + ", " + brief(ratio_hi) +
                           "], worst |z| vs k(N-k)tr(X*X)/(N(N^2-1)) = " + brief(worst_weingarten));
}

inline const ExperimentOutcome& projection_outcome() {
  static const ExperimentOutcome out = run(
      "projection-gap", {{"l", "6,8,10"}, {"d", "1,half,last"}, {"eps", "0.1,0.5"}, {"trials", "10000"}, {"seed", seed_text(10)}});
  return out;
}

inline CriterionResult criterion_projection() {
  ExperimentOutcome out = projection_outcome();
  out.rows.erase(std::remove_if(out.rows.begin(), out.rows.end(),
                                [](const AggregateRow& r) {
                                  return r.parameterization.find("gersgorin") != std::string::npos;
                                }),
                 out.rows.end());
  std::ostringstream detail;
  for (const auto& row : out.rows)
    if (row.parameterization.find("mean_gap") != std::string::npos)
      detail << "l=" << row.l << ' ' << row.parameterization.substr(0, row.parameterization.find(";stat"))
             << " mean=" << brief(row.estimate) << "/" << brief(row.bound) << (row.pass ? "" : " FAIL")
             << "; ";
  return from_outcomes(10, "random projection gap: mean <= 2^{-l/2+2}, Markov tails", {out}, detail.str());
}

inline CriterionResult criterion_gersgorin() {
  ExperimentOutcome out = projection_outcome();
  out.rows.erase(std::remove_if(out.rows.begin(), out.rows.end(),
                                [](const AggregateRow& r) {
                                  return r.parameterization.find("gersgorin") == std::string::npos;
                                }),
                 out.rows.end());
  out.trial_tables.clear();
  double violations = 0.0;
  std::uint64_t trials = 0;
  for (const auto& row : out.rows) {
    violations += row.estimate;
    trials += row.trials;
  }
  return from_outcomes(11, "Gersgorin bound in every projection trial", {out},
                       brief(violations) + " violations in " + std::to_string(trials) + " trials");
}

inline CriterionResult criterion_tvd() {
  auto out = run("basis-tvd", {{"n", "2,16,64"}, {"floor", "0.2"}, {"trials", "10000"}, {"seed", seed_text(12)}});
  std::ostringstream detail;
  for (const auto& row : out.rows)
    if (row.parameterization.find("orthogonal") != std::string::npos)
      detail << row.parameterization.substr(0, row.parameterization.find(';')) << " mean=" << brief(row.estimate)
             << (row.pass ? "" : " FAIL") << "; ";
  return from_outcomes(12, "random-basis TVD: identical = 0, orthogonal mean >= 0.2", {out}, detail.str());
}

inline CriterionResult criterion_hamiltonian() {
  CriterionResult r{13, "chain spectra: Heisenberg, dual solver, unique gap", true, {}, {}, 0.0, true};
  CsvTable table{{"instance", "n", "d", "lambda0", "lambda1", "dual_difference", "unique", "gap_ok"}, {}};
  // Heisenberg pair.
  const CMatrix h2 = assemble_dense(heisenberg_chain(2));
  const auto spectrum = low_spectrum(h2, 4);
  const double expected[] = {-3.0, 1.0, 1.0, 1.0};
  double heis_dev = 0.0;
  for (int i = 0; i < 4; ++i) heis_dev = std::max(heis_dev, std::abs(spectrum[static_cast<std::size_t>(i)] - expected[i]));
  const bool heis_ok = heis_dev <= 1e-8;
  // Random chains: n in [2, 6], d in {2, 3}, d^n within the cap.
  double worst_dual = 0.0;
  std::size_t unique_count = 0;
  bool gap_ok = true;
  for (std::uint64_t i = 0; i < 20; ++i) {
    Rng rng = substream(kAcceptanceSeed + 13, i);
    const auto d = static_cast<unsigned>(2 + uniform_below(rng, 2));
    const auto n = static_cast<unsigned>(2 + uniform_below(rng, d == 2 ? 5 : 4));
    const ChainHamiltonian h = random_chain(n, d, rng);
    const CMatrix dense = assemble_dense(h);
    const DualSolverCheck dual = detail::dual_solver_check(dense, 2);
    worst_dual = std::max(worst_dual, dual.max_difference);
    // a a quarter of the way from lambda0 to lambda1, b past the midpoint.
    const double a = dual.primary[0] + 0.25 * (dual.primary[1] - dual.primary[0]);
    const double b = dual.primary[0] + (0.5 + 0.6 * uniform01(rng)) * (dual.primary[1] - dual.primary[0]);
    const GapReport rep = classify_lh_spectrum(dual.primary[0], dual.primary[1], a, b);
    bool this_gap = true;
    if (rep.unique_lh_yes) {
      ++unique_count;
      this_gap = rep.gap > b - a;
      gap_ok = gap_ok && this_gap;
    }
    table.add_row({"random" + std::to_string(i), std::to_string(n), std::to_string(d), brief(dual.primary[0]),
                   brief(dual.primary[1]), brief(dual.max_difference), rep.unique_lh_yes ? "1" : "0",
                   this_gap ? "1" : "0"});
  }
  // Heisenberg pair with a = -2, b = 0 is a unique yes-instance.
  const GapReport heis = classify_lh(heisenberg_chain(2), -2.0, 0.0);
  gap_ok = gap_ok && heis.unique_lh_yes && heis.gap > 2.0;
  r.pass = heis_ok && worst_dual <= 1e-8 && gap_ok && unique_count > 0;
  r.csv = table.str();
  r.detail = "heisenberg deviation " + brief(heis_dev) + ", worst dual difference " +
             brief(worst_dual) + ", unique instances " + std::to_string(unique_count) + "/20";
  return r;
}

}  // namespace detail

inline bool criterion_is_randomized(unsigned id) {
  return id != 1 && id != 4 && id != 14;
}

/// Runs one criterion (1..13). Criterion 14 is computed by run_reproducibility.
inline CriterionResult run_criterion(unsigned id) {
  const auto start = std::chrono::steady_clock::now();
  CriterionResult r;
  switch (id) {
    case 1: r = detail::criterion_pairwise(); break;
    case 2: r = detail::criterion_single_set_isolation(); break;
    case 3: r = detail::criterion_two_set_isolation(); break;
    case 4: r = detail::criterion_component1(); break;
    case 5: r = detail::criterion_soundness(); break;
    case 6: r = detail::criterion_completeness(); break;
    case 7: r = detail::criterion_q_consistency(); break;
    case 8: r = detail::criterion_surgery(); break;
    case 9: r = detail::criterion_second_moment(); break;
    case 10: r = detail::criterion_projection(); break;
    case 11: r = detail::criterion_gersgorin(); break;
    case 12: r = detail::criterion_tvd(); break;
    case 13: r = detail::criterion_hamiltonian(); break;
    default: throw std::invalid_argument("criterion must be in [1, 13]; 14 compares reruns");
  }
  r.randomized = criterion_is_randomized(id);
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

/// Criterion 14: reruns each randomized criterion and compares CSV bytes
/// with the first run.
inline CriterionResult run_reproducibility(const std::map<unsigned, CriterionResult>& first_runs) {
  const auto start = std::chrono::steady_clock::now();
  CriterionResult r{14, "byte-identical CSV on rerun with the same seed", true, {}, {}, 0.0, false};
  std::string mismatched;
  std::size_t compared = 0;
  for (const auto& [id, first] : first_runs) {
    if (!first.randomized || id == 11) continue;  // 11 shares its run with 10
    CriterionResult again;
    if (id == 10) {
      again = detail::from_outcomes(10, "", {run_experiment("projection-gap",
                                                            make_params({{"l", "6,8,10"},
                                                                         {"d", "1,half,last"},
                                                                         {"eps", "0.1,0.5"},
                                                                         {"trials", "10000"},
                                                                         {"seed", detail::seed_text(10)}}))});
      const CriterionResult first_full = detail::from_outcomes(10, "", {detail::projection_outcome()});
      ++compared;
      if (again.csv != first_full.csv) mismatched += " 10";
      continue;
    }
    again = run_criterion(id);
    ++compared;
    if (again.csv != first.csv || again.csv.empty()) mismatched += " " + std::to_string(id);
  }
  r.pass = mismatched.empty() && compared > 0;
  r.detail = std::to_string(compared) + " randomized criteria rerun" +
             (mismatched.empty() ? ", all CSV identical" : ", mismatched:" + mismatched);
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

inline std::string format_criterion_line(const CriterionResult& r) {
  std::ostringstream line;
  line << "criterion " << r.id << ' ' << (r.pass ? "PASS" : "FAIL") << " | " << r.title << " | " << r.detail << " | "
       << std::fixed << std::setprecision(1) << r.seconds << " s";
  return line.str();
}

}  // namespace isolab
