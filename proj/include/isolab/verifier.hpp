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
 * @file verifier.hpp
 * @brief Explicit verifiers: witness index -> acceptance probability.
 *
 * Interval convention for thresholds (p1, p2): the no-interval is [0, p1],
 * the gap is (p1, p2) and the yes-interval is [p2, 1].
 */
#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <iomanip>
#include <limits>
#include <optional>
#include <sstream>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "isolab/hashfam.hpp"

namespace isolab {

inline constexpr unsigned kDefaultMaxWitnessBits = 20;

/// Acceptance probability of every witness y in {0,1}^l.
class WitnessTable {
 public:
  WitnessTable(unsigned witness_bits, std::vector<double> probs,
               unsigned max_witness_bits = kDefaultMaxWitnessBits)
      : bits_(witness_bits), probs_(std::move(probs)) {
    if (bits_ < 1) throw std::invalid_argument("witness table: l must be at least 1");
    if (bits_ > max_witness_bits)
      throw std::invalid_argument("witness table: l=" + std::to_string(bits_) +
                                  " exceeds the enumeration cap " +
                                  std::to_string(max_witness_bits));
    if (probs_.size() != (std::size_t{1} << bits_))
      throw std::invalid_argument("witness table: expected 2^l entries");
    for (double p : probs_)
      if (!(p >= 0.0 && p <= 1.0))
        throw std::invalid_argument("witness table: probability outside [0,1]");
  }

  /// All-zero table on l bits.
  static WitnessTable zeros(unsigned witness_bits) {
    return WitnessTable(witness_bits, std::vector<double>(std::size_t{1} << witness_bits, 0.0));
  }

  unsigned witness_bits() const noexcept { return bits_; }
  std::size_t size() const noexcept { return probs_.size(); }
  std::span<const double> probs() const noexcept { return probs_; }
  double operator[](Bits y) const { return probs_.at(y); }
  double max() const { return *std::max_element(probs_.begin(), probs_.end()); }

  /// Entries all in {0, 1}, as for a deterministic verifier.
  bool is_deterministic() const {
    return std::all_of(probs_.begin(), probs_.end(), [](double p) { return p == 0.0 || p == 1.0; });
  }

  friend bool operator==(const WitnessTable&, const WitnessTable&) = default;

 private:
  unsigned bits_;
  std::vector<double> probs_;
};

class PromiseInstance {
 public:
  PromiseInstance(WitnessTable table, double p1, double p2)
      : table_(std::move(table)), p1_(p1), p2_(p2) {
    if (!(p1_ >= 0.0 && p1_ < p2_ && p2_ <= 1.0))
      throw std::invalid_argument("promise instance: need 0 <= p1 < p2 <= 1");
  }

  const WitnessTable& table() const noexcept { return table_; }
  double p1() const noexcept { return p1_; }
  double p2() const noexcept { return p2_; }
  unsigned witness_bits() const noexcept { return table_.witness_bits(); }

  PromiseInstance with_thresholds(double p1, double p2) const { return {table_, p1, p2}; }

  friend bool operator==(const PromiseInstance&, const PromiseInstance&) = default;

 private:
  WitnessTable table_;
  double p1_;
  double p2_;
};

enum class Verdict { TmappYes, TmappNo, PromiseViolated };
enum class UniqueVerdict { UmappYes, UmappNo, Neither };

inline const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::TmappYes: return "TmappYes";
    case Verdict::TmappNo: return "TmappNo";
    case Verdict::PromiseViolated: return "PromiseViolated";
  }
  return "?";
}

inline const char* to_string(UniqueVerdict v) {
  switch (v) {
    case UniqueVerdict::UmappYes: return "UmappYes";
    case UniqueVerdict::UmappNo: return "UmappNo";
    case UniqueVerdict::Neither: return "Neither";
  }
  return "?";
}

/// Sizes of Y_no, Y_gap and Y_yes.
struct IntervalCounts {
  std::size_t no = 0;
  std::size_t gap = 0;
  std::size_t yes = 0;
};

inline IntervalCounts count_intervals(const PromiseInstance& inst) {
  IntervalCounts counts;
  for (double p : inst.table().probs()) {
    if (p >= inst.p2())
      ++counts.yes;
    else if (p <= inst.p1())
      ++counts.no;
    else
      ++counts.gap;
  }
  return counts;
}

inline Verdict classify(const PromiseInstance& inst) {
  const double top = inst.table().max();
  if (top >= inst.p2()) return Verdict::TmappYes;
  if (top <= inst.p1()) return Verdict::TmappNo;
  return Verdict::PromiseViolated;
}

inline UniqueVerdict classify_unique(const PromiseInstance& inst) {
  const IntervalCounts c = count_intervals(inst);
  if (c.yes == 0 && c.gap == 0) return UniqueVerdict::UmappNo;
  if (c.yes == 1 && c.gap == 0) return UniqueVerdict::UmappYes;
  return UniqueVerdict::Neither;
}

/// R-restriction with R = h^{-1}(0): f'(y) = f(y) if h(y) = 0, else 0.
inline PromiseInstance restrict(const PromiseInstance& inst, const AffineHash& h) {
  if (h.input_bits() != inst.witness_bits())
    throw std::invalid_argument("restrict: hash input width differs from witness length");
  const auto probs = inst.table().probs();
  std::vector<double> out(probs.size());
  for (Bits y = 0; y < probs.size(); ++y) out[y] = h.in_kernel(y) ? probs[y] : 0.0;
  return {WitnessTable(inst.witness_bits(), std::move(out)), inst.p1(), inst.p2()};
}

// ---------------------------------------------------------------------------
// Amplification

inline constexpr std::uint64_t kMaxRepetitions = std::uint64_t{1} << 20;

/// Pr(Binomial(n, p) >= k), summed exactly in log space.
inline double binomial_upper_tail(std::uint64_t n, std::uint64_t k, double p) {
  if (n > kMaxRepetitions)
    throw std::range_error("binomial_upper_tail: repetition count beyond numeric range");
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("binomial_upper_tail: p outside [0,1]");
  if (k == 0) return 1.0;
  if (k > n) return 0.0;
  if (p == 0.0) return 0.0;
  if (p == 1.0) return 1.0;
  const double lp = std::log(p);
  const double lq = std::log1p(-p);
  const double ln_fact_n = std::lgamma(static_cast<double>(n) + 1.0);
  std::vector<double> logs;
  logs.reserve(n - k + 1);
  double peak = -std::numeric_limits<double>::infinity();
  for (std::uint64_t i = k; i <= n; ++i) {
    const double di = static_cast<double>(i);
    const double term = ln_fact_n - std::lgamma(di + 1.0) -
                        std::lgamma(static_cast<double>(n - i) + 1.0) + di * lp +
                        static_cast<double>(n - i) * lq;
    logs.push_back(term);
    peak = std::max(peak, term);
  }
  double sum = 0.0;
  for (double term : logs) sum += std::exp(term - peak);
  return std::min(1.0, std::exp(peak) * sum);
}

/// Acceptance probability of the majority-style vote: repeat `reps` times and
/// accept when at least ceil(threshold_fraction * reps) runs accept.
inline double amplified_probability(double p, std::uint64_t reps, double threshold_fraction) {
  const auto needed =
      static_cast<std::uint64_t>(std::ceil(threshold_fraction * static_cast<double>(reps)));
  return binomial_upper_tail(reps, needed, p);
}

inline PromiseInstance amplify(const PromiseInstance& inst, std::uint64_t reps,
                               double threshold_fraction) {
  if (reps < 1) throw std::invalid_argument("amplify: reps must be at least 1");
  if (!(inst.p1() < threshold_fraction && threshold_fraction < inst.p2()))
    throw std::invalid_argument("amplify: threshold fraction must lie strictly inside (p1, p2)");
  const auto probs = inst.table().probs();
  std::vector<double> out(probs.size());
  std::transform(probs.begin(), probs.end(), out.begin(),
                 [&](double p) { return amplified_probability(p, reps, threshold_fraction); });
  const double q1 = amplified_probability(inst.p1(), reps, threshold_fraction);
  const double q2 = amplified_probability(inst.p2(), reps, threshold_fraction);
  return {WitnessTable(inst.witness_bits(), std::move(out)), q1, q2};
}

/// Smallest repetition count pushing p2 to at least `high` and p1 to at
/// most `low` under the given vote threshold. The Hoeffding estimate
/// ln(1/eps) / (2 gap^2) bounds the scan; every candidate is verified with the
/// exact binomial tail.
inline std::uint64_t find_amplification_reps(double p1, double p2, double low, double high,
                                             double threshold_fraction) {
  if (!(p1 < threshold_fraction && threshold_fraction < p2))
    throw std::invalid_argument("find_amplification_reps: threshold outside (p1, p2)");
  const double gap = std::min(threshold_fraction - p1, p2 - threshold_fraction);
  const double eps = std::min(low, 1.0 - high);
  if (!(eps > 0.0)) throw std::invalid_argument("find_amplification_reps: targets must be inside (0,1)");
  const double hoeffding = std::log(1.0 / eps) / (2.0 * gap * gap);
  const auto limit = std::min<std::uint64_t>(
      kMaxRepetitions, 4 * static_cast<std::uint64_t>(std::ceil(hoeffding)) + 64);
  for (std::uint64_t reps = 1; reps <= limit; ++reps) {
    if (amplified_probability(p2, reps, threshold_fraction) >= high &&
        amplified_probability(p1, reps, threshold_fraction) <= low)
      return reps;
  }
  throw std::range_error("find_amplification_reps: no repetition count within range");
}

/// Amplified instance together with the vote parameters used.
struct Amplification {
  PromiseInstance instance;
  std::uint64_t reps;
  double threshold_fraction;
};

/// Amplify to thresholds (1/l, 1 - 1/l) and relabel the instance with exactly
/// those thresholds (shrinking the interval preserves yes and no answers).
inline Amplification amplify_to_unit_margin(const PromiseInstance& inst) {
  const double l = inst.witness_bits();
  const double low = 1.0 / l;
  const double high = 1.0 - 1.0 / l;
  if (!(low < high)) throw std::invalid_argument("amplify_to_unit_margin: need l >= 3");
  const double threshold = 0.5 * (inst.p1() + inst.p2());
  const std::uint64_t reps = find_amplification_reps(inst.p1(), inst.p2(), low, high, threshold);
  PromiseInstance amplified = amplify(inst, reps, threshold);
  return {amplified.with_thresholds(low, high), reps, threshold};
}

// ---------------------------------------------------------------------------
// Interval bucketing

/// Witness counts per range r_j = [j/L, (j+1)/L), j = 1..L-1, with the last
/// range closed at 1. Witnesses below 1/L are counted in `below`.
struct BucketCounts {
  std::size_t below = 0;
  std::vector<std::size_t> ranges;  // ranges[j - 1] = |Y_j|

  std::size_t at(unsigned j) const { return ranges.at(j - 1); }
};

/// Index j with j/L <= p < (j+1)/L, clamped to [0, L-1].
inline unsigned range_index(double p, unsigned range_count) {
  const double L = range_count;
  auto j = static_cast<long>(std::floor(p * L));
  j = std::clamp<long>(j, 0, static_cast<long>(range_count) - 1);
  while (j > 0 && p < static_cast<double>(j) / L) --j;
  while (j + 1 < static_cast<long>(range_count) && p >= static_cast<double>(j + 1) / L) ++j;
  return static_cast<unsigned>(j);
}

inline BucketCounts partition_buckets(const PromiseInstance& inst, unsigned range_count) {
  if (range_count < 2) throw std::invalid_argument("partition_buckets: need at least 2 ranges");
  BucketCounts counts;
  counts.ranges.assign(range_count - 1, 0);
  for (double p : inst.table().probs()) {
    const unsigned j = range_index(p, range_count);
    if (j == 0)
      ++counts.below;
    else
      ++counts.ranges[j - 1];
  }
  return counts;
}

/// Smallest j (1-based, counts[0] is |Y_1|) with |Y_j| < 3 |Y_{j+1}|.
inline std::optional<unsigned> find_lightweight_index(std::span<const std::size_t> counts) {
  for (std::size_t i = 0; i + 1 < counts.size(); ++i)
    if (counts[i] < 3 * counts[i + 1]) return static_cast<unsigned>(i + 1);
  return std::nullopt;
}

/// I_j = <table, j/L, (j+1)/L>.
inline PromiseInstance interval_instance(const WitnessTable& table, unsigned j,
                                         unsigned range_count) {
  const double L = range_count;
  return {table, static_cast<double>(j) / L, static_cast<double>(j + 1) / L};
}

/// Yes-instance whose gap population is at most three times its yes population.
inline bool is_lightweight_gap(const PromiseInstance& inst) {
  const IntervalCounts c = count_intervals(inst);
  return c.yes >= 1 && c.gap <= 3 * c.yes;
}

// ---------------------------------------------------------------------------
// Text format
//
//   l=<int>
//   [p1=<prob>]
//   [p2=<prob>]
//   <prob for y = 0>
//   ...
//   <prob for y = 2^l - 1>

inline void write_table(std::ostream& out, const WitnessTable& table) {
  out << "l=" << table.witness_bits() << '\n' << std::setprecision(17);
  for (double p : table.probs()) out << p << '\n';
}

inline void write_instance(std::ostream& out, const PromiseInstance& inst) {
  out << "l=" << inst.witness_bits() << '\n'
      << std::setprecision(17) << "p1=" << inst.p1() << '\n'
      << "p2=" << inst.p2() << '\n';
  for (double p : inst.table().probs()) out << p << '\n';
}

namespace detail {

inline double parse_double_field(std::string_view text, std::string_view what) {
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size())
    throw std::invalid_argument(std::string(what) + ": cannot parse '" + std::string(text) + "'");
  return value;
}

struct TableText {
  unsigned l = 0;
  std::optional<double> p1, p2;
  std::vector<double> probs;
};

inline TableText read_table_text(std::istream& in) {
  TableText out;
  bool have_l = false;
  std::string line;
  while (std::getline(in, line)) {
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    const auto last = line.find_last_not_of(" \t\r");
    std::string_view body(line.data() + first, last - first + 1);
    if (body.rfind("l=", 0) == 0) {
      out.l = static_cast<unsigned>(parse_double_field(body.substr(2), "table header l"));
      have_l = true;
    } else if (body.rfind("p1=", 0) == 0) {
      out.p1 = parse_double_field(body.substr(3), "table header p1");
    } else if (body.rfind("p2=", 0) == 0) {
      out.p2 = parse_double_field(body.substr(3), "table header p2");
    } else {
      if (!have_l) throw std::invalid_argument("table text: values before the l= header");
      out.probs.push_back(parse_double_field(body, "table value"));
    }
  }
  if (!have_l) throw std::invalid_argument("table text: missing l= header");
  return out;
}

}  // namespace detail

inline WitnessTable read_table(std::istream& in) {
  auto text = detail::read_table_text(in);
  return WitnessTable(text.l, std::move(text.probs));
}

inline PromiseInstance read_instance(std::istream& in) {
  auto text = detail::read_table_text(in);
  if (!text.p1 || !text.p2) throw std::invalid_argument("instance text: missing p1= or p2=");
  return {WitnessTable(text.l, std::move(text.probs)), *text.p1, *text.p2};
}

}  // namespace isolab
