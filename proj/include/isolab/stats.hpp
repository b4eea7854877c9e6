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

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>

namespace isolab {

/// Number of standard errors used by every statistical pass/fail check.
inline constexpr double kSigmaSlack = 3.0;

/// Bernoulli trial counter.
struct BinomialEstimate {
  std::uint64_t successes = 0;
  std::uint64_t trials = 0;

  void add(bool success) {
    successes += success ? 1 : 0;
    ++trials;
  }

  BinomialEstimate& operator+=(const BinomialEstimate& other) {
    successes += other.successes;
    trials += other.trials;
    return *this;
  }

  double frequency() const {
    return trials == 0 ? 0.0 : static_cast<double>(successes) / static_cast<double>(trials);
  }

  /// Plug-in standard error sqrt(p(1-p)/n).
  double standard_error() const {
    if (trials == 0) return 0.0;
    const double p = frequency();
    return std::sqrt(p * (1.0 - p) / static_cast<double>(trials));
  }
};

struct Interval {
  double lower;
  double upper;
};

/// Wilson score interval for a binomial proportion at `z` standard errors.
inline Interval wilson_interval(const BinomialEstimate& est, double z = kSigmaSlack) {
  if (est.trials == 0) return {0.0, 1.0};
  const double n = static_cast<double>(est.trials);
  const double p = est.frequency();
  const double z2 = z * z;
  const double denom = 1.0 + z2 / n;
  const double centre = (p + z2 / (2.0 * n)) / denom;
  const double half = z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
  return {std::max(0.0, centre - half), std::min(1.0, centre + half)};
}

/// True when a lower bound on the success probability is statistically
/// consistent with the observations: the Wilson upper limit reaches it.
inline bool respects_lower_bound(const BinomialEstimate& est, double bound,
                                 double z = kSigmaSlack) {
  return wilson_interval(est, z).upper >= bound;
}

/// Running mean and variance (Welford). Merging is associative.
struct RunningStats {
  std::uint64_t count = 0;
  double mean = 0.0;
  double m2 = 0.0;
  double min = 0.0;
  double max = 0.0;

  void add(double x) {
    if (count == 0) {
      min = max = x;
    } else {
      min = std::min(min, x);
      max = std::max(max, x);
    }
    ++count;
    const double delta = x - mean;
    mean += delta / static_cast<double>(count);
    m2 += delta * (x - mean);
  }

  RunningStats& operator+=(const RunningStats& other) {
    if (other.count == 0) return *this;
    if (count == 0) {
      *this = other;
      return *this;
    }
    const double n1 = static_cast<double>(count);
    const double n2 = static_cast<double>(other.count);
    const double delta = other.mean - mean;
    const double n = n1 + n2;
    mean += delta * n2 / n;
    m2 += other.m2 + delta * delta * n1 * n2 / n;
    count += other.count;
    min = std::min(min, other.min);
    max = std::max(max, other.max);
    return *this;
  }

  double variance() const {
    return count < 2 ? 0.0 : m2 / static_cast<double>(count - 1);
  }

  /// Standard error of the mean.
  double standard_error() const {
    return count == 0 ? 0.0 : std::sqrt(variance() / static_cast<double>(count));
  }
};

}  // namespace isolab
