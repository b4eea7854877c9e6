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


#include <catch_amalgamated.hpp>

#include <cmath>
#include <sstream>

#include "isolab/verifier.hpp"

using namespace isolab;
using Catch::Approx;

namespace {

PromiseInstance inst(unsigned l, std::vector<double> probs, double p1 = 1.0 / 3, double p2 = 2.0 / 3) {
  return {WitnessTable(l, std::move(probs)), p1, p2};
}

// Independent oracle: binomial tail by direct multiplicative recurrence.
double direct_tail(unsigned n, unsigned k, double p) {
  if (p == 1.0) return k <= n ? 1.0 : 0.0;
  double term = std::pow(1 - p, n);  // i = 0
  double sum = k == 0 ? term : 0.0;
  for (unsigned i = 1; i <= n; ++i) {
    term *= static_cast<double>(n - i + 1) / i * p / (1 - p);
    if (i >= k) sum += term;
  }
  return sum;
}

}  // namespace

TEST_CASE("classification of promise instances") {
  CHECK(classify(inst(2, {0, 0, 0, 0})) == Verdict::TmappNo);
  CHECK(classify(inst(2, {0.9, 0.1, 0.1, 0.1})) == Verdict::TmappYes);
  CHECK(classify(inst(1, {0.5, 0.1})) == Verdict::PromiseViolated);
  CHECK(classify(inst(1, {2.0 / 3, 1.0 / 3})) == Verdict::TmappYes);
  CHECK(classify(inst(1, {1.0 / 3, 0})) == Verdict::TmappNo);
}

TEST_CASE("unique classification") {
  CHECK(classify_unique(inst(2, {0.9, 0.1, 0.1, 0.1})) == UniqueVerdict::UmappYes);
  CHECK(classify_unique(inst(2, {0.9, 0.8, 0.1, 0.1})) == UniqueVerdict::Neither);
  CHECK(classify_unique(inst(1, {0.2, 0.2})) == UniqueVerdict::UmappNo);
  CHECK(classify_unique(inst(2, {0.9, 0.5, 0.1, 0.1})) == UniqueVerdict::Neither);
}

TEST_CASE("restriction zeroes witnesses outside the kernel") {
  const PromiseInstance all_ones = inst(2, {1, 1, 1, 1});
  const PromiseInstance r = restrict(all_ones, AffineHash::identity(2));
  CHECK(r.table()[0] == 1.0);
  CHECK(r.table()[1] == 0.0);
  CHECK(r.table()[2] == 0.0);
  CHECK(r.table()[3] == 0.0);
  CHECK(classify_unique(r) == UniqueVerdict::UmappYes);

  const PromiseInstance base = inst(2, {0.9, 0.4, 0.2, 0.7});
  CHECK(restrict(base, AffineHash::zero(2, 3)) == base);
  const AffineHash none(2, 1, {0}, 1);
  const PromiseInstance emptied = restrict(base, none);
  for (double p : emptied.table().probs()) CHECK(p == 0.0);
  CHECK_THROWS_AS(restrict(base, AffineHash::zero(3, 1)), std::invalid_argument);
}

TEST_CASE("restriction is idempotent and commutes with intersection") {
  Rng rng(17);
  for (int t = 0; t < 30; ++t) {
    std::vector<double> probs(64);
    for (auto& p : probs) p = uniform01(rng);
    const PromiseInstance base = inst(6, probs);
    const AffineHash g = sample_hash(6, 2, rng);
    const AffineHash h = sample_hash(6, 1, rng);
    const PromiseInstance once = restrict(base, g);
    CHECK(restrict(once, g) == once);
    CHECK(restrict(once, h) == restrict(restrict(base, h), g));
    for (Bits y = 0; y < 64; ++y) CHECK(once.table()[y] <= base.table()[y]);
  }
}

TEST_CASE("binomial tail matches a direct sum") {
  for (unsigned n : {1u, 5u, 17u, 40u})
    for (unsigned k = 0; k <= n + 1; ++k)
      for (double p : {0.0, 0.1, 1.0 / 3, 0.5, 0.9, 1.0})
        CHECK(binomial_upper_tail(n, k, p) == Approx(direct_tail(n, k, p)).margin(1e-13));
}

TEST_CASE("amplification fixes endpoints and is monotone") {
  const PromiseInstance base = inst(2, {0, 1, 0.5, 0.6});
  for (std::uint64_t reps : {1u, 7u, 30u}) {
    const PromiseInstance a = amplify(base, reps, 0.5);
    CHECK(a.table()[0] == 0.0);
    CHECK(a.table()[1] == 1.0);
    CHECK(a.table()[2] <= a.table()[3]);
  }
  double prev = 0.0;
  for (double p = 0.0; p <= 1.0; p += 0.05) {
    const double q = amplified_probability(p, 25, 0.5);
    CHECK(q >= prev);
    prev = q;
  }
  CHECK_THROWS(amplify(base, 0, 0.5));
  CHECK_THROWS(amplify(base, 5, 0.8));
}

TEST_CASE("amplified value at one half with an odd vote count") {
  // ceil(0.5 * 7) = 4 of 7 accepts needed.
  const double q = amplified_probability(0.5, 7, 0.5);
  CHECK(q == Approx(64.0 / 128.0).margin(1e-15));
  CHECK(amplified_probability(0.6, 7, 0.5) == Approx(direct_tail(7, 4, 0.6)).margin(1e-14));
  CHECK(amplified_probability(0.6, 7, 0.5) > 0.6);
}

TEST_CASE("repetition search for l = 10") {
  const double lo = 0.1, hi = 0.9;
  const std::uint64_t reps = find_amplification_reps(1.0 / 3, 2.0 / 3, lo, hi, 0.5);
  const auto ok = [&](std::uint64_t r) {
    const unsigned need = static_cast<unsigned>(std::ceil(0.5 * r));
    return direct_tail(static_cast<unsigned>(r), need, 2.0 / 3) >= hi &&
           direct_tail(static_cast<unsigned>(r), need, 1.0 / 3) <= lo;
  };
  CHECK(ok(reps));
  for (std::uint64_t r = 1; r < reps; ++r) CHECK_FALSE(ok(r));

  WitnessTable t(10, std::vector<double>(1024, 0.2));
  const Amplification amp = amplify_to_unit_margin({t, 1.0 / 3, 2.0 / 3});
  CHECK(amp.reps == reps);
  CHECK(amp.instance.p1() == 0.1);
  CHECK(amp.instance.p2() == 0.9);
  CHECK(amp.instance.table()[0] <= 0.1);
}

TEST_CASE("amplification preserves the yes/no answer") {
  Rng rng(4);
  for (int t = 0; t < 20; ++t) {
    std::vector<double> probs(1024);
    for (auto& p : probs) p = uniform01(rng) / 3.0;
    if (t % 2 == 0) probs[uniform_below(rng, 1024)] = 2.0 / 3 + uniform01(rng) / 3.0;
    const PromiseInstance base = inst(10, probs);
    const PromiseInstance amp = amplify_to_unit_margin(base).instance;
    CHECK(classify(amp) == classify(base));
  }
}

TEST_CASE("bucket partition by direct binning") {
  const BucketCounts b = partition_buckets(inst(2, {0.95, 0.30, 0.30, 0.10}), 4);
  CHECK(b.below == 1);
  REQUIRE(b.ranges.size() == 3);
  CHECK(b.at(1) == 2);
  CHECK(b.at(2) == 0);
  CHECK(b.at(3) == 1);

  const BucketCounts ones = partition_buckets(inst(2, {1, 1, 1, 1}), 4);
  CHECK(ones.at(3) == 4);
  CHECK(ones.below == 0);
  const BucketCounts zeros = partition_buckets(inst(2, {0, 0, 0, 0}), 4);
  CHECK(zeros.below == 4);
  CHECK(range_index(0.5, 4) == 2);
  CHECK(range_index(0.25, 4) == 1);
  CHECK(range_index(1.0, 4) == 3);
}

TEST_CASE("lightweight index search") {
  const std::vector<std::size_t> a{2, 3, 1};
  const std::vector<std::size_t> b{9, 3, 1};
  const std::vector<std::size_t> c{0, 0, 0, 0, 1};
  CHECK(find_lightweight_index(a) == 1u);
  CHECK_FALSE(find_lightweight_index(b).has_value());
  CHECK(find_lightweight_index(c) == 4u);
}

TEST_CASE("interval shrinking preserves definite answers") {
  Rng rng(23);
  for (int t = 0; t < 200; ++t) {
    std::vector<double> probs(8);
    for (auto& p : probs) p = uniform01(rng);
    const double p1 = 0.3 * uniform01(rng), p2 = 0.7 + 0.3 * uniform01(rng);
    const PromiseInstance wide = inst(3, probs, p1, p2);
    const double q1 = p1 + (0.5 - p1) * uniform01(rng);
    const double q2 = p2 - (p2 - 0.5) * uniform01(rng);
    const PromiseInstance narrow = wide.with_thresholds(q1, q2);
    if (classify(wide) != Verdict::PromiseViolated) CHECK(classify(narrow) == classify(wide));
  }
}

TEST_CASE("some interval of a yes-instance is lightweight") {
  Rng rng(31);
  for (int t = 0; t < 50; ++t) {
    const unsigned l = 8;
    std::vector<double> probs(256);
    for (auto& p : probs) p = uniform01(rng);
    probs[uniform_below(rng, 256)] = 1.0;
    const WitnessTable table(l, probs);
    const BucketCounts b = partition_buckets({table, 1.0 / l, 1 - 1.0 / l}, l);
    const auto j = find_lightweight_index(b.ranges);
    REQUIRE(j.has_value());
    CHECK(b.at(*j) < 3 * b.at(*j + 1));
    CHECK(is_lightweight_gap(interval_instance(table, *j, l)));
  }
}

TEST_CASE("table and instance text round-trip") {
  const PromiseInstance a = inst(2, {0.1, 1.0 / 3, 0.999999999, 0});
  std::stringstream s;
  write_instance(s, a);
  CHECK(read_instance(s) == a);
  std::stringstream t;
  write_table(t, a.table());
  CHECK(read_table(t) == a.table());
  std::istringstream bad("l=2\n0.1\n0.2\n");
  CHECK_THROWS(read_table(bad));
  std::istringstream no_header("0.1\n");
  CHECK_THROWS(read_table(no_header));
  std::istringstream comment("# c\nl=1\np1=0.25\np2=0.75\n0\n1\n");
  CHECK(read_instance(comment).p2() == 0.75);
}

TEST_CASE("table validation") {
  CHECK_THROWS(WitnessTable(2, {0, 0, 0}));
  CHECK_THROWS(WitnessTable(1, {0, 1.5}));
  CHECK_THROWS(WitnessTable(21, {}));
  CHECK_THROWS(PromiseInstance(WitnessTable::zeros(1), 0.7, 0.3));
}
