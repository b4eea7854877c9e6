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
#include <numeric>

#include "isolab/reduction.hpp"

using namespace isolab;
using Catch::Approx;

namespace {

// Independent oracle: count kernel hits per set for a given hash.
bool isolates_naive(const AffineHash& h, const std::vector<Bits>& s1, const std::vector<Bits>& s2) {
  int hits1 = 0, hits2 = 0;
  for (Bits y : s1) hits1 += h.apply(y) == 0;
  for (Bits y : s2) hits2 += h.apply(y) == 0;
  return hits1 == 1 && hits2 == 0;
}

BinomialEstimate run_many(const auto& body, std::uint64_t trials, std::uint64_t seed) {
  BinomialEstimate est;
  for (std::uint64_t t = 0; t < trials; ++t) {
    Rng rng = substream(seed, t);
    est.add(body(rng));
  }
  return est;
}

}  // namespace

TEST_CASE("filtering one of w witnesses") {
  CHECK(component1_success_prob(1) == 1.0);
  CHECK(component1_success_prob(2) == Approx(0.5).margin(1e-15));
  CHECK(component1_success_prob(3) == Approx(4.0 / 9).margin(1e-15));
  const double big = component1_success_prob(1000000);
  CHECK(big >= std::exp(-1.0));
  CHECK(big - std::exp(-1.0) <= 1e-5);
  CHECK_THROWS(component1_success_prob(0));
  double prev = 1.0;
  for (std::uint64_t w = 1; w < 200; ++w) {
    CHECK(component1_success_prob(w) <= prev);
    prev = component1_success_prob(w);
  }
}

TEST_CASE("hash width selection") {
  CHECK(isolation_hash_bits(1) == 2);
  CHECK(isolation_hash_bits(2) == 2);
  CHECK(isolation_hash_bits(3) == 3);
  CHECK(isolation_hash_bits(4) == 3);
  CHECK(isolation_hash_bits(5) == 4);
  CHECK(isolation_hash_bits(16) == 5);
  CHECK(isolation_hash_bits(17) == 6);
  for (std::uint64_t s = 1; s < 5000; ++s) {
    const unsigned k = isolation_hash_bits(s) - 2;
    CHECK(std::ldexp(1.0, static_cast<int>(k + 1)) >= static_cast<double>(s));
    if (s > 1) CHECK(std::ldexp(1.0, static_cast<int>(k)) < static_cast<double>(s));
  }
}

TEST_CASE("restriction scanner agrees with explicit restriction") {
  Rng rng(101);
  for (int t = 0; t < 300; ++t) {
    const unsigned l = 1 + static_cast<unsigned>(t % 7);
    std::vector<double> probs(std::size_t{1} << l);
    for (auto& p : probs) {
      const double u = uniform01(rng);
      p = u < 0.3 ? 0.0 : u < 0.5 ? 1.0 : uniform01(rng);
    }
    const WitnessTable table(l, probs);
    const RestrictionScanner scanner(table);
    const double p1 = 0.5 * uniform01(rng), p2 = p1 + (1 - p1) * (0.01 + 0.99 * uniform01(rng));
    const PromiseInstance base(table, p1, p2);
    for (unsigned m = 0; m <= l + 1; ++m) {
      const AffineHash h = sample_hash(l, m, rng);
      REQUIRE(scanner.classify(h, p1, p2) == classify_unique(restrict(base, h)));
    }
  }
}

TEST_CASE("isolation event matches a direct count") {
  Rng rng(7);
  const std::vector<Bits> s1{1, 5, 9}, s2{2, 3};
  for (int t = 0; t < 500; ++t) {
    const AffineHash h = sample_hash(4, 1 + static_cast<unsigned>(t % 3), rng);
    CHECK(isolates(h, s1, s2) == isolates_naive(h, s1, s2));
  }
}

TEST_CASE("exact isolation probability against Monte Carlo and the a/8b bound") {
  const std::vector<Bits> s1{3, 6}, s2{1, 12};
  const unsigned m = isolation_hash_bits(4);
  const double exact = exact_isolation_probability(4, s1, s2, m);
  CHECK(exact >= isolation_lower_bound(2, 4));
  const BinomialEstimate est = estimate_isolation_probability(4, s1, s2, m, 40000, 5);
  CHECK(std::abs(est.frequency() - exact) <= 3 * std::sqrt(exact * (1 - exact) / 40000));

  std::uint64_t members = 0, hits = 0;
  for_each_member(4, m, [&](const AffineHash& h) {
    ++members;
    hits += isolates_naive(h, s1, s2);
  });
  CHECK(exact == static_cast<double>(hits) / static_cast<double>(members));
}

TEST_CASE("single target set meets the 1/8 isolation bound exactly") {
  for (std::uint64_t w = 1; w <= 6; ++w) {
    std::vector<Bits> s1(w);
    std::iota(s1.begin(), s1.end(), Bits{0});
    const double exact = exact_isolation_probability(4, s1, {}, isolation_hash_bits(w));
    CHECK(exact >= 0.125);
  }
}

TEST_CASE("isolation corner cases") {
  const std::vector<Bits> none;
  const std::vector<Bits> s2{0, 1, 2};
  CHECK(estimate_isolation_probability(6, none, s2, 3, 1000, 1).successes == 0);
  CHECK(exact_isolation_probability(3, none, s2, 2) == 0.0);
  const std::vector<Bits> a{1, 2}, b{2, 3};
  CHECK_THROWS_AS(estimate_isolation_probability(3, a, b, 2, 10, 1), std::domain_error);
  const std::vector<Bits> wide{8};
  CHECK_THROWS_AS(estimate_isolation_probability(3, wide, none, 2, 10, 1), std::invalid_argument);
}

TEST_CASE("estimates depend only on the seed") {
  const std::vector<Bits> s1{1, 2, 3, 4, 5}, s2;
  const auto a = estimate_isolation_probability(10, s1, s2, 4, 3000, 77);
  const auto b = estimate_isolation_probability(10, s1, s2, 4, 3000, 77);
  const auto prefix = estimate_isolation_probability(10, s1, s2, 4, 1000, 77);
  CHECK(a.successes == b.successes);
  CHECK(prefix.successes <= a.successes);
}

TEST_CASE("reductions reject no-instances under every oracle policy") {
  Rng inst_rng(3);
  const WitnessTable empty = WitnessTable::zeros(8);
  const PromiseInstance no = random_no_instance(8, 1.0 / 3, 2.0 / 3, inst_rng);
  const PromiseInstance qno(WitnessTable(8, std::vector<double>(256, 0.05)), 1.0 / 8, 7.0 / 8);
  for (OraclePolicy policy : kAllPolicies) {
    for (std::uint64_t t = 0; t < 200; ++t) {
      Rng rng = substream(t, 0);
      CHECK_FALSE(vv_np_run(empty, policy, rng).accepted);
      CHECK_FALSE(vv_ma_run(no, std::nullopt, policy, rng).accepted);
      CHECK_FALSE(vv_qcma_run(qno, policy, rng).accepted);
    }
  }
}

TEST_CASE("reports are consistent with their query log") {
  const std::vector<Bits> w{3, 9, 17, 100, 511};
  const WitnessTable table = deterministic_table(10, w);
  for (OraclePolicy policy : kAllPolicies) {
    for (std::uint64_t t = 0; t < 50; ++t) {
      Rng rng = substream(t, 1);
      const ReductionReport r = vv_np_run(table, policy, rng);
      REQUIRE(r.queries.size() == 10);
      std::size_t yes = 0;
      bool any = false;
      for (const auto& q : r.queries) {
        yes += q.classification == UniqueVerdict::UmappYes;
        any = any || q.answer;
        if (q.classification == UniqueVerdict::UmappYes) CHECK(q.answer);
        if (q.classification == UniqueVerdict::UmappNo) CHECK_FALSE(q.answer);
      }
      CHECK(r.unique_yes_hits == yes);
      CHECK(r.accepted == any);
      if (policy == OraclePolicy::AnswerNo) CHECK(r.accepted == (yes > 0));
    }
  }
}

TEST_CASE("deterministic-verifier completeness is at least 1/8") {
  const std::uint64_t trials = 10000;
  for (std::size_t w : {std::size_t{1}, std::size_t{5}}) {
    Rng inst_rng(w);
    const WitnessTable table = deterministic_table(10, sample_distinct_witnesses(10, w, inst_rng));
    const auto est = run_many(
        [&](Rng& rng) { return vv_np_run(table, OraclePolicy::AnswerNo, rng).unique_yes_hits > 0; },
        trials, 11 + w);
    CHECK(respects_lower_bound(est, 0.125));
  }
}

TEST_CASE("single-witness randomized instance meets the 1/8 bound") {
  const PromiseInstance single = single_witness_instance(8, 1.0 / 3, 2.0 / 3, 77);
  const MaReduction reduction(single, std::nullopt);
  const auto est = run_many([&](Rng& rng) { return reduction.run(OraclePolicy::AnswerNo, rng).accepted; },
                            3000, 19);
  CHECK(respects_lower_bound(est, 0.125));
}

TEST_CASE("interval sweep query layout") {
  const PromiseInstance single = single_witness_instance(6, 1.0 / 3, 2.0 / 3, 5);
  Rng rng(2);
  const ReductionReport r = vv_ma_run(single, 9, OraclePolicy::AnswerRandom, rng);
  REQUIRE(r.queries.size() == 4 * 6);
  CHECK(r.queries.front().k == 1);
  CHECK(r.queries.front().b == 1);
  CHECK(r.queries.back().k == 4);
  CHECK(r.queries.back().b == 6);
}

TEST_CASE("reduction input validation") {
  Rng rng(1);
  CHECK_THROWS(vv_np_run(WitnessTable(1, {0.5, 0}), OraclePolicy::AnswerNo, rng));
  const PromiseInstance violated(WitnessTable(3, std::vector<double>(8, 0.5)), 1.0 / 3, 2.0 / 3);
  CHECK_THROWS(vv_ma_run(violated, std::nullopt, OraclePolicy::AnswerNo, rng));
  const PromiseInstance wrong_thresholds(WitnessTable::zeros(4), 1.0 / 3, 2.0 / 3);
  CHECK_THROWS(vv_qcma_run(wrong_thresholds, OraclePolicy::AnswerNo, rng));
  CHECK(parse_policy("yes") == OraclePolicy::AnswerYes);
  CHECK_THROWS(parse_policy("maybe"));
}
