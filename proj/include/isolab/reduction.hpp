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
 * @file reduction.hpp
 * @brief Witness-isolation reductions against an exact unique-promise oracle.
 *
 * Each reduction samples hashes h_b from H_{l,b+2}, forms the h_b^{-1}(0)
 * restriction of the verifier and queries an oracle for the unique promise
 * problem. The oracle decides genuine promise inputs exactly by enumerating
 * the restricted table; off-promise inputs are answered by an OraclePolicy.
 */
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "isolab/hashfam.hpp"
#include "isolab/random.hpp"
#include "isolab/stats.hpp"
#include "isolab/verifier.hpp"

namespace isolab {

enum class OraclePolicy { AnswerNo, AnswerYes, AnswerRandom };

inline constexpr OraclePolicy kAllPolicies[] = {OraclePolicy::AnswerNo, OraclePolicy::AnswerYes,
                                                OraclePolicy::AnswerRandom};

inline const char* to_string(OraclePolicy p) {
  switch (p) {
    case OraclePolicy::AnswerNo: return "AnswerNo";
    case OraclePolicy::AnswerYes: return "AnswerYes";
    case OraclePolicy::AnswerRandom: return "AnswerRandom";
  }
  return "?";
}

inline OraclePolicy parse_policy(std::string_view name) {
  if (name == "AnswerNo" || name == "no") return OraclePolicy::AnswerNo;
  if (name == "AnswerYes" || name == "yes") return OraclePolicy::AnswerYes;
  if (name == "AnswerRandom" || name == "random") return OraclePolicy::AnswerRandom;
  throw std::invalid_argument("unknown oracle policy '" + std::string(name) + "'");
}

/// One oracle query. `k` is the interval index (0 when the reduction has no
/// interval sweep) and `b` the hash index, the hash having b + 2 output bits.
struct QueryRecord {
  unsigned k = 0;
  unsigned b = 0;
  UniqueVerdict classification = UniqueVerdict::UmappNo;
  bool answer = false;

  friend bool operator==(const QueryRecord&, const QueryRecord&) = default;
};

struct ReductionReport {
  bool accepted = false;
  std::vector<QueryRecord> queries;
  std::size_t unique_yes_hits = 0;

  friend bool operator==(const ReductionReport&, const ReductionReport&) = default;
};

/// Exact oracle for the unique promise problem.
class UniqueOracle {
 public:
  explicit UniqueOracle(OraclePolicy policy) : policy_(policy) {}

  OraclePolicy policy() const noexcept { return policy_; }

  bool answer(UniqueVerdict verdict, Rng& rng) const {
    switch (verdict) {
      case UniqueVerdict::UmappYes: return true;
      case UniqueVerdict::UmappNo: return false;
      case UniqueVerdict::Neither: break;
    }
    switch (policy_) {
      case OraclePolicy::AnswerNo: return false;
      case OraclePolicy::AnswerYes: return true;
      case OraclePolicy::AnswerRandom: return (rng() >> 63) != 0;
    }
    return false;
  }

 private:
  OraclePolicy policy_;
};

/// Classifies restrictions of one table without materializing them.
///
/// Witnesses at or below p1 are no-interval witnesses before and after any
/// restriction, so only entries above p1 are scanned; the result equals
/// classify_unique(restrict(inst, h)).
class RestrictionScanner {
 public:
  explicit RestrictionScanner(const WitnessTable& table) {
    const auto probs = table.probs();
    for (Bits y = 0; y < probs.size(); ++y)
      if (probs[y] > 0.0) entries_.push_back({y, probs[y]});
    std::stable_sort(entries_.begin(), entries_.end(),
                     [](const Entry& a, const Entry& b) { return a.prob > b.prob; });
  }

  UniqueVerdict classify(const AffineHash& h, double p1, double p2) const {
    std::size_t yes = 0;
    for (const Entry& e : entries_) {
      if (e.prob <= p1) break;
      if (!h.in_kernel(e.witness)) continue;
      if (e.prob < p2) return UniqueVerdict::Neither;
      if (++yes > 1) return UniqueVerdict::Neither;
    }
    return yes == 1 ? UniqueVerdict::UmappYes : UniqueVerdict::UmappNo;
  }

 private:
  struct Entry {
    Bits witness;
    double prob;
  };
  std::vector<Entry> entries_;
};

/// (1 - 1/w)^{w-1}: probability that a filter keeping each of w witnesses
/// independently with probability 1/w keeps exactly one of them.
inline double component1_success_prob(std::uint64_t w) {
  if (w == 0) throw std::domain_error("component1_success_prob: w must be at least 1");
  if (w == 1) return 1.0;
  const double wd = static_cast<double>(w);
  return std::exp((wd - 1.0) * std::log1p(-1.0 / wd));
}

/// Hash output width m = k + 2 for a set of `size` elements, with k chosen so
/// that 2^k < size <= 2^{k+1} (k = 0 for a single element).
inline unsigned isolation_hash_bits(std::uint64_t size) {
  if (size == 0) throw std::invalid_argument("isolation_hash_bits: empty set");
  unsigned k = 0;
  while ((std::uint64_t{1} << (k + 1)) < size) ++k;
  return k + 2;
}

/// Lower bound a / (8b) on isolating one of a targets among b candidates.
inline double isolation_lower_bound(std::uint64_t targets, std::uint64_t total) {
  return static_cast<double>(targets) / (8.0 * static_cast<double>(total));
}

/// Union-bound estimate a/2^m (1 - (b-1)/2^m) used in the isolation proofs.
inline double isolation_union_bound(std::uint64_t targets, std::uint64_t total, unsigned m) {
  const double scale = std::ldexp(1.0, -static_cast<int>(m));
  return static_cast<double>(targets) * scale *
         (1.0 - static_cast<double>(total - 1) * scale);
}

/// |h^{-1}(0) ∩ S1| = 1 and |h^{-1}(0) ∩ S2| = 0.
inline bool isolates(const AffineHash& h, std::span<const Bits> s1, std::span<const Bits> s2) {
  std::size_t hits = 0;
  for (Bits y : s1)
    if (h.in_kernel(y) && ++hits > 1) return false;
  if (hits != 1) return false;
  return std::none_of(s2.begin(), s2.end(), [&](Bits y) { return h.in_kernel(y); });
}

inline void check_disjoint_witness_sets(unsigned l, std::span<const Bits> s1,
                                        std::span<const Bits> s2) {
  std::unordered_set<Bits> seen;
  for (Bits y : s1) {
    if (y & ~low_mask(l)) throw std::invalid_argument("witness set element longer than l bits");
    if (!seen.insert(y).second) throw std::invalid_argument("witness set contains a duplicate");
  }
  for (Bits y : s2) {
    if (y & ~low_mask(l)) throw std::invalid_argument("witness set element longer than l bits");
    if (!seen.insert(y).second) throw std::domain_error("witness sets S1 and S2 overlap");
  }
}

/// Monte-Carlo frequency of the isolation event over `trials` hashes drawn
/// from H_{l,m}. Trial t uses substream t of `seed`.
inline BinomialEstimate estimate_isolation_probability(unsigned l, std::span<const Bits> s1,
                                                       std::span<const Bits> s2, unsigned m,
                                                       std::uint64_t trials, std::uint64_t seed) {
  check_disjoint_witness_sets(l, s1, s2);
  BinomialEstimate est;
  for (std::uint64_t t = 0; t < trials; ++t) {
    Rng rng = substream(seed, t);
    est.add(isolates(sample_hash(l, m, rng), s1, s2));
  }
  return est;
}

/// Exact isolation probability by enumerating all of H_{l,m}.
inline double exact_isolation_probability(unsigned l, std::span<const Bits> s1,
                                          std::span<const Bits> s2, unsigned m) {
  check_disjoint_witness_sets(l, s1, s2);
  std::uint64_t hits = 0;
  std::uint64_t members = 0;
  for_each_member(l, m, [&](const AffineHash& h) {
    ++members;
    if (isolates(h, s1, s2)) ++hits;
  });
  return static_cast<double>(hits) / static_cast<double>(members);
}

/// `count` distinct l-bit witnesses drawn uniformly without replacement.
inline std::vector<Bits> sample_distinct_witnesses(unsigned l, std::size_t count, Rng& rng) {
  const std::uint64_t universe = std::uint64_t{1} << l;
  if (count > universe) throw std::invalid_argument("more witnesses requested than exist");
  std::unordered_set<Bits> seen;
  std::vector<Bits> out;
  out.reserve(count);
  while (out.size() < count) {
    const Bits y = uniform_below(rng, universe);
    if (seen.insert(y).second) out.push_back(y);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Reductions

inline void record_query(ReductionReport& report, const QueryRecord& query) {
  report.queries.push_back(query);
  if (query.classification == UniqueVerdict::UmappYes) ++report.unique_yes_hits;
  report.accepted = report.accepted || query.answer;
}

/// Deterministic-verifier reduction: one query per hash size b = 1..l.
class NpReduction {
 public:
  explicit NpReduction(const WitnessTable& table) : table_(table), scanner_(table) {
    if (!table.is_deterministic())
      throw std::invalid_argument("vv_np_run: table entries must be 0 or 1");
  }

  ReductionReport run(OraclePolicy policy, Rng& rng) const {
    const UniqueOracle oracle(policy);
    const unsigned l = table_.witness_bits();
    ReductionReport report;
    report.queries.reserve(l);
    for (unsigned b = 1; b <= l; ++b) {
      const AffineHash h = sample_hash(l, b + 2, rng);
      // Thresholds (0, 1): a 0/1 table is on-promise iff at most one 1 survives.
      const UniqueVerdict verdict = scanner_.classify(h, 0.0, 1.0);
      record_query(report, {0, b, verdict, oracle.answer(verdict, rng)});
    }
    return report;
  }

 private:
  WitnessTable table_;
  RestrictionScanner scanner_;
};

/// Interval-sweep reduction over a table already amplified to (1/l, 1 - 1/l):
/// for k = 1..l-2 and b = 1..l query the restriction of <table, k/l, (k+1)/l>.
class IntervalSweepReduction {
 public:
  explicit IntervalSweepReduction(PromiseInstance amplified)
      : instance_(std::move(amplified)), scanner_(instance_.table()) {
    const unsigned l = instance_.witness_bits();
    if (l < 3) throw std::invalid_argument("interval sweep needs l >= 3");
  }

  const PromiseInstance& instance() const noexcept { return instance_; }

  ReductionReport run(OraclePolicy policy, Rng& rng) const {
    const UniqueOracle oracle(policy);
    const unsigned l = instance_.witness_bits();
    const double L = l;
    ReductionReport report;
    report.queries.reserve(static_cast<std::size_t>(l - 2) * l);
    for (unsigned k = 1; k + 2 <= l; ++k) {
      const double lo = static_cast<double>(k) / L;
      const double hi = static_cast<double>(k + 1) / L;
      for (unsigned b = 1; b <= l; ++b) {
        const AffineHash h = sample_hash(l, b + 2, rng);
        const UniqueVerdict verdict = scanner_.classify(h, lo, hi);
        record_query(report, {k, b, verdict, oracle.answer(verdict, rng)});
      }
    }
    return report;
  }

 private:
  PromiseInstance instance_;
  RestrictionScanner scanner_;
};

inline void require_promise(const PromiseInstance& inst, const char* who) {
  if (classify(inst) == Verdict::PromiseViolated)
    throw std::domain_error(std::string(who) + ": input instance violates the promise");
}

/// Probabilistic-verifier reduction. Amplification to (1/l, 1 - 1/l) happens
/// once at construction; `reps` overrides the searched repetition count.
class MaReduction {
 public:
  explicit MaReduction(const PromiseInstance& inst, std::optional<std::uint64_t> reps = std::nullopt)
      : sweep_(prepare(inst, reps)) {}

  const PromiseInstance& amplified() const noexcept { return sweep_.instance(); }
  std::uint64_t reps() const noexcept { return reps_; }

  ReductionReport run(OraclePolicy policy, Rng& rng) const { return sweep_.run(policy, rng); }

 private:
  PromiseInstance prepare(const PromiseInstance& inst, std::optional<std::uint64_t> reps) {
    require_promise(inst, "vv_ma_run");
    if (!reps) {
      Amplification amp = amplify_to_unit_margin(inst);
      reps_ = amp.reps;
      return std::move(amp.instance);
    }
    const double l = inst.witness_bits();
    const double threshold = 0.5 * (inst.p1() + inst.p2());
    PromiseInstance amplified = amplify(inst, *reps, threshold);
    if (amplified.p1() > 1.0 / l || amplified.p2() < 1.0 - 1.0 / l)
      throw std::invalid_argument("vv_ma_run: reps too small to reach (1/l, 1-1/l)");
    reps_ = *reps;
    return amplified.with_thresholds(1.0 / l, 1.0 - 1.0 / l);
  }

  std::uint64_t reps_ = 1;
  IntervalSweepReduction sweep_;
};

/// Circuit reduction over a basis-state table whose thresholds are already
/// (1/l, 1 - 1/l). The restriction is the classical pre-filter on |y>.
class QcmaReduction {
 public:
  explicit QcmaReduction(const PromiseInstance& q_table) : sweep_(check(q_table)) {}

  ReductionReport run(OraclePolicy policy, Rng& rng) const { return sweep_.run(policy, rng); }

 private:
  static PromiseInstance check(const PromiseInstance& inst) {
    require_promise(inst, "vv_qcma_run");
    const double l = inst.witness_bits();
    if (std::abs(inst.p1() - 1.0 / l) > 1e-12 || std::abs(inst.p2() - (1.0 - 1.0 / l)) > 1e-12)
      throw std::invalid_argument("vv_qcma_run: thresholds must be (1/l, 1-1/l)");
    return inst.with_thresholds(1.0 / l, 1.0 - 1.0 / l);
  }

  IntervalSweepReduction sweep_;
};

inline ReductionReport vv_np_run(const WitnessTable& table, OraclePolicy policy, Rng& rng) {
  return NpReduction(table).run(policy, rng);
}

inline ReductionReport vv_ma_run(const PromiseInstance& inst, std::optional<std::uint64_t> reps,
                                 OraclePolicy policy, Rng& rng) {
  return MaReduction(inst, reps).run(policy, rng);
}

inline ReductionReport vv_qcma_run(const PromiseInstance& q_table, OraclePolicy policy, Rng& rng) {
  return QcmaReduction(q_table).run(policy, rng);
}

// ---------------------------------------------------------------------------
// Instances used by the experiments

/// Deterministic table with the given accepting witnesses.
inline WitnessTable deterministic_table(unsigned l, std::span<const Bits> accepting) {
  std::vector<double> probs(std::size_t{1} << l, 0.0);
  for (Bits y : accepting) probs.at(y) = 1.0;
  return WitnessTable(l, std::move(probs));
}

/// Two witnesses accepted with probability 1 and every other witness in the
/// middle of the gap (p1 + p2) / 2.
inline PromiseInstance problematic_instance(unsigned l, double p1, double p2, Bits first,
                                            Bits second) {
  std::vector<double> probs(std::size_t{1} << l, 0.5 * (p1 + p2));
  probs.at(first) = 1.0;
  probs.at(second) = 1.0;
  return {WitnessTable(l, std::move(probs)), p1, p2};
}

/// One witness at 1, every other at 0.
inline PromiseInstance single_witness_instance(unsigned l, double p1, double p2, Bits witness) {
  std::vector<double> probs(std::size_t{1} << l, 0.0);
  probs.at(witness) = 1.0;
  return {WitnessTable(l, std::move(probs)), p1, p2};
}

/// No-instance with entries drawn uniformly from [0, p1].
inline PromiseInstance random_no_instance(unsigned l, double p1, double p2, Rng& rng) {
  std::vector<double> probs(std::size_t{1} << l);
  for (auto& p : probs) p = p1 * uniform01(rng);
  return {WitnessTable(l, std::move(probs)), p1, p2};
}

}  // namespace isolab
