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
 * @file hashfam.hpp
 * @brief GF(2)-affine pairwise independent hash family h(y) = A y + b.
 *
 * Bit strings are packed into 64-bit words with bit 0 the least significant
 * position. Row i of A is a word whose bit j multiplies input bit j, and
 * output bit i is parity(row_i & y) xor bit i of b.
 */
#pragma once

#include <bit>
#include <charconv>
#include <cstdint>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "isolab/random.hpp"

namespace isolab {

/// A packed bit string; only the low `width` bits are meaningful.
using Bits = std::uint64_t;

inline constexpr unsigned kMaxInputBits = 63;
inline constexpr unsigned kMaxOutputBits = 64;

constexpr Bits low_mask(unsigned width) noexcept {
  return width >= 64 ? ~Bits{0} : (Bits{1} << width) - 1;
}

/// Parse a binary numeral ("0101", most significant digit first).
inline Bits parse_bits(std::string_view text) {
  if (text.empty() || text.size() > 64)
    throw std::invalid_argument("bit string must have 1..64 digits");
  Bits value = 0;
  for (char c : text) {
    if (c != '0' && c != '1') throw std::invalid_argument("bit string contains a non-binary digit");
    value = (value << 1) | static_cast<Bits>(c - '0');
  }
  return value;
}

/// Render the low `width` bits as a binary numeral, most significant first.
inline std::string format_bits(Bits value, unsigned width) {
  std::string out(width, '0');
  for (unsigned i = 0; i < width; ++i)
    if ((value >> i) & 1U) out[width - 1 - i] = '1';
  return out;
}

/// A member of the affine family H_{l,m}: {0,1}^l -> {0,1}^m.
class AffineHash {
 public:
  AffineHash(unsigned input_bits, unsigned output_bits, std::vector<Bits> rows, Bits offset)
      : input_bits_(input_bits), output_bits_(output_bits), rows_(std::move(rows)), offset_(offset) {
    if (input_bits_ < 1 || input_bits_ > kMaxInputBits)
      throw std::invalid_argument("hash input width must be in [1, 63]");
    if (output_bits_ > kMaxOutputBits) throw std::invalid_argument("hash output width exceeds 64");
    if (rows_.size() != output_bits_)
      throw std::invalid_argument("hash matrix must have exactly m rows");
    for (Bits row : rows_)
      if (row & ~low_mask(input_bits_))
        throw std::invalid_argument("hash matrix row wider than l columns");
    if (offset_ & ~low_mask(output_bits_)) throw std::invalid_argument("hash offset wider than m bits");
  }

  /// A = 0, b = 0: every input hashes to the all-zero string.
  static AffineHash zero(unsigned input_bits, unsigned output_bits) {
    return AffineHash(input_bits, output_bits, std::vector<Bits>(output_bits, 0), 0);
  }

  /// A = I (m = l), b = 0.
  static AffineHash identity(unsigned bits) {
    std::vector<Bits> rows(bits);
    for (unsigned i = 0; i < bits; ++i) rows[i] = Bits{1} << i;
    return AffineHash(bits, bits, std::move(rows), 0);
  }

  unsigned input_bits() const noexcept { return input_bits_; }
  unsigned output_bits() const noexcept { return output_bits_; }
  const std::vector<Bits>& rows() const noexcept { return rows_; }
  Bits offset() const noexcept { return offset_; }

  /// A y + b over GF(2), without range checking of y.
  Bits apply(Bits y) const noexcept {
    Bits out = offset_;
    for (unsigned i = 0; i < output_bits_; ++i)
      out ^= static_cast<Bits>(std::popcount(rows_[i] & y) & 1) << i;
    return out;
  }

  /// True iff y lies in the filter set h^{-1}(0).
  bool in_kernel(Bits y) const noexcept { return apply(y) == 0; }

  friend bool operator==(const AffineHash&, const AffineHash&) = default;

 private:
  unsigned input_bits_;
  unsigned output_bits_;
  std::vector<Bits> rows_;
  Bits offset_;
};

/// Draw a member of H_{l,m} uniformly: every bit of A and b is an
/// independent fair coin.
inline AffineHash sample_hash(unsigned input_bits, unsigned output_bits, Rng& rng) {
  if (input_bits == 0) throw std::invalid_argument("sample_hash: l must be at least 1");
  if (input_bits > kMaxInputBits || output_bits > kMaxOutputBits)
    throw std::invalid_argument("sample_hash: width out of range");
  std::vector<Bits> rows(output_bits);
  for (auto& row : rows) row = random_bits(rng, input_bits);
  const Bits offset = random_bits(rng, output_bits);
  return AffineHash(input_bits, output_bits, std::move(rows), offset);
}

/// Checked evaluation: y must fit in l bits.
inline Bits evaluate(const AffineHash& h, Bits y) {
  if (y & ~low_mask(h.input_bits()))
    throw std::invalid_argument("evaluate: input longer than l bits");
  return h.apply(y);
}

/// Visit every member of H_{l,m} exactly once (2^{m(l+1)} members).
template <typename Visitor>
void for_each_member(unsigned input_bits, unsigned output_bits, Visitor&& visit) {
  const unsigned coeff_bits = output_bits * (input_bits + 1);
  if (coeff_bits > 30) throw std::invalid_argument("for_each_member: family too large to enumerate");
  const Bits row_mask = low_mask(input_bits);
  std::vector<Bits> rows(output_bits);
  for (Bits code = 0; code < (Bits{1} << coeff_bits); ++code) {
    Bits rest = code;
    for (unsigned i = 0; i < output_bits; ++i) {
      rows[i] = rest & row_mask;
      rest >>= input_bits;
    }
    visit(AffineHash(input_bits, output_bits, rows, rest));
  }
}

/// Empirical frequency of {h(y1) = a and h(y2) = b} over `trials` sampled
/// hashes. The exact expectation is 2^{-2m}.
inline double pairwise_independence_frequency(unsigned input_bits, unsigned output_bits, Bits y1,
                                              Bits y2, Bits a, Bits b, std::uint64_t trials,
                                              Rng& rng) {
  if (y1 == y2) throw std::domain_error("pairwise_independence_frequency: y1 must differ from y2");
  if (trials == 0) throw std::invalid_argument("pairwise_independence_frequency: trials must be >= 1");
  if ((y1 | y2) & ~low_mask(input_bits)) throw std::invalid_argument("input longer than l bits");
  if ((a | b) & ~low_mask(output_bits)) throw std::invalid_argument("target longer than m bits");
  std::uint64_t hits = 0;
  for (std::uint64_t t = 0; t < trials; ++t) {
    const AffineHash h = sample_hash(input_bits, output_bits, rng);
    if (h.apply(y1) == a && h.apply(y2) == b) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(trials);
}

// Text form:
//   l=<int> m=<int>
//   <row 0 hex>
//   ...
//   <row m-1 hex>
//   <b hex>
inline std::string serialize(const AffineHash& h) {
  std::ostringstream out;
  out << "l=" << h.input_bits() << " m=" << h.output_bits() << '\n' << std::hex;
  for (Bits row : h.rows()) out << row << '\n';
  out << h.offset() << '\n';
  return out.str();
}

namespace detail {

inline Bits parse_hex_word(std::string_view token) {
  Bits value = 0;
  const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value, 16);
  if (ec != std::errc{} || ptr != token.data() + token.size() || token.empty())
    throw std::invalid_argument("hash text: malformed hex word '" + std::string(token) + "'");
  return value;
}

inline unsigned parse_header_field(std::istream& in, std::string_view key) {
  std::string token;
  if (!(in >> token) || token.rfind(std::string(key) + "=", 0) != 0)
    throw std::invalid_argument("hash text: expected '" + std::string(key) + "=' in header");
  unsigned value = 0;
  const char* first = token.data() + key.size() + 1;
  const auto [ptr, ec] = std::from_chars(first, token.data() + token.size(), value);
  if (ec != std::errc{} || ptr != token.data() + token.size())
    throw std::invalid_argument("hash text: bad integer for '" + std::string(key) + "'");
  return value;
}

}  // namespace detail

inline AffineHash parse_hash(std::string_view text) {
  std::istringstream in{std::string(text)};
  const unsigned l = detail::parse_header_field(in, "l");
  const unsigned m = detail::parse_header_field(in, "m");
  std::vector<Bits> rows(m);
  std::string token;
  for (auto& row : rows) {
    if (!(in >> token)) throw std::invalid_argument("hash text: missing matrix row");
    row = detail::parse_hex_word(token);
  }
  if (!(in >> token)) throw std::invalid_argument("hash text: missing offset");
  const Bits offset = detail::parse_hex_word(token);
  if (in >> token) throw std::invalid_argument("hash text: trailing data");
  return AffineHash(l, m, std::move(rows), offset);
}

}  // namespace isolab
