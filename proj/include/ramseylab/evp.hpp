#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <compare>
#include <cstdint>
#include <initializer_list>
#include <string>
#include <string_view>
#include <vector>

#include "ramseylab/common.hpp"

namespace ramseylab {

using BigInt = boost::multiprecision::cpp_int;

// Eventually periodic 0/1 sequence in canonical (prefix, period) form.
// Position 0 is the first digit; the period repeats forever after the prefix.
// Canonical means the period is primitive and the prefix is irreducible (its
// last bit differs from the period's last bit), so structural equality is
// semantic equality.
class EvpSeq {
 public:
  EvpSeq() : period_("0") {}  // all-zero sequence

  // Canonicalizes an arbitrary (prefix, period) pair denoting the sequence
  // prefix . period^inf. Period must be nonempty; digits are '0'/'1'.
  static EvpSeq canonical(std::string prefix, std::string period);

  // Parses "prefix|period" with "e" standing for the empty prefix.
  static EvpSeq parse(std::string_view literal);

  const std::string& prefix() const { return prefix_; }
  const std::string& period() const { return period_; }

  int bit(std::size_t n) const {
    if (n < prefix_.size()) return prefix_[n] - '0';
    return period_[(n - prefix_.size()) % period_.size()] - '0';
  }

  // First H digits as a '0'/'1' string.
  std::string digits(std::size_t count) const;

  std::string literal() const;

  bool operator==(const EvpSeq&) const = default;
  // Structural order; containers only. Sequence order is lex_compare.
  auto operator<=>(const EvpSeq&) const = default;

 private:
  EvpSeq(std::string prefix, std::string period)
      : prefix_(std::move(prefix)), period_(std::move(period)) {}

  std::string prefix_;
  std::string period_;
};

// Finite set of positions to flip; the group operation is symmetric
// difference. Element i of the enumeration is the bit pattern of i.
class FiniteFlip {
 public:
  FiniteFlip() = default;
  FiniteFlip(std::initializer_list<std::uint32_t> positions);
  static FiniteFlip from_positions(std::vector<std::uint32_t> positions);
  static FiniteFlip from_index(std::uint64_t i);

  FiniteFlip compose(const FiniteFlip& other) const;

  const std::vector<std::uint32_t>& positions() const { return positions_; }
  std::size_t size() const { return positions_.size(); }
  bool empty() const { return positions_.empty(); }
  std::uint32_t max_position() const;  // requires nonempty

  bool operator==(const FiniteFlip&) const = default;

 private:
  std::vector<std::uint32_t> positions_;  // sorted, unique
};

// Rational with positive odd denominator in lowest terms; exactly the
// rational 2-adic integers. Value of a sequence under sum of bit(n)*2^n.
class TwoAdicInt {
 public:
  TwoAdicInt() : num_(0), den_(1) {}
  TwoAdicInt(BigInt numerator, BigInt denominator);

  const BigInt& num() const { return num_; }
  const BigInt& den() const { return den_; }

  bool operator==(const TwoAdicInt&) const = default;

 private:
  BigInt num_;
  BigInt den_;
};

// True iff x and y differ in finitely many positions. Total on this type:
// decidable from one period block past the prefixes.
bool e0_related(const EvpSeq& x, const EvpSeq& y);

// Least n such that x and y agree from position n on. delta(x,x) = 0.
// Requires e0_related.
std::size_t delta(const EvpSeq& x, const EvpSeq& y);

// Flips the digits of x at the positions of g. act(empty, x) = x.
EvpSeq act(const FiniteFlip& g, const EvpSeq& x);

// The unique flip carrying x to y. Requires e0_related.
FiniteFlip flip_difference(const EvpSeq& x, const EvpSeq& y);

// Sum over differing positions of (y(n) - x(n)) * 2^n. Requires e0_related.
BigInt integer_difference(const EvpSeq& x, const EvpSeq& y);

// Binary +1 with carry toward higher positions; all-ones maps to all-zeros.
EvpSeq odometer(const EvpSeq& x);
// Binary -1; all-zeros maps to all-ones.
EvpSeq odometer_inverse(const EvpSeq& x);

TwoAdicInt to_rational(const EvpSeq& x);
EvpSeq from_rational(const TwoAdicInt& value);

// Order by first differing digit, 0 before 1.
std::strong_ordering lex_compare(const EvpSeq& x, const EvpSeq& y);

}  // namespace ramseylab
