#include "ramseylab/evp.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <utility>

namespace ramseylab {

namespace {

void check_bits(const std::string& s, const char* what) {
  for (char c : s) {
    if (c != '0' && c != '1') {
      throw ParseError(std::string(what) + " must consist of 0/1 digits");
    }
  }
}

// val reads a bit string least-significant-first.
BigInt bit_value(const std::string& s) {
  BigInt v = 0;
  for (std::size_t i = s.size(); i-- > 0;) {
    v <<= 1;
    v += s[i] - '0';
  }
  return v;
}

}  // namespace

EvpSeq EvpSeq::canonical(std::string prefix, std::string period) {
  if (period.empty()) throw ParseError("period must be nonempty");
  check_bits(prefix, "prefix");
  check_bits(period, "period");

  // Primitive period: shrink to the shortest repeating block.
  for (std::size_t d = 1; d <= period.size() / 2; ++d) {
    if (period.size() % d != 0) continue;
    bool repeats = true;
    for (std::size_t i = d; i < period.size() && repeats; ++i) {
      repeats = period[i] == period[i - d];
    }
    if (repeats) {
      period.resize(d);
      break;
    }
  }

  // Irreducible prefix: while the last prefix bit matches the last period
  // bit, the pair (prefix minus last bit, period rotated right) denotes the
  // same sequence.
  while (!prefix.empty() && prefix.back() == period.back()) {
    prefix.pop_back();
    std::rotate(period.rbegin(), period.rbegin() + 1, period.rend());
  }

  return EvpSeq(std::move(prefix), std::move(period));
}

EvpSeq EvpSeq::parse(std::string_view literal) {
  auto bar = literal.find('|');
  if (bar == std::string_view::npos) {
    throw ParseError("point literal needs the form prefix|period: " +
                     std::string(literal));
  }
  std::string prefix(literal.substr(0, bar));
  std::string period(literal.substr(bar + 1));
  if (prefix == "e") prefix.clear();
  if (prefix.empty() && bar != 1) {
    throw ParseError("empty prefix is written e: " + std::string(literal));
  }
  return canonical(std::move(prefix), std::move(period));
}

std::string EvpSeq::digits(std::size_t count) const {
  std::string out(count, '0');
  for (std::size_t n = 0; n < count; ++n) out[n] = static_cast<char>('0' + bit(n));
  return out;
}

std::string EvpSeq::literal() const {
  return (prefix_.empty() ? std::string("e") : prefix_) + "|" + period_;
}

FiniteFlip::FiniteFlip(std::initializer_list<std::uint32_t> positions)
    : FiniteFlip(from_positions(std::vector<std::uint32_t>(positions))) {}

FiniteFlip FiniteFlip::from_positions(std::vector<std::uint32_t> positions) {
  std::sort(positions.begin(), positions.end());
  positions.erase(std::unique(positions.begin(), positions.end()),
                  positions.end());
  FiniteFlip g;
  g.positions_ = std::move(positions);
  return g;
}

FiniteFlip FiniteFlip::from_index(std::uint64_t i) {
  FiniteFlip g;
  for (std::uint32_t b = 0; i != 0; ++b, i >>= 1) {
    if (i & 1) g.positions_.push_back(b);
  }
  return g;
}

FiniteFlip FiniteFlip::compose(const FiniteFlip& other) const {
  std::vector<std::uint32_t> out;
  std::set_symmetric_difference(positions_.begin(), positions_.end(),
                                other.positions_.begin(),
                                other.positions_.end(),
                                std::back_inserter(out));
  FiniteFlip g;
  g.positions_ = std::move(out);
  return g;
}

std::uint32_t FiniteFlip::max_position() const {
  if (positions_.empty()) {
    throw std::logic_error("max_position of the empty flip");
  }
  return positions_.back();
}

TwoAdicInt::TwoAdicInt(BigInt numerator, BigInt denominator)
    : num_(std::move(numerator)), den_(std::move(denominator)) {
  if (den_ == 0) throw std::invalid_argument("zero denominator");
  if (den_ < 0) {
    den_ = -den_;
    num_ = -num_;
  }
  BigInt g = boost::multiprecision::gcd(num_ < 0 ? BigInt(-num_) : num_, den_);
  if (g > 1) {
    num_ /= g;
    den_ /= g;
  }
  if (den_ % 2 == 0) {
    throw std::invalid_argument("even denominator has no 2-adic expansion");
  }
}

namespace {

// Agreement horizon: two eventually periodic sequences either differ
// somewhere below it or agree everywhere from it on.
std::size_t tail_horizon(const EvpSeq& x, const EvpSeq& y) {
  std::size_t n = std::max(x.prefix().size(), y.prefix().size());
  return n + std::lcm(x.period().size(), y.period().size());
}

}  // namespace

bool e0_related(const EvpSeq& x, const EvpSeq& y) {
  std::size_t n = std::max(x.prefix().size(), y.prefix().size());
  std::size_t h = tail_horizon(x, y);
  for (std::size_t m = n; m < h; ++m) {
    if (x.bit(m) != y.bit(m)) return false;
  }
  return true;
}

std::size_t delta(const EvpSeq& x, const EvpSeq& y) {
  if (!e0_related(x, y)) throw NotRelatedError("delta of unrelated points");
  std::size_t n = std::max(x.prefix().size(), y.prefix().size());
  while (n > 0 && x.bit(n - 1) == y.bit(n - 1)) --n;
  return n;
}

EvpSeq act(const FiniteFlip& g, const EvpSeq& x) {
  if (g.empty()) return x;
  std::size_t h = std::max<std::size_t>(x.prefix().size(),
                                        std::size_t(g.max_position()) + 1);
  std::string pre = x.digits(h);
  for (std::uint32_t p : g.positions()) pre[p] = pre[p] == '0' ? '1' : '0';
  // Period block as seen from position h.
  std::size_t l = x.period().size();
  std::size_t off = (h - x.prefix().size()) % l;
  std::string per = x.period().substr(off) + x.period().substr(0, off);
  return EvpSeq::canonical(std::move(pre), std::move(per));
}

FiniteFlip flip_difference(const EvpSeq& x, const EvpSeq& y) {
  if (!e0_related(x, y)) {
    throw NotRelatedError("flip_difference of unrelated points");
  }
  std::vector<std::uint32_t> out;
  std::size_t n = std::max(x.prefix().size(), y.prefix().size());
  for (std::size_t m = 0; m < n; ++m) {
    if (x.bit(m) != y.bit(m)) out.push_back(static_cast<std::uint32_t>(m));
  }
  return FiniteFlip::from_positions(std::move(out));
}

BigInt integer_difference(const EvpSeq& x, const EvpSeq& y) {
  FiniteFlip moved = flip_difference(x, y);
  BigInt d = 0;
  for (std::uint32_t p : moved.positions()) {
    BigInt term = BigInt(1) << p;
    d += y.bit(p) ? term : -term;
  }
  return d;
}

namespace {

EvpSeq carry_walk(const EvpSeq& x, char from, char to) {
  std::size_t h = x.prefix().size() + x.period().size();
  std::string pre = x.digits(h);
  std::size_t n = pre.find(to == '1' ? '0' : '1');
  if (n == std::string::npos) {
    // Constant sequence saturating the carry: +1 on all-ones gives all-zeros
    // and -1 on all-zeros gives all-ones.
    return EvpSeq::canonical("", std::string(1, to == '1' ? '0' : '1'));
  }
  std::fill(pre.begin(), pre.begin() + static_cast<std::ptrdiff_t>(n), from);
  pre[n] = to;
  return EvpSeq::canonical(std::move(pre), x.period());
}

}  // namespace

EvpSeq odometer(const EvpSeq& x) { return carry_walk(x, '0', '1'); }

EvpSeq odometer_inverse(const EvpSeq& x) { return carry_walk(x, '1', '0'); }

TwoAdicInt to_rational(const EvpSeq& x) {
  BigInt prefix_val = bit_value(x.prefix());
  BigInt period_val = bit_value(x.period());
  BigInt block = (BigInt(1) << x.period().size()) - 1;
  // value = val(prefix) + 2^|prefix| * val(period) / (1 - 2^|period|)
  BigInt num = prefix_val * block - (period_val << x.prefix().size());
  return TwoAdicInt(std::move(num), std::move(block));
}

EvpSeq from_rational(const TwoAdicInt& value) {
  const BigInt& den = value.den();
  BigInt state = value.num();
  std::string digits;
  std::map<BigInt, std::size_t> seen;
  for (;;) {
    auto [it, fresh] = seen.emplace(state, digits.size());
    if (!fresh) {
      std::string prefix = digits.substr(0, it->second);
      std::string period = digits.substr(it->second);
      return EvpSeq::canonical(std::move(prefix), std::move(period));
    }
    if (state % 2 != 0) {
      digits.push_back('1');
      state = (state - den) / 2;
    } else {
      digits.push_back('0');
      state /= 2;
    }
  }
}

std::strong_ordering lex_compare(const EvpSeq& x, const EvpSeq& y) {
  std::size_t h = tail_horizon(x, y);
  for (std::size_t n = 0; n < h; ++n) {
    int a = x.bit(n);
    int b = y.bit(n);
    if (a != b) return a <=> b;
  }
  return std::strong_ordering::equal;
}

}  // namespace ramseylab
