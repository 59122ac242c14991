#include "ramseylab/space.hpp"

#include <algorithm>
#include <charconv>

namespace ramseylab {

namespace {

const EvpSeq& as_seq(const Point& p) { return std::get<EvpSeq>(p); }
const ProductPoint& as_product(const Point& p) {
  return std::get<ProductPoint>(p);
}

bool constant_tail(const EvpSeq& x) {
  return x.period() == "0" || x.period() == "1";
}

// Position of a product index on the zeta line: even indices 0,2,4,... sit at
// 0,1,2,... and odd indices 1,3,5,... at -1,-2,-3,...
std::int64_t zeta_position(std::uint64_t index) {
  if (index % 2 == 0) return static_cast<std::int64_t>(index / 2);
  return -static_cast<std::int64_t>(index / 2) - 1;
}

std::uint64_t index_of_zeta_position(std::int64_t pos) {
  if (pos >= 0) return static_cast<std::uint64_t>(pos) * 2;
  return static_cast<std::uint64_t>(-pos) * 2 - 1;
}

std::uint64_t parse_index(std::string_view text, std::string_view literal) {
  std::uint64_t value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw ParseError("bad index in point literal: " + std::string(literal));
  }
  return value;
}

}  // namespace

Point parse_point(std::string_view literal) {
  if (literal.find('|') != std::string_view::npos) {
    return EvpSeq::parse(literal);
  }
  auto colon = literal.rfind(':');
  if (colon == std::string_view::npos || colon == 0) {
    throw ParseError("point literal must be prefix|period or class:index: " +
                     std::string(literal));
  }
  ProductPoint p;
  p.class_id = std::string(literal.substr(0, colon));
  p.index = parse_index(literal.substr(colon + 1), literal);
  return p;
}

std::string point_literal(const Point& p) {
  if (const auto* s = std::get_if<EvpSeq>(&p)) return s->literal();
  const auto& pp = std::get<ProductPoint>(p);
  return pp.class_id + ":" + std::to_string(pp.index);
}

bool point_less(const Point& a, const Point& b) {
  if (a.index() != b.index()) return a.index() < b.index();
  if (const auto* s = std::get_if<EvpSeq>(&a)) return *s < std::get<EvpSeq>(b);
  return std::get<ProductPoint>(a) < std::get<ProductPoint>(b);
}

struct PointStream::State {
  Generator generate;
  std::vector<Point> cache;
  bool dry = false;  // generator reported a permanent end
};

PointStream PointStream::from_generator(Generator g) {
  PointStream s;
  s.state_ = std::make_shared<State>();
  s.state_->generate = std::move(g);
  return s;
}

std::optional<Point> PointStream::at(std::uint64_t i, Fuel& fuel) const {
  State& st = *state_;
  while (st.cache.size() <= i) {
    if (st.dry) return std::nullopt;
    auto next = st.generate(st.cache.size(), fuel);
    if (!next) {
      if (!fuel.exhausted()) st.dry = true;
      return std::nullopt;
    }
    st.cache.push_back(std::move(*next));
  }
  return st.cache[i];
}

PointStream PointStream::filter(std::function<bool(const Point&)> keep) const {
  return filter([keep = std::move(keep)](const Point& p, Fuel&) { return keep(p); });
}

PointStream PointStream::filter(std::function<bool(const Point&, Fuel&)> keep) const {
  PointStream parent = *this;
  auto cursor = std::make_shared<std::uint64_t>(0);
  return from_generator(
      [parent, keep = std::move(keep), cursor](
          std::uint64_t, Fuel& fuel) -> std::optional<Point> {
        for (;;) {
          auto p = parent.at((*cursor)++, fuel);
          if (!p) {
            --*cursor;
            return std::nullopt;
          }
          if (keep(*p, fuel)) return p;
        }
      });
}

Space Space::e0() { return Space(Backend::e0); }
Space Space::smooth_product() { return Space(Backend::smooth_product); }

bool Space::contains(const Point& p) const {
  return (backend_ == Backend::e0) == std::holds_alternative<EvpSeq>(p);
}

void Space::require(const Point& p) const {
  if (!contains(p)) {
    throw BackendMismatchError("point does not belong to this backend");
  }
}

bool Space::related(const Point& x, const Point& y) const {
  require(x);
  require(y);
  if (backend_ == Backend::e0) return e0_related(as_seq(x), as_seq(y));
  return as_product(x).class_id == as_product(y).class_id;
}

std::strong_ordering Space::zeta_compare(const Point& x, const Point& y) const {
  if (x == y) {
    require(x);
    return std::strong_ordering::equal;
  }
  if (!related(x, y)) {
    throw NotRelatedError("zeta_compare across classes");
  }
  if (backend_ == Backend::e0) {
    if (constant_tail(as_seq(x))) {
      throw ConstantTailError(
          "zeta order undefined on a constant-tail class: " +
          as_seq(x).literal());
    }
    BigInt d = integer_difference(as_seq(x), as_seq(y));
    if (d > 0) return std::strong_ordering::less;  // y above x
    return std::strong_ordering::greater;
  }
  return zeta_position(as_product(x).index) <=>
         zeta_position(as_product(y).index);
}

Point Space::zeta_successor(const Point& x) const {
  require(x);
  if (backend_ == Backend::e0) {
    if (constant_tail(as_seq(x))) {
      throw ConstantTailError(
          "zeta successor undefined on a constant-tail class: " +
          as_seq(x).literal());
    }
    return odometer(as_seq(x));
  }
  ProductPoint p = as_product(x);
  p.index = index_of_zeta_position(zeta_position(p.index) + 1);
  return p;
}

bool Space::filtration_related(std::size_t level, const Point& x,
                               const Point& y) const {
  if (x == y) {
    require(x);
    return true;
  }
  require(x);
  require(y);
  if (backend_ == Backend::e0) {
    return e0_related(as_seq(x), as_seq(y)) &&
           delta(as_seq(x), as_seq(y)) <= level;
  }
  const auto& a = as_product(x);
  const auto& b = as_product(y);
  return a.class_id == b.class_id && a.index < level && b.index < level;
}

std::vector<Point> Space::filtration_class(std::size_t level,
                                           const Point& x) const {
  require(x);
  std::vector<Point> out;
  if (backend_ == Backend::e0) {
    const EvpSeq& base = as_seq(x);
    out.reserve(std::size_t(1) << level);
    for (std::uint64_t mask = 0; mask < (std::uint64_t(1) << level); ++mask) {
      std::string pre = base.digits(level);
      for (std::size_t b = 0; b < level; ++b) {
        if (mask & (std::uint64_t(1) << b)) pre[b] = pre[b] == '0' ? '1' : '0';
      }
      std::size_t l = base.period().size();
      std::size_t off = level >= base.prefix().size()
                            ? (level - base.prefix().size()) % l
                            : 0;
      std::string per = level >= base.prefix().size()
                            ? base.period().substr(off) +
                                  base.period().substr(0, off)
                            : base.period();
      if (level < base.prefix().size()) {
        pre += base.prefix().substr(level);
      }
      out.push_back(EvpSeq::canonical(std::move(pre), std::move(per)));
    }
  } else {
    const auto& p = as_product(x);
    if (p.index < level) {
      for (std::uint64_t i = 0; i < level; ++i) {
        out.push_back(ProductPoint{p.class_id, i});
      }
    } else {
      out.push_back(x);
    }
  }
  std::sort(out.begin(), out.end(), point_less);
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

Point Space::filtration_representative(std::size_t level,
                                       const Point& x) const {
  require(x);
  if (backend_ == Backend::e0) {
    const EvpSeq& base = as_seq(x);
    std::vector<std::uint32_t> low;
    for (std::size_t b = 0; b < level; ++b) {
      if (base.bit(b) == 1) low.push_back(static_cast<std::uint32_t>(b));
    }
    return act(FiniteFlip::from_positions(std::move(low)), base);
  }
  const auto& p = as_product(x);
  if (p.index < level) return ProductPoint{p.class_id, 0};
  return x;
}

Point Space::selector(const Point& x) const {
  require(x);
  if (backend_ == Backend::e0) {
    throw NoTransversalError(
        "the sequence backend admits no selector; pick points explicitly");
  }
  return ProductPoint{as_product(x).class_id, 0};
}

Point Space::enumerate_at(const Point& anchor, std::uint64_t i) const {
  require(anchor);
  if (backend_ == Backend::e0) {
    return act(FiniteFlip::from_index(i), as_seq(anchor));
  }
  return ProductPoint{as_product(anchor).class_id, i};
}

PointStream Space::omega_enumerate(const Point& anchor) const {
  require(anchor);
  Space self = *this;
  Point base = anchor;
  return PointStream::from_generator(
      [self, base](std::uint64_t i, Fuel& fuel) -> std::optional<Point> {
        if (!fuel.take()) return std::nullopt;
        return self.enumerate_at(base, i);
      });
}

Section Section::bit_predicate(std::size_t position, int value) {
  std::string name = "bit[" + std::to_string(position) +
                     "]=" + std::to_string(value);
  return Section(
      name,
      [position, value](const Point& p) {
        const auto* s = std::get_if<EvpSeq>(&p);
        if (!s) {
          throw BackendMismatchError("bit section applies to sequences");
        }
        return s->bit(position) == value;
      },
      true);
}

Section Section::index_mod(std::uint64_t modulus, std::uint64_t residue) {
  std::string name = "mod[" + std::to_string(modulus) +
                     "]=" + std::to_string(residue);
  return Section(
      name,
      [modulus, residue](const Point& p) {
        const auto* pp = std::get_if<ProductPoint>(&p);
        if (!pp) {
          throw BackendMismatchError("index section applies to product points");
        }
        return pp->index % modulus == residue;
      },
      true);
}

Section Section::whole_space() {
  return Section("all", [](const Point&) { return true; }, true);
}

Section Section::never() {
  return Section("none", [](const Point&) { return false; }, false);
}

Section Section::parse(std::string_view spec) {
  if (spec == "all") return whole_space();
  if (spec == "none") return never();
  auto open = spec.find('[');
  auto close = spec.find("]=");
  if (open == std::string_view::npos || close == std::string_view::npos ||
      close < open) {
    throw ParseError("bad section spec: " + std::string(spec));
  }
  std::string_view kind = spec.substr(0, open);
  std::string_view arg = spec.substr(open + 1, close - open - 1);
  std::string_view val = spec.substr(close + 2);
  std::uint64_t a = parse_index(arg, spec);
  std::uint64_t v = parse_index(val, spec);
  if (kind == "bit") {
    if (v > 1) throw ParseError("bit value must be 0 or 1: " + std::string(spec));
    return bit_predicate(a, static_cast<int>(v));
  }
  if (kind == "mod") {
    if (a == 0 || v >= a) throw ParseError("bad residue: " + std::string(spec));
    return index_mod(a, v);
  }
  throw ParseError("unknown section kind: " + std::string(spec));
}

std::optional<Point> retract(const Space& space, const Section& section,
                             const Point& x, Fuel& fuel) {
  PointStream stream = space.omega_enumerate(x);
  for (std::uint64_t i = 0;; ++i) {
    auto p = stream.at(i, fuel);
    if (!p) return std::nullopt;
    if (section.contains(*p)) return p;
  }
}

}  // namespace ramseylab
