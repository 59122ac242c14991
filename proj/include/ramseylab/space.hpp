#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "ramseylab/common.hpp"
#include "ramseylab/evp.hpp"

namespace ramseylab {

// Point of the smooth product backend: a named class and an index within it.
struct ProductPoint {
  std::string class_id;
  std::uint64_t index = 0;

  bool operator==(const ProductPoint&) const = default;
  auto operator<=>(const ProductPoint&) const = default;
};

using Point = std::variant<EvpSeq, ProductPoint>;

// Parses either "prefix|period" or "class:index".
Point parse_point(std::string_view literal);
std::string point_literal(const Point& p);

// Structural total order usable as a container key on either backend.
bool point_less(const Point& a, const Point& b);

class Space;

// Lazy, memoized point source. Cursors address elements by position; an
// element is materialized at most once and each materialization costs fuel.
class PointStream {
 public:
  using Generator = std::function<std::optional<Point>(std::uint64_t, Fuel&)>;

  static PointStream from_generator(Generator g);
  // Keeps the elements of base satisfying keep, in order.
  PointStream filter(std::function<bool(const Point&)> keep) const;
  // Variant whose predicate can charge the caller's fuel (used when keeping
  // an element costs a coloring evaluation).
  PointStream filter(std::function<bool(const Point&, Fuel&)> keep) const;

  // Element at position i, materializing anything missing. nullopt means the
  // fuel ran out (streams here never end on their own).
  std::optional<Point> at(std::uint64_t i, Fuel& fuel) const;

 private:
  struct State;
  std::shared_ptr<State> state_;
};

class Space {
 public:
  enum class Backend { e0, smooth_product };

  static Space e0();
  static Space smooth_product();

  Backend backend() const { return backend_; }

  // Payload matches the backend.
  bool contains(const Point& p) const;
  void require(const Point& p) const;

  bool related(const Point& x, const Point& y) const;

  // Order of type zeta on each class. On the sequence backend this is the
  // sign of integer_difference; classes with constant tail are rejected
  // (their order type is omega or omega*). On the product backend even
  // indices ascend and odd indices descend below them.
  std::strong_ordering zeta_compare(const Point& x, const Point& y) const;
  Point zeta_successor(const Point& x) const;

  // Level i of the filtration: agreement from position i on the sequence
  // backend; same class with both indices below i (or equality) on the
  // product backend. Level 0 is equality.
  bool filtration_related(std::size_t level, const Point& x,
                          const Point& y) const;
  // The finite filtration class, sorted by point_less.
  std::vector<Point> filtration_class(std::size_t level, const Point& x) const;

  // Canonical representative of the level-i filtration class.
  Point filtration_representative(std::size_t level, const Point& x) const;

  // Canonical member of the class of x. Exists only on the smooth backend;
  // the sequence backend has no Borel transversal and refuses.
  Point selector(const Point& x) const;

  // Element i of the class enumeration seeded at anchor.
  Point enumerate_at(const Point& anchor, std::uint64_t i) const;
  PointStream omega_enumerate(const Point& anchor) const;

 private:
  explicit Space(Backend b) : backend_(b) {}
  Backend backend_;
};

// Borel-style section: a named membership predicate plus a completeness
// claim. Completeness is only ever verified per class, never assumed.
class Section {
 public:
  static Section bit_predicate(std::size_t position, int value);
  static Section index_mod(std::uint64_t modulus, std::uint64_t residue);
  static Section whole_space();
  static Section never();
  // "bit[k]=v", "mod[m]=r", "all", "none"
  static Section parse(std::string_view spec);

  bool contains(const Point& p) const { return member_(p); }
  const std::string& name() const { return name_; }
  bool claimed_complete() const { return claimed_complete_; }

 private:
  Section(std::string name, std::function<bool(const Point&)> member,
          bool claimed_complete)
      : name_(std::move(name)),
        member_(std::move(member)),
        claimed_complete_(claimed_complete) {}

  std::string name_;
  std::function<bool(const Point&)> member_;
  bool claimed_complete_;
};

// First element of the class enumeration of x lying in section. nullopt means
// the fuel ran out before a witness appeared; it is not a nonexistence claim.
std::optional<Point> retract(const Space& space, const Section& section,
                             const Point& x, Fuel& fuel);

}  // namespace ramseylab
