#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "ramseylab/space.hpp"

namespace ramseylab {

using Json = nlohmann::ordered_json;

// Well-mixed 64-bit hash step shared with the independent oracle; both sides
// implement it from this exact formula.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Saturation window for the random coloring family: pair separations are
// capped here, which makes colors of deep enumeration elements settle.
inline constexpr std::uint64_t kRandomColoringWindow = 4;

// Pure symmetric function from n-element within-class point sets to {1..k}.
class Coloring {
 public:
  int dimension() const { return dimension_; }
  int colors() const { return colors_; }
  const Json& spec() const { return spec_; }
  // Set when the coloring provably takes a single value; the only emptiness
  // certificates the engines issue lean on this.
  std::optional<int> constant_value() const { return constant_; }

  // Validates the argument (size, pairwise distinct, pairwise related,
  // backend) and evaluates. Points may arrive in any order.
  int value(const Space& space, std::span<const Point> points) const;

  // Engine fast path: points already sorted by point_less, validated by
  // construction.
  int value_sorted(const Space& space, std::span<const Point> points) const {
    return eval_(space, points);
  }

  static Coloring constant(int dimension, int colors, int value);
  static Coloring parity();
  static Coloring adjacency();
  static Coloring random_hash(std::uint64_t seed, int dimension, int colors);
  // Applies base (dimension m < n) to the m least points in lex order.
  static Coloring lift(Coloring base, int dimension);
  // Fixes y as an extra point of every edge; dimension drops by one.
  static Coloring fix_point(Coloring base, Point y);
  // Extends a coloring of edges inside a section to the whole space by
  // retracting each point into the section; collapsing retractions give 1.
  static Coloring extend(Coloring base, Section section,
                         std::uint64_t retract_fuel);
  // Transports base along a point bijection given by forward/backward maps.
  static Coloring pushforward(Coloring base, std::string map_name,
                              std::function<Point(const Point&)> forward,
                              std::function<Point(const Point&)> backward);

  // Builds from a serialized spec (the scenario file form).
  static Coloring from_spec(const Json& spec);

 private:
  using Eval = std::function<int(const Space&, std::span<const Point>)>;

  Coloring(int dimension, int colors, Json spec, Eval eval,
           std::optional<int> constant = std::nullopt)
      : dimension_(dimension),
        colors_(colors),
        spec_(std::move(spec)),
        eval_(std::move(eval)),
        constant_(constant) {}

  int dimension_;
  int colors_;
  Json spec_;
  Eval eval_;
  std::optional<int> constant_;
};

// Color 1 iff the flip carrying x to y has even size; equivalently the two
// digit sums below the agreement point have equal parity.
int parity_color(const EvpSeq& x, const EvpSeq& y);

// The relation "equal or parity color 1". An equivalence splitting every
// class into exactly two blocks.
bool parity_component(const EvpSeq& x, const EvpSeq& y);

enum class TransitivityVerdict {
  no_exceptions,
  finitely_many_within_horizon,
  persistent,
};

struct TransitivityException {
  Point witness;
  int color_b1;
  int color_b2;
};

struct TransitivityReport {
  std::uint64_t horizon = 0;
  std::uint64_t examined = 0;
  std::vector<TransitivityException> exceptions;
  TransitivityVerdict verdict = TransitivityVerdict::no_exceptions;
};

// Scans the first horizon enumeration points z (anchored at the lex-least of
// A, excluding members of B1 u B2) and compares c({z} u B1) with
// c({z} u B2). Persistent means an exception still shows up in the final
// quarter of the scan.
TransitivityReport almost_transitivity_check(const Space& space,
                                             const Coloring& coloring,
                                             const std::vector<Point>& a_set,
                                             const std::vector<Point>& b1,
                                             const std::vector<Point>& b2,
                                             std::uint64_t horizon);

const char* verdict_name(TransitivityVerdict v);

Json transitivity_to_json(const TransitivityReport& report);

}  // namespace ramseylab
