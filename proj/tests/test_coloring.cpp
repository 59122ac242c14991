#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <random>
#include <vector>

#include "ramseylab/coloring.hpp"
#include "slow_reference.hpp"

using namespace ramseylab;

namespace {

const Space e0 = Space::e0();
const Space smooth = Space::smooth_product();

Point seq(const char* lit) { return Point(EvpSeq::parse(lit)); }
Point prod(const char* cid, std::uint64_t i) {
  return Point(ProductPoint{cid, i});
}

int pair_value(const Coloring& c, const Space& space, Point a, Point b) {
  std::array<Point, 2> edge{std::move(a), std::move(b)};
  return c.value(space, edge);
}

}  // namespace

TEST_CASE("parity colors pairs by flip size") {
  EvpSeq x = EvpSeq::parse("01|10");
  CHECK(parity_color(x, act(FiniteFlip{0}, x)) == 2);
  CHECK(parity_color(x, act(FiniteFlip{0, 3}, x)) == 1);
  CHECK_THROWS(parity_color(x, x));  // pair colors need two points

  Coloring c = Coloring::parity();
  CHECK(c.dimension() == 2);
  CHECK(c.colors() == 2);
  CHECK_FALSE(c.constant_value().has_value());
  CHECK(pair_value(c, e0, seq("01|10"), seq("11|10")) == 2);
  CHECK(pair_value(c, e0, seq("11|10"), seq("01|10")) == 2);
  CHECK(pair_value(c, e0, seq("01|10"), Point(act(FiniteFlip{0, 2}, x))) == 1);
}

TEST_CASE("parity obeys the flip group law") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 100; ++trial) {
    EvpSeq x = EvpSeq::parse("0110|10");
    FiniteFlip g = FiniteFlip::from_index(rng() % 256);
    EvpSeq y = act(g, x);
    CHECK(parity_color(x, y) == (g.size() % 2 == 0 ? 1 : 2));
    CHECK(parity_color(x, y) == ref::parity_color(x.literal(), y.literal()));
  }
}

TEST_CASE("parity component is an equivalence with two blocks per class") {
  EvpSeq x = EvpSeq::parse("01|10");
  std::vector<EvpSeq> pts;
  for (std::uint64_t i = 0; i < 16; ++i) {
    pts.push_back(act(FiniteFlip::from_index(i), x));
  }
  for (const EvpSeq& a : pts) {
    CHECK(parity_component(a, a));
    for (const EvpSeq& b : pts) {
      CHECK(parity_component(a, b) == parity_component(b, a));
      for (const EvpSeq& c : pts) {
        if (parity_component(a, b) && parity_component(b, c)) {
          CHECK(parity_component(a, c));
        }
      }
    }
  }
  // membership in the anchor block is the parity of the enumeration index
  for (std::uint64_t i = 0; i < 16; ++i) {
    bool even = std::popcount(i) % 2 == 0;
    CHECK(parity_component(x, pts[i]) == even);
  }
}

TEST_CASE("coloring value validates its argument") {
  Coloring c = Coloring::parity();
  std::vector<Point> dup{seq("01|10"), seq("01|10")};
  CHECK_THROWS_AS(c.value(e0, dup), std::invalid_argument);
  std::vector<Point> unrelated{seq("e|10"), seq("e|01")};
  CHECK_THROWS_AS(c.value(e0, unrelated), NotRelatedError);
  std::vector<Point> single{seq("e|10")};
  CHECK_THROWS_AS(c.value(e0, single), std::invalid_argument);
  std::vector<Point> wrong{prod("1", 0), prod("1", 1)};
  CHECK_THROWS_AS(c.value(e0, wrong), BackendMismatchError);
}

TEST_CASE("adjacency colors zeta neighbours 1 and everything else 2") {
  Coloring c = Coloring::adjacency();
  EvpSeq x = EvpSeq::parse("01|10");
  CHECK(pair_value(c, e0, Point(x), Point(odometer(x))) == 1);
  CHECK(pair_value(c, e0, Point(odometer(x)), Point(x)) == 1);
  CHECK(pair_value(c, e0, Point(x), Point(odometer(odometer(x)))) == 2);
  CHECK(pair_value(c, e0, seq("01|10"), seq("0|01")) == 2);

  CHECK(pair_value(c, smooth, prod("1", 1), prod("1", 0)) == 1);
  CHECK(pair_value(c, smooth, prod("1", 0), prod("1", 2)) == 1);
  CHECK(pair_value(c, smooth, prod("1", 1), prod("1", 2)) == 2);
}

TEST_CASE("constant colorings expose their value") {
  Coloring c = Coloring::constant(2, 3, 2);
  REQUIRE(c.constant_value().has_value());
  CHECK(*c.constant_value() == 2);
  CHECK(pair_value(c, e0, seq("01|10"), seq("11|10")) == 2);
  CHECK_THROWS(Coloring::constant(2, 3, 4));
}

TEST_CASE("random colorings are deterministic in the seed") {
  Coloring a = Coloring::random_hash(99, 2, 16);
  Coloring b = Coloring::random_hash(99, 2, 16);
  Coloring other = Coloring::random_hash(100, 2, 16);
  EvpSeq x = EvpSeq::parse("01|10");
  bool saw_difference = false;
  for (std::uint64_t i = 1; i < 40; ++i) {
    Point y = Point(act(FiniteFlip::from_index(i), x));
    int va = pair_value(a, e0, Point(x), y);
    CHECK(va == pair_value(b, e0, Point(x), y));
    CHECK(va >= 1);
    CHECK(va <= 16);
    if (va != pair_value(other, e0, Point(x), y)) saw_difference = true;
  }
  CHECK(saw_difference);
}

TEST_CASE("random colorings saturate at the separation window") {
  Coloring c = Coloring::random_hash(5, 2, 64);
  EvpSeq x = EvpSeq::parse("01|10");
  // both pairs separate past the window, so the hash sees the same data
  int far1 = pair_value(c, e0, Point(x), Point(act(FiniteFlip{5}, x)));
  int far2 = pair_value(c, e0, Point(x), Point(act(FiniteFlip{9}, x)));
  CHECK(far1 == far2);
  int smooth_far1 = pair_value(c, smooth, prod("1", 0), prod("1", 6));
  int smooth_far2 = pair_value(c, smooth, prod("1", 2), prod("1", 11));
  CHECK(smooth_far1 == smooth_far2);
}

TEST_CASE("lift applies the base to the lex least points") {
  Coloring lifted = Coloring::lift(Coloring::parity(), 3);
  CHECK(lifted.dimension() == 3);
  EvpSeq x = EvpSeq::parse("0001|10");      // digit order: this first
  EvpSeq y = act(FiniteFlip{1}, x);         // 0101..., second
  EvpSeq z = act(FiniteFlip{0, 1}, x);      // 1101..., third
  std::vector<Point> edge{Point(z), Point(x), Point(y)};
  CHECK(lifted.value(e0, edge) == parity_color(x, y));
  CHECK_THROWS(Coloring::lift(Coloring::parity(), 2));
}

TEST_CASE("fix_point pins an extra point onto every edge") {
  EvpSeq y = EvpSeq::parse("01|10");
  Coloring fixed = Coloring::fix_point(Coloring::parity(), Point(y));
  CHECK(fixed.dimension() == 1);
  EvpSeq x = act(FiniteFlip{2}, y);
  std::vector<Point> single{Point(x)};
  CHECK(fixed.value(e0, single) == parity_color(x, y));
  CHECK_THROWS(Coloring::fix_point(Coloring::fix_point(Coloring::parity(),
                                                       Point(y)),
                                   Point(y)));
}

TEST_CASE("extend retracts points into the section before coloring") {
  Section sec = Section::bit_predicate(0, 1);
  Coloring ext = Coloring::extend(Coloring::parity(), sec, 1000);
  // e|0 retracts to 1|0, 01|0 retracts to 11|0: one flip apart
  CHECK(pair_value(ext, e0, seq("e|0"), seq("01|0")) == 2);
  // collapsing retractions take color 1 by convention
  CHECK(pair_value(ext, e0, seq("e|0"), seq("1|0")) == 1);
  Coloring starved = Coloring::extend(Coloring::parity(), Section::never(), 3);
  std::vector<Point> edge{seq("e|0"), seq("01|0")};
  CHECK_THROWS_AS(starved.value(e0, edge), FuelExhaustedError);
}

TEST_CASE("pushforward evaluates the base on preimages") {
  Coloring pushed = Coloring::pushforward(
      Coloring::parity(), "odometer",
      [](const Point& p) { return Point(odometer(std::get<EvpSeq>(p))); },
      [](const Point& p) {
        return Point(odometer_inverse(std::get<EvpSeq>(p)));
      });
  EvpSeq a = EvpSeq::parse("01|10");
  EvpSeq b = act(FiniteFlip{3}, a);
  CHECK(pair_value(pushed, e0, Point(odometer(a)), Point(odometer(b))) ==
        parity_color(a, b));

  Coloring broken = Coloring::pushforward(
      Coloring::parity(), "mismatch",
      [](const Point& p) { return Point(odometer(std::get<EvpSeq>(p))); },
      [](const Point& p) { return p; });
  std::vector<Point> edge{seq("01|10"), seq("11|10")};
  CHECK_THROWS_AS(broken.value(e0, edge), std::invalid_argument);
}

TEST_CASE("coloring specs round trip through from_spec") {
  std::vector<Coloring> originals = {
      Coloring::parity(),
      Coloring::adjacency(),
      Coloring::constant(2, 3, 2),
      Coloring::random_hash(42, 2, 3),
      Coloring::lift(Coloring::parity(), 3),
  };
  EvpSeq x = EvpSeq::parse("01|10");
  for (const Coloring& c : originals) {
    Coloring back = Coloring::from_spec(c.spec());
    CHECK(back.dimension() == c.dimension());
    CHECK(back.colors() == c.colors());
    std::vector<Point> edge;
    for (std::uint64_t i = 0; i < static_cast<std::uint64_t>(c.dimension());
         ++i) {
      edge.push_back(Point(act(FiniteFlip::from_index(2 * i + 1), x)));
    }
    CHECK(back.value(e0, edge) == c.value(e0, edge));
  }
  CHECK_THROWS_AS(Coloring::from_spec(Json{{"kind", "mystery"}}), ParseError);
  CHECK_THROWS_AS(Coloring::from_spec(Json::array()), ParseError);
}

TEST_CASE("constant colorings pass the transitivity scan clean") {
  Coloring c = Coloring::constant(2, 2, 1);
  EvpSeq x = EvpSeq::parse("01|10");
  std::vector<Point> b1{Point(act(FiniteFlip{1}, x))};
  std::vector<Point> b2{Point(act(FiniteFlip{2}, x))};
  std::vector<Point> a{Point(x), b1[0], b2[0]};
  TransitivityReport report =
      almost_transitivity_check(e0, c, a, b1, b2, 64);
  CHECK(report.verdict == TransitivityVerdict::no_exceptions);
  CHECK(report.exceptions.empty());
  CHECK(report.examined >= 32);
}

TEST_CASE("adjacency has finitely many transitivity exceptions") {
  Coloring c = Coloring::adjacency();
  EvpSeq x = EvpSeq::parse("01|10");
  std::vector<Point> b1{Point(odometer(x))};
  std::vector<Point> b2{Point(odometer(odometer(x)))};
  std::vector<Point> a{Point(x), b1[0], b2[0]};
  TransitivityReport report =
      almost_transitivity_check(e0, c, a, b1, b2, 64);
  CHECK(report.verdict == TransitivityVerdict::finitely_many_within_horizon);
  CHECK(report.exceptions.size() <= 4);
  CHECK_FALSE(report.exceptions.empty());
  for (const auto& ex : report.exceptions) {
    CHECK(ex.color_b1 != ex.color_b2);
  }
}

TEST_CASE("parity keeps violating transitivity across components") {
  Coloring c = Coloring::parity();
  EvpSeq x = EvpSeq::parse("01|10");
  std::vector<Point> b1{Point(x)};
  std::vector<Point> b2{Point(act(FiniteFlip{0}, x))};
  std::vector<Point> a{b1[0], b2[0]};
  for (std::uint64_t horizon : {64, 128, 256}) {
    TransitivityReport report =
        almost_transitivity_check(e0, c, a, b1, b2, horizon);
    CHECK(report.verdict == TransitivityVerdict::persistent);
  }
}

TEST_CASE("transitivity reports serialize with verdict names") {
  Coloring c = Coloring::constant(2, 2, 1);
  EvpSeq x = EvpSeq::parse("01|10");
  TransitivityReport report = almost_transitivity_check(
      e0, c,
      {Point(x), Point(act(FiniteFlip{1}, x)), Point(act(FiniteFlip{2}, x))},
      {Point(act(FiniteFlip{1}, x))}, {Point(act(FiniteFlip{2}, x))}, 32);
  Json doc = transitivity_to_json(report);
  CHECK(doc.at("verdict") == "no-exceptions");
  CHECK(doc.at("horizon") == 32);
  CHECK(std::string(verdict_name(TransitivityVerdict::persistent)) ==
        "persistent");
}
