#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <string>
#include <vector>

#include "ramseylab/space.hpp"
#include "slow_reference.hpp"

using namespace ramseylab;

namespace {

Point seq(const char* lit) { return Point(EvpSeq::parse(lit)); }
Point prod(const char* cid, std::uint64_t i) {
  return Point(ProductPoint{cid, i});
}

std::vector<std::string> literals(const std::vector<Point>& pts) {
  std::vector<std::string> out;
  out.reserve(pts.size());
  for (const Point& p : pts) out.push_back(point_literal(p));
  return out;
}

}  // namespace

TEST_CASE("point literals parse on both backends") {
  CHECK(point_literal(parse_point("01|10")) == "01|10");
  CHECK(point_literal(parse_point("1:9")) == "1:9");
  CHECK(parse_point("left:3") == prod("left", 3));
  CHECK_THROWS_AS(parse_point("noseparator"), ParseError);
  CHECK_THROWS_AS(parse_point(":4"), ParseError);
  CHECK_THROWS_AS(parse_point("c:4x"), ParseError);
}

TEST_CASE("point_less is a strict total order") {
  std::vector<Point> pts = {seq("e|10"), seq("0|01"), prod("1", 0),
                            prod("1", 2), prod("2", 0)};
  for (const Point& a : pts) {
    CHECK_FALSE(point_less(a, a));
    for (const Point& b : pts) {
      if (a == b) continue;
      CHECK(point_less(a, b) != point_less(b, a));
    }
  }
}

TEST_CASE("each backend only contains its own points") {
  Space e = Space::e0();
  Space s = Space::smooth_product();
  CHECK(e.contains(seq("e|0")));
  CHECK_FALSE(e.contains(prod("1", 0)));
  CHECK(s.contains(prod("1", 0)));
  CHECK_FALSE(s.contains(seq("e|0")));
  CHECK_THROWS_AS(e.require(prod("1", 0)), BackendMismatchError);
  CHECK_THROWS_AS(s.related(prod("1", 0), seq("e|0")), BackendMismatchError);
}

TEST_CASE("relatedness per backend") {
  Space e = Space::e0();
  CHECK(e.related(seq("01|10"), seq("1001|10")));
  CHECK_FALSE(e.related(seq("e|10"), seq("e|01")));
  Space s = Space::smooth_product();
  CHECK(s.related(prod("1", 0), prod("1", 7)));
  CHECK_FALSE(s.related(prod("1", 0), prod("2", 0)));
}

TEST_CASE("zeta order on the sequence backend follows integer difference") {
  Space e = Space::e0();
  CHECK(e.zeta_compare(seq("01|10"), seq("11|10")) ==
        std::strong_ordering::less);
  CHECK(e.zeta_compare(seq("01|10"), seq("0|01")) ==
        std::strong_ordering::greater);
  CHECK(e.zeta_compare(seq("01|10"), seq("01|10")) ==
        std::strong_ordering::equal);
  CHECK(e.zeta_compare(seq("101|01"), seq("0|01")) ==
        std::strong_ordering::greater);
  CHECK_THROWS_AS(e.zeta_compare(seq("e|10"), seq("e|01")), NotRelatedError);
  CHECK_THROWS_AS(e.zeta_compare(seq("e|0"), seq("1|0")), ConstantTailError);
}

TEST_CASE("zeta successor on the sequence backend is the odometer") {
  Space e = Space::e0();
  CHECK(e.zeta_successor(seq("01|10")) == seq("11|10"));
  CHECK(e.zeta_successor(seq("11|10")) == seq("0001|10"));
  CHECK_THROWS_AS(e.zeta_successor(seq("e|1")), ConstantTailError);
}

TEST_CASE("zeta order on the product backend interleaves indices") {
  Space s = Space::smooth_product();
  // positions: index 2m sits at m, index 2m+1 at -m-1
  std::vector<Point> ascending = {prod("1", 3), prod("1", 1), prod("1", 0),
                                  prod("1", 2), prod("1", 4)};
  for (std::size_t i = 0; i < ascending.size(); ++i) {
    for (std::size_t j = 0; j < ascending.size(); ++j) {
      auto want = i < j   ? std::strong_ordering::less
                  : i > j ? std::strong_ordering::greater
                          : std::strong_ordering::equal;
      CHECK(s.zeta_compare(ascending[i], ascending[j]) == want);
    }
    if (i + 1 < ascending.size()) {
      CHECK(s.zeta_successor(ascending[i]) == ascending[i + 1]);
    }
  }
  CHECK_THROWS_AS(s.zeta_compare(prod("1", 0), prod("2", 0)), NotRelatedError);
}

TEST_CASE("filtration level 0 is equality") {
  Space e = Space::e0();
  CHECK(e.filtration_related(0, seq("01|10"), seq("01|10")));
  CHECK_FALSE(e.filtration_related(0, seq("01|10"), seq("11|10")));
  Space s = Space::smooth_product();
  CHECK(s.filtration_related(0, prod("1", 5), prod("1", 5)));
  CHECK_FALSE(s.filtration_related(0, prod("1", 5), prod("1", 4)));
}

TEST_CASE("filtration on the sequence backend is agreement from the level on") {
  Space e = Space::e0();
  CHECK(e.filtration_related(2, seq("01|10"), seq("11|10")));
  CHECK_FALSE(e.filtration_related(2, seq("01|10"), seq("1001|10")));
  CHECK(e.filtration_related(4, seq("01|10"), seq("1001|10")));
  CHECK(literals(e.filtration_class(2, seq("01|10"))) ==
        std::vector<std::string>{"e|10", "0|01", "01|10", "11|10"});
  CHECK(e.filtration_class(3, seq("01|10")).size() == 8);
  CHECK(e.filtration_class(0, seq("01|10")) ==
        std::vector<Point>{seq("01|10")});
  CHECK(point_literal(e.filtration_representative(2, seq("01|10"))) == "0|01");
  Point rep = e.filtration_representative(5, seq("1101|10"));
  CHECK(e.filtration_representative(5, rep) == rep);
  CHECK(e.filtration_related(5, rep, seq("1101|10")));
}

TEST_CASE("filtration on the product backend pools indices below the level") {
  Space s = Space::smooth_product();
  CHECK(s.filtration_related(2, prod("1", 0), prod("1", 1)));
  CHECK_FALSE(s.filtration_related(2, prod("1", 0), prod("1", 2)));
  CHECK_FALSE(s.filtration_related(2, prod("1", 0), prod("2", 0)));
  CHECK(s.filtration_class(2, prod("1", 1)) ==
        std::vector<Point>{prod("1", 0), prod("1", 1)});
  CHECK(s.filtration_class(2, prod("1", 5)) == std::vector<Point>{prod("1", 5)});
  CHECK(s.filtration_representative(2, prod("1", 1)) == prod("1", 0));
  CHECK(s.filtration_representative(2, prod("1", 5)) == prod("1", 5));
}

TEST_CASE("selector exists only on the product backend") {
  Space s = Space::smooth_product();
  CHECK(s.selector(prod("7", 13)) == prod("7", 0));
  CHECK_THROWS_AS(Space::e0().selector(seq("01|10")), NoTransversalError);
}

TEST_CASE("class enumeration flips the anchor by the index bit pattern") {
  Space e = Space::e0();
  Point anchor = seq("e|10");
  CHECK(point_literal(e.enumerate_at(anchor, 0)) == "e|10");
  CHECK(point_literal(e.enumerate_at(anchor, 1)) == "0|01");
  CHECK(point_literal(e.enumerate_at(anchor, 2)) == "11|10");
  CHECK(point_literal(e.enumerate_at(anchor, 3)) == "01|10");
  for (std::uint64_t i = 0; i < 32; ++i) {
    CHECK(e.related(anchor, e.enumerate_at(anchor, i)));
  }
  Space s = Space::smooth_product();
  CHECK(s.enumerate_at(prod("1", 7), 5) == prod("1", 5));
}

TEST_CASE("streams memoize and report fuel exhaustion honestly") {
  Space e = Space::e0();
  PointStream stream = e.omega_enumerate(seq("e|10"));
  Fuel fuel(3);
  CHECK(stream.at(0, fuel).has_value());
  CHECK(stream.at(1, fuel).has_value());
  CHECK(stream.at(2, fuel).has_value());
  CHECK_FALSE(stream.at(3, fuel).has_value());
  CHECK(fuel.exhausted());
  // already materialized elements stay readable without fresh fuel
  CHECK(point_literal(*stream.at(1, fuel)) == "0|01");
}

TEST_CASE("filtered streams keep matching elements in order") {
  Space e = Space::e0();
  PointStream evens = e.omega_enumerate(seq("e|10")).filter([](const Point& p) {
    return std::get<EvpSeq>(p).bit(0) == 1;
  });
  Fuel fuel(10);
  CHECK(point_literal(*evens.at(0, fuel)) == "e|10");
  CHECK(point_literal(*evens.at(1, fuel)) == "11|10");
  // position 0 cost one base element, position 1 scanned two more
  CHECK(fuel.used() == 3);
  Fuel tiny(1);
  PointStream none = e.omega_enumerate(seq("e|10")).filter(
      [](const Point&) { return false; });
  CHECK_FALSE(none.at(0, tiny).has_value());
  CHECK(tiny.exhausted());
}

TEST_CASE("fuel aware filters charge the shared budget") {
  Space e = Space::e0();
  PointStream stream =
      e.omega_enumerate(seq("e|10")).filter([](const Point&, Fuel& f) {
        f.take();
        return true;
      });
  Fuel fuel(6);
  CHECK(stream.at(2, fuel).has_value());
  CHECK(fuel.used() == 6);
  CHECK_FALSE(stream.at(3, fuel).has_value());
}

TEST_CASE("sections answer membership and carry their completeness claim") {
  Section bit1 = Section::bit_predicate(1, 1);
  CHECK(bit1.contains(seq("01|10")));
  CHECK_FALSE(bit1.contains(seq("0|01")));
  CHECK(bit1.claimed_complete());
  CHECK_THROWS_AS(bit1.contains(prod("1", 0)), BackendMismatchError);

  Section mod = Section::index_mod(3, 2);
  CHECK(mod.contains(prod("1", 5)));
  CHECK_FALSE(mod.contains(prod("1", 6)));
  CHECK_THROWS_AS(mod.contains(seq("e|0")), BackendMismatchError);

  CHECK(Section::whole_space().contains(seq("e|0")));
  CHECK(Section::whole_space().contains(prod("1", 0)));
  CHECK_FALSE(Section::never().contains(seq("e|0")));
  CHECK_FALSE(Section::never().claimed_complete());
}

TEST_CASE("section parse covers the four spec forms") {
  CHECK(Section::parse("bit[2]=1").name() == "bit[2]=1");
  CHECK(Section::parse("bit[2]=1").contains(seq("11101|0")));
  CHECK(Section::parse("mod[4]=3").contains(prod("1", 7)));
  CHECK(Section::parse("all").contains(seq("e|0")));
  CHECK_FALSE(Section::parse("none").contains(seq("e|0")));
  CHECK_THROWS_AS(Section::parse("bit[x]=1"), ParseError);
  CHECK_THROWS_AS(Section::parse("strange"), ParseError);
}

TEST_CASE("retraction finds the first class member inside the section") {
  Space e = Space::e0();
  Fuel fuel(100);
  auto r = retract(e, Section::bit_predicate(0, 1), seq("e|10"), fuel);
  REQUIRE(r.has_value());
  CHECK(point_literal(*r) == "e|10");

  auto flipped = retract(e, Section::bit_predicate(0, 1), seq("0|01"), fuel);
  REQUIRE(flipped.has_value());
  CHECK(std::get<EvpSeq>(*flipped).bit(0) == 1);
  CHECK(e.related(*flipped, seq("0|01")));

  Fuel small(5);
  CHECK_FALSE(retract(e, Section::never(), seq("e|10"), small).has_value());
  CHECK(small.exhausted());
}
