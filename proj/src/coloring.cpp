#include "ramseylab/coloring.hpp"

#include <algorithm>
#include <utility>

namespace ramseylab {

namespace {

const EvpSeq& as_seq(const Point& p) { return std::get<EvpSeq>(p); }

// Canonical within-class order used where an operation needs "the least
// points": digit order on sequences, index order on product points.
bool canonical_less(const Point& a, const Point& b) {
  if (const auto* s = std::get_if<EvpSeq>(&a)) {
    return lex_compare(*s, std::get<EvpSeq>(b)) < 0;
  }
  return std::get<ProductPoint>(a).index < std::get<ProductPoint>(b).index;
}

std::uint64_t pair_separation(const Space& space, const Point& x,
                              const Point& y) {
  if (space.backend() == Space::Backend::e0) {
    return std::min<std::uint64_t>(delta(as_seq(x), as_seq(y)),
                                   kRandomColoringWindow);
  }
  std::uint64_t i = std::get<ProductPoint>(x).index;
  std::uint64_t j = std::get<ProductPoint>(y).index;
  return std::min<std::uint64_t>(i > j ? i - j : j - i,
                                 kRandomColoringWindow);
}

bool zeta_adjacent(const Space& space, const Point& x, const Point& y) {
  if (space.backend() == Space::Backend::e0) {
    const EvpSeq& a = as_seq(x);
    const EvpSeq& b = as_seq(y);
    return odometer(a) == b || odometer(b) == a;
  }
  auto pos = [](const Point& p) {
    std::uint64_t i = std::get<ProductPoint>(p).index;
    return i % 2 == 0 ? static_cast<std::int64_t>(i / 2)
                      : -static_cast<std::int64_t>(i / 2) - 1;
  };
  std::int64_t d = pos(x) - pos(y);
  return d == 1 || d == -1;
}

}  // namespace

int parity_color(const EvpSeq& x, const EvpSeq& y) {
  if (x == y) throw std::invalid_argument("parity color needs two points");
  std::size_t d = delta(x, y);
  int sum = 0;
  for (std::size_t n = 0; n < d; ++n) sum += x.bit(n) + y.bit(n);
  return sum % 2 == 0 ? 1 : 2;
}

bool parity_component(const EvpSeq& x, const EvpSeq& y) {
  if (x == y) return true;
  return parity_color(x, y) == 1;
}

int Coloring::value(const Space& space, std::span<const Point> points) const {
  if (static_cast<int>(points.size()) != dimension_) {
    throw std::invalid_argument("coloring of dimension " +
                                std::to_string(dimension_) + " applied to " +
                                std::to_string(points.size()) + " points");
  }
  std::vector<Point> sorted(points.begin(), points.end());
  std::sort(sorted.begin(), sorted.end(), point_less);
  for (std::size_t i = 1; i < sorted.size(); ++i) {
    if (sorted[i - 1] == sorted[i]) {
      throw std::invalid_argument("coloring applied to a multiset: " +
                                  point_literal(sorted[i]));
    }
  }
  for (std::size_t i = 1; i < sorted.size(); ++i) {
    if (!space.related(sorted[0], sorted[i])) {
      throw NotRelatedError("coloring applied across classes");
    }
  }
  if (!sorted.empty()) space.require(sorted[0]);
  return eval_(space, sorted);
}

Coloring Coloring::constant(int dimension, int colors, int value) {
  if (dimension < 1 || colors < 1 || value < 1 || value > colors) {
    throw std::invalid_argument("bad constant coloring parameters");
  }
  Json spec{{"kind", "constant"},
            {"dimension", dimension},
            {"colors", colors},
            {"value", value}};
  return Coloring(
      dimension, colors, std::move(spec),
      [value](const Space&, std::span<const Point>) { return value; }, value);
}

Coloring Coloring::parity() {
  Json spec{{"kind", "parity"}};
  return Coloring(2, 2, std::move(spec),
                  [](const Space& space, std::span<const Point> pts) {
                    if (space.backend() != Space::Backend::e0) {
                      throw BackendMismatchError(
                          "parity coloring lives on the sequence backend");
                    }
                    return parity_color(as_seq(pts[0]), as_seq(pts[1]));
                  });
}

Coloring Coloring::adjacency() {
  Json spec{{"kind", "adjacency"}};
  return Coloring(2, 2, std::move(spec),
                  [](const Space& space, std::span<const Point> pts) {
                    return zeta_adjacent(space, pts[0], pts[1]) ? 1 : 2;
                  });
}

Coloring Coloring::random_hash(std::uint64_t seed, int dimension, int colors) {
  if (dimension < 1 || colors < 1) {
    throw std::invalid_argument("bad random coloring parameters");
  }
  Json spec{{"kind", "random"},
            {"seed", seed},
            {"dimension", dimension},
            {"colors", colors}};
  return Coloring(
      dimension, colors, std::move(spec),
      [seed, colors](const Space& space, std::span<const Point> pts) {
        std::vector<std::uint64_t> seps;
        for (std::size_t i = 0; i < pts.size(); ++i) {
          for (std::size_t j = i + 1; j < pts.size(); ++j) {
            seps.push_back(pair_separation(space, pts[i], pts[j]));
          }
        }
        std::sort(seps.begin(), seps.end());
        std::uint64_t h = splitmix64(seed);
        for (std::uint64_t s : seps) h = splitmix64(h ^ (s + 1));
        return 1 + static_cast<int>(h % static_cast<std::uint64_t>(colors));
      });
}

Coloring Coloring::lift(Coloring base, int dimension) {
  if (dimension <= base.dimension()) {
    throw std::invalid_argument("lift needs a strictly larger dimension");
  }
  Json spec{{"kind", "lift"}, {"dimension", dimension}, {"base", base.spec()}};
  int m = base.dimension();
  int colors = base.colors();
  auto inner = std::make_shared<Coloring>(std::move(base));
  return Coloring(dimension, colors, std::move(spec),
                  [inner, m](const Space& space, std::span<const Point> pts) {
                    std::vector<Point> by_order(pts.begin(), pts.end());
                    std::sort(by_order.begin(), by_order.end(),
                              [](const Point& a, const Point& b) {
                                return canonical_less(a, b);
                              });
                    by_order.resize(static_cast<std::size_t>(m));
                    std::sort(by_order.begin(), by_order.end(), point_less);
                    return inner->value_sorted(space, by_order);
                  });
}

Coloring Coloring::fix_point(Coloring base, Point y) {
  if (base.dimension() < 2) {
    throw std::invalid_argument("fix_point needs dimension at least 2");
  }
  Json spec{{"kind", "fix"}, {"point", point_literal(y)}, {"base", base.spec()}};
  int dim = base.dimension() - 1;
  int colors = base.colors();
  auto inner = std::make_shared<Coloring>(std::move(base));
  auto fixed = std::make_shared<Point>(std::move(y));
  return Coloring(dim, colors, std::move(spec),
                  [inner, fixed](const Space& space,
                                 std::span<const Point> pts) {
                    std::vector<Point> edge(pts.begin(), pts.end());
                    for (const Point& p : edge) {
                      if (p == *fixed) {
                        throw std::invalid_argument(
                            "fixed point occurs in the argument set: " +
                            point_literal(p));
                      }
                    }
                    edge.insert(std::upper_bound(edge.begin(), edge.end(),
                                                 *fixed, point_less),
                                *fixed);
                    return inner->value_sorted(space, edge);
                  });
}

Coloring Coloring::extend(Coloring base, Section section,
                          std::uint64_t retract_fuel) {
  Json spec{{"kind", "extend"},
            {"section", section.name()},
            {"fuel", retract_fuel},
            {"base", base.spec()}};
  int dim = base.dimension();
  int colors = base.colors();
  auto inner = std::make_shared<Coloring>(std::move(base));
  auto sec = std::make_shared<Section>(std::move(section));
  return Coloring(
      dim, colors, std::move(spec),
      [inner, sec, retract_fuel](const Space& space,
                                 std::span<const Point> pts) {
        std::vector<Point> images;
        images.reserve(pts.size());
        for (const Point& p : pts) {
          Fuel fuel(retract_fuel);
          auto r = retract(space, *sec, p, fuel);
          if (!r) {
            throw FuelExhaustedError("retraction into section " +
                                     sec->name() + " ran out of fuel at " +
                                     point_literal(p));
          }
          images.push_back(std::move(*r));
        }
        std::sort(images.begin(), images.end(), point_less);
        for (std::size_t i = 1; i < images.size(); ++i) {
          if (images[i - 1] == images[i]) return 1;
        }
        return inner->value_sorted(space, images);
      });
}

Coloring Coloring::pushforward(Coloring base, std::string map_name,
                               std::function<Point(const Point&)> forward,
                               std::function<Point(const Point&)> backward) {
  Json spec{{"kind", "pushforward"},
            {"map", map_name},
            {"base", base.spec()}};
  int dim = base.dimension();
  int colors = base.colors();
  auto inner = std::make_shared<Coloring>(std::move(base));
  auto fwd = std::make_shared<std::function<Point(const Point&)>>(
      std::move(forward));
  auto bwd = std::make_shared<std::function<Point(const Point&)>>(
      std::move(backward));
  return Coloring(dim, colors, std::move(spec),
                  [inner, fwd, bwd](const Space& space,
                                    std::span<const Point> pts) {
                    std::vector<Point> pre;
                    pre.reserve(pts.size());
                    for (const Point& p : pts) {
                      Point q = (*bwd)(p);
                      if ((*fwd)(q) != p) {
                        throw std::invalid_argument(
                            "point outside the image of the map: " +
                            point_literal(p));
                      }
                      pre.push_back(std::move(q));
                    }
                    std::sort(pre.begin(), pre.end(), point_less);
                    return inner->value_sorted(space, pre);
                  });
}

Coloring Coloring::from_spec(const Json& spec) {
  if (!spec.is_object() || !spec.contains("kind")) {
    throw ParseError("coloring spec must be an object with a kind");
  }
  std::string kind = spec.at("kind").get<std::string>();
  if (kind == "parity") return parity();
  if (kind == "adjacency") return adjacency();
  if (kind == "constant") {
    return constant(spec.at("dimension").get<int>(),
                    spec.at("colors").get<int>(), spec.at("value").get<int>());
  }
  if (kind == "random") {
    return random_hash(spec.at("seed").get<std::uint64_t>(),
                       spec.at("dimension").get<int>(),
                       spec.at("colors").get<int>());
  }
  if (kind == "lift") {
    return lift(from_spec(spec.at("base")), spec.at("dimension").get<int>());
  }
  if (kind == "fix") {
    return fix_point(from_spec(spec.at("base")),
                     parse_point(spec.at("point").get<std::string>()));
  }
  if (kind == "extend") {
    std::uint64_t fuel = spec.contains("fuel")
                             ? spec.at("fuel").get<std::uint64_t>()
                             : 10000;
    return extend(from_spec(spec.at("base")),
                  Section::parse(spec.at("section").get<std::string>()), fuel);
  }
  throw ParseError("unknown coloring kind: " + kind);
}

TransitivityReport almost_transitivity_check(const Space& space,
                                             const Coloring& coloring,
                                             const std::vector<Point>& a_set,
                                             const std::vector<Point>& b1,
                                             const std::vector<Point>& b2,
                                             std::uint64_t horizon) {
  std::size_t side = static_cast<std::size_t>(coloring.dimension()) - 1;
  if (b1.size() != side || b2.size() != side) {
    throw std::invalid_argument("side sets must have dimension-1 points");
  }
  auto subset_of_a = [&](const std::vector<Point>& b) {
    return std::all_of(b.begin(), b.end(), [&](const Point& p) {
      return std::find(a_set.begin(), a_set.end(), p) != a_set.end();
    });
  };
  if (a_set.empty() || !subset_of_a(b1) || !subset_of_a(b2)) {
    throw std::invalid_argument("side sets must come from the base set");
  }
  std::vector<Point> b1s(b1), b2s(b2);
  std::sort(b1s.begin(), b1s.end(), point_less);
  std::sort(b2s.begin(), b2s.end(), point_less);
  if (b1s == b2s) {
    throw std::invalid_argument("side sets must differ");
  }
  for (const Point& p : a_set) {
    if (!space.related(a_set.front(), p)) {
      throw NotRelatedError("base set crosses classes");
    }
  }

  const Point& anchor = *std::min_element(a_set.begin(), a_set.end(),
                                          canonical_less);
  TransitivityReport report;
  report.horizon = horizon;
  PointStream stream = space.omega_enumerate(anchor);
  Fuel fuel(horizon + 16);
  auto excluded = [&](const Point& z) {
    return std::find(b1s.begin(), b1s.end(), z) != b1s.end() ||
           std::find(b2s.begin(), b2s.end(), z) != b2s.end();
  };
  std::uint64_t last_exception_pos = 0;
  for (std::uint64_t i = 0; i < horizon; ++i) {
    auto z = stream.at(i, fuel);
    if (!z) break;
    if (excluded(*z)) continue;
    ++report.examined;
    std::vector<Point> e1(b1s);
    e1.push_back(*z);
    std::vector<Point> e2(b2s);
    e2.push_back(*z);
    int c1 = coloring.value(space, e1);
    int c2 = coloring.value(space, e2);
    if (c1 != c2) {
      report.exceptions.push_back({*z, c1, c2});
      last_exception_pos = i;
    }
  }
  if (report.exceptions.empty()) {
    report.verdict = TransitivityVerdict::no_exceptions;
  } else if (last_exception_pos >= horizon - horizon / 4) {
    report.verdict = TransitivityVerdict::persistent;
  } else {
    report.verdict = TransitivityVerdict::finitely_many_within_horizon;
  }
  return report;
}

Json transitivity_to_json(const TransitivityReport& report) {
  Json j;
  j["horizon"] = report.horizon;
  j["examined"] = report.examined;
  Json ex = Json::array();
  for (const auto& e : report.exceptions) {
    ex.push_back(Json{{"witness", point_literal(e.witness)},
                      {"color_b1", e.color_b1},
                      {"color_b2", e.color_b2}});
  }
  j["exceptions"] = std::move(ex);
  j["verdict"] = verdict_name(report.verdict);
  return j;
}

const char* verdict_name(TransitivityVerdict v) {
  switch (v) {
    case TransitivityVerdict::no_exceptions:
      return "no-exceptions";
    case TransitivityVerdict::finitely_many_within_horizon:
      return "finitely-many-within-horizon";
    case TransitivityVerdict::persistent:
      return "persistent";
  }
  return "unknown";
}

}  // namespace ramseylab
