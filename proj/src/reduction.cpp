#include "ramseylab/reduction.hpp"

#include <algorithm>
#include <utility>

#include "ramseylab/evp.hpp"

namespace ramseylab {

namespace {

// advances idx to the next size-|idx| combination of {0..total-1}
bool next_combination(std::vector<std::size_t>& idx, std::size_t total) {
  std::size_t r = idx.size();
  std::size_t t = r;
  while (t > 0) {
    --t;
    if (idx[t] + (r - t) < total) {
      ++idx[t];
      for (std::size_t u = t + 1; u < r; ++u) idx[u] = idx[u - 1] + 1;
      return true;
    }
  }
  return false;
}

Json points_json(const std::vector<Point>& pts) {
  Json arr = Json::array();
  for (const auto& p : pts) arr.push_back(point_literal(p));
  return arr;
}

}  // namespace

const char* stage_status_name(StageStatus s) {
  switch (s) {
    case StageStatus::defined: return "defined";
    case StageStatus::undefined_empty: return "undefined-empty";
    case StageStatus::fuel_exhausted: return "fuel-exhausted";
  }
  return "unknown";
}

Json StageRecord::to_json() const {
  Json j;
  j["level"] = level;
  j["status"] = stage_status_name(status);
  j["value"] = value ? Json(point_literal(*value)) : Json(nullptr);
  j["k_set"] = points_json(k_set);
  j["a_lower"] = points_json(a_lower);
  j["scanned"] = candidates_scanned;
  j["note"] = note;
  return j;
}

Json ReductionTrace::to_json() const {
  Json j;
  j["base"] = base_literal;
  j["i_max"] = i_max;
  j["coloring"] = coloring_spec;
  j["precheck"] = precheck_ran ? transitivity_to_json(precheck) : Json(nullptr);
  j["precheck_warning"] = precheck_warning;
  Json tr = Json::array();
  for (const auto& t : tracks) {
    Json stages = Json::array();
    for (const auto& s : t.stages) stages.push_back(s.to_json());
    tr.push_back(Json{{"color", t.color},
                      {"complete", t.complete},
                      {"stages", std::move(stages)}});
  }
  j["tracks"] = std::move(tr);
  j["chosen_color"] = chosen_color ? Json(*chosen_color) : Json(nullptr);
  j["emitted"] = points_json(emitted);
  j["emitted_distinct"] = emitted_distinct;
  j["engine"] = kEngineVersion;
  return j;
}

ReductionEngine::ReductionEngine(Space space, Coloring coloring,
                                 std::uint64_t stage_fuel)
    : space_(space), coloring_(std::move(coloring)), stage_fuel_(stage_fuel) {
  if (stage_fuel_ == 0) {
    throw std::invalid_argument("stage fuel must be positive");
  }
}

std::vector<Point> ReductionEngine::subclass_reps(const Point& class_rep,
                                                  std::size_t big,
                                                  std::size_t small) const {
  if (space_.backend() == Space::Backend::e0) {
    const EvpSeq& base = std::get<EvpSeq>(class_rep);
    std::vector<Point> out;
    out.reserve(std::size_t{1} << (big - small));
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << (big - small));
         ++mask) {
      out.push_back(act(FiniteFlip::from_index(mask << small), base));
    }
    return out;
  }
  std::vector<Point> reps;
  for (const Point& m : space_.filtration_class(big, class_rep)) {
    reps.push_back(space_.filtration_representative(small, m));
  }
  std::sort(reps.begin(), reps.end(), point_less);
  reps.erase(std::unique(reps.begin(), reps.end()), reps.end());
  return reps;
}

bool ReductionEngine::accepts(const Point& z, const std::vector<Point>& k_sorted,
                              int color) const {
  std::size_t side = static_cast<std::size_t>(coloring_.dimension()) - 1;
  if (k_sorted.size() < side) return true;  // no side sets to satisfy
  std::vector<std::size_t> idx(side);
  for (std::size_t t = 0; t < side; ++t) idx[t] = t;
  std::vector<Point> edge;
  do {
    edge.clear();
    for (std::size_t t : idx) edge.push_back(k_sorted[t]);
    auto at = std::upper_bound(edge.begin(), edge.end(), z, point_less);
    edge.insert(at, z);
    if (coloring_.value_sorted(space_, edge) != color) return false;
  } while (side > 0 && next_combination(idx, k_sorted.size()));
  return true;
}

StageRecord ReductionEngine::stage(const Point& x, int color,
                                   std::size_t level) {
  space_.require(x);
  if (color < 1 || color > coloring_.colors()) {
    throw std::invalid_argument("color out of range");
  }
  if (level == 0) {
    StageRecord r;
    r.level = 0;
    r.status = StageStatus::defined;
    r.value = x;
    return r;
  }
  Point rep = space_.filtration_representative(level, x);
  auto key = std::make_tuple(color, level, point_literal(rep));
  if (auto it = memo_.find(key); it != memo_.end()) return it->second;
  StageRecord rec = compute_stage(rep, color, level);
  memo_.emplace(std::move(key), rec);
  return rec;
}

StageRecord ReductionEngine::compute_stage(const Point& rep, int color,
                                           std::size_t level) {
  StageRecord rec;
  rec.level = level;

  std::vector<Point> k;
  for (std::size_t j = 0; j < level; ++j) {
    for (const Point& y : subclass_reps(rep, level, j)) {
      StageRecord dep = stage(y, color, j);
      if (dep.status != StageStatus::defined) {
        rec.status = dep.status;
        rec.note = "missing settled value at level " + std::to_string(j);
        return rec;
      }
      k.push_back(*dep.value);
    }
  }
  std::sort(k.begin(), k.end(), point_less);
  k.erase(std::unique(k.begin(), k.end()), k.end());
  rec.k_set = k;

  if (level >= 2) {
    std::vector<Point> lower;
    for (std::size_t j = 0; j + 1 < level; ++j) {
      for (const Point& y : subclass_reps(rep, level - 1, j)) {
        lower.push_back(*stage(y, color, j).value);
      }
    }
    std::sort(lower.begin(), lower.end(), point_less);
    lower.erase(std::unique(lower.begin(), lower.end()), lower.end());
    rec.a_lower = std::move(lower);
  }

  Point z = space_.zeta_successor(*std::max_element(
      k.begin(), k.end(), [&](const Point& a, const Point& b) {
        return space_.zeta_compare(a, b) == std::strong_ordering::less;
      }));
  for (std::uint64_t scanned = 1;; ++scanned) {
    if (scanned > stage_fuel_) {
      rec.status = StageStatus::fuel_exhausted;
      rec.candidates_scanned = scanned - 1;
      rec.note = "candidate fuel spent";
      return rec;
    }
    if (accepts(z, k, color)) {
      rec.status = StageStatus::defined;
      rec.value = z;
      rec.candidates_scanned = scanned;
      return rec;
    }
    z = space_.zeta_successor(z);
  }
}

ReductionTrace ReductionEngine::build(const Point& x, std::size_t i_max) {
  space_.require(x);
  ReductionTrace tr;
  tr.base_literal = point_literal(x);
  tr.i_max = i_max;
  tr.coloring_spec = coloring_.spec();

  std::size_t n = static_cast<std::size_t>(coloring_.dimension());
  if (n >= 2) {
    // advisory: colorings far from transitive rarely admit any fully
    // defined color, so surface that before the stage walks
    std::vector<Point> a_set;
    for (std::size_t i = 0; i <= n; ++i) a_set.push_back(space_.enumerate_at(x, i));
    std::vector<Point> b1(a_set.begin(), a_set.begin() + static_cast<std::ptrdiff_t>(n - 1));
    std::vector<Point> b2(a_set.begin() + 1, a_set.begin() + static_cast<std::ptrdiff_t>(n));
    tr.precheck = almost_transitivity_check(space_, coloring_, a_set, b1, b2, 64);
    tr.precheck_ran = true;
    tr.precheck_warning = tr.precheck.verdict == TransitivityVerdict::persistent;
  }

  std::size_t stage1_class =
      space_.backend() == Space::Backend::e0 ? 2 : 1;
  for (int a = 1; a <= coloring_.colors(); ++a) {
    ColorTrack track;
    track.color = a;
    bool syntactic_empty = coloring_.constant_value() &&
                           *coloring_.constant_value() != a &&
                           stage1_class >= n - 1;
    if (syntactic_empty) {
      StageRecord zero;
      zero.level = 0;
      zero.status = StageStatus::defined;
      zero.value = x;
      track.stages.push_back(std::move(zero));
      StageRecord one;
      one.level = 1;
      one.status = StageStatus::undefined_empty;
      for (const Point& y : subclass_reps(
               space_.filtration_representative(1, x), 1, 0)) {
        one.k_set.push_back(y);
      }
      std::sort(one.k_set.begin(), one.k_set.end(), point_less);
      one.note = "constant coloring never attains this color";
      track.stages.push_back(std::move(one));
      track.complete = false;
      tr.tracks.push_back(std::move(track));
      continue;
    }
    track.complete = true;
    for (std::size_t level = 0; level <= i_max; ++level) {
      StageRecord r = stage(x, a, level);
      bool done = r.status != StageStatus::defined;
      track.stages.push_back(std::move(r));
      if (done) {
        track.complete = false;
        break;
      }
    }
    tr.tracks.push_back(std::move(track));
  }

  for (const auto& track : tr.tracks) {
    if (track.complete) {
      tr.chosen_color = track.color;
      for (const auto& s : track.stages) tr.emitted.push_back(*s.value);
      break;
    }
  }
  std::vector<Point> dedup = tr.emitted;
  std::sort(dedup.begin(), dedup.end(), point_less);
  tr.emitted_distinct =
      std::adjacent_find(dedup.begin(), dedup.end()) == dedup.end();
  return tr;
}

StageRecord stage_advance(const Space& space, const Coloring& coloring,
                          const Point& x, int color, std::size_t level,
                          std::uint64_t candidate_fuel) {
  ReductionEngine engine(space, coloring, candidate_fuel);
  return engine.stage(x, color, level);
}

bool check_stabilization(const Space& space, const Coloring& coloring,
                         const Point& x, const Point& y, std::size_t j,
                         std::size_t i, std::uint64_t stage_fuel) {
  if (i < j) {
    throw std::invalid_argument("stage index below the relating level");
  }
  if (!space.filtration_related(j, x, y)) {
    throw NotRelatedError("stabilization check needs level-related points");
  }
  for (int a = 1; a <= coloring.colors(); ++a) {
    ReductionEngine ex(space, coloring, stage_fuel);
    ReductionEngine ey(space, coloring, stage_fuel);
    StageRecord rx = ex.stage(x, a, i);
    StageRecord ry = ey.stage(y, a, i);
    bool dx = rx.status == StageStatus::defined;
    bool dy = ry.status == StageStatus::defined;
    if (dx != dy) return false;
    if (dx && !(*rx.value == *ry.value)) return false;
  }
  return true;
}

std::optional<std::size_t> compare_e1(std::span<const Point> sx,
                                      std::span<const Point> sy) {
  if (sx.size() != sy.size()) {
    throw std::invalid_argument("reduction sequences differ in length");
  }
  if (sx.empty()) return 0;
  std::size_t m = sx.size();
  while (m > 0 && sx[m - 1] == sy[m - 1]) --m;
  if (m == sx.size()) return std::nullopt;  // still apart at the last entry
  return m;
}

}  // namespace ramseylab
