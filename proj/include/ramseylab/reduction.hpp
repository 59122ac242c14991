#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <tuple>
#include <vector>

#include "ramseylab/coloring.hpp"

namespace ramseylab {

enum class StageStatus { defined, undefined_empty, fuel_exhausted };

const char* stage_status_name(StageStatus s);

struct StageRecord {
  std::size_t level = 0;
  StageStatus status = StageStatus::defined;
  std::optional<Point> value;
  // settled values over the finer subclasses that the new value must pair
  // monochromatically with (levels strictly below this one)
  std::vector<Point> k_set;
  // the same collection one level coarser, as carried by the invariant
  std::vector<Point> a_lower;
  std::uint64_t candidates_scanned = 0;
  std::string note;

  Json to_json() const;
};

struct ColorTrack {
  int color = 1;
  std::vector<StageRecord> stages;
  bool complete = false;
};

struct ReductionTrace {
  std::string base_literal;
  std::size_t i_max = 0;
  Json coloring_spec;
  TransitivityReport precheck;
  bool precheck_warning = false;
  bool precheck_ran = false;
  std::vector<ColorTrack> tracks;
  std::optional<int> chosen_color;
  std::vector<Point> emitted;
  bool emitted_distinct = false;

  Json to_json() const;
};

// Builds the level maps f^a_i by walking candidates upward in the zeta order
// from just above the settled values, and assembles per-seed reduction
// sequences from the least fully defined color. Stage fuel counts candidates
// examined per stage.
class ReductionEngine {
 public:
  ReductionEngine(Space space, Coloring coloring, std::uint64_t stage_fuel);

  // f^a_level at x; memoized on the level class representative, which makes
  // the value invariant across the class by construction.
  StageRecord stage(const Point& x, int color, std::size_t level);

  ReductionTrace build(const Point& x, std::size_t i_max);

  const Space& space() const { return space_; }
  const Coloring& coloring() const { return coloring_; }

 private:
  StageRecord compute_stage(const Point& rep, int color, std::size_t level);
  // representatives of the level-j subclasses of the level-L class of rep
  std::vector<Point> subclass_reps(const Point& class_rep, std::size_t big,
                                   std::size_t small) const;
  bool accepts(const Point& z, const std::vector<Point>& k_sorted, int color) const;

  Space space_;
  Coloring coloring_;
  std::uint64_t stage_fuel_;
  std::map<std::tuple<int, std::size_t, std::string>, StageRecord> memo_;
};

// One construction step in isolation (fresh memo, no syntactic shortcuts):
// scans candidates above the settled values until one pairs
// monochromatically with every side set, or the candidate fuel runs out.
StageRecord stage_advance(const Space& space, const Coloring& coloring,
                          const Point& x, int color, std::size_t level,
                          std::uint64_t candidate_fuel);

// Recomputes the stage-i values for x and y through two engines with
// independent memos and compares, color by color. Requires x and y related
// at filtration level j with j <= i; colors undefined on both sides are
// skipped.
bool check_stabilization(const Space& space, const Coloring& coloring,
                         const Point& x, const Point& y, std::size_t j,
                         std::size_t i, std::uint64_t stage_fuel);

// Least index from which the two reduction sequences agree entrywise.
// nullopt when they still differ at the last entry (insufficient prefix).
std::optional<std::size_t> compare_e1(std::span<const Point> sx,
                                      std::span<const Point> sy);

}  // namespace ramseylab
