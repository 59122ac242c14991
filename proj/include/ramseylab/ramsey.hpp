#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "ramseylab/coloring.hpp"

namespace ramseylab {

struct MonoCertificate {
  std::vector<Point> points;  // emission order
  int color = 0;
  Json coloring_spec;
  std::uint64_t target = 0;
  std::uint64_t horizon = 0;
  bool verified = false;
  std::string engine_version = kEngineVersion;

  Json to_json() const;
  static MonoCertificate from_json(const Json& j);
};

enum class RunStatus { ok, fuel_exhausted, error };

const char* run_status_name(RunStatus s);

struct ExtractionOutcome {
  MonoCertificate certificate;
  RunStatus status = RunStatus::ok;
  bool thin_evidence = false;
  std::uint64_t fuel_used = 0;
  std::string note;
};

struct ExtractionParams {
  std::uint64_t target = 4;   // certificate size T
  std::uint64_t horizon = 64; // pigeonhole evidence width
};

// Pivot recursion within the class of anchor: pivot = first stream element,
// its side coloring fixes the pivot, the rest of the stream is recursively
// thinned until later elements give the pivot one color; the pivot-color
// record is pigeonholed and the first `target` surviving pivots come out.
// Deterministic; fuel bounds the work and exhaustion yields a sound partial
// certificate. `fuel` counts stream materializations plus coloring
// evaluations.
ExtractionOutcome extract_monochromatic(const Space& space,
                                        const Coloring& coloring,
                                        const Point& anchor,
                                        const ExtractionParams& params,
                                        std::uint64_t fuel);

// Exhaustive recheck: all subsets of certificate size dim(coloring) carry the
// certificate color, points pairwise distinct and related. Vacuously true
// below the dimension. Shares no state with the extraction path.
bool verify_certificate(const Space& space, const Coloring& coloring,
                        const MonoCertificate& cert);

struct PigeonholeResult {
  int color = 0;
  PointStream kept;
  bool thin_evidence = false;
  std::uint64_t examined = 0;
};

// Scans `horizon` stream elements under a coloring of dimension 1, picks the
// most frequent color (ties to the least color) and returns the lazily
// filtered stream. Fewer examined elements than colors flags thin evidence.
PigeonholeResult pigeonhole_filter(const Space& space, const Coloring& unary,
                                   PointStream stream, std::uint64_t horizon,
                                   Fuel& fuel);

// Unbounded lazy variant of the extraction; its emissions are prefix
// consistent with extract_monochromatic while the gathering cap of the
// latter has not truncated anything.
class MonochromaticStream {
 public:
  MonochromaticStream(const Space& space, const Coloring& coloring,
                      const Point& anchor, std::uint64_t horizon,
                      std::uint64_t fuel);
  ~MonochromaticStream();
  MonochromaticStream(MonochromaticStream&&) noexcept;

  // nullopt once the fuel budget is gone.
  std::optional<Point> next();
  std::optional<int> color() const;
  bool thin_evidence() const;
  bool exhausted() const;
  std::uint64_t fuel_used() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

// Extraction against the extension of `coloring` from the section, with the
// witness mapped back into the section through retraction. A retraction
// collision makes the outcome an error; otherwise the certificate points lie
// in the section and are rechecked against the base coloring.
ExtractionOutcome push_section(const Space& space, const Section& section,
                               const Coloring& coloring, const Point& anchor,
                               const ExtractionParams& params,
                               std::uint64_t fuel, std::uint64_t retract_fuel);

}  // namespace ramseylab
