#pragma once

#include <cstddef>
#include <string>

// Independent recheck path: parses literals and evaluates colorings straight
// from digit expansions, sharing no code with the engine library.
namespace oracle {

struct Verdict {
  bool pass = false;
  std::string detail;
};

// Certificate document: every subset of the coloring's dimension must carry
// the certificate color; points must be pairwise distinct and related.
Verdict verify_certificate_text(const std::string& json_text);

// Reduction trace document: per stage, the recorded value must pair
// monochromatically with every side set from its constraint set and sit
// strictly above that set in the zeta order; the chosen color and emitted
// sequence must match the tracks.
Verdict verify_trace_text(const std::string& json_text);

// Scans the first `count` members of the class for a triple whose three
// pairs all take parity color 2. Passes when no such triple exists.
Verdict clique2_scan(const std::string& class_literal, std::size_t count);

// Groups the first `sample` members by parity color against the first
// member and checks the grouping is a consistent two-block split.
Verdict component_census(const std::string& class_literal, std::size_t sample);

}  // namespace oracle
