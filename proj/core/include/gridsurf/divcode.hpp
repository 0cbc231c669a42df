#pragma once

#include <optional>
#include <string>
#include <vector>

#include "gridsurf/surface.hpp"

namespace gridsurf {

/// One component of a dividing curve family: the sequence of crossing points
/// it passes through, with a closed/open flag. In the text format a closed
/// component repeats its first label at the end; in memory the label list
/// holds each point once.
struct CodeComponent {
  std::vector<int> points;  // 1-based point labels
  bool closed = false;
};

/// Dividing code: n crossing points, the plus-curve components and the
/// minus-curve components. Every point appears exactly once on each side.
struct DividingCode {
  int n = 0;
  std::vector<CodeComponent> plus;
  std::vector<CodeComponent> minus;
};

void validate_code(const DividingCode& c);

/// Canonic code of a surface diagram: points are rectangle labels (1-based
/// index in the rectangle list); plus components follow the shared backslash
/// corners (TR_i = BL_j gives i -> j), minus components the shared slash
/// corners (TL_i = BR_j gives i -> j). Open components end at boundary
/// corners. Components are listed with a deterministic order and rotation.
DividingCode extract_code(const SurfaceDiagram& pi);

/// Finds a label bijection identifying the two codes: plus components map to
/// plus components respecting direction, closed/open flags and rotation of
/// closed components. Returns one witness (old label -> new label, 1-based)
/// or nullopt.
std::optional<std::vector<int>> code_isomorphic(const DividingCode& a, const DividingCode& b);

/// Canonical serialization up to isomorphism (used as a grouping key).
/// Exhaustive over component orderings; intended for small codes.
std::string code_canonical_key(const DividingCode& c);

/// Equality under the identity point bijection (closed components compared
/// up to rotation, component order ignored).
bool code_equal_identity(const DividingCode& a, const DividingCode& b);

/// Rotates closed components to start at their least label and sorts the
/// component lists; the result compares bytewise iff identity-equal.
DividingCode normalize_code(const DividingCode& c);

}  // namespace gridsurf
