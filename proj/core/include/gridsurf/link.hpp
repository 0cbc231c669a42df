#pragma once

#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "gridsurf/cyclic.hpp"

namespace gridsurf {

struct GridPoint {
  int v = 0;  // vertical level (column), ordinal position on the theta circle
  int h = 0;  // horizontal level (row), ordinal position on the phi circle
  auto operator<=>(const GridPoint&) const = default;
};

/// Rectangular diagram of a link on the torus grid: `cols` x `rows` occupied
/// levels, two vertices per occupied level. Components are ordered by their
/// least vertex; `orientation` (optional) holds one direction flag per
/// component: +1 means the component is traversed starting from its least
/// vertex toward its column partner.
struct LinkDiagram {
  int cols = 0;
  int rows = 0;
  std::vector<GridPoint> vertices;
  std::vector<int8_t> orientation;  // empty = unoriented

  bool oriented() const { return !orientation.empty(); }
};

/// Census of corner types plus the self-writhe bookkeeping used by the
/// Thurston-Bennequin counts. Corner names follow compass positions of the
/// vertex within the quadrant spanned by its two edges.
struct CornerCensus {
  int ne = 0, nw = 0, se = 0, sw = 0;
  int writhe = 0;  // signed self-crossings, vertical strand over horizontal
  int vertex_count() const { return ne + nw + se + sw; }
};

struct ComponentReport {
  std::vector<GridPoint> vertices;  // in traversal order
  CornerCensus census;
  int tb_plus = 0;
  int tb_minus = 0;
};

struct LinkReport {
  std::vector<ComponentReport> components;
  int writhe = 0;
  int tb_plus = 0;
  int tb_minus = 0;
  int vertex_count = 0;
};

void validate_link(const LinkDiagram& R);

/// Splits the vertex set into cyclically ordered components (edges join the
/// two vertices sharing a level). Each component starts at its least vertex.
std::vector<std::vector<GridPoint>> link_components(const LinkDiagram& R);

LinkDiagram orient_canonically(const LinkDiagram& R);

/// Corner census, writhe and tb counts. Requires an oriented diagram.
/// tb_plus = -w - (#NW + #SE)/2 and tb_minus = w - (#NE + #SW)/2, evaluated
/// per component on its self-crossings; totals are the component sums and
/// always satisfy vertex_count = -2 (tb_plus + tb_minus).
LinkReport analyze_link(const LinkDiagram& R);

enum class LevelAxis : uint8_t { Vertical, Horizontal };

enum class Quadrant : uint8_t { NE, NW, SE, SW };

const char* quadrant_name(Quadrant q);
Quadrant quadrant_from_name(const std::string& name);

struct LinkMove {
  enum class Kind : uint8_t { Exchange, Stabilize, Destabilize } kind;
  // Exchange: transpose occupied levels `index` and `index`+1 on `axis`.
  // Stabilize: replace `site` by three vertices spanning a small corner in
  //   `quadrant`; `stab_type` 1 or 2 must match the quadrant's diagonal type.
  // Destabilize: `site` is the corner vertex of the small L pattern.
  LevelAxis axis = LevelAxis::Vertical;
  int index = 0;
  GridPoint site{};
  Quadrant quadrant = Quadrant::NE;
  int stab_type = 0;  // 1 or 2; 0 = derive from quadrant
};

/// Type of the stabilization whose small square sits in the given quadrant:
/// NE/SW create a backslash corner (type 1), NW/SE a slash corner (type 2).
int stabilization_type(Quadrant q);

LinkDiagram apply_link_move(const LinkDiagram& R, const LinkMove& mv);

/// All exchange moves applicable to R.
std::vector<LinkMove> exchange_moves(const LinkDiagram& R);

struct ClosureResult {
  std::set<std::string> canonical_forms;
  bool is_rigid = false;
  bool complete = true;  // false when the node budget ran out
};

/// BFS of the exchange-move orbit of R, keyed by canonical forms.
ClosureResult exchange_closure(const LinkDiagram& R, long node_budget = 1000000);

/// Lexicographically least serialization over all rotations of the two
/// cyclic orders. Equal strings iff combinatorially equivalent.
std::string canonical_form(const LinkDiagram& R);

LinkDiagram apply_symmetry(const LinkDiagram& R, Symmetry s);

/// Point reflection (theta,phi) -> (-theta,-phi) with orientation reversal.
LinkDiagram point_reflection(const LinkDiagram& R);

}  // namespace gridsurf
