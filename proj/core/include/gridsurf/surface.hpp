#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "gridsurf/cyclic.hpp"
#include "gridsurf/link.hpp"

namespace gridsurf {

/// Rectangle [vl;vr] x [hb;ht] on the torus grid: the product of the positive
/// arc from vl to vr with the positive arc from hb to ht. Sides never wrap a
/// full circle (vl != vr, hb != ht).
struct Rect {
  int vl = 0, vr = 0, hb = 0, ht = 0;
  auto operator<=>(const Rect&) const = default;
};

/// Rectangular diagram of a surface: pairwise compatible rectangles on a
/// cols x rows torus grid; every level 0..cols-1 / 0..rows-1 is occupied.
/// The rectangle order is meaningful: it carries the point labels of the
/// dividing code (rectangle i <-> point i+1).
struct SurfaceDiagram {
  int cols = 0;
  int rows = 0;
  std::vector<Rect> rects;
};

enum class DiagType : uint8_t { Back /* backslash */, Slash };

inline DiagType flip_type(DiagType t) {
  return t == DiagType::Back ? DiagType::Slash : DiagType::Back;
}

enum class CornerRole : uint8_t { BL = 0, BR = 1, TR = 2, TL = 3 };

inline DiagType corner_type(CornerRole c) {
  return (c == CornerRole::BL || c == CornerRole::TR) ? DiagType::Back : DiagType::Slash;
}

struct VertexRecord {
  GridPoint pos{};
  DiagType type = DiagType::Back;
  int multiplicity = 1;
  std::array<int, 2> owner{-1, -1};             // rect indices
  std::array<CornerRole, 2> role{CornerRole::BL, CornerRole::BL};
};

/// Result of validation: the vertex census plus the per-level side chains
/// (vertex indices in the positive direction along the level; a chain starts
/// at a multiplicity-1 vertex, a cycle at its least vertex).
struct SurfaceInfo {
  std::vector<VertexRecord> vertices;
  std::map<GridPoint, int> vertex_index;
  std::vector<std::vector<int>> vchains;  // per vertical level
  std::vector<bool> vcycle;
  std::vector<std::vector<int>> hchains;  // per horizontal level
  std::vector<bool> hcycle;
  int boundary_vertices = 0;  // multiplicity-1 count
};

/// Checks all compatibility invariants; error messages name the violated
/// clause (corner-in-interior, side overlap, type clash, multiplicity,
/// broken level chain).
SurfaceInfo validate_surface(const SurfaceDiagram& pi);

namespace detail {
/// Multiplicity-1 vertices as a link diagram on compacted levels.
LinkDiagram boundary_diagram(const SurfaceDiagram& pi, const SurfaceInfo& info);
/// Sorted levels of the given axis carrying boundary vertices.
std::vector<int> boundary_level_map(const SurfaceDiagram& pi, const SurfaceInfo& info,
                                    LevelAxis axis);
}  // namespace detail

struct SurfaceClass {
  int euler = 0;
  int euler_complex = 0;  // recomputed from the glued tile complex
  int boundary_components = 0;
  bool orientable = false;
  int genus = 0;       // orientable genus, or crosscap number otherwise
  int rect_count = 0;
  int vertex_count = 0;
  int level_count = 0;
};

SurfaceClass classify_surface(const SurfaceDiagram& pi);

struct BoundaryLink {
  LinkDiagram link;                  // boundary vertices on compacted levels
  std::vector<int> tb_plus_rel;      // per component of `link`
  std::vector<int> tb_minus_rel;
  // Framing: for each edge of `link`, the f-greater endpoint. Keyed by the
  // lesser endpoint of the edge in (axis, level) form.
  std::map<std::pair<int, int>, GridPoint> greater_v;  // key: vertical level
  std::map<std::pair<int, int>, GridPoint> greater_h;
};

/// Boundary of the diagram: multiplicity-1 vertices as a link diagram, with
/// relative Thurston-Bennequin numbers (-(#backslash)/2, -(#slash)/2 per
/// component) and the boundary framing (opposite of the circuit framing of
/// the associated mirror diagram).
BoundaryLink boundary_link(const SurfaceDiagram& pi);

struct Bigon {
  int rect_a = 0;
  int rect_b = 0;
  GridPoint shared_back{};   // the shared backslash vertex
  GridPoint shared_slash{};  // the shared slash vertex
  bool reducible_admissibly = false;
};

/// A bigon is a rectangle pair sharing one backslash and one slash vertex
/// (one per plus/minus adjacency pair). Reduction is admissible unless both
/// levels parallel to the shared level through the unshared vertices carry
/// boundary vertices.
std::vector<Bigon> detect_bigons(const SurfaceDiagram& pi);

// --- moves -------------------------------------------------------------

struct SurfaceMove {
  enum class Kind : uint8_t {
    WrinkleCreate,      // axis, level, h1 (backslash vertex), h2 (slash vertex)
    WrinkleReduce,      // rect_a, rect_b: the bigon pair
    HalfWrinkleCreate,  // axis, level, h1, h2: both vertices on the boundary,
                        //   one side of the level free of rectangle sides
    HalfWrinkleReduce,  // rect_a: the thin rectangle to retract
    Stabilize,          // stab_type 1|2, axis, level, h1 = existing vertex
                        //   transverse position, gap = fresh transverse slot
    Destabilize,        // rect_a, rect_b: the pair to merge
    Exchange,           // axis + three level-circle gaps g1,g2,g3 and two
                        //   transverse gaps k1,k2 cutting the empty rectangles
    Flype,              // flype_type 1|2 + levels t1,t2,t3 (theta), f1,f2,f3
  } kind;
  LevelAxis axis = LevelAxis::Vertical;
  int level = 0;
  int h1 = 0, h2 = 0;
  int rect_a = 0, rect_b = 0;
  int stab_type = 0;
  int gap = 0;
  int g1 = 0, g2 = 0, g3 = 0, k1 = 0, k2 = 0;
  int flype_type = 0;
  int t1 = 0, t2 = 0, t3 = 0, f1 = 0, f2 = 0, f3 = 0;
};

SurfaceDiagram apply_surface_move(const SurfaceDiagram& pi, const SurfaceMove& mv);

struct BigonReduction {
  std::vector<SurfaceMove> script;  // <= 2 exchange moves + 1 wrinkle reduction
  SurfaceDiagram result;
};

BigonReduction reduce_bigon(const SurfaceDiagram& pi, const Bigon& bigon);

struct AttachSpec {
  enum class Kind : uint8_t { Annulus, CollarPlus, CollarMinus } kind;
  int component = 0;  // component index of the link (annulus) or boundary
};

/// Annulus: builds the narrow annulus around a link component on fresh
/// interleaved levels. Collar: shifts the levels of a boundary component with
/// tb_plus_rel = 0 (or tb_minus_rel = 0) and attaches one narrow rectangle
/// per boundary edge.
SurfaceDiagram attach_annulus(const LinkDiagram& R, int component);
SurfaceDiagram attach_collar(const SurfaceDiagram& pi, int boundary_component, int side);

std::string canonical_form(const SurfaceDiagram& pi);
/// Canonical form ignoring the rectangle labelling (set semantics).
std::string canonical_form_unlabeled(const SurfaceDiagram& pi);

SurfaceDiagram apply_symmetry(const SurfaceDiagram& pi, Symmetry s);

}  // namespace gridsurf
