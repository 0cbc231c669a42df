#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "gridsurf/cyclic.hpp"
#include "gridsurf/link.hpp"
#include "gridsurf/surface.hpp"

namespace gridsurf {

/// Mirror diagram: occupied levels (all of 0..cols-1 and 0..rows-1, possibly
/// without mirrors) and typed mirrors at level intersections.
struct MirrorDiagram {
  int cols = 0;
  int rows = 0;
  std::map<GridPoint, DiagType> mirrors;
};

void validate_mirror(const MirrorDiagram& m);

enum class Port : uint8_t { N = 0, E = 1, S = 2, W = 3 };

const char* port_name(Port p);
Port port_from_name(const std::string& s);

/// Reflection pairing: the unordered port pair a transit uses at a mirror.
/// Slash pairs {S,E} and {N,W}; backslash pairs {S,W} and {N,E}.
Port transit_partner(DiagType t, Port in);

struct CircuitEvent {
  GridPoint at{};
  Port a = Port::N, b = Port::N;  // unordered transit ports, a < b
  DiagType type = DiagType::Back;
};

struct Segment {
  LevelAxis axis = LevelAxis::Horizontal;
  int level = 0;
  int from = 0, to = 0;  // transverse coordinates; the arc (from;to), or the
                         // whole level when from == to (single mirror) —
                         // bare levels use from = to = -1
};

struct Circuit {
  bool bare = false;
  LevelAxis bare_axis = LevelAxis::Horizontal;
  int bare_level = 0;
  std::vector<CircuitEvent> events;
  std::vector<Segment> segments;
  int hits_back = 0;
  int hits_slash = 0;
  int tb_plus() const { return -hits_back / 2; }
  int tb_minus() const { return -hits_slash / 2; }
  bool simple = false;
  std::string key;  // canonical identifier within its diagram
};

/// Complete partition of mirror transits into boundary circuits; bare levels
/// are one circuit each.
std::vector<Circuit> trace_circuits(const MirrorDiagram& m);

struct EnhancedMirrorDiagram {
  MirrorDiagram m;
  std::set<std::string> holes;  // circuit keys declared inessential
};

void validate_enhanced(const EnhancedMirrorDiagram& em);

/// Framed rectangular diagram of a link associated with a simple circuit
/// collection: the mirrors hit, types forgotten; v2 >_f v1 iff the positive
/// arc [v1;v2] is covered by the circuits.
struct FramedLink {
  LinkDiagram link;
  // For every edge of `link`, the f-greater endpoint (in link coordinates).
  std::map<std::pair<int, int>, GridPoint> greater_v;  // keyed by vertical level
  std::map<std::pair<int, int>, GridPoint> greater_h;  // keyed by horizontal level
};

FramedLink framed_link_of_circuits(const MirrorDiagram& m,
                                   const std::vector<const Circuit*>& collection);

/// Associated enhanced mirror diagram of a surface diagram: mirrors are the
/// vertices with their diagonal types, holes are the rectangle circuits.
EnhancedMirrorDiagram from_surface_diagram(const SurfaceDiagram& pi);

/// Inverse of from_surface_diagram for diagrams whose holes are rectangle
/// circuits and whose essential boundary is simple.
std::optional<SurfaceDiagram> to_surface_diagram(const EnhancedMirrorDiagram& em);

MirrorDiagram apply_symmetry(const MirrorDiagram& m, Symmetry s);

std::string canonical_form(const MirrorDiagram& m);

// --- moves -------------------------------------------------------------

struct MirrorMove {
  enum class Kind : uint8_t {
    Extension,
    Elimination,
    BypassAdd,
    BypassRemove,
    Slide,
    BridgeAdd,
    BridgeRemove,
    Twist,
    Jump,
    WrinkleCreate,
    WrinkleReduce,
    DoubleSplit,
    DoubleMerge,
    Split,
    Merge,
  } kind;

  // Extension/Elimination: `axis` of the (new/removed) level, `gap` its
  // insertion position (extension), `level` its index (elimination), `host`
  // the transverse level of the single mirror, `mtype` the mirror type
  // (slash = type I, backslash = type II).
  // BypassAdd/Remove: rectangle (x1,x2)x(y1,y2) in positive arcs; `corner`
  // names the added/removed mirror. Backslash corners (BL/TR) = type I,
  // slash corners (BR/TL) = type II.
  // Slide: rectangle + `corner` = vacated corner (BL/TR slash family = I,
  // TL/BR backslash family = II).
  // BridgeAdd/Remove: rectangle; `fresh` = side whose level is created or
  // removed (0=bottom,1=top,2=left,3=right); `gap` = insertion position.
  // Twist: `axis`, `level`.
  // Jump: `axis`, `level`, `gap` target insertion position, `dir` corridor
  // direction (+1 positive arc).
  // WrinkleCreate/DoubleSplit: `axis`, `level`, `back_pos`, `slash_pos`.
  // WrinkleReduce/DoubleMerge: `axis`, `level` = lowest of the group.
  // Split: `stype`, `axis`, `level`, `spos` (splitting mirror), `cgap`
  // (snip gap on the same level circle... transverse coordinate gap).
  // Merge: `stype`, `axis`, `level` = lower of the two adjacent levels,
  // `spos` = splitting mirror position.
  LevelAxis axis = LevelAxis::Horizontal;
  int level = 0;
  int gap = 0;
  int host = 0;
  DiagType mtype = DiagType::Slash;
  int x1 = 0, x2 = 0, y1 = 0, y2 = 0;
  CornerRole corner = CornerRole::TR;
  int fresh = 1;
  int dir = 1;
  int back_pos = 0, slash_pos = 0;
  int stype = 1;
  int spos = 0, cgap = 0;
  // Enhanced bypass addition: key (in the new diagram) of the successor
  // circuit that stays essential when the split is ambiguous.
  std::string essential_pick;
};

struct MoveResult {
  EnhancedMirrorDiagram diagram;
  std::vector<int> vmap;  // old vertical level -> new index, -1 if deleted
  std::vector<int> hmap;
  std::map<GridPoint, std::vector<GridPoint>> mirror_succ;
  std::map<std::string, std::string> circuit_map;  // old key -> new key
  int declared_type = 0;  // 1, 2, or 0 = neutral
};

MoveResult apply_mirror_move(const EnhancedMirrorDiagram& em, const MirrorMove& mv);

/// 1 or 2 for typed elementary/split moves, 0 for neutral moves.
int mirror_move_type(const MirrorMove& mv);

// --- splitting routes and generalized splits ---------------------------

/// Splitting route: mirrors mu_1..mu_k plus the terminal datum p given as a
/// (level axis, level, gap) triple; single-headed routes end on a level gap,
/// double-headed routes carry p for disambiguation.
struct SplittingRoute {
  std::vector<GridPoint> mirrors;
  bool double_headed = false;
  int rtype = 2;  // 1 or 2
  LevelAxis p_axis = LevelAxis::Horizontal;
  int p_level = 0;
  int p_gap = 0;
};

/// Checks typing, colinearity/alternation, the terminal datum, and the
/// parity condition on cancellable subsegments. Throws with the failing
/// clause and witness indices.
void validate_splitting_route(const MirrorDiagram& m, const SplittingRoute& route);

bool route_is_special(const SplittingRoute& route);

struct ScriptResult {
  std::vector<MirrorMove> script;
  EnhancedMirrorDiagram result;
};

/// Canonical decomposition of the generalized split move for the route:
/// a recursive sequence of ordinary and double splits (plus one extension
/// for special routes). When `protect` is nonempty the route must not
/// separate those circuits.
ScriptResult generalized_split(const EnhancedMirrorDiagram& em, const SplittingRoute& route,
                               const std::set<std::string>& protect = {});

// --- flexibility / negligibility / coherence ----------------------------

struct FlexReport {
  bool plus_flexible = false;
  bool minus_flexible = false;
  std::set<std::string> plus_negligible;   // circuit keys
  std::set<std::string> minus_negligible;
  // coherence classes of backslash mirrors (via +-negligible circuits) and of
  // slash mirrors (via --negligible circuits)
  std::vector<std::vector<GridPoint>> back_coherence_classes;
  std::vector<std::vector<GridPoint>> slash_coherence_classes;
  // witness single-headed routes per reachable mirror (type II routes for +)
  std::map<GridPoint, SplittingRoute> plus_witness;
  std::map<GridPoint, SplittingRoute> minus_witness;
};

FlexReport flexibility_and_negligibility(const EnhancedMirrorDiagram& em,
                                         const std::set<std::string>& protect);

// --- patching ------------------------------------------------------------

/// Rectangle collection assembling a patching disc, described on a combined
/// grid: vmap[i]/hmap[i] give the combined index of the diagram's level i
/// (strictly increasing); combined levels outside the maps are fresh.
struct PatchSpec {
  int cols = 0, rows = 0;
  std::vector<int> vmap, hmap;
  std::vector<Rect> rects;  // combined coordinates
};

/// Realizes the union with the rectangle collection as a script of type-I
/// extensions and elementary bypass additions (peeling order); rejects with
/// the stuck rectangle when no peeling order exists. `avoid` optionally
/// names a mirror (diagram coordinates) that must not participate.
ScriptResult patch_circuit(const EnhancedMirrorDiagram& em, const std::string& circuit_key,
                           const PatchSpec& spec,
                           std::optional<GridPoint> avoid = std::nullopt);

/// Removes the second backslash mirror of a +-negligible circuit hitting two
/// distinct backslash mirrors, via the patch-forward / unpatch-backward
/// construction.
ScriptResult remove_coherent_mirror(const EnhancedMirrorDiagram& em,
                                    const std::string& circuit_key, GridPoint mu2,
                                    const PatchSpec& spec);

// --- circuit-level link moves ---------------------------------------------

struct CircuitLegMove {
  enum class Kind : uint8_t { Exchange, StabilizeI, DestabilizeI } kind;
  // Exchange: axis + level (jump the level past its positive neighbour).
  // StabilizeI: mirror = the circuit mirror to stabilize at; the new corner
  // appears on fresh levels on the positive side.
  // DestabilizeI: mirror = the corner mirror of the small L pattern.
  LevelAxis axis = LevelAxis::Horizontal;
  int level = 0;
  GridPoint mirror{};
};

/// Realizes a link move on R(c) by mirror moves (exchange via jumps,
/// stabilization via extension + split, destabilization via twists and the
/// reverse construction).
ScriptResult circuit_leg_move(const EnhancedMirrorDiagram& em, const std::string& circuit_key,
                              const CircuitLegMove& mv);

// --- decompositions and the neatness checker ------------------------------

/// Decomposes a move into elementary moves of the requested type (1 or 2),
/// possibly with jump moves where allowed. Covered kinds: bridge, twist,
/// jump, wrinkle, double split/merge (either type), split/merge (same type),
/// type-II slide and bypass moves (into split/merge + neutral), and type-II
/// extension with tb_plus(c) < 0 (into split moves and neutral moves).
ScriptResult decompose_move(const EnhancedMirrorDiagram& em, const MirrorMove& mv,
                            int target_type);

struct NeatReport {
  bool replay_ok = false;
  bool neat = false;
  bool almost_neat = false;
  std::string violation;  // first violated clause, empty if neat
  // per-step, per-tracked-circuit tb ledger: (tb_plus, tb_minus), absent = gone
  std::vector<std::map<std::string, std::pair<int, int>>> tb_ledger;
};

/// Replays the script and checks the protected-circuit preservation clause
/// and the tb-sign persistence windows. Jump moves are exempted from the
/// preservation clause for the almost-neat verdict.
NeatReport check_neat(const EnhancedMirrorDiagram& start, const std::vector<MirrorMove>& script,
                      const std::set<std::string>& protected_circuits);

/// chi of the associated surface: #levels - #mirrors.
inline int mirror_euler(const MirrorDiagram& m) {
  return m.cols + m.rows - static_cast<int>(m.mirrors.size());
}

}  // namespace gridsurf
