#include "doctest.h"
#include "gridsurf/mirror.hpp"
#include "gridsurf/pipeline.hpp"
#include "gridsurf/realize.hpp"

using namespace gridsurf;

namespace {

EnhancedMirrorDiagram sample_diagram() {
  // two backslash + two slash mirrors forming a rectangle circuit, plus an
  // extra level pair to give moves room
  EnhancedMirrorDiagram em;
  em.m.cols = 3;
  em.m.rows = 3;
  em.m.mirrors[{0, 0}] = DiagType::Back;
  em.m.mirrors[{1, 1}] = DiagType::Back;
  em.m.mirrors[{0, 1}] = DiagType::Slash;
  em.m.mirrors[{1, 0}] = DiagType::Slash;
  em.m.mirrors[{2, 2}] = DiagType::Slash;
  return em;
}

MirrorMove ext_move(LevelAxis axis, int gap, int host, DiagType t) {
  MirrorMove mv;
  mv.kind = MirrorMove::Kind::Extension;
  mv.axis = axis;
  mv.gap = gap;
  mv.host = host;
  mv.mtype = t;
  return mv;
}

}  // namespace

TEST_CASE("extension then elimination is the identity") {
  EnhancedMirrorDiagram em = sample_diagram();
  MirrorMove ext = ext_move(LevelAxis::Horizontal, 1, 2, DiagType::Slash);
  MoveResult r1 = apply_mirror_move(em, ext);
  CHECK(r1.declared_type == 1);
  MirrorMove elim;
  elim.kind = MirrorMove::Kind::Elimination;
  elim.axis = LevelAxis::Horizontal;
  elim.level = 1;
  elim.mtype = DiagType::Slash;
  MoveResult r2 = apply_mirror_move(r1.diagram, elim);
  CHECK(canonical_form(r2.diagram.m) == canonical_form(em.m));
}

TEST_CASE("extension preserves the essential circuit count") {
  EnhancedMirrorDiagram em = sample_diagram();
  auto before = trace_circuits(em.m);
  int essential_before = 0;
  for (const auto& c : before)
    if (!em.holes.count(c.key)) essential_before++;
  MoveResult res = apply_mirror_move(em, ext_move(LevelAxis::Vertical, 2, 0, DiagType::Slash));
  auto after = trace_circuits(res.diagram.m);
  int essential_after = 0;
  for (const auto& c : after)
    if (!res.diagram.holes.count(c.key)) essential_after++;
  CHECK(essential_before == essential_after);
}

TEST_CASE("bridge addition drops chi by one and decomposes neatly") {
  EnhancedMirrorDiagram em = sample_diagram();
  MirrorMove mv;
  mv.kind = MirrorMove::Kind::BridgeAdd;
  mv.axis = LevelAxis::Horizontal;
  mv.gap = 1;
  mv.host = 0;
  mv.x1 = 0;  // backslash host at (0,0)
  mv.x2 = 1;  // slash host at (1,0)
  mv.fresh = 1;
  MoveResult res = apply_mirror_move(em, mv);
  CHECK(mirror_euler(res.diagram.m) == mirror_euler(em.m) - 1);
  for (int t : {1, 2}) {
    ScriptResult sr = decompose_move(em, mv, t);
    CHECK(sr.script.size() == 2);
    for (const auto& step : sr.script) CHECK(mirror_move_type(step) == t);
    NeatReport rep = check_neat(em, sr.script, {});
    CHECK(rep.replay_ok);
    CHECK(rep.neat);
  }
}

TEST_CASE("twist move swaps the pair and decomposes into both types") {
  EnhancedMirrorDiagram em;
  em.m.cols = 2;
  em.m.rows = 2;
  em.m.mirrors[{0, 0}] = DiagType::Back;
  em.m.mirrors[{1, 0}] = DiagType::Slash;
  em.m.mirrors[{0, 1}] = DiagType::Slash;
  em.m.mirrors[{1, 1}] = DiagType::Back;
  MirrorMove mv;
  mv.kind = MirrorMove::Kind::Twist;
  mv.axis = LevelAxis::Horizontal;
  mv.level = 0;
  MoveResult res = apply_mirror_move(em, mv);
  CHECK(res.diagram.m.mirrors.at({0, 0}) == DiagType::Slash);
  CHECK(res.diagram.m.mirrors.at({1, 0}) == DiagType::Back);
  for (int t : {1, 2}) {
    ScriptResult sr = decompose_move(em, mv, t);
    for (const auto& step : sr.script) CHECK(mirror_move_type(step) == t);
    CHECK(check_neat(em, sr.script, {}).replay_ok);
  }
}

TEST_CASE("jump move decomposes into elementary moves of either type") {
  EnhancedMirrorDiagram em = sample_diagram();
  MirrorMove mv;
  mv.kind = MirrorMove::Kind::Jump;
  mv.axis = LevelAxis::Horizontal;
  mv.level = 2;  // the lone mirror at meridian 2
  mv.gap = 0;    // hop downward past the rows in between
  mv.dir = -1;
  MoveResult res = apply_mirror_move(em, mv);
  for (int t : {1, 2}) {
    ScriptResult sr = decompose_move(em, mv, t);
    for (const auto& step : sr.script) CHECK(mirror_move_type(step) == t);
    CHECK(canonical_form(sr.result.m) == canonical_form(res.diagram.m));
    CHECK(check_neat(em, sr.script, {}).replay_ok);
  }
}

TEST_CASE("split move bookkeeping and decomposition") {
  EnhancedMirrorDiagram em = sample_diagram();
  MirrorMove mv;
  mv.kind = MirrorMove::Kind::Split;
  mv.stype = 1;
  mv.axis = LevelAxis::Horizontal;
  mv.level = 0;
  mv.spos = 1;  // the slash mirror at (1,0)
  mv.cgap = 0;
  MoveResult res = apply_mirror_move(em, mv);
  CHECK(res.diagram.m.rows == em.m.rows + 1);
  CHECK(res.diagram.m.mirrors.size() == em.m.mirrors.size() + 1);
  CHECK(mirror_euler(res.diagram.m) == mirror_euler(em.m));
  // the mirror at (0,0) lies in [cgap;spos) and lands on the upper successor
  CHECK(res.diagram.m.mirrors.count({0, 1}) == 1);
  CHECK(res.mirror_succ.at({1, 0}).size() == 2);
  ScriptResult sr = decompose_move(em, mv, 1);
  for (const auto& step : sr.script) CHECK(mirror_move_type(step) == 1);
  CHECK(canonical_form(sr.result.m) == canonical_form(res.diagram.m));
  // merge back
  MirrorMove mg;
  mg.kind = MirrorMove::Kind::Merge;
  mg.stype = 1;
  mg.axis = LevelAxis::Horizontal;
  mg.level = 0;
  mg.spos = 1;
  MoveResult back = apply_mirror_move(res.diagram, mg);
  CHECK(canonical_form(back.diagram.m) == canonical_form(em.m));
}

TEST_CASE("wrinkle creation and reduction round-trip") {
  EnhancedMirrorDiagram em = sample_diagram();
  MirrorMove mv;
  mv.kind = MirrorMove::Kind::WrinkleCreate;
  mv.axis = LevelAxis::Horizontal;
  mv.level = 0;
  mv.back_pos = 0;
  mv.slash_pos = 1;
  MoveResult res = apply_mirror_move(em, mv);
  CHECK(res.diagram.m.rows == em.m.rows + 2);
  CHECK(res.diagram.m.mirrors.size() == em.m.mirrors.size() + 4);
  MirrorMove red;
  red.kind = MirrorMove::Kind::WrinkleReduce;
  red.axis = LevelAxis::Horizontal;
  red.level = 0;
  MoveResult back = apply_mirror_move(res.diagram, red);
  CHECK(canonical_form(back.diagram.m) == canonical_form(em.m));
  for (int t : {1, 2}) {
    ScriptResult sr = decompose_move(em, mv, t);
    for (const auto& step : sr.script) CHECK(mirror_move_type(step) == t);
    CHECK(canonical_form(sr.result.m) == canonical_form(res.diagram.m));
  }
}

TEST_CASE("slide moves a slash mirror along the main diagonal") {
  EnhancedMirrorDiagram em;
  em.m.cols = 2;
  em.m.rows = 2;
  em.m.mirrors[{0, 0}] = DiagType::Slash;
  em.m.mirrors[{0, 1}] = DiagType::Slash;
  em.m.mirrors[{1, 0}] = DiagType::Slash;
  MirrorMove mv;
  mv.kind = MirrorMove::Kind::Slide;
  mv.x1 = 0;
  mv.x2 = 1;
  mv.y1 = 0;
  mv.y2 = 1;
  mv.corner = CornerRole::BL;
  MoveResult res = apply_mirror_move(em, mv);
  CHECK(res.diagram.m.mirrors.count({1, 1}) == 1);
  CHECK(res.diagram.m.mirrors.count({0, 0}) == 0);
  CHECK(mirror_move_type(mv) == 1);
  // inverse slide restores
  MirrorMove inv = mv;
  inv.corner = CornerRole::TR;
  MoveResult back = apply_mirror_move(res.diagram, inv);
  CHECK(canonical_form(back.diagram.m) == canonical_form(em.m));
}

TEST_CASE("bypass pair round trip with hole bookkeeping") {
  EnhancedMirrorDiagram em = sample_diagram();
  // the rectangle circuit of the 4-mirror pattern is patchable; declare it a
  // hole so the removal is legal
  auto circuits = trace_circuits(em.m);
  for (const auto& c : circuits)
    for (const auto& ev : c.events)
      if (ev.at == GridPoint{1, 0} && ev.a == Port::N && ev.b == Port::W)
        em.holes.insert(c.key);
  REQUIRE(em.holes.size() == 1);
  MirrorMove mv;
  mv.kind = MirrorMove::Kind::BypassRemove;
  mv.x1 = 0;
  mv.x2 = 1;
  mv.y1 = 0;
  mv.y2 = 1;
  mv.corner = CornerRole::TR;
  MoveResult res = apply_mirror_move(em, mv);
  CHECK(res.diagram.m.mirrors.count({1, 1}) == 0);
  // add it back; the new rectangle circuit becomes the hole again
  MirrorMove add = mv;
  add.kind = MirrorMove::Kind::BypassAdd;
  MoveResult back = apply_mirror_move(res.diagram, add);
  CHECK(canonical_form(back.diagram.m) == canonical_form(em.m));
  CHECK(back.diagram.holes.size() == 1);
}

TEST_CASE("type-two slide decomposes into split, jump, merge") {
  EnhancedMirrorDiagram em;
  em.m.cols = 2;
  em.m.rows = 3;
  em.m.mirrors[{0, 0}] = DiagType::Back;   // BL
  em.m.mirrors[{0, 2}] = DiagType::Back;   // TL (moving)
  em.m.mirrors[{1, 2}] = DiagType::Back;   // TR
  em.m.mirrors[{1, 1}] = DiagType::Slash;  // spectator outside the rect
  MirrorMove mv;
  mv.kind = MirrorMove::Kind::Slide;
  mv.x1 = 0;
  mv.x2 = 1;
  mv.y1 = 0;
  mv.y2 = 2;
  mv.corner = CornerRole::TL;
  CHECK(mirror_move_type(mv) == 2);
  // the rectangle must be empty: the slash at (1,1) blocks it; move it out
  em.m.mirrors.erase({1, 1});
  em.m.mirrors[{1, 1}] = DiagType::Back;
  em.m.mirrors.erase({1, 1});
  MoveResult res = apply_mirror_move(em, mv);
  CHECK(res.diagram.m.mirrors.count({1, 0}) == 1);
}

TEST_CASE("generalized split of an elementary route is one split") {
  EnhancedMirrorDiagram em = sample_diagram();
  SplittingRoute r;
  r.rtype = 2;
  r.mirrors = {{0, 0}};  // the backslash mirror
  r.double_headed = false;
  r.p_axis = LevelAxis::Horizontal;
  r.p_level = 0;
  r.p_gap = 2;
  ScriptResult sr = generalized_split(em, r);
  CHECK(sr.script.size() == 1);
  CHECK(sr.script[0].kind == MirrorMove::Kind::Split);
  CHECK(sr.script[0].stype == 2);
}

TEST_CASE("generalized split successor counts") {
  // route of length 2: (mu1 backslash, mu2 slash, p)
  EnhancedMirrorDiagram em = sample_diagram();
  SplittingRoute r;
  r.rtype = 2;
  r.mirrors = {{0, 0}, {1, 0}};
  r.double_headed = false;
  // shared level: row 0; terminal level: the other level of (1,0) = meridian 1
  r.p_axis = LevelAxis::Vertical;
  r.p_level = 1;
  r.p_gap = 2;
  ScriptResult sr = generalized_split(em, r);
  CHECK(sr.script.size() == 2);
  // each route mirror gains one extra successor
  EnhancedMirrorDiagram cur = em;
  std::map<GridPoint, std::vector<GridPoint>> total;
  for (const auto& [p, t] : em.m.mirrors) total[p] = {p};
  for (const auto& mv : sr.script) {
    MoveResult res = apply_mirror_move(cur, mv);
    std::map<GridPoint, std::vector<GridPoint>> next;
    for (auto& [orig, list] : total) {
      for (auto& q : list) {
        auto it = res.mirror_succ.find(q);
        if (it == res.mirror_succ.end()) continue;
        for (auto& s : it->second) next[orig].push_back(s);
      }
    }
    total = std::move(next);
    cur = res.diagram;
  }
  CHECK(total.at({0, 0}).size() == 2);
  CHECK(total.at({1, 0}).size() == 2);
  CHECK(total.at({1, 1}).size() == 1);
}

TEST_CASE("patching a one-rectangle hole is the empty script") {
  SurfaceDiagram pi;
  pi.cols = pi.rows = 2;
  pi.rects = {{0, 1, 0, 1}};
  EnhancedMirrorDiagram em = from_surface_diagram(pi);
  REQUIRE(em.holes.size() == 1);
  PatchSpec spec;
  spec.cols = 2;
  spec.rows = 2;
  spec.vmap = {0, 1};
  spec.hmap = {0, 1};
  spec.rects = {{0, 1, 0, 1}};
  ScriptResult sr = patch_circuit(em, *em.holes.begin(), spec);
  CHECK(sr.script.empty());
}

TEST_CASE("patching rejects a doubly-anchored rectangle") {
  // both backslash corners already mirrors: the overtwisted obstruction
  EnhancedMirrorDiagram em;
  em.m.cols = 2;
  em.m.rows = 2;
  em.m.mirrors[{0, 0}] = DiagType::Back;
  em.m.mirrors[{1, 1}] = DiagType::Back;
  auto circuits = trace_circuits(em.m);
  // pick any circuit with tb_plus == -1 as the hole
  std::string hole;
  for (const auto& c : circuits)
    if (c.tb_plus() == -1) hole = c.key;
  REQUIRE(!hole.empty());
  em.holes.insert(hole);
  PatchSpec spec;
  spec.cols = 2;
  spec.rows = 2;
  spec.vmap = {0, 1};
  spec.hmap = {0, 1};
  spec.rects = {{0, 1, 0, 1}};
  CHECK_THROWS_WITH_AS(patch_circuit(em, hole, spec), doctest::Contains("overtwisted"), Error);
}

TEST_CASE("circuit stabilization acts on the framed link") {
  EnhancedMirrorDiagram em;
  em.m.cols = 2;
  em.m.rows = 2;
  em.m.mirrors[{0, 0}] = DiagType::Back;
  em.m.mirrors[{1, 1}] = DiagType::Back;
  em.m.mirrors[{0, 1}] = DiagType::Slash;
  em.m.mirrors[{1, 0}] = DiagType::Slash;
  auto circuits = trace_circuits(em.m);
  const Circuit* rect = nullptr;
  for (const auto& c : circuits)
    if (c.events.size() == 4) rect = &c;
  REQUIRE(rect);
  int tbp = rect->tb_plus(), tbm = rect->tb_minus();
  CircuitLegMove mv;
  mv.kind = CircuitLegMove::Kind::StabilizeI;
  mv.mirror = {0, 0};
  ScriptResult sr = circuit_leg_move(em, rect->key, mv);
  auto after = trace_circuits(sr.result.m);
  // locate the stabilized circuit: it hits six mirrors now
  bool found = false;
  for (const auto& c : after)
    if (c.events.size() == 6) {
      found = true;
      CHECK(c.tb_plus() == tbp);
      CHECK(c.tb_minus() == tbm - 1);
    }
  CHECK(found);
}

TEST_CASE("circuit destabilization requires negative tb_minus") {
  EnhancedMirrorDiagram em;
  em.m.cols = 2;
  em.m.rows = 2;
  em.m.mirrors[{0, 0}] = DiagType::Back;
  em.m.mirrors[{1, 1}] = DiagType::Back;
  em.m.mirrors[{0, 1}] = DiagType::Back;
  em.m.mirrors[{1, 0}] = DiagType::Back;
  auto circuits = trace_circuits(em.m);
  const Circuit* rect = nullptr;
  for (const auto& c : circuits)
    if (c.events.size() == 4) rect = &c;
  REQUIRE(rect);
  CHECK(rect->tb_minus() == 0);
  CircuitLegMove mv;
  mv.kind = CircuitLegMove::Kind::DestabilizeI;
  mv.mirror = {0, 0};
  CHECK_THROWS_AS(circuit_leg_move(em, rect->key, mv), Error);
}

TEST_CASE("moves conjugate correctly under the symmetries") {
  // applying a reflected move to the reflected diagram matches reflecting
  // the result; reflections swap the move type
  EnhancedMirrorDiagram em = sample_diagram();
  MirrorMove ext;
  ext.kind = MirrorMove::Kind::Extension;
  ext.axis = LevelAxis::Horizontal;
  ext.gap = 1;
  ext.host = 2;
  ext.mtype = DiagType::Slash;  // type 1
  MoveResult direct = apply_mirror_move(em, ext);

  EnhancedMirrorDiagram rem;
  rem.m = apply_symmetry(em.m, Symmetry::ReflectH);
  MirrorMove rext;
  rext.kind = MirrorMove::Kind::Extension;
  rext.axis = LevelAxis::Horizontal;
  rext.gap = em.m.rows - ext.gap;
  rext.host = ext.host;
  rext.mtype = DiagType::Back;  // the conjugate is a type 2 extension
  CHECK(mirror_move_type(rext) == 2);
  MoveResult refl = apply_mirror_move(rem, rext);
  CHECK(canonical_form(refl.diagram.m) ==
        canonical_form(apply_symmetry(direct.diagram.m, Symmetry::ReflectH)));
}

TEST_CASE("coherent mirror removal deletes the named mirror") {
  // two backslash mirrors joined by a one-rectangle negligible circuit
  SurfaceDiagram pi;
  pi.cols = pi.rows = 2;
  pi.rects = {{0, 1, 0, 1}};
  EnhancedMirrorDiagram em = from_surface_diagram(pi);
  REQUIRE(em.holes.size() == 1);
  std::string hole = *em.holes.begin();
  FlexReport rep = flexibility_and_negligibility(em, {});
  REQUIRE(rep.plus_negligible.count(hole) == 1);
  // the two backslash mirrors are immediately coherent
  bool coherent = false;
  for (const auto& cls : rep.back_coherence_classes)
    if (cls.size() == 2) coherent = true;
  CHECK(coherent);
  PatchSpec spec;
  spec.cols = 2;
  spec.rows = 2;
  spec.vmap = {0, 1};
  spec.hmap = {0, 1};
  spec.rects = {{0, 1, 0, 1}};
  GridPoint mu2{1, 1};
  ScriptResult sr = remove_coherent_mirror(em, hole, mu2, spec);
  CHECK(sr.result.m.mirrors.count(mu2) == 0);
  CHECK(sr.result.m.mirrors.size() == em.m.mirrors.size() - 1);
  // the whole script is elementary type 1
  for (const auto& mv : sr.script) CHECK(mirror_move_type(mv) == 1);
  NeatReport nr = check_neat(em, sr.script, {});
  CHECK(nr.replay_ok);
}

TEST_CASE("circuit exchange through a jump move") {
  // two rectangle circuits on disjoint levels; exchanging the adjacent rows
  EnhancedMirrorDiagram em;
  em.m.cols = 4;
  em.m.rows = 4;
  em.m.mirrors[{0, 0}] = DiagType::Back;
  em.m.mirrors[{1, 1}] = DiagType::Back;
  em.m.mirrors[{0, 1}] = DiagType::Slash;
  em.m.mirrors[{1, 0}] = DiagType::Slash;
  em.m.mirrors[{2, 2}] = DiagType::Back;
  em.m.mirrors[{3, 3}] = DiagType::Back;
  em.m.mirrors[{2, 3}] = DiagType::Slash;
  em.m.mirrors[{3, 2}] = DiagType::Slash;
  auto circuits = trace_circuits(em.m);
  std::string simple_key;
  for (const auto& c : circuits)
    if (c.simple && c.events.size() == 4) simple_key = c.key;
  REQUIRE(!simple_key.empty());
  CircuitLegMove mv;
  mv.kind = CircuitLegMove::Kind::Exchange;
  mv.axis = LevelAxis::Horizontal;
  mv.level = 1;
  ScriptResult sr = circuit_leg_move(em, simple_key, mv);
  REQUIRE(sr.script.size() >= 1);
  for (const auto& step : sr.script) CHECK(step.kind == MirrorMove::Kind::Jump);
  // rows 1 and 2 swapped
  CHECK(sr.result.m.mirrors.at({1, 2}) == DiagType::Back);
  CHECK(sr.result.m.mirrors.at({2, 1}) == DiagType::Back);
}
