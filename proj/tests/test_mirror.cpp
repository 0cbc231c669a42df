#include "doctest.h"
#include "gridsurf/mirror.hpp"
#include "gridsurf/pipeline.hpp"
#include "gridsurf/realize.hpp"

using namespace gridsurf;

namespace {

EnhancedMirrorDiagram one_slash() {
  // one meridian, one longitude, one slash mirror
  EnhancedMirrorDiagram em;
  em.m.cols = 1;
  em.m.rows = 1;
  em.m.mirrors[{0, 0}] = DiagType::Slash;
  return em;
}

SurfaceDiagram pi_star() {
  static SurfaceDiagram pi = [] {
    RealizeResult res = enumerate_realizations(builtin_code_a());
    REQUIRE(res.realizations.size() == 1);
    return res.realizations[0];
  }();
  return pi;
}

}  // namespace

TEST_CASE("single slash mirror circuit") {
  auto circuits = trace_circuits(one_slash().m);
  REQUIRE(circuits.size() == 1);
  CHECK(circuits[0].events.size() == 2);
  CHECK(circuits[0].tb_plus() == 0);
  CHECK(circuits[0].tb_minus() == -1);
  CHECK_FALSE(circuits[0].simple);  // hits the mirror twice
}

TEST_CASE("bare level is its own circuit") {
  EnhancedMirrorDiagram em;
  em.m.cols = 1;
  em.m.rows = 2;
  em.m.mirrors[{0, 0}] = DiagType::Slash;
  auto circuits = trace_circuits(em.m);
  bool has_bare = false;
  for (const auto& c : circuits)
    if (c.bare) {
      has_bare = true;
      CHECK(c.tb_plus() == 0);
      CHECK(c.tb_minus() == 0);
    }
  CHECK(has_bare);
}

TEST_CASE("tb sum rule over circuits") {
  for (const auto& em : {one_slash(), from_surface_diagram(pi_star())}) {
    auto circuits = trace_circuits(em.m);
    int total = 0;
    for (const auto& c : circuits) total += c.tb_plus() + c.tb_minus();
    CHECK(total == -static_cast<int>(em.m.mirrors.size()));
  }
}

TEST_CASE("four-mirror rectangle circuit gives the square unknot") {
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
  REQUIRE(rect != nullptr);
  CHECK(rect->simple);
  FramedLink fl = framed_link_of_circuits(em.m, {rect});
  CHECK(fl.link.vertices.size() == 4);
  CHECK(fl.link.cols == 2);
}

TEST_CASE("non-simple collection is rejected") {
  EnhancedMirrorDiagram em = one_slash();
  auto circuits = trace_circuits(em.m);
  std::vector<const Circuit*> coll{&circuits[0]};
  CHECK_THROWS_WITH_AS(framed_link_of_circuits(em.m, coll), doctest::Contains("not simple"),
                       Error);
}

TEST_CASE("surface association for the single rectangle") {
  SurfaceDiagram pi;
  pi.cols = pi.rows = 2;
  pi.rects = {{0, 1, 0, 1}};
  EnhancedMirrorDiagram em = from_surface_diagram(pi);
  CHECK(em.m.mirrors.size() == 4);
  CHECK(em.holes.size() == 1);
  auto circuits = trace_circuits(em.m);
  CHECK(circuits.size() == 2);  // the rectangle circuit plus the essential one
  int essential = 0;
  for (const auto& c : circuits)
    if (!em.holes.count(c.key)) essential++;
  CHECK(essential == 1);
  auto back = to_surface_diagram(em);
  REQUIRE(back.has_value());
  CHECK(canonical_form(*back) == canonical_form(pi));
}

TEST_CASE("surface association for the genus-two realization") {
  SurfaceDiagram pi = pi_star();
  EnhancedMirrorDiagram em = from_surface_diagram(pi);
  CHECK(em.holes.size() == 18);
  auto circuits = trace_circuits(em.m);
  std::vector<const Circuit*> essential;
  for (const auto& c : circuits)
    if (!em.holes.count(c.key)) essential.push_back(&c);
  REQUIRE(essential.size() == 1);
  CHECK(essential[0]->simple);
  FramedLink fl = framed_link_of_circuits(em.m, essential);
  BoundaryLink bl = boundary_link(pi);
  CHECK(canonical_form(fl.link) == canonical_form(bl.link));
  // the circuit framing is opposite to the boundary framing
  for (const auto& [key, greater] : fl.greater_v) {
    auto it = bl.greater_v.find(key);
    REQUIRE(it != bl.greater_v.end());
    CHECK_FALSE(it->second == greater);
  }
  // round trip through the mirror diagram
  auto back = to_surface_diagram(em);
  REQUIRE(back.has_value());
  CHECK(canonical_form(*back) == canonical_form(pi));
}

TEST_CASE("chi bookkeeping for mirror diagrams") {
  EnhancedMirrorDiagram em = from_surface_diagram(pi_star());
  CHECK(mirror_euler(em.m) == 23 - 44);
}

TEST_CASE("every hole of a surface association is doubly negligible") {
  EnhancedMirrorDiagram em = from_surface_diagram(pi_star());
  FlexReport rep = flexibility_and_negligibility(em, {});
  for (const auto& h : em.holes) {
    CHECK(rep.plus_negligible.count(h) == 1);
    CHECK(rep.minus_negligible.count(h) == 1);
  }
}

TEST_CASE("simple essential boundary implies flexibility") {
  EnhancedMirrorDiagram em = from_surface_diagram(pi_star());
  auto circuits = trace_circuits(em.m);
  std::set<std::string> protect;
  for (const auto& c : circuits)
    if (!em.holes.count(c.key)) protect.insert(c.key);
  FlexReport rep = flexibility_and_negligibility(em, protect);
  CHECK(rep.plus_flexible);
  CHECK(rep.minus_flexible);
  CHECK(!rep.plus_witness.empty());
}

TEST_CASE("component with no backslash mirrors is not plus-flexible") {
  EnhancedMirrorDiagram em;
  em.m.cols = 2;
  em.m.rows = 2;
  em.m.mirrors[{0, 0}] = DiagType::Slash;
  em.m.mirrors[{1, 1}] = DiagType::Slash;
  em.m.mirrors[{0, 1}] = DiagType::Slash;
  em.m.mirrors[{1, 0}] = DiagType::Slash;
  FlexReport rep = flexibility_and_negligibility(em, {});
  CHECK_FALSE(rep.plus_flexible);
}

TEST_CASE("splitting route validation") {
  EnhancedMirrorDiagram em;
  em.m.cols = 3;
  em.m.rows = 2;
  em.m.mirrors[{0, 1}] = DiagType::Back;   // mu1
  em.m.mirrors[{2, 1}] = DiagType::Slash;  // mu2 = mu6
  em.m.mirrors[{2, 0}] = DiagType::Slash;  // mu3
  em.m.mirrors[{1, 0}] = DiagType::Slash;  // mu4
  em.m.mirrors[{1, 1}] = DiagType::Slash;  // mu5
  SplittingRoute r;
  r.rtype = 2;
  r.mirrors = {{0, 1}, {2, 1}, {2, 0}, {1, 0}, {1, 1}, {2, 1}};
  r.double_headed = false;
  // shared level of the last pair is the meridian 2... the terminal level is
  // the other level of the last mirror
  r.p_axis = LevelAxis::Vertical;
  r.p_level = 2;
  r.p_gap = 1;
  bool ok_v = true;
  try {
    validate_splitting_route(em.m, r);
  } catch (const Error&) {
    ok_v = false;
  }
  if (!ok_v) {
    r.p_axis = LevelAxis::Horizontal;
    r.p_level = 1;
    r.p_gap = 0;
    CHECK_NOTHROW(validate_splitting_route(em.m, r));
  }
  // a triple repeat is rejected
  SplittingRoute bad;
  bad.rtype = 2;
  bad.double_headed = false;
  bad.mirrors = {{0, 1}, {2, 1}, {2, 1}, {2, 1}};
  bad.p_axis = LevelAxis::Vertical;
  bad.p_level = 2;
  bad.p_gap = 1;
  CHECK_THROWS_AS(validate_splitting_route(em.m, bad), Error);
  // wrong-type head is rejected
  SplittingRoute wrong = r;
  wrong.mirrors[0] = {1, 1};
  CHECK_THROWS_AS(validate_splitting_route(em.m, wrong), Error);
}
