#include <set>

#include "doctest.h"
#include "gridsurf/divcode.hpp"
#include "gridsurf/mirror.hpp"
#include "gridsurf/pipeline.hpp"
#include "gridsurf/realize.hpp"
#include "gridsurf/surface.hpp"

using namespace gridsurf;

namespace {

SurfaceDiagram single_rect() {
  SurfaceDiagram pi;
  pi.cols = pi.rows = 2;
  pi.rects = {{0, 1, 0, 1}};
  return pi;
}

}  // namespace

TEST_CASE("single rectangle is a disc") {
  SurfaceDiagram pi = single_rect();
  SurfaceInfo info = validate_surface(pi);
  CHECK(info.vertices.size() == 4);
  CHECK(info.boundary_vertices == 4);
  SurfaceClass cls = classify_surface(pi);
  CHECK(cls.euler == 1);
  CHECK(cls.euler_complex == 1);
  CHECK(cls.boundary_components == 1);
  CHECK(cls.orientable);
  CHECK(cls.genus == 0);
  BoundaryLink bl = boundary_link(pi);
  CHECK(bl.link.vertices.size() == 4);
  CHECK(bl.tb_plus_rel == std::vector<int>{-1});
  CHECK(bl.tb_minus_rel == std::vector<int>{-1});
  CHECK(detect_bigons(pi).empty());
}

TEST_CASE("two-rectangle bigon pair validates") {
  // [A;B]x[a;b] and [B;C]x[b;a] sharing one backslash and one slash corner
  SurfaceDiagram pi;
  pi.cols = 3;
  pi.rows = 2;
  pi.rects = {{0, 1, 0, 1}, {1, 2, 1, 0}};
  SurfaceInfo info = validate_surface(pi);
  CHECK(info.vertices.size() == 6);
  auto bigons = detect_bigons(pi);
  REQUIRE(bigons.size() == 1);
  CHECK(bigons[0].rect_a == 0);
  CHECK(bigons[0].rect_b == 1);
  CHECK_FALSE(bigons[0].reducible_admissibly);  // a two-rectangle band: both
                                                // parallel levels carry boundary
}

TEST_CASE("shared same-role corner is rejected") {
  SurfaceDiagram pi;
  pi.cols = 3;
  pi.rows = 3;
  pi.rects = {{0, 1, 0, 1}, {0, 2, 0, 2}};  // same BL corner
  CHECK_THROWS_WITH_AS(validate_surface(pi), doctest::Contains("corner"), Error);
}

TEST_CASE("vertex inside a foreign rectangle is rejected") {
  SurfaceDiagram pi;
  pi.cols = 4;
  pi.rows = 4;
  pi.rects = {{0, 3, 0, 3}, {1, 2, 1, 2}};
  CHECK_THROWS_AS(validate_surface(pi), Error);
}

TEST_CASE("wrinkle creation makes a reducible bigon and round-trips") {
  SurfaceDiagram pi = single_rect();
  // vertical wrinkle at meridian 0: backslash vertex (0,0), slash vertex (0,1)
  SurfaceMove mv;
  mv.kind = SurfaceMove::Kind::WrinkleCreate;
  mv.axis = LevelAxis::Vertical;
  mv.level = 0;
  mv.h1 = 0;
  mv.h2 = 1;
  SurfaceDiagram out = apply_surface_move(pi, mv);
  CHECK(out.rects.size() == 3);
  auto bigons = detect_bigons(out);
  bool found_reducible = false;
  for (const auto& b : bigons)
    if (b.reducible_admissibly) {
      found_reducible = true;
      BigonReduction red = reduce_bigon(out, b);
      CHECK(red.script.size() <= 3);
      CHECK(canonical_form(red.result) == canonical_form(pi));
    }
  CHECK(found_reducible);
}

TEST_CASE("annulus over the square unknot") {
  LinkDiagram R;
  R.cols = R.rows = 2;
  R.vertices = {{0, 0}, {0, 1}, {1, 0}, {1, 1}};
  SurfaceDiagram ann = attach_annulus(R, 0);
  CHECK(ann.rects.size() == 4);  // two rectangles per meridian of the component
  SurfaceClass cls = classify_surface(ann);
  CHECK(cls.euler == 0);
  CHECK(cls.boundary_components == 2);
  CHECK(cls.orientable);
  CHECK(cls.genus == 0);
}

TEST_CASE("surface stabilization moves one boundary component's framing") {
  SurfaceDiagram pi = single_rect();
  SurfaceMove mv;
  mv.kind = SurfaceMove::Kind::Stabilize;
  mv.stab_type = 1;
  mv.axis = LevelAxis::Vertical;
  mv.level = 0;
  mv.h1 = 0;  // backslash vertex at (0,0)
  mv.gap = 2;
  SurfaceDiagram out = apply_surface_move(pi, mv);
  BoundaryLink bl0 = boundary_link(pi);
  BoundaryLink bl1 = boundary_link(out);
  REQUIRE(bl1.tb_plus_rel.size() == 1);
  CHECK(bl1.tb_plus_rel[0] == bl0.tb_plus_rel[0]);
  CHECK(bl1.tb_minus_rel[0] == bl0.tb_minus_rel[0] - 1);
  // boundary got a link stabilization: two more vertices
  CHECK(bl1.link.vertices.size() == bl0.link.vertices.size() + 2);
}

TEST_CASE("exchange on a surface preserves the code") {
  // two separate rectangles side by side can be block-exchanged
  SurfaceDiagram pi;
  pi.cols = 4;
  pi.rows = 4;
  pi.rects = {{0, 1, 0, 1}, {2, 3, 2, 3}};
  validate_surface(pi);
  SurfaceMove mv;
  mv.kind = SurfaceMove::Kind::Exchange;
  mv.axis = LevelAxis::Vertical;
  mv.g1 = 1;
  mv.g2 = 2;
  mv.g3 = 3;
  mv.k1 = 2;
  mv.k2 = 0;
  SurfaceDiagram out = apply_surface_move(pi, mv);
  DividingCode c0 = extract_code(pi);
  DividingCode c1 = extract_code(out);
  CHECK(code_isomorphic(c0, c1).has_value());
}

TEST_CASE("collar on an annulus boundary with zero plus framing") {
  LinkDiagram R;
  R.cols = R.rows = 2;
  R.vertices = {{0, 0}, {0, 1}, {1, 0}, {1, 1}};
  SurfaceDiagram ann = attach_annulus(R, 0);
  BoundaryLink bl = boundary_link(ann);
  REQUIRE(bl.tb_plus_rel.size() == 2);
  REQUIRE(bl.tb_plus_rel[0] == 0);
  SurfaceDiagram out = attach_collar(ann, 0, +1);
  SurfaceClass cls = classify_surface(out);
  CHECK(cls.euler == 0);
  CHECK(cls.boundary_components == 2);
  BoundaryLink bl2 = boundary_link(out);
  // the minus framing numbers are untouched by the plus-side collar
  std::multiset<int> before(bl.tb_minus_rel.begin(), bl.tb_minus_rel.end());
  std::multiset<int> after(bl2.tb_minus_rel.begin(), bl2.tb_minus_rel.end());
  CHECK(before == after);
  // the wrong side errors out
  CHECK_THROWS_AS(attach_collar(ann, 0, -1), Error);
}

TEST_CASE("half-wrinkle creation and reduction round-trip") {
  SurfaceDiagram pi;
  pi.cols = pi.rows = 2;
  pi.rects = {{0, 1, 0, 1}};
  // meridian 0 carries the backslash (0,0) and slash (0,1), both boundary;
  // the [h1;h2] bank holds the rectangle's left side, the other bank is free
  SurfaceMove mv;
  mv.kind = SurfaceMove::Kind::HalfWrinkleCreate;
  mv.axis = LevelAxis::Vertical;
  mv.level = 0;
  mv.h1 = 0;
  mv.h2 = 1;
  SurfaceDiagram out = apply_surface_move(pi, mv);
  CHECK(out.rects.size() == 2);
  SurfaceClass cls = classify_surface(out);
  CHECK(cls.euler == 1);  // still a disc
  // find the attached rectangle and retract it
  bool undone = false;
  for (int i = 0; i < static_cast<int>(out.rects.size()); ++i) {
    SurfaceMove red;
    red.kind = SurfaceMove::Kind::HalfWrinkleReduce;
    red.rect_a = i;
    try {
      if (canonical_form(apply_surface_move(out, red)) == canonical_form(pi)) undone = true;
    } catch (const Error&) {
    }
  }
  CHECK(undone);
}

TEST_CASE("bigons match the code adjacency criterion") {
  // bigons correspond exactly to label pairs consecutive on both sides
  for (int variant = 0; variant < 2; ++variant) {
    SurfaceDiagram pi;
    if (variant == 0) {
      pi.cols = 3;
      pi.rows = 2;
      pi.rects = {{0, 1, 0, 1}, {1, 2, 1, 0}};
    } else {
      pi.cols = pi.rows = 3;
      pi.rects = {{0, 1, 0, 1}, {1, 2, 1, 2}};
    }
    DividingCode c = extract_code(pi);
    auto consecutive = [](const std::vector<CodeComponent>& comps, int a, int b) {
      for (const auto& comp : comps) {
        size_t k = comp.points.size();
        for (size_t i = 0; i < k; ++i) {
          size_t j = (i + 1) % k;
          if (!comp.closed && j == 0) continue;
          if ((comp.points[i] == a && comp.points[j] == b) ||
              (comp.points[i] == b && comp.points[j] == a))
            return true;
        }
      }
      return false;
    };
    auto bigons = detect_bigons(pi);
    for (int a = 1; a <= c.n; ++a)
      for (int b = a + 1; b <= c.n; ++b) {
        bool expected = consecutive(c.plus, a, b) && consecutive(c.minus, a, b);
        int found = 0;
        for (const auto& bg : bigons)
          if ((bg.rect_a + 1 == a && bg.rect_b + 1 == b) ||
              (bg.rect_a + 1 == b && bg.rect_b + 1 == a))
            found++;
        CHECK((expected ? found > 0 : found == 0));
      }
  }
}

TEST_CASE("point reflection of the genus-two boundary changes the canonical form") {
  RealizeResult res = enumerate_realizations(builtin_code_a());
  REQUIRE(res.realizations.size() == 1);
  BoundaryLink bl = boundary_link(res.realizations[0]);
  LinkDiagram rho = point_reflection(bl.link);
  CHECK(canonical_form(rho) != canonical_form(bl.link));
  // the transpose also generally differs
  CHECK(canonical_form(apply_symmetry(bl.link, Symmetry::Transpose)) !=
        canonical_form(bl.link));
}
