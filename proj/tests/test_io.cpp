#include "doctest.h"
#include "gridsurf/io.hpp"
#include "gridsurf/pipeline.hpp"
#include "gridsurf/realize.hpp"
#include "gridsurf/svg.hpp"

using namespace gridsurf;

TEST_CASE("single-point code text") {
  DividingCode c = parse_code("code 1\n+ 1\n- 1\n");
  CHECK(c.n == 1);
  CHECK(c.plus.size() == 1);
  CHECK_FALSE(c.plus[0].closed);
  CHECK(serialize_code(c) == "code 1\n+ 1\n- 1\n");
}

TEST_CASE("the first code text round trip") {
  std::string text =
      "code 18\n"
      "+ 1 2 3 4\n+ 5 6\n+ 7 8 9 10\n+ 11 12\n+ 13 14\n+ 15 16\n+ 17 18\n"
      "- 9 12 5 4 7 14 15 18 3 6 13 8 17 16 11 10 1 2\n";
  DividingCode c = parse_code(text);
  CHECK(code_equal_identity(c, builtin_code_a()));
  CHECK(serialize_code(builtin_code_a()) == text);
}

TEST_CASE("closed components repeat the first label") {
  std::string text = "code 2\n+ 1 2 1\n- 1\n- 2\n";
  DividingCode c = parse_code(text);
  CHECK(c.plus[0].closed);
  CHECK(c.plus[0].points == std::vector<int>{1, 2});
  CHECK(serialize_code(c) == text);
}

TEST_CASE("comments and whitespace are tolerated") {
  DividingCode c = parse_code("# header\n code 1 \n + 1  # trailing\n- 1\n\n");
  CHECK(c.n == 1);
}

TEST_CASE("parse errors carry line numbers") {
  CHECK_THROWS_WITH_AS(parse_surface("surface 2 2\n0 1 0\n"), doctest::Contains("line 2"),
                       Error);
  CHECK_THROWS_WITH_AS(parse_link("link 1\n"), doctest::Contains("line 1"), Error);
}

TEST_CASE("link and surface round trips") {
  LinkDiagram R = parse_link("link 2 2\n0 0\n0 1\n1 0\n1 1\norient +\n");
  CHECK(parse_link(serialize_link(R)).vertices == R.vertices);
  SurfaceDiagram pi = parse_surface("surface 2 2\n0 1 0 1\n");
  CHECK(serialize_surface(parse_surface(serialize_surface(pi))) == serialize_surface(pi));
}

TEST_CASE("mirror diagram text with holes") {
  SurfaceDiagram pi;
  pi.cols = pi.rows = 2;
  pi.rects = {{0, 1, 0, 1}};
  EnhancedMirrorDiagram em = from_surface_diagram(pi);
  std::string text = serialize_mirror(em);
  EnhancedMirrorDiagram back = parse_mirror(text);
  CHECK(back.m.mirrors == em.m.mirrors);
  CHECK(back.holes == em.holes);
}

TEST_CASE("script round trip") {
  MirrorMove mv;
  mv.kind = MirrorMove::Kind::Split;
  mv.stype = 2;
  mv.axis = LevelAxis::Vertical;
  mv.level = 3;
  mv.spos = 1;
  mv.cgap = 2;
  auto parsed = parse_script(serialize_script({mv}), nullptr);
  REQUIRE(parsed.size() == 1);
  CHECK(parsed[0].kind == MirrorMove::Kind::Split);
  CHECK(parsed[0].stype == 2);
  CHECK(parsed[0].axis == LevelAxis::Vertical);
  CHECK(parsed[0].spos == 1);
}

TEST_CASE("svg output is stable and well-formed") {
  SurfaceDiagram pi;
  pi.cols = pi.rows = 2;
  pi.rects = {{0, 1, 0, 1}};
  std::string a = render_svg(pi);
  std::string b = render_svg(pi);
  CHECK(a == b);
  CHECK(a.find("<svg") != std::string::npos);
  CHECK(a.find("</svg>") != std::string::npos);
  CHECK(a.find("green") != std::string::npos);
  CHECK(a.find("red") != std::string::npos);
  EnhancedMirrorDiagram em = from_surface_diagram(pi);
  CHECK(render_svg(em).find("<line") != std::string::npos);
  LinkDiagram R = parse_link("link 2 2\n0 0\n0 1\n1 0\n1 1\n");
  CHECK(render_svg(R).find("circle") != std::string::npos);
}

TEST_CASE("fixture round trips for the built-in codes") {
  for (const DividingCode& c : {builtin_code_a(), builtin_code_b(), builtin_fig8_code()}) {
    DividingCode back = parse_code(serialize_code(c));
    CHECK(code_equal_identity(back, c));
  }
}
