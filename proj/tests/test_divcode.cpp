#include "doctest.h"
#include "gridsurf/divcode.hpp"
#include "gridsurf/pipeline.hpp"

using namespace gridsurf;

TEST_CASE("single rectangle code") {
  SurfaceDiagram pi;
  pi.cols = pi.rows = 2;
  pi.rects = {{0, 1, 0, 1}};
  DividingCode c = extract_code(pi);
  CHECK(c.n == 1);
  REQUIRE(c.plus.size() == 1);
  REQUIRE(c.minus.size() == 1);
  CHECK_FALSE(c.plus[0].closed);
  CHECK_FALSE(c.minus[0].closed);
  CHECK(c.plus[0].points == std::vector<int>{1});
}

TEST_CASE("validation rejects broken codes") {
  DividingCode c = builtin_code_a();
  CHECK_NOTHROW(validate_code(c));
  DividingCode missing = c;
  missing.minus[0].points.erase(missing.minus[0].points.begin() + 2);  // drop point
  CHECK_THROWS_WITH_AS(validate_code(missing), doctest::Contains("missing"), Error);
  DividingCode dup = c;
  dup.plus[0].points[1] = dup.plus[0].points[0];
  CHECK_THROWS_WITH_AS(validate_code(dup), doctest::Contains("duplicate"), Error);
}

TEST_CASE("code isomorphism under relabeling") {
  DividingCode a = builtin_code_a();
  DividingCode b = a;
  auto shift = [&](int p) { return (p - 1 + 3) % 18 + 1; };
  for (auto* side : {&b.plus, &b.minus})
    for (auto& comp : *side)
      for (auto& p : comp.points) p = shift(p);
  CHECK(code_isomorphic(a, b).has_value());
}

TEST_CASE("codes with different component shapes are not isomorphic") {
  CHECK_FALSE(code_isomorphic(builtin_code_a(), builtin_code_b()).has_value());
}

TEST_CASE("reversing the long minus sequence breaks isomorphism") {
  DividingCode a = builtin_code_a();
  DividingCode b = a;
  std::reverse(b.minus[0].points.begin(), b.minus[0].points.end());
  CHECK_FALSE(code_isomorphic(a, b).has_value());
}

TEST_CASE("canonical key groups isomorphic codes") {
  SurfaceDiagram pi;
  pi.cols = pi.rows = 2;
  pi.rects = {{0, 1, 0, 1}};
  DividingCode c = extract_code(pi);
  CHECK(code_canonical_key(c) == code_canonical_key(c));
  DividingCode f8 = builtin_fig8_code();
  DividingCode f8b = f8;
  // rotate the closed minus component; key must not change
  std::rotate(f8b.minus[0].points.begin(), f8b.minus[0].points.begin() + 1,
              f8b.minus[0].points.end());
  CHECK(code_canonical_key(f8) == code_canonical_key(f8b));
}
