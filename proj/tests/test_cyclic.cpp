#include "doctest.h"
#include "gridsurf/cyclic.hpp"

using namespace gridsurf;

TEST_CASE("arc membership on a four-point circle") {
  CyclicOrder ord({'A', 'B', 'C', 'D'});
  CHECK(arc_contains(ord, {'A', 'C', ArcKind::Closed}, 'B'));
  CHECK_FALSE(arc_contains(ord, {'A', 'C', ArcKind::Closed}, 'D'));
  CHECK(arc_contains(ord, {'C', 'A', ArcKind::Closed}, 'D'));
  CHECK(arc_contains(ord, {'A', 'C', ArcKind::Closed}, 'A'));
  CHECK_FALSE(arc_contains(ord, {'A', 'C', ArcKind::Open}, 'A'));
  CHECK_FALSE(arc_contains(ord, {'A', 'C', ArcKind::HalfOpenLeft}, 'A'));
  CHECK(arc_contains(ord, {'A', 'C', ArcKind::HalfOpenLeft}, 'C'));
  CHECK(arc_contains(ord, {'A', 'C', ArcKind::HalfOpenRight}, 'A'));
  CHECK_THROWS_AS(arc_contains(ord, {'A', 'C', ArcKind::Closed}, 'X'), Error);
}

TEST_CASE("arc trichotomy") {
  // for distinct a,b,x exactly one of x in (a;b), x in (b;a), x in {a,b}
  CyclicOrder ord({0, 1, 2, 3, 4, 5});
  for (int a = 0; a < 6; ++a)
    for (int b = 0; b < 6; ++b) {
      if (a == b) continue;
      for (int x = 0; x < 6; ++x) {
        int hits = 0;
        if (arc_contains(ord, {a, b, ArcKind::Open}, x)) hits++;
        if (arc_contains(ord, {b, a, ArcKind::Open}, x)) hits++;
        if (x == a || x == b) hits++;
        CHECK(hits == 1);
      }
    }
}

TEST_CASE("cyclic order relations and rotations") {
  CyclicOrder ord({10, 20, 30, 40});
  CHECK(ord.in_cyclic_order(10, 20, 30));
  CHECK(ord.in_cyclic_order(30, 40, 20));
  CHECK_FALSE(ord.in_cyclic_order(10, 30, 20));
  CyclicOrder rot({30, 40, 10, 20});
  CHECK(ord.same_cyclic_order(rot));
  CyclicOrder other({10, 30, 20, 40});
  CHECK_FALSE(ord.same_cyclic_order(other));
}

TEST_CASE("gap crossing") {
  // arc [1;3] on a 5-circle crosses gaps 2 and 3 only
  CHECK(arc_crosses_gap(1, 3, 2, 5));
  CHECK(arc_crosses_gap(1, 3, 3, 5));
  CHECK_FALSE(arc_crosses_gap(1, 3, 1, 5));
  CHECK_FALSE(arc_crosses_gap(1, 3, 4, 5));
  CHECK_FALSE(arc_crosses_gap(1, 3, 0, 5));
  // wrap-around arc [3;1]
  CHECK(arc_crosses_gap(3, 1, 4, 5));
  CHECK(arc_crosses_gap(3, 1, 0, 5));
  CHECK(arc_crosses_gap(3, 1, 1, 5));
  CHECK_FALSE(arc_crosses_gap(3, 1, 2, 5));
}
