#include "doctest.h"
#include "gridsurf/pipeline.hpp"
#include "gridsurf/realize.hpp"

using namespace gridsurf;

TEST_CASE("incidence of the first code matches the known realization") {
  AbstractIncidence inc = build_incidence(builtin_code_a());
  CHECK(inc.n == 18);
  CHECK(inc.vlevels == 10);
  CHECK(inc.hlevels == 13);
  CHECK(inc.vertex_count == 44);
}

TEST_CASE("single-point code realizes as the single rectangle") {
  DividingCode c;
  c.n = 1;
  c.plus = {{{1}, false}};
  c.minus = {{{1}, false}};
  RealizeResult res = enumerate_realizations(c);
  CHECK(res.stats.complete);
  REQUIRE(res.realizations.size() == 1);
  CHECK(res.realizations[0].rects.size() == 1);
}

TEST_CASE("the first code has exactly one realization") {
  RealizeResult res = enumerate_realizations(builtin_code_a());
  CHECK(res.stats.complete);
  CHECK(res.realizations.size() == 1);
  if (res.realizations.size() == 1) {
    const SurfaceDiagram& pi = res.realizations[0];
    CHECK(pi.rects.size() == 18);
    DividingCode back = extract_code(pi);
    CHECK(code_equal_identity(back, builtin_code_a()));
  }
}

TEST_CASE("the second code has exactly two realizations") {
  RealizeResult res = enumerate_realizations(builtin_code_b());
  CHECK(res.stats.complete);
  CHECK(res.realizations.size() == 2);
}

TEST_CASE("oracle equivalence on tiny bounds") {
  auto oracle = brute_force_oracle(2, 3);
  CHECK(!oracle.empty());
  for (const auto& [key, entry] : oracle) {
    RealizeResult res = enumerate_realizations(entry.code);
    CHECK(res.stats.complete);
    CHECK(res.realizations.size() == entry.canonical_forms.size());
    for (const auto& pi : res.realizations)
      CHECK(entry.canonical_forms.count(canonical_form(pi)) == 1);
  }
}

TEST_CASE("boundary filter keeps the matching realization") {
  RealizeResult base = enumerate_realizations(builtin_code_a());
  REQUIRE(base.realizations.size() == 1);
  LinkDiagram r1 = boundary_link(base.realizations[0]).link;

  RealizeOptions opts;
  opts.boundary_filter = r1;
  RealizeResult filtered = enumerate_realizations(builtin_code_a(), opts);
  CHECK(filtered.realizations.size() == 1);

  // a filter with an unrelated boundary keeps nothing
  LinkDiagram square;
  square.cols = square.rows = 2;
  square.vertices = {{0, 0}, {0, 1}, {1, 0}, {1, 1}};
  opts.boundary_filter = square;
  RealizeResult none = enumerate_realizations(builtin_code_a(), opts);
  CHECK(none.realizations.empty());
}

TEST_CASE("unrealizable codes report a certificate") {
  // a code whose gluings force a full-circle side
  DividingCode c;
  c.n = 1;
  c.plus = {{{1}, true}};
  c.minus = {{{1}, false}};
  RealizeResult res = enumerate_realizations(c);
  CHECK(res.realizations.empty());
  CHECK(!res.stats.unrealizable_reason.empty());
}

TEST_CASE("parallel search matches the sequential one") {
  RealizeOptions opts;
  opts.jobs = 3;
  RealizeResult par = enumerate_realizations(builtin_code_b(), opts);
  RealizeResult seq = enumerate_realizations(builtin_code_b());
  REQUIRE(par.realizations.size() == seq.realizations.size());
  for (size_t i = 0; i < par.realizations.size(); ++i)
    CHECK(canonical_form(par.realizations[i]) == canonical_form(seq.realizations[i]));
}
