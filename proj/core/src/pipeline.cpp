#include "gridsurf/pipeline.hpp"

#include <sstream>

#include "gridsurf/mirror.hpp"

namespace gridsurf {

namespace {

DividingCode make_code(int n, std::vector<std::vector<int>> plus,
                       std::vector<std::vector<int>> minus) {
  DividingCode c;
  c.n = n;
  auto conv = [](std::vector<std::vector<int>>& seqs) {
    std::vector<CodeComponent> out;
    for (auto& s : seqs) {
      CodeComponent comp;
      comp.points = s;
      if (s.size() >= 2 && s.front() == s.back()) {
        comp.closed = true;
        comp.points.pop_back();
      }
      out.push_back(std::move(comp));
    }
    return out;
  };
  c.plus = conv(plus);
  c.minus = conv(minus);
  validate_code(c);
  return c;
}

}  // namespace

DividingCode builtin_code_a() {
  return make_code(18,
                   {{1, 2, 3, 4}, {5, 6}, {7, 8, 9, 10}, {11, 12}, {13, 14}, {15, 16}, {17, 18}},
                   {{9, 12, 5, 4, 7, 14, 15, 18, 3, 6, 13, 8, 17, 16, 11, 10, 1, 2}});
}

DividingCode builtin_code_b() {
  return make_code(
      22, {{14, 9, 22, 1, 18, 5}, {2, 21, 10, 17}, {16, 11, 20, 3}, {4, 19}, {6, 13}, {12, 7}, {8, 15}},
      {{1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12, 13, 14, 15, 16, 17, 18, 19, 20, 21, 22}});
}

DividingCode builtin_fig8_code() {
  return make_code(7, {{1, 2, 3, 4, 5}, {6}, {7}}, {{1, 7, 5, 6, 1}, {2}, {3}, {4}});
}

PipelineReport run_sixtwo_pipeline(const FixtureSet& fixtures, long node_budget, int jobs) {
  PipelineReport rep;
  std::ostringstream log;
  auto fail = [&](const std::string& what) {
    rep.failure = what;
    log << "FAIL: " << what << '\n';
    rep.log = log.str();
    return rep;
  };

  RealizeOptions opts;
  opts.node_budget = node_budget;
  opts.jobs = jobs;

  log << "step 1: realizations of the first code\n";
  RealizeResult ra = enumerate_realizations(fixtures.code_a, opts);
  rep.count_a = static_cast<int>(ra.realizations.size());
  log << "  count = " << rep.count_a << " (nodes " << ra.stats.nodes << ")\n";
  if (!ra.stats.complete) return fail("search budget exhausted on the first code");
  if (rep.count_a != 1) return fail("expected exactly 1 realization of the first code");

  log << "step 2: realizations of the second code\n";
  RealizeResult rb = enumerate_realizations(fixtures.code_b, opts);
  rep.count_b = static_cast<int>(rb.realizations.size());
  log << "  count = " << rep.count_b << " (nodes " << rb.stats.nodes << ")\n";
  if (!rb.stats.complete) return fail("search budget exhausted on the second code");
  if (rep.count_b != 2) return fail("expected exactly 2 realizations of the second code");

  log << "step 3: reference diagram gates\n";
  LinkDiagram r2 = fixtures.r2;
  validate_link(r2);
  if (static_cast<int>(r2.vertices.size()) != 16) return fail("reference diagram must have 16 vertices");
  LinkReport lr = analyze_link(r2.oriented() ? r2 : orient_canonically(r2));
  if (lr.components.size() != 1) return fail("reference diagram must be a knot");
  if (lr.tb_plus != -7 || lr.tb_minus != -1)
    return fail("reference diagram must have tb_plus -7 and tb_minus -1");
  ClosureResult closure = exchange_closure(r2);
  rep.r2_rigid = closure.is_rigid;
  rep.r2_closure_size = closure.canonical_forms.size();
  log << "  rigid = " << (rep.r2_rigid ? "yes" : "no") << ", closure size = "
      << rep.r2_closure_size << '\n';
  if (!rep.r2_rigid) return fail("reference diagram admits an exchange move");
  if (rep.r2_closure_size != 1) return fail("exchange closure must be the diagram itself");

  log << "step 4: boundary comparison\n";
  rep.boundary_matches = 0;
  int idx = 0;
  for (const auto* result : {&ra, &rb}) {
    for (const auto& pi : result->realizations) {
      BoundaryLink bl = boundary_link(pi);
      std::string key = canonical_form(bl.link);
      bool match = closure.canonical_forms.count(key) > 0;
      log << "  realization " << ++idx << ": boundary "
          << (match ? "matches the closure" : "not in the closure") << '\n';
      if (match) rep.boundary_matches++;
    }
  }
  if (rep.boundary_matches != 0)
    return fail("a realization boundary lies in the reference closure");

  rep.distinguished = true;
  log << "verdict: configurations incompatible with the reference diagram\n";
  rep.log = log.str();
  return rep;
}

}  // namespace gridsurf
