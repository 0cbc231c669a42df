// Acceptance suite: runs every criterion at its stated tolerance and prints
// one pass/fail line per criterion. Exits nonzero when any criterion fails.

#include <chrono>
#include <iostream>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "gridsurf/divcode.hpp"
#include "gridsurf/io.hpp"
#include "gridsurf/mirror.hpp"
#include "gridsurf/pipeline.hpp"
#include "gridsurf/realize.hpp"

using namespace gridsurf;
using Clock = std::chrono::steady_clock;

namespace {

int failures = 0;

void report(int idx, const std::string& name, bool ok, const std::string& detail = "") {
  std::cout << "criterion " << idx << " [" << name << "]: " << (ok ? "PASS" : "FAIL");
  if (!detail.empty()) std::cout << " (" << detail << ")";
  std::cout << std::endl;
  if (!ok) failures++;
}

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

LinkDiagram random_link(std::mt19937& rng, int n) {
  std::vector<int> sigma(static_cast<size_t>(n)), tau(static_cast<size_t>(n));
  std::iota(sigma.begin(), sigma.end(), 0);
  std::iota(tau.begin(), tau.end(), 0);
  while (true) {
    std::shuffle(sigma.begin(), sigma.end(), rng);
    std::shuffle(tau.begin(), tau.end(), rng);
    bool ok = true;
    for (int i = 0; i < n; ++i)
      if (sigma[static_cast<size_t>(i)] == tau[static_cast<size_t>(i)]) ok = false;
    if (!ok) continue;
    LinkDiagram R;
    R.cols = R.rows = n;
    for (int i = 0; i < n; ++i) {
      R.vertices.push_back({i, sigma[static_cast<size_t>(i)]});
      R.vertices.push_back({i, tau[static_cast<size_t>(i)]});
    }
    std::sort(R.vertices.begin(), R.vertices.end());
    return orient_canonically(R);
  }
}

MirrorDiagram random_mirror(std::mt19937& rng, int p, int q, double density) {
  MirrorDiagram m;
  m.cols = p;
  m.rows = q;
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  for (int v = 0; v < p; ++v)
    for (int h = 0; h < q; ++h)
      if (coin(rng) < density)
        m.mirrors[{v, h}] = coin(rng) < 0.5 ? DiagType::Back : DiagType::Slash;
  return m;
}

}  // namespace

int main(int argc, char** argv) {
  std::string fixtures = argc > 1 ? argv[1] : "fixtures";

  // --- 1: first code has exactly one realization, under 60 s ---------------
  RealizeResult res_a;
  {
    auto t0 = Clock::now();
    res_a = enumerate_realizations(builtin_code_a());
    double dt = seconds_since(t0);
    bool ok = res_a.stats.complete && res_a.realizations.size() == 1 && dt <= 60.0;
    report(1, "first code count", ok,
           "count=" + std::to_string(res_a.realizations.size()) + " t=" +
               std::to_string(dt) + "s");
  }

  // --- 2: second code has exactly two realizations, under 60 s -------------
  RealizeResult res_b;
  {
    auto t0 = Clock::now();
    res_b = enumerate_realizations(builtin_code_b());
    double dt = seconds_since(t0);
    bool ok = res_b.stats.complete && res_b.realizations.size() == 2 && dt <= 60.0;
    report(2, "second code count", ok,
           "count=" + std::to_string(res_b.realizations.size()) + " t=" +
               std::to_string(dt) + "s");
  }

  // --- 3: the unique realization's classification ---------------------------
  {
    bool ok = res_a.realizations.size() == 1;
    std::string detail;
    if (ok) {
      const SurfaceDiagram& pi = res_a.realizations[0];
      SurfaceClass cls = classify_surface(pi);
      BoundaryLink bl = boundary_link(pi);
      LinkReport lr = analyze_link(orient_canonically(bl.link));
      auto bigons = detect_bigons(pi);
      ok = cls.rect_count == 18 && cls.vertex_count == 44 && cls.level_count == 23 &&
           cls.euler == -3 && cls.euler_complex == -3 && cls.orientable && cls.genus == 2 &&
           cls.boundary_components == 1 && bl.link.vertices.size() == 16 &&
           lr.tb_plus == -7 && lr.tb_minus == -1 && bl.tb_plus_rel.size() == 1 &&
           bl.tb_plus_rel[0] == -7 && bl.tb_minus_rel[0] == -1 && bigons.size() == 1 &&
           ((bigons[0].rect_a == 0 && bigons[0].rect_b == 1) ||
            (bigons[0].rect_a == 1 && bigons[0].rect_b == 0)) &&
           !bigons[0].reducible_admissibly;
      detail = "rects=" + std::to_string(cls.rect_count) + " verts=" +
               std::to_string(cls.vertex_count) + " levels=" + std::to_string(cls.level_count) +
               " chi=" + std::to_string(cls.euler) + " genus=" + std::to_string(cls.genus) +
               " b=" + std::to_string(cls.boundary_components) + " tb+=" +
               std::to_string(lr.tb_plus) + " tb-=" + std::to_string(lr.tb_minus) +
               " bigons=" + std::to_string(bigons.size());
    }
    report(3, "unique realization classification", ok, detail);
  }

  // --- 4: third code has >= 2 realizations with non-equivalent boundaries ---
  {
    RealizeResult f8 = enumerate_realizations(builtin_fig8_code());
    std::set<std::string> bkeys;
    for (const auto& pi : f8.realizations) bkeys.insert(canonical_form(boundary_link(pi).link));
    bool ok = f8.stats.complete && f8.realizations.size() >= 2 && bkeys.size() >= 2;
    report(4, "third code realizations", ok,
           "count=" + std::to_string(f8.realizations.size()) + " distinct boundaries=" +
               std::to_string(bkeys.size()));
  }

  // --- 5: reference diagram gates + pipeline verdict -------------------------
  {
    bool ok = false;
    std::string detail;
    try {
      FixtureSet fx;
      fx.code_a = builtin_code_a();
      fx.code_b = builtin_code_b();
      fx.r2 = parse_link(read_file(fixtures + "/r2.link"));
      PipelineReport rep = run_sixtwo_pipeline(fx);
      ok = rep.distinguished;
      detail = ok ? "verdict: distinguished"
                  : (rep.failure.empty() ? "pipeline failed" : rep.failure);
    } catch (const Error& e) {
      detail = e.what();
    }
    report(5, "pipeline verdict", ok, detail);
  }

  // --- 6: oracle equivalence, <= 3 rectangles on grids up to 5x5, <= 10 min --
  {
    auto t0 = Clock::now();
    bool ok = true;
    std::string detail;
    auto oracle = brute_force_oracle(3, 5);
    long codes = 0;
    for (const auto& [key, entry] : oracle) {
      RealizeResult res = enumerate_realizations(entry.code);
      codes++;
      if (!res.stats.complete || res.realizations.size() != entry.canonical_forms.size()) {
        ok = false;
        detail = "mismatch at a code with " + std::to_string(entry.code.n) + " points: solver " +
                 std::to_string(res.realizations.size()) + " vs oracle " +
                 std::to_string(entry.canonical_forms.size());
        break;
      }
      for (const auto& pi : res.realizations)
        if (!entry.canonical_forms.count(canonical_form(pi))) {
          ok = false;
          detail = "solver output outside the oracle set";
        }
    }
    double dt = seconds_since(t0);
    if (dt > 600.0) ok = false;
    if (detail.empty())
      detail = std::to_string(codes) + " codes, t=" + std::to_string(dt) + "s";
    report(6, "oracle equivalence", ok, detail);
  }

  // --- 7: randomized invariant suites ---------------------------------------
  {
    bool ok = true;
    std::string detail;
    std::mt19937 rng(60302);

    // vertex count identity
    for (int i = 0; i < 200 && ok; ++i) {
      LinkDiagram R = random_link(rng, 3 + i % 5);
      LinkReport rep = analyze_link(R);
      if (rep.vertex_count != -2 * (rep.tb_plus + rep.tb_minus)) {
        ok = false;
        detail = "vertex count identity";
      }
    }
    // circuit sum rule
    for (int i = 0; i < 200 && ok; ++i) {
      MirrorDiagram m = random_mirror(rng, 2 + i % 5, 2 + (i / 2) % 5, 0.45);
      auto circuits = trace_circuits(m);
      int total = 0;
      for (const auto& c : circuits) total += c.tb_plus() + c.tb_minus();
      if (total != -static_cast<int>(m.mirrors.size())) {
        ok = false;
        detail = "circuit sum rule";
      }
    }
    // euler agreement + exchange invariance of codes come from the library
    // test suites as well; repeat the core ones here with fresh seeds
    for (int i = 0; i < 200 && ok; ++i) {
      LinkDiagram R = random_link(rng, 4 + i % 4);
      LinkReport base = analyze_link(R);
      auto moves = exchange_moves(R);
      if (moves.empty()) continue;
      LinkDiagram S = orient_canonically(apply_link_move(R, moves[i % moves.size()]));
      LinkReport rep = analyze_link(S);
      if (rep.tb_plus != base.tb_plus || rep.tb_minus != base.tb_minus) {
        ok = false;
        detail = "exchange invariance";
      }
    }
    for (int i = 0; i < 200 && ok; ++i) {
      LinkDiagram R = random_link(rng, 3 + i % 4);
      LinkReport base = analyze_link(R);
      Quadrant q = static_cast<Quadrant>(i % 4);
      LinkMove mv;
      mv.kind = LinkMove::Kind::Stabilize;
      mv.site = R.vertices[static_cast<size_t>(rng() % R.vertices.size())];
      mv.quadrant = q;
      LinkReport rep = analyze_link(orient_canonically(apply_link_move(R, mv)));
      bool good = stabilization_type(q) == 1
                      ? rep.tb_plus == base.tb_plus && rep.tb_minus == base.tb_minus - 1
                      : rep.tb_plus == base.tb_plus - 1 && rep.tb_minus == base.tb_minus;
      if (!good) {
        ok = false;
        detail = "stabilization typing";
      }
    }
    // decomposition replay: neutral moves of both target types
    int decomposed = 0;
    long guard = 0;
    while (decomposed < 200 && guard++ < 4000 && ok) {
      MirrorDiagram m = random_mirror(rng, 3 + decomposed % 3, 3 + (decomposed / 2) % 3, 0.4);
      EnhancedMirrorDiagram em{m, {}};
      MirrorMove tw;
      tw.kind = decomposed % 2 ? MirrorMove::Kind::Twist : MirrorMove::Kind::Jump;
      tw.axis = decomposed % 3 ? LevelAxis::Horizontal : LevelAxis::Vertical;
      tw.level = static_cast<int>(rng() % 3);
      tw.gap = static_cast<int>(rng() % 4);
      tw.dir = 1;
      MoveResult direct;
      try {
        direct = apply_mirror_move(em, tw);
      } catch (const Error&) {
        continue;
      }
      int t = 1 + decomposed % 2;
      try {
        ScriptResult sr = decompose_move(em, tw, t);
        if (canonical_form(sr.result.m) != canonical_form(direct.diagram.m)) {
          ok = false;
          detail = "decomposition replay";
        }
        NeatReport rep = check_neat(em, sr.script, {});
        if (!rep.replay_ok) {
          ok = false;
          detail = "decomposition neatness replay";
        }
        decomposed++;
      } catch (const Error& e) {
        ok = false;
        detail = std::string("decomposition failed: ") + e.what();
      }
    }
    if (decomposed < 200 && ok) {
      ok = false;
      detail = "not enough decomposition cases";
    }
    report(7, "invariant suites", ok, detail.empty() ? "800+ randomized cases" : detail);
  }

  std::cout << (failures == 0 ? "ALL CRITERIA PASSED" : "FAILURES PRESENT") << std::endl;
  return failures == 0 ? 0 : 1;
}
