#include <random>

#include "doctest.h"
#include "gridsurf/divcode.hpp"
#include "gridsurf/mirror.hpp"
#include "gridsurf/pipeline.hpp"
#include "gridsurf/realize.hpp"

using namespace gridsurf;

namespace {

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

// Random valid surface diagrams grown by wrinkle and stabilization moves.
SurfaceDiagram random_surface(std::mt19937& rng, int moves) {
  SurfaceDiagram pi;
  pi.cols = pi.rows = 2;
  pi.rects = {{0, 1, 0, 1}};
  std::uniform_int_distribution<int> coin(0, 2);
  for (int step = 0; step < moves; ++step) {
    SurfaceInfo info = validate_surface(pi);
    std::vector<SurfaceMove> cands;
    // wrinkle sites: any backslash/slash vertex pair on a common level
    for (const auto& a : info.vertices) {
      if (a.type != DiagType::Back) continue;
      for (const auto& b : info.vertices) {
        if (b.type != DiagType::Slash) continue;
        if (a.pos.v == b.pos.v) {
          SurfaceMove mv;
          mv.kind = SurfaceMove::Kind::WrinkleCreate;
          mv.axis = LevelAxis::Vertical;
          mv.level = a.pos.v;
          mv.h1 = a.pos.h;
          mv.h2 = b.pos.h;
          cands.push_back(mv);
        }
        if (a.pos.h == b.pos.h) {
          SurfaceMove mv;
          mv.kind = SurfaceMove::Kind::WrinkleCreate;
          mv.axis = LevelAxis::Horizontal;
          mv.level = a.pos.h;
          mv.h1 = a.pos.v;
          mv.h2 = b.pos.v;
          cands.push_back(mv);
        }
      }
      if (a.multiplicity == 1) {
        SurfaceMove mv;
        mv.kind = SurfaceMove::Kind::Stabilize;
        mv.stab_type = 1;
        mv.axis = LevelAxis::Vertical;
        mv.level = a.pos.v;
        mv.h1 = a.pos.h;
        mv.gap = std::uniform_int_distribution<int>(0, pi.rows)(rng);
        cands.push_back(mv);
      }
    }
    for (const auto& b : info.vertices) {
      if (b.type == DiagType::Slash && b.multiplicity == 1) {
        SurfaceMove mv;
        mv.kind = SurfaceMove::Kind::Stabilize;
        mv.stab_type = 2;
        mv.axis = LevelAxis::Vertical;
        mv.level = b.pos.v;
        mv.h1 = b.pos.h;
        mv.gap = std::uniform_int_distribution<int>(0, pi.rows)(rng);
        cands.push_back(mv);
      }
    }
    if (cands.empty()) break;
    std::uniform_int_distribution<size_t> pick(0, cands.size() - 1);
    try {
      pi = apply_surface_move(pi, cands[pick(rng)]);
    } catch (const Error&) {
    }
  }
  return pi;
}

}  // namespace

TEST_CASE("vertex count identity over random link diagrams") {
  std::mt19937 rng(20240811);
  for (int i = 0; i < 200; ++i) {
    LinkDiagram R = random_link(rng, 3 + i % 5);
    LinkReport rep = analyze_link(R);
    CHECK(rep.vertex_count == -2 * (rep.tb_plus + rep.tb_minus));
    for (const auto& comp : rep.components)
      CHECK(static_cast<int>(comp.vertices.size()) ==
            -2 * (comp.tb_plus + comp.tb_minus));
    // orientation independence
    LinkDiagram flipped = R;
    for (auto& o : flipped.orientation) o = static_cast<int8_t>(-o);
    LinkReport rep2 = analyze_link(flipped);
    CHECK(rep2.tb_plus == rep.tb_plus);
    CHECK(rep2.tb_minus == rep.tb_minus);
  }
}

TEST_CASE("exchange moves preserve the framing numbers") {
  std::mt19937 rng(7);
  int cases = 0;
  while (cases < 200) {
    LinkDiagram R = random_link(rng, 4 + cases % 4);
    LinkReport base = analyze_link(R);
    for (const auto& mv : exchange_moves(R)) {
      LinkDiagram S = orient_canonically(apply_link_move(R, mv));
      LinkReport rep = analyze_link(S);
      CHECK(rep.tb_plus == base.tb_plus);
      CHECK(rep.tb_minus == base.tb_minus);
      cases++;
    }
  }
}

TEST_CASE("stabilizations shift exactly one framing number") {
  std::mt19937 rng(99);
  for (int i = 0; i < 200; ++i) {
    LinkDiagram R = random_link(rng, 3 + i % 4);
    LinkReport base = analyze_link(R);
    std::uniform_int_distribution<size_t> pick(0, R.vertices.size() - 1);
    Quadrant q = static_cast<Quadrant>(i % 4);
    LinkMove mv;
    mv.kind = LinkMove::Kind::Stabilize;
    mv.site = R.vertices[pick(rng)];
    mv.quadrant = q;
    LinkDiagram S = orient_canonically(apply_link_move(R, mv));
    LinkReport rep = analyze_link(S);
    if (stabilization_type(q) == 1) {
      CHECK(rep.tb_plus == base.tb_plus);
      CHECK(rep.tb_minus == base.tb_minus - 1);
    } else {
      CHECK(rep.tb_plus == base.tb_plus - 1);
      CHECK(rep.tb_minus == base.tb_minus);
    }
    // destabilize back at the fresh corner
    bool undone = false;
    for (const auto& p : S.vertices) {
      LinkMove dm;
      dm.kind = LinkMove::Kind::Destabilize;
      dm.site = p;
      try {
        if (canonical_form(apply_link_move(S, dm)) == canonical_form(R)) undone = true;
      } catch (const Error&) {
      }
    }
    CHECK(undone);
  }
}

TEST_CASE("circuit tb sum rule over random mirror diagrams") {
  std::mt19937 rng(4242);
  for (int i = 0; i < 200; ++i) {
    MirrorDiagram m = random_mirror(rng, 2 + i % 5, 2 + (i / 2) % 5, 0.45);
    auto circuits = trace_circuits(m);
    int total = 0;
    int transits = 0;
    for (const auto& c : circuits) {
      total += c.tb_plus() + c.tb_minus();
      transits += c.hits_back + c.hits_slash;
    }
    CHECK(total == -static_cast<int>(m.mirrors.size()));
    CHECK(transits == 2 * static_cast<int>(m.mirrors.size()));
  }
}

TEST_CASE("euler characteristic agreement on random surfaces") {
  std::mt19937 rng(31337);
  for (int i = 0; i < 200; ++i) {
    SurfaceDiagram pi = random_surface(rng, 1 + i % 4);
    SurfaceClass cls = classify_surface(pi);
    CHECK(cls.euler == cls.euler_complex);
    // surface association with matching counting
    EnhancedMirrorDiagram em = from_surface_diagram(pi);
    CHECK(mirror_euler(em.m) == cls.level_count - cls.vertex_count);
  }
}

TEST_CASE("wrinkle moves create a reducible bigon and reduce back") {
  std::mt19937 rng(555);
  int cases = 0;
  while (cases < 60) {
    SurfaceDiagram pi = random_surface(rng, cases % 3);
    DividingCode c0 = extract_code(pi);
    SurfaceInfo info = validate_surface(pi);
    // pick a wrinkle site
    std::optional<SurfaceMove> site;
    for (const auto& a : info.vertices) {
      if (a.type != DiagType::Back || site) continue;
      for (const auto& b : info.vertices) {
        if (b.type != DiagType::Slash || b.pos.v != a.pos.v || site) continue;
        SurfaceMove mv;
        mv.kind = SurfaceMove::Kind::WrinkleCreate;
        mv.axis = LevelAxis::Vertical;
        mv.level = a.pos.v;
        mv.h1 = a.pos.h;
        mv.h2 = b.pos.h;
        site = mv;
      }
    }
    if (!site) continue;
    SurfaceDiagram out = apply_surface_move(pi, *site);
    // the created bigon involves the two appended rectangles
    int ra = static_cast<int>(out.rects.size()) - 2;
    int rb = ra + 1;
    bool found = false;
    for (const auto& b : detect_bigons(out)) {
      if ((b.rect_a == ra && b.rect_b == rb) || (b.rect_a == rb && b.rect_b == ra)) {
        found = true;
        REQUIRE(b.reducible_admissibly);
        BigonReduction red = reduce_bigon(out, b);
        CHECK(canonical_form(red.result) == canonical_form(pi));
        DividingCode c1 = extract_code(red.result);
        CHECK(code_isomorphic(c0, c1).has_value());
      }
    }
    CHECK(found);
    cases++;
  }
}

TEST_CASE("decompositions replay and stay neat") {
  std::mt19937 rng(777);
  int cases = 0;
  long guard = 0;
  while (cases < 200 && guard++ < 4000) {
    MirrorDiagram m = random_mirror(rng, 3 + cases % 3, 3 + (cases / 2) % 3, 0.4);
    EnhancedMirrorDiagram em{m, {}};
    std::vector<MirrorMove> cands;
    // twists
    for (LevelAxis ax : {LevelAxis::Vertical, LevelAxis::Horizontal}) {
      int n = ax == LevelAxis::Vertical ? m.cols : m.rows;
      for (int lvl = 0; lvl < n; ++lvl) {
        MirrorMove mv;
        mv.kind = MirrorMove::Kind::Twist;
        mv.axis = ax;
        mv.level = lvl;
        cands.push_back(mv);
        MirrorMove jp;
        jp.kind = MirrorMove::Kind::Jump;
        jp.axis = ax;
        jp.level = lvl;
        jp.gap = (lvl + 2) % (n + 1);
        jp.dir = 1;
        cands.push_back(jp);
      }
    }
    // splits at every mirror
    for (const auto& [p, t] : m.mirrors) {
      MirrorMove mv;
      mv.kind = MirrorMove::Kind::Split;
      mv.stype = t == DiagType::Slash ? 1 : 2;
      mv.axis = LevelAxis::Horizontal;
      mv.level = p.h;
      mv.spos = p.v;
      mv.cgap = mod(p.v + 1, m.cols);
      cands.push_back(mv);
      MirrorMove mw;
      mw.kind = MirrorMove::Kind::WrinkleCreate;
      mw.axis = LevelAxis::Horizontal;
      mw.level = p.h;
      mw.back_pos = t == DiagType::Back ? p.v : -1;
      cands.push_back(mw);
    }
    std::shuffle(cands.begin(), cands.end(), rng);
    for (const auto& mv : cands) {
      MirrorMove use = mv;
      if (use.kind == MirrorMove::Kind::WrinkleCreate) {
        if (use.back_pos < 0) continue;
        // need a slash partner on the same level
        int slash = -1;
        for (const auto& [p, t] : m.mirrors)
          if (p.h == use.level && t == DiagType::Slash) slash = p.v;
        if (slash < 0) continue;
        use.slash_pos = slash;
      }
      MoveResult direct;
      try {
        direct = apply_mirror_move(em, use);
      } catch (const Error&) {
        continue;
      }
      int t = mirror_move_type(use) == 0 ? 1 + cases % 2 : mirror_move_type(use);
      ScriptResult sr;
      try {
        sr = decompose_move(em, use, t);
      } catch (const Error& e) {
        FAIL_CHECK("decompose failed: " << std::string(e.what()));
        continue;
      }
      for (const auto& step : sr.script) {
        int st = mirror_move_type(step);
        CHECK((st == t || (use.kind == MirrorMove::Kind::Jump && step.kind == MirrorMove::Kind::Jump)));
      }
      CHECK(canonical_form(sr.result.m) == canonical_form(direct.diagram.m));
      NeatReport rep = check_neat(em, sr.script, {});
      CHECK(rep.replay_ok);
      cases++;
      break;
    }
  }
  CHECK(cases == 200);
}

TEST_CASE("generalized splits replay with the successor counts") {
  std::mt19937 rng(888);
  int cases = 0;
  long guard = 0;
  while (cases < 60 && guard++ < 3000) {
    MirrorDiagram m = random_mirror(rng, 3 + cases % 3, 3 + (cases / 3) % 3, 0.5);
    EnhancedMirrorDiagram em{m, {}};
    FlexReport rep = flexibility_and_negligibility(em, {});
    if (rep.plus_witness.empty()) continue;
    auto it = rep.plus_witness.begin();
    std::advance(it, static_cast<long>(rng() % rep.plus_witness.size()));
    SplittingRoute route = it->second;
    ScriptResult sr;
    try {
      sr = generalized_split(em, route);
    } catch (const Error& e) {
      FAIL_CHECK("generalized split failed: " << std::string(e.what()));
      continue;
    }
    // successor counts: 1 + multiplicity in the route
    std::map<GridPoint, std::vector<GridPoint>> total;
    for (const auto& [p, t] : em.m.mirrors) total[p] = {p};
    EnhancedMirrorDiagram cur = em;
    for (const auto& mv : sr.script) {
      MoveResult res = apply_mirror_move(cur, mv);
      std::map<GridPoint, std::vector<GridPoint>> next;
      for (auto& [orig, list] : total)
        for (auto& q : list) {
          auto f = res.mirror_succ.find(q);
          if (f == res.mirror_succ.end()) continue;
          for (auto& s : f->second) next[orig].push_back(s);
        }
      total = std::move(next);
      cur = res.diagram;
    }
    for (const auto& [p, t] : em.m.mirrors) {
      size_t mult = 0;
      for (const auto& q : route.mirrors)
        if (q == p) mult++;
      CHECK(total.at(p).size() == 1 + mult);
    }
    cases++;
  }
  CHECK(cases == 60);
}

TEST_CASE("move and inverse round trips on canonical forms") {
  std::mt19937 rng(1212);
  int cases = 0;
  long guard = 0;
  while (cases < 200 && guard++ < 4000) {
    MirrorDiagram m = random_mirror(rng, 3, 3, 0.5);
    EnhancedMirrorDiagram em{m, {}};
    // extension/elimination pair at a random spot
    MirrorMove ext;
    ext.kind = MirrorMove::Kind::Extension;
    ext.axis = cases % 2 ? LevelAxis::Vertical : LevelAxis::Horizontal;
    ext.gap = static_cast<int>(rng() % 4);
    ext.host = static_cast<int>(rng() % 3);
    ext.mtype = cases % 4 < 2 ? DiagType::Slash : DiagType::Back;
    MoveResult r1;
    try {
      r1 = apply_mirror_move(em, ext);
    } catch (const Error&) {
      continue;
    }
    MirrorMove elim;
    elim.kind = MirrorMove::Kind::Elimination;
    elim.axis = ext.axis;
    elim.level = ext.gap;
    elim.mtype = ext.mtype;
    MoveResult r2 = apply_mirror_move(r1.diagram, elim);
    CHECK(canonical_form(r2.diagram.m) == canonical_form(em.m));
    cases++;
  }
  CHECK(cases == 200);
}

TEST_CASE("extracted codes are invariant under surface exchanges") {
  std::mt19937 rng(2024);
  int cases = 0;
  long guard = 0;
  while (cases < 40 && guard++ < 400) {
    SurfaceDiagram pi = random_surface(rng, 2 + cases % 3);
    DividingCode c0 = extract_code(pi);
    bool used = false;
    for (int g1 = 0; g1 < pi.cols && !used; ++g1)
      for (int span1 = 1; span1 < 3 && !used; ++span1)
        for (int span2 = 1; span2 < 3 && !used; ++span2)
          for (int k1 = 0; k1 < pi.rows && !used; ++k1)
            for (int k2 = 0; k2 < pi.rows && !used; ++k2) {
              SurfaceMove mv;
              mv.kind = SurfaceMove::Kind::Exchange;
              mv.axis = LevelAxis::Vertical;
              mv.g1 = g1;
              mv.g2 = mod(g1 + span1, pi.cols);
              mv.g3 = mod(g1 + span1 + span2, pi.cols);
              mv.k1 = k1;
              mv.k2 = k2;
              try {
                SurfaceDiagram out = apply_surface_move(pi, mv);
                if (canonical_form(out) == canonical_form(pi)) continue;
                DividingCode c1 = extract_code(out);
                CHECK(code_isomorphic(c0, c1).has_value());
                used = true;
                cases++;
              } catch (const Error&) {
              }
            }
  }
  CHECK(cases >= 20);
}
