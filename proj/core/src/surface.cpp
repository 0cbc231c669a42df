#include "gridsurf/surface.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

namespace gridsurf {

namespace {

GridPoint corner_pos(const Rect& r, CornerRole c) {
  switch (c) {
    case CornerRole::BL: return {r.vl, r.hb};
    case CornerRole::BR: return {r.vr, r.hb};
    case CornerRole::TR: return {r.vr, r.ht};
    case CornerRole::TL: return {r.vl, r.ht};
  }
  return {};
}

constexpr CornerRole kRoles[4] = {CornerRole::BL, CornerRole::BR, CornerRole::TR,
                                  CornerRole::TL};

bool paired_roles(CornerRole a, CornerRole b) {
  return (a == CornerRole::BL && b == CornerRole::TR) ||
         (a == CornerRole::TR && b == CornerRole::BL) ||
         (a == CornerRole::BR && b == CornerRole::TL) ||
         (a == CornerRole::TL && b == CornerRole::BR);
}

}  // namespace

SurfaceInfo validate_surface(const SurfaceDiagram& pi) {
  if (pi.cols <= 0 || pi.rows <= 0 || pi.rects.empty()) throw Error("empty diagram");
  for (const auto& r : pi.rects) {
    if (r.vl < 0 || r.vl >= pi.cols || r.vr < 0 || r.vr >= pi.cols || r.hb < 0 ||
        r.hb >= pi.rows || r.ht < 0 || r.ht >= pi.rows)
      throw Error("rectangle out of range");
    if (r.vl == r.vr || r.hb == r.ht) throw Error("degenerate rectangle side");
  }

  SurfaceInfo info;
  // Vertex census with the corner-pairing rules.
  std::map<GridPoint, std::vector<std::pair<int, CornerRole>>> at;
  for (int i = 0; i < static_cast<int>(pi.rects.size()); ++i)
    for (CornerRole c : kRoles) at[corner_pos(pi.rects[static_cast<size_t>(i)], c)].push_back({i, c});
  for (auto& [pos, owners] : at) {
    if (owners.size() > 2) throw Error("multiplicity > 2 at a corner");
    VertexRecord rec;
    rec.pos = pos;
    rec.type = corner_type(owners[0].second);
    rec.multiplicity = static_cast<int>(owners.size());
    rec.owner[0] = owners[0].first;
    rec.role[0] = owners[0].second;
    if (owners.size() == 2) {
      if (corner_type(owners[1].second) != rec.type)
        throw Error("type clash at a shared corner");
      if (!paired_roles(owners[0].second, owners[1].second))
        throw Error("2-dimensional corner intersection");
      rec.owner[1] = owners[1].first;
      rec.role[1] = owners[1].second;
    }
    info.vertex_index[pos] = static_cast<int>(info.vertices.size());
    info.vertices.push_back(rec);
    if (rec.multiplicity == 1) info.boundary_vertices++;
  }

  // No vertex may lie on a closed rectangle except at one of its corners.
  for (const auto& rec : info.vertices) {
    for (int i = 0; i < static_cast<int>(pi.rects.size()); ++i) {
      const Rect& r = pi.rects[static_cast<size_t>(i)];
      if (rec.owner[0] == i || rec.owner[1] == i) continue;
      if (in_closed_arc(r.vl, r.vr, rec.pos.v, pi.cols) &&
          in_closed_arc(r.hb, r.ht, rec.pos.h, pi.rows))
        throw Error("corner-in-interior: vertex on a foreign rectangle");
    }
  }

  // Per-level side chains. A side runs in the positive direction of its
  // level from its lower corner to its upper one; consecutive sides share a
  // multiplicity-2 vertex head-to-tail.
  auto build_chains = [&](LevelAxis axis, std::vector<std::vector<int>>& chains,
                          std::vector<bool>& cyc) {
    int nlev = axis == LevelAxis::Vertical ? pi.cols : pi.rows;
    int span = axis == LevelAxis::Vertical ? pi.rows : pi.cols;
    chains.assign(static_cast<size_t>(nlev), {});
    cyc.assign(static_cast<size_t>(nlev), false);
    struct Side {
      int start_vx, end_vx, len;
    };
    std::vector<std::vector<Side>> sides(static_cast<size_t>(nlev));
    for (const auto& r : pi.rects) {
      auto add = [&](int lvl, GridPoint lo, GridPoint hi) {
        int len = axis == LevelAxis::Vertical ? cyc_dist(lo.h, hi.h, span)
                                              : cyc_dist(lo.v, hi.v, span);
        sides[static_cast<size_t>(lvl)].push_back(
            {info.vertex_index.at(lo), info.vertex_index.at(hi), len});
      };
      if (axis == LevelAxis::Vertical) {
        add(r.vl, {r.vl, r.hb}, {r.vl, r.ht});
        add(r.vr, {r.vr, r.hb}, {r.vr, r.ht});
      } else {
        add(r.hb, {r.vl, r.hb}, {r.vr, r.hb});
        add(r.ht, {r.vl, r.ht}, {r.vr, r.ht});
      }
    };
    for (int lvl = 0; lvl < nlev; ++lvl) {
      auto& ss = sides[static_cast<size_t>(lvl)];
      if (ss.empty()) throw Error("unoccupied level");
      std::map<int, int> out_side, in_count;
      for (int k = 0; k < static_cast<int>(ss.size()); ++k) {
        if (!out_side.emplace(ss[static_cast<size_t>(k)].start_vx, k).second)
          throw Error("side overlap: two sides start at one vertex");
        if (++in_count[ss[static_cast<size_t>(k)].end_vx] > 1)
          throw Error("side overlap: two sides end at one vertex");
      }
      int head = -1;
      for (const auto& s : ss)
        if (in_count.find(s.start_vx) == in_count.end()) {
          if (head >= 0) throw Error("broken level chain: several chain heads");
          head = s.start_vx;
        }
      bool cycle = head < 0;
      if (cycle) {
        // start at the least start-vertex for determinism
        head = out_side.begin()->first;
      }
      std::vector<int> walk{head};
      int total = 0, cur = head;
      for (size_t step = 0; step < ss.size(); ++step) {
        auto it = out_side.find(cur);
        if (it == out_side.end()) throw Error("broken level chain");
        const Side& s = ss[static_cast<size_t>(it->second)];
        total += s.len;
        cur = s.end_vx;
        walk.push_back(cur);
      }
      if (cycle) {
        if (cur != head || total != span) throw Error("broken level chain: not a single cycle");
        walk.pop_back();
      } else {
        if (total >= span) throw Error("side overlap: chain wraps the level");
        if (out_side.count(cur)) throw Error("broken level chain");
      }
      chains[static_cast<size_t>(lvl)] = std::move(walk);
      cyc[static_cast<size_t>(lvl)] = cycle;
    }
  };
  build_chains(LevelAxis::Vertical, info.vchains, info.vcycle);
  build_chains(LevelAxis::Horizontal, info.hchains, info.hcycle);
  return info;
}

namespace detail {

LinkDiagram boundary_diagram(const SurfaceDiagram& pi, const SurfaceInfo& info) {
  std::vector<GridPoint> pts;
  for (const auto& rec : info.vertices)
    if (rec.multiplicity == 1) pts.push_back(rec.pos);
  if (pts.empty()) throw Error("closed surface: empty boundary");
  std::vector<int> vs, hs;
  for (const auto& p : pts) {
    vs.push_back(p.v);
    hs.push_back(p.h);
  }
  std::sort(vs.begin(), vs.end());
  vs.erase(std::unique(vs.begin(), vs.end()), vs.end());
  std::sort(hs.begin(), hs.end());
  hs.erase(std::unique(hs.begin(), hs.end()), hs.end());
  LinkDiagram R;
  R.cols = static_cast<int>(vs.size());
  R.rows = static_cast<int>(hs.size());
  for (const auto& p : pts) {
    int v = static_cast<int>(std::lower_bound(vs.begin(), vs.end(), p.v) - vs.begin());
    int h = static_cast<int>(std::lower_bound(hs.begin(), hs.end(), p.h) - hs.begin());
    R.vertices.push_back({v, h});
  }
  std::sort(R.vertices.begin(), R.vertices.end());
  validate_link(R);
  return R;
}

std::vector<int> boundary_level_map(const SurfaceDiagram& pi, const SurfaceInfo& info,
                                    LevelAxis axis) {
  std::vector<int> lvls;
  for (const auto& rec : info.vertices)
    if (rec.multiplicity == 1)
      lvls.push_back(axis == LevelAxis::Vertical ? rec.pos.v : rec.pos.h);
  std::sort(lvls.begin(), lvls.end());
  lvls.erase(std::unique(lvls.begin(), lvls.end()), lvls.end());
  return lvls;
}

}  // namespace detail

SurfaceClass classify_surface(const SurfaceDiagram& pi) {
  SurfaceInfo info = validate_surface(pi);
  SurfaceClass out;
  out.rect_count = static_cast<int>(pi.rects.size());
  out.vertex_count = static_cast<int>(info.vertices.size());
  out.level_count = pi.cols + pi.rows;
  out.euler = out.rect_count - out.vertex_count + out.level_count;

  // Independent recount from the glued tile complex: edge orbits come from
  // the corner pairing, node orbits from walking the side chains.
  {
    int edge_orbits = 0;
    for (const auto& rec : info.vertices) edge_orbits += 1;
    int node_orbits = 0;
    for (const auto& c : info.vchains)
      if (!c.empty()) node_orbits++;
    for (const auto& c : info.hchains)
      if (!c.empty()) node_orbits++;
    out.euler_complex = out.rect_count - edge_orbits + node_orbits;
  }

  // Orientability: two tiles sharing a corner always traverse the shared
  // edge of the complex in the same direction in the torus chart, so a
  // coherent orientation must alternate across every adjacency.
  {
    int n = out.rect_count;
    std::vector<int> color(static_cast<size_t>(n), -1);
    std::vector<std::vector<int>> adj(static_cast<size_t>(n));
    for (const auto& rec : info.vertices)
      if (rec.multiplicity == 2) {
        adj[static_cast<size_t>(rec.owner[0])].push_back(rec.owner[1]);
        adj[static_cast<size_t>(rec.owner[1])].push_back(rec.owner[0]);
      }
    out.orientable = true;
    for (int s = 0; s < n; ++s) {
      if (color[static_cast<size_t>(s)] >= 0) continue;
      color[static_cast<size_t>(s)] = 0;
      std::vector<int> stack{s};
      while (!stack.empty()) {
        int u = stack.back();
        stack.pop_back();
        for (int w : adj[static_cast<size_t>(u)]) {
          if (color[static_cast<size_t>(w)] < 0) {
            color[static_cast<size_t>(w)] = 1 - color[static_cast<size_t>(u)];
            stack.push_back(w);
          } else if (color[static_cast<size_t>(w)] == color[static_cast<size_t>(u)]) {
            out.orientable = false;
          }
        }
      }
    }
  }

  out.boundary_components =
      info.boundary_vertices == 0
          ? 0
          : static_cast<int>(link_components(detail::boundary_diagram(pi, info)).size());

  int b = out.boundary_components;
  if (out.orientable) {
    out.genus = (2 - out.euler - b) / 2;
  } else {
    out.genus = 2 - out.euler - b;  // crosscap number
  }
  return out;
}

std::vector<Bigon> detect_bigons(const SurfaceDiagram& pi) {
  SurfaceInfo info = validate_surface(pi);
  // plus adjacency x->y: TR_x = BL_y; minus adjacency x->y: TL_x = BR_y.
  struct Adj {
    int from, to;
    GridPoint pos;
  };
  std::vector<Adj> plus, minus;
  for (const auto& rec : info.vertices) {
    if (rec.multiplicity != 2) continue;
    if (rec.type == DiagType::Back) {
      int x = rec.role[0] == CornerRole::TR ? rec.owner[0] : rec.owner[1];
      int y = rec.role[0] == CornerRole::TR ? rec.owner[1] : rec.owner[0];
      plus.push_back({x, y, rec.pos});
    } else {
      int x = rec.role[0] == CornerRole::TL ? rec.owner[0] : rec.owner[1];
      int y = rec.role[0] == CornerRole::TL ? rec.owner[1] : rec.owner[0];
      minus.push_back({x, y, rec.pos});
    }
  }
  auto level_has_boundary = [&](LevelAxis axis, int lvl) {
    for (const auto& rec : info.vertices)
      if (rec.multiplicity == 1 &&
          (axis == LevelAxis::Vertical ? rec.pos.v : rec.pos.h) == lvl)
        return true;
    return false;
  };
  std::vector<Bigon> bigons;
  for (const auto& p : plus)
    for (const auto& m : minus) {
      bool same_pair = (p.from == m.from && p.to == m.to) ||
                       (p.from == m.to && p.to == m.from);
      if (!same_pair) continue;
      Bigon b;
      b.rect_a = p.from;
      b.rect_b = p.to;
      b.shared_back = p.pos;
      b.shared_slash = m.pos;
      const Rect& ra = pi.rects[static_cast<size_t>(b.rect_a)];
      const Rect& rb = pi.rects[static_cast<size_t>(b.rect_b)];
      bool both_boundary;
      if (p.pos.v == m.pos.v) {
        int x = p.pos.v;
        int pa = ra.vl == x ? ra.vr : ra.vl;
        int pb = rb.vl == x ? rb.vr : rb.vl;
        both_boundary = level_has_boundary(LevelAxis::Vertical, pa) &&
                        level_has_boundary(LevelAxis::Vertical, pb);
      } else if (p.pos.h == m.pos.h) {
        int y = p.pos.h;
        int pa = ra.hb == y ? ra.ht : ra.hb;
        int pb = rb.hb == y ? rb.ht : rb.hb;
        both_boundary = level_has_boundary(LevelAxis::Horizontal, pa) &&
                        level_has_boundary(LevelAxis::Horizontal, pb);
      } else {
        throw Error("bigon shared vertices on no common level");
      }
      b.reducible_admissibly = !both_boundary;
      bigons.push_back(b);
    }
  return bigons;
}

SurfaceDiagram apply_symmetry(const SurfaceDiagram& pi, Symmetry s) {
  SurfaceDiagram out;
  auto nv = [&](int v) { return pi.cols - 1 - v; };
  auto nh = [&](int h) { return pi.rows - 1 - h; };
  switch (s) {
    case Symmetry::ReflectH:
      out.cols = pi.cols;
      out.rows = pi.rows;
      for (const auto& r : pi.rects) out.rects.push_back({r.vl, r.vr, nh(r.ht), nh(r.hb)});
      break;
    case Symmetry::ReflectV:
      out.cols = pi.cols;
      out.rows = pi.rows;
      for (const auto& r : pi.rects) out.rects.push_back({nv(r.vr), nv(r.vl), r.hb, r.ht});
      break;
    case Symmetry::Transpose:
      out.cols = pi.rows;
      out.rows = pi.cols;
      for (const auto& r : pi.rects) out.rects.push_back({r.hb, r.ht, r.vl, r.vr});
      break;
    case Symmetry::AntiTranspose:
      out.cols = pi.rows;
      out.rows = pi.cols;
      for (const auto& r : pi.rects)
        out.rects.push_back({nh(r.ht), nh(r.hb), nv(r.vr), nv(r.vl)});
      break;
  }
  return out;
}

std::string canonical_form(const SurfaceDiagram& pi) {
  std::string best;
  std::vector<Rect> rs(pi.rects.size());
  for (int rv = 0; rv < pi.cols; ++rv) {
    for (int rh = 0; rh < pi.rows; ++rh) {
      for (size_t i = 0; i < pi.rects.size(); ++i) {
        const Rect& r = pi.rects[i];
        rs[i] = {mod(r.vl + rv, pi.cols), mod(r.vr + rv, pi.cols), mod(r.hb + rh, pi.rows),
                 mod(r.ht + rh, pi.rows)};
      }
      std::sort(rs.begin(), rs.end());
      std::ostringstream os;
      os << "surface " << pi.cols << ' ' << pi.rows;
      for (const auto& r : rs) os << ' ' << r.vl << ' ' << r.vr << ' ' << r.hb << ' ' << r.ht;
      std::string s = os.str();
      if (best.empty() || s < best) best = std::move(s);
    }
  }
  return best;
}

std::string canonical_form_unlabeled(const SurfaceDiagram& pi) { return canonical_form(pi); }

// --- moves ------------------------------------------------------------------

namespace {

// Side classification for the wrinkle family: does the side arc [lo;hi] lie
// within the closed arc [a;b]?
bool span_within(int a, int b, int lo, int hi, int n) {
  return in_closed_arc(a, b, lo, n) && in_closed_arc(a, b, hi, n) &&
         cyc_dist(a, lo, n) <= cyc_dist(a, hi, n);
}

// Vertical wrinkle creation at meridian x with the backslash vertex at height
// h1 and the slash vertex at height h2. Returns the new diagram; the two new
// rectangles are appended at the end of the list. `validate_input` is off
// when a stabilization calls in with a freshly inserted (still unoccupied)
// transverse level.
SurfaceDiagram wrinkle_core(const SurfaceDiagram& pi, int x, int h1, int h2,
                            bool require_back, bool require_slash,
                            bool validate_input = true) {
  if (validate_input) validate_surface(pi);
  auto type_at = [&](GridPoint g) -> std::optional<DiagType> {
    std::optional<DiagType> found;
    for (const auto& r : pi.rects)
      for (CornerRole c : kRoles)
        if (corner_pos(r, c) == g) {
          if (found && *found != corner_type(c)) return std::nullopt;
          found = corner_type(c);
        }
    return found;
  };
  if (require_back) {
    auto t = type_at({x, h1});
    if (!t || *t != DiagType::Back) throw Error("wrinkle: no backslash vertex at the site");
  }
  if (require_slash) {
    auto t = type_at({x, h2});
    if (!t || *t != DiagType::Slash) throw Error("wrinkle: no slash vertex at the site");
  }
  SurfaceDiagram out;
  out.cols = pi.cols + 2;
  out.rows = pi.rows;
  auto shift = [&](int v) { return v > x ? v + 2 : v; };
  for (const auto& r : pi.rects) {
    Rect nr{shift(r.vl), shift(r.vr), r.hb, r.ht};
    auto place = [&]() -> int {
      // group RIGHT -> x+2, group LEFT -> x
      if (span_within(h1, h2, r.hb, r.ht, pi.rows)) return x + 2;
      if (span_within(h2, h1, r.hb, r.ht, pi.rows)) return x;
      throw Error("wrinkle: side spans across the cut");
    };
    if (r.vl == x) nr.vl = place();
    if (r.vr == x) nr.vr = place();
    out.rects.push_back(nr);
  }
  out.rects.push_back({x, x + 1, h1, h2});
  out.rects.push_back({x + 1, x + 2, h2, h1});
  validate_surface(out);
  return out;
}

// Half-wrinkle creation: both marked vertices lie on the boundary and one
// side of the level carries no rectangle sides; only the rectangle on the
// occupied side is attached.
SurfaceDiagram half_wrinkle_core(const SurfaceDiagram& pi, int x, int h1, int h2) {
  SurfaceInfo info = validate_surface(pi);
  auto check_boundary = [&](GridPoint g, DiagType want) {
    auto it = info.vertex_index.find(g);
    if (it == info.vertex_index.end()) throw Error("half-wrinkle: no vertex at the site");
    const VertexRecord& rec = info.vertices[static_cast<size_t>(it->second)];
    if (rec.type != want) throw Error("half-wrinkle: wrong vertex type at the site");
    if (rec.multiplicity != 1) throw Error("half-wrinkle: vertex not on the boundary");
  };
  check_boundary({x, h1}, DiagType::Back);
  check_boundary({x, h2}, DiagType::Slash);
  bool bank1_used = false, bank2_used = false;  // sides within [h1;h2] / [h2;h1]
  for (const auto& r : pi.rects) {
    if (r.vl != x && r.vr != x) continue;
    if (span_within(h1, h2, r.hb, r.ht, pi.rows)) bank1_used = true;
    else if (span_within(h2, h1, r.hb, r.ht, pi.rows)) bank2_used = true;
    else throw Error("half-wrinkle: side spans across the cut");
  }
  if (bank1_used && bank2_used)
    throw Error("half-wrinkle: both banks carry sides, use a wrinkle");
  if (!bank1_used && !bank2_used) throw Error("half-wrinkle: level carries no sides");

  SurfaceDiagram out;
  out.cols = pi.cols + 1;
  out.rows = pi.rows;
  if (bank2_used) {
    // the [h1;h2] bank is free: attach [x; x+1] x [h1;h2] on the right,
    // bank-2 sides stay at x
    auto shift = [&](int v) { return v > x ? v + 1 : v; };
    for (const auto& r : pi.rects) out.rects.push_back({shift(r.vl), shift(r.vr), r.hb, r.ht});
    out.rects.push_back({x, x + 1, h1, h2});
  } else {
    // mirror image: attach [x; x+1] x [h2;h1] with bank-1 sides moving right
    auto shift = [&](int v) { return v >= x ? v + 1 : v; };
    for (const auto& r : pi.rects) out.rects.push_back({shift(r.vl), shift(r.vr), r.hb, r.ht});
    out.rects.push_back({x, x + 1, h2, h1});
  }
  validate_surface(out);
  return out;
}

// Inverse: retract a thin rectangle one of whose vertical sides carries the
// whole chain of its level and consists of boundary corners.
SurfaceDiagram half_wrinkle_reduce_core(const SurfaceDiagram& pi, int rect_index) {
  SurfaceInfo info = validate_surface(pi);
  if (rect_index < 0 || rect_index >= static_cast<int>(pi.rects.size()))
    throw Error("half-wrinkle reduction: no such rectangle");
  const Rect r = pi.rects[static_cast<size_t>(rect_index)];
  auto side_is_free = [&](int level) {
    // the side at `level` is the only one there and both corners are boundary
    int sides = 0;
    for (const auto& q : pi.rects) {
      if (q.vl == level) sides++;
      if (q.vr == level) sides++;
    }
    if (sides != 1) return false;
    for (GridPoint g : {GridPoint{level, r.hb}, GridPoint{level, r.ht}}) {
      const VertexRecord& rec =
          info.vertices[static_cast<size_t>(info.vertex_index.at(g))];
      if (rec.multiplicity != 1) return false;
    }
    return true;
  };
  int drop, keep;
  if (side_is_free(r.vl) && mod(r.vr - r.vl, pi.cols) == 1) {
    drop = r.vl;
    keep = r.vr;
  } else if (side_is_free(r.vr) && mod(r.vr - r.vl, pi.cols) == 1) {
    drop = r.vr;
    keep = r.vl;
  } else {
    throw Error("half-wrinkle reduction: rectangle has no free thin side");
  }
  (void)keep;
  SurfaceDiagram out;
  out.cols = pi.cols - 1;
  out.rows = pi.rows;
  auto shift = [&](int v) { return v > drop ? v - 1 : v; };
  for (int i = 0; i < static_cast<int>(pi.rects.size()); ++i) {
    if (i == rect_index) continue;
    const Rect& q = pi.rects[static_cast<size_t>(i)];
    out.rects.push_back({shift(q.vl), shift(q.vr), q.hb, q.ht});
  }
  // drop rows that became empty (none expected: the other corners persist)
  validate_surface(out);
  return out;
}

// Shared merge core for wrinkle reduction and destabilization: deletes the
// thin pair (ra, rb), merges their three meridians into one, and drops any
// level that becomes empty. Returns the new diagram, teh number of emptied
// transverse levels and their heights.
struct MergeOut {
  SurfaceDiagram diagram;
  std::vector<int> emptied_rows;  // heights (old indices) that became empty
};

MergeOut merge_pair_vertical(const SurfaceDiagram& pi, int ia, int ib) {
  const Rect a = pi.rects[static_cast<size_t>(ia)];
  const Rect b = pi.rects[static_cast<size_t>(ib)];
  // a = [ta;tb]x[f1;f2], b = [tb;tc]x[f2;f1]
  if (a.vr != b.vl || a.ht != b.hb || a.hb != b.ht)
    throw Error("wrinkle reduction: not a thin complementary pair");
  int ta = a.vl, tb = a.vr, tc = b.vr;
  if (mod(tb - ta, pi.cols) != 1 || mod(tc - tb, pi.cols) != 1)
    throw Error("wrinkle reduction: rectangles are not thin");
  if (tc == ta) throw Error("inadmissible: reduction collapses the diagram");

  // Merge ta,tb,tc -> single meridian; tb carried only the pair's sides.
  SurfaceDiagram mid;
  mid.rows = pi.rows;
  mid.cols = pi.cols - 2;
  // Explicit old->new level map: delete tb and tc, redirect tc->ta.
  std::vector<int> vmap(static_cast<size_t>(pi.cols), -1);
  {
    int next = 0;
    for (int v = 0; v < pi.cols; ++v) {
      if (v == tb || v == tc) continue;
      vmap[static_cast<size_t>(v)] = next++;
    }
    vmap[static_cast<size_t>(tc)] = vmap[static_cast<size_t>(ta)];
    vmap[static_cast<size_t>(tb)] = -1;
  }
  for (int i = 0; i < static_cast<int>(pi.rects.size()); ++i) {
    if (i == ia || i == ib) continue;
    const Rect& r = pi.rects[static_cast<size_t>(i)];
    if (vmap[static_cast<size_t>(r.vl)] < 0 || vmap[static_cast<size_t>(r.vr)] < 0)
      throw Error("wrinkle reduction: stray side on the middle meridian");
    mid.rects.push_back({vmap[static_cast<size_t>(r.vl)], vmap[static_cast<size_t>(r.vr)], r.hb, r.ht});
  }
  if (mid.rects.empty()) throw Error("inadmissible: reduction collapses the diagram");

  // Drop rows that became empty.
  std::vector<bool> used(static_cast<size_t>(pi.rows), false);
  for (const auto& r : mid.rects) {
    used[static_cast<size_t>(r.hb)] = true;
    used[static_cast<size_t>(r.ht)] = true;
  }
  MergeOut out;
  std::vector<int> hmap(static_cast<size_t>(pi.rows), -1);
  int next = 0;
  for (int h = 0; h < pi.rows; ++h) {
    if (used[static_cast<size_t>(h)]) hmap[static_cast<size_t>(h)] = next++;
    else out.emptied_rows.push_back(h);
  }
  out.diagram.cols = mid.cols;
  out.diagram.rows = next;
  for (const auto& r : mid.rects)
    out.diagram.rects.push_back(
        {r.vl, r.vr, hmap[static_cast<size_t>(r.hb)], hmap[static_cast<size_t>(r.ht)]});
  try {
    validate_surface(out.diagram);
  } catch (const Error& e) {
    throw Error(std::string("inadmissible: ") + e.what());
  }
  return out;
}

// Finds the canonical (ra, rb) ordering for a thin pair in either axis and
// dispatches through the transpose conjugation when the shared level is
// horizontal. `want_empty_rows`: 0 for wrinkle reduction, 1 for destab.
SurfaceDiagram merge_pair(const SurfaceDiagram& pi, int ia, int ib, int want_emptied,
                          int* out_stab_type) {
  const Rect& a = pi.rects[static_cast<size_t>(ia)];
  const Rect& b = pi.rects[static_cast<size_t>(ib)];
  bool vertical_shared = a.vr == b.vl && a.ht == b.hb && a.hb == b.ht;
  bool vertical_shared_rev = b.vr == a.vl && b.ht == a.hb && b.hb == a.ht;
  SurfaceDiagram result;
  std::vector<int> emptied;
  if (vertical_shared || vertical_shared_rev) {
    int x = vertical_shared ? ia : ib, y = vertical_shared ? ib : ia;
    MergeOut mo = merge_pair_vertical(pi, x, y);
    result = std::move(mo.diagram);
    emptied = std::move(mo.emptied_rows);
  } else {
    // transpose-conjugate: shared level horizontal
    SurfaceDiagram t = apply_symmetry(pi, Symmetry::Transpose);
    const Rect& ta = t.rects[static_cast<size_t>(ia)];
    const Rect& tb = t.rects[static_cast<size_t>(ib)];
    int x, y;
    if (ta.vr == tb.vl && ta.ht == tb.hb && ta.hb == tb.ht) {
      x = ia; y = ib;
    } else if (tb.vr == ta.vl && tb.ht == ta.hb && tb.hb == ta.ht) {
      x = ib; y = ia;
    } else {
      throw Error("wrinkle reduction: pair is not complementary");
    }
    MergeOut mo = merge_pair_vertical(t, x, y);
    result = apply_symmetry(mo.diagram, Symmetry::Transpose);
    emptied = std::move(mo.emptied_rows);
  }
  if (static_cast<int>(emptied.size()) != want_emptied)
    throw Error(want_emptied == 0 ? "site is a destabilization, not a wrinkle"
                                  : "destabilization: no level is freed");
  if (out_stab_type) {
    // The emptied level carried the fresh vertex of the stabilization. Type I
    // frees the level through the shared backslash vertex.
    *out_stab_type = 0;
  }
  return result;
}

SurfaceDiagram do_exchange_surface(const SurfaceDiagram& pi, LevelAxis axis, int g1, int g2,
                                   int g3, int k1, int k2) {
  SurfaceDiagram base = axis == LevelAxis::Vertical ? pi : apply_symmetry(pi, Symmetry::Transpose);
  int n = base.cols, m = base.rows;
  auto in_block = [&](int g_from, int g_to, int lvl) {
    return mod(lvl - g_from, n) < mod(g_to - g_from, n);
  };
  if (mod(g2 - g1, n) == 0 || mod(g3 - g2, n) == 0 || mod(g3 - g1, n) == 0 ||
      mod(g2 - g1, n) + mod(g3 - g2, n) != mod(g3 - g1, n))
    throw Error("exchange: cut gaps not in cyclic position");
  auto in_arc_levels = [&](int k_from, int k_to, int lvl) {
    return mod(lvl - k_from, m) < mod(k_to - k_from, m);
  };
  SurfaceInfo info = validate_surface(base);
  for (const auto& rec : info.vertices) {
    if (in_block(g1, g2, rec.pos.v) && in_arc_levels(k1, k2, rec.pos.h))
      throw Error("exchange: first rectangle not empty");
    if (in_block(g2, g3, rec.pos.v) && in_arc_levels(k2, k1, rec.pos.h))
      throw Error("exchange: second rectangle not empty");
  }
  for (int g : {g1, g2, g3})
    for (int k : {k1, k2})
      for (const auto& r : base.rects)
        if (arc_crosses_gap(r.vl, r.vr, g, n) && arc_crosses_gap(r.hb, r.ht, k, m))
          throw Error("exchange: cut corner lies on a rectangle");

  int asz = mod(g2 - g1, n), bsz = mod(g3 - g2, n);
  std::vector<int> vmap(static_cast<size_t>(n));
  for (int v = 0; v < n; ++v) vmap[static_cast<size_t>(v)] = v;
  for (int t = 0; t < asz; ++t)
    vmap[static_cast<size_t>(mod(g1 + t, n))] = mod(g1 + bsz + t, n);
  for (int t = 0; t < bsz; ++t) vmap[static_cast<size_t>(mod(g2 + t, n))] = mod(g1 + t, n);
  SurfaceDiagram out;
  out.cols = n;
  out.rows = m;
  for (const auto& r : base.rects)
    out.rects.push_back({vmap[static_cast<size_t>(r.vl)], vmap[static_cast<size_t>(r.vr)], r.hb, r.ht});
  validate_surface(out);
  return axis == LevelAxis::Vertical ? out : apply_symmetry(out, Symmetry::Transpose);
}

SurfaceDiagram do_stabilize_surface(const SurfaceDiagram& pi, int stab_type, LevelAxis axis,
                                    int level, int h1, int gap) {
  SurfaceDiagram base = axis == LevelAxis::Vertical ? pi : apply_symmetry(pi, Symmetry::Transpose);
  int x = axis == LevelAxis::Vertical ? level : level;
  // Insert the fresh transverse level at `gap` (rows circle of the base).
  SurfaceDiagram grown;
  grown.cols = base.cols;
  grown.rows = base.rows + 1;
  auto shift = [&](int h) { return h >= gap ? h + 1 : h; };
  for (const auto& r : base.rects) grown.rects.push_back({r.vl, r.vr, shift(r.hb), shift(r.ht)});
  int fresh = gap;
  int pos1 = shift(h1);
  SurfaceDiagram out;
  if (stab_type == 1) {
    out = wrinkle_core(grown, x, pos1, fresh, /*require_back=*/true, /*require_slash=*/false,
                       /*validate_input=*/false);
  } else if (stab_type == 2) {
    out = wrinkle_core(grown, x, fresh, pos1, /*require_back=*/false, /*require_slash=*/true,
                       /*validate_input=*/false);
  } else {
    throw Error("stabilization type must be 1 or 2");
  }
  return axis == LevelAxis::Vertical ? out : apply_symmetry(out, Symmetry::Transpose);
}

SurfaceDiagram do_flype(const SurfaceDiagram& pi, int flype_type, int t1, int t2, int t3,
                        int f1, int f2, int f3) {
  SurfaceDiagram base = flype_type == 1 ? pi : apply_symmetry(pi, Symmetry::ReflectV);
  if (flype_type == 2) {
    t1 = pi.cols - 1 - t1;
    t2 = pi.cols - 1 - t2;
    t3 = pi.cols - 1 - t3;
  }
  SurfaceInfo info = validate_surface(base);
  if (!in_open_arc(t1, t3, t2, base.cols) || !in_open_arc(f1, f3, f2, base.rows))
    throw Error("flype: levels not in cyclic position");
  auto vx = [&](int v, int h) -> const VertexRecord& {
    auto it = info.vertex_index.find({v, h});
    if (it == info.vertex_index.end()) throw Error("flype: missing vertex");
    return info.vertices[static_cast<size_t>(it->second)];
  };
  const VertexRecord& v1 = vx(t1, f3);
  const VertexRecord& v2 = vx(t2, f3);
  const VertexRecord& v3 = vx(t3, f3);
  const VertexRecord& v4 = vx(t3, f2);
  const VertexRecord& v5 = vx(t3, f1);
  if (v1.type != DiagType::Slash || v3.type != DiagType::Slash || v5.type != DiagType::Slash ||
      v2.type != DiagType::Back || v4.type != DiagType::Back)
    throw Error("flype: vertex types do not match the pattern");
  if (v2.multiplicity != 2 || v3.multiplicity != 2 || v4.multiplicity != 2)
    throw Error("flype: interior vertices lie on the boundary");
  for (const auto& rec : info.vertices) {
    bool listed = (rec.pos == GridPoint{t1, f3}) || (rec.pos == GridPoint{t2, f3}) ||
                  (rec.pos == GridPoint{t3, f3}) || (rec.pos == GridPoint{t3, f2}) ||
                  (rec.pos == GridPoint{t3, f1});
    if (!listed && in_closed_arc(t1, t3, rec.pos.v, base.cols) &&
        in_closed_arc(f1, f3, rec.pos.h, base.rows))
      throw Error("flype: extra vertex in the region");
  }
  auto find_rect = [&](auto pred) -> int {
    for (int i = 0; i < static_cast<int>(base.rects.size()); ++i)
      if (pred(base.rects[static_cast<size_t>(i)])) return i;
    throw Error("flype: pattern rectangle not found");
  };
  int i1 = find_rect([&](const Rect& r) { return r.vl == t1 && r.vr == t2 && r.ht == f3; });
  int i2 = find_rect([&](const Rect& r) { return r.vl == t2 && r.vr == t3 && r.hb == f3; });
  int i3 = find_rect([&](const Rect& r) { return r.vl == t3 && r.hb == f2 && r.ht == f3; });
  int i4 = find_rect([&](const Rect& r) { return r.vr == t3 && r.hb == f1 && r.ht == f2; });
  SurfaceDiagram out = base;
  out.rects[static_cast<size_t>(i1)].ht = f1;  // r1' = [t1;t2]x[f';f1]
  out.rects[static_cast<size_t>(i2)].hb = f1;  // r2' = [t2;t3]x[f1;f'']
  out.rects[static_cast<size_t>(i3)].vl = t1;  // r3' = [t1;t'']x[f2;f3]
  out.rects[static_cast<size_t>(i4)].vr = t1;  // r4' = [t';t1]x[f1;f2]
  validate_surface(out);
  return flype_type == 1 ? out : apply_symmetry(out, Symmetry::ReflectV);
}

}  // namespace

SurfaceDiagram apply_surface_move(const SurfaceDiagram& pi, const SurfaceMove& mv) {
  switch (mv.kind) {
    case SurfaceMove::Kind::WrinkleCreate: {
      if (mv.axis == LevelAxis::Vertical)
        return wrinkle_core(pi, mv.level, mv.h1, mv.h2, true, true);
      SurfaceDiagram t = apply_symmetry(pi, Symmetry::Transpose);
      return apply_symmetry(wrinkle_core(t, mv.level, mv.h1, mv.h2, true, true),
                            Symmetry::Transpose);
    }
    case SurfaceMove::Kind::WrinkleReduce:
      return merge_pair(pi, mv.rect_a, mv.rect_b, 0, nullptr);
    case SurfaceMove::Kind::HalfWrinkleCreate: {
      if (mv.axis == LevelAxis::Vertical) return half_wrinkle_core(pi, mv.level, mv.h1, mv.h2);
      SurfaceDiagram t = apply_symmetry(pi, Symmetry::Transpose);
      return apply_symmetry(half_wrinkle_core(t, mv.level, mv.h1, mv.h2), Symmetry::Transpose);
    }
    case SurfaceMove::Kind::HalfWrinkleReduce: {
      try {
        return half_wrinkle_reduce_core(pi, mv.rect_a);
      } catch (const Error&) {
        SurfaceDiagram t = apply_symmetry(pi, Symmetry::Transpose);
        return apply_symmetry(half_wrinkle_reduce_core(t, mv.rect_a), Symmetry::Transpose);
      }
    }
    case SurfaceMove::Kind::Destabilize:
      return merge_pair(pi, mv.rect_a, mv.rect_b, 1, nullptr);
    case SurfaceMove::Kind::Stabilize:
      return do_stabilize_surface(pi, mv.stab_type, mv.axis, mv.level, mv.h1, mv.gap);
    case SurfaceMove::Kind::Exchange:
      return do_exchange_surface(pi, mv.axis, mv.g1, mv.g2, mv.g3, mv.k1, mv.k2);
    case SurfaceMove::Kind::Flype:
      return do_flype(pi, mv.flype_type, mv.t1, mv.t2, mv.t3, mv.f1, mv.f2, mv.f3);
  }
  throw Error("unknown surface move");
}

BigonReduction reduce_bigon(const SurfaceDiagram& pi, const Bigon& bigon) {
  if (!bigon.reducible_admissibly) throw Error("inadmissible bigon reduction");
  bool vertical_shared = bigon.shared_back.v == bigon.shared_slash.v;
  // Work in the chart where the shared level is a meridian.
  SurfaceDiagram cur = pi;
  BigonReduction out;
  auto conj = [&](SurfaceMove mv) { return mv; };
  (void)conj;

  // Helper re-deriving the pair geometry in the current diagram.
  auto pair_geometry = [&](const SurfaceDiagram& d) {
    // returns (ra index, rb index) ordered so that ra's shared corner is TR
    const Rect& a0 = d.rects[static_cast<size_t>(bigon.rect_a)];
    int ia = bigon.rect_a, ib = bigon.rect_b;
    if (vertical_shared) {
      // ra = [ta;tb]x[f1;f2], rb = [tb;tc]x[f2;f1]
      const Rect& rb0 = d.rects[static_cast<size_t>(ib)];
      if (a0.vr == rb0.vl && a0.ht == rb0.hb) return std::pair<int, int>{ia, ib};
      return std::pair<int, int>{ib, ia};
    }
    const Rect& rb0 = d.rects[static_cast<size_t>(ib)];
    if (a0.ht == rb0.hb && a0.vr == rb0.vl && a0.vl == rb0.vr) return std::pair<int, int>{ia, ib};
    return std::pair<int, int>{ib, ia};
  };

  if (!vertical_shared) {
    // Conjugate through the transpose so the shared level is vertical.
    SurfaceDiagram t = apply_symmetry(cur, Symmetry::Transpose);
    Bigon tb = bigon;
    tb.shared_back = {bigon.shared_back.h, bigon.shared_back.v};
    tb.shared_slash = {bigon.shared_slash.h, bigon.shared_slash.v};
    BigonReduction inner = reduce_bigon(t, tb);
    out.result = apply_symmetry(inner.result, Symmetry::Transpose);
    for (auto mv : inner.script) {
      // exchanges and the reduction transpose cleanly
      if (mv.kind == SurfaceMove::Kind::Exchange)
        mv.axis = mv.axis == LevelAxis::Vertical ? LevelAxis::Horizontal : LevelAxis::Vertical;
      out.script.push_back(mv);
    }
    return out;
  }

  auto [ia, ib] = pair_geometry(cur);
  auto spans = [&](const SurfaceDiagram& d) {
    const Rect& a = d.rects[static_cast<size_t>(ia)];
    const Rect& b = d.rects[static_cast<size_t>(ib)];
    return std::array<int, 5>{a.vl, a.vr, b.vr, a.hb, a.ht};  // ta tb tc f1 f2
  };

  // Up to two exchange moves to make both rectangles thin: first move the
  // block strictly between ta and tb past [tb..tc], then move {ta,tb} past
  // the block strictly between tb and tc.
  {
    auto s = spans(cur);
    int ta = s[0], tb = s[1], tc = s[2], f1 = s[3], f2 = s[4];
    int n = cur.cols, m = cur.rows;
    if (mod(tb - ta, n) > 1) {
      SurfaceMove ex;
      ex.kind = SurfaceMove::Kind::Exchange;
      ex.axis = LevelAxis::Vertical;
      ex.g1 = mod(ta + 1, n);       // block I: levels strictly between ta and tb
      ex.g2 = tb;                   // block J: [tb .. tc]
      ex.g3 = mod(tc + 1, n);
      ex.k1 = f1;                   // arc A = [f1..f2): levels f1..f2-1, contains [f1;f2] closed?
      ex.k2 = mod(f2 + 1, m);
      cur = apply_surface_move(cur, ex);
      out.script.push_back(ex);
    }
  }
  {
    auto s = spans(cur);
    int ta = s[0], tb = s[1], tc = s[2], f1 = s[3], f2 = s[4];
    int n = cur.cols, m = cur.rows;
    if (mod(tc - tb, n) > 1) {
      SurfaceMove ex;
      ex.kind = SurfaceMove::Kind::Exchange;
      ex.axis = LevelAxis::Vertical;
      ex.g1 = ta;                   // block I: {ta, tb}
      ex.g2 = mod(tb + 1, n);       // block J: strictly between tb and tc
      ex.g3 = tc;
      ex.k1 = mod(f1 + 1, m);       // arc A = open (f1;f2)
      ex.k2 = f2;
      cur = apply_surface_move(cur, ex);
      out.script.push_back(ex);
    }
  }
  SurfaceMove red;
  red.kind = SurfaceMove::Kind::WrinkleReduce;
  red.rect_a = ia;
  red.rect_b = ib;
  out.result = apply_surface_move(cur, red);
  out.script.push_back(red);
  return out;
}

SurfaceDiagram attach_annulus(const LinkDiagram& R, int component) {
  validate_link(R);
  auto comps = link_components(R);
  if (component < 0 || component >= static_cast<int>(comps.size()))
    throw Error("no such component");
  const auto& comp = comps[static_cast<size_t>(component)];
  int dir = R.oriented() ? R.orientation[static_cast<size_t>(component)] : 1;
  std::vector<GridPoint> walk = comp;
  if (dir < 0) {
    std::reverse(walk.begin(), walk.end());
    std::rotate(walk.begin(), walk.end() - 1, walk.end());
  }
  int m = static_cast<int>(walk.size()) / 2;
  // Compact the component's own levels.
  std::vector<int> vs, hs;
  for (const auto& p : walk) {
    vs.push_back(p.v);
    hs.push_back(p.h);
  }
  std::sort(vs.begin(), vs.end());
  vs.erase(std::unique(vs.begin(), vs.end()), vs.end());
  std::sort(hs.begin(), hs.end());
  hs.erase(std::unique(hs.begin(), hs.end()), hs.end());
  auto cv = [&](int v) {
    return 2 * static_cast<int>(std::lower_bound(vs.begin(), vs.end(), v) - vs.begin());
  };
  auto ch = [&](int h) {
    return 2 * static_cast<int>(std::lower_bound(hs.begin(), hs.end(), h) - hs.begin());
  };
  SurfaceDiagram out;
  out.cols = 2 * m;
  out.rows = 2 * m;
  // walk = (t1,p1),(t1,p2),(t2,p2),(t2,p3),...,(tm,pm),(tm,p1)
  for (int i = 0; i < m; ++i) {
    GridPoint a = walk[static_cast<size_t>(2 * i)];        // (t_i, p_i)
    GridPoint b = walk[static_cast<size_t>(2 * i + 1)];    // (t_i, p_{i+1})
    GridPoint c = walk[static_cast<size_t>((2 * i + 2) % (2 * m))];  // (t_{i+1}, p_{i+1})
    int ti = cv(a.v), pi_ = ch(a.h), pj = ch(b.h), tj = cv(c.v);
    out.rects.push_back({ti, ti + 1, pi_ + 1, pj});
    out.rects.push_back({ti + 1, tj, pj, pj + 1});
  }
  validate_surface(out);
  return out;
}

}  // namespace gridsurf
