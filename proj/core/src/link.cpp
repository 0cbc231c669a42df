#include "gridsurf/link.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <sstream>

namespace gridsurf {

namespace {

// partner[i] = index of the other vertex on the same level.
std::vector<int> level_partners(const LinkDiagram& R, LevelAxis axis) {
  std::vector<std::vector<int>> at(axis == LevelAxis::Vertical ? R.cols : R.rows);
  for (int i = 0; i < static_cast<int>(R.vertices.size()); ++i) {
    int lvl = axis == LevelAxis::Vertical ? R.vertices[i].v : R.vertices[i].h;
    if (lvl < 0 || lvl >= static_cast<int>(at.size())) throw Error("vertex level out of range");
    at[lvl].push_back(i);
  }
  std::vector<int> partner(R.vertices.size(), -1);
  for (auto& vs : at) {
    if (vs.size() != 2) throw Error("occupied level must contain exactly 2 vertices");
    partner[vs[0]] = vs[1];
    partner[vs[1]] = vs[0];
  }
  return partner;
}

}  // namespace

void validate_link(const LinkDiagram& R) {
  if (R.cols <= 0 || R.rows <= 0) throw Error("empty diagram");
  std::set<GridPoint> seen;
  for (const auto& p : R.vertices) {
    if (p.v < 0 || p.v >= R.cols || p.h < 0 || p.h >= R.rows) throw Error("vertex out of range");
    if (!seen.insert(p).second) throw Error("duplicate vertex");
  }
  if (static_cast<int>(R.vertices.size()) != 2 * R.cols || 2 * R.cols != 2 * R.rows)
    throw Error("occupied level must contain exactly 2 vertices");
  level_partners(R, LevelAxis::Vertical);
  level_partners(R, LevelAxis::Horizontal);
  if (R.oriented() && R.orientation.size() != link_components(R).size())
    throw Error("orientation size does not match component count");
}

std::vector<std::vector<GridPoint>> link_components(const LinkDiagram& R) {
  auto vp = level_partners(R, LevelAxis::Vertical);
  auto hp = level_partners(R, LevelAxis::Horizontal);
  int n = static_cast<int>(R.vertices.size());
  std::vector<int> order(n);
  for (int i = 0; i < n; ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](int a, int b) { return R.vertices[a] < R.vertices[b]; });
  std::vector<bool> used(n, false);
  std::vector<std::vector<GridPoint>> comps;
  for (int start : order) {
    if (used[start]) continue;
    std::vector<GridPoint> comp;
    int cur = start;
    bool via_vertical = true;  // leave the least vertex along its column first
    while (!used[cur]) {
      used[cur] = true;
      comp.push_back(R.vertices[cur]);
      cur = via_vertical ? vp[cur] : hp[cur];
      via_vertical = !via_vertical;
    }
    if (cur != start || comp.size() % 2 != 0) throw Error("edges do not close into cycles");
    comps.push_back(std::move(comp));
  }
  return comps;
}

LinkDiagram orient_canonically(const LinkDiagram& R) {
  LinkDiagram out = R;
  out.orientation.assign(link_components(R).size(), 1);
  return out;
}

namespace {

struct DirEdge {
  GridPoint a, b;  // directed a -> b
  bool vertical;
};

// Directed edges of one component in traversal order. `dir` = +1 follows the
// stored order, -1 reverses it.
std::vector<DirEdge> component_edges(const std::vector<GridPoint>& comp, int dir) {
  std::vector<DirEdge> edges;
  int m = static_cast<int>(comp.size());
  for (int i = 0; i < m; ++i) {
    GridPoint a = comp[static_cast<size_t>(i)];
    GridPoint b = comp[static_cast<size_t>((i + 1) % m)];
    if (dir < 0) std::swap(a, b);
    edges.push_back({a, b, a.v == b.v});
  }
  return edges;
}

}  // namespace

LinkReport analyze_link(const LinkDiagram& R) {
  validate_link(R);
  if (!R.oriented()) throw Error("unoriented input: analyze_link requires an orientation");
  auto comps = link_components(R);
  LinkReport report;
  for (size_t ci = 0; ci < comps.size(); ++ci) {
    ComponentReport cr;
    cr.vertices = comps[ci];
    auto edges = component_edges(comps[ci], R.orientation[ci]);

    // Corner census. A vertex's corner type is the compass position of the
    // vertex inside the quadrant spanned by its two edges in the planar chart.
    for (const auto& comp : std::vector<std::vector<GridPoint>>{comps[ci]}) {
      int m = static_cast<int>(comp.size());
      for (int i = 0; i < m; ++i) {
        GridPoint prev = comp[static_cast<size_t>(mod(i - 1, m))];
        GridPoint here = comp[static_cast<size_t>(i)];
        GridPoint next = comp[static_cast<size_t>((i + 1) % m)];
        GridPoint col_nb = prev.v == here.v ? prev : next;
        GridPoint row_nb = prev.v == here.v ? next : prev;
        bool up = col_nb.h > here.h;
        bool right = row_nb.v > here.v;
        if (up && right) cr.census.sw++;
        else if (up && !right) cr.census.se++;
        else if (!up && right) cr.census.nw++;
        else cr.census.ne++;
      }
    }

    // Self-writhe: vertical strand passes over; crossings counted in the
    // planar chart given by the ordinal coordinates.
    for (const auto& e1 : edges) {
      if (!e1.vertical) continue;
      int c = e1.a.v;
      int rlo = std::min(e1.a.h, e1.b.h), rhi = std::max(e1.a.h, e1.b.h);
      int sv = e1.b.h > e1.a.h ? 1 : -1;
      for (const auto& e2 : edges) {
        if (e2.vertical) continue;
        int r = e2.a.h;
        int clo = std::min(e2.a.v, e2.b.v), chi = std::max(e2.a.v, e2.b.v);
        int sh = e2.b.v > e2.a.v ? 1 : -1;
        if (rlo < r && r < rhi && clo < c && c < chi) cr.census.writhe += sv * sh;
      }
    }

    if ((cr.census.ne + cr.census.sw) % 2 != 0 || (cr.census.nw + cr.census.se) % 2 != 0)
      throw Error("odd corner count");
    cr.tb_plus = -cr.census.writhe - (cr.census.nw + cr.census.se) / 2;
    cr.tb_minus = cr.census.writhe - (cr.census.ne + cr.census.sw) / 2;

    report.writhe += cr.census.writhe;
    report.tb_plus += cr.tb_plus;
    report.tb_minus += cr.tb_minus;
    report.vertex_count += cr.census.vertex_count();
    report.components.push_back(std::move(cr));
  }
  return report;
}

const char* quadrant_name(Quadrant q) {
  switch (q) {
    case Quadrant::NE: return "NE";
    case Quadrant::NW: return "NW";
    case Quadrant::SE: return "SE";
    case Quadrant::SW: return "SW";
  }
  return "?";
}

Quadrant quadrant_from_name(const std::string& name) {
  if (name == "NE") return Quadrant::NE;
  if (name == "NW") return Quadrant::NW;
  if (name == "SE") return Quadrant::SE;
  if (name == "SW") return Quadrant::SW;
  throw Error("unknown quadrant: " + name);
}

int stabilization_type(Quadrant q) {
  return (q == Quadrant::NE || q == Quadrant::SW) ? 1 : 2;
}

namespace {

LinkDiagram do_exchange(const LinkDiagram& R, LevelAxis axis, int index) {
  int n = axis == LevelAxis::Vertical ? R.cols : R.rows;
  int i = mod(index, n), j = mod(index + 1, n);
  std::vector<int> rows_i, rows_j;
  for (const auto& p : R.vertices) {
    int lvl = axis == LevelAxis::Vertical ? p.v : p.h;
    int other = axis == LevelAxis::Vertical ? p.h : p.v;
    if (lvl == i) rows_i.push_back(other);
    if (lvl == j) rows_j.push_back(other);
  }
  for (int a : rows_i)
    for (int b : rows_j)
      if (a == b) throw Error("exchange precondition: vertex pairs not disjoint");
  // Interleaving test in the transverse cyclic order.
  int m = axis == LevelAxis::Vertical ? R.rows : R.cols;
  int inside = 0;
  for (int b : rows_j)
    if (in_open_arc(rows_i[0], rows_i[1], b, m)) inside++;
  if (inside == 1) throw Error("exchange precondition: interleaved");

  LinkDiagram out = R;
  out.orientation.clear();
  for (auto& p : out.vertices) {
    int& lvl = axis == LevelAxis::Vertical ? p.v : p.h;
    if (lvl == i) lvl = j;
    else if (lvl == j) lvl = i;
  }
  validate_link(out);
  return out;
}

// Inserts a fresh slot before ordinal position `pos` (0..n); existing levels
// at >= pos shift up by one.
void shift_up(int& coord, int pos) {
  if (coord >= pos) coord++;
}

LinkDiagram do_stabilize(const LinkDiagram& R, GridPoint site, Quadrant quad, int want_type) {
  validate_link(R);
  bool found = std::find(R.vertices.begin(), R.vertices.end(), site) != R.vertices.end();
  if (!found) throw Error("stabilization site is not a vertex");
  int type = stabilization_type(quad);
  if (want_type != 0 && want_type != type)
    throw Error("stabilization type does not match corner direction");

  bool right = quad == Quadrant::NE || quad == Quadrant::SE;
  bool up = quad == Quadrant::NE || quad == Quadrant::NW;
  // Fresh column next to site.v on the chosen side; fresh row likewise.
  int new_col_pos = right ? site.v + 1 : site.v;
  int new_row_pos = up ? site.h + 1 : site.h;

  LinkDiagram out;
  out.cols = R.cols + 1;
  out.rows = R.rows + 1;
  for (auto p : R.vertices) {
    if (p == site) continue;
    shift_up(p.v, new_col_pos);
    shift_up(p.h, new_row_pos);
    out.vertices.push_back(p);
  }
  GridPoint old = site;
  shift_up(old.v, new_col_pos);
  shift_up(old.h, new_row_pos);
  // The three replacement vertices: one on the old column, one on the old row,
  // and the L-corner on both fresh levels.
  GridPoint corner{right ? old.v + 1 : old.v - 1, up ? old.h + 1 : old.h - 1};
  out.vertices.push_back(GridPoint{old.v, corner.h});
  out.vertices.push_back(GridPoint{corner.v, old.h});
  out.vertices.push_back(corner);
  std::sort(out.vertices.begin(), out.vertices.end());
  validate_link(out);
  return out;
}

LinkDiagram do_destabilize(const LinkDiagram& R, GridPoint corner) {
  validate_link(R);
  auto vp = level_partners(R, LevelAxis::Vertical);
  auto hp = level_partners(R, LevelAxis::Horizontal);
  int ci = -1;
  for (int i = 0; i < static_cast<int>(R.vertices.size()); ++i)
    if (R.vertices[i] == corner) ci = i;
  if (ci < 0) throw Error("destabilization site is not a vertex");
  GridPoint u = R.vertices[vp[ci]];  // column partner
  GridPoint w = R.vertices[hp[ci]];  // row partner
  if (cyc_dist(w.v, corner.v, R.cols) != 1 && cyc_dist(corner.v, w.v, R.cols) != 1)
    throw Error("destabilization: columns not adjacent");
  if (cyc_dist(u.h, corner.h, R.rows) != 1 && cyc_dist(corner.h, u.h, R.rows) != 1)
    throw Error("destabilization: rows not adjacent");
  GridPoint merged{w.v, u.h};
  for (const auto& p : R.vertices)
    if (p == merged) throw Error("destabilization: merged position occupied");

  LinkDiagram out;
  out.cols = R.cols - 1;
  out.rows = R.rows - 1;
  auto drop = [&](GridPoint p) -> GridPoint {
    if (p.v > corner.v) p.v--;
    if (p.h > corner.h) p.h--;
    return p;
  };
  for (const auto& p : R.vertices) {
    if (p == corner || p == u || p == w) continue;
    out.vertices.push_back(drop(p));
  }
  out.vertices.push_back(drop(merged));
  std::sort(out.vertices.begin(), out.vertices.end());
  validate_link(out);
  return out;
}

}  // namespace

LinkDiagram apply_link_move(const LinkDiagram& R, const LinkMove& mv) {
  switch (mv.kind) {
    case LinkMove::Kind::Exchange:
      return do_exchange(R, mv.axis, mv.index);
    case LinkMove::Kind::Stabilize:
      return do_stabilize(R, mv.site, mv.quadrant, mv.stab_type);
    case LinkMove::Kind::Destabilize:
      return do_destabilize(R, mv.site);
  }
  throw Error("unknown link move");
}

std::vector<LinkMove> exchange_moves(const LinkDiagram& R) {
  std::vector<LinkMove> moves;
  for (LevelAxis axis : {LevelAxis::Vertical, LevelAxis::Horizontal}) {
    int n = axis == LevelAxis::Vertical ? R.cols : R.rows;
    for (int i = 0; i < n; ++i) {
      LinkMove mv{LinkMove::Kind::Exchange, axis, i, {}, Quadrant::NE, 0};
      try {
        do_exchange(R, axis, i);
        moves.push_back(mv);
      } catch (const Error&) {
      }
    }
  }
  return moves;
}

ClosureResult exchange_closure(const LinkDiagram& R, long node_budget) {
  validate_link(R);
  ClosureResult result;
  LinkDiagram start = R;
  start.orientation.clear();
  std::deque<LinkDiagram> queue;
  queue.push_back(start);
  result.canonical_forms.insert(canonical_form(start));
  result.is_rigid = exchange_moves(start).empty();
  long nodes = 0;
  while (!queue.empty()) {
    if (++nodes > node_budget) {
      result.complete = false;
      break;
    }
    LinkDiagram cur = queue.front();
    queue.pop_front();
    for (const auto& mv : exchange_moves(cur)) {
      LinkDiagram next = apply_link_move(cur, mv);
      std::string key = canonical_form(next);
      if (result.canonical_forms.insert(key).second) queue.push_back(next);
    }
  }
  return result;
}

std::string canonical_form(const LinkDiagram& R) {
  validate_link(R);
  std::string best;
  std::vector<GridPoint> pts(R.vertices.size());
  for (int rv = 0; rv < R.cols; ++rv) {
    for (int rh = 0; rh < R.rows; ++rh) {
      for (size_t i = 0; i < R.vertices.size(); ++i)
        pts[i] = {mod(R.vertices[i].v + rv, R.cols), mod(R.vertices[i].h + rh, R.rows)};
      std::sort(pts.begin(), pts.end());
      std::ostringstream os;
      os << "link " << R.cols << ' ' << R.rows;
      for (const auto& p : pts) os << ' ' << p.v << ' ' << p.h;
      std::string s = os.str();
      if (best.empty() || s < best) best = std::move(s);
    }
  }
  return best;
}

LinkDiagram apply_symmetry(const LinkDiagram& R, Symmetry s) {
  LinkDiagram out;
  switch (s) {
    case Symmetry::ReflectH:
      out.cols = R.cols;
      out.rows = R.rows;
      for (const auto& p : R.vertices) out.vertices.push_back({p.v, R.rows - 1 - p.h});
      break;
    case Symmetry::ReflectV:
      out.cols = R.cols;
      out.rows = R.rows;
      for (const auto& p : R.vertices) out.vertices.push_back({R.cols - 1 - p.v, p.h});
      break;
    case Symmetry::Transpose:
      out.cols = R.rows;
      out.rows = R.cols;
      for (const auto& p : R.vertices) out.vertices.push_back({p.h, p.v});
      break;
    case Symmetry::AntiTranspose:
      out.cols = R.rows;
      out.rows = R.cols;
      for (const auto& p : R.vertices)
        out.vertices.push_back({R.rows - 1 - p.h, R.cols - 1 - p.v});
      break;
  }
  std::sort(out.vertices.begin(), out.vertices.end());
  validate_link(out);
  return out;
}

LinkDiagram point_reflection(const LinkDiagram& R) {
  LinkDiagram out;
  out.cols = R.cols;
  out.rows = R.rows;
  for (const auto& p : R.vertices)
    out.vertices.push_back({R.cols - 1 - p.v, R.rows - 1 - p.h});
  std::sort(out.vertices.begin(), out.vertices.end());
  validate_link(out);
  return out;
}

}  // namespace gridsurf
