#include "gridsurf/mirror.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <sstream>

namespace gridsurf {

void validate_mirror(const MirrorDiagram& m) {
  if (m.cols <= 0 || m.rows <= 0) throw Error("empty mirror diagram");
  for (const auto& [pos, type] : m.mirrors) {
    (void)type;
    if (pos.v < 0 || pos.v >= m.cols || pos.h < 0 || pos.h >= m.rows)
      throw Error("mirror out of range");
  }
}

const char* port_name(Port p) {
  switch (p) {
    case Port::N: return "N";
    case Port::E: return "E";
    case Port::S: return "S";
    case Port::W: return "W";
  }
  return "?";
}

Port port_from_name(const std::string& s) {
  if (s == "N") return Port::N;
  if (s == "E") return Port::E;
  if (s == "S") return Port::S;
  if (s == "W") return Port::W;
  throw Error("unknown port: " + s);
}

Port transit_partner(DiagType t, Port in) {
  if (t == DiagType::Slash) {
    switch (in) {
      case Port::S: return Port::E;
      case Port::E: return Port::S;
      case Port::N: return Port::W;
      case Port::W: return Port::N;
    }
  } else {
    switch (in) {
      case Port::S: return Port::W;
      case Port::W: return Port::S;
      case Port::N: return Port::E;
      case Port::E: return Port::N;
    }
  }
  return Port::N;
}

namespace {

struct Tracer {
  const MirrorDiagram& m;
  std::vector<GridPoint> pos;           // mirror index -> position
  std::vector<DiagType> type;
  std::map<GridPoint, int> index;
  // seg_to[port id] = the port reached by leaving through this port
  std::vector<int> seg_to;
  // For each leaving port, the canonical segment it traverses.
  std::vector<Segment> seg_of;

  explicit Tracer(const MirrorDiagram& mm) : m(mm) {
    for (const auto& [p, t] : m.mirrors) {
      index[p] = static_cast<int>(pos.size());
      pos.push_back(p);
      type.push_back(t);
    }
    int n = static_cast<int>(pos.size());
    seg_to.assign(static_cast<size_t>(4 * n), -1);
    seg_of.assign(static_cast<size_t>(4 * n), Segment{});
    std::vector<std::vector<int>> on_row(static_cast<size_t>(m.rows));
    std::vector<std::vector<int>> on_col(static_cast<size_t>(m.cols));
    for (int i = 0; i < n; ++i) {
      on_row[static_cast<size_t>(pos[static_cast<size_t>(i)].h)].push_back(i);
      on_col[static_cast<size_t>(pos[static_cast<size_t>(i)].v)].push_back(i);
    }
    for (auto& row : on_row)
      std::sort(row.begin(), row.end(),
                [&](int a, int b) { return pos[static_cast<size_t>(a)].v < pos[static_cast<size_t>(b)].v; });
    for (auto& col : on_col)
      std::sort(col.begin(), col.end(),
                [&](int a, int b) { return pos[static_cast<size_t>(a)].h < pos[static_cast<size_t>(b)].h; });
    for (int h = 0; h < m.rows; ++h) {
      const auto& row = on_row[static_cast<size_t>(h)];
      int k = static_cast<int>(row.size());
      for (int t0 = 0; t0 < k; ++t0) {
        int a = row[static_cast<size_t>(t0)];
        int b = row[static_cast<size_t>((t0 + 1) % k)];
        int pa = port_id(a, Port::E), pb = port_id(b, Port::W);
        seg_to[static_cast<size_t>(pa)] = pb;
        seg_to[static_cast<size_t>(pb)] = pa;
        Segment s{LevelAxis::Horizontal, h, pos[static_cast<size_t>(a)].v, pos[static_cast<size_t>(b)].v};
        seg_of[static_cast<size_t>(pa)] = s;
        seg_of[static_cast<size_t>(pb)] = s;
      }
    }
    for (int v = 0; v < m.cols; ++v) {
      const auto& col = on_col[static_cast<size_t>(v)];
      int k = static_cast<int>(col.size());
      for (int t0 = 0; t0 < k; ++t0) {
        int a = col[static_cast<size_t>(t0)];
        int b = col[static_cast<size_t>((t0 + 1) % k)];
        int pa = port_id(a, Port::N), pb = port_id(b, Port::S);
        seg_to[static_cast<size_t>(pa)] = pb;
        seg_to[static_cast<size_t>(pb)] = pa;
        Segment s{LevelAxis::Vertical, v, pos[static_cast<size_t>(a)].h, pos[static_cast<size_t>(b)].h};
        seg_of[static_cast<size_t>(pa)] = s;
        seg_of[static_cast<size_t>(pb)] = s;
      }
    }
  }

  static int port_id(int mirror, Port p) { return 4 * mirror + static_cast<int>(p); }
};

std::string event_key(const CircuitEvent& e) {
  std::ostringstream os;
  os << e.at.v << ',' << e.at.h << ',' << port_name(e.a);
  return os.str();
}

}  // namespace

std::vector<Circuit> trace_circuits(const MirrorDiagram& m) {
  validate_mirror(m);
  Tracer tr(m);
  int n = static_cast<int>(tr.pos.size());
  std::vector<bool> used(static_cast<size_t>(4 * n), false);
  std::vector<Circuit> out;

  for (int start = 0; start < 4 * n; ++start) {
    if (used[static_cast<size_t>(start)]) continue;
    Circuit c;
    int p = start;
    do {
      int mi = p / 4;
      Port in = static_cast<Port>(p % 4);
      Port outp = transit_partner(tr.type[static_cast<size_t>(mi)], in);
      CircuitEvent ev;
      ev.at = tr.pos[static_cast<size_t>(mi)];
      ev.a = std::min(in, outp);
      ev.b = std::max(in, outp);
      ev.type = tr.type[static_cast<size_t>(mi)];
      c.events.push_back(ev);
      if (ev.type == DiagType::Back) c.hits_back++;
      else c.hits_slash++;
      used[static_cast<size_t>(p)] = true;
      int q = Tracer::port_id(mi, outp);
      used[static_cast<size_t>(q)] = true;
      c.segments.push_back(tr.seg_of[static_cast<size_t>(q)]);
      p = tr.seg_to[static_cast<size_t>(q)];
    } while (p != start);
    // canonical rotation: least event key first
    size_t best = 0;
    for (size_t i = 1; i < c.events.size(); ++i)
      if (event_key(c.events[i]) < event_key(c.events[best])) best = i;
    std::rotate(c.events.begin(), c.events.begin() + static_cast<long>(best), c.events.end());
    std::rotate(c.segments.begin(), c.segments.begin() + static_cast<long>(best), c.segments.end());
    c.key = event_key(c.events[0]);
    out.push_back(std::move(c));
  }

  // Bare levels.
  std::vector<bool> row_used(static_cast<size_t>(m.rows), false), col_used(static_cast<size_t>(m.cols), false);
  for (const auto& [p, t] : m.mirrors) {
    (void)t;
    row_used[static_cast<size_t>(p.h)] = true;
    col_used[static_cast<size_t>(p.v)] = true;
  }
  for (int h = 0; h < m.rows; ++h)
    if (!row_used[static_cast<size_t>(h)]) {
      Circuit c;
      c.bare = true;
      c.bare_axis = LevelAxis::Horizontal;
      c.bare_level = h;
      c.segments.push_back({LevelAxis::Horizontal, h, -1, -1});
      c.key = "bareH" + std::to_string(h);
      out.push_back(std::move(c));
    }
  for (int v = 0; v < m.cols; ++v)
    if (!col_used[static_cast<size_t>(v)]) {
      Circuit c;
      c.bare = true;
      c.bare_axis = LevelAxis::Vertical;
      c.bare_level = v;
      c.segments.push_back({LevelAxis::Vertical, v, -1, -1});
      c.key = "bareV" + std::to_string(v);
      out.push_back(std::move(c));
    }

  // simplicity + integrality
  for (auto& c : out) {
    if ((c.hits_back % 2) || (c.hits_slash % 2)) throw Error("internal: odd circuit hits");
    std::map<GridPoint, int> per_mirror;
    std::map<std::pair<int, int>, std::set<int>> per_level;  // (axis, level) -> mirror coords
    bool ok = !c.events.empty();
    for (const auto& ev : c.events) {
      if (++per_mirror[ev.at] > 1) ok = false;
      per_level[{0, ev.at.v}].insert(ev.at.h);
      per_level[{1, ev.at.h}].insert(ev.at.v);
    }
    for (auto& [lvl, ms] : per_level)
      if (ms.size() > 2) ok = false;
    c.simple = ok;
  }
  std::sort(out.begin(), out.end(), [](const Circuit& a, const Circuit& b) { return a.key < b.key; });
  return out;
}

void validate_enhanced(const EnhancedMirrorDiagram& em) {
  validate_mirror(em.m);
  auto circuits = trace_circuits(em.m);
  std::set<std::string> keys;
  for (const auto& c : circuits) keys.insert(c.key);
  for (const auto& h : em.holes)
    if (!keys.count(h)) throw Error("hole key does not name a circuit: " + h);
}

FramedLink framed_link_of_circuits(const MirrorDiagram& m,
                                   const std::vector<const Circuit*>& collection) {
  // union simplicity
  std::map<GridPoint, int> hit;
  std::map<std::pair<int, int>, std::set<int>> per_level;
  std::map<GridPoint, std::set<Port>> used_ports;
  for (const Circuit* c : collection) {
    if (c->bare || c->events.empty()) throw Error("not simple: bare circuit in collection");
    for (const auto& ev : c->events) {
      if (++hit[ev.at] > 1) throw Error("not simple: mirror hit twice");
      per_level[{0, ev.at.v}].insert(ev.at.h);
      per_level[{1, ev.at.h}].insert(ev.at.v);
      used_ports[ev.at].insert(ev.a);
      used_ports[ev.at].insert(ev.b);
    }
  }
  for (auto& [lvl, ms] : per_level)
    if (ms.size() > 2) throw Error("not simple: more than two mirrors on a level");

  std::vector<GridPoint> pts;
  for (auto& [p, k] : hit) pts.push_back(p);
  std::vector<int> vs, hs;
  for (const auto& p : pts) {
    vs.push_back(p.v);
    hs.push_back(p.h);
  }
  std::sort(vs.begin(), vs.end());
  vs.erase(std::unique(vs.begin(), vs.end()), vs.end());
  std::sort(hs.begin(), hs.end());
  hs.erase(std::unique(hs.begin(), hs.end()), hs.end());
  FramedLink out;
  out.link.cols = static_cast<int>(vs.size());
  out.link.rows = static_cast<int>(hs.size());
  auto cv = [&](int v) {
    return static_cast<int>(std::lower_bound(vs.begin(), vs.end(), v) - vs.begin());
  };
  auto ch = [&](int h) {
    return static_cast<int>(std::lower_bound(hs.begin(), hs.end(), h) - hs.begin());
  };
  for (const auto& p : pts) out.link.vertices.push_back({cv(p.v), ch(p.h)});
  std::sort(out.link.vertices.begin(), out.link.vertices.end());
  validate_link(out.link);

  // framing: on each level the two mirrors' used ports face each other; the
  // greater endpoint is the one reached along the covered arc.
  for (auto& [lvl, ms] : per_level) {
    if (ms.size() != 2) throw Error("not simple: level with one mirror in the union");
    auto it = ms.begin();
    int c1 = *it++, c2 = *it;
    bool horizontal = lvl.first == 1;
    GridPoint p1 = horizontal ? GridPoint{c1, lvl.second} : GridPoint{lvl.second, c1};
    GridPoint p2 = horizontal ? GridPoint{c2, lvl.second} : GridPoint{lvl.second, c2};
    Port plus_port = horizontal ? Port::E : Port::N;   // leaving p1 in + direction
    bool covered_12 = used_ports[p1].count(plus_port) > 0;
    // covered_12: the arc [p1;p2] is traversed, so p2 >_f p1.
    GridPoint greater = covered_12 ? p2 : p1;
    GridPoint gmapped{cv(greater.v), ch(greater.h)};
    if (horizontal)
      out.greater_h[{1, ch(lvl.second)}] = gmapped;
    else
      out.greater_v[{0, cv(lvl.second)}] = gmapped;
  }
  return out;
}

EnhancedMirrorDiagram from_surface_diagram(const SurfaceDiagram& pi) {
  SurfaceInfo info = validate_surface(pi);
  EnhancedMirrorDiagram em;
  em.m.cols = pi.cols;
  em.m.rows = pi.rows;
  for (const auto& rec : info.vertices) em.m.mirrors[rec.pos] = rec.type;
  auto circuits = trace_circuits(em.m);
  auto find_key = [&](const CircuitEvent& probe) -> std::string {
    for (const auto& c : circuits)
      for (const auto& ev : c.events)
        if (ev.at == probe.at && ev.a == probe.a && ev.b == probe.b) return c.key;
    throw Error("internal: transit not found");
  };
  for (const auto& r : pi.rects) {
    CircuitEvent probe;
    probe.at = {r.vr, r.hb};  // BR corner, slash, transit {N,W}
    probe.a = Port::N;
    probe.b = Port::W;
    em.holes.insert(find_key(probe));
  }
  return em;
}

std::optional<SurfaceDiagram> to_surface_diagram(const EnhancedMirrorDiagram& em) {
  auto circuits = trace_circuits(em.m);
  std::map<std::string, const Circuit*> by_key;
  for (const auto& c : circuits) by_key[c.key] = &c;
  SurfaceDiagram pi;
  pi.cols = em.m.cols;
  pi.rows = em.m.rows;
  std::set<GridPoint> covered;
  for (const auto& hk : em.holes) {
    auto it = by_key.find(hk);
    if (it == by_key.end()) return std::nullopt;
    const Circuit& c = *it->second;
    if (c.bare || c.events.size() != 4) return std::nullopt;
    int vl = -1, vr = -1, hb = -1, ht = -1;
    for (const auto& s : c.segments) {
      if (s.axis == LevelAxis::Horizontal) {
        // bottom side runs BL->BR, top side TR->TL; both stored as (from,to)
        // in the positive direction. Identify which row is bottom by the
        // corner types: the bottom-left corner is a backslash mirror.
        auto t = em.m.mirrors.find({s.from, s.level});
        if (t == em.m.mirrors.end()) return std::nullopt;
        if (t->second == DiagType::Back) {  // BL -> bottom side
          hb = s.level;
          vl = s.from;
          vr = s.to;
        } else {
          ht = s.level;
        }
      }
    }
    if (vl < 0 || vr < 0 || hb < 0 || ht < 0) return std::nullopt;
    Rect r{vl, vr, hb, ht};
    for (CornerRole role : {CornerRole::BL, CornerRole::BR, CornerRole::TR, CornerRole::TL}) {
      GridPoint g = role == CornerRole::BL   ? GridPoint{r.vl, r.hb}
                    : role == CornerRole::BR ? GridPoint{r.vr, r.hb}
                    : role == CornerRole::TR ? GridPoint{r.vr, r.ht}
                                             : GridPoint{r.vl, r.ht};
      auto t = em.m.mirrors.find(g);
      if (t == em.m.mirrors.end() || t->second != corner_type(role)) return std::nullopt;
      covered.insert(g);
    }
    pi.rects.push_back(r);
  }
  for (const auto& [p, t] : em.m.mirrors) {
    (void)t;
    if (!covered.count(p)) return std::nullopt;
  }
  try {
    validate_surface(pi);
  } catch (const Error&) {
    return std::nullopt;
  }
  EnhancedMirrorDiagram back = from_surface_diagram(pi);
  if (back.m.mirrors != em.m.mirrors || back.holes != em.holes) return std::nullopt;
  return pi;
}

MirrorDiagram apply_symmetry(const MirrorDiagram& m, Symmetry s) {
  MirrorDiagram out;
  bool swap_axes = s == Symmetry::Transpose || s == Symmetry::AntiTranspose;
  out.cols = swap_axes ? m.rows : m.cols;
  out.rows = swap_axes ? m.cols : m.rows;
  for (const auto& [p, t] : m.mirrors) {
    GridPoint q;
    switch (s) {
      case Symmetry::ReflectH: q = {p.v, m.rows - 1 - p.h}; break;
      case Symmetry::ReflectV: q = {m.cols - 1 - p.v, p.h}; break;
      case Symmetry::Transpose: q = {p.h, p.v}; break;
      case Symmetry::AntiTranspose: q = {m.rows - 1 - p.h, m.cols - 1 - p.v}; break;
    }
    out.mirrors[q] = symmetry_swaps_types(s) ? flip_type(t) : t;
  }
  return out;
}

std::string canonical_form(const MirrorDiagram& m) {
  std::string best;
  for (int rv = 0; rv < m.cols; ++rv) {
    for (int rh = 0; rh < m.rows; ++rh) {
      std::vector<std::tuple<int, int, int>> ms;
      for (const auto& [p, t] : m.mirrors)
        ms.push_back({mod(p.v + rv, m.cols), mod(p.h + rh, m.rows), static_cast<int>(t)});
      std::sort(ms.begin(), ms.end());
      std::ostringstream os;
      os << "mirror " << m.cols << ' ' << m.rows;
      for (auto& [v, h, t] : ms) os << ' ' << v << ' ' << h << ' ' << t;
      std::string s = os.str();
      if (best.empty() || s < best) best = std::move(s);
    }
  }
  return best;
}

// --- splitting routes -------------------------------------------------------

bool route_is_special(const SplittingRoute& route) {
  return route.double_headed && route.mirrors.size() == 2;
}

namespace {

// shared level axis sequence along the route; x[i] = axis of the level shared
// by mirrors i and i+1 (0 = vertical level m_theta, 1 = horizontal).
std::vector<std::pair<LevelAxis, int>> route_levels(const MirrorDiagram& m,
                                                    const SplittingRoute& r) {
  const auto& mu = r.mirrors;
  size_t k = mu.size();
  std::vector<std::pair<LevelAxis, int>> xs(k - 1);
  for (size_t i = 0; i + 1 < k; ++i) {
    bool share_col = mu[i].v == mu[i + 1].v;
    bool share_row = mu[i].h == mu[i + 1].h;
    if (!share_col && !share_row)
      throw Error("route: mirrors " + std::to_string(i + 1) + "," + std::to_string(i + 2) +
                  " share no level");
    if (i == 0) {
      if (share_col && share_row) {
        // equal mirrors: orient by the next constraint or the terminal level
        xs[i] = {LevelAxis::Vertical, mu[i].v};  // provisional; fixed below
      } else {
        xs[i] = share_col ? std::make_pair(LevelAxis::Vertical, mu[i].v)
                          : std::make_pair(LevelAxis::Horizontal, mu[i].h);
      }
    } else {
      // must alternate: the next shared level is the other level of mu[i]
      LevelAxis want = xs[i - 1].first == LevelAxis::Vertical ? LevelAxis::Horizontal
                                                              : LevelAxis::Vertical;
      bool ok = want == LevelAxis::Vertical ? share_col : share_row;
      if (!ok)
        throw Error("route: shared levels do not alternate at mirror " + std::to_string(i + 1));
      xs[i] = want == LevelAxis::Vertical ? std::make_pair(LevelAxis::Vertical, mu[i].v)
                                          : std::make_pair(LevelAxis::Horizontal, mu[i].h);
    }
  }
  // fix the provisional choice for an initial equal pair: alternation with
  // x[1] decides; for k == 2 the terminal level decides.
  if (k >= 2 && mu[0] == mu[1]) {
    LevelAxis x1;
    if (k > 2) {
      x1 = xs[1].first == LevelAxis::Vertical ? LevelAxis::Horizontal : LevelAxis::Vertical;
    } else {
      // terminal level is the level of p; the shared level is the other one
      x1 = r.p_axis == LevelAxis::Vertical ? LevelAxis::Horizontal : LevelAxis::Vertical;
    }
    xs[0] = x1 == LevelAxis::Vertical ? std::make_pair(LevelAxis::Vertical, mu[0].v)
                                      : std::make_pair(LevelAxis::Horizontal, mu[0].h);
  }
  return xs;
}

bool cancellable(const std::vector<GridPoint>& s) {
  size_t n = s.size();
  if (n % 2) return false;
  // match[i][j]: s[i..j] cancellable (inclusive)
  std::vector<std::vector<char>> memo(n, std::vector<char>(n, 2));
  std::function<bool(size_t, size_t)> rec = [&](size_t i, size_t j) -> bool {
    if (i > j) return true;
    if ((j - i) % 2 == 0) return false;
    if (memo[i][j] != 2) return memo[i][j] != 0;
    bool ok = false;
    for (size_t t = i + 1; t <= j && !ok; t += 2)
      if (s[i] == s[t] && rec(i + 1, t - 1) && rec(t + 1, j)) ok = true;
    memo[i][j] = ok ? 1 : 0;
    return ok;
  };
  return rec(0, n - 1);
}

}  // namespace

void validate_splitting_route(const MirrorDiagram& m, const SplittingRoute& route) {
  validate_mirror(m);
  const auto& mu = route.mirrors;
  if (mu.empty()) throw Error("route: empty mirror list");
  DiagType head = route.rtype == 2 ? DiagType::Back : DiagType::Slash;
  DiagType body = flip_type(head);
  for (size_t i = 0; i < mu.size(); ++i) {
    auto it = m.mirrors.find(mu[i]);
    if (it == m.mirrors.end())
      throw Error("route: entry " + std::to_string(i + 1) + " is not a mirror");
    bool is_head = i == 0 || (route.double_headed && i + 1 == mu.size());
    if (it->second != (is_head ? head : body))
      throw Error("route: wrong mirror type at entry " + std::to_string(i + 1));
  }
  if (route.double_headed && mu.size() < 2) throw Error("route: double-headed needs two heads");

  // colinearity/alternation + the terminal level
  std::pair<LevelAxis, int> terminal;
  if (mu.size() == 1) {
    terminal = {route.p_axis, route.p_level};
    bool on_level = route.p_axis == LevelAxis::Vertical ? route.p_level == mu[0].v
                                                        : route.p_level == mu[0].h;
    if (!on_level) throw Error("route: terminal datum not on the head mirror's level");
  } else {
    auto xs = route_levels(m, route);
    LevelAxis last_axis = xs.back().first;
    LevelAxis term_axis =
        last_axis == LevelAxis::Vertical ? LevelAxis::Horizontal : LevelAxis::Vertical;
    int term_level = term_axis == LevelAxis::Vertical ? mu.back().v : mu.back().h;
    terminal = {term_axis, term_level};
  }
  if (route.p_axis != terminal.first || route.p_level != terminal.second)
    throw Error("route: terminal datum on the wrong level");

  // the gap must exist and, for double-headed routes, hug the last mirror
  int span = route.p_axis == LevelAxis::Vertical ? m.rows : m.cols;
  if (route.p_gap < 0 || route.p_gap >= span) throw Error("route: terminal gap out of range");
  if (route.double_headed) {
    int mu_t = route.p_axis == LevelAxis::Vertical ? mu.back().h : mu.back().v;
    auto blocked = [&](bool positive) {
      // any mirror strictly between the last mirror and the gap on that level
      for (const auto& [p, t] : m.mirrors) {
        (void)t;
        if (p == mu.back()) continue;
        int c = route.p_axis == LevelAxis::Vertical ? (p.v == route.p_level ? p.h : -1)
                                                    : (p.h == route.p_level ? p.v : -1);
        if (c < 0) continue;
        // gap g sits between coordinates g-1 and g
        int d_gap = positive ? mod(route.p_gap - 1 - mu_t, span) : mod(mu_t - route.p_gap, span);
        int d_c = positive ? mod(c - mu_t, span) : mod(mu_t - c, span);
        if (d_c != 0 && d_c <= d_gap) return true;
      }
      return false;
    };
    if (blocked(true) && blocked(false))
      throw Error("route: terminal gap does not hug the last head mirror");
  }

  // condition (2d): matched cancellable subsegments start at equal parities
  size_t lo = 1, hi = route.double_headed ? mu.size() - 1 : mu.size();
  for (size_t i = lo; i < hi; ++i)
    for (size_t i2 = i + 1; i2 < hi; ++i2)
      for (size_t j = i + 1; j < hi; ++j)
        for (size_t j2 = j + 1; j2 < hi; ++j2) {
          if (!(mu[i] == mu[i2] && mu[j] == mu[j2] && mu[i] == mu[j])) continue;
          std::vector<GridPoint> s1(mu.begin() + static_cast<long>(i),
                                    mu.begin() + static_cast<long>(i2) + 1);
          std::vector<GridPoint> s2(mu.begin() + static_cast<long>(j),
                                    mu.begin() + static_cast<long>(j2) + 1);
          if (cancellable(s1) && cancellable(s2) && (i % 2) != (j % 2))
            throw Error("route: condition (2d) fails at entries " + std::to_string(i + 1) +
                        " and " + std::to_string(j + 1));
        }
}

// --- flexibility ------------------------------------------------------------

namespace {

// Covered levels: for each (axis, level), the sorted mirror coordinates and
// which inter-mirror segments are covered by non-protected circuits.
struct SegmentCover {
  // (axis, level) -> set of segment start coordinates (segment from its start
  // mirror to next mirror in + direction) covered by eligible circuits
  std::map<std::pair<int, int>, std::set<int>> covered;

  bool arc_covered(const MirrorDiagram& m, LevelAxis axis, int level, int from, int to) const {
    // the arc (from;to) on the level: all segments between must be covered
    std::vector<int> coords;
    for (const auto& [p, t] : m.mirrors) {
      (void)t;
      if (axis == LevelAxis::Vertical ? p.v == level : p.h == level)
        coords.push_back(axis == LevelAxis::Vertical ? p.h : p.v);
    }
    std::sort(coords.begin(), coords.end());
    auto it = covered.find({axis == LevelAxis::Vertical ? 0 : 1, level});
    if (it == covered.end()) return false;
    // walk mirrors from `from` to `to` in + direction
    int cur = from;
    while (cur != to) {
      if (!it->second.count(cur)) return false;
      // next mirror after cur
      auto nx = std::upper_bound(coords.begin(), coords.end(), cur);
      cur = nx == coords.end() ? coords.front() : *nx;
    }
    return true;
  }
};

}  // namespace

FlexReport flexibility_and_negligibility(const EnhancedMirrorDiagram& em,
                                         const std::set<std::string>& protect) {
  validate_enhanced(em);
  auto circuits = trace_circuits(em.m);
  FlexReport rep;
  for (const auto& c : circuits) {
    if (!em.holes.count(c.key)) continue;
    if (c.tb_plus() == -1) rep.plus_negligible.insert(c.key);
    if (c.tb_minus() == -1) rep.minus_negligible.insert(c.key);
  }

  // coherence classes
  {
    std::map<GridPoint, int> back_ids, slash_ids;
    for (const auto& [p, t] : em.m.mirrors)
      (t == DiagType::Back ? back_ids : slash_ids).emplace(p, 0);
    auto classes = [&](std::map<GridPoint, int>& ids, const std::set<std::string>& negligible,
                       DiagType t) {
      int id = 0;
      for (auto& [p, v] : ids) v = id++;
      std::vector<int> parent(static_cast<size_t>(id));
      std::iota(parent.begin(), parent.end(), 0);
      std::function<int(int)> root = [&](int x) {
        while (parent[static_cast<size_t>(x)] != x) x = parent[static_cast<size_t>(x)] = parent[static_cast<size_t>(parent[static_cast<size_t>(x)])];
        return x;
      };
      for (const auto& c : circuits) {
        if (!negligible.count(c.key)) continue;
        std::vector<int> members;
        for (const auto& ev : c.events)
          if (ev.type == t) members.push_back(ids.at(ev.at));
        for (size_t i = 1; i < members.size(); ++i)
          parent[static_cast<size_t>(root(members[0]))] = root(members[static_cast<size_t>(i)]);
      }
      std::map<int, std::vector<GridPoint>> by_root;
      for (auto& [p, v] : ids) by_root[root(v)].push_back(p);
      std::vector<std::vector<GridPoint>> out;
      for (auto& [r, v] : by_root) out.push_back(v);
      return out;
    };
    rep.back_coherence_classes = classes(back_ids, rep.plus_negligible, DiagType::Back);
    rep.slash_coherence_classes = classes(slash_ids, rep.minus_negligible, DiagType::Slash);
  }

  // flexibility: reachability over circuit adjacency
  auto reachable = [&](bool plus) {
    std::map<std::string, int> idx;
    std::vector<const Circuit*> list;
    for (const auto& c : circuits) {
      if (protect.count(c.key)) continue;
      idx[c.key] = static_cast<int>(list.size());
      list.push_back(&c);
    }
    std::vector<char> seen(list.size(), 0);
    std::vector<int> queue;
    for (size_t i = 0; i < list.size(); ++i) {
      int tb = plus ? list[i]->tb_plus() : list[i]->tb_minus();
      if (tb < 0) {
        seen[i] = 1;
        queue.push_back(static_cast<int>(i));
      }
    }
    std::map<GridPoint, std::vector<int>> by_mirror;
    for (size_t i = 0; i < list.size(); ++i)
      for (const auto& ev : list[i]->events) by_mirror[ev.at].push_back(static_cast<int>(i));
    while (!queue.empty()) {
      int u = queue.back();
      queue.pop_back();
      for (const auto& ev : list[static_cast<size_t>(u)]->events)
        for (int w : by_mirror[ev.at])
          if (!seen[static_cast<size_t>(w)]) {
            seen[static_cast<size_t>(w)] = 1;
            queue.push_back(w);
          }
    }
    bool all = true;
    for (size_t i = 0; i < list.size(); ++i)
      if (!seen[i]) all = false;
    return all;
  };
  rep.plus_flexible = reachable(true);
  rep.minus_flexible = reachable(false);

  // witness routes: BFS over mirrors through arcs covered by non-protected
  // circuits; for + flexibility the route starts at a backslash mirror and
  // continues through slash mirrors.
  auto witnesses = [&](bool plus, std::map<GridPoint, SplittingRoute>& out) {
    SegmentCover cover;
    for (const auto& c : circuits) {
      if (protect.count(c.key) || c.bare) continue;
      for (const auto& s : c.segments)
        cover.covered[{s.axis == LevelAxis::Vertical ? 0 : 1, s.level}].insert(s.from);
    }
    DiagType head = plus ? DiagType::Back : DiagType::Slash;
    DiagType body = flip_type(head);
    // BFS
    std::map<GridPoint, std::vector<GridPoint>> best;  // target -> path
    std::vector<std::vector<GridPoint>> frontier;
    for (const auto& [p, t] : em.m.mirrors)
      if (t == head) frontier.push_back({p});
    std::set<GridPoint> visited;
    for (auto& f : frontier) visited.insert(f[0]);
    while (!frontier.empty()) {
      std::vector<std::vector<GridPoint>> next;
      for (const auto& path : frontier) {
        GridPoint cur = path.back();
        for (const auto& [q, t] : em.m.mirrors) {
          if (t != body || visited.count(q)) continue;
          bool share_col = q.v == cur.v, share_row = q.h == cur.h;
          if (!share_col && !share_row) continue;
          LevelAxis ax = share_col ? LevelAxis::Vertical : LevelAxis::Horizontal;
          int lvl = share_col ? q.v : q.h;
          int a = share_col ? cur.h : cur.v;
          int b = share_col ? q.h : q.v;
          if (!cover.arc_covered(em.m, ax, lvl, a, b) &&
              !cover.arc_covered(em.m, ax, lvl, b, a))
            continue;
          auto np = path;
          np.push_back(q);
          visited.insert(q);
          best[q] = np;
          next.push_back(std::move(np));
        }
      }
      frontier = std::move(next);
    }
    for (auto& [target, path] : best) {
      SplittingRoute r;
      r.mirrors = path;
      r.double_headed = false;
      r.rtype = plus ? 2 : 1;
      // terminal: the other level of the last mirror, gap next to it
      GridPoint last = path.back();
      GridPoint prev = path[path.size() - 2];
      bool shared_col = last.v == prev.v;
      r.p_axis = shared_col ? LevelAxis::Horizontal : LevelAxis::Vertical;
      r.p_level = shared_col ? last.h : last.v;
      int coord = shared_col ? last.v : last.h;
      int circle = r.p_axis == LevelAxis::Vertical ? em.m.rows : em.m.cols;
      r.p_gap = mod(coord + 1, circle);
      try {
        validate_splitting_route(em.m, r);
        out[target] = r;
      } catch (const Error&) {
        // try the other side gap
        r.p_gap = coord;
        try {
          validate_splitting_route(em.m, r);
          out[target] = r;
        } catch (const Error&) {
        }
      }
    }
  };
  witnesses(true, rep.plus_witness);
  witnesses(false, rep.minus_witness);
  return rep;
}

// --- boundary of a surface diagram (with framing) ---------------------------

BoundaryLink boundary_link(const SurfaceDiagram& pi) {
  SurfaceInfo info = validate_surface(pi);
  BoundaryLink out;
  out.link = detail::boundary_diagram(pi, info);

  // relative tb per component: -(backslash)/2, -(slash)/2 boundary vertices
  auto vmapv = detail::boundary_level_map(pi, info, LevelAxis::Vertical);
  auto vmaph = detail::boundary_level_map(pi, info, LevelAxis::Horizontal);
  auto compact = [&](GridPoint p) -> GridPoint {
    int v = static_cast<int>(std::lower_bound(vmapv.begin(), vmapv.end(), p.v) - vmapv.begin());
    int h = static_cast<int>(std::lower_bound(vmaph.begin(), vmaph.end(), p.h) - vmaph.begin());
    return {v, h};
  };
  auto comps = link_components(out.link);
  out.tb_plus_rel.assign(comps.size(), 0);
  out.tb_minus_rel.assign(comps.size(), 0);
  std::map<GridPoint, int> comp_of;
  for (size_t ci = 0; ci < comps.size(); ++ci)
    for (const auto& p : comps[ci]) comp_of[p] = static_cast<int>(ci);
  for (const auto& rec : info.vertices) {
    if (rec.multiplicity != 1) continue;
    int ci = comp_of.at(compact(rec.pos));
    if (rec.type == DiagType::Back) out.tb_plus_rel[static_cast<size_t>(ci)] -= 1;
    else out.tb_minus_rel[static_cast<size_t>(ci)] -= 1;
  }
  for (auto& t : out.tb_plus_rel) {
    if (mod(t, 2)) throw Error("internal: odd backslash count on a boundary component");
    t /= 2;
  }
  for (auto& t : out.tb_minus_rel) {
    if (mod(t, 2)) throw Error("internal: odd slash count on a boundary component");
    t /= 2;
  }

  // framing: opposite of the circuit framing of the essential boundary of
  // the associated mirror diagram.
  EnhancedMirrorDiagram em = from_surface_diagram(pi);
  auto circuits = trace_circuits(em.m);
  std::vector<const Circuit*> essential;
  for (const auto& c : circuits)
    if (!em.holes.count(c.key)) essential.push_back(&c);
  FramedLink fl = framed_link_of_circuits(em.m, essential);
  if (canonical_form(fl.link) != canonical_form(out.link))
    throw Error("internal: circuit link differs from the boundary diagram");
  // the circuit framing's "greater" flipped gives the boundary framing
  for (const auto& [key, greater] : fl.greater_v) {
    // the other endpoint of the edge on that vertical level
    int lvl = key.second;
    GridPoint other{-1, -1};
    for (const auto& p : fl.link.vertices)
      if (p.v == lvl && !(p == greater)) other = p;
    out.greater_v[{0, lvl}] = other;
  }
  for (const auto& [key, greater] : fl.greater_h) {
    int lvl = key.second;
    GridPoint other{-1, -1};
    for (const auto& p : fl.link.vertices)
      if (p.h == lvl && !(p == greater)) other = p;
    out.greater_h[{1, lvl}] = other;
  }
  return out;
}

// --- boundary collar ---------------------------------------------------------

SurfaceDiagram attach_collar(const SurfaceDiagram& pi, int boundary_component, int side) {
  if (side == -1) {
    // conjugate by the vertical reflection, which swaps the two signs
    SurfaceDiagram refl = apply_symmetry(pi, Symmetry::ReflectH);
    // component indices may change; match by reflected vertex membership
    BoundaryLink orig = boundary_link(pi);
    auto comps = link_components(orig.link);
    if (boundary_component < 0 || boundary_component >= static_cast<int>(comps.size()))
      throw Error("no such boundary component");
    // find the reflected component containing the image of the least vertex
    SurfaceInfo info = validate_surface(pi);
    GridPoint sample{-1, -1};
    for (const auto& rec : info.vertices) {
      if (rec.multiplicity != 1) continue;
      auto vm = detail::boundary_level_map(pi, info, LevelAxis::Vertical);
      auto hm = detail::boundary_level_map(pi, info, LevelAxis::Horizontal);
      GridPoint cp{
          static_cast<int>(std::lower_bound(vm.begin(), vm.end(), rec.pos.v) - vm.begin()),
          static_cast<int>(std::lower_bound(hm.begin(), hm.end(), rec.pos.h) - hm.begin())};
      for (const auto& q : comps[static_cast<size_t>(boundary_component)])
        if (q == cp) sample = {rec.pos.v, pi.rows - 1 - rec.pos.h};
    }
    if (sample.v < 0) throw Error("internal: empty boundary component");
    SurfaceInfo rinfo = validate_surface(refl);
    BoundaryLink rb = boundary_link(refl);
    auto rcomps = link_components(rb.link);
    auto rvm = detail::boundary_level_map(refl, rinfo, LevelAxis::Vertical);
    auto rhm = detail::boundary_level_map(refl, rinfo, LevelAxis::Horizontal);
    GridPoint rc{
        static_cast<int>(std::lower_bound(rvm.begin(), rvm.end(), sample.v) - rvm.begin()),
        static_cast<int>(std::lower_bound(rhm.begin(), rhm.end(), sample.h) - rhm.begin())};
    int idx = -1;
    for (size_t ci = 0; ci < rcomps.size(); ++ci)
      for (const auto& q : rcomps[ci])
        if (q == rc) idx = static_cast<int>(ci);
    if (idx < 0) throw Error("internal: reflected component not found");
    try {
      return apply_symmetry(attach_collar(refl, idx, +1), Symmetry::ReflectH);
    } catch (const Error&) {
      throw Error("collar requires tb_minus_rel = 0 for the minus side");
    }
  }
  if (side != 1) throw Error("collar side must be +1 or -1");

  SurfaceInfo info = validate_surface(pi);
  BoundaryLink bl = boundary_link(pi);
  auto comps = link_components(bl.link);
  if (boundary_component < 0 || boundary_component >= static_cast<int>(comps.size()))
    throw Error("no such boundary component");
  if (bl.tb_plus_rel[static_cast<size_t>(boundary_component)] != 0)
    throw Error(bl.tb_minus_rel[static_cast<size_t>(boundary_component)] != 0
                    ? "collar requires a zero relative framing number on the chosen side"
                    : "collar requires tb_plus_rel = 0 for the plus side");

  // Q's vertices in surface coordinates.
  auto vm = detail::boundary_level_map(pi, info, LevelAxis::Vertical);
  auto hm = detail::boundary_level_map(pi, info, LevelAxis::Horizontal);
  std::vector<GridPoint> q_vertices;
  std::set<int> q_cols, q_rows;
  std::map<GridPoint, GridPoint> to_compact;
  for (const auto& rec : info.vertices) {
    if (rec.multiplicity != 1) continue;
    GridPoint cp{static_cast<int>(std::lower_bound(vm.begin(), vm.end(), rec.pos.v) - vm.begin()),
                 static_cast<int>(std::lower_bound(hm.begin(), hm.end(), rec.pos.h) - hm.begin())};
    for (const auto& c : comps[static_cast<size_t>(boundary_component)])
      if (c == cp) {
        q_vertices.push_back(rec.pos);
        q_cols.insert(rec.pos.v);
        q_rows.insert(rec.pos.h);
        to_compact[rec.pos] = cp;
      }
  }

  // New level maps: a fresh slot before every Q-level; Q-level content moves
  // to the fresh slot, the original slot is re-occupied by the collar.
  auto build_map = [&](int count, const std::set<int>& q_levels) {
    std::vector<int> nv(static_cast<size_t>(count));
    int shift = 0;
    for (int i = 0; i < count; ++i) {
      if (q_levels.count(i)) shift++;
      nv[static_cast<size_t>(i)] = i + shift;
    }
    return nv;
  };
  auto nvmap = build_map(pi.cols, q_cols);
  auto nhmap = build_map(pi.rows, q_rows);
  auto shifted_v = [&](int v) { return q_cols.count(v) ? nvmap[static_cast<size_t>(v)] - 1 : nvmap[static_cast<size_t>(v)]; };
  auto shifted_h = [&](int h) { return q_rows.count(h) ? nhmap[static_cast<size_t>(h)] - 1 : nhmap[static_cast<size_t>(h)]; };

  SurfaceDiagram out;
  out.cols = pi.cols + static_cast<int>(q_cols.size());
  out.rows = pi.rows + static_cast<int>(q_rows.size());
  for (const auto& r : pi.rects)
    out.rects.push_back({shifted_v(r.vl), shifted_v(r.vr), shifted_h(r.hb), shifted_h(r.ht)});

  // Collar rectangles, one per edge of Q, using the boundary framing.
  // Edge {u,v} with u <_f v: vertical edge adds [u.v - eps; u.v] x [v.h; u.h - eps],
  // horizontal edge adds [v.v; u.v - eps] x [u.h - eps; u.h].
  auto greater_of = [&](bool vertical, int lvl_compact) -> GridPoint {
    auto& mp = vertical ? bl.greater_v : bl.greater_h;
    auto it = mp.find({vertical ? 0 : 1, lvl_compact});
    if (it == mp.end()) throw Error("internal: missing framing entry");
    return it->second;
  };
  auto uncompact = [&](GridPoint cp) -> GridPoint {
    for (const auto& [orig, c] : to_compact)
      if (c == cp) return orig;
    throw Error("internal: vertex not on the component");
  };
  for (int v : q_cols) {
    // the vertical edge on this column
    int lvl_compact = static_cast<int>(std::lower_bound(vm.begin(), vm.end(), v) - vm.begin());
    GridPoint greater_c = greater_of(true, lvl_compact);
    GridPoint gv = uncompact(greater_c);
    GridPoint uv{-1, -1};
    for (const auto& p : q_vertices)
      if (p.v == v && !(p == gv)) uv = p;
    if (uv.v < 0) throw Error("internal: missing edge endpoint");
    // u = lesser endpoint, v' = greater; rect [fresh(u.v); orig(u.v)] x [orig(g.h); fresh(u.h)]
    out.rects.push_back({nvmap[static_cast<size_t>(uv.v)] - 1, nvmap[static_cast<size_t>(uv.v)],
                         nhmap[static_cast<size_t>(gv.h)], nhmap[static_cast<size_t>(uv.h)] - 1});
  }
  for (int h : q_rows) {
    int lvl_compact = static_cast<int>(std::lower_bound(hm.begin(), hm.end(), h) - hm.begin());
    GridPoint greater_c = greater_of(false, lvl_compact);
    GridPoint gv = uncompact(greater_c);
    GridPoint uv{-1, -1};
    for (const auto& p : q_vertices)
      if (p.h == h && !(p == gv)) uv = p;
    if (uv.v < 0) throw Error("internal: missing edge endpoint");
    // horizontal edge: rect [orig(g.v); fresh(u.v)] x [fresh(u.h); orig(u.h)]
    out.rects.push_back({nvmap[static_cast<size_t>(gv.v)], nvmap[static_cast<size_t>(uv.v)] - 1,
                         nhmap[static_cast<size_t>(uv.h)] - 1, nhmap[static_cast<size_t>(uv.h)]});
  }
  validate_surface(out);
  return out;
}

}  // namespace gridsurf
