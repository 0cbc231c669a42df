#include <algorithm>
#include <functional>
#include <numeric>
#include <sstream>

#include "gridsurf/mirror.hpp"

namespace gridsurf {

int mirror_move_type(const MirrorMove& mv) {
  using K = MirrorMove::Kind;
  switch (mv.kind) {
    case K::Extension:
    case K::Elimination:
      return mv.mtype == DiagType::Slash ? 1 : 2;
    case K::BypassAdd:
    case K::BypassRemove:
      return corner_type(mv.corner) == DiagType::Back ? 1 : 2;
    case K::Slide:
      return (mv.corner == CornerRole::BL || mv.corner == CornerRole::TR) ? 1 : 2;
    case K::Split:
    case K::Merge:
      return mv.stype;
    default:
      return 0;  // neutral
  }
}

namespace {

struct LevelMaps {
  std::vector<int> vmap, hmap;  // old index -> new index
};

LevelMaps identity_maps(const MirrorDiagram& m) {
  LevelMaps lm;
  lm.vmap.resize(static_cast<size_t>(m.cols));
  lm.hmap.resize(static_cast<size_t>(m.rows));
  std::iota(lm.vmap.begin(), lm.vmap.end(), 0);
  std::iota(lm.hmap.begin(), lm.hmap.end(), 0);
  return lm;
}

// Inserts `count` fresh slots at `gap` on the axis and shifts the maps.
void insert_slots(LevelMaps& lm, LevelAxis axis, int gap, int count) {
  auto& mp = axis == LevelAxis::Vertical ? lm.vmap : lm.hmap;
  for (auto& x : mp)
    if (x >= gap) x += count;
}

void delete_slot(LevelMaps& lm, LevelAxis axis, int removed_new_index) {
  auto& mp = axis == LevelAxis::Vertical ? lm.vmap : lm.hmap;
  for (auto& x : mp) {
    if (x == removed_new_index) x = -1;
    else if (x > removed_new_index) x -= 1;
  }
}

GridPoint map_point(const LevelMaps& lm, GridPoint p) {
  int v = lm.vmap[static_cast<size_t>(p.v)];
  int h = lm.hmap[static_cast<size_t>(p.h)];
  if (v < 0 || h < 0) return {-1, -1};
  return {v, h};
}

bool rect_contains(const MirrorDiagram& m, int x1, int x2, int y1, int y2, GridPoint p,
                   bool closed = true) {
  if (closed)
    return in_closed_arc(x1, x2, p.v, m.cols) && in_closed_arc(y1, y2, p.h, m.rows);
  return in_open_arc(x1, x2, p.v, m.cols) && in_open_arc(y1, y2, p.h, m.rows);
}

GridPoint rect_corner(int x1, int x2, int y1, int y2, CornerRole c) {
  switch (c) {
    case CornerRole::BL: return {x1, y1};
    case CornerRole::BR: return {x2, y1};
    case CornerRole::TR: return {x2, y2};
    case CornerRole::TL: return {x1, y2};
  }
  return {};
}

// P4 pattern typing: backslash on the main diagonal, slash on the other.
void check_pattern_mirror(const MirrorDiagram& m, int x1, int x2, int y1, int y2, CornerRole c,
                          const char* ctx) {
  GridPoint g = rect_corner(x1, x2, y1, y2, c);
  auto it = m.mirrors.find(g);
  if (it == m.mirrors.end()) throw Error(std::string(ctx) + ": missing pattern mirror");
  if (it->second != corner_type(c)) throw Error(std::string(ctx) + ": wrong pattern mirror type");
}

void check_rect_empty(const MirrorDiagram& m, int x1, int x2, int y1, int y2,
                      const std::vector<GridPoint>& allowed, const char* ctx) {
  for (const auto& [p, t] : m.mirrors) {
    (void)t;
    if (!rect_contains(m, x1, x2, y1, y2, p)) continue;
    bool ok = false;
    for (const auto& a : allowed)
      if (a == p) ok = true;
    if (!ok) throw Error(std::string(ctx) + ": rectangle not empty");
  }
}

struct RawResult {
  MirrorDiagram m;
  LevelMaps lm;
  std::map<GridPoint, std::vector<GridPoint>> succ;
  std::set<std::pair<int, int>> involved;  // (axis 0=V/1=H, old level index)
  std::set<std::pair<int, int>> involved_new;  // new level indices
  bool pure_relabel = false;  // jump moves: circuits correspond verbatim
};

void carry_mirrors(const MirrorDiagram& src, RawResult& rr,
                   const std::set<GridPoint>& drop = {}) {
  for (const auto& [p, t] : src.mirrors) {
    if (drop.count(p)) continue;
    GridPoint q = map_point(rr.lm, p);
    if (q.v < 0) throw Error("internal: mirror on a deleted level");
    rr.m.mirrors[q] = t;
    rr.succ[p].push_back(q);
  }
}

void mark_involved(RawResult& rr, LevelAxis axis, int old_level) {
  rr.involved.insert({axis == LevelAxis::Vertical ? 0 : 1, old_level});
  auto& mp = axis == LevelAxis::Vertical ? rr.lm.vmap : rr.lm.hmap;
  if (old_level >= 0 && old_level < static_cast<int>(mp.size()) &&
      mp[static_cast<size_t>(old_level)] >= 0)
    rr.involved_new.insert(
        {axis == LevelAxis::Vertical ? 0 : 1, mp[static_cast<size_t>(old_level)]});
}

void mark_involved_new(RawResult& rr, LevelAxis axis, int new_level) {
  rr.involved_new.insert({axis == LevelAxis::Vertical ? 0 : 1, new_level});
}

// ---------- individual kinds -------------------------------------------------

RawResult raw_extension(const MirrorDiagram& m, const MirrorMove& mv) {
  RawResult rr;
  rr.lm = identity_maps(m);
  int span = mv.axis == LevelAxis::Vertical ? m.cols : m.rows;
  int tspan = mv.axis == LevelAxis::Vertical ? m.rows : m.cols;
  if (mv.gap < 0 || mv.gap > span) throw Error("extension: gap out of range");
  if (mv.host < 0 || mv.host >= tspan) throw Error("extension: host level out of range");
  insert_slots(rr.lm, mv.axis, mv.gap, 1);
  rr.m.cols = m.cols + (mv.axis == LevelAxis::Vertical ? 1 : 0);
  rr.m.rows = m.rows + (mv.axis == LevelAxis::Vertical ? 0 : 1);
  carry_mirrors(m, rr);
  GridPoint np = mv.axis == LevelAxis::Vertical ? GridPoint{mv.gap, mv.host}
                                                : GridPoint{mv.host, mv.gap};
  rr.m.mirrors[np] = mv.mtype;
  mark_involved_new(rr, mv.axis, mv.gap);
  mark_involved(rr, mv.axis == LevelAxis::Vertical ? LevelAxis::Horizontal : LevelAxis::Vertical,
                mv.host);
  return rr;
}

RawResult raw_elimination(const MirrorDiagram& m, const MirrorMove& mv) {
  RawResult rr;
  rr.lm = identity_maps(m);
  int span = mv.axis == LevelAxis::Vertical ? m.cols : m.rows;
  if (mv.level < 0 || mv.level >= span) throw Error("elimination: level out of range");
  std::vector<std::pair<GridPoint, DiagType>> on;
  for (const auto& [p, t] : m.mirrors)
    if ((mv.axis == LevelAxis::Vertical ? p.v : p.h) == mv.level) on.push_back({p, t});
  if (on.size() != 1) throw Error("elimination: level must carry exactly one mirror");
  if (on[0].second != mv.mtype) throw Error("elimination: mirror type mismatch");
  if (span <= 1) throw Error("elimination: cannot remove the last level");
  mark_involved(rr, mv.axis, mv.level);
  mark_involved(rr, mv.axis == LevelAxis::Vertical ? LevelAxis::Horizontal : LevelAxis::Vertical,
                mv.axis == LevelAxis::Vertical ? on[0].first.h : on[0].first.v);
  delete_slot(rr.lm, mv.axis, mv.level);
  rr.m.cols = m.cols - (mv.axis == LevelAxis::Vertical ? 1 : 0);
  rr.m.rows = m.rows - (mv.axis == LevelAxis::Vertical ? 0 : 1);
  carry_mirrors(m, rr, {on[0].first});
  return rr;
}

RawResult raw_bypass(const MirrorDiagram& m, const MirrorMove& mv, bool add) {
  RawResult rr;
  rr.lm = identity_maps(m);
  rr.m.cols = m.cols;
  rr.m.rows = m.rows;
  GridPoint target = rect_corner(mv.x1, mv.x2, mv.y1, mv.y2, mv.corner);
  std::vector<GridPoint> allowed;
  for (CornerRole c : {CornerRole::BL, CornerRole::BR, CornerRole::TR, CornerRole::TL}) {
    if (c == mv.corner && add) continue;
    check_pattern_mirror(m, mv.x1, mv.x2, mv.y1, mv.y2, c, add ? "bypass addition" : "bypass removal");
    allowed.push_back(rect_corner(mv.x1, mv.x2, mv.y1, mv.y2, c));
  }
  if (add && m.mirrors.count(target)) throw Error("bypass addition: target corner occupied");
  check_rect_empty(m, mv.x1, mv.x2, mv.y1, mv.y2, allowed,
                   add ? "bypass addition" : "bypass removal");
  carry_mirrors(m, rr, add ? std::set<GridPoint>{} : std::set<GridPoint>{target});
  if (add) rr.m.mirrors[target] = corner_type(mv.corner);
  for (int x : {mv.x1, mv.x2}) mark_involved(rr, LevelAxis::Vertical, x);
  for (int y : {mv.y1, mv.y2}) mark_involved(rr, LevelAxis::Horizontal, y);
  return rr;
}

RawResult raw_slide(const MirrorDiagram& m, const MirrorMove& mv) {
  RawResult rr;
  rr.lm = identity_maps(m);
  rr.m.cols = m.cols;
  rr.m.rows = m.rows;
  bool type1 = mv.corner == CornerRole::BL || mv.corner == CornerRole::TR;
  DiagType mt = type1 ? DiagType::Slash : DiagType::Back;
  CornerRole from = mv.corner;
  CornerRole to = from == CornerRole::BL   ? CornerRole::TR
                  : from == CornerRole::TR ? CornerRole::BL
                  : from == CornerRole::TL ? CornerRole::BR
                                           : CornerRole::TL;
  CornerRole h1 = type1 ? CornerRole::TL : CornerRole::BL;
  CornerRole h2 = type1 ? CornerRole::BR : CornerRole::TR;
  GridPoint pf = rect_corner(mv.x1, mv.x2, mv.y1, mv.y2, from);
  GridPoint pt = rect_corner(mv.x1, mv.x2, mv.y1, mv.y2, to);
  GridPoint ph1 = rect_corner(mv.x1, mv.x2, mv.y1, mv.y2, h1);
  GridPoint ph2 = rect_corner(mv.x1, mv.x2, mv.y1, mv.y2, h2);
  for (GridPoint g : {pf, ph1, ph2}) {
    auto it = m.mirrors.find(g);
    if (it == m.mirrors.end() || it->second != mt)
      throw Error("slide: pattern mirrors missing or of the wrong type");
  }
  if (m.mirrors.count(pt)) throw Error("slide: target corner occupied");
  check_rect_empty(m, mv.x1, mv.x2, mv.y1, mv.y2, {pf, ph1, ph2}, "slide");
  carry_mirrors(m, rr, {pf});
  rr.m.mirrors[pt] = mt;
  rr.succ[pf] = {pt};
  for (int x : {mv.x1, mv.x2}) mark_involved(rr, LevelAxis::Vertical, x);
  for (int y : {mv.y1, mv.y2}) mark_involved(rr, LevelAxis::Horizontal, y);
  return rr;
}

RawResult raw_bridge(const MirrorDiagram& m, const MirrorMove& mv, bool add) {
  // axis = axis of the fresh level; host = its partner level on the same
  // axis; x1,x2 = the transverse pair. fresh=0: fresh level below/left of the
  // host side of the rectangle; fresh=1: above/right.
  RawResult rr;
  rr.lm = identity_maps(m);
  LevelAxis tax = mv.axis == LevelAxis::Vertical ? LevelAxis::Horizontal : LevelAxis::Vertical;
  (void)tax;
  auto mk = [&](int a, int lvl) {
    return mv.axis == LevelAxis::Horizontal ? GridPoint{a, lvl} : GridPoint{lvl, a};
  };
  if (add) {
    int span = mv.axis == LevelAxis::Vertical ? m.cols : m.rows;
    if (mv.gap < 0 || mv.gap > span) throw Error("bridge addition: gap out of range");
    insert_slots(rr.lm, mv.axis, mv.gap, 1);
    rr.m.cols = m.cols + (mv.axis == LevelAxis::Vertical ? 1 : 0);
    rr.m.rows = m.rows + (mv.axis == LevelAxis::Vertical ? 0 : 1);
    int host_new = (mv.axis == LevelAxis::Vertical ? rr.lm.vmap : rr.lm.hmap)[static_cast<size_t>(mv.host)];
    int fresh_new = mv.gap;
    // rectangle in new coordinates; the fresh level is bottom iff fresh==0
    int ylo = mv.fresh == 0 ? fresh_new : host_new;
    int yhi = mv.fresh == 0 ? host_new : fresh_new;
    // pattern: BL backslash, BR slash, TL slash, TR backslash
    carry_mirrors(m, rr);
    auto need = [&](int x, int y, DiagType t, bool host_side) {
      GridPoint g = mk(x, y);
      if (host_side) {
        auto it = rr.m.mirrors.find(g);
        if (it == rr.m.mirrors.end() || it->second != t)
          throw Error("bridge addition: host mirrors missing or mistyped");
      } else {
        rr.m.mirrors[g] = t;
      }
    };
    bool host_is_bottom = mv.fresh == 1;
    need(mv.x1, host_is_bottom ? ylo : yhi, host_is_bottom ? DiagType::Back : DiagType::Slash, true);
    need(mv.x2, host_is_bottom ? ylo : yhi, host_is_bottom ? DiagType::Slash : DiagType::Back, true);
    need(mv.x1, host_is_bottom ? yhi : ylo, host_is_bottom ? DiagType::Slash : DiagType::Back, false);
    need(mv.x2, host_is_bottom ? yhi : ylo, host_is_bottom ? DiagType::Back : DiagType::Slash, false);
    // emptiness in new coordinates
    {
      MirrorDiagram probe = rr.m;
      std::vector<GridPoint> allowed;
      for (CornerRole c : {CornerRole::BL, CornerRole::BR, CornerRole::TR, CornerRole::TL}) {
        int cx = (c == CornerRole::BL || c == CornerRole::TL) ? mv.x1 : mv.x2;
        int cy = (c == CornerRole::BL || c == CornerRole::BR) ? ylo : yhi;
        allowed.push_back(mk(cx, cy));
      }
      if (mv.axis == LevelAxis::Horizontal)
        check_rect_empty(probe, mv.x1, mv.x2, ylo, yhi, allowed, "bridge addition");
      else
        check_rect_empty(probe, ylo, yhi, mv.x1, mv.x2, allowed, "bridge addition");
    }
    mark_involved(rr, mv.axis, mv.host);
    mark_involved_new(rr, mv.axis, fresh_new);
    mark_involved(rr, tax, mv.x1);
    mark_involved(rr, tax, mv.x2);
    return rr;
  }
  // removal: `level` carries exactly the fresh pair
  std::vector<std::pair<GridPoint, DiagType>> on;
  for (const auto& [p, t] : m.mirrors)
    if ((mv.axis == LevelAxis::Vertical ? p.v : p.h) == mv.level) on.push_back({p, t});
  if (on.size() != 2) throw Error("bridge removal: level must carry exactly two mirrors");
  int a0 = mv.axis == LevelAxis::Vertical ? on[0].first.h : on[0].first.v;
  int a1 = mv.axis == LevelAxis::Vertical ? on[1].first.h : on[1].first.v;
  DiagType t0 = on[0].second, t1 = on[1].second;
  if (t0 == t1) throw Error("bridge removal: pair must have opposite types");
  // try host above and below
  auto attempt = [&](bool host_above) -> bool {
    int ylo = host_above ? mv.level : mv.host;
    int yhi = host_above ? mv.host : mv.level;
    // typing: BL back, BR slash, TL slash, TR back
    DiagType want0 = (mv.level == ylo)
                         ? (a0 == std::min(a0, a1) ? DiagType::Back : DiagType::Slash)
                         : (a0 == std::min(a0, a1) ? DiagType::Slash : DiagType::Back);
    (void)want0;
    // determine x1 (left end): the end whose fresh-level mirror is BL/TL type
    int x1, x2;
    if (mv.level == ylo) {
      // fresh is bottom: its mirrors are BL (back) and BR (slash)
      x1 = t0 == DiagType::Back ? a0 : a1;
      x2 = t0 == DiagType::Back ? a1 : a0;
    } else {
      // fresh is top: TL slash, TR back
      x1 = t0 == DiagType::Slash ? a0 : a1;
      x2 = t0 == DiagType::Slash ? a1 : a0;
    }
    auto get = [&](int x, int y) -> const DiagType* {
      auto it = m.mirrors.find(mk(x, y));
      return it == m.mirrors.end() ? nullptr : &it->second;
    };
    int hosty = host_above ? yhi : ylo;
    const DiagType* h1 = get(x1, hosty);
    const DiagType* h2 = get(x2, hosty);
    DiagType w1 = host_above ? DiagType::Slash : DiagType::Back;
    DiagType w2 = host_above ? DiagType::Back : DiagType::Slash;
    if (!h1 || !h2 || *h1 != w1 || *h2 != w2) return false;
    std::vector<GridPoint> allowed = {mk(x1, ylo), mk(x2, ylo), mk(x1, yhi), mk(x2, yhi)};
    try {
      if (mv.axis == LevelAxis::Horizontal)
        check_rect_empty(m, x1, x2, ylo, yhi, allowed, "bridge removal");
      else
        check_rect_empty(m, ylo, yhi, x1, x2, allowed, "bridge removal");
    } catch (const Error&) {
      return false;
    }
    return true;
  };
  bool above = attempt(true);
  if (!above && !attempt(false)) throw Error("bridge removal: pattern not found");
  mark_involved(rr, mv.axis, mv.level);
  mark_involved(rr, mv.axis, mv.host);
  LevelAxis taxis = mv.axis == LevelAxis::Vertical ? LevelAxis::Horizontal : LevelAxis::Vertical;
  mark_involved(rr, taxis, a0);
  mark_involved(rr, taxis, a1);
  delete_slot(rr.lm, mv.axis, mv.level);
  rr.m.cols = m.cols - (mv.axis == LevelAxis::Vertical ? 1 : 0);
  rr.m.rows = m.rows - (mv.axis == LevelAxis::Vertical ? 0 : 1);
  carry_mirrors(m, rr, {on[0].first, on[1].first});
  return rr;
}

RawResult raw_twist(const MirrorDiagram& m, const MirrorMove& mv) {
  RawResult rr;
  rr.lm = identity_maps(m);
  rr.m.cols = m.cols;
  rr.m.rows = m.rows;
  std::vector<std::pair<GridPoint, DiagType>> on;
  for (const auto& [p, t] : m.mirrors)
    if ((mv.axis == LevelAxis::Vertical ? p.v : p.h) == mv.level) on.push_back({p, t});
  if (on.size() != 2 || on[0].second == on[1].second)
    throw Error("twist: level must carry exactly two mirrors of opposite types");
  carry_mirrors(m, rr);
  rr.m.mirrors[on[0].first] = flip_type(on[0].second);
  rr.m.mirrors[on[1].first] = flip_type(on[1].second);
  mark_involved(rr, mv.axis, mv.level);
  LevelAxis taxis = mv.axis == LevelAxis::Vertical ? LevelAxis::Horizontal : LevelAxis::Vertical;
  mark_involved(rr, taxis, mv.axis == LevelAxis::Vertical ? on[0].first.h : on[0].first.v);
  mark_involved(rr, taxis, mv.axis == LevelAxis::Vertical ? on[1].first.h : on[1].first.v);
  return rr;
}

RawResult raw_jump(const MirrorDiagram& m, const MirrorMove& mv) {
  // Move level `level` to the empty slot at `gap`, corridor on the side
  // `dir`. Combinatorially the level hops over the levels between.
  RawResult rr;
  rr.lm = identity_maps(m);
  rr.m.cols = m.cols;
  rr.m.rows = m.rows;
  int span = mv.axis == LevelAxis::Vertical ? m.cols : m.rows;
  if (mv.level < 0 || mv.level >= span || mv.gap < 0 || mv.gap > span)
    throw Error("jump: level or gap out of range");
  // mirrors on the moving level, transverse coordinates
  std::vector<int> coords;
  for (const auto& [p, t] : m.mirrors) {
    (void)t;
    if ((mv.axis == LevelAxis::Vertical ? p.v : p.h) == mv.level)
      coords.push_back(mv.axis == LevelAxis::Vertical ? p.h : p.v);
  }
  // minimal arc containing the mirrors: complement of the largest gap
  int tspan = mv.axis == LevelAxis::Vertical ? m.rows : m.cols;
  int arc_from = 0, arc_to = 0;  // empty when no mirrors
  if (!coords.empty()) {
    std::sort(coords.begin(), coords.end());
    int k = static_cast<int>(coords.size());
    int best_gap = -1, best_at = 0;
    for (int i = 0; i < k; ++i) {
      int a = coords[static_cast<size_t>(i)];
      int b = coords[static_cast<size_t>((i + 1) % k)];
      int g = cyc_dist(a, b, tspan);
      if (k == 1) g = tspan;
      if (g > best_gap) {
        best_gap = g;
        best_at = i;
      }
    }
    arc_from = coords[static_cast<size_t>((best_at + 1) % k)];
    arc_to = coords[static_cast<size_t>(best_at)];
  }
  // levels crossed by the corridor
  auto crossed = [&](int lvl) {
    // lvl (same axis) strictly between `level` and the target gap, going dir
    if (mv.dir > 0) return mod(lvl - mv.level - 1, span) < mod(mv.gap - mv.level - 1, span);
    return mod(mv.level - lvl, span) <= mod(mv.level - mv.gap, span) && lvl != mv.level;
  };
  if (!coords.empty()) {
    for (const auto& [p, t] : m.mirrors) {
      (void)t;
      int lvl = mv.axis == LevelAxis::Vertical ? p.v : p.h;
      int tc = mv.axis == LevelAxis::Vertical ? p.h : p.v;
      if (lvl == mv.level || !crossed(lvl)) continue;
      if (in_closed_arc(arc_from, arc_to, tc, tspan))
        throw Error("jump: corridor blocked by a mirror");
    }
  }
  // rebuild the level order: remove `level`, insert at `gap`
  auto& mp = mv.axis == LevelAxis::Vertical ? rr.lm.vmap : rr.lm.hmap;
  {
    std::vector<int> order;
    for (int i = 0; i < span; ++i)
      if (i != mv.level) order.push_back(i);
    // insert at position corresponding to gap among remaining levels
    int at = 0;
    for (int i = 0; i < span; ++i) {
      if (i == mv.level) continue;
      if (i < mv.gap) at++;
    }
    order.insert(order.begin() + at, mv.level);
    for (int i = 0; i < span; ++i) mp[static_cast<size_t>(order[static_cast<size_t>(i)])] = i;
  }
  carry_mirrors(m, rr);
  mark_involved(rr, mv.axis, mv.level);
  LevelAxis taxis = mv.axis == LevelAxis::Vertical ? LevelAxis::Horizontal : LevelAxis::Vertical;
  for (int c : coords) mark_involved(rr, taxis, c);
  rr.pure_relabel = true;
  return rr;
}

RawResult raw_wrinkle_or_doublesplit(const MirrorDiagram& m, const MirrorMove& mv, bool with_mid) {
  // base orientation: the split level is horizontal (a row)
  if (mv.axis != LevelAxis::Horizontal) {
    MirrorMove tm = mv;
    tm.axis = LevelAxis::Horizontal;
    RawResult inner = raw_wrinkle_or_doublesplit(apply_symmetry(m, Symmetry::Transpose), tm, with_mid);
    RawResult rr;
    rr.m = apply_symmetry(inner.m, Symmetry::Transpose);
    rr.lm.vmap = inner.lm.hmap;
    rr.lm.hmap = inner.lm.vmap;
    for (auto& [p, qs] : inner.succ) {
      auto& v = rr.succ[{p.h, p.v}];
      for (auto& q : qs) v.push_back({q.h, q.v});
    }
    for (auto& [ax, lvl] : inner.involved) rr.involved.insert({1 - ax, lvl});
    for (auto& [ax, lvl] : inner.involved_new) rr.involved_new.insert({1 - ax, lvl});
    return rr;
  }
  RawResult rr;
  rr.lm = identity_maps(m);
  int b = mv.back_pos, s = mv.slash_pos;
  auto itb = m.mirrors.find({b, mv.level});
  auto its = m.mirrors.find({s, mv.level});
  if (itb == m.mirrors.end() || itb->second != DiagType::Back)
    throw Error("wrinkle: no backslash mirror at the site");
  if (its == m.mirrors.end() || its->second != DiagType::Slash)
    throw Error("wrinkle: no slash mirror at the site");
  int extra = with_mid ? 2 : 1;
  insert_slots(rr.lm, LevelAxis::Horizontal, mv.level, extra);
  // the original slot becomes the top of the group
  rr.m.cols = m.cols;
  rr.m.rows = m.rows + extra;
  int lo = mv.level, hi = mv.level + extra, mid = mv.level + 1;
  for (const auto& [p, t] : m.mirrors) {
    if (p.h != mv.level) {
      GridPoint q = map_point(rr.lm, p);
      rr.m.mirrors[q] = t;
      rr.succ[p].push_back(q);
      continue;
    }
    if (p.v == b || p.v == s) continue;  // ramification mirrors handled below
    int dest = in_open_arc(b, s, p.v, m.cols) ? hi : lo;
    rr.m.mirrors[{p.v, dest}] = t;
    rr.succ[p].push_back({p.v, dest});
  }
  rr.m.mirrors[{b, lo}] = DiagType::Back;
  rr.m.mirrors[{b, hi}] = DiagType::Back;
  rr.m.mirrors[{s, lo}] = DiagType::Slash;
  rr.m.mirrors[{s, hi}] = DiagType::Slash;
  rr.succ[{b, mv.level}] = {{b, lo}, {b, hi}};
  rr.succ[{s, mv.level}] = {{s, lo}, {s, hi}};
  if (with_mid) {
    rr.m.mirrors[{b, mid}] = DiagType::Slash;
    rr.m.mirrors[{s, mid}] = DiagType::Back;
  }
  mark_involved(rr, LevelAxis::Horizontal, mv.level);
  for (int t = 0; t < extra; ++t) mark_involved_new(rr, LevelAxis::Horizontal, mv.level + t + 1);
  mark_involved_new(rr, LevelAxis::Horizontal, mv.level);
  mark_involved(rr, LevelAxis::Vertical, b);
  mark_involved(rr, LevelAxis::Vertical, s);
  return rr;
}

RawResult raw_wrinkle_reduce_or_doublemerge(const MirrorDiagram& m, const MirrorMove& mv,
                                            bool with_mid) {
  if (mv.axis != LevelAxis::Horizontal) {
    MirrorMove tm = mv;
    tm.axis = LevelAxis::Horizontal;
    RawResult inner =
        raw_wrinkle_reduce_or_doublemerge(apply_symmetry(m, Symmetry::Transpose), tm, with_mid);
    RawResult rr;
    rr.m = apply_symmetry(inner.m, Symmetry::Transpose);
    rr.lm.vmap = inner.lm.hmap;
    rr.lm.hmap = inner.lm.vmap;
    for (auto& [p, qs] : inner.succ) {
      auto& v = rr.succ[{p.h, p.v}];
      for (auto& q : qs) v.push_back({q.h, q.v});
    }
    for (auto& [ax, lvl] : inner.involved) rr.involved.insert({1 - ax, lvl});
    for (auto& [ax, lvl] : inner.involved_new) rr.involved_new.insert({1 - ax, lvl});
    return rr;
  }
  RawResult rr;
  rr.lm = identity_maps(m);
  int extra = with_mid ? 2 : 1;
  int lo = mv.level, hi = mv.level + extra, mid = mv.level + 1;
  if (hi >= m.rows) throw Error("wrinkle reduction: group out of range");
  // pattern detection
  auto row = [&](int h) {
    std::map<int, DiagType> out;
    for (const auto& [p, t] : m.mirrors)
      if (p.h == h) out[p.v] = t;
    return out;
  };
  auto rlo = row(lo), rhi = row(hi);
  int b = -1, s = -1;
  for (auto& [v, t] : rlo) {
    if (t == DiagType::Back && rhi.count(v) && rhi[v] == DiagType::Back) b = v;
    if (t == DiagType::Slash && rhi.count(v) && rhi[v] == DiagType::Slash) s = v;
  }
  if (b < 0 || s < 0) throw Error("wrinkle reduction: ramification pattern not found");
  if (with_mid) {
    auto rmid = row(mid);
    if (rmid.size() != 2 || !rmid.count(b) || rmid[b] != DiagType::Slash || !rmid.count(s) ||
        rmid[s] != DiagType::Back)
      throw Error("wrinkle reduction: middle level pattern not found");
  }
  // distribution: hi extras inside (b;s), lo extras inside (s;b)
  for (auto& [v, t] : rhi) {
    (void)t;
    if (v == b || v == s) continue;
    if (!in_open_arc(b, s, v, m.cols)) throw Error("wrinkle reduction: stray mirror above");
  }
  for (auto& [v, t] : rlo) {
    (void)t;
    if (v == b || v == s) continue;
    if (!in_open_arc(s, b, v, m.cols)) throw Error("wrinkle reduction: stray mirror below");
  }
  // merge
  for (int h = lo; h <= hi; ++h) mark_involved(rr, LevelAxis::Horizontal, h);
  mark_involved(rr, LevelAxis::Vertical, b);
  mark_involved(rr, LevelAxis::Vertical, s);
  for (int t = 0; t < extra; ++t) delete_slot(rr.lm, LevelAxis::Horizontal, mv.level + 1);
  rr.m.cols = m.cols;
  rr.m.rows = m.rows - extra;
  for (const auto& [p, t] : m.mirrors) {
    if (p.h < lo || p.h > hi) {
      GridPoint q = map_point(rr.lm, p);
      rr.m.mirrors[q] = t;
      rr.succ[p].push_back(q);
      continue;
    }
    if (p.v == b || p.v == s) {
      rr.m.mirrors[{p.v, lo}] = p.v == b ? DiagType::Back : DiagType::Slash;
      rr.succ[p].push_back({p.v, lo});
      continue;
    }
    rr.m.mirrors[{p.v, lo}] = t;
    rr.succ[p].push_back({p.v, lo});
  }
  return rr;
}

RawResult raw_split(const MirrorDiagram& m, const MirrorMove& mv) {
  if (mv.axis != LevelAxis::Horizontal) {
    MirrorMove tm = mv;
    tm.axis = LevelAxis::Horizontal;
    RawResult inner = raw_split(apply_symmetry(m, Symmetry::Transpose), tm);
    RawResult rr;
    rr.m = apply_symmetry(inner.m, Symmetry::Transpose);
    rr.lm.vmap = inner.lm.hmap;
    rr.lm.hmap = inner.lm.vmap;
    for (auto& [p, qs] : inner.succ) {
      auto& v = rr.succ[{p.h, p.v}];
      for (auto& q : qs) v.push_back({q.h, q.v});
    }
    for (auto& [ax, lvl] : inner.involved) rr.involved.insert({1 - ax, lvl});
    for (auto& [ax, lvl] : inner.involved_new) rr.involved_new.insert({1 - ax, lvl});
    return rr;
  }
  RawResult rr;
  rr.lm = identity_maps(m);
  DiagType split_t = mv.stype == 1 ? DiagType::Slash : DiagType::Back;
  auto it = m.mirrors.find({mv.spos, mv.level});
  if (it == m.mirrors.end() || it->second != split_t)
    throw Error("split: missing splitting mirror of the declared type");
  if (mv.cgap < 0 || mv.cgap > m.cols) throw Error("split: snip gap out of range");
  insert_slots(rr.lm, LevelAxis::Horizontal, mv.level, 1);
  rr.m.cols = m.cols;
  rr.m.rows = m.rows + 1;
  int lo = mv.level, hi = mv.level + 1;
  for (const auto& [p, t] : m.mirrors) {
    if (p.h != mv.level) {
      GridPoint q = map_point(rr.lm, p);
      rr.m.mirrors[q] = t;
      rr.succ[p].push_back(q);
      continue;
    }
    if (p.v == mv.spos) continue;
    // snip gap g: positions in [g; spos) go to the far side
    bool after_snip = mod(p.v - mv.cgap, m.cols) < mod(mv.spos - mv.cgap, m.cols);
    int dest;
    if (mv.stype == 1)
      dest = after_snip ? hi : lo;
    else
      dest = after_snip ? lo : hi;
    rr.m.mirrors[{p.v, dest}] = t;
    rr.succ[p].push_back({p.v, dest});
  }
  rr.m.mirrors[{mv.spos, lo}] = split_t;
  rr.m.mirrors[{mv.spos, hi}] = split_t;
  rr.succ[{mv.spos, mv.level}] = {{mv.spos, lo}, {mv.spos, hi}};
  mark_involved(rr, LevelAxis::Horizontal, mv.level);
  mark_involved_new(rr, LevelAxis::Horizontal, lo);
  mark_involved_new(rr, LevelAxis::Horizontal, hi);
  mark_involved(rr, LevelAxis::Vertical, mv.spos);
  return rr;
}

RawResult raw_merge(const MirrorDiagram& m, const MirrorMove& mv) {
  if (mv.axis != LevelAxis::Horizontal) {
    MirrorMove tm = mv;
    tm.axis = LevelAxis::Horizontal;
    RawResult inner = raw_merge(apply_symmetry(m, Symmetry::Transpose), tm);
    RawResult rr;
    rr.m = apply_symmetry(inner.m, Symmetry::Transpose);
    rr.lm.vmap = inner.lm.hmap;
    rr.lm.hmap = inner.lm.vmap;
    for (auto& [p, qs] : inner.succ) {
      auto& v = rr.succ[{p.h, p.v}];
      for (auto& q : qs) v.push_back({q.h, q.v});
    }
    for (auto& [ax, lvl] : inner.involved) rr.involved.insert({1 - ax, lvl});
    for (auto& [ax, lvl] : inner.involved_new) rr.involved_new.insert({1 - ax, lvl});
    return rr;
  }
  RawResult rr;
  rr.lm = identity_maps(m);
  DiagType split_t = mv.stype == 1 ? DiagType::Slash : DiagType::Back;
  int lo = mv.level, hi = mv.level + 1;
  if (hi >= m.rows) throw Error("merge: levels out of range");
  auto itlo = m.mirrors.find({mv.spos, lo});
  auto ithi = m.mirrors.find({mv.spos, hi});
  if (itlo == m.mirrors.end() || ithi == m.mirrors.end() || itlo->second != split_t ||
      ithi->second != split_t)
    throw Error("merge: missing splitting mirror pair");
  // separation: walking + from spos we must meet all lo-extras before all
  // hi-extras (type I; swapped for type II)
  int first_block_max = -1, second_block_min = m.cols + 1;
  for (const auto& [p, t] : m.mirrors) {
    (void)t;
    if (p.v == mv.spos) continue;
    if (p.h == lo) {
      int d = mod(p.v - mv.spos, m.cols);
      if (mv.stype == 1) first_block_max = std::max(first_block_max, d);
      else second_block_min = std::min(second_block_min, d);
    } else if (p.h == hi) {
      int d = mod(p.v - mv.spos, m.cols);
      if (mv.stype == 1) second_block_min = std::min(second_block_min, d);
      else first_block_max = std::max(first_block_max, d);
    }
  }
  if (first_block_max >= second_block_min)
    throw Error("merge: level contents interleave around the splitting mirror");
  mark_involved(rr, LevelAxis::Horizontal, lo);
  mark_involved(rr, LevelAxis::Horizontal, hi);
  mark_involved(rr, LevelAxis::Vertical, mv.spos);
  delete_slot(rr.lm, LevelAxis::Horizontal, hi);
  rr.m.cols = m.cols;
  rr.m.rows = m.rows - 1;
  for (const auto& [p, t] : m.mirrors) {
    if (p.h != lo && p.h != hi) {
      GridPoint q = map_point(rr.lm, p);
      rr.m.mirrors[q] = t;
      rr.succ[p].push_back(q);
      continue;
    }
    if (p.v == mv.spos) {
      rr.m.mirrors[{mv.spos, lo}] = split_t;
      rr.succ[p].push_back({mv.spos, lo});
      continue;
    }
    rr.m.mirrors[{p.v, lo}] = t;
    rr.succ[p].push_back({p.v, lo});
  }
  return rr;
}

// ---------- correspondence ----------------------------------------------------

std::map<std::string, std::string> build_correspondence(
    const MirrorDiagram& before, const std::vector<Circuit>& old_circuits,
    const std::vector<Circuit>& new_circuits, const RawResult& rr) {
  std::map<std::string, std::string> out;
  // transit lookup in the new diagram
  std::map<std::tuple<int, int, int, int>, std::string> new_transit;
  for (const auto& c : new_circuits)
    for (const auto& ev : c.events)
      new_transit[{ev.at.v, ev.at.h, static_cast<int>(ev.a), static_cast<int>(ev.b)}] = c.key;
  std::map<std::pair<int, int>, std::string> new_bare;
  for (const auto& c : new_circuits)
    if (c.bare) new_bare[{c.bare_axis == LevelAxis::Vertical ? 0 : 1, c.bare_level}] = c.key;

  auto level_involved_old = [&](LevelAxis ax, int lvl) {
    return rr.involved.count({ax == LevelAxis::Vertical ? 0 : 1, lvl}) > 0;
  };

  if (rr.pure_relabel) {
    for (const auto& c : old_circuits) {
      if (c.bare) {
        int lvl = c.bare_level;
        int nl = c.bare_axis == LevelAxis::Vertical ? rr.lm.vmap[static_cast<size_t>(lvl)]
                                                    : rr.lm.hmap[static_cast<size_t>(lvl)];
        auto it = new_bare.find({c.bare_axis == LevelAxis::Vertical ? 0 : 1, nl});
        if (it != new_bare.end()) out[c.key] = it->second;
        continue;
      }
      const CircuitEvent& ev = c.events[0];
      GridPoint q = map_point(rr.lm, ev.at);
      auto it = new_transit.find({q.v, q.h, static_cast<int>(ev.a), static_cast<int>(ev.b)});
      if (it != new_transit.end()) out[c.key] = it->second;
    }
    return out;
  }

  for (const auto& c : old_circuits) {
    if (c.bare) {
      if (level_involved_old(c.bare_axis, c.bare_level)) continue;
      int nl = c.bare_axis == LevelAxis::Vertical
                   ? rr.lm.vmap[static_cast<size_t>(c.bare_level)]
                   : rr.lm.hmap[static_cast<size_t>(c.bare_level)];
      if (nl < 0) continue;
      auto it = new_bare.find({c.bare_axis == LevelAxis::Vertical ? 0 : 1, nl});
      if (it != new_bare.end()) out[c.key] = it->second;
      continue;
    }
    std::string vote;
    bool conflict = false;
    for (const auto& ev : c.events) {
      // anchor only at mirrors both of whose levels are untouched
      if (level_involved_old(LevelAxis::Vertical, ev.at.v) ||
          level_involved_old(LevelAxis::Horizontal, ev.at.h))
        continue;
      auto su = rr.succ.find(ev.at);
      if (su == rr.succ.end() || su->second.size() != 1) continue;
      GridPoint q = su->second[0];
      auto it = new_transit.find({q.v, q.h, static_cast<int>(ev.a), static_cast<int>(ev.b)});
      if (it == new_transit.end()) continue;
      if (vote.empty()) vote = it->second;
      else if (vote != it->second) conflict = true;
    }
    if (!vote.empty() && !conflict) out[c.key] = vote;
  }

  // leftover pairing when unambiguous
  std::set<std::string> used_new;
  for (auto& [k, v] : out) used_new.insert(v);
  std::vector<std::string> un_old, un_new;
  for (const auto& c : old_circuits)
    if (!out.count(c.key)) un_old.push_back(c.key);
  for (const auto& c : new_circuits)
    if (!used_new.count(c.key)) un_new.push_back(c.key);
  if (un_old.size() == 1 && un_new.size() == 1) out[un_old[0]] = un_new[0];
  return out;
}

}  // namespace

MoveResult apply_mirror_move(const EnhancedMirrorDiagram& em, const MirrorMove& mv) {
  validate_enhanced(em);
  auto old_circuits = trace_circuits(em.m);
  std::map<std::string, const Circuit*> old_by_key;
  for (const auto& c : old_circuits) old_by_key[c.key] = &c;

  RawResult rr;
  using K = MirrorMove::Kind;
  switch (mv.kind) {
    case K::Extension: rr = raw_extension(em.m, mv); break;
    case K::Elimination: rr = raw_elimination(em.m, mv); break;
    case K::BypassAdd: rr = raw_bypass(em.m, mv, true); break;
    case K::BypassRemove: rr = raw_bypass(em.m, mv, false); break;
    case K::Slide: rr = raw_slide(em.m, mv); break;
    case K::BridgeAdd: rr = raw_bridge(em.m, mv, true); break;
    case K::BridgeRemove: rr = raw_bridge(em.m, mv, false); break;
    case K::Twist: rr = raw_twist(em.m, mv); break;
    case K::Jump: rr = raw_jump(em.m, mv); break;
    case K::WrinkleCreate: rr = raw_wrinkle_or_doublesplit(em.m, mv, true); break;
    case K::WrinkleReduce: rr = raw_wrinkle_reduce_or_doublemerge(em.m, mv, true); break;
    case K::DoubleSplit: rr = raw_wrinkle_or_doublesplit(em.m, mv, false); break;
    case K::DoubleMerge: rr = raw_wrinkle_reduce_or_doublemerge(em.m, mv, false); break;
    case K::Split: rr = raw_split(em.m, mv); break;
    case K::Merge: rr = raw_merge(em.m, mv); break;
    default: throw Error("unknown mirror move");
  }
  validate_mirror(rr.m);
  auto new_circuits = trace_circuits(rr.m);
  std::map<std::string, const Circuit*> new_by_key;
  for (const auto& c : new_circuits) new_by_key[c.key] = &c;

  MoveResult res;
  res.diagram.m = rr.m;
  res.vmap = rr.lm.vmap;
  res.hmap = rr.lm.hmap;
  res.mirror_succ = rr.succ;
  res.declared_type = mirror_move_type(mv);
  res.circuit_map = build_correspondence(em.m, old_circuits, new_circuits, rr);

  // --- enhanced bookkeeping ---

  // The circuit owning the straight passage across `coord` on a level.
  auto passage_owner = [&](const std::vector<Circuit>& circuits, const MirrorDiagram& dia,
                           LevelAxis axis, int level, int coord) -> std::string {
    int span = axis == LevelAxis::Vertical ? dia.rows : dia.cols;
    for (const auto& c : circuits) {
      if (c.bare) {
        if (c.bare_axis == axis && c.bare_level == level) return c.key;
        continue;
      }
      for (const auto& s : c.segments) {
        if (s.axis != axis || s.level != level) continue;
        if (s.from == s.to) {
          if (coord != s.from) return c.key;
        } else if (in_open_arc(s.from, s.to, coord, span)) {
          return c.key;
        }
      }
    }
    throw Error("internal: passage owner not found");
  };

  auto transit_owner = [&](const std::vector<Circuit>& circuits, GridPoint pos, Port a,
                           Port b) -> std::string {
    if (static_cast<int>(a) > static_cast<int>(b)) std::swap(a, b);
    for (const auto& c : circuits)
      for (const auto& ev : c.events)
        if (ev.at == pos && ev.a == a && ev.b == b) return c.key;
    throw Error("internal: transit owner not found");
  };

  auto rect_circuit_key = [&](bool in_new, int x2, int y1) -> std::string {
    return transit_owner(in_new ? new_circuits : old_circuits, {x2, y1}, Port::N, Port::W);
  };

  // --- per-kind corrections of the correspondence -----------------------
  std::vector<std::string> add_succs;  // successors of a split circuit
  std::string add_old;                 // the circuit that was split
  std::string rem_rect;                // the dying rectangle circuit

  switch (mv.kind) {
    case K::BypassAdd: {
      GridPoint target = rect_corner(mv.x1, mv.x2, mv.y1, mv.y2, mv.corner);
      std::string oc1 = passage_owner(old_circuits, em.m, LevelAxis::Horizontal, target.h, target.v);
      std::string oc2 = passage_owner(old_circuits, em.m, LevelAxis::Vertical, target.v, target.h);
      if (oc1 != oc2) throw Error("internal: bypass addition passages disagree");
      add_old = oc1;
      DiagType t = corner_type(mv.corner);
      Port a1 = t == DiagType::Back ? Port::S : Port::S;
      Port b1 = t == DiagType::Back ? Port::W : Port::E;
      Port a2 = Port::N;
      Port b2 = t == DiagType::Back ? Port::E : Port::W;
      std::string s1 = transit_owner(new_circuits, target, a1, b1);
      std::string s2 = transit_owner(new_circuits, target, a2, b2);
      add_succs = {s1, s2};
      res.circuit_map.erase(add_old);
      for (auto it = res.circuit_map.begin(); it != res.circuit_map.end();)
        it = (it->second == s1 || it->second == s2) ? res.circuit_map.erase(it) : std::next(it);
      break;
    }
    case K::BypassRemove: {
      GridPoint target = rect_corner(mv.x1, mv.x2, mv.y1, mv.y2, mv.corner);
      std::string c1 = rect_circuit_key(false, mv.x2, mv.y1);
      if (!em.holes.count(c1))
        throw Error("bypass removal: essential circuit required inessential");
      rem_rect = c1;
      // the other transit at the removed mirror belongs to c2
      DiagType t = corner_type(mv.corner);
      const Circuit* rectc = old_by_key.at(c1);
      std::pair<Port, Port> used{Port::N, Port::N};
      for (const auto& ev : rectc->events)
        if (ev.at == target) used = {ev.a, ev.b};
      std::pair<Port, Port> other;
      if (t == DiagType::Back)
        other = (used == std::make_pair(Port::S, Port::W)) ? std::make_pair(Port::N, Port::E)
                                                           : std::make_pair(Port::S, Port::W);
      else
        other = (used == std::make_pair(Port::S, Port::E)) ? std::make_pair(Port::N, Port::W)
                                                           : std::make_pair(Port::S, Port::E);
      std::string c2 = transit_owner(old_circuits, target, other.first, other.second);
      std::string cp = passage_owner(new_circuits, rr.m, LevelAxis::Horizontal, target.h, target.v);
      res.circuit_map.erase(c1);
      res.circuit_map.erase(c2);
      for (auto it = res.circuit_map.begin(); it != res.circuit_map.end();)
        it = (it->second == cp) ? res.circuit_map.erase(it) : std::next(it);
      res.circuit_map[c2] = cp;
      break;
    }
    default:
      break;
  }

  // leftovers after the corrections
  std::set<std::string> mapped_new;
  for (auto& [o, n] : res.circuit_map) mapped_new.insert(n);
  std::vector<std::string> un_old, un_new;
  for (const auto& c : old_circuits)
    if (!res.circuit_map.count(c.key) && c.key != rem_rect && c.key != add_old)
      un_old.push_back(c.key);
  for (const auto& c : new_circuits)
    if (!mapped_new.count(c.key) &&
        std::find(add_succs.begin(), add_succs.end(), c.key) == add_succs.end())
      un_new.push_back(c.key);

  // --- hole transport ----------------------------------------------------
  std::set<std::string> new_holes;
  for (auto& [o, n] : res.circuit_map)
    if (em.holes.count(o)) new_holes.insert(n);

  switch (mv.kind) {
    case K::BypassAdd: {
      if (em.holes.count(add_old)) {
        for (auto& s : add_succs) new_holes.insert(s);
      } else {
        std::string rectk = rect_circuit_key(true, mv.x2, mv.y1);
        std::string essential;
        if (!mv.essential_pick.empty()) {
          essential = mv.essential_pick;
        } else {
          std::vector<std::string> non_rect;
          for (auto& s : add_succs)
            if (s != rectk) non_rect.push_back(s);
          if (non_rect.size() != 1)
            throw Error("bypass addition: ambiguous essential successor, pass a pick");
          essential = non_rect[0];
        }
        bool found = false;
        for (auto& s : add_succs) {
          if (s == essential) found = true;
          else new_holes.insert(s);
        }
        if (!found) throw Error("bypass addition: essential pick is not a successor");
      }
      break;
    }
    case K::BridgeAdd:
    case K::WrinkleCreate:
    case K::DoubleSplit: {
      // circuits hitting exactly four mirrors once each inside the pattern
      // are demanded inessential
      std::vector<std::string> rest_new;
      for (auto& s : un_new) {
        const Circuit* c = new_by_key.at(s);
        if (!c->bare && c->events.size() == 4) new_holes.insert(s);
        else rest_new.push_back(s);
      }
      if (un_old.size() == 1 && rest_new.size() == 1) {
        res.circuit_map[un_old[0]] = rest_new[0];
        if (em.holes.count(un_old[0])) new_holes.insert(rest_new[0]);
      }
      break;
    }
    case K::Split: {
      if (un_old.size() == 1 && !un_new.empty()) {
        if (em.holes.count(un_old[0])) {
          for (auto& s : un_new) new_holes.insert(s);
        } else if (un_new.size() == 1) {
          res.circuit_map[un_old[0]] = un_new[0];
        } else if (!mv.essential_pick.empty()) {
          for (auto& s : un_new)
            if (s != mv.essential_pick) new_holes.insert(s);
          res.circuit_map[un_old[0]] = mv.essential_pick;
        } else {
          throw Error("split: ambiguous essential successor, pass a pick");
        }
      }
      break;
    }
    case K::Merge:
    case K::BridgeRemove:
    case K::WrinkleReduce:
    case K::DoubleMerge: {
      int essential_lost = 0;
      for (auto& o : un_old)
        if (!em.holes.count(o)) essential_lost++;
      for (auto& s : un_new) {
        if (essential_lost > 0) essential_lost--;
        else new_holes.insert(s);
      }
      if (un_old.size() >= 1 && un_new.size() == 1) {
        std::vector<std::string> ess;
        for (auto& o : un_old)
          if (!em.holes.count(o)) ess.push_back(o);
        if (ess.size() == 1) res.circuit_map[ess[0]] = un_new[0];
      }
      break;
    }
    default: {
      // one-to-one leftover (extension/elimination, slide, twist, jump)
      if (un_old.size() == 1 && un_new.size() == 1) {
        res.circuit_map[un_old[0]] = un_new[0];
        if (em.holes.count(un_old[0])) new_holes.insert(un_new[0]);
      }
      break;
    }
  }
  res.diagram.holes = new_holes;
  validate_enhanced(res.diagram);
  return res;
}

}  // namespace gridsurf
