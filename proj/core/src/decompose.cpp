#include <algorithm>
#include <functional>
#include <sstream>

#include "gridsurf/mirror.hpp"

namespace gridsurf {

namespace {

// Incremental script builder: every emitted move is applied immediately so
// later parameters refer to the current diagram.
struct Builder {
  EnhancedMirrorDiagram cur;
  std::vector<MirrorMove> script;
  MoveResult last;

  explicit Builder(EnhancedMirrorDiagram em) : cur(std::move(em)) {}

  const MoveResult& apply(const MirrorMove& mv) {
    last = apply_mirror_move(cur, mv);
    script.push_back(mv);
    cur = last.diagram;
    return last;
  }
};

MirrorMove mk_ext(LevelAxis axis, int gap, int host, DiagType t) {
  MirrorMove mv;
  mv.kind = MirrorMove::Kind::Extension;
  mv.axis = axis;
  mv.gap = gap;
  mv.host = host;
  mv.mtype = t;
  return mv;
}

MirrorMove mk_elim(LevelAxis axis, int level, DiagType t) {
  MirrorMove mv;
  mv.kind = MirrorMove::Kind::Elimination;
  mv.axis = axis;
  mv.level = level;
  mv.mtype = t;
  return mv;
}

MirrorMove mk_slide(int x1, int x2, int y1, int y2, CornerRole from) {
  MirrorMove mv;
  mv.kind = MirrorMove::Kind::Slide;
  mv.x1 = x1;
  mv.x2 = x2;
  mv.y1 = y1;
  mv.y2 = y2;
  mv.corner = from;
  return mv;
}

MirrorMove mk_bypass(bool add, int x1, int x2, int y1, int y2, CornerRole corner) {
  MirrorMove mv;
  mv.kind = add ? MirrorMove::Kind::BypassAdd : MirrorMove::Kind::BypassRemove;
  mv.x1 = x1;
  mv.x2 = x2;
  mv.y1 = y1;
  mv.y2 = y2;
  mv.corner = corner;
  return mv;
}

// --- conjugation --------------------------------------------------------------

int flip_gap(int gap, int n) { return mod(n - gap, n + 1) == 0 && gap == 0 ? n : n - gap; }

MirrorMove conjugate_move(const MirrorMove& mv, const MirrorDiagram& before, Symmetry s) {
  if (s != Symmetry::ReflectH && s != Symmetry::Transpose)
    throw Error("internal: unsupported move conjugation");
  MirrorMove out = mv;
  int rows = before.rows;
  auto fh = [&](int h) { return rows - 1 - h; };
  auto fgapH = [&](int g) { return rows - g; };
  using K = MirrorMove::Kind;

  if (s == Symmetry::Transpose) {
    out.axis = mv.axis == LevelAxis::Vertical ? LevelAxis::Horizontal : LevelAxis::Vertical;
    std::swap(out.x1, out.y1);
    std::swap(out.x2, out.y2);
    if (mv.corner == CornerRole::BR) out.corner = CornerRole::TL;
    else if (mv.corner == CornerRole::TL) out.corner = CornerRole::BR;
    return out;
  }

  auto flip_corner = [&](CornerRole c) {
    switch (c) {
      case CornerRole::BL: return CornerRole::TL;
      case CornerRole::TL: return CornerRole::BL;
      case CornerRole::BR: return CornerRole::TR;
      case CornerRole::TR: return CornerRole::BR;
    }
    return c;
  };

  switch (mv.kind) {
    case K::Extension:
      out.mtype = flip_type(mv.mtype);
      if (mv.axis == LevelAxis::Horizontal) out.gap = fgapH(mv.gap);
      else out.host = fh(mv.host);
      break;
    case K::Elimination:
      out.mtype = flip_type(mv.mtype);
      if (mv.axis == LevelAxis::Horizontal) out.level = fh(mv.level);
      else out.host = fh(mv.host);
      break;
    case K::BypassAdd:
    case K::BypassRemove:
    case K::Slide:
      out.y1 = fh(mv.y2);
      out.y2 = fh(mv.y1);
      out.corner = flip_corner(mv.corner);
      break;
    case K::BridgeAdd:
      if (mv.axis == LevelAxis::Horizontal) {
        out.gap = fgapH(mv.gap);
        out.host = fh(mv.host);
        out.fresh = 1 - mv.fresh;
      } else {
        out.x1 = fh(mv.x2);
        out.x2 = fh(mv.x1);
      }
      break;
    case K::BridgeRemove:
      if (mv.axis == LevelAxis::Horizontal) {
        out.level = fh(mv.level);
        out.host = fh(mv.host);
      } else {
        out.x1 = fh(mv.x2);
        out.x2 = fh(mv.x1);
      }
      break;
    case K::Twist:
      if (mv.axis == LevelAxis::Horizontal) out.level = fh(mv.level);
      break;
    case K::Jump:
      if (mv.axis == LevelAxis::Horizontal) {
        out.level = fh(mv.level);
        out.gap = fgapH(mv.gap);
        out.dir = -mv.dir;
      }
      break;
    case K::WrinkleCreate:
    case K::DoubleSplit:
      if (mv.axis == LevelAxis::Horizontal) {
        out.level = fh(mv.level);
        std::swap(out.back_pos, out.slash_pos);
      } else {
        out.back_pos = fh(mv.slash_pos);
        out.slash_pos = fh(mv.back_pos);
      }
      break;
    case K::WrinkleReduce:
    case K::DoubleMerge: {
      int extra = mv.kind == K::WrinkleReduce ? 2 : 1;
      if (mv.axis == LevelAxis::Horizontal) out.level = fh(mv.level + extra);
      break;
    }
    case K::Split:
      out.stype = 3 - mv.stype;
      if (mv.axis == LevelAxis::Horizontal) {
        out.level = fh(mv.level);
      } else {
        out.spos = fh(mv.spos);
        out.cgap = fgapH(mv.cgap);
      }
      break;
    case K::Merge:
      out.stype = 3 - mv.stype;
      if (mv.axis == LevelAxis::Horizontal) {
        out.level = fh(mv.level + 1);
      } else {
        out.spos = fh(mv.spos);
      }
      break;
  }
  return out;
}

// Conjugates a script valid on `start` into one valid on s(start).
std::vector<MirrorMove> conjugate_script(const EnhancedMirrorDiagram& start,
                                         const std::vector<MirrorMove>& script, Symmetry s) {
  std::vector<MirrorMove> out;
  EnhancedMirrorDiagram cur = start;
  for (const auto& mv : script) {
    out.push_back(conjugate_move(mv, cur.m, s));
    cur = apply_mirror_move(cur, mv).diagram;
  }
  return out;
}

GridPoint conjugate_point(GridPoint p, const MirrorDiagram& m, Symmetry s) {
  switch (s) {
    case Symmetry::ReflectH: return {p.v, m.rows - 1 - p.h};
    case Symmetry::ReflectV: return {m.cols - 1 - p.v, p.h};
    case Symmetry::Transpose: return {p.h, p.v};
    case Symmetry::AntiTranspose: return {m.rows - 1 - p.h, m.cols - 1 - p.v};
  }
  return p;
}

Port conjugate_port(Port p, Symmetry s) {
  switch (s) {
    case Symmetry::ReflectH:
      return p == Port::N ? Port::S : p == Port::S ? Port::N : p;
    case Symmetry::ReflectV:
      return p == Port::E ? Port::W : p == Port::W ? Port::E : p;
    case Symmetry::Transpose:
      switch (p) {
        case Port::N: return Port::E;
        case Port::E: return Port::N;
        case Port::S: return Port::W;
        case Port::W: return Port::S;
      }
      break;
    case Symmetry::AntiTranspose:
      switch (p) {
        case Port::N: return Port::W;
        case Port::W: return Port::N;
        case Port::S: return Port::E;
        case Port::E: return Port::S;
      }
      break;
  }
  return p;
}

}  // namespace

namespace detail_conj {

EnhancedMirrorDiagram conjugate_enhanced(const EnhancedMirrorDiagram& em, Symmetry s) {
  EnhancedMirrorDiagram out;
  out.m = apply_symmetry(em.m, s);
  auto old_c = trace_circuits(em.m);
  auto new_c = trace_circuits(out.m);
  for (const auto& h : em.holes) {
    for (const auto& c : old_c) {
      if (c.key != h) continue;
      if (c.bare) {
        LevelAxis ax = c.bare_axis;
        int lvl = c.bare_level;
        if (s == Symmetry::ReflectH && ax == LevelAxis::Horizontal) lvl = em.m.rows - 1 - lvl;
        if (s == Symmetry::ReflectV && ax == LevelAxis::Vertical) lvl = em.m.cols - 1 - lvl;
        if (s == Symmetry::Transpose || s == Symmetry::AntiTranspose) {
          if (s == Symmetry::AntiTranspose)
            lvl = (ax == LevelAxis::Vertical ? em.m.cols : em.m.rows) - 1 - lvl;
          ax = ax == LevelAxis::Vertical ? LevelAxis::Horizontal : LevelAxis::Vertical;
        }
        for (const auto& nc : new_c)
          if (nc.bare && nc.bare_axis == ax && nc.bare_level == lvl) out.holes.insert(nc.key);
        continue;
      }
      const CircuitEvent& ev = c.events[0];
      GridPoint q = conjugate_point(ev.at, em.m, s);
      Port a = conjugate_port(ev.a, s), b = conjugate_port(ev.b, s);
      if (static_cast<int>(a) > static_cast<int>(b)) std::swap(a, b);
      for (const auto& nc : new_c)
        for (const auto& nev : nc.events)
          if (nev.at == q && nev.a == a && nev.b == b) out.holes.insert(nc.key);
    }
  }
  return out;
}

}  // namespace detail_conj

namespace {

using detail_conj::conjugate_enhanced;

// --- the transfer primitive ---------------------------------------------------
//
// Moves the mirror at (x, src_row) to (x, dst_row) with type-1 elementary
// moves, using slash anchors at (r, src_row) and (r, dst_row). `upward` means
// the destination lies on the positive side of the source row.
void transfer_type1(Builder& b, int x, int src_row, int dst_row, int r, bool upward) {
  MirrorDiagram& m = b.cur.m;
  auto it = m.mirrors.find({x, src_row});
  if (it == m.mirrors.end()) throw Error("transfer: missing mirror");
  DiagType t = it->second;
  int g = upward ? dst_row : dst_row + 1;  // fresh helper row hugging dst
  b.apply(mk_ext(LevelAxis::Horizontal, g, x, DiagType::Slash));
  int src = src_row >= g ? src_row + 1 : src_row;
  int dst = dst_row >= g ? dst_row + 1 : dst_row;
  if (t == DiagType::Slash) {
    if (upward) {
      b.apply(mk_slide(x, r, src, g, CornerRole::BL));
      b.apply(mk_slide(r, x, g, dst, CornerRole::BL));
    } else {
      b.apply(mk_slide(r, x, g, src, CornerRole::TR));
      b.apply(mk_slide(x, r, dst, g, CornerRole::TR));
    }
  } else {
    if (upward) {
      b.apply(mk_bypass(true, x, r, src, g, CornerRole::TR));
      b.apply(mk_bypass(false, x, r, src, g, CornerRole::BL));
      b.apply(mk_bypass(true, r, x, g, dst, CornerRole::TR));
      b.apply(mk_bypass(false, r, x, g, dst, CornerRole::BL));
    } else {
      b.apply(mk_bypass(true, r, x, g, src, CornerRole::BL));
      b.apply(mk_bypass(false, r, x, g, src, CornerRole::TR));
      b.apply(mk_bypass(true, x, r, dst, g, CornerRole::BL));
      b.apply(mk_bypass(false, x, r, dst, g, CornerRole::TR));
    }
  }
  // the helper row now carries only the scaffold slash at x
  int g_now = g;
  b.apply(mk_elim(LevelAxis::Horizontal, g_now, DiagType::Slash));
}

// --- kind-specific type-1 decompositions (horizontal base orientation) --------

void decompose_jump_1(Builder& b, int level, int gap, int dir) {
  const MirrorDiagram& m0 = b.cur.m;
  std::vector<int> coords;
  for (const auto& [p, t] : m0.mirrors) {
    (void)t;
    if (p.h == level) coords.push_back(p.v);
  }
  std::sort(coords.begin(), coords.end());
  bool upward = dir > 0;

  int r_gap = 0;
  if (!coords.empty()) {
    int k = static_cast<int>(coords.size());
    int best = -1, at = 0;
    for (int i = 0; i < k; ++i) {
      int a = coords[static_cast<size_t>(i)];
      int bb = coords[static_cast<size_t>((i + 1) % k)];
      int gsz = k == 1 ? m0.cols : cyc_dist(a, bb, m0.cols);
      if (gsz > best) {
        best = gsz;
        at = i;
      }
    }
    int arc_hi = coords[static_cast<size_t>(at)];
    int arc_lo = coords[static_cast<size_t>((at + 1) % k)];
    // anchors sit past the block: on the right for upward corridors, on the
    // left for downward ones
    r_gap = upward ? arc_hi + 1 : arc_lo;
  }
  b.apply(mk_ext(LevelAxis::Vertical, r_gap, level, DiagType::Slash));
  int r = r_gap;
  int lvl = level;
  b.apply(mk_ext(LevelAxis::Horizontal, gap, r, DiagType::Slash));
  int L = gap;
  if (L <= lvl) lvl += 1;
  std::vector<int> order;
  for (const auto& [p, t] : b.cur.m.mirrors) {
    (void)t;
    if (p.h == lvl && p.v != r) order.push_back(p.v);
  }
  int cols_now = b.cur.m.cols;
  std::sort(order.begin(), order.end(), [&](int a, int bb) {
    return upward ? cyc_dist(a, r, cols_now) < cyc_dist(bb, r, cols_now)
                  : cyc_dist(r, a, cols_now) < cyc_dist(r, bb, cols_now);
  });
  for (int x : order) transfer_type1(b, x, lvl, L, r, upward);
  b.apply(mk_elim(LevelAxis::Horizontal, lvl, DiagType::Slash));
  b.apply(mk_elim(LevelAxis::Vertical, r, DiagType::Slash));
}

void decompose_split_1(Builder& b, int level, int spos, int cgap) {
  b.apply(mk_ext(LevelAxis::Horizontal, level + 1, spos, DiagType::Slash));
  int lo = level, hi = level + 1;
  std::vector<int> block;
  int cols_now = b.cur.m.cols;
  for (const auto& [p, t] : b.cur.m.mirrors) {
    (void)t;
    if (p.h == lo && p.v != spos && mod(p.v - cgap, cols_now) < mod(spos - cgap, cols_now))
      block.push_back(p.v);
  }
  std::sort(block.begin(), block.end(), [&](int a, int bb) {
    return cyc_dist(a, spos, cols_now) < cyc_dist(bb, spos, cols_now);
  });
  for (int x : block) transfer_type1(b, x, lo, hi, spos, true);
}

void decompose_bridge_add(Builder& b, const MirrorMove& mv, int target_type) {
  bool fresh_top = mv.fresh == 1;
  int fresh_idx = mv.gap;
  int host_idx = mv.host >= mv.gap ? mv.host + 1 : mv.host;
  int ylo = fresh_top ? host_idx : fresh_idx;
  int yhi = fresh_top ? fresh_idx : host_idx;
  auto bp = [&](bool add, CornerRole c) {
    return mv.axis == LevelAxis::Horizontal ? mk_bypass(add, mv.x1, mv.x2, ylo, yhi, c)
                                            : mk_bypass(add, ylo, yhi, mv.x1, mv.x2, c);
  };
  auto corner_transverse = [&](CornerRole c) {
    // the transverse coordinate (x1 or x2) of a pattern corner
    bool left = c == CornerRole::BL || c == CornerRole::TL;
    if (mv.axis == LevelAxis::Vertical) {
      // rect = [ylo;yhi] x [x1;x2]: BL/TL distinguish the y side, so recompute
      bool low = c == CornerRole::BL || c == CornerRole::TL;
      (void)low;
    }
    return left ? mv.x1 : mv.x2;
  };
  (void)corner_transverse;
  if (mv.axis != LevelAxis::Horizontal)
    throw Error("internal: bridge decomposition expects the horizontal base");
  if (target_type == 1) {
    // the fresh pair is {slash, backslash}: extension adds the slash
    CornerRole slash_corner = fresh_top ? CornerRole::TL : CornerRole::BR;
    CornerRole back_corner = fresh_top ? CornerRole::TR : CornerRole::BL;
    int sx = slash_corner == CornerRole::TL || slash_corner == CornerRole::BL ? mv.x1 : mv.x2;
    b.apply(mk_ext(mv.axis, mv.gap, sx, DiagType::Slash));
    b.apply(bp(true, back_corner));
  } else {
    CornerRole back_corner = fresh_top ? CornerRole::TR : CornerRole::BL;
    CornerRole slash_corner = fresh_top ? CornerRole::TL : CornerRole::BR;
    int bx = back_corner == CornerRole::TL || back_corner == CornerRole::BL ? mv.x1 : mv.x2;
    b.apply(mk_ext(mv.axis, mv.gap, bx, DiagType::Back));
    b.apply(bp(true, slash_corner));
  }
}

void decompose_bridge_remove(Builder& b, const MirrorMove& mv, int target_type) {
  std::vector<std::pair<GridPoint, DiagType>> on;
  for (const auto& [p, t] : b.cur.m.mirrors)
    if ((mv.axis == LevelAxis::Vertical ? p.v : p.h) == mv.level) on.push_back({p, t});
  if (on.size() != 2) throw Error("bridge removal: level must carry exactly two mirrors");
  auto tv = [&](GridPoint p) { return mv.axis == LevelAxis::Vertical ? p.h : p.v; };
  GridPoint back = on[0].second == DiagType::Back ? on[0].first : on[1].first;
  GridPoint slash = on[0].second == DiagType::Back ? on[1].first : on[0].first;
  bool host_after = mv.host > mv.level;
  int x1, x2, ylo, yhi;
  if (host_after) {
    x1 = tv(back);
    x2 = tv(slash);
    ylo = mv.level;
    yhi = mv.host;
  } else {
    x1 = tv(slash);
    x2 = tv(back);
    ylo = mv.host;
    yhi = mv.level;
  }
  auto bp = [&](bool add, CornerRole c) {
    return mv.axis == LevelAxis::Horizontal ? mk_bypass(add, x1, x2, ylo, yhi, c)
                                            : mk_bypass(add, ylo, yhi, x1, x2, c);
  };
  if (mv.axis != LevelAxis::Horizontal)
    throw Error("internal: bridge decomposition expects the horizontal base");
  CornerRole back_corner = host_after ? CornerRole::BL : CornerRole::TR;
  CornerRole slash_corner = host_after ? CornerRole::BR : CornerRole::TL;
  if (target_type == 1) {
    b.apply(bp(false, back_corner));
    b.apply(mk_elim(mv.axis, mv.level, DiagType::Slash));
  } else {
    b.apply(bp(false, slash_corner));
    b.apply(mk_elim(mv.axis, mv.level, DiagType::Back));
  }
}

void decompose_twist(Builder& b, const MirrorMove& mv, int target_type) {
  std::vector<std::pair<GridPoint, DiagType>> on;
  for (const auto& [p, t] : b.cur.m.mirrors)
    if ((mv.axis == LevelAxis::Vertical ? p.v : p.h) == mv.level) on.push_back({p, t});
  if (on.size() != 2 || on[0].second == on[1].second)
    throw Error("twist: level must carry exactly two mirrors of opposite types");
  auto tv = [&](GridPoint p) { return mv.axis == LevelAxis::Vertical ? p.h : p.v; };
  int back_x = tv(on[0].second == DiagType::Back ? on[0].first : on[1].first);
  int slash_x = tv(on[0].second == DiagType::Back ? on[1].first : on[0].first);
  MirrorMove add;
  add.kind = MirrorMove::Kind::BridgeAdd;
  add.axis = mv.axis;
  add.gap = mv.level + 1;
  add.host = mv.level;
  add.x1 = back_x;
  add.x2 = slash_x;
  add.fresh = 1;
  decompose_bridge_add(b, add, target_type);
  MirrorMove rem;
  rem.kind = MirrorMove::Kind::BridgeRemove;
  rem.axis = mv.axis;
  rem.level = mv.level;
  rem.host = mv.level + 1;
  decompose_bridge_remove(b, rem, target_type);
}

void decompose_wrinkle_1(Builder& b, int level, int back_pos, int slash_pos) {
  const MirrorDiagram& m0 = b.cur.m;
  int bpos = back_pos, spos = slash_pos;
  std::vector<int> X;
  for (const auto& [p, t] : m0.mirrors) {
    (void)t;
    if (p.h == level && in_open_arc(bpos, spos, p.v, m0.cols)) X.push_back(p.v);
  }
  int r_gap = spos;  // fresh meridian just before the slash ramification
  b.apply(mk_ext(LevelAxis::Vertical, r_gap, level, DiagType::Slash));
  int r = r_gap;
  auto sh = [&](int x) { return x >= r_gap ? x + 1 : x; };
  bpos = sh(bpos);
  spos = sh(spos);
  for (auto& x : X) x = sh(x);
  b.apply(mk_ext(LevelAxis::Horizontal, level + 1, r, DiagType::Slash));
  int lo = level, hi = level + 1;
  int cols_now = b.cur.m.cols;
  std::sort(X.begin(), X.end(), [&](int a, int bb) {
    return cyc_dist(a, r, cols_now) < cyc_dist(bb, r, cols_now);
  });
  for (int x : X) transfer_type1(b, x, lo, hi, r, true);
  b.apply(mk_slide(r, spos, lo, hi, CornerRole::BL));
  b.apply(mk_elim(LevelAxis::Vertical, r, DiagType::Slash));
  bpos = bpos > r ? bpos - 1 : bpos;
  spos = spos > r ? spos - 1 : spos;
  b.apply(mk_ext(LevelAxis::Horizontal, hi, bpos, DiagType::Slash));
  int c = hi;
  int hi2 = hi + 1;
  b.apply(mk_bypass(true, bpos, spos, lo, c, CornerRole::TR));
  b.apply(mk_bypass(true, spos, bpos, c, hi2, CornerRole::TR));
}

void decompose_double_split_1(Builder& b, int level, int back_pos, int slash_pos) {
  decompose_wrinkle_1(b, level, back_pos, slash_pos);
  MirrorMove rem;
  rem.kind = MirrorMove::Kind::BridgeRemove;
  rem.axis = LevelAxis::Horizontal;
  rem.level = level + 1;
  rem.host = level;
  decompose_bridge_remove(b, rem, 1);
}

// Inverts an elementary script step, given the diagram state the forward
// move was applied to.
MirrorMove invert_elementary(const MirrorMove& mv, const MirrorDiagram& pre) {
  using K = MirrorMove::Kind;
  MirrorMove r = mv;
  switch (mv.kind) {
    case K::Extension:
      r.kind = K::Elimination;
      r.level = mv.gap;
      return r;
    case K::Elimination: {
      r.kind = K::Extension;
      r.gap = mv.level;
      for (const auto& [p, t] : pre.mirrors)
        if ((mv.axis == LevelAxis::Vertical ? p.v : p.h) == mv.level) {
          r.host = mv.axis == LevelAxis::Vertical ? p.h : p.v;
          r.mtype = t;
        }
      return r;
    }
    case K::BypassAdd:
      r.kind = K::BypassRemove;
      return r;
    case K::BypassRemove:
      r.kind = K::BypassAdd;
      return r;
    case K::Slide:
      r.corner = mv.corner == CornerRole::BL   ? CornerRole::TR
                 : mv.corner == CornerRole::TR ? CornerRole::BL
                 : mv.corner == CornerRole::TL ? CornerRole::BR
                                               : CornerRole::TL;
      return r;
    default:
      throw Error("internal: cannot invert a non-elementary step");
  }
}

}  // namespace

// --- generalized split --------------------------------------------------------

namespace {

void gen_split_rec(Builder& b, SplittingRoute route);

void gen_split_step_single(Builder& b, SplittingRoute& route) {
  GridPoint muk = route.mirrors.back();
  MirrorMove sp;
  sp.kind = MirrorMove::Kind::Split;
  sp.stype = route.rtype == 2 ? 1 : 2;  // the tail mirror carries the body type
  sp.axis = route.p_axis;
  sp.level = route.p_level;
  sp.spos = route.p_axis == LevelAxis::Horizontal ? muk.v : muk.h;
  sp.cgap = route.p_gap;
  const MoveResult& res = b.apply(sp);

  std::vector<std::vector<GridPoint>> succs;
  for (size_t i = 0; i + 1 < route.mirrors.size(); ++i)
    succs.push_back(res.mirror_succ.at(route.mirrors[i]));
  auto copies = res.mirror_succ.at(muk);
  if (copies.size() != 2) throw Error("internal: splitting mirror did not duplicate");
  SplittingRoute next;
  next.rtype = route.rtype;
  next.double_headed = route.double_headed;
  GridPoint c0 = copies[0], c1 = copies[1];
  if (route.p_axis == LevelAxis::Horizontal) {
    next.p_axis = LevelAxis::Vertical;
    next.p_level = c0.v;
    next.p_gap = std::max(c0.h, c1.h);
  } else {
    next.p_axis = LevelAxis::Horizontal;
    next.p_level = c0.h;
    next.p_gap = std::max(c0.v, c1.v);
  }
  std::function<bool(size_t, std::vector<GridPoint>&)> pick =
      [&](size_t i, std::vector<GridPoint>& acc) -> bool {
    if (i == succs.size()) {
      SplittingRoute cand = next;
      cand.mirrors = acc;
      try {
        validate_splitting_route(b.cur.m, cand);
      } catch (const Error&) {
        return false;
      }
      next.mirrors = acc;
      return true;
    }
    for (const auto& q : succs[i]) {
      acc.push_back(q);
      if (pick(i + 1, acc)) return true;
      acc.pop_back();
    }
    return false;
  };
  std::vector<GridPoint> acc;
  if (!pick(0, acc)) throw Error("generalized split: no valid successor route");
  route = next;
}

void gen_split_rec(Builder& b, SplittingRoute route) {
  validate_splitting_route(b.cur.m, route);
  size_t k = route.mirrors.size();
  if (!route.double_headed) {
    if (k == 1) {
      GridPoint mu = route.mirrors[0];
      MirrorMove sp;
      sp.kind = MirrorMove::Kind::Split;
      sp.stype = route.rtype;
      sp.axis = route.p_axis;
      sp.level = route.p_level;
      sp.spos = route.p_axis == LevelAxis::Horizontal ? mu.v : mu.h;
      sp.cgap = route.p_gap;
      b.apply(sp);
      return;
    }
    gen_split_step_single(b, route);
    gen_split_rec(b, route);
    return;
  }
  if (route_is_special(route)) {
    GridPoint mu1 = route.mirrors[0], mu2 = route.mirrors[1];
    LevelAxis shared_axis;
    int shared_level;
    if (mu1 == mu2) {
      shared_axis =
          route.p_axis == LevelAxis::Vertical ? LevelAxis::Horizontal : LevelAxis::Vertical;
      shared_level = shared_axis == LevelAxis::Horizontal ? mu1.h : mu1.v;
    } else if (mu1.h == mu2.h) {
      shared_axis = LevelAxis::Horizontal;
      shared_level = mu1.h;
    } else {
      shared_axis = LevelAxis::Vertical;
      shared_level = mu1.v;
    }
    DiagType aux_t = route.rtype == 2 ? DiagType::Slash : DiagType::Back;
    int aux_gap = (shared_axis == LevelAxis::Horizontal ? mu2.v : mu2.h) + 1;
    LevelAxis aux_axis =
        shared_axis == LevelAxis::Horizontal ? LevelAxis::Vertical : LevelAxis::Horizontal;
    b.apply(mk_ext(aux_axis, aux_gap, shared_level, aux_t));
    auto fix = [&](GridPoint p) {
      if (aux_axis == LevelAxis::Vertical) return GridPoint{p.v >= aux_gap ? p.v + 1 : p.v, p.h};
      return GridPoint{p.v, p.h >= aux_gap ? p.h + 1 : p.h};
    };
    GridPoint aux = shared_axis == LevelAxis::Horizontal ? GridPoint{aux_gap, shared_level}
                                                         : GridPoint{shared_level, aux_gap};
    SplittingRoute longer;
    longer.rtype = route.rtype;
    longer.double_headed = true;
    longer.mirrors = {fix(mu1), aux, aux, fix(mu2)};
    longer.p_axis = route.p_axis;
    longer.p_level = route.p_level;
    longer.p_gap = route.p_gap;
    if (aux_axis == LevelAxis::Vertical) {
      if (route.p_axis == LevelAxis::Vertical && route.p_level >= aux_gap) longer.p_level++;
      if (route.p_axis == LevelAxis::Horizontal && route.p_gap >= aux_gap) longer.p_gap++;
    } else {
      if (route.p_axis == LevelAxis::Horizontal && route.p_level >= aux_gap) longer.p_level++;
      if (route.p_axis == LevelAxis::Vertical && route.p_gap >= aux_gap) longer.p_gap++;
    }
    gen_split_rec(b, longer);
    return;
  }
  // double split at the two head-side mirrors
  GridPoint muk = route.mirrors[k - 1], mukm1 = route.mirrors[k - 2];
  LevelAxis shared_axis = muk.h == mukm1.h ? LevelAxis::Horizontal : LevelAxis::Vertical;
  MirrorMove ds;
  ds.kind = MirrorMove::Kind::DoubleSplit;
  ds.axis = shared_axis;
  if (route.rtype == 2) {
    ds.back_pos = shared_axis == LevelAxis::Horizontal ? muk.v : muk.h;
    ds.slash_pos = shared_axis == LevelAxis::Horizontal ? mukm1.v : mukm1.h;
  } else {
    ds.back_pos = shared_axis == LevelAxis::Horizontal ? mukm1.v : mukm1.h;
    ds.slash_pos = shared_axis == LevelAxis::Horizontal ? muk.v : muk.h;
  }
  ds.level = shared_axis == LevelAxis::Horizontal ? muk.h : muk.v;
  const MoveResult& res = b.apply(ds);
  auto copies = res.mirror_succ.at(mukm1);
  if (copies.size() != 2) throw Error("internal: body splitting mirror did not duplicate");
  SplittingRoute next;
  next.rtype = route.rtype;
  next.double_headed = false;
  GridPoint c0 = copies[0], c1 = copies[1];
  if (shared_axis == LevelAxis::Horizontal) {
    next.p_axis = LevelAxis::Vertical;
    next.p_level = c0.v;
    next.p_gap = std::max(c0.h, c1.h);
  } else {
    next.p_axis = LevelAxis::Horizontal;
    next.p_level = c0.h;
    next.p_gap = std::max(c0.v, c1.v);
  }
  std::vector<std::vector<GridPoint>> succs;
  for (size_t i = 0; i + 2 < route.mirrors.size(); ++i)
    succs.push_back(res.mirror_succ.at(route.mirrors[i]));
  if (succs.empty()) throw Error("internal: double-headed route too short");
  std::function<bool(size_t, std::vector<GridPoint>&)> pick =
      [&](size_t i, std::vector<GridPoint>& acc) -> bool {
    if (i == succs.size()) {
      SplittingRoute cand = next;
      cand.mirrors = acc;
      try {
        validate_splitting_route(b.cur.m, cand);
      } catch (const Error&) {
        return false;
      }
      next.mirrors = acc;
      return true;
    }
    for (const auto& q : succs[i]) {
      acc.push_back(q);
      if (pick(i + 1, acc)) return true;
      acc.pop_back();
    }
    return false;
  };
  std::vector<GridPoint> acc;
  if (!pick(0, acc)) throw Error("generalized split: no valid successor route");
  gen_split_rec(b, next);
}

}  // namespace

ScriptResult generalized_split(const EnhancedMirrorDiagram& em, const SplittingRoute& route,
                               const std::set<std::string>& protect) {
  validate_splitting_route(em.m, route);
  if (!protect.empty()) {
    auto circuits = trace_circuits(em.m);
    std::map<std::pair<int, int>, std::set<int>> protected_cover;
    for (const auto& c : circuits) {
      if (!protect.count(c.key)) continue;
      for (const auto& s : c.segments)
        protected_cover[{s.axis == LevelAxis::Vertical ? 0 : 1, s.level}].insert(s.from);
    }
    auto arc_free = [&](LevelAxis ax, int level, int from, int to) {
      auto it = protected_cover.find({ax == LevelAxis::Vertical ? 0 : 1, level});
      if (it == protected_cover.end()) return true;
      std::vector<int> coords;
      for (const auto& [p, t] : em.m.mirrors) {
        (void)t;
        if (ax == LevelAxis::Vertical ? p.v == level : p.h == level)
          coords.push_back(ax == LevelAxis::Vertical ? p.h : p.v);
      }
      std::sort(coords.begin(), coords.end());
      int cur = from;
      while (cur != to) {
        if (it->second.count(cur)) return false;
        auto nx = std::upper_bound(coords.begin(), coords.end(), cur);
        cur = nx == coords.end() ? coords.front() : *nx;
      }
      return true;
    };
    for (size_t i = 0; i + 1 < route.mirrors.size(); ++i) {
      GridPoint a = route.mirrors[i], bb = route.mirrors[i + 1];
      if (a == bb) continue;
      LevelAxis ax = a.v == bb.v ? LevelAxis::Vertical : LevelAxis::Horizontal;
      int level = a.v == bb.v ? a.v : a.h;
      int ca = ax == LevelAxis::Vertical ? a.h : a.v;
      int cb = ax == LevelAxis::Vertical ? bb.h : bb.v;
      if (!arc_free(ax, level, ca, cb) && !arc_free(ax, level, cb, ca))
        throw Error("generalized split: route separates a protected circuit");
    }
  }
  Builder b(em);
  gen_split_rec(b, route);
  return {b.script, b.cur};
}

// --- decompose_move -----------------------------------------------------------

ScriptResult decompose_move(const EnhancedMirrorDiagram& em, const MirrorMove& mv,
                            int target_type) {
  using K = MirrorMove::Kind;
  MoveResult direct = apply_mirror_move(em, mv);

  auto finish = [&](Builder& b) -> ScriptResult {
    if (canonical_form(b.cur.m) != canonical_form(direct.diagram.m))
      throw Error("internal: decomposition does not replay to the move target");
    return {b.script, b.cur};
  };

  auto via_conjugation = [&](Symmetry s, int inner_type) -> ScriptResult {
    EnhancedMirrorDiagram tem = detail_conj::conjugate_enhanced(em, s);
    MirrorMove tmv = conjugate_move(mv, em.m, s);
    ScriptResult inner = decompose_move(tem, tmv, inner_type);
    std::vector<MirrorMove> back = conjugate_script(tem, inner.script, s);
    Builder b(em);
    for (const auto& step : back) b.apply(step);
    return finish(b);
  };

  int own_type = mirror_move_type(mv);
  if (own_type == 0 && target_type == 2) return via_conjugation(Symmetry::ReflectH, 1);
  if (own_type != 0 && target_type != own_type)
    throw Error("decompose_move: only same-type decompositions are supported for typed moves");

  Builder b(em);
  switch (mv.kind) {
    case K::BridgeAdd:
      if (mv.axis == LevelAxis::Vertical) return via_conjugation(Symmetry::Transpose, target_type);
      decompose_bridge_add(b, mv, target_type);
      return finish(b);
    case K::BridgeRemove:
      if (mv.axis == LevelAxis::Vertical) return via_conjugation(Symmetry::Transpose, target_type);
      decompose_bridge_remove(b, mv, target_type);
      return finish(b);
    case K::Twist:
      if (mv.axis == LevelAxis::Vertical) return via_conjugation(Symmetry::Transpose, target_type);
      decompose_twist(b, mv, target_type);
      return finish(b);
    case K::Jump:
      if (mv.axis == LevelAxis::Horizontal) {
        decompose_jump_1(b, mv.level, mv.gap, mv.dir);
        return finish(b);
      }
      return via_conjugation(Symmetry::Transpose, target_type);
    case K::WrinkleCreate:
    case K::DoubleSplit:
      if (mv.axis == LevelAxis::Horizontal) {
        if (mv.kind == K::WrinkleCreate) decompose_wrinkle_1(b, mv.level, mv.back_pos, mv.slash_pos);
        else decompose_double_split_1(b, mv.level, mv.back_pos, mv.slash_pos);
        return finish(b);
      }
      return via_conjugation(Symmetry::Transpose, target_type);
    case K::WrinkleReduce:
    case K::DoubleMerge: {
      MirrorMove inv;
      inv.kind = mv.kind == K::WrinkleReduce ? K::WrinkleCreate : K::DoubleSplit;
      inv.axis = mv.axis;
      inv.level = mv.level;
      {
        const MirrorDiagram& m0 = em.m;
        int extra = mv.kind == K::WrinkleReduce ? 2 : 1;
        auto row = [&](int lvl) {
          std::map<int, DiagType> out;
          for (const auto& [p, t] : m0.mirrors) {
            int l = mv.axis == LevelAxis::Horizontal ? p.h : p.v;
            int c = mv.axis == LevelAxis::Horizontal ? p.v : p.h;
            if (l == lvl) out[c] = t;
          }
          return out;
        };
        auto rlo = row(mv.level), rhi = row(mv.level + extra);
        inv.back_pos = -1;
        inv.slash_pos = -1;
        for (auto& [v, t] : rlo) {
          if (t == DiagType::Back && rhi.count(v) && rhi[v] == DiagType::Back) inv.back_pos = v;
          if (t == DiagType::Slash && rhi.count(v) && rhi[v] == DiagType::Slash) inv.slash_pos = v;
        }
        if (inv.back_pos < 0 || inv.slash_pos < 0)
          throw Error("wrinkle reduction: ramification pattern not found");
      }
      ScriptResult creation = decompose_move(direct.diagram, inv, target_type);
      // replay forward to collect the pre-states, then emit the inverses in
      // reverse order
      std::vector<MirrorDiagram> states;
      {
        EnhancedMirrorDiagram cur = direct.diagram;
        for (const auto& step : creation.script) {
          states.push_back(cur.m);
          cur = apply_mirror_move(cur, step).diagram;
        }
      }
      Builder bb(em);
      for (size_t i = creation.script.size(); i-- > 0;)
        bb.apply(invert_elementary(creation.script[i], states[i]));
      return finish(bb);
    }
    case K::Split: {
      if (mv.axis == LevelAxis::Horizontal && mv.stype == 1) {
        decompose_split_1(b, mv.level, mv.spos, mv.cgap);
        return finish(b);
      }
      if (mv.stype == 2) return via_conjugation(Symmetry::ReflectH, 1);
      return via_conjugation(Symmetry::Transpose, target_type);
    }
    case K::Merge: {
      // decompose the inverse split on the target and reverse it
      MirrorMove inv;
      inv.kind = K::Split;
      inv.stype = mv.stype;
      inv.axis = mv.axis;
      inv.level = mv.level;
      inv.spos = mv.spos;
      // snip: the gap just past the last low-side mirror, so that the split
      // reproduces the distribution
      {
        const MirrorDiagram& tgt = direct.diagram.m;
        (void)tgt;
        int span = mv.axis == LevelAxis::Horizontal ? em.m.cols : em.m.rows;
        int best = 1;
        for (const auto& [p, t] : em.m.mirrors) {
          (void)t;
          int l = mv.axis == LevelAxis::Horizontal ? p.h : p.v;
          int c = mv.axis == LevelAxis::Horizontal ? p.v : p.h;
          if (l != (mv.stype == 1 ? mv.level + 1 : mv.level) || c == mv.spos) continue;
          best = std::max(best, mod(c - mv.spos, span) + 1);
        }
        inv.cgap = mod(mv.spos + best, span);
      }
      ScriptResult creation = decompose_move(direct.diagram, inv, target_type);
      std::vector<MirrorDiagram> states;
      {
        EnhancedMirrorDiagram cur = direct.diagram;
        for (const auto& step : creation.script) {
          states.push_back(cur.m);
          cur = apply_mirror_move(cur, step).diagram;
        }
      }
      Builder bb(em);
      for (size_t i = creation.script.size(); i-- > 0;)
        bb.apply(invert_elementary(creation.script[i], states[i]));
      return finish(bb);
    }
    default:
      throw Error("decompose_move: unsupported kind");
  }
}

// --- neatness checker ---------------------------------------------------------

NeatReport check_neat(const EnhancedMirrorDiagram& start, const std::vector<MirrorMove>& script,
                      const std::set<std::string>& protected_circuits) {
  NeatReport rep;
  EnhancedMirrorDiagram cur = start;
  auto circuits = trace_circuits(cur.m);
  std::map<std::string, std::string> origin;
  for (const auto& c : circuits) origin[c.key] = c.key;
  {
    std::map<std::string, std::pair<int, int>> ledger;
    for (const auto& c : circuits) ledger[c.key] = {c.tb_plus(), c.tb_minus()};
    rep.tb_ledger.push_back(ledger);
  }
  std::set<std::string> protected_current = protected_circuits;
  rep.neat = true;
  rep.almost_neat = true;

  for (const auto& mv : script) {
    MoveResult res;
    try {
      res = apply_mirror_move(cur, mv);
    } catch (const Error& e) {
      rep.replay_ok = false;
      rep.violation = std::string("replay failed: ") + e.what();
      rep.neat = rep.almost_neat = false;
      return rep;
    }
    bool is_jump = mv.kind == MirrorMove::Kind::Jump;
    std::set<std::string> next_protected;
    for (const auto& p : protected_current) {
      auto it = res.circuit_map.find(p);
      if (it == res.circuit_map.end()) {
        rep.neat = false;
        if (!is_jump) {
          rep.almost_neat = false;
          if (rep.violation.empty()) rep.violation = "protected circuit not preserved";
        }
        continue;
      }
      next_protected.insert(it->second);
    }
    std::map<std::string, std::string> next_origin;
    for (auto& [o, n] : res.circuit_map) {
      auto it = origin.find(o);
      if (it != origin.end()) next_origin[n] = it->second;
    }
    origin = std::move(next_origin);
    protected_current = std::move(next_protected);
    cur = res.diagram;
    auto cs = trace_circuits(cur.m);
    std::map<std::string, std::pair<int, int>> ledger;
    for (const auto& c : cs) {
      auto it = origin.find(c.key);
      ledger[it != origin.end() ? it->second : ("new:" + c.key)] = {c.tb_plus(), c.tb_minus()};
    }
    rep.tb_ledger.push_back(ledger);
  }
  rep.replay_ok = true;

  std::set<std::string> names;
  for (const auto& ledger : rep.tb_ledger)
    for (const auto& [k, v] : ledger) {
      (void)v;
      if (k.rfind("new:", 0) != 0) names.insert(k);
    }
  for (const auto& name : names) {
    for (int sign = 0; sign < 2; ++sign) {
      int first_neg = -1, last_neg = -1;
      for (size_t i = 0; i < rep.tb_ledger.size(); ++i) {
        auto it = rep.tb_ledger[i].find(name);
        if (it == rep.tb_ledger[i].end()) continue;
        int tb = sign == 0 ? it->second.first : it->second.second;
        if (tb < 0) {
          if (first_neg < 0) first_neg = static_cast<int>(i);
          last_neg = static_cast<int>(i);
        }
      }
      if (first_neg < 0) continue;
      for (int i = first_neg; i <= last_neg; ++i) {
        auto it = rep.tb_ledger[static_cast<size_t>(i)].find(name);
        if (it == rep.tb_ledger[static_cast<size_t>(i)].end()) continue;
        int tb = sign == 0 ? it->second.first : it->second.second;
        if (tb >= 0) {
          rep.neat = false;
          rep.almost_neat = false;
          if (rep.violation.empty()) rep.violation = "tb sign window violated for circuit " + name;
        }
      }
    }
  }
  return rep;
}

}  // namespace gridsurf
