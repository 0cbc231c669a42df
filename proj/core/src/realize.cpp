#include "gridsurf/realize.hpp"

#include <algorithm>
#include <atomic>
#include <future>
#include <numeric>
#include <sstream>

namespace gridsurf {

namespace {

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(int n) : parent(static_cast<size_t>(n)) {
    std::iota(parent.begin(), parent.end(), 0);
  }
  int find(int x) {
    while (parent[static_cast<size_t>(x)] != x) {
      parent[static_cast<size_t>(x)] = parent[static_cast<size_t>(parent[static_cast<size_t>(x)])];
      x = parent[static_cast<size_t>(x)];
    }
    return x;
  }
  void unite(int a, int b) { parent[static_cast<size_t>(find(a))] = find(b); }
};

struct AbstractVertex {
  int vcls, hcls;
  DiagType type;
  int mult;
  int owner[2];
  CornerRole role[2];
};

// Corner slots: per rectangle, BL BR TR TL.
struct CornerRef {
  int rect;
  CornerRole role;
};

}  // namespace

AbstractIncidence build_incidence(const DividingCode& code) {
  validate_code(code);
  int n = code.n;
  // Vertical slots: L_i = 2i, R_i = 2i+1. Horizontal: B_i = 2i, T_i = 2i+1.
  UnionFind ufv(2 * n), ufh(2 * n);
  // Corner identifications: map corner -> corner.
  std::vector<int> plus_succ(static_cast<size_t>(n), -1), minus_succ(static_cast<size_t>(n), -1);
  auto adjacency = [&](const std::vector<CodeComponent>& comps, std::vector<int>& succ) {
    for (const auto& comp : comps) {
      for (size_t t = 0; t + 1 < comp.points.size(); ++t)
        succ[static_cast<size_t>(comp.points[t] - 1)] = comp.points[t + 1] - 1;
      if (comp.closed) succ[static_cast<size_t>(comp.points.back() - 1)] = comp.points.front() - 1;
    }
  };
  adjacency(code.plus, plus_succ);
  adjacency(code.minus, minus_succ);
  for (int i = 0; i < n; ++i) {
    if (int j = plus_succ[static_cast<size_t>(i)]; j >= 0) {
      ufv.unite(2 * i + 1, 2 * j);      // R_i = L_j
      ufh.unite(2 * i + 1, 2 * j);      // T_i = B_j
    }
    if (int j = minus_succ[static_cast<size_t>(i)]; j >= 0) {
      ufv.unite(2 * i, 2 * j + 1);      // L_i = R_j
      ufh.unite(2 * i + 1, 2 * j);      // T_i = B_j
    }
  }

  AbstractIncidence inc;
  inc.n = n;
  std::map<int, int> vclass, hclass;
  auto cls = [](UnionFind& uf, std::map<int, int>& m, int slot) {
    int root = uf.find(slot);
    auto it = m.find(root);
    if (it != m.end()) return it->second;
    int id = static_cast<int>(m.size());
    m.emplace(root, id);
    return id;
  };
  inc.rect_vl.resize(static_cast<size_t>(n));
  inc.rect_vr.resize(static_cast<size_t>(n));
  inc.rect_hb.resize(static_cast<size_t>(n));
  inc.rect_ht.resize(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) {
    inc.rect_vl[static_cast<size_t>(i)] = cls(ufv, vclass, 2 * i);
    inc.rect_vr[static_cast<size_t>(i)] = cls(ufv, vclass, 2 * i + 1);
    inc.rect_hb[static_cast<size_t>(i)] = cls(ufh, hclass, 2 * i);
    inc.rect_ht[static_cast<size_t>(i)] = cls(ufh, hclass, 2 * i + 1);
    if (inc.rect_vl[static_cast<size_t>(i)] == inc.rect_vr[static_cast<size_t>(i)] ||
        inc.rect_hb[static_cast<size_t>(i)] == inc.rect_ht[static_cast<size_t>(i)])
      throw Error("unrealizable: rectangle side closes into a full circle");
  }
  inc.vlevels = static_cast<int>(vclass.size());
  inc.hlevels = static_cast<int>(hclass.size());

  // Vertices: corners grouped by abstract position. Only the identifications
  // prescribed by the code may coincide.
  auto corner_cls = [&](int i, CornerRole c) -> std::pair<int, int> {
    switch (c) {
      case CornerRole::BL: return {inc.rect_vl[static_cast<size_t>(i)], inc.rect_hb[static_cast<size_t>(i)]};
      case CornerRole::BR: return {inc.rect_vr[static_cast<size_t>(i)], inc.rect_hb[static_cast<size_t>(i)]};
      case CornerRole::TR: return {inc.rect_vr[static_cast<size_t>(i)], inc.rect_ht[static_cast<size_t>(i)]};
      case CornerRole::TL: return {inc.rect_vl[static_cast<size_t>(i)], inc.rect_ht[static_cast<size_t>(i)]};
    }
    return {-1, -1};
  };
  std::map<std::pair<int, int>, std::vector<CornerRef>> at;
  for (int i = 0; i < n; ++i)
    for (CornerRole c : {CornerRole::BL, CornerRole::BR, CornerRole::TR, CornerRole::TL})
      at[corner_cls(i, c)].push_back({i, c});
  std::vector<AbstractVertex> vertices;
  for (auto& [pos, refs] : at) {
    if (refs.size() > 2) throw Error("unrealizable: corner collision (multiplicity > 2)");
    if (refs.size() == 2) {
      CornerRole a = refs[0].role, b = refs[1].role;
      bool ok = (a == CornerRole::TR && b == CornerRole::BL) ||
                (a == CornerRole::BL && b == CornerRole::TR) ||
                (a == CornerRole::TL && b == CornerRole::BR) ||
                (a == CornerRole::BR && b == CornerRole::TL);
      if (!ok) throw Error("unrealizable: corner collision (incompatible roles)");
      // the coincidence must be one prescribed by the code
      int x = refs[0].rect, y = refs[1].rect;
      bool prescribed = false;
      if (a == CornerRole::TR && b == CornerRole::BL) prescribed = plus_succ[static_cast<size_t>(x)] == y;
      if (a == CornerRole::BL && b == CornerRole::TR) prescribed = plus_succ[static_cast<size_t>(y)] == x;
      if (a == CornerRole::TL && b == CornerRole::BR) prescribed = minus_succ[static_cast<size_t>(x)] == y;
      if (a == CornerRole::BR && b == CornerRole::TL) prescribed = minus_succ[static_cast<size_t>(y)] == x;
      if (!prescribed) throw Error("unrealizable: corner collision (unprescribed gluing)");
    }
    AbstractVertex v;
    v.vcls = pos.first;
    v.hcls = pos.second;
    v.type = corner_type(refs[0].role);
    v.mult = static_cast<int>(refs.size());
    v.owner[0] = refs[0].rect;
    v.role[0] = refs[0].role;
    v.owner[1] = refs.size() == 2 ? refs[1].rect : -1;
    v.role[1] = refs.size() == 2 ? refs[1].role : refs[0].role;
    vertices.push_back(v);
  }
  inc.vertex_count = static_cast<int>(vertices.size());

  // Side chains per abstract level; the walk forces the vertex sequence.
  auto vxid = [&](int vcls, int hcls) {
    for (int k = 0; k < static_cast<int>(vertices.size()); ++k)
      if (vertices[static_cast<size_t>(k)].vcls == vcls && vertices[static_cast<size_t>(k)].hcls == hcls)
        return k;
    throw Error("internal: missing abstract vertex");
  };
  auto build = [&](bool vertical, int nlev, std::vector<AbstractIncidence::LevelSeq>& out) {
    out.assign(static_cast<size_t>(nlev), {});
    struct Side {
      int start, end;
    };
    std::vector<std::vector<Side>> sides(static_cast<size_t>(nlev));
    for (int i = 0; i < n; ++i) {
      if (vertical) {
        sides[static_cast<size_t>(inc.rect_vl[static_cast<size_t>(i)])].push_back(
            {vxid(inc.rect_vl[static_cast<size_t>(i)], inc.rect_hb[static_cast<size_t>(i)]),
             vxid(inc.rect_vl[static_cast<size_t>(i)], inc.rect_ht[static_cast<size_t>(i)])});
        sides[static_cast<size_t>(inc.rect_vr[static_cast<size_t>(i)])].push_back(
            {vxid(inc.rect_vr[static_cast<size_t>(i)], inc.rect_hb[static_cast<size_t>(i)]),
             vxid(inc.rect_vr[static_cast<size_t>(i)], inc.rect_ht[static_cast<size_t>(i)])});
      } else {
        sides[static_cast<size_t>(inc.rect_hb[static_cast<size_t>(i)])].push_back(
            {vxid(inc.rect_vl[static_cast<size_t>(i)], inc.rect_hb[static_cast<size_t>(i)]),
             vxid(inc.rect_vr[static_cast<size_t>(i)], inc.rect_hb[static_cast<size_t>(i)])});
        sides[static_cast<size_t>(inc.rect_ht[static_cast<size_t>(i)])].push_back(
            {vxid(inc.rect_vl[static_cast<size_t>(i)], inc.rect_ht[static_cast<size_t>(i)]),
             vxid(inc.rect_vr[static_cast<size_t>(i)], inc.rect_ht[static_cast<size_t>(i)])});
      }
    }
    for (int lvl = 0; lvl < nlev; ++lvl) {
      auto& ss = sides[static_cast<size_t>(lvl)];
      if (ss.empty()) throw Error("unrealizable: unoccupied abstract level");
      std::map<int, int> out_side;
      std::map<int, int> in_count;
      for (int k = 0; k < static_cast<int>(ss.size()); ++k) {
        if (!out_side.emplace(ss[static_cast<size_t>(k)].start, k).second)
          throw Error("unrealizable: branching side chain");
        if (++in_count[ss[static_cast<size_t>(k)].end] > 1)
          throw Error("unrealizable: branching side chain");
      }
      int head = -1;
      for (const auto& s : ss)
        if (!in_count.count(s.start)) {
          if (head >= 0) throw Error("unrealizable: broken level chain");
          head = s.start;
        }
      bool cycle = head < 0;
      if (cycle) head = out_side.begin()->first;
      std::vector<int> walkv{head};
      int cur = head;
      for (size_t step = 0; step < ss.size(); ++step) {
        auto it = out_side.find(cur);
        if (it == out_side.end()) throw Error("unrealizable: broken level chain");
        cur = ss[static_cast<size_t>(it->second)].end;
        walkv.push_back(cur);
      }
      if (cycle) {
        if (cur != head) throw Error("unrealizable: broken level chain");
        walkv.pop_back();
      } else if (out_side.count(cur)) {
        throw Error("unrealizable: broken level chain");
      }
      AbstractIncidence::LevelSeq seq;
      seq.cycle = cycle;
      for (int vid : walkv)
        seq.seq.push_back(vertical ? vertices[static_cast<size_t>(vid)].hcls
                                   : vertices[static_cast<size_t>(vid)].vcls);
      out[static_cast<size_t>(lvl)] = std::move(seq);
    }
  };
  build(true, inc.vlevels, inc.vseq);
  build(false, inc.hlevels, inc.hseq);
  return inc;
}

namespace {

// Search state: a partial cyclic arrangement per axis. pos[cls] = ordinal in
// the partial arrangement, or -1.
struct SearchState {
  std::vector<int> vorder, horder;  // placed class ids in cyclic order
  std::vector<int> vpos, hpos;      // class -> index in order, -1 if unplaced
};

class Solver {
 public:
  Solver(const AbstractIncidence& inc, const DividingCode& code, const RealizeOptions& opts)
      : inc_(inc), code_(code), opts_(opts) {}

  RealizeResult run() {
    RealizeResult result;
    SearchState st;
    st.vpos.assign(static_cast<size_t>(inc_.vlevels), -1);
    st.hpos.assign(static_cast<size_t>(inc_.hlevels), -1);
    bool complete = true;
    if (opts_.jobs > 1) {
      // breadth-first frontier, then one deterministic budget share per branch
      std::vector<SearchState> frontier{st};
      std::vector<SearchState> full;
      size_t target = static_cast<size_t>(opts_.jobs) * 4;
      long pops = 0;
      while (!frontier.empty() && frontier.size() + full.size() < target && pops < 4096) {
        SearchState cur = frontier.front();
        frontier.erase(frontier.begin());
        pops++;
        if (static_cast<int>(cur.vorder.size()) == inc_.vlevels &&
            static_cast<int>(cur.horder.size()) == inc_.hlevels) {
          full.push_back(cur);
          continue;
        }
        for (SearchState& child : expand(cur)) frontier.push_back(std::move(child));
      }
      for (auto& f : full) emit(f, solutions_);
      long share = std::max<long>(1, opts_.node_budget / std::max<size_t>(1, frontier.size()));
      std::vector<std::future<std::tuple<std::vector<SurfaceDiagram>, long, bool>>> futs;
      for (auto& branch : frontier) {
        futs.push_back(std::async(std::launch::async, [this, branch, share]() {
          std::vector<SurfaceDiagram> sols;
          long budget = share, nodes = 0;
          SearchState local = branch;
          dfs(local, sols, budget, nodes);
          return std::make_tuple(std::move(sols), nodes, budget >= 0);
        }));
      }
      for (auto& f : futs) {
        auto [sols, nodes, ok] = f.get();
        nodes_ += nodes;
        if (!ok) complete = false;
        for (auto& s : sols) solutions_.push_back(std::move(s));
      }
    } else {
      long budget = opts_.node_budget;
      dfs(st, solutions_, budget, nodes_);
      complete = budget >= 0;
    }
    result.stats.nodes = nodes_;
    result.stats.complete = complete;
    result.stats.solutions_raw = static_cast<long>(solutions_.size());

    // Dedup by unlabeled canonical form; deterministic representative.
    std::map<std::string, SurfaceDiagram> groups;
    for (const auto& sol : solutions_) {
      std::string key = canonical_form(sol);
      auto it = groups.find(key);
      if (it == groups.end() || labeled_key(sol) < labeled_key(it->second))
        groups[key] = sol;
    }
    std::optional<std::set<std::string>> filter;
    if (opts_.boundary_filter) {
      auto closure = exchange_closure(*opts_.boundary_filter);
      filter = closure.canonical_forms;
    }
    for (auto& [key, sol] : groups) {
      if (filter) {
        SurfaceInfo info = validate_surface(sol);
        LinkDiagram bd = detail::boundary_diagram(sol, info);
        if (!filter->count(canonical_form(bd))) continue;
      }
      result.realizations.push_back(sol);
    }
    return result;
  }

 private:
  static std::string labeled_key(const SurfaceDiagram& pi) {
    std::ostringstream os;
    for (const auto& r : pi.rects) os << r.vl << ',' << r.vr << ',' << r.hb << ',' << r.ht << ';';
    return os.str();
  }

  bool arrangement_consistent(const SearchState& st) const {
    // Forced level sequences restricted to placed transverse classes must
    // appear in cyclic order.
    auto check_side = [&](const std::vector<AbstractIncidence::LevelSeq>& seqs,
                          const std::vector<int>& pos, int placed_count) {
      for (const auto& ls : seqs) {
        int first = -1;
        int prev_off = -1;
        int count = 0;
        for (int cls : ls.seq) {
          int p = pos[static_cast<size_t>(cls)];
          if (p < 0) continue;
          if (first < 0) {
            first = p;
            prev_off = 0;
            count = 1;
            continue;
          }
          int off = mod(p - first, placed_count);
          if (off <= prev_off) return false;
          prev_off = off;
          count++;
        }
        (void)count;
      }
      return true;
    };
    if (!check_side(inc_.vseq, st.hpos, static_cast<int>(st.horder.size()))) return false;
    if (!check_side(inc_.hseq, st.vpos, static_cast<int>(st.vorder.size()))) return false;

    // Box constraints decidable on the placed classes.
    int pv = static_cast<int>(st.vorder.size()), ph = static_cast<int>(st.horder.size());
    for (int i = 0; i < inc_.n; ++i) {
      int vl = st.vpos[static_cast<size_t>(inc_.rect_vl[static_cast<size_t>(i)])];
      int vr = st.vpos[static_cast<size_t>(inc_.rect_vr[static_cast<size_t>(i)])];
      int hb = st.hpos[static_cast<size_t>(inc_.rect_hb[static_cast<size_t>(i)])];
      int ht = st.hpos[static_cast<size_t>(inc_.rect_ht[static_cast<size_t>(i)])];
      if (vl < 0 || vr < 0 || hb < 0 || ht < 0) continue;
      for (const auto& w : vertex_list_) {
        if (w.owner[0] == i || w.owner[1] == i) continue;
        int Z = st.vpos[static_cast<size_t>(w.vcls)];
        int z = st.hpos[static_cast<size_t>(w.hcls)];
        if (Z < 0 || z < 0) continue;
        if (in_open_arc(vl, vr, Z, pv) && in_open_arc(hb, ht, z, ph)) return false;
      }
    }
    return true;
  }

  // Next class to place: prefer the one with the most placed companions in
  // the sequences mentioning it.
  std::pair<bool, int> pick_next(const SearchState& st) const {
    int best_score = -1;
    bool best_vertical = true;
    int best_cls = -1;
    auto consider = [&](bool vertical, int cls, int score) {
      if (score > best_score) {
        best_score = score;
        best_vertical = vertical;
        best_cls = cls;
      }
    };
    for (int cls = 0; cls < inc_.vlevels; ++cls) {
      if (st.vpos[static_cast<size_t>(cls)] >= 0) continue;
      int score = 0;
      for (const auto& ls : inc_.hseq) {
        bool mentions = false;
        int placed = 0;
        for (int c : ls.seq) {
          if (c == cls) mentions = true;
          else if (st.vpos[static_cast<size_t>(c)] >= 0) placed++;
        }
        if (mentions) score += placed * placed;
      }
      consider(true, cls, score);
    }
    for (int cls = 0; cls < inc_.hlevels; ++cls) {
      if (st.hpos[static_cast<size_t>(cls)] >= 0) continue;
      int score = 0;
      for (const auto& ls : inc_.vseq) {
        bool mentions = false;
        int placed = 0;
        for (int c : ls.seq) {
          if (c == cls) mentions = true;
          else if (st.hpos[static_cast<size_t>(c)] >= 0) placed++;
        }
        if (mentions) score += placed * placed;
      }
      consider(false, cls, score);
    }
    return {best_vertical, best_cls};
  }

  void emit(const SearchState& st, std::vector<SurfaceDiagram>& sols) const {
    SurfaceDiagram pi;
    pi.cols = inc_.vlevels;
    pi.rows = inc_.hlevels;
    for (int i = 0; i < inc_.n; ++i)
      pi.rects.push_back({st.vpos[static_cast<size_t>(inc_.rect_vl[static_cast<size_t>(i)])],
                          st.vpos[static_cast<size_t>(inc_.rect_vr[static_cast<size_t>(i)])],
                          st.hpos[static_cast<size_t>(inc_.rect_hb[static_cast<size_t>(i)])],
                          st.hpos[static_cast<size_t>(inc_.rect_ht[static_cast<size_t>(i)])]});
    try {
      validate_surface(pi);
      DividingCode got = extract_code(pi);
      if (!code_equal_identity(got, code_)) return;
    } catch (const Error&) {
      return;
    }
    sols.push_back(std::move(pi));
  }

  // consistent children of a state, one insertion of the next class
  std::vector<SearchState> expand(const SearchState& base) const {
    std::vector<SearchState> out;
    auto [vertical, cls] = pick_next(base);
    if (cls < 0) return out;
    int k = static_cast<int>((vertical ? base.vorder : base.horder).size());
    int slots = std::max(1, k);
    for (int slot = 0; slot < slots; ++slot) {
      SearchState st = base;
      auto& order = vertical ? st.vorder : st.horder;
      auto& pos = vertical ? st.vpos : st.hpos;
      order.insert(order.begin() + slot + (k ? 1 : 0), cls);
      for (size_t t = 0; t < order.size(); ++t)
        pos[static_cast<size_t>(order[t])] = static_cast<int>(t);
      if (arrangement_consistent(st)) out.push_back(std::move(st));
    }
    return out;
  }

  void dfs(SearchState& st, std::vector<SurfaceDiagram>& sols, long& budget, long& nodes) const {
    if (budget < 0) return;
    if (--budget < 0) return;
    nodes++;
    if (static_cast<int>(st.vorder.size()) == inc_.vlevels &&
        static_cast<int>(st.horder.size()) == inc_.hlevels) {
      emit(st, sols);
      return;
    }
    auto [vertical, cls] = pick_next(st);
    if (cls < 0) return;
    auto& order = vertical ? st.vorder : st.horder;
    auto& pos = vertical ? st.vpos : st.hpos;
    int k = static_cast<int>(order.size());
    int slots = std::max(1, k);
    for (int slot = 0; slot < slots; ++slot) {
      order.insert(order.begin() + slot + (k ? 1 : 0), cls);
      for (size_t t = 0; t < order.size(); ++t) pos[static_cast<size_t>(order[t])] = static_cast<int>(t);
      if (arrangement_consistent(st)) dfs(st, sols, budget, nodes);
      order.erase(order.begin() + slot + (k ? 1 : 0));
      for (size_t t = 0; t < order.size(); ++t) pos[static_cast<size_t>(order[t])] = static_cast<int>(t);
      pos[static_cast<size_t>(cls)] = -1;
      if (budget < 0) return;
    }
  }

 public:
  void set_vertices(std::vector<AbstractVertex> v) { vertex_list_ = std::move(v); }

 private:
  const AbstractIncidence& inc_;
  const DividingCode& code_;
  const RealizeOptions& opts_;
  std::vector<AbstractVertex> vertex_list_;
  std::vector<SurfaceDiagram> solutions_;
  long budget_ = 0;
  long nodes_ = 0;
};

std::vector<AbstractVertex> abstract_vertices(const AbstractIncidence& inc) {
  // Rebuilt from the rect classes: group corners by abstract position.
  std::map<std::pair<int, int>, AbstractVertex> at;
  for (int i = 0; i < inc.n; ++i) {
    auto add = [&](int vc, int hc, CornerRole role) {
      auto key = std::make_pair(vc, hc);
      auto it = at.find(key);
      if (it == at.end()) {
        AbstractVertex v;
        v.vcls = vc;
        v.hcls = hc;
        v.type = corner_type(role);
        v.mult = 1;
        v.owner[0] = i;
        v.role[0] = role;
        v.owner[1] = -1;
        v.role[1] = role;
        at.emplace(key, v);
      } else {
        it->second.mult = 2;
        it->second.owner[1] = i;
        it->second.role[1] = role;
      }
    };
    add(inc.rect_vl[static_cast<size_t>(i)], inc.rect_hb[static_cast<size_t>(i)], CornerRole::BL);
    add(inc.rect_vr[static_cast<size_t>(i)], inc.rect_hb[static_cast<size_t>(i)], CornerRole::BR);
    add(inc.rect_vr[static_cast<size_t>(i)], inc.rect_ht[static_cast<size_t>(i)], CornerRole::TR);
    add(inc.rect_vl[static_cast<size_t>(i)], inc.rect_ht[static_cast<size_t>(i)], CornerRole::TL);
  }
  std::vector<AbstractVertex> out;
  for (auto& [k, v] : at) out.push_back(v);
  return out;
}

}  // namespace

RealizeResult enumerate_realizations(const DividingCode& code, const RealizeOptions& opts) {
  RealizeResult result;
  AbstractIncidence inc;
  try {
    inc = build_incidence(code);
  } catch (const Error& e) {
    result.stats.unrealizable_reason = e.what();
    result.stats.complete = true;
    return result;
  }
  Solver solver(inc, code, opts);
  solver.set_vertices(abstract_vertices(inc));
  result = solver.run();
  return result;
}

std::map<std::string, OracleEntry> brute_force_oracle(int max_rects, int max_grid) {
  std::map<std::string, OracleEntry> out;
  for (int p = 2; p <= max_grid; ++p) {
    for (int q = 2; q <= max_grid; ++q) {
      // Candidate rectangles on the p x q grid.
      std::vector<Rect> cands;
      for (int vl = 0; vl < p; ++vl)
        for (int vr = 0; vr < p; ++vr)
          for (int hb = 0; hb < q; ++hb)
            for (int ht = 0; ht < q; ++ht)
              if (vl != vr && hb != ht) cands.push_back({vl, vr, hb, ht});
      int m = static_cast<int>(cands.size());
      // Pairwise compatibility prefilter.
      std::vector<std::vector<char>> compat(static_cast<size_t>(m),
                                            std::vector<char>(static_cast<size_t>(m), 0));
      for (int i = 0; i < m; ++i)
        for (int j = i + 1; j < m; ++j) {
          SurfaceDiagram d;
          d.cols = p;
          d.rows = q;
          d.rects = {cands[static_cast<size_t>(i)], cands[static_cast<size_t>(j)]};
          bool ok = true;
          try {
            // partial check: corner rules only (levels may be unoccupied)
            std::map<GridPoint, std::vector<CornerRole>> pos;
            auto corners = [&](const Rect& r, auto&& fn) {
              fn(GridPoint{r.vl, r.hb}, CornerRole::BL);
              fn(GridPoint{r.vr, r.hb}, CornerRole::BR);
              fn(GridPoint{r.vr, r.ht}, CornerRole::TR);
              fn(GridPoint{r.vl, r.ht}, CornerRole::TL);
            };
            std::map<GridPoint, std::vector<CornerRole>> cmap;
            corners(cands[static_cast<size_t>(i)],
                    [&](GridPoint g, CornerRole c) { cmap[g].push_back(c); });
            corners(cands[static_cast<size_t>(j)],
                    [&](GridPoint g, CornerRole c) { cmap[g].push_back(c); });
            for (auto& [g, roles] : cmap) {
              if (roles.size() == 2) {
                bool paired = (roles[0] == CornerRole::TR && roles[1] == CornerRole::BL) ||
                              (roles[0] == CornerRole::BL && roles[1] == CornerRole::TR) ||
                              (roles[0] == CornerRole::TL && roles[1] == CornerRole::BR) ||
                              (roles[0] == CornerRole::BR && roles[1] == CornerRole::TL);
                if (!paired) ok = false;
              }
            }
            // vertex of one on the closed body of the other
            auto on_foreign = [&](const Rect& r, const Rect& s) {
              corners(r, [&](GridPoint g, CornerRole) {
                bool corner_of_s = (g == GridPoint{s.vl, s.hb}) || (g == GridPoint{s.vr, s.hb}) ||
                                   (g == GridPoint{s.vr, s.ht}) || (g == GridPoint{s.vl, s.ht});
                if (!corner_of_s && in_closed_arc(s.vl, s.vr, g.v, p) &&
                    in_closed_arc(s.hb, s.ht, g.h, q))
                  ok = false;
              });
            };
            on_foreign(cands[static_cast<size_t>(i)], cands[static_cast<size_t>(j)]);
            on_foreign(cands[static_cast<size_t>(j)], cands[static_cast<size_t>(i)]);
          } catch (const Error&) {
            ok = false;
          }
          compat[static_cast<size_t>(i)][static_cast<size_t>(j)] = ok;
          compat[static_cast<size_t>(j)][static_cast<size_t>(i)] = ok;
        }

      std::vector<int> chosen;
      std::function<void(int)> rec = [&](int from) {
        if (!chosen.empty()) {
          SurfaceDiagram d;
          d.cols = p;
          d.rows = q;
          for (int idx : chosen) d.rects.push_back(cands[static_cast<size_t>(idx)]);
          // all levels occupied?
          std::vector<bool> vused(static_cast<size_t>(p), false), hused(static_cast<size_t>(q), false);
          for (const auto& r : d.rects) {
            vused[static_cast<size_t>(r.vl)] = vused[static_cast<size_t>(r.vr)] = true;
            hused[static_cast<size_t>(r.hb)] = hused[static_cast<size_t>(r.ht)] = true;
          }
          bool all = std::all_of(vused.begin(), vused.end(), [](bool b) { return b; }) &&
                     std::all_of(hused.begin(), hused.end(), [](bool b) { return b; });
          if (all) {
            try {
              validate_surface(d);
              DividingCode code = extract_code(d);
              std::string key = code_canonical_key(code);
              auto& entry = out[key];
              if (entry.code.n == 0) entry.code = code;
              entry.canonical_forms.insert(canonical_form(d));
            } catch (const Error&) {
            }
          }
        }
        if (static_cast<int>(chosen.size()) == max_rects) return;
        for (int i = from; i < m; ++i) {
          bool ok = true;
          for (int c : chosen)
            if (!compat[static_cast<size_t>(c)][static_cast<size_t>(i)]) {
              ok = false;
              break;
            }
          if (!ok) continue;
          chosen.push_back(i);
          rec(i + 1);
          chosen.pop_back();
        }
      };
      rec(0);
    }
  }
  return out;
}

}  // namespace gridsurf
