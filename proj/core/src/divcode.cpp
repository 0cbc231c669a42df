#include "gridsurf/divcode.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <sstream>

namespace gridsurf {

void validate_code(const DividingCode& c) {
  if (c.n <= 0) throw Error("code must have at least one point");
  for (const auto* side : {&c.plus, &c.minus}) {
    std::vector<int> count(static_cast<size_t>(c.n) + 1, 0);
    for (const auto& comp : *side) {
      if (comp.points.empty()) throw Error("empty component");
      for (int p : comp.points) {
        if (p < 1 || p > c.n) throw Error("point label out of range");
        if (++count[static_cast<size_t>(p)] > 1) throw Error("duplicate point in a side");
      }
    }
    for (int p = 1; p <= c.n; ++p)
      if (count[static_cast<size_t>(p)] != 1) throw Error("missing point " + std::to_string(p));
  }
}

namespace {

std::vector<CodeComponent> trace_side(const std::vector<int>& succ) {
  int n = static_cast<int>(succ.size()) - 1;  // 1-based
  std::vector<int> pred(static_cast<size_t>(n) + 1, -1);
  for (int i = 1; i <= n; ++i)
    if (succ[static_cast<size_t>(i)] > 0) pred[static_cast<size_t>(succ[static_cast<size_t>(i)])] = i;
  std::vector<bool> used(static_cast<size_t>(n) + 1, false);
  std::vector<CodeComponent> comps;
  for (int s = 1; s <= n; ++s) {
    if (used[static_cast<size_t>(s)] || pred[static_cast<size_t>(s)] > 0) continue;
    CodeComponent comp;
    comp.closed = false;
    for (int cur = s; cur > 0; cur = succ[static_cast<size_t>(cur)]) {
      comp.points.push_back(cur);
      used[static_cast<size_t>(cur)] = true;
    }
    comps.push_back(std::move(comp));
  }
  for (int s = 1; s <= n; ++s) {
    if (used[static_cast<size_t>(s)]) continue;
    CodeComponent comp;
    comp.closed = true;
    int cur = s;
    do {
      comp.points.push_back(cur);
      used[static_cast<size_t>(cur)] = true;
      cur = succ[static_cast<size_t>(cur)];
    } while (cur != s);
    comps.push_back(std::move(comp));
  }
  std::sort(comps.begin(), comps.end(), [](const CodeComponent& a, const CodeComponent& b) {
    return a.points.front() < b.points.front();
  });
  return comps;
}

}  // namespace

DividingCode extract_code(const SurfaceDiagram& pi) {
  SurfaceInfo info = validate_surface(pi);
  int n = static_cast<int>(pi.rects.size());
  std::vector<int> succ_p(static_cast<size_t>(n) + 1, -1), succ_m(static_cast<size_t>(n) + 1, -1);
  for (const auto& rec : info.vertices) {
    if (rec.multiplicity != 2) continue;
    if (rec.type == DiagType::Back) {
      int from = rec.role[0] == CornerRole::TR ? rec.owner[0] : rec.owner[1];
      int to = rec.role[0] == CornerRole::TR ? rec.owner[1] : rec.owner[0];
      succ_p[static_cast<size_t>(from) + 1] = to + 1;
    } else {
      int from = rec.role[0] == CornerRole::TL ? rec.owner[0] : rec.owner[1];
      int to = rec.role[0] == CornerRole::TL ? rec.owner[1] : rec.owner[0];
      succ_m[static_cast<size_t>(from) + 1] = to + 1;
    }
  }
  DividingCode code;
  code.n = n;
  code.plus = trace_side(succ_p);
  code.minus = trace_side(succ_m);
  validate_code(code);
  return code;
}

DividingCode normalize_code(const DividingCode& c) {
  DividingCode out = c;
  auto norm = [](std::vector<CodeComponent>& comps) {
    for (auto& comp : comps) {
      if (comp.closed && comp.points.size() > 1) {
        auto it = std::min_element(comp.points.begin(), comp.points.end());
        std::rotate(comp.points.begin(), it, comp.points.end());
      }
    }
    std::sort(comps.begin(), comps.end(), [](const CodeComponent& a, const CodeComponent& b) {
      if (a.closed != b.closed) return a.closed < b.closed;
      return a.points < b.points;
    });
  };
  norm(out.plus);
  norm(out.minus);
  return out;
}

bool code_equal_identity(const DividingCode& a, const DividingCode& b) {
  if (a.n != b.n) return false;
  DividingCode na = normalize_code(a), nb = normalize_code(b);
  auto eq = [](const std::vector<CodeComponent>& x, const std::vector<CodeComponent>& y) {
    if (x.size() != y.size()) return false;
    for (size_t i = 0; i < x.size(); ++i)
      if (x[i].closed != y[i].closed || x[i].points != y[i].points) return false;
    return true;
  };
  return eq(na.plus, nb.plus) && eq(na.minus, nb.minus);
}

namespace {

// All rotations of a closed component; a single variant for an open one.
std::vector<std::vector<int>> variants(const CodeComponent& c) {
  std::vector<std::vector<int>> out;
  if (!c.closed) {
    out.push_back(c.points);
    return out;
  }
  std::vector<int> cur = c.points;
  for (size_t i = 0; i < c.points.size(); ++i) {
    out.push_back(cur);
    std::rotate(cur.begin(), cur.begin() + 1, cur.end());
  }
  return out;
}

bool try_match(const DividingCode& a, const DividingCode& b, std::vector<int>& map_ab) {
  // Match plus components by backtracking, then verify the minus side.
  size_t k = a.plus.size();
  if (k != b.plus.size() || a.minus.size() != b.minus.size()) return false;
  std::vector<bool> used(k, false);
  std::vector<int> assignment(k, -1);

  std::function<bool(size_t)> rec = [&](size_t i) -> bool {
    if (i == k) {
      // verify minus side under map_ab
      std::vector<bool> mused(b.minus.size(), false);
      for (const auto& mc : a.minus) {
        std::vector<int> image;
        image.reserve(mc.points.size());
        for (int p : mc.points) image.push_back(map_ab[static_cast<size_t>(p)]);
        bool found = false;
        for (size_t j = 0; j < b.minus.size() && !found; ++j) {
          if (mused[j] || b.minus[j].closed != mc.closed ||
              b.minus[j].points.size() != image.size())
            continue;
          for (const auto& var : variants(CodeComponent{image, mc.closed})) {
            if (var == b.minus[j].points) {
              mused[j] = true;
              found = true;
              break;
            }
          }
        }
        if (!found) return false;
      }
      return true;
    }
    const auto& ac = a.plus[i];
    for (size_t j = 0; j < k; ++j) {
      if (used[j]) continue;
      const auto& bc = b.plus[j];
      if (bc.closed != ac.closed || bc.points.size() != ac.points.size()) continue;
      for (const auto& var : variants(bc)) {
        std::vector<std::pair<int, int>> added;
        bool ok = true;
        for (size_t t = 0; t < ac.points.size() && ok; ++t) {
          int from = ac.points[t], to = var[t];
          if (map_ab[static_cast<size_t>(from)] == 0) {
            map_ab[static_cast<size_t>(from)] = to;
            added.push_back({from, to});
          } else if (map_ab[static_cast<size_t>(from)] != to) {
            ok = false;
          }
        }
        if (ok) {
          used[j] = true;
          if (rec(i + 1)) return true;
          used[j] = false;
        }
        for (auto& [from, to] : added) map_ab[static_cast<size_t>(from)] = 0;
      }
    }
    return false;
  };
  return rec(0);
}

}  // namespace

std::optional<std::vector<int>> code_isomorphic(const DividingCode& a, const DividingCode& b) {
  validate_code(a);
  validate_code(b);
  if (a.n != b.n) return std::nullopt;
  std::vector<int> map_ab(static_cast<size_t>(a.n) + 1, 0);
  if (try_match(a, b, map_ab)) return map_ab;
  return std::nullopt;
}

std::string code_canonical_key(const DividingCode& c) {
  validate_code(c);
  // Exhaustive minimization over plus-component orders and rotations; the
  // relabeling is induced by first occurrence. Meant for small codes.
  std::vector<size_t> perm(c.plus.size());
  std::iota(perm.begin(), perm.end(), 0);
  std::string best;
  std::sort(perm.begin(), perm.end());
  do {
    // gather rotation choices per component
    std::vector<std::vector<std::vector<int>>> rots;
    for (size_t idx : perm) rots.push_back(variants(c.plus[idx]));
    std::vector<size_t> choice(rots.size(), 0);
    while (true) {
      // relabel
      std::vector<int> relab(static_cast<size_t>(c.n) + 1, 0);
      int next = 1;
      std::ostringstream os;
      for (size_t i = 0; i < rots.size(); ++i) {
        const auto& seq = rots[i][choice[i]];
        os << (c.plus[perm[i]].closed ? "(" : "[");
        for (int p : seq) {
          if (!relab[static_cast<size_t>(p)]) relab[static_cast<size_t>(p)] = next++;
          os << relab[static_cast<size_t>(p)] << ',';
        }
        os << "]";
      }
      // minus side normalized under relab
      std::vector<std::pair<bool, std::vector<int>>> msides;
      for (const auto& mc : c.minus) {
        std::vector<int> img;
        for (int p : mc.points) img.push_back(relab[static_cast<size_t>(p)]);
        if (mc.closed) {
          std::vector<int> bestrot = img;
          std::vector<int> cur = img;
          for (size_t r = 1; r < img.size(); ++r) {
            std::rotate(cur.begin(), cur.begin() + 1, cur.end());
            if (cur < bestrot) bestrot = cur;
          }
          img = bestrot;
        }
        msides.push_back({mc.closed, img});
      }
      std::sort(msides.begin(), msides.end());
      os << "/";
      for (auto& [closed, seq] : msides) {
        os << (closed ? "(" : "[");
        for (int p : seq) os << p << ',';
        os << "]";
      }
      std::string s = os.str();
      if (best.empty() || s < best) best = std::move(s);
      // next rotation choice
      size_t i = 0;
      while (i < choice.size()) {
        if (++choice[i] < rots[i].size()) break;
        choice[i] = 0;
        ++i;
      }
      if (i == choice.size()) break;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

}  // namespace gridsurf
