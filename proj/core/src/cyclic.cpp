#include "gridsurf/cyclic.hpp"

#include <algorithm>
#include <unordered_set>

namespace gridsurf {

CyclicOrder::CyclicOrder(std::vector<Label> labels) : labels_(std::move(labels)) {
  std::unordered_set<Label> seen;
  for (Label l : labels_) {
    if (!seen.insert(l).second) throw Error("duplicate label in cyclic order");
  }
}

bool CyclicOrder::contains(Label x) const {
  return std::find(labels_.begin(), labels_.end(), x) != labels_.end();
}

int CyclicOrder::position(Label x) const {
  auto it = std::find(labels_.begin(), labels_.end(), x);
  if (it == labels_.end()) throw Error("unknown label");
  return static_cast<int>(it - labels_.begin());
}

bool CyclicOrder::in_cyclic_order(Label a, Label b, Label c) const {
  int n = size();
  int pa = position(a), pb = position(b), pc = position(c);
  return cyc_dist(pa, pb, n) < cyc_dist(pa, pc, n);
}

bool CyclicOrder::same_cyclic_order(const CyclicOrder& other) const {
  if (size() != other.size()) return false;
  if (size() == 0) return true;
  if (!other.contains(labels_[0])) return false;
  int shift = other.position(labels_[0]);
  for (int i = 0; i < size(); ++i) {
    if (labels_[static_cast<size_t>(i)] != other.at(mod(shift + i, size()))) return false;
  }
  return true;
}

bool arc_contains(const CyclicOrder& order, const Arc& arc, Label x) {
  int n = order.size();
  int pf = order.position(arc.from);
  int pt = order.position(arc.to);
  int px = order.position(x);
  if (pf == pt) throw Error("degenerate arc");
  int dx = cyc_dist(pf, px, n);
  int dt = cyc_dist(pf, pt, n);
  switch (arc.kind) {
    case ArcKind::Closed:
      return dx <= dt;
    case ArcKind::Open:
      return dx > 0 && dx < dt;
    case ArcKind::HalfOpenLeft:
      return dx > 0 && dx <= dt;
    case ArcKind::HalfOpenRight:
      return dx < dt;
  }
  return false;
}

const char* symmetry_name(Symmetry s) {
  switch (s) {
    case Symmetry::ReflectH: return "reflect-h";
    case Symmetry::ReflectV: return "reflect-v";
    case Symmetry::Transpose: return "transpose";
    case Symmetry::AntiTranspose: return "anti-transpose";
  }
  return "?";
}

Symmetry symmetry_from_name(const std::string& name) {
  if (name == "reflect-h") return Symmetry::ReflectH;
  if (name == "reflect-v") return Symmetry::ReflectV;
  if (name == "transpose") return Symmetry::Transpose;
  if (name == "anti-transpose") return Symmetry::AntiTranspose;
  throw Error("unknown symmetry: " + name);
}

}  // namespace gridsurf
