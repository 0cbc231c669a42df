#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace gridsurf {

// Errors thrown on invalid input or violated move preconditions. The message
// names the failing clause so callers (and the CLI) can report it verbatim.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

using Label = int;

/// A cyclic order on a finite set of distinct labels. Positive direction is
/// increasing index mod size; two orders equal up to rotation denote the same
/// cyclic order.
class CyclicOrder {
 public:
  CyclicOrder() = default;
  explicit CyclicOrder(std::vector<Label> labels);

  int size() const { return static_cast<int>(labels_.size()); }
  Label at(int i) const { return labels_[static_cast<size_t>(i)]; }
  const std::vector<Label>& labels() const { return labels_; }

  bool contains(Label x) const;
  int position(Label x) const;  // throws Error on unknown label

  /// True iff the three labels occur in this cyclic order (the statement
  /// often written as an angle-bracket triple).
  bool in_cyclic_order(Label a, Label b, Label c) const;

  bool same_cyclic_order(const CyclicOrder& other) const;

 private:
  std::vector<Label> labels_;
};

enum class ArcKind : uint8_t { Closed, Open, HalfOpenLeft, HalfOpenRight };

/// The positively oriented arc from `from` to `to` on a circle, with the
/// endpoint-inclusion variant chosen by `kind`. HalfOpenLeft excludes `from`,
/// HalfOpenRight excludes `to`.
struct Arc {
  Label from = 0;
  Label to = 0;
  ArcKind kind = ArcKind::Closed;
};

bool arc_contains(const CyclicOrder& order, const Arc& arc, Label x);

// --- ordinal circle helpers -------------------------------------------------
//
// Diagrams below store levels as ordinal positions 0..n-1 on an oriented
// circle. These helpers answer arc-membership questions directly on ordinals.

inline int mod(int a, int n) {
  int r = a % n;
  return r < 0 ? r + n : r;
}

/// Steps from a to b in the positive direction, in 0..n-1.
inline int cyc_dist(int a, int b, int n) { return mod(b - a, n); }

/// x lies strictly inside the positive arc (a;b). Requires a != b.
inline bool in_open_arc(int a, int b, int x, int n) {
  return cyc_dist(a, x, n) > 0 && cyc_dist(a, x, n) < cyc_dist(a, b, n);
}

/// x lies on the closed positive arc [a;b].
inline bool in_closed_arc(int a, int b, int x, int n) {
  return cyc_dist(a, x, n) <= cyc_dist(a, b, n);
}

/// Gap g denotes the position strictly between levels g-1 and g.
/// True iff the positive arc [a;b] crosses gap g.
inline bool arc_crosses_gap(int a, int b, int g, int n) {
  return mod(g - a - 1, n) < cyc_dist(a, b, n);
}

/// The four diagram symmetries. ReflectH negates the vertical coordinate
/// (phi), ReflectV the horizontal one (theta); Transpose swaps the two
/// circle factors, AntiTranspose swaps and negates both. Transpose and
/// AntiTranspose preserve mirror types, the other two conjugate them.
enum class Symmetry : uint8_t { ReflectH, ReflectV, Transpose, AntiTranspose };

const char* symmetry_name(Symmetry s);
Symmetry symmetry_from_name(const std::string& name);

/// Whether the symmetry exchanges the two diagonal types.
inline bool symmetry_swaps_types(Symmetry s) {
  return s == Symmetry::ReflectH || s == Symmetry::ReflectV;
}

}  // namespace gridsurf
