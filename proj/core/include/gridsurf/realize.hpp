#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "gridsurf/divcode.hpp"
#include "gridsurf/link.hpp"
#include "gridsurf/surface.hpp"

namespace gridsurf {

/// Abstract incidence data forced by a dividing code: rectangle corners glued
/// along the code adjacencies, the resulting abstract level classes, and the
/// per-level vertex sequences read off the side chains.
struct AbstractIncidence {
  int n = 0;           // rectangles
  int vlevels = 0;     // abstract vertical level classes
  int hlevels = 0;     // abstract horizontal level classes
  std::vector<int> rect_vl, rect_vr, rect_hb, rect_ht;  // per rectangle, class ids
  // Forced vertex order along each level: entries are transverse class ids,
  // in the positive direction; `cycle` tells whether the sides close up.
  struct LevelSeq {
    std::vector<int> seq;
    bool cycle = false;
  };
  std::vector<LevelSeq> vseq;  // indexed by vertical class; entries horizontal classes
  std::vector<LevelSeq> hseq;  // indexed by horizontal class; entries vertical classes
  int vertex_count = 0;
};

/// Builds the incidence or reports the violated constraint.
AbstractIncidence build_incidence(const DividingCode& code);

struct RealizeOptions {
  std::optional<LinkDiagram> boundary_filter;  // keep boundaries in its exchange orbit
  long node_budget = 50'000'000;
  int jobs = 1;
  bool collect_stats = true;
};

struct RealizeStats {
  long nodes = 0;
  long solutions_raw = 0;   // before dedup
  bool complete = true;
  std::string unrealizable_reason;  // set when the incidence itself fails
};

struct RealizeResult {
  std::vector<SurfaceDiagram> realizations;  // sorted by canonical form
  RealizeStats stats;
};

/// All surface diagrams realizing the code, up to combinatorial equivalence
/// (independent rotations of the two cyclic orders). Rectangle i of each
/// output carries point label i+1; extract_code returns the input code under
/// the identity labeling.
RealizeResult enumerate_realizations(const DividingCode& code, const RealizeOptions& opts = {});

/// Independent oracle: enumerates ALL valid surface diagrams with at most
/// `max_rects` rectangles on grids up to `max_grid` x `max_grid` by direct
/// generation, grouped by dividing code.
struct OracleEntry {
  DividingCode code;
  std::set<std::string> canonical_forms;
};

std::map<std::string, OracleEntry> brute_force_oracle(int max_rects, int max_grid);

}  // namespace gridsurf
