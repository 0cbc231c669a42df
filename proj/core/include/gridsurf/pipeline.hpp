#pragma once

#include <iosfwd>
#include <string>

#include "gridsurf/divcode.hpp"
#include "gridsurf/link.hpp"
#include "gridsurf/realize.hpp"

namespace gridsurf {

struct FixtureSet {
  DividingCode code_a;
  DividingCode code_b;
  LinkDiagram r2;
};

/// The two dividing codes built into the library, plus loading helpers.
DividingCode builtin_code_a();
DividingCode builtin_code_b();
DividingCode builtin_fig8_code();

struct PipelineReport {
  bool distinguished = false;
  int count_a = 0;
  int count_b = 0;
  bool r2_rigid = false;
  size_t r2_closure_size = 0;
  int boundary_matches = 0;  // realizations whose boundary meets the closure
  std::string failure;       // first failed expectation, empty on success
  std::string log;           // human-readable certificate trail
};

/// Runs the verification chain: realization counts for the two codes, the
/// gate checks and rigidity of the reference diagram, and the boundary
/// comparison. Every expectation failure halts with a certificate.
PipelineReport run_sixtwo_pipeline(const FixtureSet& fixtures, long node_budget = 50'000'000,
                                   int jobs = 1);

}  // namespace gridsurf
