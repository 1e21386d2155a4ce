#pragma once

#include "torsionlab/oracles.hpp"
#include "torsionlab/report.hpp"

namespace torsionlab::suite {

using report::Check;
using report::ReportDocument;

/// Seeded property sweeps over generated instances. Each battery returns
/// the worst residual observed against its pinned tolerance.
Check torsion_equivalence(int count, const Tolerance& tol = default_tolerance());
Check det_line_iso(int count, const Tolerance& tol = default_tolerance());
Check ses_multiplicativity(int count, const Tolerance& tol = default_tolerance());
Check maumary(int count, const Tolerance& tol = default_tolerance());
Check spectral_invariants(int count, const Tolerance& tol = default_tolerance());
Check geometric_models(int count, const Tolerance& tol = default_tolerance());
Check wang(int count, const Tolerance& tol = default_tolerance());
Check gysin(int count, const Tolerance& tol = default_tolerance());
Check mapping_torus(int count, const Tolerance& tol = default_tolerance());
Check ledgers(int count, const Tolerance& tol = default_tolerance());
Check plumbing(int count, const Tolerance& tol = default_tolerance());

struct SuiteParams {
  int seeds = 100;
  Tolerance tol = default_tolerance();
};

/// The full battery, scaled by the seed count. Checks appear in a fixed
/// order and each battery iterates seeds in increasing order, so the report
/// is a deterministic function of (seeds, tolerance).
ReportDocument run_suite(const SuiteParams& params);

}  // namespace torsionlab::suite
