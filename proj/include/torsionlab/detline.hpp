#pragma once

#include "torsionlab/complexes.hpp"

namespace torsionlab::detline {

using complexes::GradedMetricComplex;

/// Log of the norm-scaling factor of a canonical determinant-line
/// isomorphism, measured against the induced metrics on both sides.
/// Composing isomorphisms adds log_vol values.
struct DetIsoVolume {
  double log_vol = 0.0;
};

/// A degreewise map of graded complexes; blocks[i] maps degree q_min + i of
/// the source into the same degree of the target.
struct ChainMap {
  int q_min = 0;
  std::vector<Matrix> blocks;

  int q_max() const { return q_min + static_cast<int>(blocks.size()) - 1; }
  Matrix block(int q, Index rows, Index cols) const;
};

/// Residual of target.d * f - f * source.d per degree; throws if f is not a
/// chain map within tolerance.
void require_chain_map(const GradedMetricComplex& src, const GradedMetricComplex& tgt,
                       const ChainMap& f, const Tolerance& tol = default_tolerance());

/// The canonical isomorphism det C = det HC, constructed through adapted
/// orthonormal frames for B inside Z inside C and the exact sequences
/// 0 -> B -> Z -> HC -> 0 and 0 -> Z -> C -> B(shifted) -> 0. Returns the
/// log-norm of the image of the unit-volume generator of det C, which
/// equals log T_C.
DetIsoVolume det_iso_c_hc(const GradedMetricComplex& c,
                          const Tolerance& tol = default_tolerance());

/// Volume of the induced map on determinant lines of a degreewise
/// invertible map: sum over q of (-1)^q log Vol(phi^q). Throws
/// SingularMapError on a singular component.
DetIsoVolume vol_det_graded_map(const std::vector<LinearMapRep>& phi, int q_min,
                                const Tolerance& tol = default_tolerance());

/// Long exact cohomology sequence of a compatible short exact sequence of
/// complexes, assembled as an acyclic metric complex. The term H^q(C_j)
/// sits in degree 3q + j and carries its Hodge metric; the connecting map
/// uses the minimum-norm lift. Throws ValidationError on incompatible
/// metrics, non-chain maps, or failed exactness.
GradedMetricComplex les_from_ses(const GradedMetricComplex& c0,
                                 const GradedMetricComplex& c1,
                                 const GradedMetricComplex& c2,
                                 const ChainMap& incl, const ChainMap& proj,
                                 const Tolerance& tol = default_tolerance());

struct SesReport {
  double t0 = 0.0, t1 = 0.0, t2 = 0.0, t_les = 0.0;
  double residual = 0.0;
  bool pass = false;
};

/// Multiplicativity of torsion over a compatible short exact sequence:
/// log T_C1 = log T_C0 + log T_C2 + log T_LES. The +1 sign on the LES term
/// is the frozen global convention (pinned by the exhaustive small-dims
/// frame oracle in the tests).
SesReport ses_torsion_check(const GradedMetricComplex& c0, const GradedMetricComplex& c1,
                            const GradedMetricComplex& c2, const ChainMap& incl,
                            const ChainMap& proj, const Tolerance& tol = default_tolerance());

}  // namespace torsionlab::detline
