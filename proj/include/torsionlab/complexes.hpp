#pragma once

#include "torsionlab/numeric.hpp"

#include <vector>

namespace torsionlab::complexes {

/// Bounded Z-graded cochain complex of metric spaces. spaces[i] lives in
/// degree q_min + i; diffs[i] maps degree q_min + i to q_min + i + 1 and
/// there are spaces.size() - 1 of them. Degrees outside the range are zero
/// spaces and the differential into/out of them is the zero map.
struct GradedMetricComplex {
  int q_min = 0;
  std::vector<MetricSpace> spaces;
  std::vector<Matrix> diffs;

  int q_max() const { return q_min + static_cast<int>(spaces.size()) - 1; }
  bool in_range(int q) const { return q >= q_min && q <= q_max(); }

  Index dim(int q) const { return in_range(q) ? spaces[q - q_min].dim : 0; }
  const MetricSpace& space(int q) const;
  MetricSpace space_or_zero(int q) const {
    return in_range(q) ? spaces[q - q_min] : MetricSpace();
  }
  /// d^q, a dim(q+1) x dim(q) matrix (zero-sized blocks outside the range).
  Matrix d(int q) const;

  Index total_dim() const;
};

struct DegreeReport {
  int q;
  double residual;
};

struct ValidationReport {
  bool pass = true;
  double worst_residual = 0.0;
  std::string worst_check;
  std::vector<DegreeReport> d_squared;  // scaled ||d o d|| per degree
};

/// Checks well-formedness and d^2 = 0 within 1e-9 (scaled by operator
/// norms). Report-valued; does not throw on failure.
ValidationReport validate_complex(const GradedMetricComplex& c,
                                  const Tolerance& tol = default_tolerance());

/// Throwing variant used as a precondition gate.
void require_valid(const GradedMetricComplex& c, const Tolerance& tol = default_tolerance());

/// Laplacian d#d + dd# acting in degree q. Throws DomainError if q is
/// outside [q_min, q_max].
LinearMapRep laplacian(const GradedMetricComplex& c, int q,
                       const Tolerance& tol = default_tolerance());

struct DegreeCohomology {
  int betti = 0;
  /// Columns in C^q spanning the harmonic subspace. Convention: if the whole
  /// degree is harmonic the identity basis is used (so the Hodge metric is
  /// the ambient Gram); otherwise a G-orthonormal eigenbasis (Hodge Gram I).
  Matrix harmonic_basis;
  MetricSpace hodge;
};

struct CohomologyResult {
  int q_min = 0;
  std::vector<DegreeCohomology> degrees;

  const DegreeCohomology& at(int q) const;
  int betti(int q) const {
    const int i = q - q_min;
    return (i >= 0 && i < static_cast<int>(degrees.size())) ? degrees[i].betti : 0;
  }
};

CohomologyResult hodge_cohomology(const GradedMetricComplex& c,
                                  const Tolerance& tol = default_tolerance());

/// Coordinates of columns of x (vectors in C^q) in the harmonic basis, i.e.
/// the cohomology class under the Hodge identification.
Matrix hodge_coordinates(const GradedMetricComplex& c, const CohomologyResult& h,
                         int q, const Matrix& x, const Tolerance& tol = default_tolerance());

/// Largest metric singular value over all differentials of the complex;
/// the reference scale against which round-off blocks count as zero.
double differential_scale(const GradedMetricComplex& c);

/// The Z2 collapse of a graded complex: block spaces by degree parity with
/// block-diagonal Grams and the two assembled differentials.
struct Z2Collapse {
  MetricSpace even, odd;
  Matrix d_even_to_odd, d_odd_to_even;
};

Z2Collapse z2_collapse(const GradedMetricComplex& c);

/// log T_C via restricted volumes of the two Z2 blocks of d:
/// log Vol(d_even->odd restricted) - log Vol(d_odd->even restricted).
double torsion_tc(const GradedMetricComplex& c, const Tolerance& tol = default_tolerance());

/// log T_C via 1/2 sum_q (-1)^{q+1} q log det' Laplacian^q.
double torsion_log_sum(const GradedMetricComplex& c, const Tolerance& tol = default_tolerance());

/// Alternating sum of dimensions; asserts it equals the alternating sum of
/// Betti numbers before returning.
long euler_characteristic(const GradedMetricComplex& c,
                          const Tolerance& tol = default_tolerance());

/// Transport a complex through per-degree invertible maps p[q]: the new
/// complex has differential p_{q+1} d p_q^{-1} and Grams p^{-T} G p^{-1}, so
/// the map is an isometric isomorphism of complexes.
GradedMetricComplex transport(const GradedMetricComplex& c, const std::vector<Matrix>& p);

}  // namespace torsionlab::complexes
