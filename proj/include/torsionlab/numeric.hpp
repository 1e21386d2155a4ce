#pragma once

#include "torsionlab/types.hpp"

namespace torsionlab::numeric {

/// Metric adjoint: the unique f# with <f x, y>_tgt = <x, f# y>_src.
LinearMapRep adjoint(const LinearMapRep& f);

/// Matrix of the adjoint without wrapping the spaces.
Matrix adjoint_matrix(const MetricSpace& src, const MetricSpace& tgt, const Matrix& f);

/// Cholesky factor L with gram = L L^T, after validating the space.
Matrix cholesky_factor(const MetricSpace& space);

/// Matrix of f in orthonormal coordinates on both sides:
/// L_tgt^T f L_src^{-T}. Singular values of the result are the metric
/// singular values of f.
Matrix ortho_coordinates(const MetricSpace& src, const MetricSpace& tgt, const Matrix& f);

/// Rank with threshold rank_rel_tol * max(sigma_max, scale_hint). The hint
/// carries the scale of the surrounding structure so that an all-round-off
/// matrix counts as zero.
Index rank(const LinearMapRep& f, const Tolerance& tol = default_tolerance(),
           double scale_hint = 0.0);

/// Sum of logs of the eigenvalues of a self-adjoint PSD endomorphism that
/// exceed rank_rel_tol * lambda_max. Zero map and zero-dimensional space
/// give 0. Throws NotPsdError on a negative eigenvalue beyond tolerance.
double log_det_prime(const LinearMapRep& endo, const Tolerance& tol = default_tolerance(),
                     double scale_hint = 0.0);  // hint in eigenvalue units

/// log Vol of f restricted to (ker f)^perp -> im f, i.e. the sum of logs of
/// the nonzero metric singular values. Zero map gives 0 (volume 1).
double log_vol_restricted(const LinearMapRep& f, const Tolerance& tol = default_tolerance(),
                          double scale_hint = 0.0);

/// exp(log_vol_restricted).
double vol_restricted(const LinearMapRep& f, const Tolerance& tol = default_tolerance());

/// A subquotient span(sub)/span(quot) realized on the orthogonal complement
/// of span(quot) inside span(sub). `basis` holds the realization columns in
/// ambient coordinates; `space.gram` is the induced metric on them.
struct Subquotient {
  MetricSpace space;
  Matrix basis;
};

/// Requires span(quot) contained in span(sub) within tolerance; columns of
/// sub and quot must be independent. Throws ValidationError otherwise.
Subquotient subquotient(const MetricSpace& ambient, const Matrix& sub_basis,
                        const Matrix& quot_by_basis,
                        const Tolerance& tol = default_tolerance());

/// Metric of the subquotient; with quot = 0 and sub = ambient basis this is
/// exactly the ambient Gram.
MetricSpace subquotient_metric(const MetricSpace& ambient, const Matrix& sub_basis,
                               const Matrix& quot_by_basis,
                               const Tolerance& tol = default_tolerance());

// ---- support routines shared by the higher layers --------------------------

/// G-orthonormal basis of the column span (rank-revealing). When the input
/// columns are residuals of a projection, scale_hint must carry the size of
/// the unprojected input so that pure round-off does not count as rank.
Matrix gram_orthonormal_basis(const MetricSpace& ambient, const Matrix& span_cols,
                              const Tolerance& tol = default_tolerance(),
                              double scale_hint = 0.0);

/// Orthonormal basis (standard inner product) of the null space of A.
Matrix null_space(const Matrix& a, const Tolerance& tol = default_tolerance(),
                  double scale_hint = 0.0);

/// Orthonormal basis (standard inner product) of the column span of A.
Matrix range_space(const Matrix& a, const Tolerance& tol = default_tolerance(),
                   double scale_hint = 0.0);

/// Minimum-norm least-squares solution of A X = B.
Matrix least_squares(const Matrix& a, const Matrix& b,
                     const Tolerance& tol = default_tolerance());

/// G-orthogonal projector onto the span of basis (given in ambient coords).
/// Returns ambient.dim x ambient.dim.
Matrix projector(const MetricSpace& ambient, const Matrix& basis,
                 const Tolerance& tol = default_tolerance());

/// Coordinates of each column of X in the (independent) columns of basis.
/// Throws ValidationError if any column of X leaves the span by more than
/// tol.compare_tol relative residual.
Matrix coordinates_in(const MetricSpace& ambient, const Matrix& basis, const Matrix& x,
                      const Tolerance& tol = default_tolerance());

}  // namespace torsionlab::numeric
