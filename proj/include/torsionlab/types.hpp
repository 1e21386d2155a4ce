#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <string>

namespace torsionlab {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

/// Base class for all library errors.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A Gram matrix failed the conditioning floor, or a factorization broke down.
struct ConditioningError : Error {
  using Error::Error;
};

/// An input violated a structural invariant (d^2 != 0, bad filtration, ...).
/// The message starts with the name of the violated invariant.
struct ValidationError : Error {
  using Error::Error;
};

/// A self-adjoint input turned out not to be positive semi-definite.
struct NotPsdError : Error {
  using Error::Error;
};

/// A map required to be invertible is singular within tolerance.
struct SingularMapError : Error {
  using Error::Error;
};

/// Degree/index out of the supported range.
struct DomainError : Error {
  using Error::Error;
};

/// Malformed document (missing field, wrong shape, bad JSON).
struct SchemaError : Error {
  using Error::Error;
};

/// Numerical thresholds used throughout.
///
/// rank_rel_tol is relative to the largest singular value of the map at
/// hand; compare_tol is the default tolerance for residual checks.
struct Tolerance {
  double rank_rel_tol = 1e-9;
  double compare_tol = 1e-7;

  void validate() const {
    if (!(rank_rel_tol > 0.0) || !(compare_tol > 0.0) || rank_rel_tol >= 1.0)
      throw ValidationError("tolerance: rank_rel_tol/compare_tol out of range");
  }
};

/// Process-wide default tolerance. Read-only after startup; the CLI sets it
/// once before doing any work.
Tolerance& default_tolerance();

/// Smallest admissible eigenvalue of a Gram matrix. Inputs below the floor
/// are rejected, never regularized.
inline constexpr double kGramConditioningFloor = 1e-10;

/// A finite-dimensional real vector space with a scalar product, stored as a
/// symmetric positive-definite Gram matrix in a fixed reference basis.
struct MetricSpace {
  Index dim = 0;
  Matrix gram;  // dim x dim

  MetricSpace() : gram(0, 0) {}
  MetricSpace(Index n, Matrix g) : dim(n), gram(std::move(g)) {}

  static MetricSpace euclidean(Index n) {
    return MetricSpace(n, Matrix::Identity(n, n));
  }

  /// Throws ConditioningError / ValidationError if the Gram matrix is not
  /// symmetric SPD above the conditioning floor.
  void validate(double floor = kGramConditioningFloor) const;
};

/// A linear map between metric spaces; matrix is target.dim x source.dim.
struct LinearMapRep {
  MetricSpace source;
  MetricSpace target;
  Matrix matrix;

  void validate_shape() const {
    if (matrix.rows() != target.dim || matrix.cols() != source.dim)
      throw ValidationError("linear_map_shape: matrix does not match source/target dims");
  }
};

/// Parity of an integer degree, valid for negative degrees as well.
inline int parity(int q) { return ((q % 2) + 2) % 2; }

/// (-1)^q as a double.
inline double sign_of_degree(int q) { return parity(q) == 0 ? 1.0 : -1.0; }

}  // namespace torsionlab
