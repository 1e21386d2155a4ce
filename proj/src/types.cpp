#include "torsionlab/types.hpp"

namespace torsionlab {

Tolerance& default_tolerance() {
  static Tolerance tol;
  return tol;
}

void MetricSpace::validate(double floor) const {
  if (dim < 0) throw ValidationError("metric_space_dim: negative dimension");
  if (gram.rows() != dim || gram.cols() != dim)
    throw ValidationError("metric_space_shape: gram is not dim x dim");
  if (dim == 0) return;
  const double scale = std::max(1.0, gram.cwiseAbs().maxCoeff());
  if ((gram - gram.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale)
    throw ValidationError("metric_space_symmetry: gram not symmetric within 1e-12");
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (gram + gram.transpose()),
                                           Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() <= floor)
    throw ConditioningError("metric_space_conditioning: gram eigenvalue at or below floor");
}

}  // namespace torsionlab
