#include "torsionlab/numeric.hpp"

#include <cmath>

namespace torsionlab::numeric {

namespace {

Eigen::BDCSVD<Matrix> thin_svd(const Matrix& a) {
  return Eigen::BDCSVD<Matrix>(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
}

Index svd_rank(const Eigen::BDCSVD<Matrix>& svd, double rel_tol, double scale_hint = 0.0) {
  if (svd.singularValues().size() == 0) return 0;
  const double cut = rel_tol * std::max(svd.singularValues()(0), scale_hint);
  Index r = 0;
  for (Index i = 0; i < svd.singularValues().size(); ++i)
    if (svd.singularValues()(i) > cut) ++r;
  return r;
}

}  // namespace

Matrix cholesky_factor(const MetricSpace& space) {
  space.validate();
  if (space.dim == 0) return Matrix(0, 0);
  Eigen::LLT<Matrix> llt(0.5 * (space.gram + space.gram.transpose()));
  if (llt.info() != Eigen::Success)
    throw ConditioningError("metric_space_conditioning: Cholesky factorization failed");
  return llt.matrixL();
}

Matrix adjoint_matrix(const MetricSpace& src, const MetricSpace& tgt, const Matrix& f) {
  src.validate();
  tgt.validate();
  if (src.dim == 0 || tgt.dim == 0) return Matrix(src.dim, tgt.dim);
  return src.gram.llt().solve(f.transpose() * tgt.gram);
}

LinearMapRep adjoint(const LinearMapRep& f) {
  f.validate_shape();
  return {f.target, f.source, adjoint_matrix(f.source, f.target, f.matrix)};
}

Matrix ortho_coordinates(const MetricSpace& src, const MetricSpace& tgt, const Matrix& f) {
  const Matrix ls = cholesky_factor(src);
  const Matrix lt = cholesky_factor(tgt);
  if (src.dim == 0 || tgt.dim == 0) return Matrix(tgt.dim, src.dim);
  // L_tgt^T f L_src^{-T}
  const Matrix right = ls.triangularView<Eigen::Lower>().solve(f.transpose()).transpose();
  return lt.transpose() * right;
}

Index rank(const LinearMapRep& f, const Tolerance& tol, double scale_hint) {
  f.validate_shape();
  if (f.matrix.size() == 0) return 0;
  auto svd = thin_svd(ortho_coordinates(f.source, f.target, f.matrix));
  return svd_rank(svd, tol.rank_rel_tol, scale_hint);
}

double log_det_prime(const LinearMapRep& endo, const Tolerance& tol, double scale_hint) {
  endo.validate_shape();
  if (endo.source.dim != endo.target.dim)
    throw ValidationError("log_det_prime: not an endomorphism");
  const Index n = endo.source.dim;
  if (n == 0) return 0.0;
  const Matrix l = cholesky_factor(endo.source);
  // Conjugate to orthonormal coordinates; a self-adjoint map becomes symmetric.
  const Matrix a =
      l.transpose() *
      l.triangularView<Eigen::Lower>().solve(endo.matrix.transpose()).transpose();
  const double asym = (a - a.transpose()).cwiseAbs().maxCoeff();
  const double scale = std::max(1.0, a.cwiseAbs().maxCoeff());
  if (asym > tol.compare_tol * scale)
    throw ValidationError("log_det_prime_self_adjoint: input not self-adjoint w.r.t. its metric");
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (a + a.transpose()));
  const Vector ev = es.eigenvalues();
  const double lmax = ev.cwiseAbs().maxCoeff();
  const double cut = tol.rank_rel_tol * std::max(lmax, scale_hint);
  double sum = 0.0;
  for (Index i = 0; i < n; ++i) {
    if (ev(i) < -cut)
      throw NotPsdError("log_det_prime_psd: negative eigenvalue beyond tolerance");
    if (ev(i) > cut) sum += std::log(ev(i));
  }
  return sum;
}

double log_vol_restricted(const LinearMapRep& f, const Tolerance& tol, double scale_hint) {
  f.validate_shape();
  if (f.matrix.size() == 0) return 0.0;
  auto svd = thin_svd(ortho_coordinates(f.source, f.target, f.matrix));
  const Vector sv = svd.singularValues();
  if (sv.size() == 0) return 0.0;
  const double cut = tol.rank_rel_tol * std::max(sv(0), scale_hint);
  double sum = 0.0;
  for (Index i = 0; i < sv.size(); ++i)
    if (sv(i) > cut) sum += std::log(sv(i));
  return sum;
}

double vol_restricted(const LinearMapRep& f, const Tolerance& tol) {
  return std::exp(log_vol_restricted(f, tol, 0.0));
}

Matrix gram_orthonormal_basis(const MetricSpace& ambient, const Matrix& span_cols,
                              const Tolerance& tol, double scale_hint) {
  if (span_cols.cols() == 0 || ambient.dim == 0) return Matrix(ambient.dim, 0);
  const Matrix l = cholesky_factor(ambient);
  auto svd = thin_svd(l.transpose() * span_cols);
  const Index r = svd_rank(svd, tol.rank_rel_tol, scale_hint);
  const Matrix u = svd.matrixU().leftCols(r);
  return l.transpose().triangularView<Eigen::Upper>().solve(u);
}

Matrix null_space(const Matrix& a, const Tolerance& tol, double scale_hint) {
  if (a.cols() == 0) return Matrix(0, 0);
  if (a.rows() == 0) return Matrix::Identity(a.cols(), a.cols());
  Eigen::BDCSVD<Matrix> svd(a, Eigen::ComputeFullV);
  const Index r = svd_rank(svd, tol.rank_rel_tol, scale_hint);
  return svd.matrixV().rightCols(a.cols() - r);
}

Matrix range_space(const Matrix& a, const Tolerance& tol, double scale_hint) {
  if (a.rows() == 0 || a.cols() == 0) return Matrix(a.rows(), 0);
  auto svd = thin_svd(a);
  return svd.matrixU().leftCols(svd_rank(svd, tol.rank_rel_tol, scale_hint));
}

Matrix least_squares(const Matrix& a, const Matrix& b, const Tolerance& tol) {
  if (a.cols() == 0) return Matrix(0, b.cols());
  if (a.rows() == 0) return Matrix::Zero(a.cols(), b.cols());
  auto svd = thin_svd(a);
  svd.setThreshold(tol.rank_rel_tol);
  return svd.solve(b);
}

Matrix projector(const MetricSpace& ambient, const Matrix& basis, const Tolerance& tol) {
  const Matrix o = gram_orthonormal_basis(ambient, basis, tol);
  if (o.cols() == 0) return Matrix::Zero(ambient.dim, ambient.dim);
  return o * (o.transpose() * ambient.gram);
}

Matrix coordinates_in(const MetricSpace& ambient, const Matrix& basis, const Matrix& x,
                      const Tolerance& tol) {
  if (basis.cols() == 0) {
    if (x.size() > 0 && x.cwiseAbs().maxCoeff() > tol.compare_tol)
      throw ValidationError("coordinates_in_span: vector not in span of empty basis");
    return Matrix(0, x.cols());
  }
  if (ambient.dim == 0) return Matrix::Zero(basis.cols(), x.cols());
  const Matrix l = cholesky_factor(ambient);
  const Matrix bl = l.transpose() * basis;
  const Matrix xl = l.transpose() * x;
  const Matrix coords = least_squares(bl, xl, tol);
  const Matrix resid = bl * coords - xl;
  if (resid.size() > 0) {
    const double scale = std::max(1.0, xl.cwiseAbs().maxCoeff());
    if (resid.cwiseAbs().maxCoeff() > tol.compare_tol * scale)
      throw ValidationError("coordinates_in_span: vector leaves the span beyond tolerance");
  }
  return coords;
}

Subquotient subquotient(const MetricSpace& ambient, const Matrix& sub_basis,
                        const Matrix& quot_by_basis, const Tolerance& tol) {
  ambient.validate();
  if (sub_basis.rows() != ambient.dim || (quot_by_basis.size() > 0 && quot_by_basis.rows() != ambient.dim))
    throw ValidationError("subquotient_shape: basis rows do not match ambient dim");
  const Index s = sub_basis.cols();
  const Index t = quot_by_basis.cols();

  const Matrix sub_on = gram_orthonormal_basis(ambient, sub_basis, tol);
  if (sub_on.cols() != s)
    throw ValidationError("subquotient_independence: sub basis columns dependent");
  const Matrix quot_on = gram_orthonormal_basis(ambient, quot_by_basis, tol);
  if (quot_on.cols() != t)
    throw ValidationError("subquotient_independence: quot basis columns dependent");

  if (t > 0) {
    const Matrix p_sub = sub_on * (sub_on.transpose() * ambient.gram);
    const double out = (quot_on - p_sub * quot_on).cwiseAbs().maxCoeff();
    if (out > tol.compare_tol)
      throw ValidationError("invalid_filtration: quot basis not contained in sub span");
  }

  // Project the *given* sub columns so that the trivial subquotient returns
  // the ambient Gram verbatim, then keep a maximal independent subset in the
  // original column order.
  Matrix projected = sub_basis;
  if (t > 0) projected -= quot_on * (quot_on.transpose() * (ambient.gram * sub_basis));

  Matrix basis(ambient.dim, s - t);
  Matrix picked_on(ambient.dim, 0);
  Index got = 0;
  double col_scale = 0.0;
  for (Index j = 0; j < s; ++j) {
    const Vector c = sub_basis.col(j);
    col_scale = std::max(col_scale, std::sqrt(std::max(0.0, double(c.transpose() * ambient.gram * c))));
  }
  for (Index j = 0; j < s && got < s - t; ++j) {
    Vector r = projected.col(j);
    if (picked_on.cols() > 0) r -= picked_on * (picked_on.transpose() * (ambient.gram * r));
    const double nrm = std::sqrt(std::max(0.0, double(r.transpose() * ambient.gram * r)));
    if (nrm > std::sqrt(tol.rank_rel_tol) * std::max(col_scale, 1e-300)) {
      basis.col(got++) = projected.col(j);
      Matrix ext(ambient.dim, picked_on.cols() + 1);
      ext << picked_on, r / nrm;
      picked_on = ext;
    }
  }
  if (got != s - t)
    throw ValidationError("invalid_filtration: subquotient dimension mismatch");

  MetricSpace result(s - t, basis.transpose() * ambient.gram * basis);
  result.gram = 0.5 * (result.gram + result.gram.transpose());
  result.validate();
  return {result, basis};
}

MetricSpace subquotient_metric(const MetricSpace& ambient, const Matrix& sub_basis,
                               const Matrix& quot_by_basis, const Tolerance& tol) {
  return subquotient(ambient, sub_basis, quot_by_basis, tol).space;
}

}  // namespace torsionlab::numeric
