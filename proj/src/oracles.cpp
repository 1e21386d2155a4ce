#include "torsionlab/oracles.hpp"

#include <cmath>

namespace torsionlab::oracles {

namespace {

Index rank_of(const Matrix& m, const Tolerance& tol) {
  if (m.size() == 0) return 0;
  Eigen::BDCSVD<Matrix> svd(m);
  const Vector sv = svd.singularValues();
  Index r = 0;
  for (Index i = 0; i < sv.size(); ++i)
    if (sv(i) > tol.rank_rel_tol * sv(0)) ++r;
  return r;
}

/// Basis of Z_j^{a,q} = { x in F_a C^q : dx in F_{a+j} } as columns in C^q.
Matrix z_space(const spectral::FilteredMetricComplex& f, int j, int a, int q,
               const Tolerance& tol) {
  const auto& c = f.complex;
  const Matrix b = f.basis(a, q);
  if (b.cols() == 0) return Matrix(c.dim(q), 0);
  if (c.dim(q + 1) == 0) return b;
  const Matrix target = f.basis(a + j, q + 1);
  // dx must be a combination of the target basis: solve in the least-squares
  // sense and keep the null directions of the residual map.
  const Matrix db = c.d(q) * b;
  Matrix resid = db;
  if (target.cols() > 0) {
    const Matrix coeff = numeric::least_squares(target, db, tol);
    resid = db - target * coeff;
  }
  const Matrix null_coeff = numeric::null_space(resid, tol, std::max(1.0, db.norm()));
  return b * null_coeff;
}

}  // namespace

Index classical_page_dim(const spectral::FilteredMetricComplex& f, int k, int p, int q,
                         const Tolerance& tol) {
  const auto& c = f.complex;
  const Matrix zk = z_space(f, k, p, q, tol);
  const Matrix z_up = z_space(f, k - 1, p + 1, q, tol);
  const Matrix z_dn = z_space(f, k - 1, p - k + 1, q - 1, tol);
  Matrix dz_dn(c.dim(q), z_dn.cols());
  if (z_dn.cols() > 0 && c.dim(q - 1) > 0)
    dz_dn = c.d(q - 1) * z_dn;
  else
    dz_dn = Matrix(c.dim(q), 0);
  Matrix denom(c.dim(q), z_up.cols() + dz_dn.cols());
  denom << z_up, dz_dn;
  const Index dim_zk = rank_of(zk, tol);
  // The denominator inside Z_k: rank of the union minus what is new.
  Matrix all(c.dim(q), zk.cols() + denom.cols());
  all << zk, denom;
  const Index dim_all = rank_of(all, tol);
  const Index dim_denom = rank_of(denom, tol);
  // denominator is contained in Z_k for a valid filtration; guard anyway.
  const Index inside = dim_denom - (dim_all - dim_zk);
  return dim_zk - inside;
}

bool page_dims_match_classical(const spectral::FilteredMetricComplex& f,
                               const spectral::SpectralPage& page, const Tolerance& tol) {
  for (int p = page.p_min; p <= page.p_max; ++p)
    for (int q = page.q_min; q <= page.q_max; ++q)
      if (page.dim(p, q) != classical_page_dim(f, page.k, p, q, tol)) return false;
  return true;
}

double mapping_torus_log_torsion(const std::vector<Matrix>& monodromies) {
  double sum = 0.0;
  for (std::size_t r = 0; r < monodromies.size(); ++r) {
    const Matrix& phi = monodromies[r];
    if (phi.rows() == 0) continue;
    const double det = (phi - Matrix::Identity(phi.rows(), phi.cols())).determinant();
    sum += -sign_of_degree(static_cast<int>(r)) * std::log(std::abs(det));
  }
  return sum;
}

}  // namespace torsionlab::oracles
