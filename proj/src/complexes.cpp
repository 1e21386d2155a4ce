#include "torsionlab/complexes.hpp"

#include <cmath>

namespace torsionlab::complexes {

using numeric::ortho_coordinates;

const MetricSpace& GradedMetricComplex::space(int q) const {
  static const MetricSpace zero;
  return in_range(q) ? spaces[q - q_min] : zero;
}

Matrix GradedMetricComplex::d(int q) const {
  const int i = q - q_min;
  if (i >= 0 && i + 1 < static_cast<int>(spaces.size())) return diffs[i];
  return Matrix::Zero(dim(q + 1), dim(q));
}

Index GradedMetricComplex::total_dim() const {
  Index n = 0;
  for (const auto& s : spaces) n += s.dim;
  return n;
}

ValidationReport validate_complex(const GradedMetricComplex& c, const Tolerance&) {
  ValidationReport rep;
  if (c.diffs.size() + 1 != c.spaces.size() && !(c.spaces.empty() && c.diffs.empty())) {
    rep.pass = false;
    rep.worst_check = "complex_shape";
    rep.worst_residual = 1.0;
    return rep;
  }
  for (std::size_t i = 0; i < c.spaces.size(); ++i) {
    try {
      c.spaces[i].validate();
    } catch (const Error& e) {
      rep.pass = false;
      rep.worst_check = e.what();
      rep.worst_residual = 1.0;
      return rep;
    }
    if (i + 1 < c.spaces.size() &&
        (c.diffs[i].rows() != c.spaces[i + 1].dim || c.diffs[i].cols() != c.spaces[i].dim)) {
      rep.pass = false;
      rep.worst_check = "differential_shape";
      rep.worst_residual = 1.0;
      return rep;
    }
  }
  for (int q = c.q_min; q < c.q_max(); ++q) {
    const Matrix dd = c.d(q + 1) * c.d(q);
    if (dd.size() == 0) continue;
    const double scale = std::max(1.0, c.d(q + 1).norm() * c.d(q).norm());
    const double res = dd.norm() / scale;
    rep.d_squared.push_back({q, res});
    if (res > 1e-9) {
      rep.pass = false;
      if (res > rep.worst_residual) {
        rep.worst_residual = res;
        rep.worst_check = "d_squared_zero";
      }
    }
  }
  return rep;
}

void require_valid(const GradedMetricComplex& c, const Tolerance& tol) {
  const auto rep = validate_complex(c, tol);
  if (!rep.pass)
    throw ValidationError(rep.worst_check.empty() ? "d_squared_zero: complex invalid"
                                                  : rep.worst_check);
}

LinearMapRep laplacian(const GradedMetricComplex& c, int q, const Tolerance&) {
  if (!c.in_range(q)) throw DomainError("laplacian_degree: degree out of range");
  const MetricSpace& v = c.space(q);
  Matrix delta = Matrix::Zero(v.dim, v.dim);
  if (c.dim(q + 1) > 0) {
    const Matrix d_up = c.d(q);
    delta += numeric::adjoint_matrix(v, c.space(q + 1), d_up) * d_up;
  }
  if (c.dim(q - 1) > 0) {
    const Matrix d_dn = c.d(q - 1);
    delta += d_dn * numeric::adjoint_matrix(c.space(q - 1), v, d_dn);
  }
  return {v, v, delta};
}

double differential_scale(const GradedMetricComplex& c) {
  double scale = 0.0;
  for (int q = c.q_min; q < c.q_max(); ++q) {
    if (c.dim(q) == 0 || c.dim(q + 1) == 0) continue;
    const Matrix dt = ortho_coordinates(c.space(q), c.space(q + 1), c.d(q));
    scale = std::max(scale, dt.norm());
  }
  return scale;
}

CohomologyResult hodge_cohomology(const GradedMetricComplex& c, const Tolerance& tol) {
  require_valid(c, tol);
  const double scale = differential_scale(c);
  CohomologyResult res;
  res.q_min = c.q_min;
  for (int q = c.q_min; q <= c.q_max(); ++q) {
    const MetricSpace& v = c.space(q);
    DegreeCohomology dc;
    if (v.dim == 0) {
      dc.harmonic_basis = Matrix(0, 0);
      res.degrees.push_back(dc);
      continue;
    }
    const Index r_up = numeric::rank({v, c.space_or_zero(q + 1), c.d(q)}, tol, scale);
    const Index r_dn = numeric::rank({c.space_or_zero(q - 1), v, c.d(q - 1)}, tol, scale);
    const Index betti = v.dim - r_up - r_dn;
    dc.betti = static_cast<int>(betti);
    if (betti == v.dim) {
      dc.harmonic_basis = Matrix::Identity(v.dim, v.dim);
      dc.hodge = v;
    } else {
      const Matrix l = numeric::cholesky_factor(v);
      const Matrix du = ortho_coordinates(v, c.space_or_zero(q + 1), c.d(q));
      const Matrix dn = ortho_coordinates(c.space_or_zero(q - 1), v, c.d(q - 1));
      Matrix a = Matrix::Zero(v.dim, v.dim);
      if (du.size() > 0) a += du.transpose() * du;
      if (dn.size() > 0) a += dn * dn.transpose();
      Eigen::SelfAdjointEigenSolver<Matrix> es(a);
      const Matrix u0 = es.eigenvectors().leftCols(betti);
      // Guard against a rank/eigenvalue disagreement: the spectral gap must
      // separate kernel modes from the rest.
      if (betti > 0 && betti < v.dim) {
        const double lmax = std::max(es.eigenvalues().maxCoeff(), scale * scale);
        if (es.eigenvalues()(betti) <= tol.rank_rel_tol * lmax)
          throw ConditioningError("hodge_gap: kernel dimension ambiguous at tolerance");
      }
      dc.harmonic_basis = l.transpose().triangularView<Eigen::Upper>().solve(u0);
      dc.hodge = MetricSpace(betti, Matrix::Identity(betti, betti));
    }
    res.degrees.push_back(std::move(dc));
  }
  return res;
}

const DegreeCohomology& CohomologyResult::at(int q) const {
  static const DegreeCohomology zero;
  const int i = q - q_min;
  if (i < 0 || i >= static_cast<int>(degrees.size())) return zero;
  return degrees[i];
}

Matrix hodge_coordinates(const GradedMetricComplex& c, const CohomologyResult& h,
                         int q, const Matrix& x, const Tolerance& tol) {
  const auto& dc = h.at(q);
  if (dc.betti == 0) return Matrix(0, x.cols());
  const MetricSpace& v = c.space(q);
  // Orthogonal projection onto the harmonic subspace in h-basis coordinates.
  const Matrix bt_g = dc.harmonic_basis.transpose() * v.gram;
  return dc.hodge.gram.llt().solve(bt_g * x);
}

Z2Collapse z2_collapse(const GradedMetricComplex& c) {
  Index dims[2] = {0, 0};
  std::vector<Index> offset(c.spaces.size(), 0);
  for (int q = c.q_min; q <= c.q_max(); ++q) {
    offset[q - c.q_min] = dims[parity(q)];
    dims[parity(q)] += c.dim(q);
  }
  Z2Collapse z;
  Matrix ge = Matrix::Zero(dims[0], dims[0]);
  Matrix go = Matrix::Zero(dims[1], dims[1]);
  Matrix deo = Matrix::Zero(dims[1], dims[0]);
  Matrix doe = Matrix::Zero(dims[0], dims[1]);
  for (int q = c.q_min; q <= c.q_max(); ++q) {
    const Index o = offset[q - c.q_min];
    const Index n = c.dim(q);
    if (n == 0) continue;
    (parity(q) == 0 ? ge : go).block(o, o, n, n) = c.space(q).gram;
    if (c.dim(q + 1) > 0) {
      const Index ot = offset[q + 1 - c.q_min];
      if (parity(q) == 0)
        deo.block(ot, o, c.dim(q + 1), n) = c.d(q);
      else
        doe.block(ot, o, c.dim(q + 1), n) = c.d(q);
    }
  }
  z.even = MetricSpace(dims[0], std::move(ge));
  z.odd = MetricSpace(dims[1], std::move(go));
  z.d_even_to_odd = std::move(deo);
  z.d_odd_to_even = std::move(doe);
  return z;
}

double torsion_tc(const GradedMetricComplex& c, const Tolerance& tol) {
  require_valid(c, tol);
  const double scale = differential_scale(c);
  const Z2Collapse z = z2_collapse(c);
  const double ve = numeric::log_vol_restricted({z.even, z.odd, z.d_even_to_odd}, tol, scale);
  const double vo = numeric::log_vol_restricted({z.odd, z.even, z.d_odd_to_even}, tol, scale);
  return ve - vo;
}

double torsion_log_sum(const GradedMetricComplex& c, const Tolerance& tol) {
  require_valid(c, tol);
  const double scale = differential_scale(c);
  double sum = 0.0;
  for (int q = c.q_min; q <= c.q_max(); ++q) {
    if (c.dim(q) == 0 || q == 0) continue;
    sum += -0.5 * sign_of_degree(q) * q *
           numeric::log_det_prime(laplacian(c, q, tol), tol, scale * scale);
  }
  return sum;
}

long euler_characteristic(const GradedMetricComplex& c, const Tolerance& tol) {
  long chi = 0;
  for (int q = c.q_min; q <= c.q_max(); ++q)
    chi += static_cast<long>(sign_of_degree(q)) * static_cast<long>(c.dim(q));
  const auto h = hodge_cohomology(c, tol);
  long chi_h = 0;
  for (int q = c.q_min; q <= c.q_max(); ++q)
    chi_h += static_cast<long>(sign_of_degree(q)) * h.betti(q);
  if (chi != chi_h)
    throw ValidationError("euler_rank_nullity: chi(C) != chi(HC)");
  return chi;
}

GradedMetricComplex transport(const GradedMetricComplex& c, const std::vector<Matrix>& p) {
  if (p.size() != c.spaces.size())
    throw ValidationError("transport_shape: one invertible map per degree required");
  GradedMetricComplex out;
  out.q_min = c.q_min;
  out.spaces.reserve(c.spaces.size());
  for (std::size_t i = 0; i < c.spaces.size(); ++i) {
    const Matrix pinv = p[i].inverse();
    Matrix g = pinv.transpose() * c.spaces[i].gram * pinv;
    out.spaces.emplace_back(c.spaces[i].dim, 0.5 * (g + g.transpose()));
  }
  for (std::size_t i = 0; i + 1 < c.spaces.size(); ++i)
    out.diffs.push_back(p[i + 1] * c.diffs[i] * p[i].inverse());
  return out;
}

}  // namespace torsionlab::complexes
