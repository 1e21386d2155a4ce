#include "torsionlab/detline.hpp"

#include <cmath>

namespace torsionlab::detline {

using complexes::CohomologyResult;
using complexes::GradedMetricComplex;
using complexes::hodge_cohomology;
using complexes::hodge_coordinates;
using numeric::gram_orthonormal_basis;
using numeric::null_space;

Matrix ChainMap::block(int q, Index rows, Index cols) const {
  const int i = q - q_min;
  if (i >= 0 && i < static_cast<int>(blocks.size())) {
    if (blocks[i].rows() != rows || blocks[i].cols() != cols)
      throw ValidationError("chain_map_shape: block does not match complex dims");
    return blocks[i];
  }
  return Matrix::Zero(rows, cols);
}

void require_chain_map(const GradedMetricComplex& src, const GradedMetricComplex& tgt,
                       const ChainMap& f, const Tolerance& tol) {
  const int q0 = std::min(src.q_min, tgt.q_min);
  const int q1 = std::max(src.q_max(), tgt.q_max());
  for (int q = q0; q <= q1; ++q) {
    const Matrix fq = f.block(q, tgt.dim(q), src.dim(q));
    const Matrix fq1 = f.block(q + 1, tgt.dim(q + 1), src.dim(q + 1));
    const Matrix lhs = tgt.d(q) * fq;
    const Matrix rhs = fq1 * src.d(q);
    if (lhs.size() == 0) continue;
    const double scale = std::max({1.0, lhs.norm(), rhs.norm()});
    if ((lhs - rhs).norm() > tol.compare_tol * scale)
      throw ValidationError("chain_map: d does not commute with the map");
  }
}

namespace {

double log_abs_det(const Matrix& m) {
  if (m.rows() != m.cols()) throw ValidationError("log_abs_det: matrix not square");
  if (m.rows() == 0) return 0.0;
  Eigen::PartialPivLU<Matrix> lu(m);
  double sum = 0.0;
  for (Index i = 0; i < m.rows(); ++i) {
    const double d = std::abs(lu.matrixLU()(i, i));
    if (d == 0.0) throw SingularMapError("det_frame_singular: adapted frame degenerate");
    sum += std::log(d);
  }
  return sum;
}

// Coefficient of the adapted-frame isomorphism det V -> det Z (x) det B'
// for one parity block: orthonormal frames b (image of the incoming
// differential), h (harmonic), and w (complement of the kernel); the
// outgoing differential maps the w-frame onto the image frame b' in the
// other parity, and the coefficient is det of that matrix.
double parity_coefficient(const MetricSpace& v, const Matrix& d_out,
                          const MetricSpace& v_other, const Matrix& b_other,
                          const Matrix& z_frame, const Tolerance& tol) {
  const Index n = v.dim;
  Matrix w;
  if (z_frame.cols() == n) {
    w = Matrix(n, 0);
  } else {
    Matrix compl_cols = Matrix::Identity(n, n);
    compl_cols -= z_frame * (z_frame.transpose() * v.gram);
    const double hint = std::sqrt(v.gram.diagonal().maxCoeff());
    w = gram_orthonormal_basis(v, compl_cols, tol, hint);
  }
  if (w.cols() != b_other.cols())
    throw ValidationError("det_iso_rank: rank of d inconsistent with kernel complement");
  if (w.cols() == 0) return 0.0;
  const Matrix m = b_other.transpose() * v_other.gram * (d_out * w);
  return log_abs_det(m);
}

}  // namespace

DetIsoVolume det_iso_c_hc(const GradedMetricComplex& c, const Tolerance& tol) {
  complexes::require_valid(c, tol);
  const auto z2 = complexes::z2_collapse(c);
  const double scale = std::max(z2.d_even_to_odd.size() > 0 ? z2.d_even_to_odd.norm() : 0.0,
                                z2.d_odd_to_even.size() > 0 ? z2.d_odd_to_even.norm() : 0.0);

  const Matrix b_even = gram_orthonormal_basis(z2.even, z2.d_odd_to_even, tol, scale);
  const Matrix b_odd = gram_orthonormal_basis(z2.odd, z2.d_even_to_odd, tol, scale);
  const Matrix z_even =
      gram_orthonormal_basis(z2.even, null_space(z2.d_even_to_odd, tol, scale), tol);
  const Matrix z_odd =
      gram_orthonormal_basis(z2.odd, null_space(z2.d_odd_to_even, tol, scale), tol);

  // The splitting Z = B (+) H is orthogonal, so the first exact sequence
  // contributes coefficient 1; only the second one scales the generator.
  const double k_even =
      parity_coefficient(z2.even, z2.d_even_to_odd, z2.odd, b_odd, z_even, tol);
  const double k_odd =
      parity_coefficient(z2.odd, z2.d_odd_to_even, z2.even, b_even, z_odd, tol);
  return {k_even - k_odd};
}

DetIsoVolume vol_det_graded_map(const std::vector<LinearMapRep>& phi, int q_min,
                                const Tolerance& tol) {
  double sum = 0.0;
  for (std::size_t i = 0; i < phi.size(); ++i) {
    const auto& f = phi[i];
    f.validate_shape();
    if (f.source.dim != f.target.dim)
      throw SingularMapError("singular_map: graded map component not square");
    if (f.source.dim == 0) continue;
    const Matrix m = numeric::ortho_coordinates(f.source, f.target, f.matrix);
    Eigen::BDCSVD<Matrix> svd(m);
    const Vector sv = svd.singularValues();
    if (sv(sv.size() - 1) <= tol.rank_rel_tol * sv(0))
      throw SingularMapError("singular_map: graded map component singular");
    double lv = 0.0;
    for (Index j = 0; j < sv.size(); ++j) lv += std::log(sv(j));
    sum += sign_of_degree(q_min + static_cast<int>(i)) * lv;
  }
  return {sum};
}

namespace {

void require_compatible_ses(const GradedMetricComplex& c0, const GradedMetricComplex& c1,
                            const GradedMetricComplex& c2, const ChainMap& incl,
                            const ChainMap& proj, const Tolerance& tol) {
  complexes::require_valid(c0, tol);
  complexes::require_valid(c1, tol);
  complexes::require_valid(c2, tol);
  require_chain_map(c0, c1, incl, tol);
  require_chain_map(c1, c2, proj, tol);
  const int q0 = std::min({c0.q_min, c1.q_min, c2.q_min});
  const int q1 = std::max({c0.q_max(), c1.q_max(), c2.q_max()});
  for (int q = q0; q <= q1; ++q) {
    if (c1.dim(q) != c0.dim(q) + c2.dim(q))
      throw ValidationError("invalid_ses: dimensions not additive");
    const Matrix iq = incl.block(q, c1.dim(q), c0.dim(q));
    const Matrix pq = proj.block(q, c2.dim(q), c1.dim(q));
    if (c0.dim(q) > 0) {
      const Matrix pulled = iq.transpose() * c1.space(q).gram * iq;
      if ((pulled - c0.space(q).gram).norm() >
          tol.compare_tol * std::max(1.0, c0.space(q).gram.norm()))
        throw ValidationError("invalid_ses: inclusion not an isometry onto its image");
    }
    if (c2.dim(q) > 0) {
      const Matrix q_inv = pq * c1.space(q).gram.llt().solve(pq.transpose());
      const Matrix quotient_gram = q_inv.inverse();
      if ((quotient_gram - c2.space(q).gram).norm() >
          tol.compare_tol * std::max(1.0, c2.space(q).gram.norm()))
        throw ValidationError("invalid_ses: quotient metric mismatch");
    }
    if (c0.dim(q) > 0 && c2.dim(q) > 0) {
      if ((pq * iq).norm() > tol.compare_tol * std::max(1.0, pq.norm() * iq.norm()))
        throw ValidationError("invalid_ses: proj o incl nonzero");
    }
  }
}

}  // namespace

GradedMetricComplex les_from_ses(const GradedMetricComplex& c0, const GradedMetricComplex& c1,
                                 const GradedMetricComplex& c2, const ChainMap& incl,
                                 const ChainMap& proj, const Tolerance& tol) {
  require_compatible_ses(c0, c1, c2, incl, proj, tol);
  const CohomologyResult h0 = hodge_cohomology(c0, tol);
  const CohomologyResult h1 = hodge_cohomology(c1, tol);
  const CohomologyResult h2 = hodge_cohomology(c2, tol);

  const int q0 = std::min({c0.q_min, c1.q_min, c2.q_min});
  const int q1 = std::max({c0.q_max(), c1.q_max(), c2.q_max()});

  GradedMetricComplex les;
  les.q_min = 3 * q0;
  for (int q = q0; q <= q1; ++q) {
    les.spaces.push_back(h0.at(q).hodge);
    les.spaces.push_back(h1.at(q).hodge);
    les.spaces.push_back(h2.at(q).hodge);
  }

  for (int q = q0; q <= q1; ++q) {
    const int b0 = h0.at(q).betti, b1 = h1.at(q).betti, b2 = h2.at(q).betti;
    const int b0n = h0.at(q + 1).betti;

    Matrix alpha(b1, b0);
    if (b0 > 0 && b1 > 0) {
      const Matrix img = incl.block(q, c1.dim(q), c0.dim(q)) * h0.at(q).harmonic_basis;
      alpha = hodge_coordinates(c1, h1, q, img, tol);
    } else {
      alpha.setZero();
    }

    Matrix beta(b2, b1);
    if (b1 > 0 && b2 > 0) {
      const Matrix img = proj.block(q, c2.dim(q), c1.dim(q)) * h1.at(q).harmonic_basis;
      beta = hodge_coordinates(c2, h2, q, img, tol);
    } else {
      beta.setZero();
    }

    // Connecting map: minimum-norm lift through proj, apply d, pull back
    // through incl, harmonic-project in C0.
    Matrix conn(b0n, b2);
    conn.setZero();
    if (b2 > 0 && b0n > 0) {
      const Matrix pq = proj.block(q, c2.dim(q), c1.dim(q));
      const Matrix g1inv_pt = c1.space(q).gram.llt().solve(pq.transpose());
      const Matrix lift =
          g1inv_pt * (pq * g1inv_pt).ldlt().solve(h2.at(q).harmonic_basis);
      const Matrix dz = c1.d(q) * lift;
      const Matrix iq1 = incl.block(q + 1, c1.dim(q + 1), c0.dim(q + 1));
      const Matrix z0 = numeric::least_squares(iq1, dz, tol);
      const double scale = std::max(1.0, dz.norm());
      if ((iq1 * z0 - dz).norm() > tol.compare_tol * scale)
        throw ValidationError("invalid_ses: connecting image leaves the subcomplex");
      conn = hodge_coordinates(c0, h0, q + 1, z0, tol);
    }

    const int base = 3 * (q - q0);
    auto put = [&](int at, Matrix m) {
      if (static_cast<int>(les.diffs.size()) <= at) les.diffs.resize(at + 1);
      les.diffs[at] = std::move(m);
    };
    put(base + 0, std::move(alpha));
    put(base + 1, std::move(beta));
    if (q < q1) put(base + 2, std::move(conn));
  }
  if (les.spaces.empty()) return les;
  les.diffs.resize(les.spaces.size() - 1, Matrix());
  for (std::size_t i = 0; i + 1 < les.spaces.size(); ++i)
    if (les.diffs[i].size() == 0)
      les.diffs[i] = Matrix::Zero(les.spaces[i + 1].dim, les.spaces[i].dim);

  complexes::require_valid(les, tol);
  const auto hl = hodge_cohomology(les, tol);
  for (int q = les.q_min; q <= les.q_max(); ++q)
    if (hl.betti(q) != 0)
      throw ValidationError("les_not_acyclic: long exact sequence has cohomology");
  return les;
}

SesReport ses_torsion_check(const GradedMetricComplex& c0, const GradedMetricComplex& c1,
                            const GradedMetricComplex& c2, const ChainMap& incl,
                            const ChainMap& proj, const Tolerance& tol) {
  SesReport rep;
  const GradedMetricComplex les = les_from_ses(c0, c1, c2, incl, proj, tol);
  rep.t0 = complexes::torsion_tc(c0, tol);
  rep.t1 = complexes::torsion_tc(c1, tol);
  rep.t2 = complexes::torsion_tc(c2, tol);
  rep.t_les = complexes::torsion_tc(les, tol);
  rep.residual = rep.t1 - rep.t0 - rep.t2 - rep.t_les;
  rep.pass = std::abs(rep.residual) < 1e-6;
  return rep;
}

}  // namespace torsionlab::detline
