#include "torsionlab/spectral.hpp"

#include <cmath>
#include <map>
#include <random>

namespace torsionlab::spectral {

using complexes::GradedMetricComplex;
using numeric::gram_orthonormal_basis;
using numeric::least_squares;
using numeric::null_space;

Matrix FilteredMetricComplex::basis(int p, int q) const {
  const Index n = complex.dim(q);
  if (p > p_max()) return Matrix(n, 0);
  if (p <= p_min) {
    if (level_bases.empty()) return Matrix::Identity(n, n);
    p = p_min;
  }
  const auto& per_degree = level_bases[p - p_min];
  const int qi = q - complex.q_min;
  if (qi < 0 || qi >= static_cast<int>(per_degree.size())) return Matrix(n, 0);
  return per_degree[qi];
}

FiltrationReport validate_filtration(const FilteredMetricComplex& f, const Tolerance& tol) {
  FiltrationReport rep;
  auto note = [&](const std::string& check, int p, int q, double res) {
    rep.issues.push_back({check, p, q, res});
    if (res > rep.worst_residual) {
      rep.worst_residual = res;
      rep.worst_check = check;
    }
    rep.pass = false;
  };
  const auto crep = complexes::validate_complex(f.complex, tol);
  if (!crep.pass) note(crep.worst_check, 0, 0, crep.worst_residual);
  if (f.level_bases.empty()) {
    note("end_conditions: no filtration levels", 0, 0, 1.0);
    return rep;
  }
  const auto& c = f.complex;
  for (int q = c.q_min; q <= c.q_max(); ++q) {
    const MetricSpace& v = c.space(q);
    // F_{p_min} must span the whole degree.
    const Matrix o_top = gram_orthonormal_basis(v, f.basis(f.p_min, q), tol);
    if (o_top.cols() != v.dim) note("end_conditions: F_{p_min} does not span", f.p_min, q, 1.0);
    for (int p = f.p_min; p <= f.p_max(); ++p) {
      const Matrix b = f.basis(p, q);
      const Matrix o = gram_orthonormal_basis(v, b, tol);
      if (o.cols() != b.cols()) note("level_basis_rank: dependent columns", p, q, 1.0);
      if (p > f.p_min) {
        const Matrix up = gram_orthonormal_basis(v, f.basis(p - 1, q), tol);
        Matrix out = o;
        if (up.cols() > 0)
          out -= up * (up.transpose() * (v.gram * o));
        const double res = out.size() == 0 ? 0.0 : out.norm();
        if (res > tol.compare_tol) note("nesting: F_p not inside F_{p-1}", p, q, res);
      }
      // d-stability: d F_p inside F_p at the next degree.
      if (c.dim(q + 1) > 0 && b.cols() > 0) {
        const Matrix db = c.d(q) * b;
        const MetricSpace& w = c.space(q + 1);
        const Matrix ot = gram_orthonormal_basis(w, f.basis(p, q + 1), tol);
        Matrix out = db;
        if (ot.cols() > 0) out -= ot * (ot.transpose() * (w.gram * db));
        const double res = out.norm() / std::max(1.0, db.norm());
        if (res > tol.compare_tol) note("d_stability: d F_p leaves F_p", p, q, res);
      }
    }
  }
  return rep;
}

void require_valid(const FilteredMetricComplex& f, const Tolerance& tol) {
  const auto rep = validate_filtration(f, tol);
  if (!rep.pass)
    throw ValidationError(rep.worst_check.empty() ? "invalid_filtration" : rep.worst_check);
}

// ---- page machinery ---------------------------------------------------------

namespace {

/// Shared scaffolding: G-orthonormal bases of every filtration step.
struct Context {
  const FilteredMetricComplex& f;
  const GradedMetricComplex& c;
  Tolerance tol;
  // onb[(p - p_min)][qi]; levels run p_min .. p_max + 1 (last empty).
  std::vector<std::vector<Matrix>> onb;

  Context(const FilteredMetricComplex& ff, const Tolerance& t) : f(ff), c(ff.complex), tol(t) {
    const int levels = f.length() + 1;
    onb.resize(levels);
    for (int l = 0; l < levels; ++l) {
      onb[l].resize(c.spaces.size());
      for (int q = c.q_min; q <= c.q_max(); ++q)
        onb[l][q - c.q_min] = gram_orthonormal_basis(c.space(q), f.basis(f.p_min + l, q), tol);
    }
  }

  Matrix o(int p, int q) const {
    const Index n = c.dim(q);
    if (q < c.q_min || q > c.q_max()) return Matrix(n, 0);
    if (p <= f.p_min) p = f.p_min;
    if (p > f.p_max()) return Matrix(n, 0);
    return onb[p - f.p_min][q - c.q_min];
  }

  /// Component of x orthogonal to F_p (columns in C^q coordinates).
  Matrix perp(int p, int q, const Matrix& x) const {
    const Matrix ob = o(p, q);
    if (ob.cols() == 0) return x;
    return x - ob * (ob.transpose() * (c.space(q).gram * x));
  }
};

Index euclidean_rank(const Matrix& m, const Tolerance& tol, double scale_hint) {
  if (m.size() == 0) return 0;
  Eigen::BDCSVD<Matrix> svd(m);
  const Vector sv = svd.singularValues();
  Index r = 0;
  const double cut = tol.rank_rel_tol * std::max(sv(0), scale_hint);
  for (Index i = 0; i < sv.size(); ++i)
    if (sv(i) > cut) ++r;
  return r;
}

/// Largest differential norm across a page; page metrics are the identity,
/// so this is the scale reference for all page-level rank decisions.
double page_scale(const SpectralPage& page) {
  double scale = 0.0;
  for (const auto& d : page.delta)
    if (d.size() > 0) scale = std::max(scale, d.norm());
  return scale;
}

/// Orthonormal kernel basis of the entry Laplacian dout^T dout + din din^T.
Matrix harmonic_coefficients(const Matrix& dout, const Matrix& din, Index dim,
                             const Tolerance& tol, double scale) {
  if (dim == 0) return Matrix(0, 0);
  Matrix a = Matrix::Zero(dim, dim);
  if (dout.size() > 0) a += dout.transpose() * dout;
  if (din.size() > 0) a += din * din.transpose();
  const Index r_out = euclidean_rank(dout, tol, scale);
  const Index r_in = euclidean_rank(din, tol, scale);
  const Index betti = dim - r_out - r_in;
  if (betti < 0) throw ConditioningError("page_rank: negative kernel dimension");
  if (betti == dim) return Matrix::Identity(dim, dim);
  Eigen::SelfAdjointEigenSolver<Matrix> es(a);
  const double lmax = std::max(es.eigenvalues().maxCoeff(), scale * scale);
  if (betti > 0 && es.eigenvalues()(betti) <= tol.rank_rel_tol * lmax)
    throw ConditioningError("page_gap: kernel dimension ambiguous at tolerance");
  return es.eigenvectors().leftCols(betti);
}

void check_delta_squared(const SpectralPage& page, const Tolerance& tol) {
  for (int p = page.p_min; p <= page.p_max; ++p)
    for (int q = page.q_min; q <= page.q_max; ++q) {
      const Matrix a = page.delta_at(p, q);
      const Matrix b = page.delta_at(p + page.k, q + 1);
      if (a.size() == 0 || b.size() == 0) continue;
      const Matrix bb = b * a;
      const double scale = std::max(1.0, a.norm() * b.norm());
      if (bb.norm() > tol.compare_tol * scale)
        throw ValidationError("page_delta_squared: delta o delta nonzero");
    }
}

SpectralPage make_next(const SpectralPage& page, const FilteredMetricComplex& f,
                       const Tolerance& tol, std::uint64_t* perturb_seed) {
  const Context ctx(f, tol);
  const auto& c = f.complex;
  SpectralPage np;
  np.k = page.k + 1;
  np.p_min = page.p_min;
  np.p_max = page.p_max;
  np.q_min = page.q_min;
  np.q_max = page.q_max;
  np.entries.resize(page.entries.size());
  np.delta.resize(page.entries.size());

  std::mt19937_64 rng(perturb_seed ? *perturb_seed : 0);
  auto unit = [&rng]() { return double(rng() >> 11) * 0x1.0p-53 - 0.5; };
  const double scale = page_scale(page);

  for (int p = np.p_min; p <= np.p_max; ++p) {
    for (int q = np.q_min; q <= np.q_max; ++q) {
      const auto& e = page.entry(p, q);
      const Matrix dout = page.delta_at(p, q);
      const Matrix din = page.delta_at(p - page.k, q - 1);
      const Matrix h = harmonic_coefficients(dout, din, e.dim(), tol, scale);
      PageEntry ne;
      ne.cls = e.cls * h;
      Matrix emb = e.emb * h;

      // Upgrade representatives: find w in F_{p+1} with dw in F_{p+k} so
      // that d(z + w) lands in F_{p+k+1}. Solvable because the class
      // survived to this page.
      if (emb.cols() > 0 && c.dim(q + 1) > 0) {
        const Matrix b1 = ctx.o(p + 1, q);
        Matrix wb(c.dim(q), 0);
        if (b1.cols() > 0) {
          const Matrix db1 = c.d(q) * b1;
          const Matrix n_coeff =
              null_space(ctx.perp(p + page.k, q + 1, db1), tol, db1.norm());
          wb = b1 * n_coeff;
        }
        const Matrix target = ctx.perp(p + page.k + 1, q + 1, c.d(q) * emb);
        if (wb.cols() > 0) {
          const Matrix dwb = c.d(q) * wb;
          const Matrix a_mat = ctx.perp(p + page.k + 1, q + 1, dwb);
          Matrix t = least_squares(a_mat, -target, tol);
          if (perturb_seed) {
            // Shift inside the degeneracy space of the lift: adds elements of
            // F_{p+1} with dw in F_{p+k+1}, which do not change the class.
            const Matrix n2 = null_space(a_mat, tol, dwb.norm());
            if (n2.cols() > 0) {
              Matrix shift(n2.rows(), t.cols());
              for (Index i = 0; i < shift.rows(); ++i)
                for (Index j = 0; j < shift.cols(); ++j) shift(i, j) = unit();
              t += n2 * (n2.transpose() * shift);
            }
          }
          emb += wb * t;
          const Matrix resid = ctx.perp(p + page.k + 1, q + 1, c.d(q) * emb);
          if (resid.norm() > tol.compare_tol * std::max(1.0, emb.norm() * c.d(q).norm()))
            throw ValidationError("page_lift_infeasible: admissible lift does not exist "
                                  "(earlier page corrupted)");
        } else if (target.norm() > tol.compare_tol * std::max(1.0, emb.norm() * c.d(q).norm())) {
          throw ValidationError("page_lift_infeasible: admissible lift does not exist");
        }
      }
      ne.emb = std::move(emb);
      np.entries[np.idx(p, q)] = std::move(ne);
    }
  }

  // New differential from the upgraded representatives.
  for (int p = np.p_min; p <= np.p_max; ++p) {
    for (int q = np.q_min; q <= np.q_max; ++q) {
      const auto& src = np.entry(p, q);
      Matrix d(0, src.dim());
      if (np.in_grid(p + np.k, q + 1)) {
        const auto& tgt = np.entry(p + np.k, q + 1);
        d = Matrix::Zero(tgt.dim(), src.dim());
        if (src.dim() > 0 && tgt.dim() > 0 && c.dim(q + 1) > 0)
          d = tgt.cls.transpose() * (c.space(q + 1).gram * (c.d(q) * src.emb));
      }
      np.delta[np.idx(p, q)] = std::move(d);
    }
  }
  check_delta_squared(np, tol);
  return np;
}

}  // namespace

Index SpectralPage::idx(int p, int q) const {
  return static_cast<Index>(p - p_min) * (q_max - q_min + 1) + (q - q_min);
}

const PageEntry& SpectralPage::entry(int p, int q) const {
  static const PageEntry zero;
  if (!in_grid(p, q)) return zero;
  return entries[idx(p, q)];
}

Matrix SpectralPage::delta_at(int p, int q) const {
  if (!in_grid(p, q)) return Matrix(dim(p + k, q + 1), 0);
  const Matrix& d = delta[idx(p, q)];
  if (d.size() == 0 && dim(p, q) > 0)
    return Matrix::Zero(dim(p + k, q + 1), dim(p, q));
  return d;
}

Index SpectralPage::dim_total_degree(int q) const {
  Index n = 0;
  for (int p = p_min; p <= p_max; ++p) n += dim(p, q);
  return n;
}

SpectralPage page_e1(const FilteredMetricComplex& f, const Tolerance& tol) {
  require_valid(f, tol);
  const Context ctx(f, tol);
  const auto& c = f.complex;
  SpectralPage page;
  page.k = 1;
  page.p_min = f.p_min;
  page.p_max = f.p_max();
  page.q_min = c.q_min;
  page.q_max = c.q_max();
  page.entries.resize(static_cast<std::size_t>(f.length()) * c.spaces.size());
  page.delta.resize(page.entries.size());

  for (int p = page.p_min; p <= page.p_max; ++p) {
    const GradedMetricComplex gc = associated_graded_at(f, p, tol);
    // Realization bases of the associated graded, reconstructed to embed the
    // harmonic coefficients back into F_p C^q.
    std::vector<Matrix> real_bases(c.spaces.size());
    for (int q = c.q_min; q <= c.q_max(); ++q)
      real_bases[q - c.q_min] =
          gram_orthonormal_basis(c.space(q), ctx.perp(p + 1, q, ctx.o(p, q)), tol, 1.0);
    const auto h = complexes::hodge_cohomology(gc, tol);
    for (int q = c.q_min; q <= c.q_max(); ++q) {
      const Matrix hb = h.at(q).harmonic_basis;  // orthonormal coefficients
      PageEntry e;
      e.emb = real_bases[q - c.q_min] * hb;
      e.cls = e.emb;
      page.entries[page.idx(p, q)] = std::move(e);
    }
  }
  for (int p = page.p_min; p <= page.p_max; ++p)
    for (int q = page.q_min; q <= page.q_max; ++q) {
      const auto& src = page.entry(p, q);
      Matrix d(0, src.dim());
      if (page.in_grid(p + 1, q + 1)) {
        const auto& tgt = page.entry(p + 1, q + 1);
        d = Matrix::Zero(tgt.dim(), src.dim());
        if (src.dim() > 0 && tgt.dim() > 0 && c.dim(q + 1) > 0)
          d = tgt.cls.transpose() * (c.space(q + 1).gram * (c.d(q) * src.emb));
      }
      page.delta[page.idx(p, q)] = std::move(d);
    }
  check_delta_squared(page, tol);
  return page;
}

SpectralPage next_page(const SpectralPage& page, const FilteredMetricComplex& f,
                       const Tolerance& tol) {
  return make_next(page, f, tol, nullptr);
}

SpectralPage next_page_perturbed(const SpectralPage& page, const FilteredMetricComplex& f,
                                 std::uint64_t seed, const Tolerance& tol) {
  return make_next(page, f, tol, &seed);
}

double rho_k(const SpectralPage& page, const Tolerance& tol) {
  const double scale = page_scale(page);
  double sum = 0.0;
  for (int q = page.q_min; q <= page.q_max; ++q) {
    if (q == 0) continue;
    double ldp = 0.0;
    for (int p = page.p_min; p <= page.p_max; ++p) {
      const Index n = page.dim(p, q);
      if (n == 0) continue;
      const Matrix dout = page.delta_at(p, q);
      const Matrix din = page.delta_at(p - page.k, q - 1);
      Matrix a = Matrix::Zero(n, n);
      if (dout.size() > 0) a += dout.transpose() * dout;
      if (din.size() > 0) a += din * din.transpose();
      const MetricSpace e = MetricSpace::euclidean(n);
      ldp += numeric::log_det_prime({e, e, a}, tol, scale * scale);
    }
    sum += -0.5 * sign_of_degree(q) * q * ldp;
  }
  return sum;
}

GradedMetricComplex associated_graded_at(const FilteredMetricComplex& f, int p,
                                         const Tolerance& tol) {
  const Context ctx(f, tol);
  const auto& c = f.complex;
  GradedMetricComplex gc;
  gc.q_min = c.q_min;
  std::vector<Matrix> bases(c.spaces.size());
  for (int q = c.q_min; q <= c.q_max(); ++q) {
    bases[q - c.q_min] =
        gram_orthonormal_basis(c.space(q), ctx.perp(p + 1, q, ctx.o(p, q)), tol, 1.0);
    const Index expect = ctx.o(p, q).cols() - ctx.o(p + 1, q).cols();
    if (bases[q - c.q_min].cols() != expect)
      throw ValidationError("invalid_filtration: graded piece dimension mismatch at p=" +
                            std::to_string(p) + " q=" + std::to_string(q) + " got " +
                            std::to_string(bases[q - c.q_min].cols()) + " expected " +
                            std::to_string(expect));
    gc.spaces.push_back(MetricSpace::euclidean(bases[q - c.q_min].cols()));
  }
  for (int q = c.q_min; q < c.q_max(); ++q) {
    const Matrix& r0 = bases[q - c.q_min];
    const Matrix& r1 = bases[q + 1 - c.q_min];
    gc.diffs.push_back(r1.transpose() * (c.space(q + 1).gram * (c.d(q) * r0)));
  }
  return gc;
}

double torsion_gc(const FilteredMetricComplex& f, const Tolerance& tol) {
  double sum = 0.0;
  for (int p = f.p_min; p <= f.p_max(); ++p)
    sum += complexes::torsion_tc(associated_graded_at(f, p, tol), tol);
  return sum;
}

Index GhcResult::idx(int p, int q) const {
  return static_cast<Index>(p - p_min) * (q_max - q_min + 1) + (q - q_min);
}

const GhcEntry& GhcResult::entry(int p, int q) const {
  static const GhcEntry zero;
  if (p < p_min || p > p_max || q < q_min || q > q_max) return zero;
  return entries[idx(p, q)];
}

GhcResult ghc_metric(const FilteredMetricComplex& f, const Tolerance& tol) {
  require_valid(f, tol);
  const Context ctx(f, tol);
  const auto& c = f.complex;
  GhcResult res;
  res.p_min = f.p_min;
  res.p_max = f.p_max();
  res.q_min = c.q_min;
  res.q_max = c.q_max();
  res.harmonic.resize(c.spaces.size());
  res.entries.resize(static_cast<std::size_t>(f.length()) * c.spaces.size());

  const auto h = complexes::hodge_cohomology(c, tol);
  for (int q = c.q_min; q <= c.q_max(); ++q)
    res.harmonic[q - c.q_min] = gram_orthonormal_basis(c.space(q), h.at(q).harmonic_basis, tol);

  for (int q = c.q_min; q <= c.q_max(); ++q) {
    const Matrix& harm = res.harmonic[q - c.q_min];
    const Index b = harm.cols();
    // Filtration induced on cohomology: harmonic projections of the
    // cocycles inside each F_p.
    std::vector<Matrix> hf(f.length() + 1);
    for (int p = f.p_min; p <= f.p_max() + 1; ++p) {
      const Matrix o = ctx.o(p, q);
      Matrix zb(c.dim(q), 0);
      if (o.cols() > 0) {
        if (c.dim(q + 1) > 0) {
          const Matrix dz = c.d(q) * o;
          zb = o * null_space(dz, tol, c.d(q).norm());
        } else {
          zb = o;
        }
      }
      const Matrix coords = harm.transpose() * (c.space(q).gram * zb);
      hf[p - f.p_min] = numeric::range_space(coords, tol, 1.0);
    }
    // Top level is all of H^q.
    if (hf[0].cols() != b) hf[0] = Matrix::Identity(b, b);
    for (int p = f.p_min; p <= f.p_max(); ++p) {
      const Matrix& up = hf[p - f.p_min];
      const Matrix& dn = hf[p + 1 - f.p_min];
      Matrix compl_cols = up;
      if (dn.cols() > 0) compl_cols -= dn * (dn.transpose() * up);
      GhcEntry e;
      e.basis = numeric::range_space(compl_cols, tol, 1.0);
      res.entries[res.idx(p, q)] = std::move(e);
    }
    Index total = 0;
    for (int p = f.p_min; p <= f.p_max(); ++p) total += res.entry(p, q).dim();
    if (total != b)
      throw ValidationError("ghc_dimension: graded cohomology does not add up");
  }
  return res;
}

SpectralResult log_t_comb(const FilteredMetricComplex& f, const Tolerance& tol) {
  SpectralResult res;
  res.pages.push_back(page_e1(f, tol));
  const int k_stop = std::max(1, f.length());
  while (res.pages.back().k < k_stop)
    res.pages.push_back(next_page(res.pages.back(), f, tol));
  res.rho.reserve(res.pages.size());
  double sum = 0.0;
  for (const auto& page : res.pages) {
    res.rho.push_back(rho_k(page, tol));
    sum += res.rho.back();
  }
  res.log_t_comb = sum;

  // Identification of the stabilized page with the graded cohomology, with
  // its volume per entry; representatives of the last page are cocycles.
  const auto ghc = ghc_metric(f, tol);
  const auto& last = res.pages.back();
  double corr = 0.0;
  for (int q = last.q_min; q <= last.q_max; ++q) {
    const Matrix& harm = ghc.harmonic[q - f.complex.q_min];
    for (int p = last.p_min; p <= last.p_max; ++p) {
      const auto& e = last.entry(p, q);
      const auto& ge = ghc.entry(p, q);
      if (e.dim() != ge.dim())
        throw ValidationError("ghc_dimension: stabilized page does not match GHC");
      if (e.dim() == 0) continue;
      const Matrix gamma =
          ge.basis.transpose() * (harm.transpose() * (f.complex.space(q).gram * e.emb));
      Eigen::BDCSVD<Matrix> svd(gamma);
      const Vector sv = svd.singularValues();
      if (sv(sv.size() - 1) <= tol.rank_rel_tol * sv(0))
        throw SingularMapError("ghc_identification_singular");
      double lv = 0.0;
      for (Index i = 0; i < sv.size(); ++i) lv += std::log(sv(i));
      corr += sign_of_degree(q) * lv;
    }
  }
  res.ghc_comparison.log_vol = corr;
  return res;
}

MaumaryReport maumary_check(const FilteredMetricComplex& f, const Tolerance& tol) {
  MaumaryReport rep;
  const auto res = log_t_comb(f, tol);
  rep.t_c = complexes::torsion_tc(f.complex, tol);
  rep.t_gc = torsion_gc(f, tol);
  rep.rho = res.rho;
  rep.sum_rho = res.log_t_comb;
  rep.ghc_correction = res.ghc_comparison.log_vol;
  rep.residual = rep.t_c - rep.t_gc - rep.sum_rho - rep.ghc_correction;
  rep.pass = std::abs(rep.residual) < 1e-6;
  return rep;
}

PageInvariantReport check_page_invariants(const FilteredMetricComplex& f,
                                          const SpectralResult& res, const Tolerance& tol) {
  PageInvariantReport rep;
  long chi = 0;
  for (int q = f.complex.q_min; q <= f.complex.q_max(); ++q)
    chi += static_cast<long>(sign_of_degree(q)) * f.complex.dim(q);
  for (const auto& page : res.pages) {
    long chi_k = 0;
    for (int q = page.q_min; q <= page.q_max; ++q)
      chi_k += static_cast<long>(sign_of_degree(q)) * page.dim_total_degree(q);
    if (chi_k != chi) rep.euler_ok = false;
  }
  for (std::size_t i = 0; i + 1 < res.pages.size(); ++i) {
    const auto& a = res.pages[i];
    const auto& b = res.pages[i + 1];
    for (int q0 = a.q_min; q0 <= a.q_max; ++q0) {
      long sa = 0, sb = 0;
      for (int q = q0; q <= a.q_max; ++q) {
        const long s = static_cast<long>(sign_of_degree(q - q0));
        sa += s * a.dim_total_degree(q);
        sb += s * b.dim_total_degree(q);
      }
      if (sb > sa) rep.morse_ok = false;
    }
  }
  rep.last_rho = res.rho.empty() ? 0.0 : std::abs(res.rho.back());
  // The final page carries no differential (structural stabilization); its
  // torsion must vanish to round-off.
  if (rep.last_rho > 1e-10) rep.stabilization_ok = false;
  (void)tol;
  return rep;
}

}  // namespace torsionlab::spectral
