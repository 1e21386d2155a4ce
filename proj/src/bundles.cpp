#include "torsionlab/bundles.hpp"

#include <cmath>
#include <map>

namespace torsionlab::bundles {

using complexes::hodge_cohomology;
using complexes::hodge_coordinates;
using numeric::gram_orthonormal_basis;
using numeric::least_squares;
using numeric::null_space;

const MetricSpace& BundleModel::fiber_space(int r) const {
  static const MetricSpace zero;
  const int i = r - r_min;
  if (i < 0 || i >= static_cast<int>(fiber.size())) return zero;
  return fiber[i];
}

geomcx::MorseBottModel to_morse_bott(const BundleModel& b) {
  geomcx::MorseBottModel m;
  for (const auto& pt : b.points) {
    geomcx::Component comp;
    comp.label = pt.label;
    comp.index = pt.index;
    comp.complex.q_min = b.r_min;
    for (const auto& h : b.fiber) comp.complex.spaces.push_back(h);
    for (std::size_t i = 0; i + 1 < b.fiber.size(); ++i)
      comp.complex.diffs.push_back(Matrix::Zero(b.fiber[i + 1].dim, b.fiber[i].dim));
    m.components.push_back(std::move(comp));
  }
  std::map<std::pair<int, int>, geomcx::InstantonMap> merged;
  auto add_arrow = [&](const BundleModel::Arrow& a, bool jump) {
    if (a.to < 0 || a.from < 0 || a.to >= static_cast<int>(b.points.size()) ||
        a.from >= static_cast<int>(b.points.size()))
      throw ValidationError("bundle_arrow: point id out of range");
    const int diff = b.points[a.to].index - b.points[a.from].index;
    if (!jump && diff != 1)
      throw ValidationError("bundle_arrow: transport must raise the index by one");
    if (jump && diff < 2)
      throw ValidationError("bundle_arrow: jump must raise the index by at least two");
    auto& u = merged[{a.to, a.from}];
    u.to = a.to;
    u.from = a.from;
    auto [it, fresh] = u.blocks.try_emplace(a.r, a.matrix);
    if (!fresh) it->second += a.matrix;
  };
  for (const auto& a : b.transports) add_arrow(a, false);
  for (const auto& a : b.jumps) add_arrow(a, true);
  for (auto& [key, u] : merged) m.instantons.push_back(std::move(u));
  return m;
}

GradedMetricComplex base_complex(const BundleModel& b, int r, const Tolerance& tol) {
  const MetricSpace& h = b.fiber_space(r);
  int p_lo = b.points.empty() ? 0 : b.points[0].index;
  int p_hi = p_lo;
  for (const auto& pt : b.points) {
    p_lo = std::min(p_lo, pt.index);
    p_hi = std::max(p_hi, pt.index);
  }
  GradedMetricComplex c;
  c.q_min = p_lo;
  std::vector<std::vector<Index>> offsets(p_hi - p_lo + 1,
                                          std::vector<Index>(b.points.size(), -1));
  for (int p = p_lo; p <= p_hi; ++p) {
    Index n = 0;
    for (std::size_t i = 0; i < b.points.size(); ++i)
      if (b.points[i].index == p) {
        offsets[p - p_lo][i] = n;
        n += h.dim;
      }
    Matrix gram = Matrix::Zero(n, n);
    for (Index at = 0; at < n; at += h.dim) gram.block(at, at, h.dim, h.dim) = h.gram;
    c.spaces.emplace_back(n, std::move(gram));
  }
  for (int p = p_lo; p < p_hi; ++p) {
    Matrix d = Matrix::Zero(c.spaces[p + 1 - p_lo].dim, c.spaces[p - p_lo].dim);
    for (const auto& a : b.transports) {
      if (a.r != r) continue;
      if (b.points[a.from].index != p) continue;
      const Index src = offsets[p - p_lo][a.from];
      const Index tgt = offsets[p + 1 - p_lo][a.to];
      if (src < 0 || tgt < 0) throw ValidationError("bundle_arrow: inconsistent indices");
      d.block(tgt, src, h.dim, h.dim) += a.matrix;
    }
    c.diffs.push_back(std::move(d));
  }
  complexes::require_valid(c, tol);
  return c;
}

LeraySerreReport leray_serre_e1(const BundleModel& b, const Tolerance& tol) {
  LeraySerreReport rep;
  const auto g = geomcx::assemble(to_morse_bott(b), tol);
  const auto page = spectral::page_e1(g.total, tol);
  const auto& total = g.total.complex;

  std::vector<GradedMetricComplex> base;
  for (int r = b.r_min; r <= b.r_max(); ++r) base.push_back(base_complex(b, r, tol));

  // Per entry: expected space is the fiber-degree-r block over the index-p
  // points; the identification must be an isometry and must carry delta_1 to
  // (-1)^r times the base differential.
  std::vector<std::vector<Matrix>> coords(page.p_max - page.p_min + 1);
  for (int p = page.p_min; p <= page.p_max; ++p) {
    coords[p - page.p_min].resize(page.q_max - page.q_min + 1);
    for (int q = page.q_min; q <= page.q_max; ++q) {
      const int r = q - p;
      const auto& e = page.entry(p, q);
      Index expect = 0;
      for (const auto& pt : b.points)
        if (pt.index == p) expect += b.fiber_space(r).dim;
      if (e.dim() != expect) {
        rep.pass = false;
        rep.mismatches.push_back("E1[" + std::to_string(p) + "," + std::to_string(q) + "] dim");
        continue;
      }
      if (e.dim() == 0) continue;
      // Columns of the fiber block inside the total complex at this degree.
      const Index n = total.dim(q);
      Matrix cols = Matrix::Zero(n, expect);
      Index at = 0;
      for (std::size_t i = 0; i < b.points.size(); ++i) {
        if (b.points[i].index != p) continue;
        const auto [off, len] = g.layout.slots[q - g.layout.q_min][i];
        for (Index j = 0; j < len; ++j) cols(off + j, at + j) = 1.0;
        at += len;
      }
      const Matrix m = numeric::coordinates_in(total.space(q), cols, e.emb, tol);
      coords[p - page.p_min][q - page.q_min] = m;
      // Metric check: entry metric is the identity; transported to fiber
      // coordinates it must match the block fiber Gram.
      Matrix gram = Matrix::Zero(expect, expect);
      for (Index i = 0; i < expect; i += b.fiber_space(r).dim)
        gram.block(i, i, b.fiber_space(r).dim, b.fiber_space(r).dim) = b.fiber_space(r).gram;
      const Matrix back = m.transpose() * gram * m;
      const double res = (back - Matrix::Identity(e.dim(), e.dim())).norm();
      rep.worst_metric_residual = std::max(rep.worst_metric_residual, res);
      if (res > tol.compare_tol * 10) {
        rep.pass = false;
        rep.mismatches.push_back("E1[" + std::to_string(p) + "," + std::to_string(q) + "] metric");
      }
    }
  }

  for (int p = page.p_min; p < page.p_max; ++p)
    for (int q = page.q_min; q <= page.q_max; ++q) {
      const int r = q - p;
      if (page.dim(p, q) == 0 || page.dim(p + 1, q + 1) == 0) continue;
      const Matrix& m_src = coords[p - page.p_min][q - page.q_min];
      const Matrix& m_tgt = coords[p + 1 - page.p_min][q + 1 - page.q_min];
      if (m_src.size() == 0 || m_tgt.size() == 0) continue;
      // Base differential block between the index-p and index-(p+1) slots.
      const auto& bc = base[r - b.r_min];
      const Matrix base_d = bc.d(p);
      const Matrix expected = sign_of_degree(r) * base_d;
      const Matrix got = m_tgt * page.delta_at(p, q) * m_src.inverse();
      const double res = (got - expected).norm() / std::max(1.0, expected.norm());
      rep.worst_delta_residual = std::max(rep.worst_delta_residual, res);
      if (res > tol.compare_tol * 10) {
        rep.pass = false;
        rep.mismatches.push_back("delta1[" + std::to_string(p) + "," + std::to_string(q) + "]");
      }
    }
  return rep;
}

// ---- edge sequences ---------------------------------------------------------

namespace {

struct FiltrationFrames {
  const FilteredMetricComplex& f;
  Tolerance tol;
  std::vector<std::vector<Matrix>> onb;

  FiltrationFrames(const FilteredMetricComplex& ff, const Tolerance& t) : f(ff), tol(t) {
    onb.resize(f.length() + 1);
    for (int l = 0; l <= f.length(); ++l) {
      onb[l].resize(f.complex.spaces.size());
      for (int q = f.complex.q_min; q <= f.complex.q_max(); ++q)
        onb[l][q - f.complex.q_min] =
            gram_orthonormal_basis(f.complex.space(q), f.basis(f.p_min + l, q), tol);
    }
  }

  Matrix o(int p, int q) const {
    const Index n = f.complex.dim(q);
    if (q < f.complex.q_min || q > f.complex.q_max()) return Matrix(n, 0);
    if (p <= f.p_min) p = f.p_min;
    if (p > f.p_max()) return Matrix(n, 0);
    return onb[p - f.p_min][q - f.complex.q_min];
  }

  Matrix perp(int p, int q, const Matrix& x) const {
    const Matrix ob = o(p, q);
    if (ob.cols() == 0) return x;
    return x - ob * (ob.transpose() * (f.complex.space(q).gram * x));
  }
};

/// Replace representatives by cocycle representatives of the same class on
/// the stabilized page: z -> z + w with w in F_{p+1}, dw in F_{p+k}, and
/// d(z + w) = 0.
Matrix cocycle_representatives(const FiltrationFrames& fr, int p, int q, int k,
                               const Matrix& emb, const Tolerance& tol) {
  const auto& c = fr.f.complex;
  if (emb.cols() == 0 || c.dim(q + 1) == 0) return emb;
  Matrix dz = c.d(q) * emb;
  if (dz.norm() <= tol.compare_tol * std::max(1.0, emb.norm() * c.d(q).norm())) return emb;
  const Matrix b1 = fr.o(p + 1, q);
  if (b1.cols() == 0)
    throw ValidationError("edge_cocycle: representative cannot be closed");
  const Matrix db1 = c.d(q) * b1;
  const Matrix n_coeff = null_space(fr.perp(p + k, q + 1, db1), tol, db1.norm());
  const Matrix wb = b1 * n_coeff;
  const Matrix a_mat = c.d(q) * wb;
  const Matrix t = least_squares(a_mat, -dz, tol);
  const Matrix out = emb + wb * t;
  if ((c.d(q) * out).norm() > tol.compare_tol * std::max(1.0, emb.norm() * c.d(q).norm()))
    throw ValidationError("edge_cocycle: representative cannot be closed");
  return out;
}

void require_page_sparsity(const spectral::SpectralResult& res, int only_k, const Tolerance& tol) {
  for (const auto& page : res.pages) {
    if (page.k == only_k) continue;
    for (int p = page.p_min; p <= page.p_max; ++p)
      for (int q = page.q_min; q <= page.q_max; ++q) {
        const Matrix d = page.delta_at(p, q);
        if (d.size() > 0 && d.norm() > tol.compare_tol)
          throw ValidationError("page_sparsity: nontrivial differential off the expected page");
      }
  }
}

double edge_t_met(const GradedMetricComplex& ambient, const GradedMetricComplex& total,
                  const ChainMap& qi, const Tolerance& tol) {
  return geomcx::metric_torsion_map(ambient, total, qi, tol);
}

}  // namespace

WangResult wang_sequence(const WangData& w, const Tolerance& tol) {
  spectral::require_valid(w.total, tol);
  complexes::require_valid(w.ambient, tol);
  for (const auto& d : w.ambient.diffs)
    if (d.size() > 0 && d.norm() > 0.0)
      throw ValidationError("edge_ambient: ambient cohomology must carry zero differential");
  geomcx::require_quasi_iso(w.ambient, w.total.complex, w.quasi_iso, tol);
  if (w.n < 1 || w.n > w.total.length())
    throw DomainError("wang_page: page index outside the filtration length");

  auto res = spectral::log_t_comb(w.total, tol);
  require_page_sparsity(res, w.n, tol);
  const auto& page = res.pages[w.n - 1];
  for (int p = page.p_min; p <= page.p_max; ++p)
    if (p != page.p_min && p != page.p_min + w.n)
      for (int q = page.q_min; q <= page.q_max; ++q)
        if (page.dim(p, q) != 0)
          throw ValidationError("wang_shape: entries off filtration levels {0, n}");

  const auto ht = hodge_cohomology(w.total.complex, tol);
  const auto ha = hodge_cohomology(w.ambient, tol);
  const int p0 = page.p_min;
  const auto& c = w.total.complex;

  const int r_lo = std::min(w.ambient.q_min, page.q_min - 1);
  const int r_hi = std::max(w.ambient.q_max(), page.q_max);

  // H(i)^r per degree, for pulling classes back to the ambient metric.
  std::map<int, Matrix> h_map;
  for (int r = r_lo; r <= r_hi + 1; ++r) {
    if (ha.betti(r) == 0) continue;
    const Matrix img = w.quasi_iso.block(r, c.dim(r), w.ambient.dim(r)) * ha.at(r).harmonic_basis;
    h_map[r] = hodge_coordinates(c, ht, r, img, tol);
  }

  GradedMetricComplex seq;
  seq.q_min = 3 * r_lo;
  WangResult out;
  std::vector<Index> dims;
  for (int r = r_lo; r <= r_hi; ++r) {
    seq.spaces.push_back(w.ambient.space_or_zero(r));
    seq.spaces.push_back(MetricSpace::euclidean(page.dim(p0, r)));
    seq.spaces.push_back(MetricSpace::euclidean(page.dim(p0 + w.n, r + 1)));
  }
  for (int r = r_lo; r <= r_hi; ++r) {
    // p^r: ambient class -> page entry (0, r), read through the classifier.
    const auto& e0 = page.entry(p0, r);
    Matrix pr(e0.dim(), w.ambient.dim(r));
    if (pr.size() > 0) {
      pr.setZero();
      if (e0.dim() > 0 && w.ambient.dim(r) > 0)
        pr = e0.cls.transpose() *
             (c.space(r).gram * w.quasi_iso.block(r, c.dim(r), w.ambient.dim(r)));
    }
    seq.diffs.push_back(std::move(pr));
    // d_n
    seq.diffs.push_back(page.delta_at(p0, r));
    // i^{r+1}: page entry (n, r+1) -> ambient class.
    const auto& en = page.entry(p0 + w.n, r + 1);
    Matrix ir(w.ambient.dim(r + 1), en.dim());
    if (ir.size() > 0) {
      ir.setZero();
      if (en.dim() > 0 && w.ambient.dim(r + 1) > 0) {
        const Matrix classes = hodge_coordinates(c, ht, r + 1, en.emb, tol);
        ir = h_map.at(r + 1).partialPivLu().solve(classes);
      }
    }
    if (r < r_hi)
      seq.diffs.push_back(std::move(ir));
    else if (ir.size() > 0 && ir.norm() > tol.compare_tol)
      throw ValidationError("wang_shape: sequence does not terminate");
  }
  complexes::require_valid(seq, tol);
  const auto hs = hodge_cohomology(seq, tol);
  for (int q = seq.q_min; q <= seq.q_max(); ++q)
    if (hs.betti(q) != 0) throw ValidationError("wang_not_acyclic: sequence has cohomology");

  out.sequence = std::move(seq);
  out.log_torsion = complexes::torsion_tc(out.sequence, tol);
  out.spectral = std::move(res);
  return out;
}

namespace {

EdgeReport edge_report(const WangResult& res, const GradedMetricComplex& ambient,
                       const GradedMetricComplex& total, const ChainMap& qi, int rho_page,
                       int p_slot, int i_slot, const Tolerance& tol) {
  EdgeReport rep;
  rep.log_t = res.log_torsion;
  rep.log_t_met = edge_t_met(ambient, total, qi, tol);
  rep.rho = res.spectral.rho.at(rho_page - 1);
  rep.residual = rep.log_t - rep.log_t_met + rep.rho;
  // Volumes of the inclusion/projection legs of the assembled sequence;
  // these vanish when the ambient metric matches the stabilized page.
  const auto& seq = res.sequence;
  for (int q = seq.q_min; q <= seq.q_max(); ++q) {
    const int slot = ((((q - seq.q_min) % 3) + 3) % 3);
    const Matrix d = seq.d(q);
    if (d.size() == 0) continue;
    const LinearMapRep f{seq.space(q), seq.space(q + 1), d};
    const double lv = numeric::log_vol_restricted(f, tol);
    if (slot == p_slot) rep.worst_pv = std::max(rep.worst_pv, std::abs(lv));
    if (slot == i_slot) rep.worst_iv = std::max(rep.worst_iv, std::abs(lv));
  }
  rep.pass = std::abs(rep.residual) < 1e-6;
  return rep;
}

}  // namespace

EdgeReport wes_check(const WangData& w, const Tolerance& tol) {
  const auto res = wang_sequence(w, tol);
  return edge_report(res, w.ambient, w.total.complex, w.quasi_iso, w.n, /*p_slot=*/0,
                     /*i_slot=*/2, tol);
}

WangResult gysin_sequence(const GysinData& g, const Tolerance& tol) {
  spectral::require_valid(g.total, tol);
  complexes::require_valid(g.ambient, tol);
  for (const auto& d : g.ambient.diffs)
    if (d.size() > 0 && d.norm() > 0.0)
      throw ValidationError("edge_ambient: ambient cohomology must carry zero differential");
  geomcx::require_quasi_iso(g.ambient, g.total.complex, g.quasi_iso, tol);
  const int k_page = g.n + 1;
  if (k_page > g.total.length())
    throw DomainError("gysin_page: page index outside the filtration length");

  auto res = spectral::log_t_comb(g.total, tol);
  require_page_sparsity(res, k_page, tol);
  const auto& page = res.pages[k_page - 1];
  for (int p = page.p_min; p <= page.p_max; ++p)
    for (int q = page.q_min; q <= page.q_max; ++q)
      if (page.dim(p, q) != 0 && (q - p) != 0 && (q - p) != g.n)
        throw ValidationError("gysin_shape: entries off fiber degrees {0, n}");

  const FiltrationFrames frames(g.total, tol);
  const auto ht = hodge_cohomology(g.total.complex, tol);
  const auto ha = hodge_cohomology(g.ambient, tol);
  const auto& c = g.total.complex;

  const int p_lo = std::min(g.ambient.q_min, page.q_min);
  const int p_hi = std::max(g.ambient.q_max(), page.q_max) + 1;

  std::map<int, Matrix> h_map;
  for (int q = p_lo; q <= p_hi; ++q) {
    if (ha.betti(q) == 0) continue;
    const Matrix img = g.quasi_iso.block(q, c.dim(q), g.ambient.dim(q)) * ha.at(q).harmonic_basis;
    h_map[q] = hodge_coordinates(c, ht, q, img, tol);
  }

  // Terms per p: entry (p, p) at degree 3p-1, ambient H^p at 3p, entry
  // (p-n, p) at degree 3p+1.
  GradedMetricComplex seq;
  seq.q_min = 3 * p_lo - 1;
  for (int p = p_lo; p <= p_hi; ++p) {
    seq.spaces.push_back(MetricSpace::euclidean(page.dim(p, p)));
    seq.spaces.push_back(g.ambient.space_or_zero(p));
    seq.spaces.push_back(MetricSpace::euclidean(page.dim(p - g.n, p)));
  }
  for (int p = p_lo; p <= p_hi; ++p) {
    // i^p: entry (p, p) -> ambient H^p, through cocycle representatives.
    const auto& ep = page.entry(p, p);
    Matrix ip(g.ambient.dim(p), ep.dim());
    if (ip.size() > 0) {
      ip.setZero();
      if (ep.dim() > 0 && g.ambient.dim(p) > 0) {
        const Matrix z = cocycle_representatives(frames, p, p, k_page, ep.emb, tol);
        const Matrix classes = hodge_coordinates(c, ht, p, z, tol);
        ip = h_map.at(p).partialPivLu().solve(classes);
      }
    }
    seq.diffs.push_back(std::move(ip));
    // p^p: ambient -> entry (p - n, p).
    const auto& eq = page.entry(p - g.n, p);
    Matrix pp(eq.dim(), g.ambient.dim(p));
    if (pp.size() > 0) {
      pp.setZero();
      if (eq.dim() > 0 && g.ambient.dim(p) > 0)
        pp = eq.cls.transpose() *
             (c.space(p).gram * g.quasi_iso.block(p, c.dim(p), g.ambient.dim(p)));
    }
    seq.diffs.push_back(std::move(pp));
    // d_{n+1}: entry (p - n, p) -> entry (p + 1, p + 1).
    if (p < p_hi) seq.diffs.push_back(page.delta_at(p - g.n, p));
  }
  complexes::require_valid(seq, tol);
  const auto hs = hodge_cohomology(seq, tol);
  for (int q = seq.q_min; q <= seq.q_max(); ++q)
    if (hs.betti(q) != 0) throw ValidationError("gysin_not_acyclic: sequence has cohomology");

  WangResult out;
  out.sequence = std::move(seq);
  out.log_torsion = complexes::torsion_tc(out.sequence, tol);
  out.spectral = std::move(res);
  return out;
}

EdgeReport ges_check(const GysinData& g, const Tolerance& tol) {
  const auto res = gysin_sequence(g, tol);
  // Slot roles differ from the sphere-base layout: i sits first, p second.
  return edge_report(res, g.ambient, g.total.complex, g.quasi_iso, g.n + 1, /*p_slot=*/1,
                     /*i_slot=*/0, tol);
}

LstReport lst_ledger(const BundleModel& b, const IntegrationMap& total_integration,
                     const std::vector<IntegrationMap>& base_integrations,
                     const LstInputs& inputs, const Tolerance& tol) {
  const int n_r = static_cast<int>(b.fiber.size());
  if (static_cast<int>(inputs.t_an_base.size()) != n_r ||
      static_cast<int>(inputs.r_term_base.size()) != n_r)
    throw ValidationError("incomplete_ledger: one analytic base input required per fiber degree");
  if (inputs.t_an_fiber.size() != b.points.size())
    throw ValidationError("incomplete_ledger: one analytic fiber input required per point");
  if (static_cast<int>(base_integrations.size()) != n_r)
    throw ValidationError("incomplete_ledger: one base integration map per fiber degree");

  LstReport rep;
  const auto g = geomcx::assemble(to_morse_bott(b), tol);
  const auto res = spectral::log_t_comb(g.total, tol);

  for (std::size_t k = 1; k < res.rho.size(); ++k) rep.sum_rho_high += res.rho[k];

  // Volume of the combinatorial determinant map: down the pages from HC to
  // the second page, then across the suspension splitting into the base
  // cohomology lines.
  double w2 = 0.0;
  if (res.pages.size() >= 2) {
    const auto& e2 = res.pages[1];
    for (int p = e2.p_min; p <= e2.p_max; ++p)
      for (int q = e2.q_min; q <= e2.q_max; ++q) {
        const auto& e = e2.entry(p, q);
        if (e.dim() == 0) continue;
        const int r = q - p;
        const auto bc = base_complex(b, r, tol);
        const auto hb = hodge_cohomology(bc, tol);
        const auto& dc = hb.at(p);
        if (dc.betti != e.dim())
          throw ValidationError("lst_split: page entry does not match base cohomology");
        // Embed the base harmonic columns into the total complex and read
        // their page classes.
        const Index n = g.total.complex.dim(q);
        Matrix cols = Matrix::Zero(n, dc.betti);
        Index at_col = 0;
        // base degree-p block ordering matches the point list order.
        Index base_off = 0;
        for (std::size_t i = 0; i < b.points.size(); ++i) {
          if (b.points[i].index != p) continue;
          const auto [off, len] = g.layout.slots[q - g.layout.q_min][i];
          const Index h_dim = b.fiber_space(r).dim;
          cols.block(off, 0, h_dim, dc.betti) +=
              dc.harmonic_basis.block(base_off, 0, h_dim, dc.betti);
          base_off += h_dim;
          (void)len;
          (void)at_col;
        }
        const Matrix m = e.cls.transpose() * (g.total.complex.space(q).gram * cols);
        const LinearMapRep f{dc.hodge, MetricSpace::euclidean(e.dim()), m};
        Eigen::BDCSVD<Matrix> svd(numeric::ortho_coordinates(f.source, f.target, f.matrix));
        const Vector sv = svd.singularValues();
        if (sv.size() > 0 && sv(sv.size() - 1) <= tol.rank_rel_tol * sv(0))
          throw SingularMapError("lst_split: identification singular");
        double lv = 0.0;
        for (Index i = 0; i < sv.size(); ++i) lv += std::log(sv(i));
        w2 += sign_of_degree(q) * lv;
      }
  }
  rep.vol_comb = -res.ghc_comparison.log_vol - rep.sum_rho_high - w2;

  const double t_met_total = geomcx::metric_torsion(g, total_integration, tol);
  double t_met_base_alt = 0.0;
  for (int r = b.r_min; r <= b.r_max(); ++r) {
    const auto bc = base_complex(b, r, tol);
    const auto& im = base_integrations[r - b.r_min];
    t_met_base_alt += sign_of_degree(r) * geomcx::metric_torsion_map(im.ambient, bc, im.map, tol);
  }
  const double vol_an_defined = rep.vol_comb + t_met_total - t_met_base_alt;
  const double vol_an = inputs.vol_an.value_or(vol_an_defined);
  rep.e100_residual = std::abs(vol_an - vol_an_defined);

  double rhs = inputs.r_term_total + vol_an - rep.vol_comb + rep.sum_rho_high;
  for (int r = b.r_min; r <= b.r_max(); ++r)
    rhs += sign_of_degree(r) * (inputs.t_an_base[r - b.r_min] - inputs.r_term_base[r - b.r_min]);
  for (std::size_t i = 0; i < b.points.size(); ++i)
    rhs += sign_of_degree(b.points[i].index) * inputs.t_an_fiber[i];

  rep.lhs = inputs.lhs;
  rep.rhs = rhs;
  rep.residual = rep.lhs - rep.rhs;
  rep.pass = std::abs(rep.residual) < 1e-6 && rep.e100_residual < 1e-6;
  return rep;
}

}  // namespace torsionlab::bundles
