#include "torsionlab/geomcx.hpp"

#include <cmath>

namespace torsionlab::geomcx {

using complexes::CohomologyResult;
using complexes::hodge_cohomology;
using complexes::hodge_coordinates;

bool MorseBottModel::all_points() const {
  for (const auto& comp : components) {
    if (comp.complex.spaces.size() != 1 || comp.complex.q_min != 0) return false;
    if (comp.complex.spaces[0].dim != 1) return false;
  }
  return true;
}

GeometricComplex assemble(const MorseBottModel& m, const Tolerance& tol) {
  if (m.components.empty())
    throw ValidationError("morse_bott_empty: model needs at least one component");
  for (const auto& comp : m.components) {
    if (comp.index < 0) throw ValidationError("morse_bott_index: negative Morse index");
    complexes::require_valid(comp.complex, tol);
  }

  int q_lo = 0, q_hi = 0;
  bool first = true;
  for (const auto& comp : m.components) {
    const int lo = comp.complex.q_min + comp.index;
    const int hi = comp.complex.q_max() + comp.index;
    if (first || lo < q_lo) q_lo = lo;
    if (first || hi > q_hi) q_hi = hi;
    first = false;
  }

  GeometricComplex g;
  g.model = m;
  g.layout.q_min = q_lo;
  g.layout.q_max = q_hi;
  g.layout.slots.resize(q_hi - q_lo + 1);

  GradedMetricComplex total;
  total.q_min = q_lo;
  for (int q = q_lo; q <= q_hi; ++q) {
    Index n = 0;
    auto& slot_row = g.layout.slots[q - q_lo];
    slot_row.resize(m.components.size());
    for (std::size_t i = 0; i < m.components.size(); ++i) {
      const auto& comp = m.components[i];
      const Index len = comp.complex.dim(q - comp.index);
      slot_row[i] = {n, len};
      n += len;
    }
    Matrix gram = Matrix::Zero(n, n);
    for (std::size_t i = 0; i < m.components.size(); ++i) {
      const auto& comp = m.components[i];
      const auto [off, len] = slot_row[i];
      if (len > 0)
        gram.block(off, off, len, len) = comp.complex.space(q - comp.index).gram;
    }
    total.spaces.emplace_back(n, std::move(gram));
  }

  for (int q = q_lo; q < q_hi; ++q) {
    Matrix d = Matrix::Zero(total.spaces[q + 1 - q_lo].dim, total.spaces[q - q_lo].dim);
    const auto& src_slots = g.layout.slots[q - q_lo];
    const auto& tgt_slots = g.layout.slots[q + 1 - q_lo];
    // Internal differentials.
    for (std::size_t i = 0; i < m.components.size(); ++i) {
      const auto& comp = m.components[i];
      const Matrix di = comp.complex.d(q - comp.index);
      if (di.size() > 0)
        d.block(tgt_slots[i].first, src_slots[i].first, di.rows(), di.cols()) = di;
    }
    // Instanton blocks with the sign operator (-1)^{component degree}.
    for (const auto& u : m.instantons) {
      if (u.to < 0 || u.from < 0 || u.to >= static_cast<int>(m.components.size()) ||
          u.from >= static_cast<int>(m.components.size()))
        throw ValidationError("invalid_instanton_data: component id out of range");
      const auto& cto = m.components[u.to];
      const auto& cfrom = m.components[u.from];
      if (cto.index <= cfrom.index)
        throw ValidationError("invalid_instanton_data: instanton must raise the Morse index");
      const int shift = cto.index - cfrom.index - 1;
      const int k = q - cfrom.index;  // source component degree at this total degree
      auto it = u.blocks.find(k);
      if (it == u.blocks.end()) continue;
      const Matrix& blk = it->second;
      const Index rows = cto.complex.dim(k - shift);
      const Index cols = cfrom.complex.dim(k);
      if (blk.rows() != rows || blk.cols() != cols)
        throw ValidationError("invalid_instanton_data: block shape does not match degree shift");
      if (rows == 0 || cols == 0) continue;
      d.block(tgt_slots[u.to].first, src_slots[u.from].first, rows, cols) +=
          sign_of_degree(k) * blk;
    }
    total.diffs.push_back(std::move(d));
  }

  const auto crep = complexes::validate_complex(total, tol);
  if (!crep.pass)
    throw ValidationError("invalid_instanton_data: total differential does not square to zero");

  // Decreasing filtration by Morse index, spanned by coordinate slots.
  int ind_lo = m.components[0].index, ind_hi = m.components[0].index;
  for (const auto& comp : m.components) {
    ind_lo = std::min(ind_lo, comp.index);
    ind_hi = std::max(ind_hi, comp.index);
  }
  FilteredMetricComplex filt;
  filt.complex = std::move(total);
  filt.p_min = ind_lo;
  filt.level_bases.resize(ind_hi - ind_lo + 1);
  for (int p = ind_lo; p <= ind_hi; ++p) {
    auto& per_degree = filt.level_bases[p - ind_lo];
    per_degree.resize(filt.complex.spaces.size());
    for (int q = q_lo; q <= q_hi; ++q) {
      const Index n = filt.complex.dim(q);
      Index cols = 0;
      for (std::size_t i = 0; i < m.components.size(); ++i)
        if (m.components[i].index >= p) cols += g.layout.slots[q - q_lo][i].second;
      Matrix b = Matrix::Zero(n, cols);
      Index at = 0;
      for (std::size_t i = 0; i < m.components.size(); ++i) {
        if (m.components[i].index < p) continue;
        const auto [off, len] = g.layout.slots[q - q_lo][i];
        for (Index j = 0; j < len; ++j) b(off + j, at + j) = 1.0;
        at += len;
      }
      per_degree[q - q_lo] = std::move(b);
    }
  }
  g.total = std::move(filt);
  spectral::require_valid(g.total, tol);
  return g;
}

DimReport e1_identification(const GeometricComplex& g, const Tolerance& tol) {
  DimReport rep;
  const auto page = spectral::page_e1(g.total, tol);
  std::vector<CohomologyResult> comp_h;
  comp_h.reserve(g.model.components.size());
  for (const auto& comp : g.model.components)
    comp_h.push_back(hodge_cohomology(comp.complex, tol));
  for (int p = page.p_min; p <= page.p_max; ++p)
    for (int q = page.q_min; q <= page.q_max; ++q) {
      Index expect = 0;
      for (std::size_t i = 0; i < g.model.components.size(); ++i)
        if (g.model.components[i].index == p) expect += comp_h[i].betti(q - p);
      if (page.dim(p, q) != expect) {
        rep.pass = false;
        rep.mismatches.push_back("E1[" + std::to_string(p) + "," + std::to_string(q) +
                                 "]: " + std::to_string(page.dim(p, q)) + " vs " +
                                 std::to_string(expect));
      }
    }
  return rep;
}

void require_quasi_iso(const GradedMetricComplex& ambient, const GradedMetricComplex& total,
                       const ChainMap& f, const Tolerance& tol) {
  complexes::require_valid(ambient, tol);
  detline::require_chain_map(ambient, total, f, tol);
  const auto ha = hodge_cohomology(ambient, tol);
  const auto ht = hodge_cohomology(total, tol);
  const int q0 = std::min(ambient.q_min, total.q_min);
  const int q1 = std::max(ambient.q_max(), total.q_max());
  for (int q = q0; q <= q1; ++q) {
    if (ha.betti(q) != ht.betti(q))
      throw ValidationError("quasi_iso: Betti numbers differ");
    if (ha.betti(q) == 0) continue;
    const Matrix img = f.block(q, total.dim(q), ambient.dim(q)) * ha.at(q).harmonic_basis;
    const Matrix h_map = hodge_coordinates(total, ht, q, img, tol);
    Eigen::BDCSVD<Matrix> svd(h_map);
    const Vector sv = svd.singularValues();
    if (sv.size() == 0 || sv(sv.size() - 1) <= tol.rank_rel_tol * std::max(sv(0), 1.0))
      throw ValidationError("quasi_iso: induced map on cohomology singular");
  }
}

EulerReport euler_identity_check(const GeometricComplex& g, const IntegrationMap* integration,
                                 const Tolerance& tol) {
  EulerReport rep;
  rep.chi_total = complexes::euler_characteristic(g.total.complex, tol);
  long rhs = 0;
  for (const auto& comp : g.model.components)
    rhs += static_cast<long>(sign_of_degree(comp.index)) *
           complexes::euler_characteristic(comp.complex, tol);
  rep.chi_components = rhs;
  rep.pass = rep.chi_total == rep.chi_components;
  if (integration) {
    const long chi_amb = complexes::euler_characteristic(integration->ambient, tol);
    rep.pass = rep.pass && chi_amb == rep.chi_total;
  }
  return rep;
}

MorseReport morse_inequalities_check(const GeometricComplex& g, const Tolerance& tol) {
  MorseReport rep;
  const auto ht = hodge_cohomology(g.total.complex, tol);
  std::vector<CohomologyResult> comp_h;
  for (const auto& comp : g.model.components)
    comp_h.push_back(hodge_cohomology(comp.complex, tol));
  const int q0 = g.layout.q_min, q1 = g.layout.q_max;
  bool first = true;
  for (int qc = q0; qc <= q1; ++qc) {
    long margin = 0;
    for (int q = q1; q >= qc; --q) {
      long rhs = 0;
      for (std::size_t i = 0; i < g.model.components.size(); ++i)
        rhs += comp_h[i].betti(q - g.model.components[i].index);
      const long s = static_cast<long>(sign_of_degree(q - qc));
      margin += s * (rhs - ht.betti(q));
    }
    if (first || margin < rep.worst_margin) rep.worst_margin = margin;
    first = false;
    if (margin < 0) rep.pass = false;
  }
  return rep;
}

namespace {

std::vector<LinearMapRep> cohomology_map(const GradedMetricComplex& ambient,
                                         const GradedMetricComplex& total, const ChainMap& f,
                                         int q0, int q1, const Tolerance& tol) {
  const auto ha = hodge_cohomology(ambient, tol);
  const auto ht = hodge_cohomology(total, tol);
  std::vector<LinearMapRep> phi;
  for (int q = q0; q <= q1; ++q) {
    const MetricSpace hs_a = ha.at(q).hodge;
    const MetricSpace hs_t = ht.at(q).hodge;
    Matrix m(hs_t.dim, hs_a.dim);
    if (hs_a.dim > 0 && hs_t.dim > 0) {
      const Matrix img = f.block(q, total.dim(q), ambient.dim(q)) * ha.at(q).harmonic_basis;
      m = hodge_coordinates(total, ht, q, img, tol);
    } else {
      m.setZero();
    }
    phi.push_back({hs_a, hs_t, std::move(m)});
  }
  return phi;
}

}  // namespace

double metric_torsion_map(const GradedMetricComplex& ambient, const GradedMetricComplex& target,
                          const ChainMap& f, const Tolerance& tol) {
  require_quasi_iso(ambient, target, f, tol);
  const int q0 = std::min(ambient.q_min, target.q_min);
  const int q1 = std::max(ambient.q_max(), target.q_max());
  const auto phi = cohomology_map(ambient, target, f, q0, q1, tol);
  return detline::vol_det_graded_map(phi, q0, tol).log_vol;
}

double metric_torsion(const GeometricComplex& g, const IntegrationMap& integration,
                      const Tolerance& tol) {
  return metric_torsion_map(integration.ambient, g.total.complex, integration.map, tol);
}

LedgerReport geometric_torsion_ledger(const GeometricComplex& g, const IntegrationMap& integration,
                                      const Tolerance& tol) {
  LedgerReport rep;
  rep.t_met = metric_torsion(g, integration, tol);

  const auto mau = spectral::maumary_check(g.total, tol);
  rep.t_c = mau.t_c;
  rep.t_gc = mau.t_gc;
  rep.sum_rho = mau.sum_rho;
  rep.ghc_correction = mau.ghc_correction;
  rep.maumary_residual = std::abs(mau.residual);

  // The associated graded splits as the orthogonal sum of the component
  // complexes placed at their Morse indices; degree shift by p flips the
  // torsion sign p times.
  double split = 0.0;
  for (const auto& comp : g.model.components)
    split += sign_of_degree(comp.index) * complexes::torsion_tc(comp.complex, tol);
  rep.component_split_residual = std::abs(rep.t_gc - split);

  // The identification of each E_1 entry with the component cohomology in
  // its slot is an isometry; measure its volume directly.
  const auto page = spectral::page_e1(g.total, tol);
  std::vector<CohomologyResult> comp_h;
  for (const auto& comp : g.model.components)
    comp_h.push_back(hodge_cohomology(comp.complex, tol));
  double iso_residual = 0.0;
  for (int p = page.p_min; p <= page.p_max; ++p)
    for (int q = page.q_min; q <= page.q_max; ++q) {
      const auto& e = page.entry(p, q);
      if (e.dim() == 0) continue;
      // Component harmonic columns embedded in the total degree-q slot.
      const Index n = g.total.complex.dim(q);
      Matrix cols(n, 0);
      Matrix gram(0, 0);
      for (std::size_t i = 0; i < g.model.components.size(); ++i) {
        if (g.model.components[i].index != p) continue;
        const auto& dc = comp_h[i].at(q - p);
        if (dc.betti == 0) continue;
        const auto [off, len] = g.layout.slots[q - g.layout.q_min][i];
        Matrix embedded = Matrix::Zero(n, dc.betti);
        embedded.block(off, 0, len, dc.betti) = dc.harmonic_basis;
        Matrix new_cols(n, cols.cols() + dc.betti);
        new_cols << cols, embedded;
        cols = std::move(new_cols);
        Matrix new_gram = Matrix::Zero(gram.rows() + dc.betti, gram.cols() + dc.betti);
        new_gram.topLeftCorner(gram.rows(), gram.cols()) = gram;
        new_gram.bottomRightCorner(dc.betti, dc.betti) = dc.hodge.gram;
        gram = std::move(new_gram);
      }
      if (cols.cols() != e.dim())
        throw ValidationError("e1_split: entry dimension does not match component cohomology");
      const Matrix coords =
          numeric::coordinates_in(g.total.complex.space(q), cols, e.emb, tol);
      const MetricSpace src = MetricSpace::euclidean(e.dim());
      const MetricSpace tgt(cols.cols(), gram);
      const double lv = numeric::log_vol_restricted({src, tgt, coords}, tol);
      iso_residual = std::max(iso_residual, std::abs(lv));
    }
  rep.e1_isometry_residual = iso_residual;

  rep.residual = std::max({rep.maumary_residual, rep.component_split_residual,
                           rep.e1_isometry_residual});
  rep.pass = rep.residual < 1e-6;
  return rep;
}

}  // namespace torsionlab::geomcx
