#pragma once

#include "torsionlab/detline.hpp"

#include <cstdint>
#include <optional>

namespace torsionlab::spectral {

using complexes::GradedMetricComplex;
using detline::DetIsoVolume;

/// A graded metric complex with a nested, d-stable filtration. Level bases
/// are stored per filtration step p = p_min .. p_max and per degree; F_p is
/// the whole complex for p <= p_min and zero for p > p_max.
struct FilteredMetricComplex {
  GradedMetricComplex complex;
  int p_min = 0;
  /// level_bases[l][qi] spans F_{p_min + l} C^{q_min + qi} (dim x k matrix).
  std::vector<std::vector<Matrix>> level_bases;

  int p_max() const { return p_min + static_cast<int>(level_bases.size()) - 1; }
  /// Filtration length: pages stabilize at k = p_max - p_min + 1.
  int length() const { return p_max() - p_min + 1; }
  Matrix basis(int p, int q) const;
};

struct FiltrationIssue {
  std::string check;
  int p = 0, q = 0;
  double residual = 0.0;
};

struct FiltrationReport {
  bool pass = true;
  double worst_residual = 0.0;
  std::string worst_check;
  std::vector<FiltrationIssue> issues;
};

FiltrationReport validate_filtration(const FilteredMetricComplex& f,
                                     const Tolerance& tol = default_tolerance());
void require_valid(const FilteredMetricComplex& f, const Tolerance& tol = default_tolerance());

/// One entry of a spectral page. The page metric is the identity on the
/// stored coordinates by construction; emb holds ambient representative
/// cochains (one column per basis vector), cls the classification frame
/// used to read off page coordinates of an admissible representative.
struct PageEntry {
  Matrix emb;  // dim C^q x m
  Matrix cls;  // dim C^q x m
  Index dim() const { return emb.cols(); }
};

struct SpectralPage {
  int k = 1;
  int p_min = 0, p_max = 0, q_min = 0, q_max = 0;
  std::vector<PageEntry> entries;  // (p, q) grid, row-major in p then q
  std::vector<Matrix> delta;       // delta[(p,q)]: entry(p,q) -> entry(p+k, q+1)

  Index idx(int p, int q) const;
  bool in_grid(int p, int q) const {
    return p >= p_min && p <= p_max && q >= q_min && q <= q_max;
  }
  const PageEntry& entry(int p, int q) const;
  Matrix delta_at(int p, int q) const;  // zero-shaped outside the grid
  Index dim(int p, int q) const { return in_grid(p, q) ? entry(p, q).dim() : 0; }
  Index dim_total_degree(int q) const;
};

/// First page: E_1^{p,q} = H^q(F_p / F_{p+1}) with the Hodge metric of the
/// associated graded, representatives realized as minimum-norm harmonic
/// lifts into F_p C^q.
SpectralPage page_e1(const FilteredMetricComplex& f, const Tolerance& tol = default_tolerance());

/// Inductive step: harmonic subspaces of (E_k, delta_k) with the restricted
/// metric; delta_{k+1} computed from upgraded representatives z with
/// dz in F_{p+k+1}, projected into the new entries.
SpectralPage next_page(const SpectralPage& page, const FilteredMetricComplex& f,
                       const Tolerance& tol = default_tolerance());

/// Same computation with the admissible lifts perturbed inside their
/// degeneracy space (seeded); the resulting page must agree with next_page.
SpectralPage next_page_perturbed(const SpectralPage& page, const FilteredMetricComplex& f,
                                 std::uint64_t seed, const Tolerance& tol = default_tolerance());

/// Page torsion rho_k = 1/2 sum_q (-1)^{q+1} q log det' Laplacian_k^q,
/// aggregating entries of equal total degree.
double rho_k(const SpectralPage& page, const Tolerance& tol = default_tolerance());

/// Entries of the associated graded of HC: per (p, q) an orthonormal basis
/// inside harmonic coordinates of the total complex.
struct GhcEntry {
  Matrix basis;  // betti_q x dim, orthonormal columns
  Index dim() const { return basis.cols(); }
};

struct GhcResult {
  int p_min = 0, p_max = 0, q_min = 0, q_max = 0;
  std::vector<Matrix> harmonic;  // per degree: G-orthonormal harmonic basis of C^q
  std::vector<GhcEntry> entries;
  Index idx(int p, int q) const;
  const GhcEntry& entry(int p, int q) const;
};

GhcResult ghc_metric(const FilteredMetricComplex& f, const Tolerance& tol = default_tolerance());

struct SpectralResult {
  std::vector<SpectralPage> pages;  // k = 1 .. length (the stabilized page last)
  std::vector<double> rho;          // rho_k per page
  double log_t_comb = 0.0;
  /// Volume of the canonical identification of the stabilized page with the
  /// associated graded of HC, measured from the page metric to the GHC
  /// metric and summed with sign (-1)^{total degree}.
  DetIsoVolume ghc_comparison;
};

SpectralResult log_t_comb(const FilteredMetricComplex& f, const Tolerance& tol = default_tolerance());

struct MaumaryReport {
  double t_c = 0.0, t_gc = 0.0, sum_rho = 0.0, ghc_correction = 0.0;
  double residual = 0.0;
  bool pass = false;
  std::vector<double> rho;
};

/// Torsion of a filtered complex against its spectral sequence:
/// log T_C = log T_GC + sum_k rho_k + ghc_correction.
MaumaryReport maumary_check(const FilteredMetricComplex& f,
                            const Tolerance& tol = default_tolerance());

/// Associated graded complex at level p, realized on the orthogonal
/// complement of F_{p+1} inside F_p (identity Grams).
GradedMetricComplex associated_graded_at(const FilteredMetricComplex& f, int p,
                                         const Tolerance& tol = default_tolerance());

/// Sum over p of log T of the associated graded complexes.
double torsion_gc(const FilteredMetricComplex& f, const Tolerance& tol = default_tolerance());

struct PageInvariantReport {
  bool euler_ok = true;
  bool morse_ok = true;
  bool stabilization_ok = true;
  double last_rho = 0.0;
};

/// chi(E_k) = chi(C) for all pages, the alternating-sum chains between
/// consecutive pages, and rho = 0 on the stabilized page.
PageInvariantReport check_page_invariants(const FilteredMetricComplex& f,
                                          const SpectralResult& res,
                                          const Tolerance& tol = default_tolerance());

/// Conversion between (filtration p, total degree q) and the complementary
/// convention (p, r) with r = q - p.
inline std::pair<int, int> to_complementary(int p, int q) { return {p, q - p}; }
inline std::pair<int, int> to_total(int p, int r) { return {p, p + r}; }

}  // namespace torsionlab::spectral
