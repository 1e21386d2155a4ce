#pragma once

#include "torsionlab/spectral.hpp"

#include <map>
#include <string>

namespace torsionlab::geomcx {

using complexes::GradedMetricComplex;
using detline::ChainMap;
using spectral::FilteredMetricComplex;

/// One critical component: a small metric complex standing in for the forms
/// on the component, placed at a Morse index.
struct Component {
  std::string label;
  int index = 0;  // Morse index, >= 0
  GradedMetricComplex complex;
};

/// Instanton operator between two components with strictly decreasing index
/// from `to` back to `from` (to.index > from.index). blocks[k] maps
/// component degree k of `from` to degree k - (to.index - from.index - 1)
/// of `to`.
struct InstantonMap {
  int to = 0;
  int from = 0;
  std::map<int, Matrix> blocks;
};

struct MorseBottModel {
  std::vector<Component> components;
  std::vector<InstantonMap> instantons;

  bool all_points() const;  // every component a single space in degree 0
};

/// Slot of a component inside the assembled total complex, per degree.
struct Layout {
  int q_min = 0, q_max = 0;
  // offsets[q - q_min][i] = (offset, extent) of component i in C^q
  std::vector<std::vector<std::pair<Index, Index>>> slots;
};

struct GeometricComplex {
  MorseBottModel model;
  FilteredMetricComplex total;
  Layout layout;
};

/// Build the total complex with differential d + uA, where A acts by
/// (-1)^{component degree} on each summand, and the decreasing filtration
/// by Morse index. Throws ValidationError("invalid_instanton_data: ...") if
/// the supplied instantons do not square to zero.
GeometricComplex assemble(const MorseBottModel& m, const Tolerance& tol = default_tolerance());

struct DimReport {
  bool pass = true;
  std::vector<std::string> mismatches;
};

/// E_1^{p,q} dimensions against component Betti numbers (exact match).
DimReport e1_identification(const GeometricComplex& g, const Tolerance& tol = default_tolerance());

/// A quasi-isomorphism from an ambient complex into the total complex.
struct IntegrationMap {
  GradedMetricComplex ambient;
  ChainMap map;
};

void require_quasi_iso(const GradedMetricComplex& ambient, const GradedMetricComplex& total,
                       const ChainMap& f, const Tolerance& tol = default_tolerance());

struct EulerReport {
  long chi_total = 0;
  long chi_components = 0;
  bool pass = false;
};

/// chi(total) = sum_p (-1)^p sum_{index i = p} chi(component i), integer
/// equality; with an integration map the ambient Euler characteristic is
/// included in the comparison.
EulerReport euler_identity_check(const GeometricComplex& g,
                                 const IntegrationMap* integration = nullptr,
                                 const Tolerance& tol = default_tolerance());

struct MorseReport {
  bool pass = true;
  long worst_margin = 0;  // min over q0 of (rhs - lhs); >= 0 when pass
};

/// Alternating-sum inequalities between total cohomology and component
/// cohomology for every truncation degree.
MorseReport morse_inequalities_check(const GeometricComplex& g,
                                     const Tolerance& tol = default_tolerance());

/// log Vol of the determinant-line map induced by the quasi-isomorphism on
/// cohomology, in Hodge metrics on both sides.
double metric_torsion(const GeometricComplex& g, const IntegrationMap& integration,
                      const Tolerance& tol = default_tolerance());

/// Same computation for a quasi-isomorphism between two plain complexes.
double metric_torsion_map(const GradedMetricComplex& ambient, const GradedMetricComplex& target,
                          const ChainMap& f, const Tolerance& tol = default_tolerance());

struct LedgerReport {
  double t_met = 0.0;
  double t_c = 0.0;     // torsion of the total complex
  double t_gc = 0.0;    // torsion of the associated graded
  double sum_rho = 0.0;
  double ghc_correction = 0.0;
  double maumary_residual = 0.0;
  double component_split_residual = 0.0;  // t_gc vs alternating component torsions
  double e1_isometry_residual = 0.0;      // E_1 entries vs component cohomology metrics
  double residual = 0.0;
  bool pass = false;
};

/// Full bookkeeping for the transport of the Hodge norm on det H(ambient)
/// through the integration map, the spectral pages, and the splitting of
/// det E_1 into component cohomology lines.
LedgerReport geometric_torsion_ledger(const GeometricComplex& g, const IntegrationMap& integration,
                                      const Tolerance& tol = default_tolerance());

}  // namespace torsionlab::geomcx
