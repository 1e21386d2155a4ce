#pragma once

#include "torsionlab/geomcx.hpp"

#include <optional>

namespace torsionlab::bundles {

using complexes::GradedMetricComplex;
using detline::ChainMap;
using geomcx::GeometricComplex;
using geomcx::IntegrationMap;
using spectral::FilteredMetricComplex;

/// Fiber-bundle model over a Morse-Smale base: points with indices, one
/// metric space per fiber-cohomology degree, a transport map per
/// index-difference-one arrow and degree, and optional higher jumps
/// H^r(from) -> H^{r - diff + 1}(to) encoding twisting.
struct BundleModel {
  struct Point {
    std::string label;
    int index = 0;
  };
  struct Arrow {
    int to = 0, from = 0, r = 0;  // r = source fiber degree
    Matrix matrix;
  };
  std::vector<Point> points;
  int r_min = 0;
  std::vector<MetricSpace> fiber;  // H^r for r = r_min, r_min+1, ...
  std::vector<Arrow> transports;   // index difference exactly 1, degree r -> r
  std::vector<Arrow> jumps;        // index difference >= 2

  int r_max() const { return r_min + static_cast<int>(fiber.size()) - 1; }
  const MetricSpace& fiber_space(int r) const;
};

/// The bundle as a Morse-Bott model: one component per point carrying the
/// fiber cohomology with zero differential.
geomcx::MorseBottModel to_morse_bott(const BundleModel& b);

/// The base complex with coefficients in H^r, assembled from the transport
/// matrices (no sign operator applied).
GradedMetricComplex base_complex(const BundleModel& b, int r,
                                 const Tolerance& tol = default_tolerance());

struct LeraySerreReport {
  bool pass = true;
  double worst_metric_residual = 0.0;
  double worst_delta_residual = 0.0;
  std::vector<std::string> mismatches;
};

/// E_1 of the assembled total complex against the degree-shifted base
/// complexes: dimensions exactly, metrics and differentials within
/// tolerance. The first-page differential carries the sign
/// (-1)^{fiber degree} relative to the plain base differential.
LeraySerreReport leray_serre_e1(const BundleModel& b, const Tolerance& tol = default_tolerance());

/// Data for a sphere-base sequence: a filtered total complex whose pages
/// carry a single nontrivial differential at page n, plus the ambient
/// cohomology (zero-differential complex with its own metric) and a
/// quasi-isomorphism into the total complex.
struct WangData {
  int n = 1;
  FilteredMetricComplex total;
  GradedMetricComplex ambient;
  ChainMap quasi_iso;
};

struct WangResult {
  GradedMetricComplex sequence;
  double log_torsion = 0.0;
  spectral::SpectralResult spectral;
};

/// Assemble the long exact sequence of the sphere-base situation as an
/// acyclic metric complex (the ambient term H^r sits in degree 3r) and
/// return its torsion. Throws on sparsity or acyclicity failure.
WangResult wang_sequence(const WangData& w, const Tolerance& tol = default_tolerance());

struct EdgeReport {
  double log_t = 0.0;      // torsion of the assembled sequence
  double log_t_met = 0.0;  // volume of the induced cohomology map
  double rho = 0.0;        // page torsion at the nontrivial page
  double residual = 0.0;   // log_t - log_t_met + rho
  double worst_iv = 0.0;   // worst |log Vol| of the inclusion edge maps
  double worst_pv = 0.0;   // worst |log Vol| of the projection edge maps
  bool pass = false;
};

/// Verify log T_W = log T_met - rho_n. The sign of the rho term is the
/// frozen global convention for the degree grading of the assembled
/// sequence (ambient term at degree 3r), pinned by the mapping-torus
/// closed form.
EdgeReport wes_check(const WangData& w, const Tolerance& tol = default_tolerance());

/// Sphere-fiber data: entries concentrated in fiber degrees {0, n}, single
/// nontrivial differential at page n+1.
struct GysinData {
  int n = 1;
  FilteredMetricComplex total;
  GradedMetricComplex ambient;
  ChainMap quasi_iso;
};

WangResult gysin_sequence(const GysinData& g, const Tolerance& tol = default_tolerance());

/// Verify log T_G = log T_met - rho_{n+1}.
EdgeReport ges_check(const GysinData& g, const Tolerance& tol = default_tolerance());

/// Opaque analytic inputs for the fiber-bundle torsion ledger.
struct LstInputs {
  double lhs = 0.0;                      // supplied left-hand side
  std::vector<double> t_an_base;         // per fiber degree r
  std::vector<double> r_term_base;       // per fiber degree r
  double r_term_total = 0.0;
  std::vector<double> t_an_fiber;        // per base point
  std::optional<double> vol_an;          // volume of the analytic det map
};

struct LstReport {
  double lhs = 0.0;
  double rhs = 0.0;
  double residual = 0.0;
  double vol_comb = 0.0;
  double sum_rho_high = 0.0;    // sum of page torsions for k >= 2
  double e100_residual = 0.0;   // supplied vol_an against the metric volumes
  bool pass = false;
};

/// Evaluate the bundle torsion ledger: combinatorial terms computed from
/// the model, analytic terms taken as opaque numbers. Throws
/// ValidationError("incomplete_ledger: ...") when an input is missing.
LstReport lst_ledger(const BundleModel& b, const IntegrationMap& total_integration,
                     const std::vector<IntegrationMap>& base_integrations,
                     const LstInputs& inputs, const Tolerance& tol = default_tolerance());

}  // namespace torsionlab::bundles
