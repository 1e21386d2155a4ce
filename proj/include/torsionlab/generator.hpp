#pragma once

#include "torsionlab/bundles.hpp"

#include <cstdint>

namespace torsionlab::generator {

using complexes::GradedMetricComplex;
using spectral::FilteredMetricComplex;

/// Deterministic random stream. Doubles are built directly from the raw
/// 64-bit output so the sequence is identical across platforms.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed ? seed : 0x9e3779b97f4a7c15ull) {}

  std::uint64_t next();
  double unit();                       // [0, 1)
  double range(double lo, double hi);  // [lo, hi)
  int below(int n);                    // {0, ..., n-1}
  /// Magnitude in [lo, hi) with a random sign.
  double signed_range(double lo, double hi);

 private:
  std::uint64_t state_;
};

Matrix random_matrix(Rng& rng, Index rows, Index cols, double lo = -1.0, double hi = 1.0);
/// Random invertible matrix with condition number below max_cond.
Matrix random_invertible(Rng& rng, Index n, double max_cond = 1e3);
MetricSpace random_metric(Rng& rng, Index n, double spread = 4.0);

enum class MetricMode { unit, random, transported };

struct ComplexParams {
  int q_min = 0;
  int degrees = 5;
  Index max_total_dim = 24;
  bool acyclic = false;
  MetricMode metric = MetricMode::random;
};

/// Orthogonal sum of two-term acyclic atoms and cohomology atoms, then
/// conjugated by bounded-condition invertible maps per degree.
GradedMetricComplex gen_complex(std::uint64_t seed, const ComplexParams& params = {});

struct FilteredParams {
  int q_min = 0;
  int degrees = 5;
  int levels = 3;
  Index max_total_dim = 24;
  bool acyclic = false;
  MetricMode metric = MetricMode::random;
};

/// Valid filtration by construction: atoms carry filtration levels with
/// d-stable targets, and the conjugation is level-triangular.
FilteredMetricComplex gen_filtered(std::uint64_t seed, const FilteredParams& params = {});

struct SesInstance {
  GradedMetricComplex c0, c1, c2;
  detline::ChainMap incl, proj;
};

/// Compatible short exact sequence: a two-step filtration split into
/// subcomplex (restricted metric) and quotient (quotient metric).
SesInstance gen_ses(std::uint64_t seed, const FilteredParams& params = {});

struct MorseBottParams {
  int max_components = 4;
  int max_index = 3;
  int comp_degrees = 3;        // degrees per component complex
  Index max_total_dim = 24;
  bool points_only = false;    // Morse-Smale models
  MetricMode metric = MetricMode::random;
};

geomcx::MorseBottModel gen_morse_bott(std::uint64_t seed, const MorseBottParams& params = {});

/// Quasi-isomorphism from a zero-differential ambient model onto the
/// cohomology of the target, with a random invertible twist and coboundary
/// mixing.
geomcx::IntegrationMap gen_integration_map(std::uint64_t seed, const GradedMetricComplex& target,
                                           const Tolerance& tol = default_tolerance());

struct BundleParams {
  int base_points = 3;
  int max_index = 2;
  int fiber_degrees = 2;
  Index fiber_dim = 2;
  MetricMode metric = MetricMode::random;
};

/// Bundle model over a Morse-Smale base with transports only (no jumps);
/// point roles are split so the base complexes square to zero.
bundles::BundleModel gen_bundle(std::uint64_t seed, const BundleParams& params = {});

struct WangParams {
  int n = 2;             // base sphere dimension
  int fiber_degrees = 3;
  Index max_fiber_dim = 2;
  bool compatible_metrics = false;  // ambient metric matched to the stabilized page
};

bundles::WangData gen_wang(std::uint64_t seed, const WangParams& params = {});

/// Circle-base model with prescribed fiber dimensions; monodromies are
/// random with det(phi - I) bounded away from zero, so the total complex is
/// acyclic and the closed-form torsion applies.
struct MappingTorusInstance {
  bundles::WangData data;
  std::vector<Matrix> monodromies;  // phi_r per fiber degree
};
MappingTorusInstance gen_mapping_torus(std::uint64_t seed, int fiber_degrees = 3,
                                       Index max_fiber_dim = 2);

struct GysinParams {
  int n = 1;             // fiber sphere dimension
  int base_span = 3;     // indices 0 .. n + base_span - 1
  Index fiber_dim = 1;
  bool compatible_metrics = false;
};

bundles::GysinData gen_gysin(std::uint64_t seed, const GysinParams& params = {});

struct LstInstance {
  bundles::BundleModel model;
  geomcx::IntegrationMap total_integration;
  std::vector<geomcx::IntegrationMap> base_integrations;
  bundles::LstInputs inputs;  // internally consistent with the computed terms
};

/// Bundle ledger instance whose analytic inputs are derived from the
/// computed combinatorial quantities, so the ledger must balance.
LstInstance gen_lst(std::uint64_t seed, const BundleParams& params = {});

}  // namespace torsionlab::generator
