#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "helpers.hpp"

#include <cmath>

using namespace torsionlab;
using namespace torsionlab::bundles;

namespace {

/// Mapping-torus model with explicit monodromies on 1-dim fibers.
BundleModel torus_model(const std::vector<double>& phis) {
  BundleModel b;
  b.points.push_back({"min", 0});
  b.points.push_back({"max", 1});
  b.r_min = 0;
  for (std::size_t r = 0; r < phis.size(); ++r) {
    b.fiber.push_back(MetricSpace::euclidean(1));
    b.transports.push_back(
        {1, 0, static_cast<int>(r), Matrix::Constant(1, 1, phis[r] - 1.0)});
  }
  return b;
}

}  // namespace

TEST_CASE("leray-serre first page identification") {
  SUBCASE("trivial circle bundle: two shifted copies") {
    BundleModel b;
    b.points.push_back({"min", 0});
    b.points.push_back({"max", 1});
    b.r_min = 0;
    b.fiber = {MetricSpace::euclidean(1), MetricSpace::euclidean(2)};
    for (int r = 0; r < 2; ++r) {
      const Index d = b.fiber[r].dim;
      b.transports.push_back({1, 0, r, Matrix::Zero(d, d)});
    }
    const auto rep = leray_serre_e1(b);
    CHECK(rep.pass);
  }
  SUBCASE("suspension dimension bookkeeping for fiber dims (1,0,1)") {
    BundleModel b;
    b.points.push_back({"z0", 0});
    b.points.push_back({"z1", 1});
    b.r_min = 0;
    b.fiber = {MetricSpace::euclidean(1), MetricSpace(), MetricSpace::euclidean(1)};
    b.transports.push_back({1, 0, 0, Matrix::Constant(1, 1, 0.5)});
    b.transports.push_back({1, 0, 2, Matrix::Constant(1, 1, 2.0)});
    const auto g = geomcx::assemble(to_morse_bott(b));
    const auto page = spectral::page_e1(g.total);
    CHECK(page.dim(0, 0) == 1);
    CHECK(page.dim(0, 2) == 1);
    CHECK(page.dim(1, 1) == 1);
    CHECK(page.dim(1, 3) == 1);
    CHECK(page.dim(0, 1) == 0);
    const auto rep = leray_serre_e1(b);
    CHECK(rep.pass);
  }
  SUBCASE("mapping torus: first-page differential is phi - 1 up to the frozen sign") {
    const std::vector<double> phis = {3.0, -1.0};
    const auto b = torus_model(phis);
    const auto rep = leray_serre_e1(b);
    CHECK(rep.pass);
    CHECK(rep.worst_delta_residual < 1e-10);
  }
  SUBCASE("generated bundles") {
    for (std::uint64_t s = 0; s < 25; ++s) {
      const auto b = generator::gen_bundle(s);
      CHECK(leray_serre_e1(b).pass);
    }
  }
}

TEST_CASE("first-page torsion splits into alternating base-complex torsions") {
  for (std::uint64_t s = 0; s < 15; ++s) {
    const auto b = generator::gen_bundle(s);
    const auto g = geomcx::assemble(to_morse_bott(b));
    const auto res = spectral::log_t_comb(g.total);
    double split = 0.0;
    for (int r = b.r_min; r <= b.r_max(); ++r)
      split += sign_of_degree(r) * complexes::torsion_tc(base_complex(b, r));
    CHECK(std::abs(res.rho.front() - split) < 1e-8);
  }
}

TEST_CASE("wang sequence: zero page map with compatible metrics") {
  generator::WangParams p;
  p.n = 2;
  p.compatible_metrics = true;
  for (std::uint64_t s = 0; s < 8; ++s) {
    const auto w = generator::gen_wang(s, p);
    const auto rep = wes_check(w);
    CHECK(rep.pass);
    CHECK(rep.worst_iv < 1e-8);
    CHECK(rep.worst_pv < 1e-8);
  }
}

TEST_CASE("mapping torus closed form") {
  SUBCASE("hand case: scalar monodromies") {
    const std::vector<double> phis = {3.0, -1.0, 5.0};
    const auto b = torus_model(phis);
    const auto g = geomcx::assemble(to_morse_bott(b));
    WangData w;
    w.n = 1;
    w.total = g.total;
    w.ambient.q_min = 0;
    w.ambient.spaces = {MetricSpace(), MetricSpace(), MetricSpace(), MetricSpace()};
    w.ambient.diffs = {Matrix(0, 0), Matrix(0, 0), Matrix(0, 0)};
    w.quasi_iso.q_min = 0;
    for (int q = 0; q < 4; ++q) w.quasi_iso.blocks.push_back(Matrix(g.total.complex.dim(q), 0));
    const auto res = wang_sequence(w);
    double expect = 0.0;
    for (std::size_t r = 0; r < phis.size(); ++r)
      expect += -sign_of_degree(static_cast<int>(r)) * std::log(std::abs(phis[r] - 1.0));
    CHECK(res.log_torsion == doctest::Approx(expect).epsilon(1e-10));
    const auto rep = wes_check(w);
    CHECK(std::abs(rep.residual) < 1e-10);
    CHECK(std::abs(rep.log_t_met) < 1e-12);
  }
  SUBCASE("50 random monodromies against the determinant oracle") {
    double worst = 0.0;
    for (std::uint64_t s = 0; s < 50; ++s) {
      const auto inst = generator::gen_mapping_torus(s, 2 + static_cast<int>(s % 3), 2);
      const auto res = wang_sequence(inst.data);
      const double oracle = oracles::mapping_torus_log_torsion(inst.monodromies);
      worst = std::max(worst, std::abs(res.log_torsion - oracle));
    }
    CHECK(worst < 1e-8);
  }
}

TEST_CASE("wang identity on 100 generated instances") {
  double worst = 0.0;
  for (std::uint64_t s = 0; s < 100; ++s) {
    generator::WangParams p;
    p.n = 1 + static_cast<int>(s % 3);
    p.compatible_metrics = (s % 2 == 0);
    const auto w = generator::gen_wang(s, p);
    const auto rep = wes_check(w);
    worst = std::max(worst, std::abs(rep.residual));
  }
  CHECK(worst < 1e-6);
}

TEST_CASE("gysin identity") {
  SUBCASE("sphere bundle with compatible metrics at small dims") {
    generator::GysinParams p;
    p.n = 1;
    p.base_span = 2;
    p.fiber_dim = 1;
    p.compatible_metrics = true;
    for (std::uint64_t s = 0; s < 8; ++s) {
      const auto g = generator::gen_gysin(s, p);
      const auto rep = ges_check(g);
      CHECK(std::abs(rep.residual) < 1e-8);
      CHECK(rep.worst_iv < 1e-8);
      CHECK(rep.worst_pv < 1e-8);
    }
  }
  SUBCASE("100 generated instances") {
    double worst = 0.0;
    for (std::uint64_t s = 0; s < 100; ++s) {
      generator::GysinParams p;
      p.n = 1 + static_cast<int>(s % 2);
      p.base_span = 2 + static_cast<int>(s % 2);
      p.fiber_dim = 1 + static_cast<int>(s % 2);
      p.compatible_metrics = (s % 2 == 0);
      const auto g = generator::gen_gysin(s, p);
      const auto rep = ges_check(g);
      worst = std::max(worst, std::abs(rep.residual));
    }
    CHECK(worst < 1e-6);
  }
}

TEST_CASE("bundle ledger balances on internally consistent inputs") {
  double worst = 0.0;
  for (std::uint64_t s = 0; s < 20; ++s) {
    const auto inst = generator::gen_lst(s);
    const auto rep = lst_ledger(inst.model, inst.total_integration, inst.base_integrations,
                                inst.inputs);
    worst = std::max(worst, std::abs(rep.residual));
    worst = std::max(worst, rep.e100_residual);
  }
  CHECK(worst < 1e-8);
}

TEST_CASE("bundle ledger: missing inputs rejected") {
  const auto inst = generator::gen_lst(1);
  auto bad = inst.inputs;
  bad.t_an_base.pop_back();
  CHECK_THROWS_AS(
      lst_ledger(inst.model, inst.total_integration, inst.base_integrations, bad),
      ValidationError);
}

TEST_CASE("arrow validation") {
  BundleModel b;
  b.points.push_back({"a", 0});
  b.points.push_back({"b", 2});
  b.r_min = 0;
  b.fiber = {MetricSpace::euclidean(1)};
  b.transports.push_back({1, 0, 0, mat({{1.0}})});  // index difference 2
  CHECK_THROWS_AS(to_morse_bott(b), ValidationError);
}
