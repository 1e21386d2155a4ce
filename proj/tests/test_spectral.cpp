#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "helpers.hpp"

#include <cmath>

using namespace torsionlab;
using namespace torsionlab::spectral;

namespace {

/// Trivial one-step filtration of a complex.
FilteredMetricComplex trivial_filtration(complexes::GradedMetricComplex c) {
  FilteredMetricComplex f;
  f.p_min = 0;
  f.level_bases.resize(1);
  f.level_bases[0].resize(c.spaces.size());
  for (std::size_t i = 0; i < c.spaces.size(); ++i)
    f.level_bases[0][i] = Matrix::Identity(c.spaces[i].dim, c.spaces[i].dim);
  f.complex = std::move(c);
  return f;
}

/// Two-step filtration of the two-term complex [R --a--> R]: level 1 is the
/// top degree. The only page differential is delta_1 = (a).
FilteredMetricComplex weighted_arrow(double a) {
  FilteredMetricComplex f;
  f.complex = two_term(a);
  f.p_min = 0;
  f.level_bases.resize(2);
  f.level_bases[0] = {Matrix::Identity(1, 1), Matrix::Identity(1, 1)};
  f.level_bases[1] = {Matrix(1, 0), Matrix::Identity(1, 1)};
  return f;
}

}  // namespace

TEST_CASE("validate_filtration: trivial passes, broken d-stability fails") {
  const auto f = trivial_filtration(generator::gen_complex(3));
  CHECK(validate_filtration(f).pass);

  // Deliberately d-unstable level: F_1 spanned by the source line of a
  // nonzero arrow, whose image leaves the level.
  FilteredMetricComplex bad;
  bad.complex = two_term(2.0);
  bad.p_min = 0;
  bad.level_bases.resize(2);
  bad.level_bases[0] = {Matrix::Identity(1, 1), Matrix::Identity(1, 1)};
  bad.level_bases[1] = {Matrix::Identity(1, 1), Matrix(1, 0)};
  const auto rep = validate_filtration(bad);
  CHECK_FALSE(rep.pass);
  CHECK(rep.worst_check.find("d_stability") == 0);
}

TEST_CASE("generated filtrations validate") {
  for (std::uint64_t s = 0; s < 40; ++s) {
    generator::FilteredParams p;
    p.levels = 1 + static_cast<int>(s % 4);
    CHECK(validate_filtration(generator::gen_filtered(s, p)).pass);
  }
}

TEST_CASE("first page of the trivial filtration is the cohomology") {
  const auto c = generator::gen_complex(9);
  const auto h = complexes::hodge_cohomology(c);
  const auto f = trivial_filtration(c);
  const auto page = page_e1(f);
  for (int q = c.q_min; q <= c.q_max(); ++q)
    CHECK(page.dim(0, q) == h.betti(q));
  // Stabilized immediately: delta_1 = 0 and rho_1 = 0.
  CHECK(rho_k(page) == doctest::Approx(0.0));
}

TEST_CASE("first page with zero differential is the associated graded") {
  generator::FilteredParams p;
  p.degrees = 3;
  p.levels = 3;
  for (std::uint64_t s = 0; s < 10; ++s) {
    auto f = generator::gen_filtered(s, p);
    // Remove the differential but keep the filtration.
    for (auto& d : f.complex.diffs) d.setZero();
    const auto page = page_e1(f);
    for (int pp = page.p_min; pp <= page.p_max; ++pp)
      for (int q = page.q_min; q <= page.q_max; ++q) {
        const Index expect = f.basis(pp, q).cols() - f.basis(pp + 1, q).cols();
        CHECK(page.dim(pp, q) == expect);
      }
  }
}

TEST_CASE("page dims match the classical subquotient oracle") {
  for (std::uint64_t s = 0; s < 40; ++s) {
    generator::FilteredParams p;
    p.levels = 1 + static_cast<int>(s % 4);
    const auto f = generator::gen_filtered(s, p);
    const auto res = log_t_comb(f);
    for (const auto& page : res.pages)
      CHECK(oracles::page_dims_match_classical(f, page));
  }
}

TEST_CASE("two-step weighted arrow: rho_1 = log a and pages stabilize") {
  const double a = 2.0;
  const auto f = weighted_arrow(a);
  const auto page = page_e1(f);
  CHECK(page.dim(0, 0) == 1);
  CHECK(page.dim(1, 1) == 1);
  CHECK(std::abs(page.delta_at(0, 0)(0, 0)) == doctest::Approx(a).epsilon(1e-12));
  CHECK(rho_k(page) == doctest::Approx(std::log(a)).epsilon(1e-12));
  const auto next = next_page(page, f);
  CHECK(next.dim(0, 0) == 0);
  CHECK(next.dim(1, 1) == 0);
  const auto rep = maumary_check(f);
  CHECK(std::abs(rep.residual) < 1e-12);
  CHECK(rep.t_c == doctest::Approx(std::log(a)).epsilon(1e-12));
  CHECK(rep.t_gc == doctest::Approx(0.0));
  CHECK(rep.sum_rho == doctest::Approx(std::log(a)).epsilon(1e-12));
}

TEST_CASE("single-arrow page torsion example") {
  // One entry in (p, q) = (0, 0) mapping to (k, 1) with weight 2.
  const auto f = weighted_arrow(2.0);
  const auto page = page_e1(f);
  CHECK(rho_k(page) == doctest::Approx(std::log(2.0)).epsilon(1e-12));
}

TEST_CASE("rho_k equals the torsion of the page as a total-degree complex") {
  for (std::uint64_t s = 0; s < 20; ++s) {
    generator::FilteredParams p;
    p.levels = 1 + static_cast<int>(s % 4);
    const auto f = generator::gen_filtered(s, p);
    const auto res = log_t_comb(f);
    for (const auto& page : res.pages) {
      // Assemble the page as a plain complex by total degree.
      complexes::GradedMetricComplex pc;
      pc.q_min = page.q_min;
      std::vector<std::vector<Index>> offs(page.q_max - page.q_min + 1);
      for (int q = page.q_min; q <= page.q_max; ++q) {
        Index n = 0;
        for (int pp = page.p_min; pp <= page.p_max; ++pp) {
          offs[q - page.q_min].push_back(n);
          n += page.dim(pp, q);
        }
        pc.spaces.push_back(MetricSpace::euclidean(n));
      }
      for (int q = page.q_min; q < page.q_max; ++q) {
        Matrix d = Matrix::Zero(pc.spaces[q + 1 - page.q_min].dim,
                                pc.spaces[q - page.q_min].dim);
        for (int pp = page.p_min; pp <= page.p_max; ++pp) {
          const Matrix blk = page.delta_at(pp, q);
          if (blk.size() == 0) continue;
          if (pp + page.k > page.p_max) continue;
          d.block(offs[q + 1 - page.q_min][pp + page.k - page.p_min],
                  offs[q - page.q_min][pp - page.p_min], blk.rows(), blk.cols()) = blk;
        }
        pc.diffs.push_back(std::move(d));
      }
      CHECK(std::abs(rho_k(page) - complexes::torsion_log_sum(pc)) < 1e-9);
    }
  }
}

TEST_CASE("next page independent of the lift choice") {
  for (std::uint64_t s = 0; s < 12; ++s) {
    generator::FilteredParams p;
    p.levels = 3 + static_cast<int>(s % 2);
    const auto f = generator::gen_filtered(s, p);
    auto page = page_e1(f);
    for (int k = 1; k < f.length(); ++k) {
      const auto a = next_page(page, f);
      const auto b = next_page_perturbed(page, f, 1000 + s);
      for (int pp = a.p_min; pp <= a.p_max; ++pp)
        for (int q = a.q_min; q <= a.q_max; ++q) {
          const Matrix da = a.delta_at(pp, q);
          const Matrix db = b.delta_at(pp, q);
          if (da.size() > 0) CHECK(max_abs(da - db) < 1e-8);
        }
      page = a;
    }
  }
}

TEST_CASE("ghc dimensions match the stabilized page") {
  for (std::uint64_t s = 0; s < 25; ++s) {
    generator::FilteredParams p;
    p.levels = 1 + static_cast<int>(s % 4);
    const auto f = generator::gen_filtered(s, p);
    const auto ghc = ghc_metric(f);
    const auto res = log_t_comb(f);
    const auto& last = res.pages.back();
    for (int pp = last.p_min; pp <= last.p_max; ++pp)
      for (int q = last.q_min; q <= last.q_max; ++q)
        CHECK(ghc.entry(pp, q).dim() == last.dim(pp, q));
  }
}

TEST_CASE("ghc of the trivial filtration is the cohomology") {
  const auto c = generator::gen_complex(21);
  const auto f = trivial_filtration(c);
  const auto ghc = ghc_metric(f);
  const auto h = complexes::hodge_cohomology(c);
  for (int q = c.q_min; q <= c.q_max(); ++q)
    CHECK(ghc.entry(0, q).dim() == h.betti(q));
}

TEST_CASE("maumary identity") {
  SUBCASE("trivial filtration: all corrections vanish") {
    const auto f = trivial_filtration(generator::gen_complex(2));
    const auto rep = maumary_check(f);
    CHECK(std::abs(rep.residual) < 1e-10);
    CHECK(std::abs(rep.sum_rho) < 1e-10);
    CHECK(std::abs(rep.ghc_correction) < 1e-8);
  }
  SUBCASE("zero differential: everything vanishes") {
    generator::FilteredParams p;
    p.levels = 3;
    auto f = generator::gen_filtered(5, p);
    for (auto& d : f.complex.diffs) d.setZero();
    const auto rep = maumary_check(f);
    CHECK(std::abs(rep.t_c) < 1e-12);
    CHECK(std::abs(rep.residual) < 1e-8);
  }
  SUBCASE("two-step filtrations at small dims, frame cross-check") {
    for (std::uint64_t s = 0; s < 20; ++s) {
      generator::FilteredParams p;
      p.levels = 2;
      p.degrees = 3;
      p.max_total_dim = 10;
      const auto f = generator::gen_filtered(s, p);
      const auto rep = maumary_check(f);
      CHECK(std::abs(rep.residual) < 1e-8);
      // Frame-route cross-check: torsion factors recomputed through the
      // adapted-frame determinant construction instead of singular values.
      const double t_c_frames = detline::det_iso_c_hc(f.complex).log_vol;
      double t_gc_frames = 0.0;
      for (int pp = f.p_min; pp <= f.p_max(); ++pp)
        t_gc_frames += detline::det_iso_c_hc(associated_graded_at(f, pp)).log_vol;
      CHECK(std::abs(t_c_frames - rep.t_c) < 1e-8);
      CHECK(std::abs(t_gc_frames - rep.t_gc) < 1e-8);
    }
  }
  SUBCASE("property sweep over 300 filtered complexes") {
    double worst = 0.0;
    for (std::uint64_t s = 0; s < 300; ++s) {
      generator::FilteredParams p;
      p.levels = 1 + static_cast<int>(s % 4);
      const auto f = generator::gen_filtered(s, p);
      worst = std::max(worst, std::abs(maumary_check(f).residual));
    }
    CHECK(worst < 1e-6);
  }
}

TEST_CASE("page invariants: euler, alternating chains, stabilization") {
  for (std::uint64_t s = 0; s < 30; ++s) {
    generator::FilteredParams p;
    p.levels = 1 + static_cast<int>(s % 4);
    const auto f = generator::gen_filtered(s, p);
    const auto res = log_t_comb(f);
    const auto inv = check_page_invariants(f, res);
    CHECK(inv.euler_ok);
    CHECK(inv.morse_ok);
    CHECK(inv.stabilization_ok);
  }
}

TEST_CASE("indexing conversion between total and complementary degrees") {
  CHECK(to_complementary(2, 5) == std::pair<int, int>{2, 3});
  CHECK(to_total(2, 3) == std::pair<int, int>{2, 5});
}
