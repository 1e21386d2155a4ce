#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "helpers.hpp"

#include <cmath>

using namespace torsionlab;
using namespace torsionlab::complexes;

TEST_CASE("validate: zero differentials pass") {
  const auto c = make_complex(0, {2, 3, 1}, {matn(3, 2), matn(1, 3)});
  const auto rep = validate_complex(c);
  CHECK(rep.pass);
  for (const auto& d : rep.d_squared) CHECK(d.residual == 0.0);
}

TEST_CASE("validate: d squared nonzero fails") {
  const auto c = make_complex(0, {1, 1, 1}, {mat({{1.0}}), mat({{1.0}})});
  const auto rep = validate_complex(c);
  CHECK_FALSE(rep.pass);
  CHECK(rep.worst_check == "d_squared_zero");
  CHECK(rep.worst_residual == doctest::Approx(1.0));
}

TEST_CASE("validate: generator output always passes") {
  for (std::uint64_t s = 0; s < 30; ++s) {
    const auto c = generator::gen_complex(s);
    CHECK(validate_complex(c).pass);
  }
}

TEST_CASE("laplacian examples") {
  SUBCASE("zero differential") {
    const auto c = make_complex(0, {2, 2}, {matn(2, 2)});
    CHECK(max_abs(laplacian(c, 0).matrix) == 0.0);
    CHECK(max_abs(laplacian(c, 1).matrix) == 0.0);
  }
  SUBCASE("scalar differential") {
    const auto c = two_term(2.0);
    CHECK(laplacian(c, 0).matrix(0, 0) == doctest::Approx(4.0));
    CHECK(laplacian(c, 1).matrix(0, 0) == doctest::Approx(4.0));
  }
  SUBCASE("degree out of range") {
    const auto c = two_term(2.0);
    CHECK_THROWS_AS(laplacian(c, 5), DomainError);
  }
}

TEST_CASE("laplacian spectrum matches the SVD oracle") {
  for (std::uint64_t s = 0; s < 10; ++s) {
    const auto c = generator::gen_complex(s);
    for (int q = c.q_min; q <= c.q_max(); ++q) {
      if (c.dim(q) == 0) continue;
      // Nonzero eigenvalues of the degree-q Laplacian are the squared
      // nonzero metric singular values of d^q and d^{q-1} combined.
      const Matrix up = numeric::ortho_coordinates(c.space(q), c.space_or_zero(q + 1), c.d(q));
      const Matrix dn =
          numeric::ortho_coordinates(c.space_or_zero(q - 1), c.space(q), c.d(q - 1));
      std::vector<double> expect;
      for (const Matrix& m : {up, dn}) {
        if (m.size() == 0) continue;
        Eigen::BDCSVD<Matrix> svd(m);
        for (Index i = 0; i < svd.singularValues().size(); ++i) {
          const double sv = svd.singularValues()(i);
          if (sv > 1e-9 * svd.singularValues()(0)) expect.push_back(sv * sv);
        }
      }
      std::sort(expect.begin(), expect.end());
      const auto lap = laplacian(c, q);
      const Matrix a = numeric::ortho_coordinates(lap.source, lap.target, lap.matrix);
      Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (a + a.transpose()));
      std::vector<double> got;
      for (Index i = 0; i < es.eigenvalues().size(); ++i)
        if (es.eigenvalues()(i) > 1e-8 * std::max(1.0, es.eigenvalues().maxCoeff()))
          got.push_back(es.eigenvalues()(i));
      REQUIRE(got.size() == expect.size());
      for (std::size_t i = 0; i < got.size(); ++i)
        CHECK(got[i] == doctest::Approx(expect[i]).epsilon(1e-7));
    }
  }
}

TEST_CASE("hodge cohomology examples") {
  SUBCASE("zero differential: betti = dims, Hodge metric = ambient") {
    generator::Rng rng(3);
    complexes::GradedMetricComplex c;
    c.q_min = 0;
    c.spaces = {generator::random_metric(rng, 2), generator::random_metric(rng, 3)};
    c.diffs = {matn(3, 2)};
    const auto h = hodge_cohomology(c);
    CHECK(h.betti(0) == 2);
    CHECK(h.betti(1) == 3);
    CHECK(max_abs(h.at(0).hodge.gram - c.space(0).gram) < 1e-14);
  }
  SUBCASE("acyclic two-term complex") {
    const auto c = two_term(2.0);
    const auto h = hodge_cohomology(c);
    CHECK(h.betti(0) == 0);
    CHECK(h.betti(1) == 0);
  }
}

TEST_CASE("betti equals the rank-nullity oracle") {
  for (std::uint64_t s = 0; s < 25; ++s) {
    const auto c = generator::gen_complex(s);
    const auto h = hodge_cohomology(c);
    for (int q = c.q_min; q <= c.q_max(); ++q) {
      const Index r_up = numeric::rank({c.space(q), c.space_or_zero(q + 1), c.d(q)});
      const Index r_dn = numeric::rank({c.space_or_zero(q - 1), c.space(q), c.d(q - 1)});
      CHECK(h.betti(q) == c.dim(q) - r_up - r_dn);
      // Harmonic columns are cocycles orthogonal to the image of d.
      const auto& dc = h.at(q);
      if (dc.betti > 0 && c.dim(q + 1) > 0)
        CHECK(max_abs(c.d(q) * dc.harmonic_basis) < 1e-7);
    }
  }
}

TEST_CASE("torsion examples") {
  SUBCASE("zero differential") {
    const auto c = make_complex(0, {2, 2}, {matn(2, 2)});
    CHECK(torsion_tc(c) == doctest::Approx(0.0));
    CHECK(torsion_log_sum(c) == doctest::Approx(0.0));
  }
  SUBCASE("two-term acyclic complex, weight 2") {
    const auto c = two_term(2.0);
    CHECK(torsion_tc(c) == doctest::Approx(std::log(2.0)).epsilon(1e-12));
    CHECK(torsion_log_sum(c) == doctest::Approx(std::log(2.0)).epsilon(1e-12));
  }
}

TEST_CASE("the two torsion formulas agree on random complexes") {
  double worst = 0.0;
  for (std::uint64_t s = 0; s < 60; ++s) {
    generator::ComplexParams p;
    p.acyclic = (s % 2 == 0);
    const auto c = generator::gen_complex(s, p);
    worst = std::max(worst, std::abs(torsion_tc(c) - torsion_log_sum(c)));
  }
  CHECK(worst < 1e-8);
}

TEST_CASE("torsion invariant under isometric transport") {
  for (std::uint64_t s = 0; s < 20; ++s) {
    const auto c = generator::gen_complex(s);
    generator::Rng rng(s + 101);
    std::vector<Matrix> p;
    for (const auto& sp : c.spaces) p.push_back(generator::random_invertible(rng, sp.dim));
    const auto moved = transport(c, p);
    CHECK(validate_complex(moved).pass);
    CHECK(std::abs(torsion_tc(c) - torsion_tc(moved)) < 1e-8);
    // Betti numbers are transported too.
    const auto h0 = hodge_cohomology(c);
    const auto h1 = hodge_cohomology(moved);
    for (int q = c.q_min; q <= c.q_max(); ++q) CHECK(h0.betti(q) == h1.betti(q));
  }
}

TEST_CASE("euler characteristic") {
  SUBCASE("alternating dims") {
    const auto c = make_complex(0, {1, 2, 1}, {matn(2, 1), matn(1, 2)});
    CHECK(euler_characteristic(c) == 0);
  }
  SUBCASE("zero differential") {
    const auto c = make_complex(0, {3, 1}, {matn(1, 3)});
    CHECK(euler_characteristic(c) == 2);
  }
  SUBCASE("random complexes satisfy chi(C) = chi(HC)") {
    for (std::uint64_t s = 0; s < 20; ++s) {
      const auto c = generator::gen_complex(s);
      CHECK_NOTHROW(euler_characteristic(c));  // asserts the identity internally
    }
  }
}

TEST_CASE("z2 collapse shapes") {
  const auto c = make_complex(0, {1, 2, 3}, {matn(2, 1), matn(3, 2)});
  const auto z = z2_collapse(c);
  CHECK(z.even.dim == 4);  // degrees 0 and 2
  CHECK(z.odd.dim == 2);
  CHECK(z.d_even_to_odd.rows() == 2);
  CHECK(z.d_even_to_odd.cols() == 4);
}
