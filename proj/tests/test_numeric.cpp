#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "helpers.hpp"

#include <cmath>

using namespace torsionlab;
using namespace torsionlab::numeric;

namespace {

// Independent oracle: evaluate the defining pairing of the adjoint on a
// vector pair.
double adjoint_pairing_residual(const LinearMapRep& f, const LinearMapRep& adj,
                                const Vector& x, const Vector& y) {
  const double lhs = (f.matrix * x).transpose() * f.target.gram * y;
  const double rhs = x.transpose() * f.source.gram * (adj.matrix * y);
  return std::abs(lhs - rhs);
}

}  // namespace

TEST_CASE("adjoint identity map with unit metrics") {
  LinearMapRep f{unit_space(3), unit_space(3), Matrix::Identity(3, 3)};
  const auto adj = adjoint(f);
  CHECK(max_abs(adj.matrix - Matrix::Identity(3, 3)) < 1e-14);
}

TEST_CASE("adjoint of a scalar map between weighted lines") {
  // <f x, y>_4 = <x, f# y>_1 solved by hand: f# = 8.
  LinearMapRep f{space1(1.0), space1(4.0), mat({{2.0}})};
  const auto adj = adjoint(f);
  CHECK(adj.matrix(0, 0) == doctest::Approx(8.0).epsilon(1e-12));
}

TEST_CASE("adjoint pairing on random data") {
  generator::Rng rng(11);
  const MetricSpace src = generator::random_metric(rng, 4);
  const MetricSpace tgt = generator::random_metric(rng, 3);
  LinearMapRep f{src, tgt, generator::random_matrix(rng, 3, 4)};
  const auto adj = adjoint(f);
  for (int t = 0; t < 10; ++t) {
    const Vector x = generator::random_matrix(rng, 4, 1);
    const Vector y = generator::random_matrix(rng, 3, 1);
    CHECK(adjoint_pairing_residual(f, adj, x, y) < 1e-9);
  }
}

TEST_CASE("adjoint is an involution") {
  generator::Rng rng(5);
  for (int t = 0; t < 20; ++t) {
    const MetricSpace src = generator::random_metric(rng, 3);
    const MetricSpace tgt = generator::random_metric(rng, 4);
    LinearMapRep f{src, tgt, generator::random_matrix(rng, 4, 3)};
    const auto back = adjoint(adjoint(f));
    CHECK(max_abs(back.matrix - f.matrix) < 1e-9);
  }
}

TEST_CASE("log_det_prime basic cases") {
  const MetricSpace v = unit_space(3);
  CHECK(log_det_prime({v, v, Matrix::Identity(3, 3)}) == doctest::Approx(0.0));
  Matrix d = Matrix::Zero(3, 3);
  d(0, 0) = 2.0;
  d(2, 2) = 8.0;
  CHECK(log_det_prime({v, v, d}) == doctest::Approx(std::log(16.0)).epsilon(1e-12));
  CHECK(log_det_prime({v, v, Matrix::Zero(3, 3)}) == doctest::Approx(0.0));
  CHECK(log_det_prime({MetricSpace(), MetricSpace(), Matrix(0, 0)}) == doctest::Approx(0.0));
}

TEST_CASE("log_det_prime of A^T A matches the SVD oracle") {
  generator::Rng rng(7);
  for (int t = 0; t < 25; ++t) {
    const Index m = 2 + rng.below(4), n = 2 + rng.below(4);
    const Matrix a = generator::random_matrix(rng, m, n);
    const MetricSpace v = unit_space(n);
    const double got = log_det_prime({v, v, Matrix(a.transpose() * a)});
    Eigen::BDCSVD<Matrix> svd(a);
    double expect = 0.0;
    for (Index i = 0; i < svd.singularValues().size(); ++i) {
      const double s = svd.singularValues()(i);
      if (s > 1e-9 * svd.singularValues()(0)) expect += 2.0 * std::log(s);
    }
    CHECK(got == doctest::Approx(expect).epsilon(1e-9));
  }
}

TEST_CASE("log_det_prime rejects a genuinely negative eigenvalue") {
  const MetricSpace v = unit_space(2);
  Matrix d = Matrix::Zero(2, 2);
  d(0, 0) = 1.0;
  d(1, 1) = -0.5;
  CHECK_THROWS_AS(log_det_prime({v, v, d}), NotPsdError);
}

TEST_CASE("log_det_prime invariant under metric isometries") {
  generator::Rng rng(13);
  for (int t = 0; t < 15; ++t) {
    const Index n = 3;
    const Matrix a = generator::random_matrix(rng, n, n);
    const MetricSpace v = unit_space(n);
    const Matrix sym = a.transpose() * a;
    const double base = log_det_prime({v, v, sym});
    // Transport through an invertible p: metric p^{-T} p^{-1}, map p sym p^{-1}.
    const Matrix p = generator::random_invertible(rng, n);
    const Matrix pinv = p.inverse();
    MetricSpace w(n, pinv.transpose() * pinv);
    w.gram = 0.5 * (w.gram + w.gram.transpose());
    const double moved = log_det_prime({w, w, Matrix(p * sym * pinv)});
    CHECK(std::abs(base - moved) < 1e-8);
  }
}

TEST_CASE("vol_restricted examples") {
  CHECK(vol_restricted({space1(1), space1(1), mat({{3.0}})}) ==
        doctest::Approx(3.0).epsilon(1e-12));
  CHECK(vol_restricted({unit_space(2), unit_space(2), mat({{1, 1}, {0, 1}})}) ==
        doctest::Approx(1.0).epsilon(1e-12));
  CHECK(vol_restricted({unit_space(3), unit_space(2), matn(2, 3)}) ==
        doctest::Approx(1.0));
}

TEST_CASE("vol_restricted multiplicative for surjective then injective") {
  generator::Rng rng(17);
  for (int t = 0; t < 15; ++t) {
    // f: R^4 -> R^2 surjective, g: R^2 -> R^5 injective.
    const Matrix fm = generator::random_matrix(rng, 2, 4);
    const Matrix gm = generator::random_matrix(rng, 5, 2);
    const MetricSpace a = generator::random_metric(rng, 4);
    const MetricSpace b = generator::random_metric(rng, 2);
    const MetricSpace c = generator::random_metric(rng, 5);
    const double vf = log_vol_restricted({a, b, fm});
    const double vg = log_vol_restricted({b, c, gm});
    const double vgf = log_vol_restricted({a, c, Matrix(gm * fm)});
    CHECK(std::abs(vf + vg - vgf) < 1e-8);
  }
}

TEST_CASE("subquotient trivial cases") {
  generator::Rng rng(23);
  const MetricSpace amb = generator::random_metric(rng, 4);
  const auto full = subquotient(amb, Matrix::Identity(4, 4), Matrix(4, 0));
  CHECK(max_abs(full.space.gram - amb.gram) < 1e-14);

  const MetricSpace e2 = unit_space(2);
  Matrix sub = Matrix::Identity(2, 2);
  Matrix quot = mat({{1.0}, {0.0}});
  const auto sq = subquotient(e2, sub, quot);
  CHECK(sq.space.dim == 1);
  CHECK(sq.space.gram(0, 0) == doctest::Approx(1.0));
}

TEST_CASE("subquotient norms equal minimum-norm representatives") {
  generator::Rng rng(29);
  for (int t = 0; t < 10; ++t) {
    const MetricSpace amb = generator::random_metric(rng, 5);
    const Matrix sub = generator::random_matrix(rng, 5, 4);
    const Matrix quot = sub.leftCols(2) * generator::random_invertible(rng, 2);
    const auto sq = subquotient(amb, sub, quot);
    CHECK(sq.space.dim == 2);
    // Pick a class representative, compare against the projection oracle.
    const Vector v = sub * generator::random_matrix(rng, 4, 1);
    const Matrix qon = gram_orthonormal_basis(amb, quot);
    const Vector min_rep = v - qon * (qon.transpose() * (amb.gram * v));
    const double min_norm = std::sqrt(min_rep.transpose() * amb.gram * min_rep);
    const Matrix coords = coordinates_in(amb, sq.basis, min_rep);
    const double sq_norm = std::sqrt((coords.transpose() * sq.space.gram * coords)(0, 0));
    CHECK(sq_norm == doctest::Approx(min_norm).epsilon(1e-9));
  }
}

TEST_CASE("subquotient rejects containment violation") {
  const MetricSpace amb = unit_space(3);
  const Matrix sub = mat({{1, 0}, {0, 1}, {0, 0}});
  const Matrix quot = mat({{0}, {0}, {1}});
  CHECK_THROWS_AS(subquotient(amb, sub, quot), ValidationError);
}

TEST_CASE("conditioning floor enforced") {
  Matrix g = Matrix::Identity(2, 2);
  g(1, 1) = 1e-12;
  MetricSpace bad(2, g);
  CHECK_THROWS_AS(bad.validate(), ConditioningError);
  CHECK_THROWS_AS(cholesky_factor(bad), ConditioningError);
}

TEST_CASE("tolerance validation") {
  Tolerance t;
  t.rank_rel_tol = 2.0;
  CHECK_THROWS_AS(t.validate(), ValidationError);
}
