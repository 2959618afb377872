#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "wmcen/objective.hpp"

using namespace wmcen;

namespace {

// Single-response system whose residuals at b = 0 are exactly `values`.
PairwiseSystem residual_system(const Vector& values) {
  Dataset d;
  d.x = Matrix::Ones(values.size(), 1);
  d.y = values;
  return build_pairwise(d);
}

ClusterState singleton_clusters(const Matrix& b) {
  Matrix u = Matrix::Identity(b.cols(), b.cols());
  return ClusterState(u, b);
}

}  // namespace

TEST_CASE("pairwise dispersion sums absolute residual differences") {
  Vector e(3);
  e << 0, 1, 3;
  const PairwiseSystem ps = residual_system(e);
  CHECK(wilcoxon_dispersion(ps, Matrix::Zero(1, 1)) == doctest::Approx(6.0));
}

TEST_CASE("pairwise dispersion vanishes on an interpolating fit") {
  RngStream rng(3);
  const Matrix x = testing::random_matrix(rng, 6, 2);
  const Matrix b = testing::random_matrix(rng, 2, 2);
  const Dataset d = validate_dataset(x, x * b);
  CHECK(wilcoxon_dispersion(build_pairwise(d), b) ==
        doctest::Approx(0.0).epsilon(1e-10));
}

TEST_CASE("pairwise dispersion is additive over responses") {
  RngStream rng(4);
  Dataset d = testing::random_dataset(rng, 7, 2, 1);
  const Matrix b1 = testing::random_matrix(rng, 2, 1);
  const double one = wilcoxon_dispersion(build_pairwise(d), b1);

  Dataset dup;
  dup.x = d.x;
  dup.y.resize(7, 2);
  dup.y << d.y, d.y;
  Matrix b2(2, 2);
  b2 << b1, b1;
  CHECK(wilcoxon_dispersion(build_pairwise(dup), b2) ==
        doctest::Approx(2.0 * one));
}

TEST_CASE("rank-weighted dispersion on a hand example") {
  Vector e(3);
  e << 0, 1, 3;
  CHECK(jaeckel_dispersion(e) == doctest::Approx(0.75 * std::sqrt(12.0)));
}

TEST_CASE("rank-weighted dispersion is zero for constant residuals") {
  Vector e = Vector::Constant(5, 2.5);
  CHECK(jaeckel_dispersion(e) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("rank-weighted dispersion is symmetric under negation") {
  RngStream rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    const Index n = 2 + rng.uniform_int(20);
    const Vector e = testing::random_matrix(rng, n, 1);
    CHECK(jaeckel_dispersion(e) ==
          doctest::Approx(jaeckel_dispersion(-e)).epsilon(1e-12));
  }
}

TEST_CASE("pairwise and rank forms are proportional by 2(n+1)/sqrt(12)") {
  RngStream rng(6);
  for (int trial = 0; trial < 50; ++trial) {
    const Index n = 3 + rng.uniform_int(28);
    const Vector e = testing::random_matrix(rng, n, 1);

    // Direct pairwise sum, independent of the library loss.
    double pair_sum = 0.0;
    for (Index i = 0; i < n; ++i) {
      for (Index j = i + 1; j < n; ++j) pair_sum += std::abs(e[i] - e[j]);
    }
    const double factor = 2.0 * static_cast<double>(n + 1) / std::sqrt(12.0);
    const double ratio = pair_sum / (factor * jaeckel_dispersion(e));
    CHECK(std::abs(ratio - 1.0) < 1e-10);
  }
}

TEST_CASE("perturbed penalty basics") {
  CHECK(perturbed_l1(Matrix::Zero(3, 2), 2.0, 0.5) == doctest::Approx(0.0));

  Matrix b1(1, 1);
  b1 << 1.0;
  CHECK(perturbed_l1(b1, 1.0, 1.0) ==
        doctest::Approx(1.0 - std::log(2.0)).epsilon(1e-12));

  RngStream rng(8);
  const Matrix b = testing::random_matrix(rng, 3, 2);
  CHECK(perturbed_l1(b, 1.5, 0.1) < 1.5 * b.cwiseAbs().sum());
}

TEST_CASE("perturbed penalty approaches the L1 norm as epsilon shrinks") {
  RngStream rng(9);
  const Matrix b = testing::random_matrix(rng, 4, 3);
  const double lambda = 2.0;
  const double l1 = lambda * b.cwiseAbs().sum();

  double prev = -1.0;
  double gap = 0.0;
  for (double eps : {1.0, 0.1, 0.01, 1e-3, 1e-5, 1e-8}) {
    const double val = perturbed_l1(b, lambda, eps);
    CHECK(val <= l1);
    CHECK(val >= prev);  // non-increasing in eps means non-decreasing here
    prev = val;
    gap = l1 - val;
  }
  CHECK(gap < 1e-6 * l1);
}

TEST_CASE("cluster penalty zero cases") {
  RngStream rng(10);
  const Matrix x = testing::random_matrix(rng, 6, 3);
  const Matrix b = testing::random_matrix(rng, 3, 4);

  SUBCASE("each response at its own centroid") {
    CHECK(cluster_penalty(x, b, singleton_clusters(b), 2.0) ==
          doctest::Approx(0.0));
  }
  SUBCASE("zero weight") {
    const ClusterState cs = testing::random_clusters(rng, 3, 4, 2);
    CHECK(cluster_penalty(x, b, cs, 0.0) == 0.0);
  }
  SUBCASE("positive for off-centroid assignments") {
    const ClusterState cs = testing::random_clusters(rng, 3, 4, 2);
    CHECK(cluster_penalty(x, b, cs, 2.0) > 0.0);
  }
}

TEST_CASE("objective breakdown adds up and reduces at zero coefficients") {
  RngStream rng(11);
  const Dataset d = testing::random_dataset(rng, 7, 3, 2);
  const PairwiseSystem ps = build_pairwise(d);
  Hyperparams hp;
  hp.lambda = 0.7;
  hp.gamma = 1.3;
  hp.k = 2;

  const Matrix b0 = Matrix::Zero(3, 2);
  Matrix u(2, 2);
  u << 1, 0, 0, 1;
  const ClusterState cs(u, Matrix::Zero(3, 2));

  const ObjectiveBreakdown at_zero = objective_l_dagger(ps, d.x, b0, cs, hp);
  CHECK(at_zero.penalty_l1 == 0.0);
  CHECK(at_zero.penalty_cluster == 0.0);
  CHECK(at_zero.total == doctest::Approx(ps.g.cwiseAbs().sum()));

  const Matrix b = testing::random_matrix(rng, 3, 2);
  const ClusterState cs2 = testing::random_clusters(rng, 3, 2, 2);
  const ObjectiveBreakdown full = objective_l_dagger(ps, d.x, b, cs2, hp);
  CHECK(full.total ==
        doctest::Approx(full.loss + full.penalty_l1 + full.penalty_cluster));
  CHECK(full.loss >= 0.0);
  CHECK(full.penalty_l1 >= 0.0);
  CHECK(full.penalty_cluster >= 0.0);
}

TEST_CASE("objective is invariant to response location shifts") {
  RngStream rng(12);
  const Dataset d = testing::random_dataset(rng, 8, 3, 2);
  Hyperparams hp;
  hp.lambda = 0.5;
  hp.gamma = 0.8;
  hp.k = 2;
  const Matrix b = testing::random_matrix(rng, 3, 2);
  const ClusterState cs = testing::random_clusters(rng, 3, 2, 2);

  const double base =
      objective_l_dagger(build_pairwise(d), d.x, b, cs, hp).total;
  Dataset shifted = d;
  shifted.y.col(0).array() += 3.5;
  const double moved =
      objective_l_dagger(build_pairwise(shifted), shifted.x, b, cs, hp).total;
  CHECK(moved == doctest::Approx(base).epsilon(1e-12));
}

TEST_CASE("surrogate touches the objective at the anchor") {
  RngStream rng(13);
  SolverConfig cfg;
  for (int trial = 0; trial < 20; ++trial) {
    const Index n = 4 + rng.uniform_int(5);
    const Index p = 1 + rng.uniform_int(3);
    const Index q = 1 + rng.uniform_int(3);
    const int k = 1 + rng.uniform_int(static_cast<int>(q));
    const Dataset d = testing::random_dataset(rng, n, p, q);
    const PairwiseSystem ps = build_pairwise(d);
    Hyperparams hp;
    hp.lambda = 0.4;
    hp.gamma = 0.6;
    hp.k = k;
    const Matrix b = testing::random_matrix(rng, p, q);
    const ClusterState cs = testing::random_clusters(rng, p, q, k);

    const double m = majorizer_m(ps, d.x, b, b, cs, hp, cfg);
    const double l = objective_l_dagger(ps, d.x, b, cs, hp).total;
    CHECK(std::abs(m - l) <= 1e-10 * (1.0 + std::abs(l)));
  }
}

TEST_CASE("surrogate dominates the objective away from the anchor") {
  RngStream rng(14);
  SolverConfig cfg;
  for (int trial = 0; trial < 200; ++trial) {
    const Index n = 4 + rng.uniform_int(5);
    const Index p = 1 + rng.uniform_int(3);
    const Index q = 1 + rng.uniform_int(3);
    const int k = 1 + rng.uniform_int(static_cast<int>(q));
    const Dataset d = testing::random_dataset(rng, n, p, q);
    const PairwiseSystem ps = build_pairwise(d);
    Hyperparams hp;
    hp.lambda = 0.4;
    hp.gamma = 0.6;
    hp.k = k;
    const ClusterState cs = testing::random_clusters(rng, p, q, k);
    const Matrix anchor = testing::random_matrix(rng, p, q);
    const Matrix probe = testing::random_matrix(rng, p, q);

    const double m = majorizer_m(ps, d.x, probe, anchor, cs, hp, cfg);
    const double l = objective_l_dagger(ps, d.x, probe, cs, hp).total;
    CHECK(m >= l - 1e-10);
  }
}

TEST_CASE("surrogate hand value for a single unit pair") {
  // One pair with difference 1 and unit covariate difference, anchored at
  // zero: the quadratic is (1 - b)^2 / 2 + 1/2 and dominates |1 - b|.
  Dataset d;
  d.x = Matrix::Zero(2, 1);
  d.x << 0.5, -0.5;
  d.y = Matrix::Zero(2, 1);
  d.y << 0.5, -0.5;
  const PairwiseSystem ps = build_pairwise(d);
  REQUIRE(ps.m() == 1);
  REQUIRE(ps.r(0, 0) == 1.0);
  REQUIRE(ps.g(0, 0) == 1.0);

  Hyperparams hp;
  hp.lambda = 1e-14;  // negligible penalty
  hp.epsilon = 1.0;
  hp.gamma = 0.0;
  SolverConfig cfg;
  Matrix u(1, 1);
  u << 1;
  const ClusterState cs(u, Matrix::Zero(1, 1));
  const Matrix anchor = Matrix::Zero(1, 1);

  for (double beta : {-1.0, 0.0, 0.3, 1.0, 2.0}) {
    Matrix b(1, 1);
    b << beta;
    const double m = majorizer_m(ps, d.x, b, anchor, cs, hp, cfg);
    const double want = 0.5 * (1.0 - beta) * (1.0 - beta) + 0.5;
    CHECK(m == doctest::Approx(want).epsilon(1e-9));
    CHECK(m >= std::abs(1.0 - beta) - 1e-12);
  }
}
