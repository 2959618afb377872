#include <doctest.h>

#include <limits>
#include <stdexcept>
#include <string>

#include "wmcen/types.hpp"

using namespace wmcen;

TEST_CASE("validate_dataset accepts well-formed input") {
  Matrix x(3, 2);
  x << 1, 0, 0, 1, 1, 1;
  Matrix y(3, 1);
  y << 2, 2, 2;
  const Dataset d = validate_dataset(x, y);
  CHECK(d.n() == 3);
  CHECK(d.p() == 2);
  CHECK(d.q() == 1);
}

TEST_CASE("validate_dataset rejects row-count mismatch") {
  CHECK_THROWS_AS(validate_dataset(Matrix::Zero(3, 2), Matrix::Zero(4, 1)),
                  std::invalid_argument);
}

TEST_CASE("validate_dataset names the non-finite entry") {
  Matrix x = Matrix::Zero(3, 2);
  Matrix y = Matrix::Zero(3, 1);
  y(1, 0) = std::numeric_limits<double>::quiet_NaN();
  try {
    validate_dataset(x, y);
    FAIL("expected a throw");
  } catch (const std::invalid_argument& e) {
    const std::string msg = e.what();
    CHECK(msg.find("row 2") != std::string::npos);
    CHECK(msg.find("column 1") != std::string::npos);
  }
}

TEST_CASE("validate_dataset rejects degenerate shapes") {
  CHECK_THROWS(validate_dataset(Matrix::Zero(1, 2), Matrix::Zero(1, 1)));
}

TEST_CASE("hyperparameter invariants") {
  Hyperparams hp;
  CHECK_NOTHROW(hp.validate());
  SUBCASE("lambda must be positive") {
    hp.lambda = 0.0;
    CHECK_THROWS_AS(hp.validate(), std::invalid_argument);
  }
  SUBCASE("gamma may be zero but not negative") {
    hp.gamma = 0.0;
    CHECK_NOTHROW(hp.validate());
    hp.gamma = -1.0;
    CHECK_THROWS_AS(hp.validate(), std::invalid_argument);
  }
  SUBCASE("k at least one") {
    hp.k = 0;
    CHECK_THROWS_AS(hp.validate(), std::invalid_argument);
  }
  SUBCASE("epsilon positive") {
    hp.epsilon = 0.0;
    CHECK_THROWS_AS(hp.validate(), std::invalid_argument);
  }
}

TEST_CASE("solver config invariants") {
  SolverConfig cfg;
  CHECK_NOTHROW(cfg.validate());
  SUBCASE("tol") {
    cfg.tol = 0.0;
    CHECK_THROWS(cfg.validate());
  }
  SUBCASE("caps") {
    cfg.max_inner_iters = 0;
    CHECK_THROWS(cfg.validate());
  }
  SUBCASE("clamp") {
    cfg.weight_clamp_delta = 0.0;
    CHECK_THROWS(cfg.validate());
  }
}

TEST_CASE("cluster state checks membership structure") {
  Matrix v = Matrix::Zero(2, 2);

  SUBCASE("valid two-cluster state") {
    Matrix u(3, 2);
    u << 1, 0, 0, 1, 1, 0;
    const ClusterState cs(u, v);
    CHECK(cs.counts() == std::vector<int>{2, 1});
    CHECK(cs.assignment(0) == 0);
    CHECK(cs.assignment(1) == 1);
  }
  SUBCASE("row summing to zero is rejected") {
    Matrix u = Matrix::Zero(3, 2);
    u(0, 0) = 1;
    u(1, 1) = 1;
    CHECK_THROWS_AS(ClusterState(u, v), std::invalid_argument);
  }
  SUBCASE("row with two memberships is rejected") {
    Matrix u = Matrix::Zero(3, 2);
    u.setOnes();
    CHECK_THROWS_AS(ClusterState(u, v), std::invalid_argument);
  }
  SUBCASE("fractional membership is rejected") {
    Matrix u = Matrix::Zero(3, 2);
    u.col(0).setConstant(0.5);
    u.col(1).setConstant(0.5);
    CHECK_THROWS_AS(ClusterState(u, v), std::invalid_argument);
  }
}

TEST_CASE("fit result rejects an increasing objective trace") {
  const Matrix b = Matrix::Zero(2, 1);
  const Vector icpt = Vector::Zero(1);
  Matrix u(1, 1);
  u << 1;
  const ClusterState cs(u, Matrix::Zero(2, 1));

  CHECK_NOTHROW(make_fit_result(b, icpt, cs, {3.0, 2.0, 2.0}, 1, 1, true));
  CHECK_THROWS_AS(make_fit_result(b, icpt, cs, {2.0, 2.5}, 1, 1, true),
                  std::logic_error);
  // Sub-tolerance wobble is allowed.
  CHECK_NOTHROW(make_fit_result(b, icpt, cs, {2.0, 2.0 + 5e-11}, 1, 1, true));
}

TEST_CASE("fit result rejects non-finite coefficients") {
  Matrix b = Matrix::Zero(2, 1);
  b(0, 0) = std::numeric_limits<double>::infinity();
  Matrix u(1, 1);
  u << 1;
  const ClusterState cs(u, Matrix::Zero(2, 1));
  CHECK_THROWS(make_fit_result(b, Vector::Zero(1), cs, {1.0}, 1, 1, true));
}
