#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <vector>

namespace wmcen {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

/// Covariate matrix x (n x p) paired with a response matrix y (n x q).
/// Use validate_dataset() to construct; it rejects shape mismatches and
/// non-finite entries.
struct Dataset {
  Matrix x;
  Matrix y;

  Index n() const { return x.rows(); }
  Index p() const { return x.cols(); }
  Index q() const { return y.cols(); }
};

Dataset validate_dataset(Matrix x, Matrix y);

/// Tuning parameters of the penalized rank-loss model.
struct Hyperparams {
  double lambda = 1.0;    // L1 weight, > 0
  double gamma = 0.0;     // cluster coupling weight, >= 0
  int k = 1;              // number of response clusters, >= 1
  double epsilon = 1e-6;  // smoothing parameter of the perturbed L1 penalty

  void validate() const;  // throws std::invalid_argument on violation
};

/// Solver knobs. Defaults terminate on an absolute objective decrease
/// below tol, with hard iteration caps as a backstop.
struct SolverConfig {
  double tol = 1e-6;
  int max_inner_iters = 500;
  int max_outer_iters = 100;
  double weight_clamp_delta = 1e-8;  // floor on |residual difference| in the weights
  double ridge_jitter = 1e-10;       // relative diagonal bump on factorization failure
  std::uint64_t seed = 0;            // initialization randomness (cluster seeding)

  void validate() const;
};

/// Binary membership matrix u (q x k), centroid coefficients v (p x k),
/// and per-cluster member counts. Every response belongs to exactly one
/// cluster and no cluster may be empty once fitting has started.
class ClusterState {
 public:
  ClusterState(Matrix u, Matrix v);

  const Matrix& u() const { return u_; }
  const Matrix& v() const { return v_; }
  const std::vector<int>& counts() const { return counts_; }

  Index q() const { return u_.rows(); }
  Index k() const { return u_.cols(); }

  /// Index of the cluster response s belongs to.
  int assignment(Index s) const;

 private:
  Matrix u_;
  Matrix v_;
  std::vector<int> counts_;
};

/// Output of a fit: coefficients, intercepts, final cluster state and
/// the objective value after every accepted update.
struct FitResult {
  Matrix b;            // p x q
  Vector intercepts;   // q, median of raw training residuals per response
  ClusterState clusters;
  std::vector<double> objective_trace;
  int inner_iters = 0;
  int outer_iters = 0;
  bool converged = false;
};

/// Validates the descent and finiteness invariants; throws on violation.
FitResult make_fit_result(Matrix b, Vector intercepts, ClusterState clusters,
                          std::vector<double> objective_trace, int inner_iters,
                          int outer_iters, bool converged);

}  // namespace wmcen
