#include "wmcen/types.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace wmcen {

namespace {

// Reports the first non-finite entry of m, labelled with the matrix name.
void require_finite(const Matrix& m, const char* name) {
  for (Index j = 0; j < m.cols(); ++j) {
    for (Index i = 0; i < m.rows(); ++i) {
      if (!std::isfinite(m(i, j))) {
        std::ostringstream msg;
        msg << name << " has a non-finite entry at row " << i + 1
            << ", column " << j + 1;
        throw std::invalid_argument(msg.str());
      }
    }
  }
}

}  // namespace

Dataset validate_dataset(Matrix x, Matrix y) {
  if (x.rows() != y.rows()) {
    std::ostringstream msg;
    msg << "x and y must have the same number of rows (got " << x.rows()
        << " and " << y.rows() << ")";
    throw std::invalid_argument(msg.str());
  }
  if (x.rows() < 2) {
    throw std::invalid_argument("at least 2 samples are required");
  }
  if (x.cols() < 1 || y.cols() < 1) {
    throw std::invalid_argument("x and y must each have at least one column");
  }
  require_finite(x, "x");
  require_finite(y, "y");
  return Dataset{std::move(x), std::move(y)};
}

void Hyperparams::validate() const {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) {
    throw std::invalid_argument("lambda must be positive and finite");
  }
  if (!(gamma >= 0.0) || !std::isfinite(gamma)) {
    throw std::invalid_argument("gamma must be non-negative and finite");
  }
  if (k < 1) {
    throw std::invalid_argument("k must be at least 1");
  }
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) {
    throw std::invalid_argument("epsilon must be positive and finite");
  }
}

void SolverConfig::validate() const {
  if (!(tol > 0.0)) {
    throw std::invalid_argument("tol must be positive");
  }
  if (max_inner_iters < 1 || max_outer_iters < 1) {
    throw std::invalid_argument("iteration caps must be at least 1");
  }
  if (!(weight_clamp_delta > 0.0)) {
    throw std::invalid_argument("weight_clamp_delta must be positive");
  }
  if (ridge_jitter < 0.0) {
    throw std::invalid_argument("ridge_jitter must be non-negative");
  }
}

ClusterState::ClusterState(Matrix u, Matrix v)
    : u_(std::move(u)), v_(std::move(v)) {
  if (u_.rows() < 1 || u_.cols() < 1) {
    throw std::invalid_argument("membership matrix must be non-empty");
  }
  if (v_.cols() != u_.cols()) {
    throw std::invalid_argument(
        "centroid matrix must have one column per cluster");
  }
  counts_.assign(static_cast<std::size_t>(u_.cols()), 0);
  for (Index s = 0; s < u_.rows(); ++s) {
    int hits = 0;
    for (Index l = 0; l < u_.cols(); ++l) {
      const double e = u_(s, l);
      if (e == 1.0) {
        ++hits;
        ++counts_[static_cast<std::size_t>(l)];
      } else if (e != 0.0) {
        std::ostringstream msg;
        msg << "membership entries must be 0 or 1 (row " << s + 1
            << ", column " << l + 1 << ")";
        throw std::invalid_argument(msg.str());
      }
    }
    if (hits != 1) {
      std::ostringstream msg;
      msg << "membership row " << s + 1 << " must sum to exactly 1";
      throw std::invalid_argument(msg.str());
    }
  }
  require_finite(v_, "centroids");
}

int ClusterState::assignment(Index s) const {
  for (Index l = 0; l < u_.cols(); ++l) {
    if (u_(s, l) == 1.0) return static_cast<int>(l);
  }
  throw std::logic_error("membership row has no assigned cluster");
}

FitResult make_fit_result(Matrix b, Vector intercepts, ClusterState clusters,
                          std::vector<double> objective_trace, int inner_iters,
                          int outer_iters, bool converged) {
  require_finite(b, "coefficients");
  for (std::size_t i = 0; i + 1 < objective_trace.size(); ++i) {
    if (objective_trace[i + 1] > objective_trace[i] + 1e-10) {
      std::ostringstream msg;
      msg << "objective trace increased at step " << i + 1 << " ("
          << objective_trace[i] << " -> " << objective_trace[i + 1] << ")";
      throw std::logic_error(msg.str());
    }
  }
  return FitResult{std::move(b),
                   std::move(intercepts),
                   std::move(clusters),
                   std::move(objective_trace),
                   inner_iters,
                   outer_iters,
                   converged};
}

}  // namespace wmcen
