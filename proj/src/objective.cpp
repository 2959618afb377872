#include "wmcen/objective.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace wmcen {

namespace {

void require_cols(const PairwiseSystem& ps, const Matrix& b) {
  if (ps.r.cols() != b.rows() || ps.g.cols() != b.cols()) {
    throw std::invalid_argument(
        "coefficient matrix does not match the pairwise system dimensions");
  }
}

}  // namespace

double wilcoxon_dispersion(const PairwiseSystem& ps, const Matrix& b) {
  require_cols(ps, b);
  return (ps.g - ps.r * b).array().abs().sum();
}

double jaeckel_dispersion(const Vector& residuals) {
  const Index n = residuals.size();
  if (n < 2) {
    throw std::invalid_argument("at least 2 residuals are required");
  }
  std::vector<Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Index{0});
  std::sort(order.begin(), order.end(),
            [&](Index a, Index c) { return residuals[a] < residuals[c]; });

  // Average ranks over tied runs.
  Vector rank(n);
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i;
    while (j + 1 < order.size() &&
           residuals[order[j + 1]] == residuals[order[i]]) {
      ++j;
    }
    const double avg = (static_cast<double>(i + 1) + static_cast<double>(j + 1)) / 2.0;
    for (std::size_t t = i; t <= j; ++t) rank[order[t]] = avg;
    i = j + 1;
  }

  double sum = 0.0;
  const double np1 = static_cast<double>(n + 1);
  for (Index t = 0; t < n; ++t) {
    sum += (rank[t] / np1 - 0.5) * residuals[t];
  }
  return std::sqrt(12.0) * sum;
}

double perturbed_l1(const Matrix& b, double lambda, double epsilon) {
  if (!(lambda > 0.0) || !(epsilon > 0.0)) {
    throw std::invalid_argument("lambda and epsilon must be positive");
  }
  double sum = 0.0;
  for (Index s = 0; s < b.cols(); ++s) {
    for (Index h = 0; h < b.rows(); ++h) {
      const double a = std::abs(b(h, s));
      sum += a - epsilon * std::log1p(a / epsilon);
    }
  }
  return lambda * sum;
}

double cluster_penalty(const Matrix& x, const Matrix& b,
                       const ClusterState& cs, double gamma) {
  if (x.cols() != b.rows() || b.cols() != cs.q() || cs.v().rows() != b.rows()) {
    throw std::invalid_argument("cluster penalty dimension mismatch");
  }
  if (gamma == 0.0) return 0.0;
  const Matrix fitted = x * b;        // n x q
  const Matrix centers = x * cs.v();  // n x k
  double sum = 0.0;
  for (Index s = 0; s < b.cols(); ++s) {
    const int l = cs.assignment(s);
    sum += (fitted.col(s) - centers.col(l)).squaredNorm();
  }
  return 0.5 * gamma * sum;
}

ObjectiveBreakdown objective_l_dagger(const PairwiseSystem& ps,
                                      const Matrix& x, const Matrix& b,
                                      const ClusterState& cs,
                                      const Hyperparams& hp) {
  ObjectiveBreakdown out;
  out.loss = wilcoxon_dispersion(ps, b);
  out.penalty_l1 = perturbed_l1(b, hp.lambda, hp.epsilon);
  out.penalty_cluster = cluster_penalty(x, b, cs, hp.gamma);
  out.total = out.loss + out.penalty_l1 + out.penalty_cluster;
  return out;
}

double majorizer_m(const PairwiseSystem& ps, const Matrix& x, const Matrix& b,
                   const Matrix& b_anchor, const ClusterState& cs,
                   const Hyperparams& hp, const SolverConfig& cfg) {
  require_cols(ps, b);
  if (b_anchor.rows() != b.rows() || b_anchor.cols() != b.cols()) {
    throw std::invalid_argument("anchor shape does not match coefficients");
  }

  const Matrix res = ps.g - ps.r * b;
  const Matrix res_anchor = ps.g - ps.r * b_anchor;

  // Loss surrogate: w_os |res_os|^2 plus the matching anchor constant so
  // that at b = b_anchor the two halves rebuild |res_os(anchor)|.
  double loss_part = 0.0;
  for (Index s = 0; s < b.cols(); ++s) {
    for (Index o = 0; o < ps.m(); ++o) {
      const double denom =
          std::max(std::abs(res_anchor(o, s)), cfg.weight_clamp_delta);
      const double w = 1.0 / (2.0 * denom);
      loss_part += w * res(o, s) * res(o, s) + 0.5 * denom;
    }
  }

  // Penalty surrogate: quadratic expansion of the perturbed L1 term at the
  // anchor, written as ||Psi_s b_s||^2 plus its anchor constant.
  double pen_part = 0.0;
  for (Index s = 0; s < b.cols(); ++s) {
    for (Index h = 0; h < b.rows(); ++h) {
      const double at = std::abs(b_anchor(h, s));
      const double denom = 2.0 * (at + hp.epsilon);
      pen_part += b(h, s) * b(h, s) / denom;
      pen_part += at - hp.epsilon * std::log1p(at / hp.epsilon) - at * at / denom;
    }
  }
  pen_part *= hp.lambda;

  return loss_part + pen_part + cluster_penalty(x, b, cs, hp.gamma);
}

}  // namespace wmcen
