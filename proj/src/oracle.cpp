#include "wmcen/oracle.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace wmcen {

namespace {

// Objective evaluation used only by the oracle: plain coefficient loops,
// no shared helpers, so agreement with the solver is an independent check.
double eval_objective(const PairwiseSystem& ps, const Matrix& x,
                      const std::vector<double>& coef, const Hyperparams& hp,
                      const ClusterState& cs) {
  const Index p = ps.r.cols();
  const Index q = ps.g.cols();
  const Index m = ps.r.rows();

  double loss = 0.0;
  for (Index s = 0; s < q; ++s) {
    for (Index o = 0; o < m; ++o) {
      double fit = 0.0;
      for (Index h = 0; h < p; ++h) {
        fit += ps.r(o, h) * coef[static_cast<std::size_t>(s * p + h)];
      }
      loss += std::abs(ps.g(o, s) - fit);
    }
  }

  double pen = 0.0;
  for (std::size_t i = 0; i < coef.size(); ++i) {
    const double a = std::abs(coef[i]);
    pen += a - hp.epsilon * std::log(1.0 + a / hp.epsilon);
  }
  pen *= hp.lambda;

  double clus = 0.0;
  if (hp.gamma > 0.0) {
    for (Index s = 0; s < q; ++s) {
      for (Index l = 0; l < cs.k(); ++l) {
        if (cs.u()(s, l) != 1.0) continue;
        for (Index i = 0; i < x.rows(); ++i) {
          double diff = 0.0;
          for (Index h = 0; h < p; ++h) {
            diff += x(i, h) * (coef[static_cast<std::size_t>(s * p + h)] -
                               cs.v()(h, l));
          }
          clus += diff * diff;
        }
      }
    }
    clus *= 0.5 * hp.gamma;
  }

  return loss + pen + clus;
}

}  // namespace

std::pair<Matrix, double> grid_minimize_l_dagger(const PairwiseSystem& ps,
                                                 const Matrix& x,
                                                 const Hyperparams& hp,
                                                 const ClusterState& cs_fixed,
                                                 const GridSpec& grid) {
  if (!(grid.lower < grid.upper) || !(grid.step > 0.0)) {
    throw std::invalid_argument("grid requires lower < upper and step > 0");
  }
  const Index p = ps.r.cols();
  const Index q = ps.g.cols();
  const std::size_t n_coef = static_cast<std::size_t>(p * q);

  const std::size_t points_per_axis = static_cast<std::size_t>(
      std::floor((grid.upper - grid.lower) / grid.step + 1e-9)) + 1;
  double total = 1.0;
  for (std::size_t i = 0; i < n_coef; ++i) total *= static_cast<double>(points_per_axis);
  if (total > 1e7) {
    throw std::invalid_argument("grid exceeds the 1e7-point guard");
  }

  std::vector<double> axis(points_per_axis);
  for (std::size_t i = 0; i < points_per_axis; ++i) {
    axis[i] = grid.lower + static_cast<double>(i) * grid.step;
  }

  std::vector<std::size_t> odo(n_coef, 0);
  std::vector<double> coef(n_coef, axis[0]);
  std::vector<double> best_coef = coef;
  double best = std::numeric_limits<double>::infinity();

  while (true) {
    const double val = eval_objective(ps, x, coef, hp, cs_fixed);
    if (val < best) {
      best = val;
      best_coef = coef;
    }
    // Advance the odometer.
    std::size_t pos = 0;
    while (pos < n_coef) {
      if (++odo[pos] < points_per_axis) {
        coef[pos] = axis[odo[pos]];
        break;
      }
      odo[pos] = 0;
      coef[pos] = axis[0];
      ++pos;
    }
    if (pos == n_coef) break;
  }

  Matrix arg(p, q);
  for (Index s = 0; s < q; ++s) {
    for (Index h = 0; h < p; ++h) {
      arg(h, s) = best_coef[static_cast<std::size_t>(s * p + h)];
    }
  }
  return {arg, best};
}

Matrix exhaustive_cluster_check(const Matrix& x, const Matrix& b,
                                const Matrix& v_candidates) {
  const Index q = b.cols();
  const Index k = v_candidates.cols();
  if (q * k > 20) {
    throw std::invalid_argument("exhaustive check guard exceeded (q*k > 20)");
  }
  if (x.cols() != b.rows() || v_candidates.rows() != b.rows()) {
    throw std::invalid_argument("cluster check dimension mismatch");
  }

  Matrix u = Matrix::Zero(q, k);
  for (Index s = 0; s < q; ++s) {
    Index arg = 0;
    double best = std::numeric_limits<double>::infinity();
    for (Index l = 0; l < k; ++l) {
      double dist = 0.0;
      for (Index i = 0; i < x.rows(); ++i) {
        double diff = 0.0;
        for (Index h = 0; h < b.rows(); ++h) {
          diff += x(i, h) * (b(h, s) - v_candidates(h, l));
        }
        dist += diff * diff;
      }
      if (dist < best) {
        best = dist;
        arg = l;
      }
    }
    u(s, arg) = 1.0;
  }
  return u;
}

}  // namespace wmcen
