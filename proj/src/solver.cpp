#include "wmcen/solver.hpp"

#include <Eigen/Cholesky>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "wmcen/rng.hpp"
#include "wmcen/stats.hpp"

namespace wmcen {

namespace {

Vector weight_column(const PairwiseSystem& ps, const Vector& beta,
                     Index s, const SolverConfig& cfg) {
  Vector res = ps.g.col(s) - ps.r * beta;
  Vector w(res.size());
  for (Index o = 0; o < res.size(); ++o) {
    w[o] = 1.0 / (2.0 * std::max(std::abs(res[o]), cfg.weight_clamp_delta));
  }
  return w;
}

Vector psi_column(const Vector& beta, double epsilon) {
  Vector psi(beta.size());
  for (Index h = 0; h < beta.size(); ++h) {
    psi[h] = 1.0 / std::sqrt(2.0 * (std::abs(beta[h]) + epsilon));
  }
  return psi;
}

// Membership matrix from an assignment vector.
Matrix assignments_to_u(const std::vector<int>& assign, int k) {
  Matrix u = Matrix::Zero(static_cast<Index>(assign.size()), k);
  for (std::size_t s = 0; s < assign.size(); ++s) {
    u(static_cast<Index>(s), assign[s]) = 1.0;
  }
  return u;
}

Matrix member_means(const Matrix& b, const std::vector<int>& assign, int k) {
  Matrix v = Matrix::Zero(b.rows(), k);
  std::vector<int> counts(static_cast<std::size_t>(k), 0);
  for (std::size_t s = 0; s < assign.size(); ++s) {
    v.col(assign[s]) += b.col(static_cast<Index>(s));
    ++counts[static_cast<std::size_t>(assign[s])];
  }
  for (int l = 0; l < k; ++l) {
    if (counts[static_cast<std::size_t>(l)] == 0) {
      throw std::logic_error("empty cluster while forming centroids");
    }
    v.col(l) /= static_cast<double>(counts[static_cast<std::size_t>(l)]);
  }
  return v;
}

}  // namespace

Matrix update_weights(const PairwiseSystem& ps, const Matrix& b,
                      const SolverConfig& cfg) {
  if (ps.r.cols() != b.rows() || ps.g.cols() != b.cols()) {
    throw std::invalid_argument("weight update dimension mismatch");
  }
  Matrix w(ps.m(), b.cols());
  for (Index s = 0; s < b.cols(); ++s) {
    w.col(s) = weight_column(ps, b.col(s), s, cfg);
  }
  return w;
}

Matrix update_psi(const Matrix& b, double epsilon) {
  if (!(epsilon > 0.0)) {
    throw std::invalid_argument("epsilon must be positive");
  }
  Matrix psi(b.rows(), b.cols());
  for (Index s = 0; s < b.cols(); ++s) {
    psi.col(s) = psi_column(b.col(s), epsilon);
  }
  return psi;
}

namespace detail {

Vector solve_beta_system(Index d, const PairwiseSystem& ps, const Matrix& xtx,
                         const MMState& state, const Hyperparams& hp,
                         const SolverConfig& cfg) {
  const Index p = ps.r.cols();
  const Vector w = state.w.col(d);

  Matrix lhs = 2.0 * (ps.r.transpose() * w.asDiagonal() * ps.r);
  lhs.diagonal() +=
      2.0 * hp.lambda * state.psi_diag.col(d).array().square().matrix();

  Vector rhs = 2.0 * (ps.r.transpose() * (w.array() * ps.g.col(d).array()).matrix());

  if (hp.gamma > 0.0) {
    const int l = state.clusters.assignment(d);
    const double ql =
        static_cast<double>(state.clusters.counts()[static_cast<std::size_t>(l)]);
    lhs += hp.gamma * (1.0 - 1.0 / ql) * xtx;
    if (ql > 1.0) {
      Vector others = Vector::Zero(p);
      for (Index m = 0; m < state.b.cols(); ++m) {
        if (m != d && state.clusters.u()(m, l) == 1.0) {
          others += state.b.col(m);
        }
      }
      rhs += (hp.gamma / ql) * (xtx * others);
    }
  }

  Eigen::LLT<Matrix> llt(lhs);
  if (llt.info() != Eigen::Success) {
    lhs.diagonal().array() += cfg.ridge_jitter * lhs.trace() / static_cast<double>(p);
    llt.compute(lhs);
    if (llt.info() != Eigen::Success) {
      std::ostringstream msg;
      msg << "coefficient update failed for response " << d + 1
          << ": system could not be factorized";
      throw std::runtime_error(msg.str());
    }
  }
  return llt.solve(rhs);
}

ClusterState seed_clusters(const Matrix& x, const Matrix& b, int k,
                           std::uint64_t seed) {
  const Index q = b.cols();
  if (k < 1 || k > q) {
    throw std::invalid_argument("cluster count must be in [1, q]");
  }
  const Matrix fitted = x * b;  // n x q points to cluster

  if (k == 1) {
    std::vector<int> assign(static_cast<std::size_t>(q), 0);
    return ClusterState(assignments_to_u(assign, 1), member_means(b, assign, 1));
  }

  constexpr int kRestarts = 10;
  constexpr int kMaxRounds = 100;
  double best_wcss = std::numeric_limits<double>::infinity();
  std::vector<int> best_assign;

  for (int restart = 0; restart < kRestarts; ++restart) {
    RngStream rng(mix_seed(seed, static_cast<std::uint64_t>(restart)));

    // Draw k distinct response indices as starting centroids.
    std::vector<int> pool(static_cast<std::size_t>(q));
    std::iota(pool.begin(), pool.end(), 0);
    for (int i = 0; i < k; ++i) {
      const int j = i + rng.uniform_int(static_cast<int>(q) - i);
      std::swap(pool[static_cast<std::size_t>(i)], pool[static_cast<std::size_t>(j)]);
    }
    Matrix centers(fitted.rows(), k);
    for (int l = 0; l < k; ++l) centers.col(l) = fitted.col(pool[static_cast<std::size_t>(l)]);

    std::vector<int> assign(static_cast<std::size_t>(q), -1);
    for (int round = 0; round < kMaxRounds; ++round) {
      bool changed = false;
      std::vector<int> counts(static_cast<std::size_t>(k), 0);
      for (Index s = 0; s < q; ++s) {
        int arg = 0;
        double best = (fitted.col(s) - centers.col(0)).squaredNorm();
        for (int l = 1; l < k; ++l) {
          const double dist = (fitted.col(s) - centers.col(l)).squaredNorm();
          if (dist < best) {
            best = dist;
            arg = l;
          }
        }
        if (assign[static_cast<std::size_t>(s)] != arg) changed = true;
        assign[static_cast<std::size_t>(s)] = arg;
        ++counts[static_cast<std::size_t>(arg)];
      }

      // Refill empty clusters with the worst-fitting member of a shared one.
      for (int l = 0; l < k; ++l) {
        if (counts[static_cast<std::size_t>(l)] > 0) continue;
        int worst = -1;
        double worst_dist = -1.0;
        for (Index s = 0; s < q; ++s) {
          const int a = assign[static_cast<std::size_t>(s)];
          if (counts[static_cast<std::size_t>(a)] < 2) continue;
          const double dist = (fitted.col(s) - centers.col(a)).squaredNorm();
          if (dist > worst_dist) {
            worst_dist = dist;
            worst = static_cast<int>(s);
          }
        }
        if (worst < 0) throw std::logic_error("cluster seeding could not repair");
        --counts[static_cast<std::size_t>(assign[static_cast<std::size_t>(worst)])];
        assign[static_cast<std::size_t>(worst)] = l;
        ++counts[static_cast<std::size_t>(l)];
        centers.col(l) = fitted.col(worst);
        changed = true;
      }

      // Recompute centers as member means.
      centers.setZero();
      for (Index s = 0; s < q; ++s) {
        centers.col(assign[static_cast<std::size_t>(s)]) += fitted.col(s);
      }
      for (int l = 0; l < k; ++l) {
        centers.col(l) /= static_cast<double>(counts[static_cast<std::size_t>(l)]);
      }
      if (!changed) break;
    }

    double wcss = 0.0;
    for (Index s = 0; s < q; ++s) {
      wcss += (fitted.col(s) - centers.col(assign[static_cast<std::size_t>(s)]))
                  .squaredNorm();
    }
    if (wcss < best_wcss) {
      best_wcss = wcss;
      best_assign = assign;
    }
  }

  return ClusterState(assignments_to_u(best_assign, k),
                      member_means(b, best_assign, k));
}

}  // namespace detail

Vector update_beta_block(Index d, const PairwiseSystem& ps, const Matrix& x,
                         const MMState& state, const Hyperparams& hp,
                         const SolverConfig& cfg) {
  if (d < 0 || d >= state.b.cols()) {
    throw std::invalid_argument("response index out of range");
  }
  const Matrix xtx = x.transpose() * x;
  return detail::solve_beta_system(d, ps, xtx, state, hp, cfg);
}

ClusterState update_clusters(const Matrix& x, const Matrix& b,
                             const ClusterState& cs) {
  const Index q = b.cols();
  const int k = static_cast<int>(cs.k());
  if (cs.q() != q || cs.v().rows() != b.rows()) {
    throw std::invalid_argument("cluster update dimension mismatch");
  }
  const Matrix fitted = x * b;
  Matrix centers = x * cs.v();
  Matrix v = cs.v();

  std::vector<int> assign(static_cast<std::size_t>(q), 0);
  std::vector<int> counts(static_cast<std::size_t>(k), 0);
  for (Index s = 0; s < q; ++s) {
    int arg = 0;
    double best = (fitted.col(s) - centers.col(0)).squaredNorm();
    for (int l = 1; l < k; ++l) {
      const double dist = (fitted.col(s) - centers.col(l)).squaredNorm();
      if (dist < best) {
        best = dist;
        arg = l;
      }
    }
    assign[static_cast<std::size_t>(s)] = arg;
    ++counts[static_cast<std::size_t>(arg)];
  }

  // An emptied cluster adopts the response farthest from its own centroid;
  // the moved response's coefficients become the new centroid, so its
  // penalty contribution drops to zero and the objective cannot rise.
  for (int l = 0; l < k; ++l) {
    if (counts[static_cast<std::size_t>(l)] > 0) continue;
    int worst = -1;
    double worst_dist = -1.0;
    for (Index s = 0; s < q; ++s) {
      const int a = assign[static_cast<std::size_t>(s)];
      if (counts[static_cast<std::size_t>(a)] < 2) continue;
      const double dist = (fitted.col(s) - centers.col(a)).squaredNorm();
      if (dist > worst_dist) {
        worst_dist = dist;
        worst = static_cast<int>(s);
      }
    }
    if (worst < 0) throw std::logic_error("cluster repair found no donor");
    --counts[static_cast<std::size_t>(assign[static_cast<std::size_t>(worst)])];
    assign[static_cast<std::size_t>(worst)] = l;
    ++counts[static_cast<std::size_t>(l)];
    v.col(l) = b.col(worst);
    centers.col(l) = fitted.col(worst);
  }

  return ClusterState(assignments_to_u(assign, k), std::move(v));
}

ClusterState update_centroids(const Matrix& b, const ClusterState& cs) {
  const int k = static_cast<int>(cs.k());
  std::vector<int> assign(static_cast<std::size_t>(cs.q()));
  for (Index s = 0; s < cs.q(); ++s) {
    assign[static_cast<std::size_t>(s)] = cs.assignment(s);
  }
  return ClusterState(cs.u(), member_means(b, assign, k));
}

FitResult fit(const Dataset& d, const Hyperparams& hp, const SolverConfig& cfg) {
  hp.validate();
  cfg.validate();
  const Index n = d.n();
  const Index p = d.p();
  const Index q = d.q();
  if (d.y.rows() != n) {
    throw std::invalid_argument("x and y row counts differ");
  }
  if (hp.k > q) {
    throw std::invalid_argument("k exceeds the number of responses");
  }

  // Column-center both sides; the pairwise loss never sees locations and
  // intercepts are recovered from raw residuals afterwards.
  Dataset centered;
  centered.x = d.x.rowwise() - d.x.colwise().mean();
  centered.y = d.y.rowwise() - d.y.colwise().mean();

  const PairwiseSystem ps = build_pairwise(centered);
  const Matrix xtx = centered.x.transpose() * centered.x;

  // Ridge start: nonzero, finite, deterministic.
  Matrix start_lhs = xtx;
  start_lhs.diagonal().array() += 0.1 * xtx.trace() / static_cast<double>(p);
  const Matrix b0 =
      start_lhs.llt().solve(centered.x.transpose() * centered.y);

  MMState state{b0, Matrix::Zero(ps.m(), q), Matrix::Zero(p, q),
                detail::seed_clusters(centered.x, b0, hp.k, cfg.seed), 0.0};
  state.objective =
      objective_l_dagger(ps, centered.x, state.b, state.clusters, hp).total;

  std::vector<double> trace{state.objective};
  int total_sweeps = 0;
  int outer = 0;
  bool cap_hit = false;

  for (outer = 1; outer <= cfg.max_outer_iters; ++outer) {
    const double outer_start = state.objective;

    // Coefficient sweeps. Centroids are kept at member means so the
    // recorded objective is the quantity the block update descends on.
    int sweeps = 0;
    while (true) {
      if (sweeps == cfg.max_inner_iters) {
        cap_hit = true;
        break;
      }
      ++sweeps;
      ++total_sweeps;
      const Matrix b_before = state.b;
      for (Index s = 0; s < q; ++s) {
        state.w.col(s) = weight_column(ps, state.b.col(s), s, cfg);
        state.psi_diag.col(s) = psi_column(state.b.col(s), hp.epsilon);
        state.b.col(s) = detail::solve_beta_system(s, ps, xtx, state, hp, cfg);
      }
      state.clusters = update_centroids(state.b, state.clusters);
      const double next =
          objective_l_dagger(ps, centered.x, state.b, state.clusters, hp).total;
      if (next > state.objective) {
        // Roll back a sub-tolerance wobble; the surrogate step is only
        // accepted when it does not increase the objective.
        state.b = b_before;
        state.clusters = update_centroids(state.b, state.clusters);
        break;
      }
      const double decrease = state.objective - next;
      state.objective = next;
      trace.push_back(next);
      if (decrease < cfg.tol) break;
    }

    // Membership / centroid rounds.
    int rounds = 0;
    while (true) {
      if (rounds == cfg.max_inner_iters) {
        cap_hit = true;
        break;
      }
      ++rounds;
      ClusterState reassigned = update_clusters(centered.x, state.b, state.clusters);
      ClusterState updated = update_centroids(state.b, reassigned);
      const double next =
          objective_l_dagger(ps, centered.x, state.b, updated, hp).total;
      if (next > state.objective) break;
      const double decrease = state.objective - next;
      state.clusters = std::move(updated);
      state.objective = next;
      trace.push_back(next);
      if (decrease < cfg.tol) break;
    }

    if (outer_start - state.objective < cfg.tol) break;
  }

  const bool converged = !cap_hit && outer <= cfg.max_outer_iters;

  // Per-response intercept: median of raw training residuals.
  Vector intercepts(q);
  const Matrix raw_resid = d.y - d.x * state.b;
  for (Index s = 0; s < q; ++s) {
    std::vector<double> col(raw_resid.col(s).data(),
                            raw_resid.col(s).data() + n);
    intercepts[s] = median(std::move(col));
  }

  return make_fit_result(std::move(state.b), std::move(intercepts),
                         std::move(state.clusters), std::move(trace),
                         total_sweeps, std::min(outer, cfg.max_outer_iters),
                         converged);
}

Matrix predict(const Matrix& b, const Vector& intercepts, const Matrix& x_new) {
  if (x_new.cols() != b.rows()) {
    std::ostringstream msg;
    msg << "prediction input has " << x_new.cols() << " columns but the model has "
        << b.rows() << " covariates";
    throw std::invalid_argument(msg.str());
  }
  if (intercepts.size() != b.cols()) {
    throw std::invalid_argument("intercept count does not match responses");
  }
  return (x_new * b).rowwise() + intercepts.transpose();
}

}  // namespace wmcen
