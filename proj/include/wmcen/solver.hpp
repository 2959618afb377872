#pragma once

#include "wmcen/objective.hpp"
#include "wmcen/pairwise.hpp"
#include "wmcen/types.hpp"

namespace wmcen {

/// Mutable iteration state of the alternating surrogate minimization.
struct MMState {
  Matrix b;         // p x q coefficients
  Matrix w;         // m x q surrogate weights
  Matrix psi_diag;  // p x q diagonal entries of the penalty scaling
  ClusterState clusters;
  double objective = 0.0;
};

/// w_os = 1 / (2 * max(|g_os - r_o . b_s|, weight_clamp_delta)).
Matrix update_weights(const PairwiseSystem& ps, const Matrix& b,
                      const SolverConfig& cfg);

/// Entry (h, s) = 1 / sqrt(2 * (|b_sh| + epsilon)).
Matrix update_psi(const Matrix& b, double epsilon);

/// Solves the normal equations of the surrogate for response d, holding
/// all other coefficient columns and the cluster memberships fixed.
/// Columns before d are expected to carry their freshest values.
Vector update_beta_block(Index d, const PairwiseSystem& ps, const Matrix& x,
                         const MMState& state, const Hyperparams& hp,
                         const SolverConfig& cfg);

/// Reassigns each response to the nearest centroid in the fitted-value
/// metric (ties to the lowest cluster index). Empty clusters are repaired
/// by moving in the response farthest from its own centroid, which also
/// becomes the repaired cluster's centroid.
ClusterState update_clusters(const Matrix& x, const Matrix& b,
                             const ClusterState& cs);

/// v_l = mean of the member coefficient columns. Requires every cluster
/// to be non-empty.
ClusterState update_centroids(const Matrix& b, const ClusterState& cs);

/// Full alternating fit: ridge start, cluster seeding, weighted
/// least-squares sweeps and membership/centroid rounds until the
/// objective decrease drops below cfg.tol or a cap is hit.
FitResult fit(const Dataset& d, const Hyperparams& hp, const SolverConfig& cfg);

/// x_new * b with the per-response intercepts added.
Matrix predict(const Matrix& b, const Vector& intercepts, const Matrix& x_new);

namespace detail {

/// update_beta_block with the Gram matrix of x precomputed.
Vector solve_beta_system(Index d, const PairwiseSystem& ps, const Matrix& xtx,
                         const MMState& state, const Hyperparams& hp,
                         const SolverConfig& cfg);

/// Lloyd clustering of the fitted-value columns x * b, restarted from
/// seeded draws; returns memberships plus member-mean centroids.
ClusterState seed_clusters(const Matrix& x, const Matrix& b, int k,
                           std::uint64_t seed);

}  // namespace detail

}  // namespace wmcen
