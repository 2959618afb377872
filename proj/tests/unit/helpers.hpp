#pragma once

#include <vector>

#include "wmcen/pairwise.hpp"
#include "wmcen/rng.hpp"
#include "wmcen/solver.hpp"
#include "wmcen/types.hpp"

namespace wmcen::testing {

inline Matrix random_matrix(RngStream& rng, Index rows, Index cols,
                            double scale = 1.0) {
  Matrix m(rows, cols);
  for (Index j = 0; j < cols; ++j) {
    for (Index i = 0; i < rows; ++i) m(i, j) = scale * rng.normal();
  }
  return m;
}

inline Dataset random_dataset(RngStream& rng, Index n, Index p, Index q,
                              double noise = 0.5) {
  const Matrix x = random_matrix(rng, n, p);
  const Matrix b = random_matrix(rng, p, q);
  const Matrix y = x * b + noise * random_matrix(rng, n, q);
  return validate_dataset(x, y);
}

/// Valid cluster state with a random non-empty assignment and random
/// centroids.
inline ClusterState random_clusters(RngStream& rng, Index p, Index q, int k) {
  std::vector<int> assign(static_cast<std::size_t>(q));
  // Give each cluster one member first, then spread the rest at random.
  for (int l = 0; l < k; ++l) assign[static_cast<std::size_t>(l)] = l;
  for (Index s = k; s < q; ++s) {
    assign[static_cast<std::size_t>(s)] = rng.uniform_int(k);
  }
  Matrix u = Matrix::Zero(q, k);
  for (Index s = 0; s < q; ++s) u(s, assign[static_cast<std::size_t>(s)]) = 1.0;
  return ClusterState(u, random_matrix(rng, p, k));
}

/// Cluster state whose centroids are the member means of b.
inline ClusterState random_mean_clusters(RngStream& rng, const Matrix& b,
                                         int k) {
  ClusterState cs = random_clusters(rng, b.rows(), b.cols(), k);
  return update_centroids(b, cs);
}

}  // namespace wmcen::testing
