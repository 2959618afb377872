#pragma once

#include <utility>

#include "wmcen/pairwise.hpp"
#include "wmcen/types.hpp"

namespace wmcen {

/// Uniform coefficient grid shared by all coefficients.
struct GridSpec {
  double lower = -2.0;
  double upper = 2.0;
  double step = 0.005;
};

/// Exhaustively evaluates the full objective over the coefficient grid
/// with the cluster state held fixed; returns the best coefficient matrix
/// and its objective value. The evaluation here is written directly from
/// the objective's definition and shares no code with the solver path.
/// Guards against grids above 1e7 points; intended for p*q <= 3.
std::pair<Matrix, double> grid_minimize_l_dagger(const PairwiseSystem& ps,
                                                 const Matrix& x,
                                                 const Hyperparams& hp,
                                                 const ClusterState& cs_fixed,
                                                 const GridSpec& grid);

/// Per-response nearest-centroid assignment by direct enumeration, with
/// ties resolved toward the lowest cluster index. Guards q*k <= 20.
Matrix exhaustive_cluster_check(const Matrix& x, const Matrix& b,
                                const Matrix& v_candidates);

}  // namespace wmcen
