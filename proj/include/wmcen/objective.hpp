#pragma once

#include "wmcen/pairwise.hpp"
#include "wmcen/types.hpp"

namespace wmcen {

/// Additive decomposition of the full objective.
struct ObjectiveBreakdown {
  double loss = 0.0;             // pairwise absolute-residual term
  double penalty_l1 = 0.0;       // perturbed lasso term
  double penalty_cluster = 0.0;  // k-means coupling term
  double total = 0.0;
};

/// Sum over responses and pairs of |g_os - r_o . beta_s|.
double wilcoxon_dispersion(const PairwiseSystem& ps, const Matrix& b);

/// Rank-weighted dispersion sqrt(12) * sum_i [R(e_i)/(n+1) - 1/2] e_i,
/// with average ranks on ties. Proportional to the pairwise dispersion of
/// the same residuals by the factor 2(n+1)/sqrt(12) when there are no ties.
double jaeckel_dispersion(const Vector& residuals);

/// lambda * sum_{s,h} (|b_sh| - eps * log(1 + |b_sh|/eps)).
double perturbed_l1(const Matrix& b, double lambda, double epsilon);

/// (gamma/2) * sum_{s,l} u_sl ||X b_s - X v_l||^2.
double cluster_penalty(const Matrix& x, const Matrix& b,
                       const ClusterState& cs, double gamma);

ObjectiveBreakdown objective_l_dagger(const PairwiseSystem& ps,
                                      const Matrix& x, const Matrix& b,
                                      const ClusterState& cs,
                                      const Hyperparams& hp);

/// Quadratic surrogate expanded at b_anchor. Dominates the objective
/// everywhere and touches it at the anchor; the anchor-dependent constant
/// is included so the tangency holds exactly (up to the weight clamp).
double majorizer_m(const PairwiseSystem& ps, const Matrix& x, const Matrix& b,
                   const Matrix& b_anchor, const ClusterState& cs,
                   const Hyperparams& hp, const SolverConfig& cfg);

}  // namespace wmcen
