#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "wmcen/types.hpp"

namespace wmcen {

enum class CvCriterion { median_ape, mean_squared };

/// Cross-validation search space. ks entries must not exceed the number
/// of responses of the dataset being tuned.
struct TuningGrid {
  std::vector<double> lambdas;
  std::vector<double> gammas;
  std::vector<int> ks;
  int folds = 5;
  CvCriterion criterion = CvCriterion::median_ape;
  std::uint64_t seed = 0;
};

/// Disjoint index sets covering 0..n-1 with sizes differing by at most
/// one; deterministic in the seed.
std::vector<std::vector<int>> kfold_split(int n, int folds, std::uint64_t seed);

/// Mean over folds of the held-out criterion for one hyperparameter
/// candidate. A failing fold fit scores the candidate +infinity; a note is
/// appended to `warnings` when provided.
double cv_score(const Dataset& d, const Hyperparams& hp,
                const SolverConfig& cfg, int folds, CvCriterion criterion,
                std::uint64_t seed, std::vector<std::string>* warnings = nullptr);

struct ScoreEntry {
  Hyperparams hp;
  double score = 0.0;
};

struct GridSearchResult {
  Hyperparams best;
  std::vector<ScoreEntry> table;
  std::vector<std::string> warnings;
};

/// Full grid search; ties prefer larger lambda, then larger gamma, then
/// smaller k. Throws if every candidate fails.
GridSearchResult grid_search(const Dataset& d, const TuningGrid& grid,
                             const SolverConfig& cfg);

/// Default grid: both the lambda and gamma axes are 10 points log-spaced
/// across [1e-3, 10] times a data-driven lambda_max (the smallest lambda
/// that drives the un-clustered fit to zero coefficients, located by
/// bisection); k candidates are {2, 3} capped at q.
TuningGrid make_default_grid(const Dataset& d, const SolverConfig& cfg);

}  // namespace wmcen
