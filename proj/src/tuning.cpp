#include "wmcen/tuning.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "wmcen/rng.hpp"
#include "wmcen/solver.hpp"
#include "wmcen/stats.hpp"

namespace wmcen {

namespace {

double criterion_value(const Matrix& y_true, const Matrix& y_pred,
                       CvCriterion criterion) {
  if (criterion == CvCriterion::mean_squared) {
    return (y_true - y_pred).squaredNorm() /
           static_cast<double>(y_true.size());
  }
  std::vector<double> abs_err;
  abs_err.reserve(static_cast<std::size_t>(y_true.size()));
  for (Index s = 0; s < y_true.cols(); ++s) {
    for (Index i = 0; i < y_true.rows(); ++i) {
      abs_err.push_back(std::abs(y_true(i, s) - y_pred(i, s)));
    }
  }
  return median(std::move(abs_err));
}

Dataset take_rows(const Dataset& d, const std::vector<int>& rows) {
  Dataset out;
  out.x.resize(static_cast<Index>(rows.size()), d.p());
  out.y.resize(static_cast<Index>(rows.size()), d.q());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    out.x.row(static_cast<Index>(i)) = d.x.row(rows[i]);
    out.y.row(static_cast<Index>(i)) = d.y.row(rows[i]);
  }
  return out;
}

// Candidate order for tie-breaking: prefer larger lambda, then larger
// gamma, then smaller k.
bool preferred(const ScoreEntry& challenger, const ScoreEntry& incumbent) {
  if (challenger.score != incumbent.score) {
    return challenger.score < incumbent.score;
  }
  if (challenger.hp.lambda != incumbent.hp.lambda) {
    return challenger.hp.lambda > incumbent.hp.lambda;
  }
  if (challenger.hp.gamma != incumbent.hp.gamma) {
    return challenger.hp.gamma > incumbent.hp.gamma;
  }
  return challenger.hp.k < incumbent.hp.k;
}

}  // namespace

std::vector<std::vector<int>> kfold_split(int n, int folds, std::uint64_t seed) {
  if (folds < 2 || folds > n) {
    throw std::invalid_argument("folds must lie in [2, n]");
  }
  std::vector<int> perm(static_cast<std::size_t>(n));
  std::iota(perm.begin(), perm.end(), 0);
  RngStream rng(seed);
  for (int i = n - 1; i > 0; --i) {
    const int j = rng.uniform_int(i + 1);
    std::swap(perm[static_cast<std::size_t>(i)], perm[static_cast<std::size_t>(j)]);
  }

  std::vector<std::vector<int>> out(static_cast<std::size_t>(folds));
  const int base = n / folds;
  const int rem = n % folds;
  std::size_t pos = 0;
  for (int f = 0; f < folds; ++f) {
    const int size = base + (f < rem ? 1 : 0);
    auto& fold = out[static_cast<std::size_t>(f)];
    fold.assign(perm.begin() + static_cast<long>(pos),
                perm.begin() + static_cast<long>(pos) + size);
    std::sort(fold.begin(), fold.end());
    pos += static_cast<std::size_t>(size);
  }
  return out;
}

double cv_score(const Dataset& d, const Hyperparams& hp,
                const SolverConfig& cfg, int folds, CvCriterion criterion,
                std::uint64_t seed, std::vector<std::string>* warnings) {
  const auto split = kfold_split(static_cast<int>(d.n()), folds, seed);

  std::vector<char> held(static_cast<std::size_t>(d.n()), 0);
  double sum = 0.0;
  for (std::size_t f = 0; f < split.size(); ++f) {
    std::fill(held.begin(), held.end(), 0);
    for (int i : split[f]) held[static_cast<std::size_t>(i)] = 1;
    std::vector<int> train_rows;
    train_rows.reserve(static_cast<std::size_t>(d.n()) - split[f].size());
    for (int i = 0; i < static_cast<int>(d.n()); ++i) {
      if (!held[static_cast<std::size_t>(i)]) train_rows.push_back(i);
    }

    try {
      const Dataset train = take_rows(d, train_rows);
      const Dataset test = take_rows(d, split[f]);
      const FitResult fr = fit(train, hp, cfg);
      const Matrix pred = predict(fr.b, fr.intercepts, test.x);
      sum += criterion_value(test.y, pred, criterion);
    } catch (const std::exception& e) {
      if (warnings != nullptr) {
        std::ostringstream msg;
        msg << "fold " << f + 1 << " failed for lambda=" << hp.lambda
            << " gamma=" << hp.gamma << " k=" << hp.k << ": " << e.what();
        warnings->push_back(msg.str());
      }
      return std::numeric_limits<double>::infinity();
    }
  }
  return sum / static_cast<double>(split.size());
}

GridSearchResult grid_search(const Dataset& d, const TuningGrid& grid,
                             const SolverConfig& cfg) {
  if (grid.lambdas.empty() || grid.gammas.empty() || grid.ks.empty()) {
    throw std::invalid_argument("tuning grid axes must be non-empty");
  }
  for (int k : grid.ks) {
    if (k < 1 || k > d.q()) {
      throw std::invalid_argument("grid k values must lie in [1, q]");
    }
  }

  GridSearchResult out;
  bool have_best = false;
  ScoreEntry best_entry;
  for (double lambda : grid.lambdas) {
    for (double gamma : grid.gammas) {
      for (int k : grid.ks) {
        Hyperparams hp;
        hp.lambda = lambda;
        hp.gamma = gamma;
        hp.k = k;
        hp.validate();
        ScoreEntry entry;
        entry.hp = hp;
        entry.score = cv_score(d, hp, cfg, grid.folds, grid.criterion,
                               grid.seed, &out.warnings);
        out.table.push_back(entry);
        if (std::isfinite(entry.score) &&
            (!have_best || preferred(entry, best_entry))) {
          best_entry = entry;
          have_best = true;
        }
      }
    }
  }
  if (!have_best) {
    throw std::runtime_error("tuning failed: every candidate scored infinite");
  }
  out.best = best_entry.hp;
  return out;
}

TuningGrid make_default_grid(const Dataset& d, const SolverConfig& cfg) {
  // Effective-zero threshold tied to the response scale.
  const Matrix yc = d.y.rowwise() - d.y.colwise().mean();
  const double y_scale =
      std::sqrt(yc.squaredNorm() / static_cast<double>(yc.size()));
  const double zero_tol = 1e-3 * std::max(y_scale, 1e-12);

  Hyperparams probe;
  probe.gamma = 0.0;
  probe.k = 1;
  const auto shrinks_to_zero = [&](double lambda) {
    probe.lambda = lambda;
    const FitResult fr = fit(d, probe, cfg);
    return fr.b.cwiseAbs().maxCoeff() <= zero_tol;
  };

  double hi = 1.0;
  int expansions = 0;
  while (!shrinks_to_zero(hi) && expansions < 60) {
    hi *= 4.0;
    ++expansions;
  }
  double lo = hi / 4.0;
  for (int iter = 0; iter < 30 && hi / lo > 1.05; ++iter) {
    const double mid = std::sqrt(lo * hi);
    if (shrinks_to_zero(mid)) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  const double lambda_max = hi;

  TuningGrid grid;
  const int points = 10;
  for (int i = 0; i < points; ++i) {
    const double expo =
        -3.0 + 4.0 * static_cast<double>(i) / static_cast<double>(points - 1);
    const double v = lambda_max * std::pow(10.0, expo);
    grid.lambdas.push_back(v);
    grid.gammas.push_back(v);
  }
  if (d.q() >= 2) grid.ks.push_back(2);
  if (d.q() >= 3) grid.ks.push_back(3);
  if (grid.ks.empty()) grid.ks.push_back(1);
  grid.folds = 5;
  grid.criterion = CvCriterion::median_ape;
  grid.seed = cfg.seed;
  return grid;
}

}  // namespace wmcen
