#include "wmcen/simgen.hpp"

#include <Eigen/Cholesky>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <stdexcept>
#include <thread>

#include "wmcen/solver.hpp"

namespace wmcen {

namespace {

// Substream labels per replication.
enum StreamPurpose : std::uint64_t {
  kTrainX = 1,
  kTrainErrors = 2,
  kTestX = 3,
  kTestErrors = 4,
  kCvSplit = 5,
  kSolver = 6,
};

Matrix sample_gaussian_rows(const Matrix& chol_lower, Index n, RngStream& rng) {
  const Index p = chol_lower.rows();
  Matrix x(n, p);
  Vector z(p);
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < p; ++j) z[j] = rng.normal();
    x.row(i) = (chol_lower * z).transpose();
  }
  return x;
}

}  // namespace

ErrorKind error_kind_from_string(const std::string& name) {
  if (name == "normal" || name == "1") return ErrorKind::normal;
  if (name == "mixture" || name == "2") return ErrorKind::mixture;
  if (name == "t4" || name == "3") return ErrorKind::t4;
  if (name == "cauchy" || name == "4") return ErrorKind::cauchy;
  throw std::invalid_argument("unknown error kind: " + name);
}

std::string to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::normal: return "normal";
    case ErrorKind::mixture: return "mixture";
    case ErrorKind::t4: return "t4";
    case ErrorKind::cauchy: return "cauchy";
  }
  throw std::logic_error("unreachable");
}

void SimulationSpec::validate() const {
  if (n_train < 2 || n_test < 1 || reps < 1) {
    throw std::invalid_argument("sample counts and reps must be positive");
  }
  if (allow_nonstandard) return;
  if (p != 12 && p != 100) {
    throw std::invalid_argument("p must be 12 or 100");
  }
  const bool eta_ok =
      eta == 0.25 || eta == 0.5 || eta == 0.75 || eta == 1.0;
  if (!eta_ok) {
    throw std::invalid_argument("eta must be one of 0.25, 0.5, 0.75, 1.0");
  }
  const bool xi_ok = xi == 0.02 || xi == 0.05 || xi == 0.10;
  if (!xi_ok) {
    throw std::invalid_argument("xi must be one of 0.02, 0.05, 0.10");
  }
  if (n_train != 50 || n_test != 1000) {
    throw std::invalid_argument(
        "standard cells use 50 training and 1000 test samples");
  }
}

Matrix build_covariance(int p) {
  if (p == 12) {
    Matrix sigma = Matrix::Constant(12, 12, 0.7);
    sigma.diagonal().setOnes();
    return sigma;
  }
  if (p == 100) {
    Matrix sigma = Matrix::Zero(100, 100);
    sigma.topLeftCorner(12, 12).setConstant(0.7);
    sigma.topLeftCorner(12, 12).diagonal().setOnes();
    sigma.bottomRightCorner(88, 88).setIdentity();
    return sigma;
  }
  throw std::invalid_argument("covariance is defined for p = 12 or p = 100");
}

Matrix build_true_coefficients(int p, double eta, double xi) {
  const int block_rows = (p == 12) ? 4 : (p == 100) ? 10 : 0;
  if (block_rows == 0) {
    throw std::invalid_argument("true coefficients need p = 12 or p = 100");
  }
  Matrix b = Matrix::Zero(p, 9);
  for (int blk = 0; blk < 3; ++blk) {
    const int r0 = blk * block_rows;
    const int c0 = blk * 3;
    b.block(r0, c0, block_rows, 1).setConstant(eta - xi);
    b.block(r0, c0 + 1, block_rows, 1).setConstant(eta);
    b.block(r0, c0 + 2, block_rows, 1).setConstant(eta + xi);
  }
  return b;
}

Matrix sample_errors(ErrorKind kind, Index n, Index q, RngStream& rng) {
  Matrix e(n, q);
  for (Index s = 0; s < q; ++s) {
    for (Index i = 0; i < n; ++i) {
      switch (kind) {
        case ErrorKind::normal:
          e(i, s) = rng.normal();
          break;
        case ErrorKind::mixture:
          e(i, s) = (rng.uniform() < 0.05) ? 10.0 * rng.normal() : rng.normal();
          break;
        case ErrorKind::t4:
          e(i, s) = std::sqrt(2.0) * rng.student_t(4);
          break;
        case ErrorKind::cauchy:
          e(i, s) = rng.cauchy();
          break;
      }
    }
  }
  return e;
}

GeneratedData generate_dataset(const SimulationSpec& spec,
                               const RngStream& rep_root) {
  GeneratedData out;
  out.b_true = build_true_coefficients(spec.p, spec.eta, spec.xi);

  const Matrix sigma = build_covariance(spec.p);
  Eigen::LLT<Matrix> llt(sigma);
  if (llt.info() != Eigen::Success) {
    throw std::runtime_error("covariance is not positive definite");
  }
  const Matrix chol_lower = llt.matrixL();

  RngStream train_x = rep_root.substream(kTrainX);
  RngStream train_e = rep_root.substream(kTrainErrors);
  RngStream test_x = rep_root.substream(kTestX);
  RngStream test_e = rep_root.substream(kTestErrors);

  out.train.x = sample_gaussian_rows(chol_lower, spec.n_train, train_x);
  out.train.y = out.train.x * out.b_true +
                sample_errors(spec.error_kind, spec.n_train, 9, train_e);
  out.test.x = sample_gaussian_rows(chol_lower, spec.n_test, test_x);
  out.test.y = out.test.x * out.b_true +
               sample_errors(spec.error_kind, spec.n_test, 9, test_e);
  return out;
}

double median_ape(const Matrix& y_true, const Matrix& y_pred) {
  if (y_true.rows() != y_pred.rows() || y_true.cols() != y_pred.cols()) {
    throw std::invalid_argument("prediction shape mismatch");
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

double mse_beta(const Matrix& b_hat, const Matrix& b_true) {
  if (b_hat.rows() != b_true.rows() || b_hat.cols() != b_true.cols()) {
    throw std::invalid_argument("coefficient shape mismatch");
  }
  return (b_hat - b_true).squaredNorm() / static_cast<double>(b_hat.size());
}

StudySummary summarize(const std::vector<RepRecord>& per_rep) {
  StudySummary out;
  std::vector<double> apes;
  std::vector<double> mses;
  for (const auto& rec : per_rep) {
    if (rec.failed) {
      ++out.failures;
      continue;
    }
    apes.push_back(rec.median_ape);
    mses.push_back(rec.mse_beta);
  }
  if (!apes.empty()) {
    out.ape = mean_sd(apes);
    out.mse = mean_sd(mses);
  }
  return out;
}

StudyResult run_study(const SimulationSpec& spec, const TuningGrid& grid,
                      const SolverConfig& cfg, int threads) {
  spec.validate();

  StudyResult out;
  out.per_rep.resize(static_cast<std::size_t>(spec.reps));

  const auto run_rep = [&](int rep) {
    RepRecord rec;
    rec.rep = rep;
    try {
      const std::uint64_t rep_seed =
          mix_seed(spec.seed, static_cast<std::uint64_t>(rep));
      const GeneratedData gd = generate_dataset(spec, RngStream(rep_seed));

      SolverConfig rep_cfg = cfg;
      rep_cfg.seed = mix_seed(rep_seed, kSolver);
      TuningGrid rep_grid = grid;
      rep_grid.seed = mix_seed(rep_seed, kCvSplit);

      const GridSearchResult gs = grid_search(gd.train, rep_grid, rep_cfg);
      rec.chosen = gs.best;
      const FitResult fr = fit(gd.train, gs.best, rep_cfg);
      const Matrix pred = predict(fr.b, fr.intercepts, gd.test.x);
      rec.median_ape = median_ape(gd.test.y, pred);
      rec.mse_beta = mse_beta(fr.b, gd.b_true);
      rec.converged = fr.converged;
    } catch (const std::exception& e) {
      rec.failed = true;
      rec.message = e.what();
    }
    out.per_rep[static_cast<std::size_t>(rep)] = std::move(rec);
  };

  int n_threads = threads > 0
                      ? threads
                      : static_cast<int>(std::thread::hardware_concurrency());
  n_threads = std::max(1, std::min(n_threads, spec.reps));

  if (n_threads == 1) {
    for (int rep = 0; rep < spec.reps; ++rep) run_rep(rep);
  } else {
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(n_threads));
    for (int t = 0; t < n_threads; ++t) {
      pool.emplace_back([&]() {
        while (true) {
          const int rep = next.fetch_add(1);
          if (rep >= spec.reps) break;
          run_rep(rep);
        }
      });
    }
    for (auto& th : pool) th.join();
  }

  out.summary = summarize(out.per_rep);
  return out;
}

TuningGrid simulation_default_grid() {
  TuningGrid grid;
  grid.lambdas = {10.0, 30.0, 90.0, 270.0, 810.0};
  grid.gammas = {2.0, 8.0, 32.0, 128.0, 512.0};
  grid.ks = {2, 3};
  grid.folds = 5;
  grid.criterion = CvCriterion::median_ape;
  return grid;
}

TuningGrid baseline_grid() {
  TuningGrid grid = simulation_default_grid();
  grid.gammas = {0.0};
  grid.ks = {1};
  return grid;
}

}  // namespace wmcen
