#include "wmcen/cli.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "wmcen/csv.hpp"
#include "wmcen/model_io.hpp"
#include "wmcen/simgen.hpp"
#include "wmcen/solver.hpp"
#include "wmcen/stats.hpp"
#include "wmcen/tuning.hpp"

namespace wmcen {

namespace {

std::uint64_t default_seed() {
  if (const char* env = std::getenv("WMCEN_SEED")) {
    return std::strtoull(env, nullptr, 10);
  }
  return 0;
}

CvCriterion criterion_from_string(const std::string& name) {
  if (name == "median-ape") return CvCriterion::median_ape;
  if (name == "mean-squared") return CvCriterion::mean_squared;
  throw CLI::ValidationError("--criterion",
                             "must be median-ape or mean-squared");
}

std::string cell(double mean, double sd) {
  std::ostringstream out;
  out.setf(std::ios::fixed);
  out.precision(3);
  out << mean << " (" << sd << ")";
  return out.str();
}

void write_study_table(const std::string& path, const SimulationSpec& spec,
                       const StudyResult& result) {
  std::ofstream out(path);
  if (!out) {
    throw std::runtime_error("cannot write table: " + path);
  }
  out << "rep,p,eta,xi,error,n_train,n_test,seed,lambda,gamma,k,converged,"
         "failed,median_ape,mse_beta\n";
  const int error_code = static_cast<int>(spec.error_kind) + 1;
  for (const auto& rec : result.per_rep) {
    out << rec.rep << ',' << spec.p << ',' << format_double(spec.eta) << ','
        << format_double(spec.xi) << ',' << error_code << ',' << spec.n_train
        << ',' << spec.n_test << ',' << spec.seed << ','
        << format_double(rec.chosen.lambda) << ','
        << format_double(rec.chosen.gamma) << ',' << rec.chosen.k << ','
        << (rec.converged ? 1 : 0) << ',' << (rec.failed ? 1 : 0) << ','
        << format_double(rec.failed ? std::nan("") : rec.median_ape) << ','
        << format_double(rec.failed ? std::nan("") : rec.mse_beta) << '\n';
  }
}

// Minimal strip-plot of one metric across replications.
void write_strip_svg(const std::string& path, const std::string& title,
                     const std::vector<double>& values) {
  if (values.empty()) {
    throw std::runtime_error("no values to plot for " + title);
  }
  double lo = values.front();
  double hi = values.front();
  for (double v : values) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  if (hi == lo) {
    lo -= 0.5;
    hi += 0.5;
  }
  const double width = 640.0;
  const double height = 160.0;
  const double margin = 50.0;
  const auto xpos = [&](double v) {
    return margin + (v - lo) / (hi - lo) * (width - 2.0 * margin);
  };

  std::ofstream out(path);
  if (!out) {
    throw std::runtime_error("cannot write plot: " + path);
  }
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width
      << "\" height=\"" << height << "\">\n";
  out << "  <text x=\"" << margin << "\" y=\"24\" font-size=\"14\">" << title
      << "</text>\n";
  out << "  <line x1=\"" << margin << "\" y1=\"100\" x2=\"" << width - margin
      << "\" y2=\"100\" stroke=\"black\"/>\n";
  for (double tick : {lo, 0.5 * (lo + hi), hi}) {
    out << "  <line x1=\"" << xpos(tick) << "\" y1=\"96\" x2=\"" << xpos(tick)
        << "\" y2=\"104\" stroke=\"black\"/>\n";
    out << "  <text x=\"" << xpos(tick) << "\" y=\"122\" font-size=\"11\" "
           "text-anchor=\"middle\">"
        << format_double(tick) << "</text>\n";
  }
  for (double v : values) {
    out << "  <circle cx=\"" << xpos(v)
        << "\" cy=\"80\" r=\"4\" fill=\"steelblue\" fill-opacity=\"0.55\"/>\n";
  }
  out << "</svg>\n";
}

int cmd_fit(const std::string& x_path, const std::string& y_path,
            bool has_header, char delim, const Hyperparams& hp,
            const SolverConfig& cfg, const std::string& out_path) {
  const Dataset d = validate_dataset(load_csv(x_path, has_header, delim),
                                     load_csv(y_path, has_header, delim));
  if (hp.k > d.q()) {
    throw std::runtime_error("k=" + std::to_string(hp.k) +
                             " exceeds the number of responses q=" +
                             std::to_string(d.q()));
  }
  const FitResult fr = fit(d, hp, cfg);
  save_model(out_path, make_model_file(fr, hp));
  std::cout << "fit: n=" << d.n() << " p=" << d.p() << " q=" << d.q()
            << " objective=" << format_double(fr.objective_trace.back())
            << " sweeps=" << fr.inner_iters
            << " converged=" << (fr.converged ? "yes" : "no") << '\n'
            << "model written to " << out_path << '\n';
  return 0;
}

int cmd_predict(const std::string& model_path, const std::string& x_path,
                bool has_header, char delim, const std::string& out_path) {
  const ModelFile model = load_model(model_path);
  const Matrix x = load_csv(x_path, has_header, delim);
  const Matrix pred = predict(model.b, model.intercepts, x);
  save_csv(out_path, pred, delim);
  std::cout << "predictions for " << pred.rows() << " rows written to "
            << out_path << '\n';
  return 0;
}

int cmd_cv(const std::string& x_path, const std::string& y_path,
           bool has_header, char delim, std::vector<double> lambdas,
           std::vector<double> gammas, std::vector<int> ks, int folds,
           const std::string& criterion, std::uint64_t seed,
           const SolverConfig& cfg_in, const std::string& out_path) {
  const Dataset d = validate_dataset(load_csv(x_path, has_header, delim),
                                     load_csv(y_path, has_header, delim));
  SolverConfig cfg = cfg_in;
  cfg.seed = seed;

  TuningGrid grid;
  if (lambdas.empty() || gammas.empty()) {
    grid = make_default_grid(d, cfg);
    if (!lambdas.empty()) grid.lambdas = std::move(lambdas);
    if (!gammas.empty()) grid.gammas = std::move(gammas);
  } else {
    grid.lambdas = std::move(lambdas);
    grid.gammas = std::move(gammas);
  }
  if (!ks.empty()) {
    grid.ks = std::move(ks);
  } else if (grid.ks.empty()) {
    grid.ks = {1};
  }
  for (int& k : grid.ks) k = std::min<int>(k, static_cast<int>(d.q()));
  grid.folds = folds;
  grid.criterion = criterion_from_string(criterion);
  grid.seed = seed;

  const GridSearchResult gs = grid_search(d, grid, cfg);
  std::cout << "lambda,gamma,k,score\n";
  for (const auto& entry : gs.table) {
    std::cout << format_double(entry.hp.lambda) << ','
              << format_double(entry.hp.gamma) << ',' << entry.hp.k << ','
              << format_double(entry.score) << '\n';
  }
  std::cout << "best: lambda=" << format_double(gs.best.lambda)
            << " gamma=" << format_double(gs.best.gamma) << " k=" << gs.best.k
            << '\n';
  for (const auto& w : gs.warnings) std::cerr << "warning: " << w << '\n';

  if (!out_path.empty()) {
    std::ofstream out(out_path);
    if (!out) throw std::runtime_error("cannot write table: " + out_path);
    out << "lambda,gamma,k,score\n";
    for (const auto& entry : gs.table) {
      out << format_double(entry.hp.lambda) << ','
          << format_double(entry.hp.gamma) << ',' << entry.hp.k << ','
          << format_double(entry.score) << '\n';
    }
  }
  return 0;
}

int cmd_simulate(const SimulationSpec& spec, std::vector<double> lambdas,
                 std::vector<double> gammas, std::vector<int> ks,
                 const std::string& method, int threads,
                 const SolverConfig& cfg, const std::string& out_path) {
  TuningGrid grid =
      (method == "wlasso") ? baseline_grid() : simulation_default_grid();
  if (!lambdas.empty()) grid.lambdas = std::move(lambdas);
  if (!gammas.empty()) grid.gammas = std::move(gammas);
  if (!ks.empty()) grid.ks = std::move(ks);

  const StudyResult result = run_study(spec, grid, cfg, threads);
  write_study_table(out_path, spec, result);

  std::cout << "cell: p=" << spec.p << " eta=" << spec.eta
            << " xi=" << spec.xi << " error=" << to_string(spec.error_kind)
            << " reps=" << spec.reps << '\n';
  std::cout << "median APE: " << cell(result.summary.ape.mean, result.summary.ape.sd)
            << '\n';
  std::cout << "MSE of coefficients: "
            << cell(result.summary.mse.mean, result.summary.mse.sd) << '\n';
  if (result.summary.failures > 0) {
    std::cout << "failed replications: " << result.summary.failures << '\n';
  }
  std::cout << "table written to " << out_path << '\n';
  return 0;
}

int cmd_report(const std::string& in_path, const std::string& plot_dir) {
  const Matrix table = load_csv(in_path, /*has_header=*/true);
  if (table.cols() < 15) {
    throw std::runtime_error("study table has fewer columns than expected");
  }
  std::vector<double> apes;
  std::vector<double> mses;
  int failures = 0;
  for (Index i = 0; i < table.rows(); ++i) {
    if (table(i, 12) != 0.0) {
      ++failures;
      continue;
    }
    apes.push_back(table(i, 13));
    mses.push_back(table(i, 14));
  }
  if (apes.empty()) {
    throw std::runtime_error("no successful replications in " + in_path);
  }
  const MeanSd ape = mean_sd(apes);
  const MeanSd mse = mean_sd(mses);
  std::cout << "replications: " << table.rows() << " (failed: " << failures
            << ")\n";
  std::cout << "median APE: " << cell(ape.mean, ape.sd) << '\n';
  std::cout << "MSE of coefficients: " << cell(mse.mean, mse.sd) << '\n';

  if (!plot_dir.empty()) {
    write_strip_svg(plot_dir + "/median_ape.svg",
                    "median APE per replication", apes);
    write_strip_svg(plot_dir + "/mse_beta.svg",
                    "coefficient MSE per replication", mses);
    std::cout << "plots written to " << plot_dir << '\n';
  }
  return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args) {
  CLI::App app{"Rank-based multivariate regression with coefficient "
               "clustering: fit, predict, tune, and synthetic studies"};
  app.require_subcommand(1);

  // Shared file options.
  std::string x_path, y_path, model_path, out_path, in_path, plot_dir;
  bool has_header = false;
  char delim = ',';

  Hyperparams hp;
  SolverConfig cfg;
  std::uint64_t seed = default_seed();

  std::vector<double> lambdas, gammas;
  std::vector<int> ks;
  int folds = 5;
  std::string criterion = "median-ape";

  SimulationSpec spec;
  spec.reps = 20;
  std::string error_name = "normal";
  std::string method = "wmcen";
  int threads = 0;

  auto* fit_cmd = app.add_subcommand("fit", "Fit a model from CSV inputs");
  fit_cmd->add_option("--x", x_path, "covariate CSV")->required();
  fit_cmd->add_option("--y", y_path, "response CSV")->required();
  fit_cmd->add_flag("--has-header", has_header, "skip the first CSV line");
  fit_cmd->add_option("--delimiter", delim, "cell delimiter");
  fit_cmd->add_option("--lambda", hp.lambda, "L1 penalty weight")->required();
  fit_cmd->add_option("--gamma", hp.gamma, "cluster penalty weight");
  fit_cmd->add_option("--k", hp.k, "number of response clusters");
  fit_cmd->add_option("--epsilon", hp.epsilon, "L1 smoothing parameter");
  fit_cmd->add_option("--tol", cfg.tol, "objective-decrease threshold");
  fit_cmd->add_option("--seed", seed, "initialization seed");
  fit_cmd->add_option("--out", out_path, "output model file")->required();

  auto* predict_cmd = app.add_subcommand("predict", "Predict with a saved model");
  predict_cmd->add_option("--model", model_path, "model file")->required();
  predict_cmd->add_option("--x", x_path, "covariate CSV")->required();
  predict_cmd->add_flag("--has-header", has_header, "skip the first CSV line");
  predict_cmd->add_option("--delimiter", delim, "cell delimiter");
  predict_cmd->add_option("--out", out_path, "output prediction CSV")->required();

  auto* cv_cmd = app.add_subcommand("cv", "Cross-validated grid search");
  cv_cmd->add_option("--x", x_path, "covariate CSV")->required();
  cv_cmd->add_option("--y", y_path, "response CSV")->required();
  cv_cmd->add_flag("--has-header", has_header, "skip the first CSV line");
  cv_cmd->add_option("--delimiter", delim, "cell delimiter");
  cv_cmd->add_option("--lambdas", lambdas, "L1 weight candidates")->delimiter(',');
  cv_cmd->add_option("--gammas", gammas, "cluster weight candidates")->delimiter(',');
  cv_cmd->add_option("--ks", ks, "cluster count candidates")->delimiter(',');
  cv_cmd->add_option("--folds", folds, "number of folds");
  cv_cmd->add_option("--criterion", criterion, "median-ape or mean-squared");
  cv_cmd->add_option("--seed", seed, "fold-split and solver seed");
  cv_cmd->add_option("--tol", cfg.tol, "objective-decrease threshold");
  cv_cmd->add_option("--out", out_path, "optional score-table CSV");

  auto* sim_cmd = app.add_subcommand("simulate", "Run one synthetic study cell");
  sim_cmd->add_option("--p", spec.p, "number of covariates (12 or 100)");
  sim_cmd->add_option("--eta", spec.eta, "signal level");
  sim_cmd->add_option("--xi", spec.xi, "within-block contrast");
  sim_cmd->add_option("--error", error_name, "error law: 1..4 or name");
  sim_cmd->add_option("--reps", spec.reps, "number of replications");
  sim_cmd->add_option("--seed", seed, "master seed");
  sim_cmd->add_option("--n-train", spec.n_train, "training samples");
  sim_cmd->add_option("--n-test", spec.n_test, "test samples");
  sim_cmd->add_flag("--allow-nonstandard", spec.allow_nonstandard,
                    "permit factor levels outside the standard design");
  sim_cmd->add_option("--lambdas", lambdas, "override L1 candidates")->delimiter(',');
  sim_cmd->add_option("--gammas", gammas, "override cluster weight candidates")->delimiter(',');
  sim_cmd->add_option("--ks", ks, "override cluster count candidates")->delimiter(',');
  sim_cmd->add_option("--method", method, "wmcen (default) or wlasso baseline");
  sim_cmd->add_option("--threads", threads, "worker threads (0 = all cores)");
  sim_cmd->add_option("--tol", cfg.tol, "objective-decrease threshold");
  sim_cmd->add_option("--out", out_path, "output table CSV")->required();

  auto* report_cmd = app.add_subcommand("report", "Summarize a study table");
  report_cmd->add_option("--in", in_path, "study table CSV")->required();
  report_cmd->add_option("--plot-dir", plot_dir,
                         "directory for metric distribution plots");

  std::vector<std::string> argv_storage = args;
  std::reverse(argv_storage.begin(), argv_storage.end());
  try {
    app.parse(argv_storage);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (fit_cmd->parsed()) {
      cfg.seed = seed;
      return cmd_fit(x_path, y_path, has_header, delim, hp, cfg, out_path);
    }
    if (predict_cmd->parsed()) {
      return cmd_predict(model_path, x_path, has_header, delim, out_path);
    }
    if (cv_cmd->parsed()) {
      return cmd_cv(x_path, y_path, has_header, delim, std::move(lambdas),
                    std::move(gammas), std::move(ks), folds, criterion, seed,
                    cfg, out_path);
    }
    if (sim_cmd->parsed()) {
      spec.error_kind = error_kind_from_string(error_name);
      spec.seed = seed;
      cfg.seed = seed;
      if (method != "wmcen" && method != "wlasso") {
        throw std::runtime_error("--method must be wmcen or wlasso");
      }
      return cmd_simulate(spec, std::move(lambdas), std::move(gammas),
                          std::move(ks), method, threads, cfg, out_path);
    }
    if (report_cmd->parsed()) {
      return cmd_report(in_path, plot_dir);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  std::cerr << "error: no subcommand given\n";
  return 1;
}

}  // namespace wmcen
