// Command-line driver: generate synthetic data, solve, compare against the
// block-coordinate baseline, and cross-validate (C, mu).

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "l0fa/cross_validation.hpp"
#include "l0fa/csv_io.hpp"
#include "l0fa/errors.hpp"
#include "l0fa/experiment.hpp"

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;
using namespace l0fa;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitIo = 3;
constexpr int kExitNumerical = 4;

constexpr const char* kRunDirEnv = "L0FA_RUN_DIR";

struct Options {
  std::string run_dir;

  GeneratorConfig gen;
  int n = 1200;

  std::string samples = "samples.csv";
  std::string covariance;
  double C = 1.0;
  double mu = 60.0;
  IpmParams ipm;
  BaselineParams bcd;
  std::string trace_out = "trace.csv";
  std::string truth_dir;

  int folds = 3;
  std::vector<double> C_grid{0.5, 1.0, 4.0, 10.0, 40.0};
  std::vector<double> mu_grid{10.0, 30.0, 60.0, 100.0};
  std::uint64_t cv_seed = 7;
};

fs::path resolve(const Options& o, const std::string& name) {
  const fs::path p(name);
  if (p.is_absolute() || o.run_dir.empty()) return p;
  return fs::path(o.run_dir) / p;
}

void ensure_run_dir(const Options& o) {
  if (o.run_dir.empty()) return;
  std::error_code ec;
  fs::create_directories(o.run_dir, ec);
  if (ec) throw Error(ErrorKind::Io, "cannot create run directory " + o.run_dir + ": " + ec.message());
}

std::ofstream open_out(const fs::path& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::Io, "cannot write " + path.string());
  return out;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out = open_out(path);
  out << text;
  if (!out) throw Error(ErrorKind::Io, "write failed: " + path.string());
}

void write_trace(const fs::path& path, const SolveTrace& trace) {
  std::ofstream out = open_out(path);
  write_trace_csv(out, trace);
  if (!out) throw Error(ErrorKind::Io, "write failed: " + path.string());
}

json number(double v) { return json::parse(format_double(v) == "inf" ? "null" : format_double(v)); }

Eigen::MatrixXd load_covariance(const Options& o) {
  if (!o.covariance.empty()) return read_matrix_csv(resolve(o, o.covariance));
  const Eigen::MatrixXd Y = read_matrix_csv(resolve(o, o.samples));
  if (Y.rows() < Y.cols()) {
    throw Error(ErrorKind::InfeasibleData, "sample covariance is singular: N = " + std::to_string(Y.rows()) +
                                               " samples for p = " + std::to_string(Y.cols()));
  }
  return sample_covariance(Y);
}

ProblemData load_problem(const Options& o) {
  Eigen::MatrixXd cov = load_covariance(o);
  try {
    return ProblemData(std::move(cov), o.C, o.mu);
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::Parameter) throw Error(ErrorKind::InvalidConfig, e.what());
    throw;
  }
}

int status_exit(SolveStatus s) { return s == SolveStatus::Converged ? kExitOk : kExitNumerical; }

void print_solution(const Solution& sol) {
  std::cout << "status: " << to_string(sol.status) << "\n"
            << "inner solves: " << sol.solves.size() << "\n"
            << "total inner iterations: " << sol.total_inner_iterations() << "\n"
            << "final tau: " << format_double(sol.final_tau) << "\n"
            << "final residual: " << format_double(sol.solves.empty() ? 0.0 : sol.solves.back().final_residual)
            << "\n"
            << "rank estimate: " << sol.rank_estimate << "\n"
            << "support size (upper triangle): " << sol.support.size() << "\n";
}

void print_metrics(const Options& o, const Solution& sol) {
  if (o.truth_dir.empty()) return;
  const fs::path dir = resolve(o, o.truth_dir);
  GroundTruth truth;
  truth.Gamma = read_matrix_csv(dir / "gamma.csv");
  truth.S_hat = read_matrix_csv(dir / "s_hat.csv");
  truth.Sigma_hat = truth.L_hat() + truth.S_hat;
  truth.support_mask = (truth.S_hat.array() != 0.0).matrix();
  truth.r = static_cast<int>(truth.Gamma.cols());
  const RecoveryMetrics m = recovery_metrics(sol, truth);
  std::cout << "rank match: " << (m.rank_match ? "yes" : "no") << "\n"
            << "support F-score: " << format_double(m.support_fscore) << "\n"
            << "relative error L: " << format_double(m.rel_err_L) << "\n"
            << "relative error S: " << format_double(m.rel_err_S) << "\n"
            << "KL to truth: " << format_double(m.kl_to_truth) << "\n";
}

int run_generate(const Options& o) {
  if (o.n < 1) throw Error(ErrorKind::InvalidConfig, "n must be at least 1");
  const SyntheticInstance inst = make_instance(o.gen, o.n);
  ensure_run_dir(o);
  write_matrix_csv(resolve(o, "samples.csv"), inst.samples);
  write_matrix_csv(resolve(o, "gamma.csv"), inst.truth.Gamma);
  write_matrix_csv(resolve(o, "s_hat.csv"), inst.truth.S_hat);
  write_matrix_csv(resolve(o, "sigma_hat.csv"), inst.truth.Sigma_hat);
  std::cout << "p: " << o.gen.p << "\nr: " << o.gen.r << "\nN: " << o.n << "\nsnr: " << format_double(o.gen.snr)
            << "\nseed: " << o.gen.seed << "\n";
  return kExitOk;
}

int run_solve(const Options& o) {
  o.ipm.validate();
  const ProblemData problem = load_problem(o);
  const auto [L0, S0] = default_init(problem);
  const Solution sol = ipm_solve(problem, L0, S0, o.ipm);
  ensure_run_dir(o);
  write_matrix_csv(resolve(o, "L_star.csv"), sol.L_star);
  write_matrix_csv(resolve(o, "S_star.csv"), sol.S_star);
  write_trace(resolve(o, o.trace_out), sol.trace);
  print_solution(sol);
  print_metrics(o, sol);
  return status_exit(sol.status);
}

json solution_json(const Solution& sol) {
  json j;
  j["status"] = to_string(sol.status);
  j["inner_solves"] = sol.solves.size();
  j["total_inner_iterations"] = sol.total_inner_iterations();
  j["final_residual"] = number(sol.solves.empty() ? 0.0 : sol.solves.back().final_residual);
  j["rank_estimate"] = sol.rank_estimate;
  j["support_size"] = sol.support.size();
  return j;
}

int run_compare(const Options& o) {
  o.ipm.validate();
  o.bcd.validate();
  const ProblemData problem = load_problem(o);
  const Comparison cmp = compare_solvers(problem, o.ipm, o.bcd);
  ensure_run_dir(o);
  write_trace(resolve(o, "ipm_trace.csv"), cmp.ipm.trace);
  write_trace(resolve(o, "bcd_trace.csv"), cmp.baseline.trace);

  json summary;
  summary["residual_tol"] = number(o.ipm.newton.residual_tol);
  summary["baseline_tau"] = number(cmp.baseline_tau);
  summary["note"] = "the baseline solves the barrier problem at the IPM's final tau from the same initialization";
  summary["ipm"] = solution_json(cmp.ipm);
  summary["ipm"]["iterations_to_tol"] = cmp.ipm.status == SolveStatus::Converged
                                            ? json(cmp.ipm.total_inner_iterations())
                                            : json(nullptr);
  json b;
  b["status"] = to_string(cmp.baseline.status);
  b["iterations"] = cmp.baseline.iterations;
  b["iterations_to_tol"] =
      cmp.baseline.iterations_to_tol >= 0 ? json(cmp.baseline.iterations_to_tol) : json(nullptr);
  b["max_iters"] = o.bcd.max_iters;
  b["final_residual"] = number(cmp.baseline.final_residual);
  summary["baseline"] = b;
  write_text(resolve(o, "summary.json"), summary.dump(2) + "\n");

  std::cout << summary.dump(2) << "\n";
  return status_exit(cmp.ipm.status);
}

int run_cv(const Options& o) {
  CvConfig cfg;
  cfg.folds = o.folds;
  cfg.C_grid = o.C_grid;
  cfg.mu_grid = o.mu_grid;
  cfg.seed = o.cv_seed;
  cfg.ipm = o.ipm;
  const Eigen::MatrixXd Y = read_matrix_csv(resolve(o, o.samples));
  const CvResult res = cross_validate(Y, cfg);
  for (const auto& w : res.warnings) std::cerr << "warning: " << w << "\n";

  std::ostringstream table;
  table << "C,mu,score,rank_estimate\n";
  for (const CvScore& row : res.table) {
    table << format_double(row.C) << ',' << format_double(row.mu) << ',' << format_double(row.score) << ','
          << row.rank_estimate << '\n';
  }
  ensure_run_dir(o);
  write_text(resolve(o, "cv_scores.csv"), table.str());
  std::cout << table.str() << "best C: " << format_double(res.best_C) << "\nbest mu: " << format_double(res.best_mu)
            << "\n";
  return kExitOk;
}

void add_problem_options(CLI::App* cmd, Options& o) {
  cmd->add_option("--samples", o.samples, "Samples CSV, one observation per row")->capture_default_str();
  cmd->add_option("--covariance", o.covariance, "Sample covariance CSV (overrides --samples)");
  cmd->add_option("--C", o.C, "l0 weight")->capture_default_str();
  cmd->add_option("--mu", o.mu, "KL weight")->capture_default_str();
}

void add_ipm_options(CLI::App* cmd, Options& o) {
  cmd->add_option("--gamma", o.ipm.newton.gamma, "Prox stepsize")->capture_default_str();
  cmd->add_option("--theta", o.ipm.theta, "Barrier decay ratio")->capture_default_str();
  cmd->add_option("--tau0", o.ipm.tau0, "Initial barrier parameter")->capture_default_str();
  cmd->add_option("--eps", o.ipm.epsilon, "Barrier stopping threshold")->capture_default_str();
  cmd->add_option("--delta", o.ipm.newton.delta, "Newton safeguard margin")->capture_default_str();
  cmd->add_option("--sigma", o.ipm.newton.sigma, "Armijo fraction")->capture_default_str();
  cmd->add_option("--beta", o.ipm.newton.beta, "Backtracking ratio")->capture_default_str();
  cmd->add_option("--residual-tol", o.ipm.newton.residual_tol, "Inner stopping tolerance")->capture_default_str();
  cmd->add_option("--max-inner", o.ipm.newton.max_inner_iters, "Inner iteration cap")->capture_default_str();
  cmd->add_option("--eta-rank", o.ipm.eta_rank, "Relative eigenvalue threshold")->capture_default_str();
  cmd->add_option("--eta-supp", o.ipm.eta_supp, "Relative support threshold")->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sparse plus low-rank factor analysis by an interior-point Newton method"};
  app.require_subcommand(1);
  Options o;
  if (const char* env = std::getenv(kRunDirEnv)) o.run_dir = env;
  app.set_config("--config", "", "TOML/INI config file; command-line flags override it")
      ->transform([&o](std::string path) { return resolve(o, path).string(); });
  app.add_option("--run-dir", o.run_dir, std::string("Directory for relative paths (env ") + kRunDirEnv + ")");

  CLI::App* gen = app.add_subcommand("generate", "Draw a synthetic instance");
  gen->add_option("--p", o.gen.p, "Dimension")->capture_default_str();
  gen->add_option("--r", o.gen.r, "Number of factors")->capture_default_str();
  gen->add_option("--n", o.n, "Number of samples")->capture_default_str();
  gen->add_option("--snr", o.gen.snr, "||Gamma Gamma^T||_F / ||S||_F")->capture_default_str();
  gen->add_option("--seed", o.gen.seed, "Seed (samples use seed + 1)")->capture_default_str();
  gen->add_option("--density", o.gen.density, "Off-diagonal density of S")->capture_default_str();

  CLI::App* solve = app.add_subcommand("solve", "Run the interior-point method");
  add_problem_options(solve, o);
  add_ipm_options(solve, o);
  solve->add_option("--trace-out", o.trace_out, "Trace CSV")->capture_default_str();
  solve->add_option("--truth", o.truth_dir, "Directory with gamma.csv and s_hat.csv for recovery metrics");

  CLI::App* compare = app.add_subcommand("compare", "Run the IPM and the block-coordinate baseline");
  add_problem_options(compare, o);
  add_ipm_options(compare, o);
  compare->add_option("--bcd-max-iters", o.bcd.max_iters, "Baseline iteration cap")->capture_default_str();

  CLI::App* cv = app.add_subcommand("cv", "Grid-search (C, mu) by held-out likelihood");
  cv->add_option("--samples", o.samples, "Samples CSV")->capture_default_str();
  cv->add_option("--folds", o.folds, "Number of folds")->capture_default_str();
  cv->add_option("--C-grid", o.C_grid, "Values of C")->delimiter(',')->capture_default_str();
  cv->add_option("--mu-grid", o.mu_grid, "Values of mu")->delimiter(',')->capture_default_str();
  cv->add_option("--cv-seed", o.cv_seed, "Fold shuffling seed")->capture_default_str();
  add_ipm_options(cv, o);

  try {
    app.parse(argc, argv);
  } catch (const CLI::FileError& e) {
    app.exit(e);
    return kExitIo;
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (gen->parsed()) return run_generate(o);
    if (solve->parsed()) return run_solve(o);
    if (compare->parsed()) return run_compare(o);
    return run_cv(o);
  } catch (const Error& e) {
    std::cerr << "error (" << to_string(e.kind()) << "): " << e.what() << "\n";
    switch (e.kind()) {
      case ErrorKind::InvalidConfig:
      case ErrorKind::Parameter:
      case ErrorKind::InvalidDimension:
        return kExitConfig;
      case ErrorKind::Io:
      case ErrorKind::InvalidInput:
      case ErrorKind::Shape:
        return kExitIo;
      case ErrorKind::InfeasiblePoint:
      case ErrorKind::InfeasibleData:
      case ErrorKind::NumericalBreakdown:
        return kExitNumerical;
    }
    return kExitNumerical;
  }
}
