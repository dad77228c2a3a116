#include <cstdint>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "mfmc/experiments.hpp"
#include "mfmc/io/config.hpp"

namespace {

struct CommonOpts {
  std::string config_path;
  std::string out_dir;
  std::uint64_t seed = 0;
  bool seed_set = false;
  long chains = 0;
};

void add_common(CLI::App* cmd, CommonOpts& opts) {
  cmd->add_option("--config", opts.config_path, "Config file (key = value format)");
  cmd->add_option("--out", opts.out_dir, "Output directory for samples and summary");
  cmd->add_option("--seed", opts.seed, "Seed override")->each([&opts](const std::string&) {
    opts.seed_set = true;
  });
  cmd->add_option("--chains", opts.chains, "Chain count override");
}

int run_experiment_command(mfmc::ExperimentKind kind, const CommonOpts& opts) {
  mfmc::ExperimentConfig cfg = opts.config_path.empty()
                                   ? mfmc::default_config(kind)
                                   : mfmc::load_config(opts.config_path);
  if (cfg.experiment != kind) {
    std::cerr << "error: config is for experiment '"
              << mfmc::experiment_name(cfg.experiment) << "', subcommand is '"
              << mfmc::experiment_name(kind) << "'\n";
    return 2;
  }
  if (opts.seed_set) cfg.seed = opts.seed;
  if (opts.chains > 0) cfg.chains = opts.chains;
  cfg.validate();

  const auto summary = mfmc::run_experiment(cfg, opts.out_dir);
  std::cout << summary.dump(2) << "\n";
  if (!opts.out_dir.empty()) {
    std::cerr << "wrote " << opts.out_dir << "/summary.json\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Multi-fidelity MCMC: pseudo-marginal sampling over randomized-truncation "
      "estimators of a fidelity ladder"};
  app.require_subcommand(1);

  struct Sub {
    mfmc::ExperimentKind kind;
    CLI::App* cmd = nullptr;
    CommonOpts opts;
  };
  const std::pair<mfmc::ExperimentKind, const char*> kinds[] = {
      {mfmc::ExperimentKind::Toy, "Conjugate Gaussian sequence benchmark"},
      {mfmc::ExperimentKind::Lgcp, "Log Gaussian Cox process on event data"},
      {mfmc::ExperimentKind::Lv, "Lotka-Volterra system identification"},
      {mfmc::ExperimentKind::Pde, "Heat-equation simulated annealing"},
      {mfmc::ExperimentKind::Gp, "GP regression lengthscale inference"},
  };
  std::vector<Sub> subs(5);
  for (std::size_t i = 0; i < 5; ++i) {
    subs[i].kind = kinds[i].first;
    subs[i].cmd = app.add_subcommand(mfmc::experiment_name(kinds[i].first),
                                     kinds[i].second);
    add_common(subs[i].cmd, subs[i].opts);
  }

  std::uint64_t check_seed = 20240801;
  auto* est_check = app.add_subcommand(
      "estimator-check", "Statistical unbiasedness suite for the estimators");
  est_check->add_option("--seed", check_seed, "Seed for the statistical checks");

  auto* conv_check = app.add_subcommand(
      "convergence-check", "Solver order checks (ODE, quadrature, CG, Cholesky)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (est_check->parsed()) {
      return mfmc::run_estimator_check(check_seed, std::cout) == 0 ? 0 : 1;
    }
    if (conv_check->parsed()) {
      return mfmc::run_convergence_check(std::cout) == 0 ? 0 : 1;
    }
    for (const auto& sub : subs) {
      if (sub.cmd->parsed()) return run_experiment_command(sub.kind, sub.opts);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
