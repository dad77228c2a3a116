#ifndef MFMC_EXPERIMENTS_HPP
#define MFMC_EXPERIMENTS_HPP

#include <functional>
#include <memory>
#include <string>

#include <json.hpp>

#include "mfmc/chain.hpp"
#include "mfmc/io/config.hpp"

namespace mfmc {

inline constexpr const char* kVersion = "0.1.0";

// Number of worker threads for multi-chain runs: MFMC_THREADS when set,
// otherwise the hardware concurrency.
long thread_budget();

// Runs chains 0..n-1 concurrently, each with its own model instance and a
// seed derived from the base seed and chain index. Results are ordered by
// chain index regardless of scheduling.
std::vector<ChainResult> run_chains(
    const std::function<std::unique_ptr<TargetSequence>()>& make_model,
    const ChainConfig& base, long n_chains, long max_threads = 0);

std::uint64_t chain_seed(std::uint64_t base, long chain_index);

// Full experiment: build the model and data from the config, run it, write
// per-chain sample CSVs plus summary.json under out_dir (skipped when
// out_dir is empty), and return the summary document. The summary echoes the
// resolved configuration.
nlohmann::json run_experiment(const ExperimentConfig& config,
                              const std::string& out_dir);

// Standalone statistical check of estimator unbiasedness (toy sequence and
// weight rules) plus the fidelity-marginal chi-square on the constant
// control model. Prints one line per check; returns the number of failures.
int run_estimator_check(std::uint64_t seed, std::ostream& out);

// Solver order checks: Euler/RK4 halving ratios, trapezoid order, Tsit5 vs
// RK4, CG against a dense solve, Cholesky round trip. Returns failures.
int run_convergence_check(std::ostream& out);

nlohmann::json config_echo(const ExperimentConfig& config);

}  // namespace mfmc

#endif  // MFMC_EXPERIMENTS_HPP
