#ifndef MFMC_CHAIN_HPP
#define MFMC_CHAIN_HPP

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <vector>

#include "mfmc/estimator.hpp"
#include "mfmc/samplers.hpp"
#include "mfmc/target_sequence.hpp"

namespace mfmc {

struct ChainSample {
  State theta;
  long fidelity = 1;
  int sign = 0;          // sign of the estimate at this sample's (theta, K)
  double cum_cost = 0.0; // cost-adjusted evaluations accrued so far
  long iter = 0;
};

enum class SamplerKind { Mh, Slice, Ess };
enum class FidelityMode { MultiFidelity, SingleFidelity };

struct ChainConfig {
  long iterations = 10'000;
  long burn_in = 2'000;
  long thin = 2;
  std::uint64_t seed = 0;
  SamplerKind sampler = SamplerKind::Mh;
  FidelityMode mode = FidelityMode::MultiFidelity;
  double gamma0 = 0.1;      // multi-fidelity truncation parameter
  long fixed_fidelity = 1;  // single-fidelity level
  long k_max = GeometricTruncation::kDefaultKMax;
  EstimatorScheme scheme = EstimatorScheme::RussianRoulette;
  ProposalSpec proposal = GaussianRandomWalk{0.3};
  SliceSpec slice;
  std::optional<State> init;  // default: a prior draw

  void validate() const;
};

struct ChainDiagnostics {
  long theta_accepts = 0;
  long fidelity_accepts = 0;
  long fidelity_proposals = 0;
  long degenerate_fidelity_rejections = 0;
  long shrink_failures = 0;
  double total_cost = 0.0;
};

struct ChainResult {
  std::vector<ChainSample> samples;
  ChainDiagnostics diag;
};

// Evaluates pi_hat_K(theta) on demand and accounts each distinct level
// evaluation to the ledger exactly once per (theta, auxiliary epoch).
//
// Russian roulette weights survival(k)^{-1} do not depend on the truncation
// level, so pi_hat_K is a prefix sum of weighted increments; estimates at
// different K for the same state share one cursor walk, and topping up from
// K to K+1 costs only level K+1. Single-term and single-fidelity lookups
// cache whole records per (theta, K). Entries for states other than the
// chain's current position are dropped at each iteration boundary.
class EstimateProvider {
public:
  EstimateProvider(TargetSequence& seq, FidelityMode mode, EstimatorScheme scheme,
                   const GeometricTruncation& dist);

  EstimateRecord at(const State& theta, long K);
  double log_abs_at(const State& theta, long K) { return at(theta, K).value.log_abs; }
  double ledger() const { return ledger_; }

  void begin_iteration(const State& current, long K);

private:
  struct Key {
    State theta;
    std::uint64_t epoch;
    bool operator<(const Key& other) const {
      if (epoch != other.epoch) return epoch < other.epoch;
      return theta < other.theta;
    }
  };

  // Materialized levels and Russian roulette prefix sums for one state.
  struct LevelLadder {
    std::unique_ptr<LevelCursor> cursor;
    std::vector<SignedLog> prefix;  // prefix[K-1] = pi_hat_K under RR weights
    double cost = 0.0;              // cost of the materialized levels
  };

  struct WholeKey {
    State theta;
    long fidelity;
    std::uint64_t epoch;
    bool operator<(const WholeKey& other) const {
      if (epoch != other.epoch) return epoch < other.epoch;
      if (fidelity != other.fidelity) return fidelity < other.fidelity;
      return theta < other.theta;
    }
  };

  LevelLadder& ladder_for(const State& theta);

  TargetSequence& seq_;
  FidelityMode mode_;
  EstimatorScheme scheme_;
  GeometricTruncation dist_;
  std::map<Key, LevelLadder> ladders_;
  std::map<WholeKey, EstimateRecord> whole_cache_;
  double ledger_ = 0.0;
};

// The multi-fidelity MCMC driver. Each iteration refreshes the model's frozen
// auxiliaries, updates K against mu(K) |pi_hat_K(theta)| (multi-fidelity mode
// only), then updates theta with the configured kernel against
// |pi_hat_K(theta)|, and records the sample with the sign of the estimate at
// its final (theta, K). Fidelity updates, state updates, auxiliary refreshes
// and initialization consume separate RNG streams derived from the seed, so
// single- and multi-fidelity runs are comparable on the state stream.
ChainResult run_mf_chain(const ChainConfig& config, TargetSequence& seq,
                         const std::function<void(const ChainSample&)>& on_sample = {});

struct TwoStageConfig {
  long iterations = 10'000;
  long burn_in = 2'000;
  long thin = 2;
  std::uint64_t seed = 0;
  long k_hf = 100;
  long k_lf = 5;
  ProposalSpec proposal = GaussianRandomWalk{0.3};
  std::optional<State> init;
};

// Delayed-acceptance chain on the fixed pair (k_lf, k_hf); stage-1 rejections
// cost no high-fidelity evaluations.
ChainResult run_two_stage_chain(const TwoStageConfig& config, TargetSequence& seq);

// Keeps positions burn_in, burn_in + thin, burn_in + 2*thin, ... in order.
std::vector<ChainSample> apply_burn_thin(const std::vector<ChainSample>& samples,
                                         long burn_in, long thin);

using FunctionalFn = std::function<double(const State&)>;

// (sum_t sigma_t h(theta_t)) / (sum_t sigma_t). Zero-sign samples contribute
// to neither sum; a zero denominator (or empty input) raises an error
// suggesting a longer run.
double sign_corrected_estimate(const std::vector<ChainSample>& samples,
                               const FunctionalFn& h);

double negative_sign_fraction(const std::vector<ChainSample>& samples);

// Prefix-wise sign-corrected estimates, one point per sample whose prefix has
// a nonzero sign sum; emitted against cumulative cost.
std::vector<std::pair<double, double>> running_functional(
    const std::vector<ChainSample>& samples, const FunctionalFn& h);

double mean_fidelity(const std::vector<ChainSample>& samples);

struct SaConfig {
  long iterations = 5'000;
  std::uint64_t seed = 0;
  FidelityMode mode = FidelityMode::MultiFidelity;
  double gamma0 = 0.25;
  long fixed_fidelity = 1;
  long k_max = GeometricTruncation::kDefaultKMax;
  double t0 = 1.0;
  ProposalSpec proposal = TruncatedNormalWalk{0.3, 0.0};
  State init;
  long max_energy_evals = 0;  // 0 = unlimited; otherwise stop once reached
};

struct SaResult {
  State best_state;
  double best_energy = 0.0;
  long energy_evals = 0;
  double total_cost = 0.0;
  long iterations_run = 0;
  // (energy evaluations so far, best state so far) after each iteration.
  std::vector<std::pair<long, State>> best_trace;
};

// Multi-fidelity simulated annealing under the logarithmic schedule
// T(t) = t0 / log(t + e): a fidelity move then a state move per iteration,
// tracking the best (lowest-energy) evaluated state.
SaResult run_mf_sa(const SaConfig& config, EnergySequence& seq);

}  // namespace mfmc

#endif  // MFMC_CHAIN_HPP
