#ifndef MFMC_SAMPLERS_HPP
#define MFMC_SAMPLERS_HPP

#include <cmath>
#include <functional>
#include <numbers>
#include <variant>

#include "mfmc/signed_log.hpp"
#include "mfmc/target_sequence.hpp"
#include "mfmc/truncation.hpp"

namespace mfmc {

using LogDensityFn = std::function<double(const State&)>;

// N(theta' | theta, scale^2 I); symmetric.
struct GaussianRandomWalk {
  double scale = 0.3;
};

// Componentwise normal walk truncated below at `lower`, implemented by
// rejection from the untruncated normal. Asymmetric: the acceptance-ratio
// correction is log q(from|to) - log q(to|from).
struct TruncatedNormalWalk {
  double scale = 0.3;
  double lower = 0.0;
};

using ProposalSpec = std::variant<GaussianRandomWalk, TruncatedNormalWalk>;

State propose(const ProposalSpec& spec, const State& from, Rng& rng);
double proposal_log_correction(const ProposalSpec& spec, const State& from,
                               const State& to);

// Accept/reject on a log ratio with deterministic short-circuits: a certain
// accept (log_r >= 0) or certain reject (log_r = -inf or NaN) consumes no
// randomness. Chains built from these kernels are therefore comparable
// trace-for-trace when their ratios collapse.
bool accept_log_ratio(double log_r, Rng& rng);

struct MhResult {
  State state;
  bool accepted = false;
};

// Random-walk Metropolis-Hastings; asymmetric proposals get the q-ratio
// correction. A non-finite log target at the proposal is a certain rejection.
MhResult mh_step(const State& theta, const LogDensityFn& log_target,
                 const ProposalSpec& proposal, Rng& rng);

struct SliceSpec {
  double width = 1.0;
  long max_stepout = 50;
  long max_shrink = 100;
};

struct SliceResult {
  State state;
  long evals = 0;            // log-target evaluations performed
  long shrink_failures = 0;  // dimensions where max_shrink was exhausted
};

// Univariate stepping-out/shrinkage slice sampling, applied to each
// coordinate in turn. The returned state always satisfies
// log_target(state) >= level for the level drawn in its coordinate update;
// an exhausted shrink loop leaves that coordinate unchanged and bumps the
// diagnostic counter.
SliceResult slice_step(const State& theta, const LogDensityFn& log_target,
                       const SliceSpec& spec, Rng& rng);

// Elliptical slice sampling for f ~ N(0, Sigma) priors, Sigma = chol chol^T.
// Only the log likelihood is ever evaluated. Acceptance is strict
// (log L(f') > log y); the bracket [theta-2pi, theta] shrinks toward 0.
State ess_step(const State& f, const LogDensityFn& log_lik, const Matrix& chol,
               Rng& rng, long max_iterations = 10'000);

struct FidelityResult {
  long fidelity = 0;
  bool accepted = false;
  bool proposed = false;          // false when the +/-1 walk left the support
  bool degenerate_zero = false;   // both estimates were canonical zero
};

// Fair-coin +/-1 random walk on the fidelity, targeting
// pi(K | theta) ~ mu(K) |pi_hat_K(theta)|. Proposals to 0 or past k_max are
// rejected outright. `estimate_at` supplies pi_hat_k(theta) for the fixed
// current state (typically through a caching provider).
FidelityResult fidelity_step(long K, long k_max,
                             const std::function<SignedLog(long)>& estimate_at,
                             const GeometricTruncation& dist, Rng& rng);

struct TwoStageResult {
  State state;
  bool accepted = false;
  bool reached_stage2 = false;
};

// Delayed-acceptance M-H: stage 1 screens with the low-fidelity likelihood;
// only survivors pay for a high-fidelity evaluation, accepted with
// min(1, [L_hf(x') L_lf(x)] / [L_hf(x) L_lf(x')]).
TwoStageResult two_stage_mh_step(const State& theta, const LogDensityFn& log_prior,
                                 const LogDensityFn& log_lik_lf,
                                 const LogDensityFn& log_lik_hf,
                                 const ProposalSpec& proposal, Rng& rng);

// T(t) = t0 / log(t + e); positive and nonincreasing in t >= 0.
struct AnnealSchedule {
  double t0 = 1.0;
  double temperature(long t) const {
    return t0 / std::log(static_cast<double>(t) + std::numbers::e);
  }
};

using EnergyFn = std::function<double(const State&, long k)>;

// Annealed state move: accept with min(1, exp(-(E_K(x') - E_K(x)) / T)).
// No proposal correction, by construction of the annealing recipe.
MhResult mf_sa_theta_step(const State& theta, long K, const EnergyFn& energy,
                          double temperature, const ProposalSpec& proposal,
                          Rng& rng);

// Annealed fidelity move: +/-1 walk accepted with
// min(1, exp(-(E_K'(x) - E_K(x)) / T) * (mu(K')/mu(K))^(1/T)).
FidelityResult mf_sa_fidelity_step(const State& theta, long K, long k_max,
                                   const EnergyFn& energy, double temperature,
                                   const GeometricTruncation& dist, Rng& rng);

}  // namespace mfmc

#endif  // MFMC_SAMPLERS_HPP
