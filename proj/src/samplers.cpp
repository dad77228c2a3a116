#include "mfmc/samplers.hpp"

#include <cmath>
#include <stdexcept>

namespace mfmc {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr long kTruncatedRejectionCap = 100'000;

// log Phi(x) via erfc; fine for the mild arguments seen here.
double log_norm_cdf(double x) {
  return std::log(0.5 * std::erfc(-x / std::numbers::sqrt2));
}

}  // namespace

State propose(const ProposalSpec& spec, const State& from, Rng& rng) {
  return std::visit(
      [&](const auto& p) -> State {
        using T = std::decay_t<decltype(p)>;
        if (!(p.scale > 0.0)) {
          throw std::invalid_argument("propose: proposal scale must be positive");
        }
        if constexpr (std::is_same_v<T, GaussianRandomWalk>) {
          State out(from.size());
          for (std::size_t i = 0; i < from.size(); ++i) {
            out[i] = from[i] + p.scale * rng.normal();
          }
          return out;
        } else {
          State out(from.size());
          for (long tries = 0; tries < kTruncatedRejectionCap; ++tries) {
            bool ok = true;
            for (std::size_t i = 0; i < from.size(); ++i) {
              out[i] = from[i] + p.scale * rng.normal();
              if (out[i] < p.lower) ok = false;
            }
            if (ok) return out;
          }
          throw std::runtime_error("propose: truncated-normal rejection loop stalled");
        }
      },
      spec);
}

double proposal_log_correction(const ProposalSpec& spec, const State& from,
                               const State& to) {
  if (const auto* p = std::get_if<TruncatedNormalWalk>(&spec)) {
    // The normal kernel is symmetric; only the normalizers differ:
    // q(x'|x) = N(x'; x, s^2) / prod_i Phi((x_i - lower)/s) on x' >= lower,
    // so log q(from|to) - log q(to|from) = sum_i log Phi(from) - log Phi(to).
    double corr = 0.0;
    for (std::size_t i = 0; i < from.size(); ++i) {
      corr += log_norm_cdf((from[i] - p->lower) / p->scale) -
              log_norm_cdf((to[i] - p->lower) / p->scale);
    }
    return corr;
  }
  return 0.0;
}

bool accept_log_ratio(double log_r, Rng& rng) {
  if (!(log_r > kNegInf)) return false;  // -inf or NaN: certain rejection
  if (log_r >= 0.0) return true;
  return std::log(rng.uniform()) < log_r;
}

MhResult mh_step(const State& theta, const LogDensityFn& log_target,
                 const ProposalSpec& proposal, Rng& rng) {
  const double log_cur = log_target(theta);
  State candidate = propose(proposal, theta, rng);
  const double log_cand = log_target(candidate);
  const double log_r =
      log_cand - log_cur + proposal_log_correction(proposal, theta, candidate);
  if (accept_log_ratio(log_r, rng)) return {std::move(candidate), true};
  return {theta, false};
}

SliceResult slice_step(const State& theta, const LogDensityFn& log_target,
                       const SliceSpec& spec, Rng& rng) {
  if (!(spec.width > 0.0)) {
    throw std::invalid_argument("slice_step: width must be positive");
  }
  SliceResult res;
  res.state = theta;
  double log_cur = log_target(res.state);
  ++res.evals;

  for (std::size_t dim = 0; dim < theta.size(); ++dim) {
    const double x0 = res.state[dim];
    const double level = log_cur + std::log(rng.uniform());

    const auto eval_at = [&](double x) {
      State probe = res.state;
      probe[dim] = x;
      ++res.evals;
      return log_target(probe);
    };

    // Stepping out.
    const double r = rng.uniform();
    double lo = x0 - r * spec.width;
    double hi = x0 + (1.0 - r) * spec.width;
    for (long j = 0; j < spec.max_stepout && eval_at(lo) > level; ++j) {
      lo -= spec.width;
    }
    for (long j = 0; j < spec.max_stepout && eval_at(hi) > level; ++j) {
      hi += spec.width;
    }

    // Shrinkage toward x0.
    bool placed = false;
    for (long j = 0; j < spec.max_shrink; ++j) {
      const double x = rng.uniform(lo, hi);
      const double log_x = eval_at(x);
      if (log_x >= level) {
        res.state[dim] = x;
        log_cur = log_x;
        placed = true;
        break;
      }
      if (x < x0) {
        lo = x;
      } else {
        hi = x;
      }
    }
    if (!placed) ++res.shrink_failures;  // coordinate left unchanged
  }
  return res;
}

State ess_step(const State& f, const LogDensityFn& log_lik, const Matrix& chol,
               Rng& rng, long max_iterations) {
  if (chol.rows() != f.size()) {
    throw std::invalid_argument("ess_step: state/chol dimension mismatch");
  }
  const Vector nu = mvn_sample(chol, rng);
  const double log_y = log_lik(f) + std::log(rng.uniform());

  double angle = rng.uniform(0.0, 2.0 * std::numbers::pi);
  double angle_min = angle - 2.0 * std::numbers::pi;
  double angle_max = angle;

  State candidate(f.size());
  for (long it = 0; it < max_iterations; ++it) {
    const double c = std::cos(angle);
    const double s = std::sin(angle);
    for (std::size_t i = 0; i < f.size(); ++i) candidate[i] = f[i] * c + nu[i] * s;
    if (log_lik(candidate) > log_y) return candidate;
    if (angle < 0.0) {
      angle_min = angle;
    } else {
      angle_max = angle;
    }
    angle = rng.uniform(angle_min, angle_max);
  }
  throw std::runtime_error("ess_step: no acceptance within the iteration guard");
}

FidelityResult fidelity_step(long K, long k_max,
                             const std::function<SignedLog(long)>& estimate_at,
                             const GeometricTruncation& dist, Rng& rng) {
  if (K < 1) throw std::invalid_argument("fidelity_step: K must be >= 1");
  FidelityResult res;
  res.fidelity = K;
  const long candidate = K + (rng.coin() ? 1 : -1);
  if (candidate < 1 || candidate > k_max) return res;  // boundary: plain rejection
  res.proposed = true;

  const SignedLog cur = estimate_at(K);
  const SignedLog cand = estimate_at(candidate);
  if (cur.is_zero() && cand.is_zero()) {
    res.degenerate_zero = true;
    return res;
  }
  const double log_r =
      dist.log_pmf(candidate) + cand.log_abs - dist.log_pmf(K) - cur.log_abs;
  if (accept_log_ratio(log_r, rng)) {
    res.fidelity = candidate;
    res.accepted = true;
  }
  return res;
}

TwoStageResult two_stage_mh_step(const State& theta, const LogDensityFn& log_prior,
                                 const LogDensityFn& log_lik_lf,
                                 const LogDensityFn& log_lik_hf,
                                 const ProposalSpec& proposal, Rng& rng) {
  TwoStageResult res;
  res.state = theta;

  State candidate = propose(proposal, theta, rng);
  const double stage1 = log_prior(candidate) + log_lik_lf(candidate) -
                        log_prior(theta) - log_lik_lf(theta) +
                        proposal_log_correction(proposal, theta, candidate);
  if (!accept_log_ratio(stage1, rng)) return res;

  res.reached_stage2 = true;
  // Grouped per state so identical low/high fidelities cancel exactly and
  // the ratio collapses to 1 with no residual rounding.
  const double stage2 = (log_lik_hf(candidate) - log_lik_lf(candidate)) +
                        (log_lik_lf(theta) - log_lik_hf(theta));
  if (!accept_log_ratio(stage2, rng)) return res;

  res.state = std::move(candidate);
  res.accepted = true;
  return res;
}

MhResult mf_sa_theta_step(const State& theta, long K, const EnergyFn& energy,
                          double temperature, const ProposalSpec& proposal,
                          Rng& rng) {
  if (!(temperature > 0.0)) {
    throw std::invalid_argument("mf_sa_theta_step: temperature must be positive");
  }
  State candidate = propose(proposal, theta, rng);
  const double log_r = -(energy(candidate, K) - energy(theta, K)) / temperature;
  if (accept_log_ratio(log_r, rng)) return {std::move(candidate), true};
  return {theta, false};
}

FidelityResult mf_sa_fidelity_step(const State& theta, long K, long k_max,
                                   const EnergyFn& energy, double temperature,
                                   const GeometricTruncation& dist, Rng& rng) {
  if (!(temperature > 0.0)) {
    throw std::invalid_argument("mf_sa_fidelity_step: temperature must be positive");
  }
  if (K < 1) throw std::invalid_argument("mf_sa_fidelity_step: K must be >= 1");
  FidelityResult res;
  res.fidelity = K;
  const long candidate = K + (rng.coin() ? 1 : -1);
  if (candidate < 1 || candidate > k_max) return res;
  res.proposed = true;

  const double log_r =
      -(energy(theta, candidate) - energy(theta, K)) / temperature +
      (dist.log_pmf(candidate) - dist.log_pmf(K)) / temperature;
  if (accept_log_ratio(log_r, rng)) {
    res.fidelity = candidate;
    res.accepted = true;
  }
  return res;
}

}  // namespace mfmc
