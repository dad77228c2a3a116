#include "mfmc/chain.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace mfmc {

namespace {

constexpr std::uint64_t kStateStream = 0x7374617465ULL;  // "state"
constexpr std::uint64_t kFidelityStream = 0x666964ULL;   // "fid"
constexpr std::uint64_t kAuxStream = 0x617578ULL;        // "aux"
constexpr std::uint64_t kInitStream = 0x696e6974ULL;     // "init"

}  // namespace

void ChainConfig::validate() const {
  if (iterations < 1) throw std::invalid_argument("ChainConfig: iterations must be >= 1");
  if (burn_in < 0 || burn_in >= iterations) {
    throw std::invalid_argument("ChainConfig: need 0 <= burn_in < iterations");
  }
  if (thin < 1) throw std::invalid_argument("ChainConfig: thin must be >= 1");
  if (mode == FidelityMode::MultiFidelity && (!(gamma0 > 0.0) || !(gamma0 < 1.0))) {
    throw std::invalid_argument("ChainConfig: gamma0 must be in (0,1)");
  }
  if (mode == FidelityMode::SingleFidelity && fixed_fidelity < 1) {
    throw std::invalid_argument("ChainConfig: fixed fidelity must be >= 1");
  }
  if (k_max < 1) throw std::invalid_argument("ChainConfig: k_max must be >= 1");
}

EstimateProvider::EstimateProvider(TargetSequence& seq, FidelityMode mode,
                                   EstimatorScheme scheme,
                                   const GeometricTruncation& dist)
    : seq_(seq), mode_(mode), scheme_(scheme), dist_(dist) {}

EstimateProvider::LevelLadder& EstimateProvider::ladder_for(const State& theta) {
  Key key{theta, seq_.auxiliary_epoch()};
  auto it = ladders_.find(key);
  if (it != ladders_.end()) return it->second;
  LevelLadder ladder;
  ladder.cursor = seq_.cursor(theta);
  return ladders_.emplace(std::move(key), std::move(ladder)).first->second;
}

EstimateRecord EstimateProvider::at(const State& theta, long K) {
  if (K < 1) throw std::invalid_argument("EstimateProvider: K must be >= 1");

  if (mode_ == FidelityMode::MultiFidelity &&
      scheme_ == EstimatorScheme::RussianRoulette) {
    LevelLadder& ladder = ladder_for(theta);
    while (ladder.cursor->level() < K) {
      const long k = ladder.cursor->level() + 1;
      const double before = ladder.cursor->cost_accrued();
      const SignedLog inc = estimate_increment(*ladder.cursor, k);
      ladder.cost += ladder.cursor->cost_accrued() - before;
      ledger_ += ladder.cursor->cost_accrued() - before;
      const SignedLog weighted = mul(
          inc, SignedLog::from_log(
                   estimator_log_weight(EstimatorScheme::RussianRoulette, k, k, dist_)));
      const SignedLog prev =
          ladder.prefix.empty() ? SignedLog::zero() : ladder.prefix.back();
      ladder.prefix.push_back(add(prev, weighted));
    }
    EstimateRecord rec;
    rec.value = ladder.prefix[static_cast<std::size_t>(K - 1)];
    rec.fidelity = K;
    rec.cost = ladder.cost;  // cost of all levels materialized for this state
    rec.terms = K;
    return rec;
  }

  WholeKey key{theta, K, seq_.auxiliary_epoch()};
  auto it = whole_cache_.find(key);
  if (it != whole_cache_.end()) return it->second;

  EstimateRecord rec;
  if (mode_ == FidelityMode::MultiFidelity) {
    rec = estimate(seq_, theta, K, scheme_, dist_);
  } else {
    auto cursor = seq_.cursor(theta);
    const double log_pi = cursor->seek(K);
    if (std::isnan(log_pi) || log_pi == std::numeric_limits<double>::infinity()) {
      throw std::runtime_error("EstimateProvider: non-finite density at level " +
                               std::to_string(K));
    }
    rec.value = SignedLog::from_log(log_pi);
    rec.fidelity = K;
    rec.cost = cursor->cost_accrued();
    rec.terms = 1;
  }
  ledger_ += rec.cost;
  return whole_cache_.emplace(std::move(key), rec).first->second;
}

void EstimateProvider::begin_iteration(const State& current, long K) {
  const std::uint64_t epoch = seq_.auxiliary_epoch();
  {
    Key key{current, epoch};
    auto it = ladders_.find(key);
    std::map<Key, LevelLadder> kept;
    if (it != ladders_.end()) kept.emplace(key, std::move(it->second));
    ladders_ = std::move(kept);
  }
  {
    WholeKey key{current, K, epoch};
    auto it = whole_cache_.find(key);
    std::map<WholeKey, EstimateRecord> kept;
    if (it != whole_cache_.end()) kept.emplace(key, it->second);
    whole_cache_ = std::move(kept);
  }
}

ChainResult run_mf_chain(const ChainConfig& config, TargetSequence& seq,
                         const std::function<void(const ChainSample&)>& on_sample) {
  config.validate();
  const GeometricTruncation dist(
      config.mode == FidelityMode::MultiFidelity ? config.gamma0 : 0.5);

  Rng rng_state(stream_seed(config.seed, kStateStream));
  Rng rng_fid(stream_seed(config.seed, kFidelityStream));
  Rng rng_aux(stream_seed(config.seed, kAuxStream));
  Rng rng_init(stream_seed(config.seed, kInitStream));

  State theta = config.init ? *config.init : seq.sample_prior_state(rng_init);
  if (theta.size() != seq.dimension()) {
    throw std::invalid_argument("run_mf_chain: state dimension mismatch");
  }
  long fidelity = config.mode == FidelityMode::MultiFidelity
                      ? dist.sample(rng_fid, config.k_max)
                      : config.fixed_fidelity;

  if (config.sampler == SamplerKind::Ess && seq.prior_chol() == nullptr) {
    throw std::invalid_argument(
        "run_mf_chain: model does not expose a latent Gaussian prior for ESS");
  }

  EstimateProvider provider(seq, config.mode, config.scheme, dist);
  ChainResult result;
  result.samples.reserve(static_cast<std::size_t>(config.iterations));

  for (long t = 1; t <= config.iterations; ++t) {
    try {
      seq.refresh_auxiliaries(rng_aux);
      provider.begin_iteration(theta, fidelity);

      if (config.mode == FidelityMode::MultiFidelity) {
        const auto fres = fidelity_step(
            fidelity, config.k_max,
            [&](long k) { return provider.at(theta, k).value; }, dist, rng_fid);
        fidelity = fres.fidelity;
        result.diag.fidelity_proposals += fres.proposed ? 1 : 0;
        result.diag.fidelity_accepts += fres.accepted ? 1 : 0;
        result.diag.degenerate_fidelity_rejections += fres.degenerate_zero ? 1 : 0;
      }

      switch (config.sampler) {
        case SamplerKind::Mh: {
          auto res = mh_step(
              theta, [&](const State& s) { return provider.log_abs_at(s, fidelity); },
              config.proposal, rng_state);
          result.diag.theta_accepts += res.accepted ? 1 : 0;
          theta = std::move(res.state);
          break;
        }
        case SamplerKind::Slice: {
          auto res = slice_step(
              theta, [&](const State& s) { return provider.log_abs_at(s, fidelity); },
              config.slice, rng_state);
          result.diag.shrink_failures += res.shrink_failures;
          theta = std::move(res.state);
          break;
        }
        case SamplerKind::Ess: {
          theta = ess_step(
              theta,
              [&](const State& s) {
                return provider.log_abs_at(s, fidelity) - seq.log_prior(s);
              },
              *seq.prior_chol(), rng_state);
          break;
        }
      }

      ChainSample sample;
      sample.theta = theta;
      sample.fidelity = fidelity;
      sample.sign = provider.at(theta, fidelity).value.sign;
      sample.cum_cost = provider.ledger();
      sample.iter = t;
      if (on_sample) on_sample(sample);
      result.samples.push_back(std::move(sample));
    } catch (const std::exception& e) {
      throw std::runtime_error("run_mf_chain: iteration " + std::to_string(t) +
                               ": " + e.what());
    }
  }
  result.diag.total_cost = provider.ledger();
  return result;
}

ChainResult run_two_stage_chain(const TwoStageConfig& config, TargetSequence& seq) {
  if (config.iterations < 1 || config.burn_in < 0 ||
      config.burn_in >= config.iterations || config.thin < 1) {
    throw std::invalid_argument("run_two_stage_chain: bad iteration layout");
  }
  if (config.k_lf < 1 || config.k_hf < 1) {
    throw std::invalid_argument("run_two_stage_chain: fidelities must be >= 1");
  }

  Rng rng_state(stream_seed(config.seed, kStateStream));
  Rng rng_init(stream_seed(config.seed, kInitStream));
  State theta = config.init ? *config.init : seq.sample_prior_state(rng_init);

  double ledger = 0.0;
  // log pi_k = log prior + log L_k; unpicked below so stage 2 can drop priors.
  const auto log_lik_level = [&](const State& s, long k) {
    auto cursor = seq.cursor(s);
    const double log_pi = cursor->seek(k);
    ledger += cursor->cost_accrued();
    return log_pi - seq.log_prior(s);
  };

  double lik_lf_cur = log_lik_level(theta, config.k_lf);
  double lik_hf_cur = log_lik_level(theta, config.k_hf);

  ChainResult result;
  result.samples.reserve(static_cast<std::size_t>(config.iterations));

  for (long t = 1; t <= config.iterations; ++t) {
    State candidate = propose(config.proposal, theta, rng_state);
    const double lik_lf_cand = log_lik_level(candidate, config.k_lf);
    const double stage1 = seq.log_prior(candidate) + lik_lf_cand -
                          seq.log_prior(theta) - lik_lf_cur +
                          proposal_log_correction(config.proposal, theta, candidate);
    if (accept_log_ratio(stage1, rng_state)) {
      const double lik_hf_cand = log_lik_level(candidate, config.k_hf);
      // grouped so equal fidelities cancel exactly
      const double stage2 =
          (lik_hf_cand - lik_lf_cand) + (lik_lf_cur - lik_hf_cur);
      if (accept_log_ratio(stage2, rng_state)) {
        theta = std::move(candidate);
        lik_lf_cur = lik_lf_cand;
        lik_hf_cur = lik_hf_cand;
        ++result.diag.theta_accepts;
      }
    }
    ChainSample sample;
    sample.theta = theta;
    sample.fidelity = config.k_hf;
    sample.sign = +1;
    sample.cum_cost = ledger;
    sample.iter = t;
    result.samples.push_back(std::move(sample));
  }
  result.diag.total_cost = ledger;
  return result;
}

std::vector<ChainSample> apply_burn_thin(const std::vector<ChainSample>& samples,
                                         long burn_in, long thin) {
  if (burn_in < 0 || thin < 1) {
    throw std::invalid_argument("apply_burn_thin: need burn_in >= 0 and thin >= 1");
  }
  std::vector<ChainSample> out;
  for (std::size_t i = static_cast<std::size_t>(burn_in); i < samples.size();
       i += static_cast<std::size_t>(thin)) {
    out.push_back(samples[i]);
  }
  return out;
}

double sign_corrected_estimate(const std::vector<ChainSample>& samples,
                               const FunctionalFn& h) {
  if (samples.empty()) {
    throw std::invalid_argument("sign_corrected_estimate: no samples");
  }
  double num = 0.0;
  double den = 0.0;
  for (const auto& s : samples) {
    if (s.sign == 0) continue;
    num += s.sign * h(s.theta);
    den += s.sign;
  }
  if (den == 0.0) {
    throw std::runtime_error(
        "sign_corrected_estimate: sign sum is zero; run a longer chain");
  }
  return num / den;
}

double negative_sign_fraction(const std::vector<ChainSample>& samples) {
  if (samples.empty()) {
    throw std::invalid_argument("negative_sign_fraction: no samples");
  }
  double neg = 0.0;
  for (const auto& s : samples) neg += s.sign == -1 ? 1.0 : 0.0;
  return neg / static_cast<double>(samples.size());
}

std::vector<std::pair<double, double>> running_functional(
    const std::vector<ChainSample>& samples, const FunctionalFn& h) {
  std::vector<std::pair<double, double>> out;
  double num = 0.0;
  double den = 0.0;
  for (const auto& s : samples) {
    if (s.sign != 0) {
      num += s.sign * h(s.theta);
      den += s.sign;
    }
    if (den != 0.0) out.emplace_back(s.cum_cost, num / den);
  }
  return out;
}

double mean_fidelity(const std::vector<ChainSample>& samples) {
  if (samples.empty()) throw std::invalid_argument("mean_fidelity: no samples");
  double s = 0.0;
  for (const auto& sample : samples) s += static_cast<double>(sample.fidelity);
  return s / static_cast<double>(samples.size());
}

SaResult run_mf_sa(const SaConfig& config, EnergySequence& seq) {
  if (config.iterations < 1) {
    throw std::invalid_argument("run_mf_sa: iterations must be >= 1");
  }
  if (config.init.size() != seq.dimension()) {
    throw std::invalid_argument("run_mf_sa: init dimension mismatch");
  }
  const GeometricTruncation dist(
      config.mode == FidelityMode::MultiFidelity ? config.gamma0 : 0.5);
  const AnnealSchedule schedule{config.t0};

  Rng rng_state(stream_seed(config.seed, kStateStream));
  Rng rng_fid(stream_seed(config.seed, kFidelityStream));

  State theta = config.init;
  long fidelity = config.mode == FidelityMode::MultiFidelity
                      ? dist.sample(rng_fid, config.k_max)
                      : config.fixed_fidelity;

  SaResult res;
  res.best_state = theta;
  res.best_energy = std::numeric_limits<double>::infinity();

  // Per-iteration memo so the fidelity and state moves share evaluations.
  std::map<std::pair<long, State>, double> memo;
  const auto energy_at = [&](const State& s, long k) {
    auto key = std::make_pair(k, s);
    auto it = memo.find(key);
    if (it != memo.end()) return it->second;
    const double e = seq.energy(s, k);
    ++res.energy_evals;
    res.total_cost += seq.cost(k);
    if (e < res.best_energy) {
      res.best_energy = e;
      res.best_state = s;
    }
    return memo.emplace(std::move(key), e).first->second;
  };

  for (long t = 1; t <= config.iterations; ++t) {
    if (config.max_energy_evals > 0 && res.energy_evals >= config.max_energy_evals) {
      break;
    }
    const double temperature = schedule.temperature(t);
    // Memo survives one iteration: the current (theta, K) entry carries over.
    std::map<std::pair<long, State>, double> carried;
    if (auto it = memo.find({fidelity, theta}); it != memo.end()) {
      carried.emplace(it->first, it->second);
    }
    memo = std::move(carried);

    if (config.mode == FidelityMode::MultiFidelity) {
      const auto fres = mf_sa_fidelity_step(theta, fidelity, config.k_max, energy_at,
                                            temperature, dist, rng_fid);
      fidelity = fres.fidelity;
    }
    auto step = mf_sa_theta_step(theta, fidelity, energy_at, temperature,
                                 config.proposal, rng_state);
    theta = std::move(step.state);
    res.iterations_run = t;
    res.best_trace.emplace_back(res.energy_evals, res.best_state);
  }
  return res;
}

}  // namespace mfmc
