#include "mfmc/experiments.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <numbers>
#include <ostream>
#include <thread>

#include "mfmc/cg.hpp"
#include "mfmc/estimator.hpp"
#include "mfmc/io/datasets.hpp"
#include "mfmc/io/writers.hpp"
#include "mfmc/models/gp_regression.hpp"
#include "mfmc/models/heat_pde.hpp"
#include "mfmc/models/lgcp.hpp"
#include "mfmc/models/lotka_volterra.hpp"
#include "mfmc/models/synthetic.hpp"
#include "mfmc/models/toy.hpp"
#include "mfmc/ode.hpp"
#include "mfmc/quadrature.hpp"

namespace mfmc {

namespace {

constexpr std::uint64_t kDataStream = 0x64617461ULL;  // "data"

using json = nlohmann::json;

struct NamedFunctional {
  std::string name;
  FunctionalFn fn;
};

json chain_block(const std::vector<ChainSample>& kept,
                 const std::vector<NamedFunctional>& extras, std::size_t dim) {
  json block;
  block["kept_samples"] = kept.size();
  block["negative_sign_fraction"] = negative_sign_fraction(kept);
  block["mean_fidelity"] = mean_fidelity(kept);
  block["total_cost"] = kept.back().cum_cost;
  for (std::size_t d = 0; d < dim; ++d) {
    const auto comp = [d](const State& s) { return s[d]; };
    const auto comp2 = [d](const State& s) { return s[d] * s[d]; };
    const double m = sign_corrected_estimate(kept, comp);
    const double m2 = sign_corrected_estimate(kept, comp2);
    block["mean"].push_back(m);
    block["std"].push_back(std::sqrt(std::max(0.0, m2 - m * m)));
  }
  for (const auto& f : extras) {
    block["functionals"][f.name] = sign_corrected_estimate(kept, f.fn);
  }
  return block;
}

json summarize(const std::vector<ChainResult>& runs, long burn, long thin,
               const std::vector<NamedFunctional>& extras) {
  json out;
  std::vector<ChainSample> pooled;
  const std::size_t dim = runs.front().samples.front().theta.size();
  for (const auto& run : runs) {
    auto kept = apply_burn_thin(run.samples, burn, thin);
    out["chains"].push_back(chain_block(kept, extras, dim));
    pooled.insert(pooled.end(), kept.begin(), kept.end());
  }
  out["pooled"] = chain_block(pooled, extras, dim);
  double total = 0.0;
  for (const auto& run : runs) total += run.diag.total_cost;
  out["pooled"]["total_cost"] = total;
  return out;
}

void write_artifacts(const std::vector<ChainResult>& runs, const json& summary,
                     const std::string& out_dir) {
  if (out_dir.empty()) return;
  std::filesystem::create_directories(out_dir);
  for (std::size_t c = 0; c < runs.size(); ++c) {
    write_samples_csv(runs[c].samples,
                      out_dir + "/samples_chain" + std::to_string(c) + ".csv");
  }
  write_json_atomic(summary, out_dir + "/summary.json");
}

ChainConfig chain_config_from(const ExperimentConfig& cfg) {
  ChainConfig out;
  out.iterations = cfg.iterations;
  out.burn_in = cfg.burn_in;
  out.thin = cfg.thin;
  out.seed = cfg.seed;
  out.sampler = cfg.sampler;
  out.mode = cfg.mode == RunMode::SingleFidelity ? FidelityMode::SingleFidelity
                                                 : FidelityMode::MultiFidelity;
  out.gamma0 = cfg.gamma0;
  out.fixed_fidelity = cfg.fixed_k;
  out.k_max = cfg.k_max;
  out.scheme = cfg.scheme;
  out.proposal = GaussianRandomWalk{cfg.proposal_scale};
  out.slice = SliceSpec{cfg.slice_width, 50, 100};
  return out;
}

std::vector<ChainResult> run_two_stage_chains(
    const std::function<std::unique_ptr<TargetSequence>()>& make_model,
    const ExperimentConfig& cfg) {
  std::vector<ChainResult> runs(static_cast<std::size_t>(cfg.chains));
  for (long c = 0; c < cfg.chains; ++c) {
    TwoStageConfig ts;
    ts.iterations = cfg.iterations;
    ts.burn_in = cfg.burn_in;
    ts.thin = cfg.thin;
    ts.seed = chain_seed(cfg.seed, c);
    ts.k_hf = cfg.k_hf;
    ts.k_lf = cfg.k_lf;
    ts.proposal = GaussianRandomWalk{cfg.proposal_scale};
    auto model = make_model();
    runs[static_cast<std::size_t>(c)] = run_two_stage_chain(ts, *model);
  }
  return runs;
}

json run_sampling_experiment(
    const ExperimentConfig& cfg,
    const std::function<std::unique_ptr<TargetSequence>()>& make_model,
    const std::vector<NamedFunctional>& extras, const std::string& out_dir) {
  std::vector<ChainResult> runs;
  if (cfg.mode == RunMode::TwoStage) {
    runs = run_two_stage_chains(make_model, cfg);
  } else {
    runs = run_chains(make_model, chain_config_from(cfg), cfg.chains);
  }
  json summary = summarize(runs, cfg.burn_in, cfg.thin, extras);
  summary["config"] = config_echo(cfg);
  summary["version"] = kVersion;
  write_artifacts(runs, summary, out_dir);
  return summary;
}

json run_toy(const ExperimentConfig& cfg, const std::string& out_dir) {
  Rng data_rng(stream_seed(cfg.seed, kDataStream));
  auto ds = toy_synthetic(static_cast<std::size_t>(cfg.toy.n), data_rng);
  const auto post = ToyConjugateModel(ds.data).closed_form_posterior();

  auto summary = run_sampling_experiment(
      cfg, [&ds] { return std::make_unique<ToyConjugateModel>(ds.data); }, {},
      out_dir);
  summary["reference"]["posterior_mean"] = post.mean;
  summary["reference"]["posterior_std"] = std::sqrt(post.variance);
  summary["reference"]["true_mean"] = ds.true_mean;
  if (!out_dir.empty()) write_json_atomic(summary, out_dir + "/summary.json");
  return summary;
}

json run_gp(const ExperimentConfig& cfg, const std::string& out_dir) {
  Rng data_rng(stream_seed(cfg.seed, kDataStream));
  auto ds = gp_synthetic(static_cast<std::size_t>(cfg.gp.n), cfg.gp.theta0,
                         cfg.gp.noise_var, cfg.gp.x_max, data_rng);
  GpConfig gp_cfg;
  gp_cfg.noise_var = cfg.gp.noise_var;
  gp_cfg.prior_log_mean = cfg.gp.nu0;
  gp_cfg.prior_log_var = cfg.gp.nu1;
  gp_cfg.precond_rank = cfg.gp.precond_rank;

  auto summary = run_sampling_experiment(
      cfg,
      [&ds, gp_cfg] {
        return std::make_unique<GpRegressionModel>(ds.x, ds.y, gp_cfg);
      },
      {}, out_dir);
  summary["reference"]["true_lengthscale"] = ds.true_lengthscale;
  if (!out_dir.empty()) write_json_atomic(summary, out_dir + "/summary.json");
  return summary;
}

json run_lgcp(const ExperimentConfig& cfg, const std::string& out_dir) {
  Vector events = load_coal_dataset(cfg.lgcp.dataset);
  for (double& t : events) t -= cfg.lgcp.origin;

  LgcpConfig model_cfg;
  model_cfg.lengthscale = cfg.lgcp.lengthscale;
  model_cfg.kernel_variance = cfg.lgcp.kernel_variance;
  model_cfg.offset_c = cfg.lgcp.offset_c;
  if (cfg.lgcp.domain_hi > cfg.lgcp.domain_lo) {
    model_cfg.domain_lo = cfg.lgcp.domain_lo;
    model_cfg.domain_hi = cfg.lgcp.domain_hi;
  } else {
    model_cfg.domain_lo = std::floor(events.front()) - 1.0;
    model_cfg.domain_hi = std::ceil(events.back()) + 1.0;
  }

  // Intensity functional exp(f_hat(x*)) through the conditional-mean
  // smoother; the weights come from a throwaway model instance.
  const LgcpModel probe(events, model_cfg);
  const Vector w = probe.smoother_weights(cfg.lgcp.query);
  std::vector<NamedFunctional> extras;
  extras.push_back({"intensity_at_query", [w](const State& f) {
                      return std::exp(dot(w, f));
                    }});

  auto summary = run_sampling_experiment(
      cfg,
      [&events, model_cfg] {
        return std::make_unique<LgcpModel>(events, model_cfg);
      },
      extras, out_dir);
  summary["reference"]["query"] = cfg.lgcp.query;
  summary["reference"]["events"] = events.size();
  if (!out_dir.empty()) write_json_atomic(summary, out_dir + "/summary.json");
  return summary;
}

json run_lv(const ExperimentConfig& cfg, const std::string& out_dir) {
  LvConfig model_cfg;
  model_cfg.noise_sigma = cfg.lv.sigma;
  model_cfg.dt_s = cfg.lv.dt_s;
  model_cfg.dt_c = cfg.lv.dt_c;
  model_cfg.method = cfg.lv.solver == "euler" ? OdeMethod::Euler : OdeMethod::Rk4;

  Vector times;
  Matrix obs;
  json reference;
  if (cfg.lv.dataset.empty()) {
    Rng data_rng(stream_seed(cfg.seed, kDataStream));
    auto ds = lv_synthetic({1.5, 1.0, 3.0, 1.0}, cfg.lv.synth_noise,
                           static_cast<std::size_t>(cfg.lv.synth_n),
                           cfg.lv.synth_t_max, data_rng, model_cfg);
    times = ds.times;
    obs = ds.observations;
    reference["true_params"] = ds.true_params;
  } else {
    auto lh = load_lynx_hare(cfg.lv.dataset);
    // Known initial condition: the first row; remaining rows are data.
    model_cfg.z0 = {lh.hare.front(), lh.lynx.front()};
    times.resize(lh.years.size() - 1);
    obs = Matrix(lh.years.size() - 1, 2);
    for (std::size_t i = 1; i < lh.years.size(); ++i) {
      times[i - 1] = static_cast<double>(lh.years[i] - lh.years.front());
      obs(i - 1, 0) = lh.hare[i];
      obs(i - 1, 1) = lh.lynx[i];
    }
    reference["dataset"] = cfg.lv.dataset;
  }

  auto summary = run_sampling_experiment(
      cfg,
      [&times, &obs, model_cfg] {
        return std::make_unique<LotkaVolterraModel>(times, obs, model_cfg);
      },
      {}, out_dir);

  // Report natural-parameter means alongside the centered log-state means.
  const LotkaVolterraModel probe(times, obs, model_cfg);
  json nat;
  for (std::size_t d = 0; d < 4; ++d) {
    const double mean_bar = summary["pooled"]["mean"][d].get<double>();
    nat.push_back(std::exp(mean_bar + model_cfg.prior_mean[d]));
  }
  summary["pooled"]["params_at_mean"] = nat;
  summary["reference"] = reference;
  if (!out_dir.empty()) write_json_atomic(summary, out_dir + "/summary.json");
  return summary;
}

json run_pde(const ExperimentConfig& cfg, const std::string& out_dir) {
  HeatPdeProblem problem(cfg.pde.alpha0, cfg.pde.beta0);

  SaConfig sa;
  sa.iterations = cfg.iterations;
  sa.seed = cfg.seed;
  sa.mode = cfg.mode == RunMode::SingleFidelity ? FidelityMode::SingleFidelity
                                                : FidelityMode::MultiFidelity;
  sa.gamma0 = cfg.gamma0;
  sa.fixed_fidelity = cfg.fixed_k;
  sa.k_max = cfg.k_max;
  sa.t0 = cfg.pde.t0;
  sa.proposal = TruncatedNormalWalk{cfg.proposal_scale, 0.0};
  sa.init = {cfg.pde.init_alpha, cfg.pde.init_beta};
  sa.max_energy_evals = cfg.pde.max_energy_evals;

  auto res = run_mf_sa(sa, problem);
  json summary;
  summary["best_state"] = res.best_state;
  summary["best_energy"] = res.best_energy;
  summary["energy_evals"] = res.energy_evals;
  summary["total_cost"] = res.total_cost;
  summary["iterations_run"] = res.iterations_run;
  summary["reference"]["alpha0"] = cfg.pde.alpha0;
  summary["reference"]["beta0"] = cfg.pde.beta0;
  summary["config"] = config_echo(cfg);
  summary["version"] = kVersion;
  if (!out_dir.empty()) {
    std::filesystem::create_directories(out_dir);
    write_json_atomic(summary, out_dir + "/summary.json");
  }
  return summary;
}

}  // namespace

long thread_budget() {
  if (const char* env = std::getenv("MFMC_THREADS")) {
    const long n = std::strtol(env, nullptr, 10);
    if (n >= 1) return n;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<long>(hw);
}

std::uint64_t chain_seed(std::uint64_t base, long chain_index) {
  return stream_seed(base, 0xC4A10000ULL + static_cast<std::uint64_t>(chain_index));
}

std::vector<ChainResult> run_chains(
    const std::function<std::unique_ptr<TargetSequence>()>& make_model,
    const ChainConfig& base, long n_chains, long max_threads) {
  if (n_chains < 1) throw std::invalid_argument("run_chains: need n_chains >= 1");
  const long budget = max_threads >= 1 ? max_threads : thread_budget();
  std::vector<ChainResult> results(static_cast<std::size_t>(n_chains));
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(n_chains));

  std::atomic<long> next{0};
  const auto worker = [&] {
    while (true) {
      const long c = next.fetch_add(1);
      if (c >= n_chains) return;
      try {
        auto model = make_model();
        ChainConfig cfg = base;
        cfg.seed = chain_seed(base.seed, c);
        results[static_cast<std::size_t>(c)] = run_mf_chain(cfg, *model);
      } catch (...) {
        errors[static_cast<std::size_t>(c)] = std::current_exception();
      }
    }
  };

  const long n_workers = std::min(budget, n_chains);
  if (n_workers <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(n_workers));
    for (long i = 0; i < n_workers; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  for (auto& err : errors) {
    if (err) std::rethrow_exception(err);
  }
  return results;
}

json config_echo(const ExperimentConfig& cfg) {
  json j;
  j["experiment"] = experiment_name(cfg.experiment);
  j["sampler"] = cfg.sampler == SamplerKind::Mh
                     ? "mh"
                     : (cfg.sampler == SamplerKind::Slice ? "slice" : "ess");
  j["mode"] = cfg.mode == RunMode::SingleFidelity
                  ? "single-fidelity"
                  : (cfg.mode == RunMode::MultiFidelity ? "multi-fidelity"
                                                        : "two-stage");
  j["chains"] = cfg.chains;
  j["iterations"] = cfg.iterations;
  j["burn_in"] = cfg.burn_in;
  j["thin"] = cfg.thin;
  j["seed"] = cfg.seed;
  j["scheme"] = cfg.scheme == EstimatorScheme::RussianRoulette ? "russian-roulette"
                                                               : "single-term";
  switch (cfg.mode) {
    case RunMode::MultiFidelity:
      j["gamma0"] = cfg.gamma0;
      j["k_max"] = cfg.k_max;
      break;
    case RunMode::SingleFidelity:
      j["k"] = cfg.fixed_k;
      break;
    case RunMode::TwoStage:
      j["k_hf"] = cfg.k_hf;
      j["k_lf"] = cfg.k_lf;
      break;
  }
  j["proposal_scale"] = cfg.proposal_scale;
  switch (cfg.experiment) {
    case ExperimentKind::Toy:
      j["model"]["n"] = cfg.toy.n;
      break;
    case ExperimentKind::Lgcp:
      j["model"]["dataset"] = cfg.lgcp.dataset;
      j["model"]["origin"] = cfg.lgcp.origin;
      j["model"]["lengthscale"] = cfg.lgcp.lengthscale;
      j["model"]["kernel_variance"] = cfg.lgcp.kernel_variance;
      j["model"]["offset_c"] = cfg.lgcp.offset_c;
      j["model"]["query"] = cfg.lgcp.query;
      break;
    case ExperimentKind::Lv:
      j["model"]["dataset"] = cfg.lv.dataset;
      j["model"]["sigma"] = cfg.lv.sigma;
      j["model"]["dt_s"] = cfg.lv.dt_s;
      j["model"]["dt_c"] = cfg.lv.dt_c;
      j["model"]["solver"] = cfg.lv.solver;
      break;
    case ExperimentKind::Pde:
      j["model"]["alpha0"] = cfg.pde.alpha0;
      j["model"]["beta0"] = cfg.pde.beta0;
      j["model"]["t0"] = cfg.pde.t0;
      break;
    case ExperimentKind::Gp:
      j["model"]["n"] = cfg.gp.n;
      j["model"]["theta0"] = cfg.gp.theta0;
      j["model"]["noise_var"] = cfg.gp.noise_var;
      j["model"]["nu0"] = cfg.gp.nu0;
      j["model"]["nu1"] = cfg.gp.nu1;
      j["model"]["precond_rank"] = cfg.gp.precond_rank;
      break;
  }
  return j;
}

nlohmann::json run_experiment(const ExperimentConfig& config,
                              const std::string& out_dir) {
  config.validate();
  const auto start = std::chrono::steady_clock::now();
  json summary;
  switch (config.experiment) {
    case ExperimentKind::Toy: summary = run_toy(config, out_dir); break;
    case ExperimentKind::Lgcp: summary = run_lgcp(config, out_dir); break;
    case ExperimentKind::Lv: summary = run_lv(config, out_dir); break;
    case ExperimentKind::Pde: summary = run_pde(config, out_dir); break;
    case ExperimentKind::Gp: summary = run_gp(config, out_dir); break;
  }
  const auto elapsed = std::chrono::duration<double>(
      std::chrono::steady_clock::now() - start);
  summary["wallclock_seconds"] = elapsed.count();
  if (!out_dir.empty()) write_json_atomic(summary, out_dir + "/summary.json");
  return summary;
}

int run_estimator_check(std::uint64_t seed, std::ostream& out) {
  int failures = 0;
  const auto report = [&](const std::string& name, bool ok, const std::string& detail) {
    out << (ok ? "[PASS] " : "[FAIL] ") << name << ": " << detail << "\n";
    failures += ok ? 0 : 1;
  };

  // Weight-rule unbiasedness over finite increment sequences.
  {
    bool ok = true;
    for (double gamma0 : {0.1, 0.5}) {
      GeometricTruncation dist(gamma0);
      const std::vector<double> incs = {0.6, -0.25, 0.1, 0.03, -0.02};
      const long n = static_cast<long>(incs.size());
      double target = 0.0;
      for (double v : incs) target += v;
      for (auto scheme :
           {EstimatorScheme::RussianRoulette, EstimatorScheme::SingleTerm}) {
        double expectation = 0.0;
        for (long K = 1; K <= n; ++K) {
          double est = 0.0;
          for (long k = 1; k <= K; ++k) {
            est += estimator_weight(scheme, k, K, dist) *
                   incs[static_cast<std::size_t>(k - 1)];
          }
          expectation += dist.pmf(K) * est;
        }
        if (scheme == EstimatorScheme::RussianRoulette) {
          double fixed = 0.0;
          for (long k = 1; k <= n; ++k) {
            fixed += incs[static_cast<std::size_t>(k - 1)] / dist.survival(k);
          }
          expectation += dist.survival(n + 1) * fixed;
        }
        if (std::abs(expectation - target) > 1e-12) ok = false;
      }
    }
    report("weight-rule unbiasedness", ok, "exhaustive expectation matches the sum");
  }

  // Toy-sequence unbiasedness z-test at three states, 1e5 replicates.
  {
    Rng data_rng(stream_seed(seed, kDataStream));
    auto ds = toy_synthetic(200, data_rng);
    ToyConjugateModel model(ds.data);
    GeometricTruncation dist(0.1);
    bool ok = true;
    std::string detail;
    for (double theta_v : {-1.0, 0.5, 2.0}) {
      const State theta{theta_v};
      const double scale_log =
          std::max(model.log_pi_value(theta_v, 1),
                   model.log_pi_value(theta_v, ToyConjugateModel::kInfiniteFidelity));
      const double oracle = std::exp(
          model.log_pi_value(theta_v, ToyConjugateModel::kInfiniteFidelity) -
          scale_log);
      Rng rng(stream_seed(seed, 0xE57ULL));
      const int n = 100'000;
      double sum = 0.0, sumsq = 0.0;
      for (int i = 0; i < n; ++i) {
        const long K = dist.sample(rng);
        auto rec = estimate(model, theta, K, EstimatorScheme::RussianRoulette, dist);
        rec.value.log_abs -= scale_log;
        const double v = rec.value.to_real();
        sum += v;
        sumsq += v * v;
      }
      const double mean = sum / n;
      const double var = (sumsq - n * mean * mean) / (n - 1.0);
      const double se = std::sqrt(var / n);
      const double z = std::abs(mean - oracle) / se;
      detail += "theta=" + std::to_string(theta_v) + " z=" + std::to_string(z) + "  ";
      if (!(z <= 4.0)) ok = false;
    }
    report("toy estimator unbiasedness (1e5 replicates)", ok, detail);
  }

  // Fidelity-marginal chi-square on the constant control model.
  {
    GeometricTruncation dist(0.3);
    const auto flat = [](long) { return SignedLog::from_real(1.0); };
    Rng rng(stream_seed(seed, 0xC512ULL));
    long K = dist.sample(rng);
    std::vector<long> counts(10, 0);
    int kept = 0;
    // thin far past the walk's relaxation time so the draws are iid-like
    for (int i = 0; kept < 20'000; ++i) {
      K = fidelity_step(K, GeometricTruncation::kDefaultKMax, flat, dist, rng).fidelity;
      if (i % 60 == 59) {
        counts[static_cast<std::size_t>(std::min<long>(K, 10) - 1)] += 1;
        ++kept;
      }
    }
    double chi2 = 0.0;
    for (int b = 0; b < 10; ++b) {
      const double p = b < 9 ? dist.pmf(b + 1) : dist.survival(10);
      const double diff = counts[static_cast<std::size_t>(b)] - p * kept;
      chi2 += diff * diff / (p * kept);
    }
    report("fidelity marginal chi-square (constant model)", chi2 < 21.666,
           "chi2 = " + std::to_string(chi2) + " vs 21.666 (alpha = 0.01, 9 dof)");
  }
  return failures;
}

int run_convergence_check(std::ostream& out) {
  int failures = 0;
  const auto report = [&](const std::string& name, bool ok, const std::string& detail) {
    out << (ok ? "[PASS] " : "[FAIL] ") << name << ": " << detail << "\n";
    failures += ok ? 0 : 1;
  };

  const auto growth = [](double, std::span<const double> z, std::span<double> dz) {
    dz[0] = z[0];
  };
  const double one[] = {1.0};
  const auto err = [&](OdeMethod m, double dt) {
    auto traj = ode_solve(growth, {1.0}, 0.0, one, dt, m);
    return std::abs(traj[0][0] - std::numbers::e);
  };
  const double euler_ratio = err(OdeMethod::Euler, 0.1) / err(OdeMethod::Euler, 0.05);
  report("euler halving ratio", euler_ratio > 1.6 && euler_ratio < 2.4,
         "ratio = " + std::to_string(euler_ratio) + " in [1.6, 2.4]");
  const double rk4_ratio = err(OdeMethod::Rk4, 0.1) / err(OdeMethod::Rk4, 0.05);
  report("rk4 halving ratio", rk4_ratio > 12.0 && rk4_ratio < 20.0,
         "ratio = " + std::to_string(rk4_ratio) + " in [12, 20]");
  report("tsit5 beats rk4 at dt = 0.1",
         err(OdeMethod::Tsit5, 0.1) < err(OdeMethod::Rk4, 0.1),
         "tsit5 err = " + std::to_string(err(OdeMethod::Tsit5, 0.1)));

  const auto integrate = [](std::size_t n) {
    Grid1D g = Grid1D::uniform(0.0, 1.0, n);
    Vector v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = g.nodes()[i] * g.nodes()[i];
    return trapezoid(v, g);
  };
  const double trap_ratio = std::abs(integrate(11) - 1.0 / 3.0) /
                            std::abs(integrate(21) - 1.0 / 3.0);
  report("trapezoid order 2 on x^2", trap_ratio > 3.5 && trap_ratio < 4.5,
         "halving ratio = " + std::to_string(trap_ratio));

  // CG vs dense solve on a random SPD 8x8 system.
  {
    Rng rng(12345);
    const std::size_t n = 8;
    Matrix spd(n, n);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j <= i; ++j) spd(i, j) = spd(j, i) = rng.normal() * 0.3;
    }
    for (std::size_t i = 0; i < n; ++i) spd(i, i) += 4.0;
    Vector b(n);
    for (auto& v : b) v = rng.normal();
    auto solver = cg_solve(
        [&](std::span<const double> x, std::span<double> o) {
          auto y = matvec(spd, x);
          for (std::size_t i = 0; i < n; ++i) o[i] = y[i];
        },
        b, static_cast<long>(n));
    const Vector direct = chol_solve(cholesky(spd), b);
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      num += (solver.iterate()[i] - direct[i]) * (solver.iterate()[i] - direct[i]);
      den += direct[i] * direct[i];
    }
    const double rel = std::sqrt(num / den);
    report("cg k=n equals dense solve", rel < 1e-8, "rel err = " + std::to_string(rel));
  }

  // Cholesky round trip on a 64-dim kernel matrix.
  {
    Vector xs(64);
    for (std::size_t i = 0; i < xs.size(); ++i) xs[i] = static_cast<double>(i) * 0.5;
    Matrix k = se_gram(xs, xs, 2.0, 1.0);
    for (std::size_t i = 0; i < xs.size(); ++i) k(i, i) += 0.3;
    Matrix l = cholesky(k);
    double max_err = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      for (std::size_t j = 0; j < xs.size(); ++j) {
        double s = 0.0;
        for (std::size_t m = 0; m <= std::min(i, j); ++m) s += l(i, m) * l(j, m);
        max_err = std::max(max_err, std::abs(s - k(i, j)));
      }
    }
    report("cholesky round trip", max_err <= 1e-10,
           "max abs err = " + std::to_string(max_err));
  }
  return failures;
}

}  // namespace mfmc
