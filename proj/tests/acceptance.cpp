// Acceptance suite: runs every acceptance criterion at its stated tolerance
// and prints one [PASS]/[FAIL] line per criterion (sub-criteria get their own
// lines). Exit code is the number of failed lines.

#include <chrono>
#include <functional>
#include <cmath>
#include <cstring>
#include <iostream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "mfmc/cg.hpp"
#include "mfmc/chain.hpp"
#include "mfmc/estimator.hpp"
#include "mfmc/experiments.hpp"
#include "mfmc/io/datasets.hpp"
#include "mfmc/models/gp_regression.hpp"
#include "mfmc/models/heat_pde.hpp"
#include "mfmc/models/lgcp.hpp"
#include "mfmc/models/lotka_volterra.hpp"
#include "mfmc/models/synthetic.hpp"
#include "mfmc/models/toy.hpp"

using namespace mfmc;

namespace {

constexpr std::uint64_t kSeed = 20240801;

struct Reporter {
  int failures = 0;
  std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();

  void line(const std::string& criterion, bool ok, const std::string& detail) {
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("[%s] %s: %s (t=%.1fs)\n", ok ? "PASS" : "FAIL", criterion.c_str(),
                detail.c_str(), secs);
    std::fflush(stdout);
    failures += ok ? 0 : 1;
  }
};

std::string fmt(double v, int prec = 5) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*g", prec, v);
  return buf;
}

double mean_of(const std::vector<double>& xs) {
  double s = 0.0;
  for (double x : xs) s += x;
  return s / static_cast<double>(xs.size());
}

double sd_of(const std::vector<double>& xs) {
  const double m = mean_of(xs);
  double s = 0.0;
  for (double x : xs) s += (x - m) * (x - m);
  return std::sqrt(s / static_cast<double>(xs.size() - 1));
}

ToyDataset toy_data() {
  Rng rng(stream_seed(kSeed, 0x64617461ULL));
  return toy_synthetic(200, rng);
}

// ----- criterion 1: estimator unbiasedness ---------------------------------

void criterion1(Reporter& rep) {
  auto ds = toy_data();
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
        model.log_pi_value(theta_v, ToyConjugateModel::kInfiniteFidelity) - scale_log);
    Rng rng(stream_seed(kSeed, 0x11ULL));
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
    const double se = std::sqrt((sumsq - n * mean * mean) / (n - 1.0) / n);
    const double z = std::abs(mean - oracle) / se;
    detail += "z(" + fmt(theta_v, 2) + ")=" + fmt(z, 3) + " ";
    ok = ok && z <= 4.0;
  }
  rep.line("criterion 1: estimator unbiasedness, 1e5 replicates, 4 SE", ok, detail);
}

// ----- criteria 2 + 3: toy end-to-end and cost advantage --------------------

struct ToyRuns {
  std::vector<ChainResult> mf_mh, mf_slice, sf1, sf100;
  ToyConjugateModel::Posterior post;
};

ToyRuns run_toy_protocol() {
  ToyRuns out;
  auto ds = toy_data();
  out.post = ToyConjugateModel(ds.data).closed_form_posterior();
  const auto make = [&ds] { return std::make_unique<ToyConjugateModel>(ds.data); };

  ChainConfig base;
  base.iterations = 10'000;
  base.burn_in = 2'000;
  base.thin = 2;
  base.seed = kSeed;
  base.gamma0 = 0.5;
  base.proposal = GaussianRandomWalk{0.3};
  base.slice = SliceSpec{1.0, 50, 100};

  out.mf_mh = run_chains(make, base, 4);

  ChainConfig slice = base;
  slice.sampler = SamplerKind::Slice;
  out.mf_slice = run_chains(make, slice, 4);

  ChainConfig sf1 = base;
  sf1.mode = FidelityMode::SingleFidelity;
  sf1.fixed_fidelity = 1;
  out.sf1 = run_chains(make, sf1, 4);

  ChainConfig sf100 = base;
  sf100.mode = FidelityMode::SingleFidelity;
  sf100.fixed_fidelity = 100;
  out.sf100 = run_chains(make, sf100, 4);
  return out;
}

struct PooledStats {
  double mean = 0.0, sd = 0.0, mc_se = 0.0;
};

PooledStats pooled_stats(const std::vector<ChainResult>& runs, long burn, long thin) {
  PooledStats out;
  std::vector<ChainSample> pooled;
  std::vector<double> chain_means;
  for (const auto& run : runs) {
    auto kept = apply_burn_thin(run.samples, burn, thin);
    chain_means.push_back(
        sign_corrected_estimate(kept, [](const State& s) { return s[0]; }));
    pooled.insert(pooled.end(), kept.begin(), kept.end());
  }
  out.mean = sign_corrected_estimate(pooled, [](const State& s) { return s[0]; });
  const double m2 =
      sign_corrected_estimate(pooled, [](const State& s) { return s[0] * s[0]; });
  out.sd = std::sqrt(std::max(0.0, m2 - out.mean * out.mean));
  out.mc_se = sd_of(chain_means) / std::sqrt(static_cast<double>(chain_means.size()));
  return out;
}

void criteria23(Reporter& rep) {
  auto runs = run_toy_protocol();
  const double ref_mean = runs.post.mean;
  const double ref_sd = std::sqrt(runs.post.variance);

  const auto check_run = [&](const char* name, const std::vector<ChainResult>& r) {
    const auto st = pooled_stats(r, 2000, 2);
    const bool mean_ok = std::abs(st.mean - ref_mean) <= 4.0 * st.mc_se;
    const bool sd_ok = std::abs(st.sd / ref_sd - 1.0) <= 0.05;
    rep.line(std::string("criterion 2: ") + name + " posterior accuracy",
             mean_ok && sd_ok,
             "mean " + fmt(st.mean) + " vs " + fmt(ref_mean) + " (4 MC-SE = " +
                 fmt(4.0 * st.mc_se) + "), sd " + fmt(st.sd) + " vs " + fmt(ref_sd) +
                 " (" + fmt(std::abs(st.sd / ref_sd - 1.0) * 100.0, 3) + "% rel)");
  };
  check_run("MF-MH", runs.mf_mh);
  check_run("MF-slice", runs.mf_slice);

  const auto sf1 = pooled_stats(runs.sf1, 2000, 2);
  const double bias_ratio = sf1.sd / ref_sd;
  rep.line("criterion 2: single-fidelity k=1 std biased high >= 20%",
           bias_ratio >= 1.2, "std ratio = " + fmt(bias_ratio, 4));

  double mf_cost = 0.0, sf_cost = 0.0;
  for (const auto& r : runs.mf_mh) mf_cost += r.diag.total_cost;
  for (const auto& r : runs.sf100) sf_cost += r.diag.total_cost;
  const double ratio = sf_cost / mf_cost;
  rep.line("criterion 3: MF ledger cost at least 5x below SF k=100", ratio >= 5.0,
           "MF " + fmt(mf_cost, 4) + " vs SF " + fmt(sf_cost, 4) + ", ratio " +
               fmt(ratio, 4) + "x");

  // Constant-sequence control: mean sampled K matches 1/gamma0.
  ConstantSequence control;
  ChainConfig ctl;
  ctl.iterations = 200'000;
  ctl.burn_in = 2'000;
  ctl.thin = 1;
  ctl.seed = kSeed;
  ctl.gamma0 = 0.5;
  auto run = run_mf_chain(ctl, control);
  auto kept = apply_burn_thin(run.samples, ctl.burn_in, ctl.thin);
  std::vector<double> ks;
  ks.reserve(kept.size());
  for (const auto& s : kept) ks.push_back(static_cast<double>(s.fidelity));
  const std::size_t n_batches = 20;
  const std::size_t per = ks.size() / n_batches;
  std::vector<double> batch_means;
  for (std::size_t b = 0; b < n_batches; ++b) {
    double s = 0.0;
    for (std::size_t i = b * per; i < (b + 1) * per; ++i) s += ks[i];
    batch_means.push_back(s / static_cast<double>(per));
  }
  const double se = sd_of(batch_means) / std::sqrt(static_cast<double>(n_batches));
  const double dev = std::abs(mean_of(ks) - 1.0 / ctl.gamma0);
  rep.line("criterion 3: constant-control mean K within 3 SE of 1/gamma0",
           dev <= 3.0 * se,
           "mean K = " + fmt(mean_of(ks), 4) + ", target " + fmt(1.0 / ctl.gamma0) +
               ", 3 SE = " + fmt(3.0 * se, 3));
}

// ----- criterion 4: two-stage equivalence -----------------------------------

void criterion4(Reporter& rep) {
  auto ds = toy_data();
  ToyConjugateModel model_ts(ds.data), model_sf(ds.data);

  TwoStageConfig ts;
  ts.iterations = 2'000;
  ts.burn_in = 0;
  ts.thin = 1;
  ts.seed = kSeed;
  ts.k_hf = 20;
  ts.k_lf = 20;
  auto run_ts = run_two_stage_chain(ts, model_ts);

  ChainConfig sf;
  sf.iterations = ts.iterations;
  sf.burn_in = 0;
  sf.thin = 1;
  sf.seed = ts.seed;
  sf.mode = FidelityMode::SingleFidelity;
  sf.fixed_fidelity = 20;
  sf.proposal = ts.proposal;
  auto run_sf = run_mf_chain(sf, model_sf);

  bool identical = run_ts.samples.size() == run_sf.samples.size();
  for (std::size_t i = 0; identical && i < run_ts.samples.size(); ++i) {
    identical = run_ts.samples[i].theta == run_sf.samples[i].theta;
  }
  rep.line("criterion 4: two-stage with equal fidelities is bit-identical to M-H",
           identical,
           identical ? "2000-iteration traces match exactly" : "traces diverge");
}

// ----- criterion 5: solver orders -------------------------------------------

void criterion5(Reporter& rep) {
  std::ostringstream sink;
  const int failures = run_convergence_check(sink);
  std::string detail = sink.str();
  for (auto& c : detail) {
    if (c == '\n') c = ';';
  }
  rep.line("criterion 5: solver convergence orders", failures == 0,
           failures == 0 ? "euler/rk4/tsit5/trapezoid/cg/cholesky all in range"
                         : detail);
}

// ----- criterion 6: heat PDE oracle and SA recovery --------------------------

void criterion6(Reporter& rep) {
  const double alpha0 = 0.85, beta0 = 0.21;
  HeatConfig cfg;
  {
    const double dx = 0.05;
    const Vector u = heat_solve_field(alpha0, beta0, dx, cfg);
    const Grid1D grid = heat_interior_grid(dx, cfg.length);
    const Vector exact = heat_analytic_field(alpha0, beta0, grid, cfg.t_final);
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
      num += (u[i] - exact[i]) * (u[i] - exact[i]);
      den += exact[i] * exact[i];
    }
    const double rel = std::sqrt(num / den);
    rep.line("criterion 6: heat solver vs analytic field, rel L2 <= 1e-3 at dx=0.05",
             rel <= 1e-3,
             "rel L2 = " + fmt(rel, 5) +
                 " (equals the 3-point-stencil truncation error "
                 "alpha*(pi^2/4)*((pi*dx/4)^2/3)*T = 1.078e-3; see notes)");
  }
  {
    HeatPdeProblem problem(alpha0, beta0, cfg);
    SaConfig sa;
    sa.iterations = 100'000;  // the eval cap stops the run
    sa.seed = kSeed;
    sa.gamma0 = 0.25;
    sa.t0 = 1.0;
    sa.proposal = TruncatedNormalWalk{0.3, 0.0};
    sa.init = {0.0, 0.0};
    sa.max_energy_evals = 2'000;
    auto res = run_mf_sa(sa, problem);
    const double da = std::abs(res.best_state[0] - alpha0);
    const double db = std::abs(res.best_state[1] - beta0);
    rep.line("criterion 6: SA recovers (alpha0, beta0) within 0.05 in 2000 evals",
             da <= 0.05 && db <= 0.05,
             "best (" + fmt(res.best_state[0], 4) + ", " + fmt(res.best_state[1], 4) +
                 ") vs (0.85, 0.21), evals = " + std::to_string(res.energy_evals) +
                 ", E = " + fmt(res.best_energy, 3));
  }
}

// ----- criterion 7: GP desk scale -------------------------------------------

void criterion7(Reporter& rep) {
  Rng data_rng(stream_seed(kSeed, 0x64617461ULL));
  auto ds = gp_synthetic(100, 45.0, 1.0, 300.0, data_rng);
  const auto make = [&ds] { return std::make_unique<GpRegressionModel>(ds.x, ds.y); };

  ChainConfig base;
  base.iterations = 5'000;
  base.burn_in = 1'000;
  base.thin = 1;
  base.seed = kSeed;
  base.proposal = GaussianRandomWalk{2.0};

  ChainConfig mf = base;
  mf.gamma0 = 0.1;
  auto mf_runs = run_chains(make, mf, 2);

  ChainConfig hf = base;
  hf.mode = FidelityMode::SingleFidelity;
  hf.fixed_fidelity = 100;
  auto hf_runs = run_chains(make, hf, 2);

  ChainConfig lf = base;
  lf.mode = FidelityMode::SingleFidelity;
  lf.fixed_fidelity = 5;
  auto lf_runs = run_chains(make, lf, 2);

  const auto post_mean = [&](const std::vector<ChainResult>& runs) {
    std::vector<ChainSample> pooled;
    for (const auto& r : runs) {
      auto kept = apply_burn_thin(r.samples, base.burn_in, base.thin);
      pooled.insert(pooled.end(), kept.begin(), kept.end());
    }
    return sign_corrected_estimate(pooled, [](const State& s) { return s[0]; });
  };
  const double m_mf = post_mean(mf_runs);
  const double m_hf = post_mean(hf_runs);
  const double m_lf = post_mean(lf_runs);
  const double rel_gap = std::abs(m_mf - m_hf) / std::abs(m_hf);
  const bool agree = rel_gap <= 0.05;
  const bool lf_worse = std::abs(m_lf - m_hf) > std::abs(m_mf - m_hf);
  double neg = 0.0, count = 0.0;
  for (const auto& r : mf_runs) {
    for (const auto& smp : r.samples) {
      neg += smp.sign == -1 ? 1.0 : 0.0;
      count += 1.0;
    }
  }
  rep.line("criterion 7: GP MF mean within 5% of HF; LF bias exceeds the MF gap",
           agree && lf_worse,
           "MF " + fmt(m_mf, 7) + ", HF " + fmt(m_hf, 7) + ", LF " + fmt(m_lf, 7) +
               "; |MF-HF| " + fmt(std::abs(m_mf - m_hf), 3) + " (" +
               fmt(rel_gap * 100.0, 3) + "%), |LF-HF| " +
               fmt(std::abs(m_lf - m_hf), 3) + ", MF neg-sign frac " +
               fmt(neg / count, 3) +
               " (preconditioned levels leave k=5 converged; see notes)");
}

// ----- criterion 8: LV synthetic recovery ------------------------------------

void criterion8(Reporter& rep) {
  LvConfig model_cfg;  // rk4, sigma = 0.25, dt(k) = 1/(10k + 50)
  Rng data_rng(stream_seed(kSeed, 0x64617461ULL));
  const Vector truth{1.5, 1.0, 3.0, 1.0};
  auto ds = lv_synthetic(truth, 0.8, 50, 10.0, data_rng, model_cfg);

  const auto make = [&] {
    return std::make_unique<LotkaVolterraModel>(ds.times, ds.observations, model_cfg);
  };

  // Warm start from a coarse random search over the cheapest level: the
  // prior is centered 6-10 sigma from the synthetic truth, which elliptical
  // slice sampling cannot bridge in a 5000-iteration budget, so the chains
  // get a supplied initialization (the driver contract allows one).
  const LotkaVolterraModel probe(ds.times, ds.observations, model_cfg);
  Rng search_rng(stream_seed(kSeed, 0x1417ULL));
  State best_bar(4, 0.0);
  double best_val = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < 4096; ++i) {
    Vector params(4);
    State bar(4);
    for (std::size_t d = 0; d < 4; ++d) {
      const double lp = search_rng.uniform(-3.5, 1.5);
      params[d] = std::exp(lp);
      bar[d] = lp - model_cfg.prior_mean[d];
    }
    const double v = probe.log_lik_params(params, 1) + probe.log_prior(bar);
    if (v > best_val) {
      best_val = v;
      best_bar = bar;
    }
  }

  ChainConfig cfg;
  cfg.iterations = 5'000;
  cfg.burn_in = 2'000;
  cfg.thin = 3;
  cfg.seed = kSeed;
  cfg.sampler = SamplerKind::Ess;
  cfg.gamma0 = 0.12;
  cfg.init = best_bar;
  auto runs = run_chains(make, cfg, 2);

  std::vector<ChainSample> pooled;
  for (const auto& r : runs) {
    auto kept = apply_burn_thin(r.samples, cfg.burn_in, cfg.thin);
    pooled.insert(pooled.end(), kept.begin(), kept.end());
  }
  bool ok = true;
  std::string detail;
  const char* names[4] = {"log a", "log b", "log g", "log d"};
  for (std::size_t d = 0; d < 4; ++d) {
    const double mean_bar =
        sign_corrected_estimate(pooled, [d](const State& s) { return s[d]; });
    const double log_mean = mean_bar + model_cfg.prior_mean[d];
    const double err = std::abs(log_mean - std::log(truth[d]));
    detail += std::string(names[d]) + " err " + fmt(err, 3) + "  ";
    ok = ok && err <= 0.15;
  }
  rep.line("criterion 8: LV MF-ESS log-parameter means within 0.15 of truth", ok,
           detail);
}

// ----- criterion 9: LGCP desk scale ------------------------------------------

struct LgcpRunStats {
  double estimate = 0.0;
  double se = 0.0;
  double neg_frac = 0.0;
};

LgcpRunStats lgcp_stats(const std::vector<ChainResult>& runs, long burn, long thin,
                        const FunctionalFn& h) {
  LgcpRunStats out;
  std::vector<ChainSample> pooled;
  std::vector<double> batch_vals;
  for (const auto& r : runs) {
    auto kept = apply_burn_thin(r.samples, burn, thin);
    const std::size_t n_batches = 10;
    const std::size_t per = kept.size() / n_batches;
    for (std::size_t b = 0; b < n_batches; ++b) {
      std::vector<ChainSample> batch(kept.begin() + static_cast<long>(b * per),
                                     kept.begin() + static_cast<long>((b + 1) * per));
      batch_vals.push_back(sign_corrected_estimate(batch, h));
    }
    pooled.insert(pooled.end(), kept.begin(), kept.end());
  }
  out.estimate = sign_corrected_estimate(pooled, h);
  out.se = sd_of(batch_vals) / std::sqrt(static_cast<double>(batch_vals.size()));
  out.neg_frac = negative_sign_fraction(pooled);
  return out;
}

void criterion9(Reporter& rep, const std::string& data_dir) {
  Vector events = load_coal_dataset(data_dir + "/coal_disasters.txt");
  for (double& t : events) t -= 1850.0;

  LgcpConfig model_cfg;
  model_cfg.lengthscale = 20.0;
  model_cfg.kernel_variance = 1.0;
  model_cfg.offset_c = 10;
  model_cfg.domain_lo = std::floor(events.front()) - 1.0;
  model_cfg.domain_hi = std::ceil(events.back()) + 1.0;

  const LgcpModel probe(events, model_cfg);
  const Vector w = probe.smoother_weights(1862.0 - 1850.0);
  const FunctionalFn h = [w](const State& f) { return std::exp(dot(w, f)); };

  const auto make = [&] { return std::make_unique<LgcpModel>(events, model_cfg); };

  ChainConfig base;
  base.iterations = 2'500;
  base.burn_in = 500;
  base.thin = 2;
  base.seed = kSeed;
  base.sampler = SamplerKind::Ess;

  ChainConfig mf = base;
  mf.gamma0 = 0.08;
  auto mf_runs = run_chains(make, mf, 2);

  ChainConfig sf = base;
  sf.mode = FidelityMode::SingleFidelity;
  sf.fixed_fidelity = 100;
  auto sf_runs = run_chains(make, sf, 2);

  const auto mf_stats = lgcp_stats(mf_runs, base.burn_in, base.thin, h);
  const auto sf_stats = lgcp_stats(sf_runs, base.burn_in, base.thin, h);
  const double combined =
      std::sqrt(mf_stats.se * mf_stats.se + sf_stats.se * sf_stats.se);
  const double gap = std::abs(mf_stats.estimate - sf_stats.estimate);
  rep.line("criterion 9: LGCP intensity at 1862, MF vs SF k=100 within 4 SE",
           gap <= 4.0 * combined,
           "MF " + fmt(mf_stats.estimate, 4) + " vs SF " + fmt(sf_stats.estimate, 4) +
               ", gap " + fmt(gap, 3) + ", 4 SE = " + fmt(4.0 * combined, 3));
  rep.line("criterion 9: LGCP negative-sign fraction below 10%",
           mf_stats.neg_frac < 0.10,
           "fraction = " + fmt(mf_stats.neg_frac, 3) +
               " (reported, qualitative reference is a few percent)");
}

// ----- criterion 10: property suites -----------------------------------------

void criterion10(Reporter& rep) {
  int failures = 0;
  std::string notes;

  // signed-log algebra
  {
    Rng rng(3);
    bool ok = true;
    for (int i = 0; i < 2'000 && ok; ++i) {
      const double a = rng.normal() * std::exp(rng.uniform(-20, 20));
      const double b = rng.normal() * std::exp(rng.uniform(-20, 20));
      const auto sum = add(SignedLog::from_real(a), SignedLog::from_real(b));
      const double expect = a + b;
      if (expect == 0.0) {
        ok = sum.is_zero();
      } else {
        ok = std::abs(sum.to_real() - expect) <= 1e-12 * (std::abs(a) + std::abs(b));
      }
      const auto prod = mul(SignedLog::from_real(a), SignedLog::from_real(b));
      ok = ok && std::abs(prod.to_real() - a * b) <= 1e-9 * std::abs(a * b);
    }
    if (!ok) {
      ++failures;
      notes += "signed-log ";
    }
  }

  // weight unbiasedness + toy z-test + fidelity chi-square
  {
    std::ostringstream sink;
    const int f = run_estimator_check(kSeed, sink);
    if (f != 0) {
      failures += f;
      notes += "estimator-check ";
    }
  }

  // ESS constant-likelihood moments
  {
    Matrix cov(2, 2);
    cov(0, 0) = cov(1, 1) = 1.0;
    cov(0, 1) = cov(1, 0) = 0.5;
    Matrix chol_cov = cholesky(cov);
    Rng rng(31);
    State f = mvn_sample(chol_cov, rng);
    const int n = 10'000;
    double s00 = 0, s01 = 0;
    for (int i = 0; i < n; ++i) {
      f = ess_step(f, [](const State&) { return 0.0; }, chol_cov, rng);
      s00 += f[0] * f[0];
      s01 += f[0] * f[1];
    }
    const double se2 = std::sqrt(2.0 / n);
    if (std::abs(s00 / n - 1.0) > 4.0 * se2 || std::abs(s01 / n - 0.5) > 4.0 * se2) {
      ++failures;
      notes += "ess-moments ";
    }
  }

  // CG resumability
  {
    Rng rng(33);
    const std::size_t n = 10;
    Matrix spd(n, n);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j <= i; ++j) spd(i, j) = spd(j, i) = rng.normal() * 0.2;
    }
    for (std::size_t i = 0; i < n; ++i) spd(i, i) += 3.0;
    Vector b(n);
    for (auto& v : b) v = rng.normal();
    const LinearOperator apply = [&](std::span<const double> x, std::span<double> o) {
      auto y = matvec(spd, x);
      for (std::size_t i = 0; i < n; ++i) o[i] = y[i];
    };
    CgSolver split(apply, b);
    split.advance(4);
    split.advance(3);
    CgSolver whole(apply, b);
    whole.advance(7);
    if (split.iterate() != whole.iterate()) {
      ++failures;
      notes += "cg-resume ";
    }
  }

  // ledger exactness on a single-fidelity toy chain
  {
    auto ds = toy_data();
    ToyConjugateModel model(ds.data);
    ChainConfig cfg;
    cfg.iterations = 500;
    cfg.burn_in = 0;
    cfg.thin = 1;
    cfg.seed = kSeed;
    cfg.mode = FidelityMode::SingleFidelity;
    cfg.fixed_fidelity = 9;
    auto run = run_mf_chain(cfg, model);
    auto cursor = model.cursor(State{0.0});
    cursor->seek(9);
    const double expected =
        cursor->cost_accrued() * (1.0 + static_cast<double>(cfg.iterations));
    if (run.diag.total_cost != expected) {
      ++failures;
      notes += "ledger ";
    }
  }

  // seed determinism of an MF chain
  {
    auto ds = toy_data();
    ToyConjugateModel m1(ds.data), m2(ds.data);
    ChainConfig cfg;
    cfg.iterations = 400;
    cfg.burn_in = 0;
    cfg.thin = 1;
    cfg.seed = kSeed;
    cfg.gamma0 = 0.5;
    auto r1 = run_mf_chain(cfg, m1);
    auto r2 = run_mf_chain(cfg, m2);
    bool same = r1.samples.size() == r2.samples.size();
    for (std::size_t i = 0; same && i < r1.samples.size(); ++i) {
      same = r1.samples[i].theta == r2.samples[i].theta &&
             r1.samples[i].fidelity == r2.samples[i].fidelity &&
             r1.samples[i].sign == r2.samples[i].sign &&
             r1.samples[i].cum_cost == r2.samples[i].cum_cost;
    }
    if (!same) {
      ++failures;
      notes += "determinism ";
    }
  }

  rep.line("criterion 10: module property suites", failures == 0,
           failures == 0 ? "signed-log, weights, chi-square, ESS moments, CG resume, "
                           "ledger, determinism all pass"
                         : "failing: " + notes);
}

}  // namespace

int main(int argc, char** argv) {
  std::string data_dir = DATA_DIR;
  for (int i = 1; i + 1 < argc; ++i) {
    if (std::strcmp(argv[i], "--data-dir") == 0) data_dir = argv[i + 1];
  }

  Reporter rep;
  const auto guarded = [&rep](const char* name, const std::function<void()>& fn) {
    try {
      fn();
    } catch (const std::exception& e) {
      rep.line(name, false, std::string("exception: ") + e.what());
    }
  };
  guarded("criterion 1", [&] { criterion1(rep); });
  guarded("criteria 2/3", [&] { criteria23(rep); });
  guarded("criterion 4", [&] { criterion4(rep); });
  guarded("criterion 5", [&] { criterion5(rep); });
  guarded("criterion 6", [&] { criterion6(rep); });
  guarded("criterion 7", [&] { criterion7(rep); });
  guarded("criterion 8", [&] { criterion8(rep); });
  guarded("criterion 9", [&] { criterion9(rep, data_dir); });
  guarded("criterion 10", [&] { criterion10(rep); });

  std::printf("%d criterion line(s) failed\n", rep.failures);
  return rep.failures;
}
