#ifndef MFMC_MODELS_LOTKA_VOLTERRA_HPP
#define MFMC_MODELS_LOTKA_VOLTERRA_HPP

#include "mfmc/ode.hpp"
#include "mfmc/target_sequence.hpp"

namespace mfmc {

struct LvConfig {
  double noise_sigma = 0.25;            // likelihood scale on log populations
  Vector prior_mean = {0.0, -2.0, 0.0, -3.0};  // log-parameter prior center
  double prior_var = 0.1;
  double dt_s = 10.0;                   // dt(k) = 1 / (dt_s * k + dt_c)
  double dt_c = 50.0;
  OdeMethod method = OdeMethod::Rk4;
  Vector z0 = {1.0, 1.0};               // known initial populations
};

// Predator-prey dynamics du = (a - b v) u, dv = (-g + d u) v.
void lotka_volterra_rhs(const Vector& params, double t, std::span<const double> z,
                        std::span<double> dz);

// Bayesian system identification for the Lotka-Volterra ODE. The chain state
// is thetabar = log(params) - prior_mean, which has a mean-zero Gaussian
// prior as elliptical slice sampling requires; level k solves the ODE with
// step dt(k) and scores observed populations with a LogNormal noise model.
class LotkaVolterraModel : public TargetSequence {
public:
  LotkaVolterraModel(Vector times, Matrix observations /* n x 2 */, LvConfig config);

  double dt(long k) const { return 1.0 / (config_.dt_s * static_cast<double>(k) + config_.dt_c); }

  // Log likelihood at natural parameters (alpha, beta, gamma, delta);
  // -inf when the solve blows up or a population is nonpositive.
  double log_lik_params(const Vector& params, long k) const;
  double log_lik_params_dt(const Vector& params, double dt_step) const;

  Vector params_from_state(const State& thetabar) const;

  std::size_t dimension() const override { return 4; }
  double cost(long k) const override {
    return config_.dt_s * static_cast<double>(k) + config_.dt_c;  // ~ solver steps
  }
  double log_prior(const State& thetabar) const override;
  std::unique_ptr<LevelCursor> cursor(const State& thetabar) const override;
  State sample_prior_state(Rng& rng) const override;
  const Matrix* prior_chol() const override { return &prior_chol_; }

  const Vector& times() const { return times_; }
  const LvConfig& config() const { return config_; }

private:
  Vector times_;
  Matrix observations_;      // n x 2 populations
  Matrix log_observations_;  // cached logs
  LvConfig config_;
  Matrix prior_chol_;
};

}  // namespace mfmc

#endif  // MFMC_MODELS_LOTKA_VOLTERRA_HPP
