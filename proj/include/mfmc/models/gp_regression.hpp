#ifndef MFMC_MODELS_GP_REGRESSION_HPP
#define MFMC_MODELS_GP_REGRESSION_HPP

#include "mfmc/cg.hpp"
#include "mfmc/target_sequence.hpp"

namespace mfmc {

struct GpConfig {
  double noise_var = 1.0;      // sigma_0^2
  double prior_log_mean = 3.8; // nu_0
  double prior_log_var = 0.03; // nu_1, variance of log theta
  // CG preconditioner: rank-r pivoted partial Cholesky of Sigma_theta applied
  // through Woodbury (rank 0 disables it); Jacobi is also available, though
  // it is inert for a constant-diagonal kernel. Without preconditioning the
  // first CG iterate is so far off that level 1 dominates the fidelity
  // marginal and the sign sum degenerates.
  long precond_rank = 10;
  bool jacobi_preconditioner = false;
};

// Lengthscale inference for GP regression with a squared-exponential kernel
// of unit variance. Level k evaluates the Gaussian likelihood with the k-step
// conjugate-gradient iterate of (Sigma_theta + sigma_0^2 I) z = y in the
// quadratic term; the determinant is exact Cholesky at every level, so only
// the linear solve varies with fidelity. The cursor advances the CG state,
// so a Russian roulette sweep over levels 1..K costs K iterations total.
class GpRegressionModel : public TargetSequence {
public:
  GpRegressionModel(Vector x, Vector y, GpConfig config = {});

  double log_lik(double theta, long k) const;   // fresh k-iteration evaluation
  double log_lik_exact(double theta) const;     // dense-solve oracle path
  double log_prior_theta(double theta) const;   // logNormal(nu_0, nu_1)

  std::size_t dimension() const override { return 1; }
  double cost(long k) const override;  // one CG iteration per level
  double log_prior(const State& theta) const override;
  std::unique_ptr<LevelCursor> cursor(const State& theta) const override;
  State sample_prior_state(Rng& rng) const override;

  std::size_t data_size() const { return x_.size(); }
  const Vector& inputs() const { return x_; }
  const Vector& targets() const { return y_; }
  const GpConfig& config() const { return config_; }

private:
  Vector x_, y_;
  GpConfig config_;
};

}  // namespace mfmc

#endif  // MFMC_MODELS_GP_REGRESSION_HPP
