#ifndef MFMC_MODELS_LGCP_HPP
#define MFMC_MODELS_LGCP_HPP

#include <map>

#include "mfmc/quadrature.hpp"
#include "mfmc/target_sequence.hpp"

namespace mfmc {

struct LgcpConfig {
  double domain_lo = 0.0;
  double domain_hi = 1.0;
  double lengthscale = 20.0;
  double kernel_variance = 1.0;
  long offset_c = 10;  // level k uses 2k + offset_c quadrature points
};

// Log Gaussian Cox process on a 1-D window. The chain state is the latent
// log-intensity f at the observed event locations; level k evaluates the
// likelihood with a trapezoid rule over 2k+c uniform quadrature nodes whose
// latent values are conditional Gaussian draws given f, frozen per chain
// iteration so telescoping differences are coherent.
class LgcpModel : public TargetSequence {
public:
  LgcpModel(Vector events, LgcpConfig config);

  long quadrature_points(long k) const { return 2 * k + config_.offset_c; }

  // log L(f) for explicit latent values at observation and quadrature nodes:
  // trapezoid of (1 - e^{f_quad}) over the grid plus sum_n f_obs[n].
  static double log_lik_values(std::span<const double> f_obs,
                               std::span<const double> f_quad, const Grid1D& grid);

  // Level-k log likelihood at latent state f, using the frozen draws.
  double log_lik(const State& f, long k) const;

  // Conditional-mean smoother weights for f(x): f_hat(x) = w . f. Used for
  // intensity functionals exp(f_hat(x)).
  Vector smoother_weights(double x) const;

  std::size_t dimension() const override { return events_.size(); }
  double cost(long k) const override {
    return static_cast<double>(quadrature_points(k));
  }
  double log_prior(const State& f) const override;
  std::unique_ptr<LevelCursor> cursor(const State& f) const override;
  State sample_prior_state(Rng& rng) const override;

  bool has_auxiliaries() const override { return true; }
  void refresh_auxiliaries(Rng& rng) override;
  std::uint64_t auxiliary_epoch() const override { return epoch_; }
  const Matrix* prior_chol() const override { return &chol_obs_; }

  const Vector& events() const { return events_; }
  const LgcpConfig& config() const { return config_; }

  struct LevelGeometry {
    Grid1D grid;
    Matrix smoother;   // n_obs x m: Sigma_oo^{-1} K(obs, grid)
    Matrix chol_cond;  // m x m lower factor of the conditional covariance
  };
  const LevelGeometry& geometry(long k) const;

private:
  Vector events_;
  LgcpConfig config_;
  Matrix chol_obs_;          // lower factor of K(obs, obs)
  double prior_log_norm_ = 0.0;
  std::uint64_t aux_seed_ = 0;
  std::uint64_t epoch_ = 0;
  mutable std::map<long, LevelGeometry> geometry_;  // lazily built, f-independent
};

}  // namespace mfmc

#endif  // MFMC_MODELS_LGCP_HPP
