#ifndef MFMC_MODELS_TOY_HPP
#define MFMC_MODELS_TOY_HPP

#include "mfmc/target_sequence.hpp"

namespace mfmc {

// Conjugate Gaussian sequence: prior N(0,1), level-k likelihood
// N(x_n | theta, sigma_k^2) with sigma_k^2 = 1 + 2/k^2 -> 1. The level-k
// evaluation is treated as costing k units even though a sufficient-statistic
// evaluation is O(1); that is the sequence's pretend cost model.
class ToyConjugateModel : public TargetSequence {
public:
  // Fidelity marker for the limiting variance sigma^2 = 1.
  static constexpr long kInfiniteFidelity = -1;

  explicit ToyConjugateModel(Vector data);

  static double sigma2(long k);  // k >= 1, or kInfiniteFidelity

  double log_lik(double theta, long k) const;
  double log_pi_value(double theta, long k) const;  // prior + likelihood

  struct Posterior {
    double mean = 0.0;
    double variance = 1.0;
  };
  Posterior closed_form_posterior() const;

  std::size_t dimension() const override { return 1; }
  double cost(long k) const override { return static_cast<double>(k); }
  double log_prior(const State& theta) const override;
  std::unique_ptr<LevelCursor> cursor(const State& theta) const override;
  State sample_prior_state(Rng& rng) const override;

  std::size_t data_size() const { return n_; }

private:
  std::size_t n_ = 0;
  double sum_x_ = 0.0;
  double sum_x2_ = 0.0;
};

// Control sequence whose levels are all the same standard-normal density, so
// the telescoping estimator is exactly pi_1 and the fidelity conditional
// collapses to mu(K). Cost model matches the toy sequence (level k costs k).
class ConstantSequence : public TargetSequence {
public:
  std::size_t dimension() const override { return 1; }
  double cost(long k) const override { return static_cast<double>(k); }
  double log_prior(const State& theta) const override;
  std::unique_ptr<LevelCursor> cursor(const State& theta) const override;
  State sample_prior_state(Rng& rng) const override;
};

}  // namespace mfmc

#endif  // MFMC_MODELS_TOY_HPP
