#ifndef MFMC_TRUNCATION_HPP
#define MFMC_TRUNCATION_HPP

#include "mfmc/rng.hpp"

namespace mfmc {

// How the truncated telescoping sum is reweighted to stay unbiased:
// Russian roulette keeps every term up to K, weighted by inverse survival
// probabilities; the weighted single-term estimator keeps only term K,
// weighted by 1/pmf(K).
enum class EstimatorScheme { RussianRoulette, SingleTerm };

// Truncation distribution mu on {1, 2, ...}: pmf(k) = g0 * (1-g0)^(k-1).
// Sampling is inverse-CDF so draws are reproducible from the raw stream.
class GeometricTruncation {
public:
  static constexpr long kDefaultKMax = 1'000'000;

  explicit GeometricTruncation(double gamma0);

  double gamma0() const { return gamma0_; }

  double pmf(long k) const;
  double log_pmf(long k) const;

  // survival(k) = P(K >= k) = (1-g0)^(k-1); survival(1) = 1.
  double survival(long k) const;
  double log_survival(long k) const;

  // Draws past k_max abort: a hard cap keeps worst-case cost bounded.
  long sample(Rng& rng, long k_max = kDefaultKMax) const;

private:
  double gamma0_;
  double log_gamma0_;
  double log1m_gamma0_;
};

// W_{k,K} for 1 <= k <= K (k > K or k < 1 is rejected).
double estimator_weight(EstimatorScheme scheme, long k, long K,
                        const GeometricTruncation& dist);
// log W_{k,K}; single-term off-diagonal (k < K) has weight zero, which has no
// finite log, so callers branch on it before taking logs.
double estimator_log_weight(EstimatorScheme scheme, long k, long K,
                            const GeometricTruncation& dist);

}  // namespace mfmc

#endif  // MFMC_TRUNCATION_HPP
