#include "mfmc/truncation.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace mfmc {

GeometricTruncation::GeometricTruncation(double gamma0) : gamma0_(gamma0) {
  if (!(gamma0 > 0.0) || !(gamma0 < 1.0)) {
    throw std::invalid_argument("GeometricTruncation: gamma0 must be in (0,1), got " +
                                std::to_string(gamma0));
  }
  log_gamma0_ = std::log(gamma0_);
  log1m_gamma0_ = std::log1p(-gamma0_);
}

double GeometricTruncation::pmf(long k) const { return std::exp(log_pmf(k)); }

double GeometricTruncation::log_pmf(long k) const {
  if (k < 1) {
    throw std::invalid_argument("GeometricTruncation::pmf: k must be >= 1, got " +
                                std::to_string(k));
  }
  return log_gamma0_ + static_cast<double>(k - 1) * log1m_gamma0_;
}

double GeometricTruncation::survival(long k) const {
  return std::exp(log_survival(k));
}

double GeometricTruncation::log_survival(long k) const {
  if (k < 1) {
    throw std::invalid_argument("GeometricTruncation::survival: k must be >= 1, got " +
                                std::to_string(k));
  }
  return static_cast<double>(k - 1) * log1m_gamma0_;
}

long GeometricTruncation::sample(Rng& rng, long k_max) const {
  const double u = rng.uniform();  // in (0,1)
  // K = min{k >= 1 : 1 - (1-g0)^k >= u} = ceil(log(1-u)/log(1-g0));
  // u and 1-u are exchangeable, so log(u) is used directly.
  double raw = std::ceil(std::log(u) / log1m_gamma0_);
  long k = raw < 1.0 ? 1 : static_cast<long>(raw);
  if (k > k_max) {
    throw std::runtime_error(
        "GeometricTruncation::sample: drew fidelity " + std::to_string(k) +
        " past the hard cap " + std::to_string(k_max));
  }
  return k;
}

static void check_weight_args(long k, long K) {
  if (k < 1 || K < 1) {
    throw std::invalid_argument("estimator_weight: levels must be >= 1");
  }
  if (k > K) {
    throw std::invalid_argument("estimator_weight: k = " + std::to_string(k) +
                                " exceeds truncation level K = " + std::to_string(K));
  }
}

double estimator_weight(EstimatorScheme scheme, long k, long K,
                        const GeometricTruncation& dist) {
  check_weight_args(k, K);
  if (scheme == EstimatorScheme::SingleTerm && k != K) return 0.0;
  return std::exp(estimator_log_weight(scheme, k, K, dist));
}

double estimator_log_weight(EstimatorScheme scheme, long k, long K,
                            const GeometricTruncation& dist) {
  check_weight_args(k, K);
  switch (scheme) {
    case EstimatorScheme::RussianRoulette:
      return -dist.log_survival(k);
    case EstimatorScheme::SingleTerm:
      if (k != K) {
        throw std::invalid_argument(
            "estimator_log_weight: single-term weight is zero for k < K");
      }
      return -dist.log_pmf(K);
  }
  throw std::logic_error("estimator_log_weight: unknown scheme");
}

}  // namespace mfmc
