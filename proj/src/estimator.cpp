#include "mfmc/estimator.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace mfmc {

double LevelCursor::seek(long k) {
  if (k <= level()) {
    throw std::invalid_argument("LevelCursor::seek: cannot move backward");
  }
  double v = 0.0;
  while (level() < k) v = advance();
  return v;
}

double TargetSequence::log_pi(const State& theta, long k) const {
  if (k < 1) throw std::invalid_argument("TargetSequence::log_pi: k must be >= 1");
  return cursor(theta)->seek(k);
}


namespace {

void check_level_density(double log_pi, long level) {
  // -inf is fine (zero density); NaN or +inf means the model broke.
  if (std::isnan(log_pi) || log_pi == std::numeric_limits<double>::infinity()) {
    throw std::runtime_error("estimate: non-finite density at fidelity level " +
                             std::to_string(level));
  }
}

}  // namespace

SignedLog estimate_increment(LevelCursor& cursor, long k) {
  if (cursor.level() != k - 1) {
    throw std::invalid_argument(
        "estimate_increment: cursor at level " + std::to_string(cursor.level()) +
        ", expected " + std::to_string(k - 1));
  }
  const double prev_log = cursor.last_log_pi();
  const double log_k = cursor.advance();
  check_level_density(log_k, k);
  return sub(SignedLog::from_log(log_k), SignedLog::from_log(prev_log));
}

EstimateRecord estimate(const TargetSequence& seq, const State& theta, long K,
                        EstimatorScheme scheme, const GeometricTruncation& dist) {
  if (K < 1) throw std::invalid_argument("estimate: K must be >= 1");
  auto cursor = seq.cursor(theta);
  EstimateRecord rec;
  rec.fidelity = K;

  if (scheme == EstimatorScheme::RussianRoulette) {
    SignedLog acc = SignedLog::zero();
    for (long k = 1; k <= K; ++k) {
      const SignedLog inc = estimate_increment(*cursor, k);
      const double log_w = estimator_log_weight(scheme, k, K, dist);
      acc = add(acc, mul(inc, SignedLog::from_log(log_w)));
    }
    rec.value = acc;
    rec.terms = K;
  } else {
    double prev_log = -std::numeric_limits<double>::infinity();
    if (K >= 2) {
      prev_log = cursor->seek(K - 1);
      check_level_density(prev_log, K - 1);
    }
    const double log_k = cursor->advance();
    check_level_density(log_k, K);
    const SignedLog inc =
        sub(SignedLog::from_log(log_k), SignedLog::from_log(prev_log));
    rec.value = mul(inc, SignedLog::from_log(-dist.log_pmf(K)));
    rec.terms = 1;
  }
  rec.cost = cursor->cost_accrued();
  return rec;
}

}  // namespace mfmc
