#ifndef MFMC_ESTIMATOR_HPP
#define MFMC_ESTIMATOR_HPP

#include "mfmc/signed_log.hpp"
#include "mfmc/target_sequence.hpp"
#include "mfmc/truncation.hpp"

namespace mfmc {

struct EstimateRecord {
  SignedLog value;    // pi_hat_K(theta)
  long fidelity = 0;  // truncation level K used
  double cost = 0.0;  // cost units accrued over the levels touched
  long terms = 0;     // increments summed
};

// The k'th telescoping increment pi_k - pi_{k-1} in signed-log form, through
// a cursor positioned at level k-1 (fresh cursor for k = 1). Advances the
// cursor to k.
SignedLog estimate_increment(LevelCursor& cursor, long k);

// pi_hat_K(theta) = sum_{k<=K} W_{k,K} (pi_k - pi_{k-1}) with pi_0 = 0,
// evaluated in signed-log space. Russian roulette walks levels 1..K through
// the cursor; the single-term scheme touches only the levels needed for the
// K'th increment. A NaN or +inf level log density raises an error naming the
// level; -inf (a zero-density level) is a legitimate value.
EstimateRecord estimate(const TargetSequence& seq, const State& theta, long K,
                        EstimatorScheme scheme, const GeometricTruncation& dist);

}  // namespace mfmc

#endif  // MFMC_ESTIMATOR_HPP
