#ifndef MFMC_TARGET_SEQUENCE_HPP
#define MFMC_TARGET_SEQUENCE_HPP

#include <cstdint>
#include <limits>
#include <memory>
#include <vector>

#include "mfmc/linalg.hpp"
#include "mfmc/rng.hpp"

namespace mfmc {

using State = std::vector<double>;

// Level-by-level walk of log pi_k(theta) for a fixed state, tracking the
// cost units spent. Level 0 is the empty start (pi_0 = 0, last_log_pi =
// -inf). advance() must produce a value bit-identical to a fresh evaluation
// of the same level under the same frozen auxiliaries.
class LevelCursor {
public:
  virtual ~LevelCursor() = default;

  // Evaluate log pi at level()+1 and move there.
  virtual double advance() = 0;

  // Move directly to level k >= level()+1. The default walks through every
  // intermediate level; models that can evaluate a level outright override
  // this to pay only that level's cost.
  virtual double seek(long k);

  long level() const { return level_; }
  double last_log_pi() const { return last_log_pi_; }
  double cost_accrued() const { return cost_accrued_; }

protected:
  void record(long level, double log_pi, double cost) {
    level_ = level;
    last_log_pi_ = log_pi;
    cost_accrued_ += cost;
  }

private:
  long level_ = 0;
  double last_log_pi_ = -std::numeric_limits<double>::infinity();
  double cost_accrued_ = 0.0;
};

// A sequence of unnormalized log target densities pi_k(theta) converging to
// a perfect-fidelity limit, with per-level marginal costs. Values include
// the prior factor; log_prior() exposes it separately so latent-Gaussian
// kernels can peel it off.
class TargetSequence {
public:
  virtual ~TargetSequence() = default;

  virtual std::size_t dimension() const = 0;

  // Marginal cost of touching level k on top of level k-1. For models with
  // no reuse between levels this is the cost of one full level-k evaluation.
  virtual double cost(long k) const = 0;

  virtual double log_prior(const State& theta) const = 0;

  virtual std::unique_ptr<LevelCursor> cursor(const State& theta) const = 0;

  // Fresh evaluation of log pi_k(theta) through a cursor.
  double log_pi(const State& theta, long k) const;

  virtual State sample_prior_state(Rng& rng) const = 0;

  // Models whose level evaluations consume frozen randomness (conditional
  // grid draws) refresh it here once per chain iteration; the epoch keys
  // estimate caches.
  virtual bool has_auxiliaries() const { return false; }
  virtual void refresh_auxiliaries(Rng&) {}
  virtual std::uint64_t auxiliary_epoch() const { return 0; }

  // Lower Cholesky factor of the latent Gaussian prior, for elliptical
  // slice sampling; null for models that do not support it.
  virtual const Matrix* prior_chol() const { return nullptr; }
};

// Energy counterpart for simulated annealing: E_k(theta) evaluated directly
// at a fidelity, no telescoping.
class EnergySequence {
public:
  virtual ~EnergySequence() = default;
  virtual std::size_t dimension() const = 0;
  virtual double cost(long k) const = 0;
  virtual double energy(const State& theta, long k) const = 0;
};

}  // namespace mfmc

#endif  // MFMC_TARGET_SEQUENCE_HPP
