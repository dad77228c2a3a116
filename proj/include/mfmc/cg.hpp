#ifndef MFMC_CG_HPP
#define MFMC_CG_HPP

#include <functional>
#include <span>

#include "mfmc/linalg.hpp"

namespace mfmc {

using LinearOperator =
    std::function<void(std::span<const double> x, std::span<double> out)>;

// Resumable (preconditioned) conjugate gradient. The iterate starts at the
// zero vector, so iteration() == 0 means z = 0, and each advance() runs
// exactly one CG iteration; there is no tolerance-based stop. Advancing k
// then m more iterations is bit-identical to advancing k+m in one call,
// which is what lets a fidelity sequence over CG iterations reuse work.
class CgSolver {
public:
  CgSolver(LinearOperator apply_a, Vector b, LinearOperator preconditioner = nullptr);

  void advance(long iterations = 1);

  const Vector& iterate() const { return z_; }
  const Vector& residual() const { return r_; }
  const Vector& direction() const { return p_; }
  long iteration() const { return iteration_; }
  bool converged() const { return converged_; }

private:
  LinearOperator apply_a_;
  LinearOperator preconditioner_;
  Vector z_, r_, y_, p_, ap_;
  double rho_ = 0.0;   // r^T y
  double rho0_ = 0.0;  // initial r^T y, for the machine-floor latch
  long iteration_ = 0;
  bool converged_ = false;
};

// k iterations from the zero iterate.
CgSolver cg_solve(LinearOperator apply_a, const Vector& b, long k,
                  LinearOperator preconditioner = nullptr);

}  // namespace mfmc

#endif  // MFMC_CG_HPP
