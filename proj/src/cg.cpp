#include "mfmc/cg.hpp"

#include <stdexcept>
#include <utility>

namespace mfmc {

CgSolver::CgSolver(LinearOperator apply_a, Vector b, LinearOperator preconditioner)
    : apply_a_(std::move(apply_a)), preconditioner_(std::move(preconditioner)) {
  const std::size_t n = b.size();
  z_.assign(n, 0.0);
  r_ = std::move(b);  // residual of the zero iterate
  if (preconditioner_) {
    y_.assign(n, 0.0);
    preconditioner_(r_, y_);
  } else {
    y_ = r_;
  }
  p_ = y_;
  ap_.assign(n, 0.0);
  rho_ = dot(r_, y_);
  rho0_ = rho_;
}

void CgSolver::advance(long iterations) {
  for (long it = 0; it < iterations; ++it) {
    ++iteration_;
    // Once the residual reaches machine floor relative to the start, further
    // iterations hold the solution; continuing would run the recurrence on
    // rounding noise and can produce spurious nonpositive curvature.
    if (converged_ || rho_ <= rho0_ * 1e-28) {
      converged_ = true;
      continue;
    }
    apply_a_(p_, ap_);
    const double curvature = dot(p_, ap_);
    if (!(curvature > 0.0)) {
      throw std::runtime_error(
          "CgSolver: nonpositive curvature direction (operator not SPD?)");
    }
    const double alpha = rho_ / curvature;
    for (std::size_t i = 0; i < z_.size(); ++i) {
      z_[i] += alpha * p_[i];
      r_[i] -= alpha * ap_[i];
    }
    if (preconditioner_) {
      preconditioner_(r_, y_);
    } else {
      y_ = r_;
    }
    const double rho_next = dot(r_, y_);
    const double beta = rho_next / rho_;
    rho_ = rho_next;
    for (std::size_t i = 0; i < p_.size(); ++i) p_[i] = y_[i] + beta * p_[i];
  }
}

CgSolver cg_solve(LinearOperator apply_a, const Vector& b, long k,
                  LinearOperator preconditioner) {
  if (k < 0) throw std::invalid_argument("cg_solve: iteration count must be >= 0");
  CgSolver solver(std::move(apply_a), b, std::move(preconditioner));
  solver.advance(k);
  return solver;
}

}  // namespace mfmc
