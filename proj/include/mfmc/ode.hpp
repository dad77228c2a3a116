#ifndef MFMC_ODE_HPP
#define MFMC_ODE_HPP

#include <functional>
#include <span>
#include <stdexcept>
#include <vector>

#include "mfmc/linalg.hpp"

namespace mfmc {

enum class OdeMethod { Euler, Rk4, Tsit5 };

using OdeRhs =
    std::function<void(double t, std::span<const double> z, std::span<double> dz)>;

struct OdeBlowupError : std::runtime_error {
  explicit OdeBlowupError(double t);
  double time;
};

// Fixed-step explicit integration from (t0, z0). Output times must be
// nondecreasing and >= t0; the integrator takes full steps of size dt and a
// trailing partial step to land on each output time exactly. Throws
// OdeBlowupError when the state goes non-finite, and errors out past
// max_steps total steps.
std::vector<Vector> ode_solve(const OdeRhs& rhs, const Vector& z0, double t0,
                              std::span<const double> t_out, double dt,
                              OdeMethod method, long max_steps = 100'000'000);

}  // namespace mfmc

#endif  // MFMC_ODE_HPP
