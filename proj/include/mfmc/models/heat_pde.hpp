#ifndef MFMC_MODELS_HEAT_PDE_HPP
#define MFMC_MODELS_HEAT_PDE_HPP

#include <map>

#include "mfmc/quadrature.hpp"
#include "mfmc/target_sequence.hpp"

namespace mfmc {

struct HeatConfig {
  double length = 10.0;
  double t_final = 1.0;
  double dx_c = 8.0;           // dx(k) = 1 / (k + dx_c)
  double cfl = 0.4;            // dt = cfl * dx^2
  double reference_dx = 5e-3;  // discretization of the target field
};

// u_t = alpha u_xx + 2 beta u on [0, L], u(x,0) = sin(pi x / 2), zero
// boundaries, discretized by central differences and integrated with the
// Tsitouras 5/4 method at dt = 0.4 dx^2.
//
// heat_solve_field returns u(., t_final) at the interior nodes of the uniform
// grid with spacing dx; L/dx must be an integer number of cells.
Vector heat_solve_field(double alpha, double beta, double dx,
                        const HeatConfig& config = {});
Grid1D heat_interior_grid(double dx, double length);

// Separation-of-variables solution e^{(2 beta - alpha pi^2/4) t} sin(pi x/2),
// exact for the continuum problem with this initial condition.
Vector heat_analytic_field(double alpha, double beta, const Grid1D& grid, double t);

// Dx-weighted squared distance between a solved field and a target field
// given on its own grid (linearly interpolated onto the solve grid).
double heat_objective(double alpha, double beta, double dx, const Grid1D& target_grid,
                      std::span<const double> target, const HeatConfig& config = {});

// Energy sequence for simulated annealing: E_k(alpha, beta) compares the
// level-k solve against a target field built once at the reference
// discretization from (alpha0, beta0).
class HeatPdeProblem : public EnergySequence {
public:
  HeatPdeProblem(double alpha0, double beta0, HeatConfig config = {});

  double dx(long k) const {
    return 1.0 / (static_cast<double>(k) + config_.dx_c);
  }

  std::size_t dimension() const override { return 2; }
  double cost(long k) const override {
    const double d = static_cast<double>(k) + config_.dx_c;
    return d * d * d;  // ~ nodes x time steps
  }
  double energy(const State& theta, long k) const override;

  const Grid1D& target_grid() const { return target_grid_; }
  const Vector& target_field() const { return target_; }
  const HeatConfig& config() const { return config_; }

private:
  HeatConfig config_;
  Grid1D target_grid_;
  Vector target_;
};

}  // namespace mfmc

#endif  // MFMC_MODELS_HEAT_PDE_HPP
