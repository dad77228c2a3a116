#include "mfmc/models/heat_pde.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "mfmc/ode.hpp"

namespace mfmc {

namespace {

std::size_t interior_count(double dx, double length) {
  const double cells = length / dx;
  const auto n_cells = static_cast<long>(std::llround(cells));
  if (n_cells < 2 || std::abs(cells - static_cast<double>(n_cells)) > 1e-9) {
    throw std::invalid_argument("heat grid: dx must divide the rod length");
  }
  return static_cast<std::size_t>(n_cells - 1);
}

}  // namespace

Grid1D heat_interior_grid(double dx, double length) {
  const std::size_t n = interior_count(dx, length);
  Vector nodes(n);
  for (std::size_t i = 0; i < n; ++i) nodes[i] = dx * static_cast<double>(i + 1);
  return Grid1D(std::move(nodes));
}

Vector heat_solve_field(double alpha, double beta, double dx,
                        const HeatConfig& config) {
  const std::size_t n = interior_count(dx, config.length);
  const double inv_dx2 = 1.0 / (dx * dx);

  Vector u0(n);
  for (std::size_t i = 0; i < n; ++i) {
    u0[i] = std::sin(std::numbers::pi * dx * static_cast<double>(i + 1) / 2.0);
  }

  // Method of lines with zero Dirichlet boundaries.
  const auto rhs = [&](double, std::span<const double> u, std::span<double> du) {
    for (std::size_t i = 0; i < n; ++i) {
      const double left = i == 0 ? 0.0 : u[i - 1];
      const double right = i + 1 == n ? 0.0 : u[i + 1];
      du[i] = alpha * (left - 2.0 * u[i] + right) * inv_dx2 + 2.0 * beta * u[i];
    }
  };

  const double dt = config.cfl * dx * dx;
  const double t_out[1] = {config.t_final};
  auto traj = ode_solve(rhs, u0, 0.0, t_out, dt, OdeMethod::Tsit5);
  return traj.front();
}

Vector heat_analytic_field(double alpha, double beta, const Grid1D& grid, double t) {
  const double rate = 2.0 * beta - alpha * std::numbers::pi * std::numbers::pi / 4.0;
  const double amp = std::exp(rate * t);
  Vector u(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    u[i] = amp * std::sin(std::numbers::pi * grid.nodes()[i] / 2.0);
  }
  return u;
}

double heat_objective(double alpha, double beta, double dx, const Grid1D& target_grid,
                      std::span<const double> target, const HeatConfig& config) {
  const Vector u = heat_solve_field(alpha, beta, dx, config);
  const Grid1D grid = heat_interior_grid(dx, config.length);
  double e = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double d = u[i] - linear_interp(target_grid, target, grid.nodes()[i]);
    e += d * d * dx;
  }
  return e;
}

HeatPdeProblem::HeatPdeProblem(double alpha0, double beta0, HeatConfig config)
    : config_(config),
      target_grid_(heat_interior_grid(config.reference_dx, config.length)),
      target_(heat_solve_field(alpha0, beta0, config.reference_dx, config)) {}

double HeatPdeProblem::energy(const State& theta, long k) const {
  if (theta.size() != 2) {
    throw std::invalid_argument("HeatPdeProblem::energy: state must be (alpha, beta)");
  }
  if (k < 1) throw std::invalid_argument("HeatPdeProblem::energy: k must be >= 1");
  return heat_objective(theta[0], theta[1], dx(k), target_grid_, target_, config_);
}

}  // namespace mfmc
