#include "mfmc/models/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "mfmc/linalg.hpp"
#include "mfmc/ode.hpp"

namespace mfmc {

ToyDataset toy_synthetic(std::size_t n, Rng& rng) {
  ToyDataset out;
  out.true_mean = rng.normal();
  out.data.resize(n);
  for (double& x : out.data) x = out.true_mean + rng.normal();
  return out;
}

LvDataset lv_synthetic(const Vector& true_params, double noise, std::size_t n,
                       double t_max, Rng& rng, const LvConfig& config) {
  if (true_params.size() != 4) {
    throw std::invalid_argument("lv_synthetic: need 4 parameters");
  }
  if (n == 0 || !(t_max > 0.0) || !(noise > 0.0)) {
    throw std::invalid_argument("lv_synthetic: bad grid or noise");
  }
  LvDataset out;
  out.true_params = true_params;
  out.times.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    out.times[i] = t_max * static_cast<double>(i + 1) / static_cast<double>(n);
  }
  const auto traj = ode_solve(
      [&](double t, std::span<const double> z, std::span<double> dz) {
        lotka_volterra_rhs(true_params, t, z, dz);
      },
      config.z0, 0.0, out.times, 1e-4, OdeMethod::Rk4);
  out.observations = Matrix(n, 2);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < 2; ++j) {
      if (!(traj[i][j] > 0.0)) {
        throw std::runtime_error("lv_synthetic: reference trajectory nonpositive");
      }
      out.observations(i, j) = std::exp(std::log(traj[i][j]) + noise * rng.normal());
    }
  }
  return out;
}

GpDataset gp_synthetic(std::size_t n, double lengthscale0, double noise_var,
                       double x_max, Rng& rng) {
  if (n == 0 || !(lengthscale0 > 0.0) || !(noise_var > 0.0) || !(x_max > 0.0)) {
    throw std::invalid_argument("gp_synthetic: bad arguments");
  }
  GpDataset out;
  out.true_lengthscale = lengthscale0;
  out.x.resize(n);
  for (double& v : out.x) v = rng.uniform(0.0, x_max);
  std::sort(out.x.begin(), out.x.end());

  const Matrix gram = se_gram(out.x, out.x, lengthscale0, 1.0);
  const Matrix lower = cholesky(gram);
  const Vector f = mvn_sample(lower, rng);
  const double noise_sd = std::sqrt(noise_var);
  out.y.resize(n);
  for (std::size_t i = 0; i < n; ++i) out.y[i] = f[i] + noise_sd * rng.normal();
  return out;
}

}  // namespace mfmc
