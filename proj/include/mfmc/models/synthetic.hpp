#ifndef MFMC_MODELS_SYNTHETIC_HPP
#define MFMC_MODELS_SYNTHETIC_HPP

#include "mfmc/models/lotka_volterra.hpp"
#include "mfmc/rng.hpp"

namespace mfmc {

// Toy conjugate data: theta0 ~ N(0,1), then n draws from N(theta0, 1).
struct ToyDataset {
  Vector data;
  double true_mean = 0.0;
};
ToyDataset toy_synthetic(std::size_t n, Rng& rng);

// Lotka-Volterra observations on a uniform time grid, generated from a fine
// RK4 reference solve with multiplicative LogNormal noise of scale `noise`.
struct LvDataset {
  Vector times;
  Matrix observations;  // n x 2
  Vector true_params;
};
LvDataset lv_synthetic(const Vector& true_params, double noise, std::size_t n,
                       double t_max, Rng& rng, const LvConfig& config = {});

// GP regression data: inputs uniform on [0, x_max] (sorted), latent function
// drawn from the GP at the true lengthscale, unit-variance kernel, additive
// Gaussian noise.
struct GpDataset {
  Vector x;
  Vector y;
  double true_lengthscale = 0.0;
};
GpDataset gp_synthetic(std::size_t n, double lengthscale0, double noise_var,
                       double x_max, Rng& rng);

}  // namespace mfmc

#endif  // MFMC_MODELS_SYNTHETIC_HPP
