#include "mfmc/ode.hpp"

#include <cmath>
#include <string>

namespace mfmc {

OdeBlowupError::OdeBlowupError(double t)
    : std::runtime_error("ode_solve: non-finite state at t = " + std::to_string(t)),
      time(t) {}

namespace {

// Tsitouras 5(4) coefficients; only the 5th-order advance is used since the
// step size is fixed externally (CFL-driven), not error-controlled.
constexpr double kTsitC[5] = {0.161, 0.327, 0.9, 0.9800255409045097, 1.0};
constexpr double kTsitA[5][5] = {
    {0.161, 0.0, 0.0, 0.0, 0.0},
    {-0.008480655492356989, 0.335480655492357, 0.0, 0.0, 0.0},
    {2.8971530571054935, -6.359448489975075, 4.3622954328695815, 0.0, 0.0},
    {5.325864828439257, -11.748883564062828, 7.4955393428898365,
     -0.09249506636175525, 0.0},
    {5.86145544294642, -12.92096931784711, 8.159367898576159,
     -0.071584973281401, -0.028269050394068383}};
constexpr double kTsitB[6] = {0.09646076681806523, 0.01,
                              0.4798896504144996,  1.379008574103742,
                              -3.290069515436081,  2.324710524099774};

class Stepper {
public:
  Stepper(const OdeRhs& rhs, std::size_t dim, OdeMethod method)
      : rhs_(rhs), method_(method), dim_(dim) {
    const std::size_t stages =
        method == OdeMethod::Euler ? 1 : (method == OdeMethod::Rk4 ? 4 : 6);
    k_.assign(stages, Vector(dim));
    tmp_.assign(dim, 0.0);
  }

  void step(double t, double h, Vector& z) {
    switch (method_) {
      case OdeMethod::Euler: {
        rhs_(t, z, k_[0]);
        for (std::size_t i = 0; i < dim_; ++i) z[i] += h * k_[0][i];
        return;
      }
      case OdeMethod::Rk4: {
        static constexpr double a2[] = {0.5};
        static constexpr double a3[] = {0.0, 0.5};
        static constexpr double a4[] = {0.0, 0.0, 1.0};
        rhs_(t, z, k_[0]);
        stage(z, h, a2, t + 0.5 * h, k_[1]);
        stage(z, h, a3, t + 0.5 * h, k_[2]);
        stage(z, h, a4, t + h, k_[3]);
        for (std::size_t i = 0; i < dim_; ++i) {
          z[i] += h / 6.0 * (k_[0][i] + 2.0 * k_[1][i] + 2.0 * k_[2][i] + k_[3][i]);
        }
        return;
      }
      case OdeMethod::Tsit5: {
        rhs_(t, z, k_[0]);
        for (int s = 0; s < 5; ++s) {
          std::span<const double> row(kTsitA[s], static_cast<std::size_t>(s + 1));
          stage(z, h, row, t + kTsitC[s] * h, k_[s + 1]);
        }
        for (std::size_t i = 0; i < dim_; ++i) {
          double acc = 0.0;
          for (int s = 0; s < 6; ++s) acc += kTsitB[s] * k_[s][i];
          z[i] += h * acc;
        }
        return;
      }
    }
  }

private:
  void stage(const Vector& z, double h, std::span<const double> coeffs,
             double t_stage, Vector& out_k) {
    for (std::size_t i = 0; i < dim_; ++i) {
      double acc = 0.0;
      for (std::size_t s = 0; s < coeffs.size(); ++s) acc += coeffs[s] * k_[s][i];
      tmp_[i] = z[i] + h * acc;
    }
    rhs_(t_stage, tmp_, out_k);
  }

  const OdeRhs& rhs_;
  OdeMethod method_;
  std::size_t dim_;
  std::vector<Vector> k_;
  Vector tmp_;
};

bool all_finite(const Vector& z) {
  for (double v : z) {
    if (!std::isfinite(v)) return false;
  }
  return true;
}

}  // namespace

std::vector<Vector> ode_solve(const OdeRhs& rhs, const Vector& z0, double t0,
                              std::span<const double> t_out, double dt,
                              OdeMethod method, long max_steps) {
  if (!(dt > 0.0)) throw std::invalid_argument("ode_solve: dt must be positive");
  for (std::size_t i = 0; i < t_out.size(); ++i) {
    if (t_out[i] < t0 || (i > 0 && t_out[i] < t_out[i - 1])) {
      throw std::invalid_argument("ode_solve: output times must be nondecreasing and >= t0");
    }
  }
  Stepper stepper(rhs, z0.size(), method);
  Vector z = z0;
  double t = t0;
  long steps = 0;
  std::vector<Vector> out;
  out.reserve(t_out.size());
  for (double target : t_out) {
    // Full steps while they fit, then one partial step to land on target.
    while (target - t > dt) {
      stepper.step(t, dt, z);
      t += dt;
      if (!all_finite(z)) throw OdeBlowupError(t);
      if (++steps > max_steps) {
        throw std::runtime_error("ode_solve: exceeded maximum step count");
      }
    }
    const double rem = target - t;
    if (rem > 0.0) {
      stepper.step(t, rem, z);
      t = target;
      if (!all_finite(z)) throw OdeBlowupError(t);
      if (++steps > max_steps) {
        throw std::runtime_error("ode_solve: exceeded maximum step count");
      }
    }
    out.push_back(z);
  }
  return out;
}

}  // namespace mfmc
