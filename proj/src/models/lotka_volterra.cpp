#include "mfmc/models/lotka_volterra.hpp"

#include <cmath>
#include <stdexcept>

namespace mfmc {

namespace {

constexpr double kLog2Pi = 1.8378770664093455;
constexpr double kNegInf = -std::numeric_limits<double>::infinity();

class LvCursor : public LevelCursor {
public:
  LvCursor(const LotkaVolterraModel& model, Vector params, double log_prior)
      : model_(model), params_(std::move(params)), log_prior_(log_prior) {}

  double advance() override { return eval(level() + 1); }
  double seek(long k) override {
    if (k <= level()) {
      throw std::invalid_argument("LvCursor::seek: cannot move backward");
    }
    return eval(k);
  }

private:
  double eval(long k) {
    const double value = log_prior_ + model_.log_lik_params(params_, k);
    record(k, value, model_.cost(k));
    return value;
  }

  const LotkaVolterraModel& model_;
  Vector params_;
  double log_prior_;
};

}  // namespace

void lotka_volterra_rhs(const Vector& params, double /*t*/,
                        std::span<const double> z, std::span<double> dz) {
  const double u = z[0];
  const double v = z[1];
  dz[0] = (params[0] - params[1] * v) * u;
  dz[1] = (-params[2] + params[3] * u) * v;
}

LotkaVolterraModel::LotkaVolterraModel(Vector times, Matrix observations,
                                       LvConfig config)
    : times_(std::move(times)), observations_(std::move(observations)),
      config_(std::move(config)) {
  if (times_.empty() || observations_.rows() != times_.size() ||
      observations_.cols() != 2) {
    throw std::invalid_argument("LotkaVolterraModel: observations must be n x 2");
  }
  log_observations_ = Matrix(times_.size(), 2);
  for (std::size_t i = 0; i < times_.size(); ++i) {
    for (std::size_t j = 0; j < 2; ++j) {
      const double y = observations_(i, j);
      if (!(y > 0.0)) {
        throw std::invalid_argument("LotkaVolterraModel: populations must be positive");
      }
      log_observations_(i, j) = std::log(y);
    }
  }
  const double sd = std::sqrt(config_.prior_var);
  prior_chol_ = Matrix(4, 4);
  for (std::size_t i = 0; i < 4; ++i) prior_chol_(i, i) = sd;
}

double LotkaVolterraModel::log_lik_params(const Vector& params, long k) const {
  if (k < 1) throw std::invalid_argument("LotkaVolterraModel: k must be >= 1");
  return log_lik_params_dt(params, dt(k));
}

double LotkaVolterraModel::log_lik_params_dt(const Vector& params,
                                             double dt_step) const {
  std::vector<Vector> traj;
  try {
    traj = ode_solve(
        [&](double t, std::span<const double> z, std::span<double> dz) {
          lotka_volterra_rhs(params, t, z, dz);
        },
        config_.z0, 0.0, times_, dt_step, config_.method);
  } catch (const OdeBlowupError&) {
    return kNegInf;  // exploded solve: zero likelihood, the kernel rejects
  }

  const double sigma = config_.noise_sigma;
  const double log_norm = -0.5 * kLog2Pi - std::log(sigma);
  double log_l = 0.0;
  for (std::size_t n = 0; n < times_.size(); ++n) {
    for (std::size_t j = 0; j < 2; ++j) {
      const double z = traj[n][j];
      if (!(z > 0.0)) return kNegInf;
      const double resid = (log_observations_(n, j) - std::log(z)) / sigma;
      log_l += log_norm - log_observations_(n, j) - 0.5 * resid * resid;
    }
  }
  return log_l;
}

Vector LotkaVolterraModel::params_from_state(const State& thetabar) const {
  if (thetabar.size() != 4) {
    throw std::invalid_argument("LotkaVolterraModel: state must be 4-dimensional");
  }
  Vector params(4);
  for (std::size_t i = 0; i < 4; ++i) {
    params[i] = std::exp(thetabar[i] + config_.prior_mean[i]);
  }
  return params;
}

double LotkaVolterraModel::log_prior(const State& thetabar) const {
  if (thetabar.size() != 4) {
    throw std::invalid_argument("LotkaVolterraModel: state must be 4-dimensional");
  }
  double quad = 0.0;
  for (double v : thetabar) quad += v * v;
  return -0.5 * (4.0 * (kLog2Pi + std::log(config_.prior_var)) +
                 quad / config_.prior_var);
}

std::unique_ptr<LevelCursor> LotkaVolterraModel::cursor(const State& thetabar) const {
  return std::make_unique<LvCursor>(*this, params_from_state(thetabar),
                                    log_prior(thetabar));
}

State LotkaVolterraModel::sample_prior_state(Rng& rng) const {
  const double sd = std::sqrt(config_.prior_var);
  State out(4);
  for (double& v : out) v = sd * rng.normal();
  return out;
}

}  // namespace mfmc
