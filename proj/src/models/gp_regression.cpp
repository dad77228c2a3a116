#include "mfmc/models/gp_regression.hpp"

#include <cmath>
#include <optional>
#include <stdexcept>

namespace mfmc {

namespace {

constexpr double kLog2Pi = 1.8378770664093455;
constexpr double kNegInf = -std::numeric_limits<double>::infinity();

class GpCursor : public LevelCursor {
public:
  GpCursor(const GpRegressionModel& model, double theta) : model_(model) {
    if (!(theta > 0.0)) return;  // outside the prior support: every level is -inf

    const Vector& x = model.inputs();
    const std::size_t n = x.size();
    kernel_ = se_gram(x, x, theta, 1.0);
    for (std::size_t i = 0; i < n; ++i) kernel_(i, i) += model.config().noise_var;

    const Matrix lower = cholesky(kernel_);
    // -1/2 log|2 pi (Sigma + s0^2 I)| + log prior(theta); the quadratic term
    // is the only level-dependent piece.
    base_ = model.log_prior_theta(theta) -
            0.5 * (static_cast<double>(n) * kLog2Pi + chol_log_det(lower));

    LinearOperator apply = [this](std::span<const double> v, std::span<double> out) {
      const std::size_t rows = kernel_.rows();
      for (std::size_t i = 0; i < rows; ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < rows; ++j) s += kernel_(i, j) * v[j];
        out[i] = s;
      }
    };
    LinearOperator precond = nullptr;
    if (model.config().precond_rank > 0) {
      // M = V V^T + sigma_0^2 I with V a pivoted partial Cholesky of the
      // noise-free kernel; M^{-1} through Woodbury.
      Matrix kernel_only = se_gram(x, x, theta, 1.0);
      const double s0 = model.config().noise_var;
      Matrix v = partial_pivoted_cholesky(
          kernel_only, static_cast<std::size_t>(model.config().precond_rank));
      const std::size_t r = v.cols();
      Matrix small(r, r);
      for (std::size_t i = 0; i < r; ++i) {
        for (std::size_t j = 0; j < r; ++j) {
          double acc = 0.0;
          for (std::size_t m = 0; m < n; ++m) acc += v(m, i) * v(m, j);
          small(i, j) = acc + (i == j ? s0 : 0.0);
        }
      }
      Matrix small_chol = cholesky(small);
      precond = [v, small_chol, s0](std::span<const double> in,
                                    std::span<double> out) {
        Vector u = matvec_transposed(v, in);
        Vector w = chol_solve(small_chol, u);
        Vector vw = matvec(v, w);
        for (std::size_t i = 0; i < in.size(); ++i) out[i] = (in[i] - vw[i]) / s0;
      };
    } else if (model.config().jacobi_preconditioner) {
      Vector inv_diag(n);
      for (std::size_t i = 0; i < n; ++i) inv_diag[i] = 1.0 / kernel_(i, i);
      precond = [inv_diag](std::span<const double> v2, std::span<double> out) {
        for (std::size_t i = 0; i < v2.size(); ++i) out[i] = inv_diag[i] * v2[i];
      };
    }
    cg_.emplace(std::move(apply), model.targets(), std::move(precond));
  }

  double advance() override {
    const long k = level() + 1;
    if (!cg_) {
      record(k, kNegInf, model_.cost(k));
      return kNegInf;
    }
    cg_->advance(1);
    const double value = base_ - 0.5 * dot(model_.targets(), cg_->iterate());
    record(k, value, model_.cost(k));
    return value;
  }

private:
  const GpRegressionModel& model_;
  Matrix kernel_;
  double base_ = kNegInf;
  std::optional<CgSolver> cg_;
};

}  // namespace

GpRegressionModel::GpRegressionModel(Vector x, Vector y, GpConfig config)
    : x_(std::move(x)), y_(std::move(y)), config_(config) {
  if (x_.empty() || x_.size() != y_.size()) {
    throw std::invalid_argument("GpRegressionModel: inputs/targets size mismatch");
  }
  if (!(config_.noise_var > 0.0) || !(config_.prior_log_var > 0.0)) {
    throw std::invalid_argument("GpRegressionModel: variances must be positive");
  }
}

double GpRegressionModel::log_lik(double theta, long k) const {
  if (k < 1) throw std::invalid_argument("GpRegressionModel::log_lik: k must be >= 1");
  GpCursor cur(*this, theta);
  return cur.seek(k) - log_prior_theta(theta);
}

double GpRegressionModel::log_lik_exact(double theta) const {
  if (!(theta > 0.0)) return kNegInf;
  const std::size_t n = x_.size();
  Matrix kernel = se_gram(x_, x_, theta, 1.0);
  for (std::size_t i = 0; i < n; ++i) kernel(i, i) += config_.noise_var;
  const Matrix lower = cholesky(kernel);
  const Vector z = chol_solve(lower, y_);
  return -0.5 * (static_cast<double>(n) * kLog2Pi + chol_log_det(lower) +
                 dot(y_, z));
}

double GpRegressionModel::log_prior_theta(double theta) const {
  if (!(theta > 0.0)) return kNegInf;
  const double lt = std::log(theta);
  const double d = lt - config_.prior_log_mean;
  return -lt - 0.5 * (kLog2Pi + std::log(config_.prior_log_var) +
                      d * d / config_.prior_log_var);
}

double GpRegressionModel::cost(long k) const {
  if (k < 1) throw std::invalid_argument("GpRegressionModel::cost: k must be >= 1");
  return 1.0;  // one CG iteration
}

double GpRegressionModel::log_prior(const State& theta) const {
  return log_prior_theta(theta.at(0));
}

std::unique_ptr<LevelCursor> GpRegressionModel::cursor(const State& theta) const {
  return std::make_unique<GpCursor>(*this, theta.at(0));
}

State GpRegressionModel::sample_prior_state(Rng& rng) const {
  return {std::exp(config_.prior_log_mean +
                   std::sqrt(config_.prior_log_var) * rng.normal())};
}

}  // namespace mfmc
