#include "mfmc/models/toy.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace mfmc {

namespace {

constexpr double kLog2Pi = 1.8378770664093455;

double log_normal_pdf(double x, double mean, double variance) {
  const double d = x - mean;
  return -0.5 * (kLog2Pi + std::log(variance) + d * d / variance);
}

// Direct level evaluation; seek() jumps because levels share no work.
class ToyCursor : public LevelCursor {
public:
  ToyCursor(const ToyConjugateModel& model, double theta)
      : model_(model), theta_(theta) {}

  double advance() override { return eval(level() + 1); }
  double seek(long k) override {
    if (k <= level()) {
      throw std::invalid_argument("ToyCursor::seek: cannot move backward");
    }
    return eval(k);
  }

private:
  double eval(long k) {
    const double value = model_.log_pi_value(theta_, k);
    record(k, value, model_.cost(k));
    return value;
  }

  const ToyConjugateModel& model_;
  double theta_;
};

}  // namespace

ToyConjugateModel::ToyConjugateModel(Vector data) : n_(data.size()) {
  for (double x : data) {
    sum_x_ += x;
    sum_x2_ += x * x;
  }
}

double ToyConjugateModel::sigma2(long k) {
  if (k == kInfiniteFidelity) return 1.0;
  if (k < 1) throw std::invalid_argument("ToyConjugateModel::sigma2: k must be >= 1");
  const double kd = static_cast<double>(k);
  return 1.0 + 2.0 / (kd * kd);
}

double ToyConjugateModel::log_lik(double theta, long k) const {
  const double s2 = sigma2(k);
  const double n = static_cast<double>(n_);
  const double quad = sum_x2_ - 2.0 * theta * sum_x_ + n * theta * theta;
  return -0.5 * (n * (kLog2Pi + std::log(s2)) + quad / s2);
}

double ToyConjugateModel::log_pi_value(double theta, long k) const {
  return log_normal_pdf(theta, 0.0, 1.0) + log_lik(theta, k);
}

ToyConjugateModel::Posterior ToyConjugateModel::closed_form_posterior() const {
  Posterior post;
  post.variance = 1.0 / (1.0 + static_cast<double>(n_));
  post.mean = post.variance * sum_x_;
  return post;
}

double ToyConjugateModel::log_prior(const State& theta) const {
  return log_normal_pdf(theta.at(0), 0.0, 1.0);
}

std::unique_ptr<LevelCursor> ToyConjugateModel::cursor(const State& theta) const {
  return std::make_unique<ToyCursor>(*this, theta.at(0));
}

State ToyConjugateModel::sample_prior_state(Rng& rng) const {
  return {rng.normal()};
}

namespace {

class ConstantCursor : public LevelCursor {
public:
  explicit ConstantCursor(double log_value) : log_value_(log_value) {}
  double advance() override { return eval(level() + 1); }
  double seek(long k) override {
    if (k <= level()) {
      throw std::invalid_argument("ConstantCursor::seek: cannot move backward");
    }
    return eval(k);
  }

private:
  double eval(long k) {
    record(k, log_value_, static_cast<double>(k));
    return log_value_;
  }
  double log_value_;
};

}  // namespace

double ConstantSequence::log_prior(const State& theta) const {
  return log_normal_pdf(theta.at(0), 0.0, 1.0);
}

std::unique_ptr<LevelCursor> ConstantSequence::cursor(const State& theta) const {
  return std::make_unique<ConstantCursor>(log_prior(theta));
}

State ConstantSequence::sample_prior_state(Rng& rng) const {
  return {rng.normal()};
}

}  // namespace mfmc
