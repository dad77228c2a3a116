#ifndef MFMC_TESTS_SUPPORT_HPP
#define MFMC_TESTS_SUPPORT_HPP

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

#include "mfmc/target_sequence.hpp"

namespace mfmc::test {

// Target sequence over a user-supplied level function; handy for synthetic
// estimator checks. cost(k) = k, prior = standard normal on theta[0].
class FunctionSequence : public TargetSequence {
public:
  using LevelFn = std::function<double(const State&, long k)>;

  explicit FunctionSequence(LevelFn fn, std::size_t dim = 1)
      : fn_(std::move(fn)), dim_(dim) {}

  std::size_t dimension() const override { return dim_; }
  double cost(long k) const override { return static_cast<double>(k); }
  double log_prior(const State&) const override { return 0.0; }
  State sample_prior_state(Rng& rng) const override {
    State s(dim_);
    for (double& v : s) v = rng.normal();
    return s;
  }

  std::unique_ptr<LevelCursor> cursor(const State& theta) const override {
    class Cursor : public LevelCursor {
    public:
      Cursor(const FunctionSequence& seq, State theta)
          : seq_(seq), theta_(std::move(theta)) {}
      double advance() override {
        const long k = level() + 1;
        const double v = seq_.fn_(theta_, k);
        record(k, v, seq_.cost(k));
        return v;
      }

    private:
      const FunctionSequence& seq_;
      State theta_;
    };
    return std::make_unique<Cursor>(*this, theta);
  }

private:
  LevelFn fn_;
  std::size_t dim_;
};

inline double mean(const std::vector<double>& xs) {
  double s = 0.0;
  for (double x : xs) s += x;
  return s / static_cast<double>(xs.size());
}

inline double sample_variance(const std::vector<double>& xs) {
  const double m = mean(xs);
  double s = 0.0;
  for (double x : xs) s += (x - m) * (x - m);
  return s / static_cast<double>(xs.size() - 1);
}

inline double standard_error(const std::vector<double>& xs) {
  return std::sqrt(sample_variance(xs) / static_cast<double>(xs.size()));
}

// Batch-means standard error for a correlated series.
inline double batch_se(const std::vector<double>& xs, std::size_t n_batches = 20) {
  const std::size_t per = xs.size() / n_batches;
  std::vector<double> batch_means;
  for (std::size_t b = 0; b < n_batches; ++b) {
    double s = 0.0;
    for (std::size_t i = b * per; i < (b + 1) * per; ++i) s += xs[i];
    batch_means.push_back(s / static_cast<double>(per));
  }
  return standard_error(batch_means);
}

// Two-sided Kolmogorov-Smirnov statistic against a CDF.
inline double ks_statistic(std::vector<double> xs,
                           const std::function<double(double)>& cdf) {
  std::sort(xs.begin(), xs.end());
  const double n = static_cast<double>(xs.size());
  double d = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double f = cdf(xs[i]);
    d = std::max(d, std::abs(f - static_cast<double>(i) / n));
    d = std::max(d, std::abs(static_cast<double>(i + 1) / n - f));
  }
  return d;
}

}  // namespace mfmc::test

#endif  // MFMC_TESTS_SUPPORT_HPP
