#ifndef MFMC_SIGNED_LOG_HPP
#define MFMC_SIGNED_LOG_HPP

#include <cmath>
#include <limits>
#include <stdexcept>

namespace mfmc {

// A real number carried as (log|x|, sign). Density estimates built from
// telescoping differences can be negative and span hundreds of e-folds, so
// all estimator arithmetic runs on this representation.
//
// Canonical zero is (log_abs = -inf, sign = 0); no other encoding of zero is
// ever produced. Exact cancellation in add() (equal magnitudes, opposite
// signs) returns canonical zero.
struct SignedLog {
  double log_abs = -std::numeric_limits<double>::infinity();
  int sign = 0;

  static SignedLog zero() { return {}; }

  static SignedLog from_real(double x) {
    if (!std::isfinite(x)) {
      throw std::invalid_argument("SignedLog::from_real: non-finite input");
    }
    if (x == 0.0) return zero();
    return {std::log(std::abs(x)), x > 0.0 ? +1 : -1};
  }

  // log_abs = -inf collapses to canonical zero regardless of the given sign.
  static SignedLog from_log(double log_abs, int sign = +1) {
    if (std::isnan(log_abs)) {
      throw std::invalid_argument("SignedLog::from_log: NaN log magnitude");
    }
    if (log_abs == -std::numeric_limits<double>::infinity()) return zero();
    if (sign != +1 && sign != -1) {
      throw std::invalid_argument("SignedLog::from_log: sign must be +1/-1");
    }
    return {log_abs, sign};
  }

  double to_real() const { return sign == 0 ? 0.0 : sign * std::exp(log_abs); }

  bool is_zero() const { return sign == 0; }

  SignedLog negated() const { return {log_abs, -sign}; }
};

inline SignedLog mul(const SignedLog& a, const SignedLog& b) {
  if (a.sign == 0 || b.sign == 0) return SignedLog::zero();
  return {a.log_abs + b.log_abs, a.sign * b.sign};
}

// Max-shift log-sum with sign resolution.
inline SignedLog add(const SignedLog& a, const SignedLog& b) {
  if (a.sign == 0) return b;
  if (b.sign == 0) return a;
  const SignedLog& hi = (a.log_abs >= b.log_abs) ? a : b;
  const SignedLog& lo = (a.log_abs >= b.log_abs) ? b : a;
  if (a.sign == b.sign) {
    return {hi.log_abs + std::log1p(std::exp(lo.log_abs - hi.log_abs)), a.sign};
  }
  if (a.log_abs == b.log_abs) return SignedLog::zero();  // exact cancellation
  const double diff = std::exp(lo.log_abs - hi.log_abs);  // in (0,1)
  return {hi.log_abs + std::log1p(-diff), hi.sign};
}

inline SignedLog sub(const SignedLog& a, const SignedLog& b) {
  return add(a, b.negated());
}

inline SignedLog operator+(const SignedLog& a, const SignedLog& b) { return add(a, b); }
inline SignedLog operator-(const SignedLog& a, const SignedLog& b) { return sub(a, b); }
inline SignedLog operator*(const SignedLog& a, const SignedLog& b) { return mul(a, b); }
inline SignedLog operator-(const SignedLog& a) { return a.negated(); }

}  // namespace mfmc

#endif  // MFMC_SIGNED_LOG_HPP
