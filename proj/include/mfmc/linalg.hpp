#ifndef MFMC_LINALG_HPP
#define MFMC_LINALG_HPP

#include <cstddef>
#include <span>
#include <vector>

#include "mfmc/rng.hpp"

namespace mfmc {

using Vector = std::vector<double>;

// Small dense row-major matrix. Everything in this project is at most a few
// hundred square, so no effort is spent on blocking or views.
class Matrix {
public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  static Matrix identity(std::size_t n);

  double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  const std::vector<double>& data() const { return data_; }

private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

Vector matvec(const Matrix& a, std::span<const double> x);
// (A^T x) without forming the transpose.
Vector matvec_transposed(const Matrix& a, std::span<const double> x);
double dot(std::span<const double> a, std::span<const double> b);

// Diagonal jitter added when a nominally-SPD matrix fails to factor: start at
// base_scale * mean(diag) and double, up to max_attempts jittered retries.
struct JitterPolicy {
  double base_scale = 1e-8;
  int max_attempts = 6;
};

// Lower Cholesky factor of a symmetric positive definite matrix. The first
// attempt adds no jitter; near-singular inputs (duplicate kernel nodes) get
// the escalating diagonal jitter before failing.
Matrix cholesky(const Matrix& sym, const JitterPolicy& jitter = {});

// Rank-r pivoted partial Cholesky of a symmetric PSD matrix: returns V
// (n x r) with A ~ V V^T capturing the leading pivots. Stops early (fewer
// columns) once the residual diagonal is numerically exhausted.
Matrix partial_pivoted_cholesky(const Matrix& sym, std::size_t rank);

Vector forward_solve(const Matrix& lower, std::span<const double> b);   // L y = b
Vector backward_solve(const Matrix& lower, std::span<const double> b);  // L^T x = b
Vector chol_solve(const Matrix& lower, std::span<const double> b);      // (L L^T)^{-1} b
double chol_log_det(const Matrix& lower);                               // log det(L L^T)

// Draw from N(0, L L^T); consumes exactly n normal variates in index order.
Vector mvn_sample(const Matrix& chol_lower, Rng& rng);

struct GaussianConditional {
  Vector mean;
  Matrix cov;
};

// Distribution of the "new" block given observed values of the "old" block,
// for a joint zero-mean Gaussian with blocks
//   cov_oo (old,old), cov_no (new,old), cov_nn (new,new).
GaussianConditional gaussian_conditional(const Matrix& cov_oo, const Matrix& cov_no,
                                         const Matrix& cov_nn,
                                         std::span<const double> f_old,
                                         const JitterPolicy& jitter = {});

// Squared-exponential kernel v * exp(-||x-y||^2 / (2 l^2)).
double se_kernel(std::span<const double> x, std::span<const double> y,
                 double lengthscale, double variance);
double se_kernel(double x, double y, double lengthscale, double variance);

Matrix se_gram(std::span<const double> xs, std::span<const double> ys,
               double lengthscale, double variance);

}  // namespace mfmc

#endif  // MFMC_LINALG_HPP
