#include "mfmc/linalg.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace mfmc {

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Vector matvec(const Matrix& a, std::span<const double> x) {
  if (x.size() != a.cols()) throw std::invalid_argument("matvec: size mismatch");
  Vector out(a.rows(), 0.0);
  for (std::size_t i = 0; i < a.rows(); ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < a.cols(); ++j) s += a(i, j) * x[j];
    out[i] = s;
  }
  return out;
}

Vector matvec_transposed(const Matrix& a, std::span<const double> x) {
  if (x.size() != a.rows()) {
    throw std::invalid_argument("matvec_transposed: size mismatch");
  }
  Vector out(a.cols(), 0.0);
  for (std::size_t i = 0; i < a.rows(); ++i) {
    const double xi = x[i];
    for (std::size_t j = 0; j < a.cols(); ++j) out[j] += a(i, j) * xi;
  }
  return out;
}

double dot(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw std::invalid_argument("dot: size mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

namespace {

// Plain Cholesky-Crout; returns false on a nonpositive pivot.
bool try_cholesky(const Matrix& a, Matrix& lower) {
  const std::size_t n = a.rows();
  lower = Matrix(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    double d = a(j, j);
    for (std::size_t m = 0; m < j; ++m) d -= lower(j, m) * lower(j, m);
    if (!(d > 0.0)) return false;
    const double ljj = std::sqrt(d);
    lower(j, j) = ljj;
    for (std::size_t i = j + 1; i < n; ++i) {
      double s = a(i, j);
      for (std::size_t m = 0; m < j; ++m) s -= lower(i, m) * lower(j, m);
      lower(i, j) = s / ljj;
    }
  }
  return true;
}

}  // namespace

Matrix cholesky(const Matrix& sym, const JitterPolicy& jitter) {
  if (sym.rows() != sym.cols() || sym.rows() == 0) {
    throw std::invalid_argument("cholesky: matrix must be square and nonempty");
  }
  Matrix lower;
  if (try_cholesky(sym, lower)) return lower;

  const std::size_t n = sym.rows();
  double mean_diag = 0.0;
  for (std::size_t i = 0; i < n; ++i) mean_diag += sym(i, i);
  mean_diag /= static_cast<double>(n);

  double eps = jitter.base_scale * mean_diag;
  for (int attempt = 0; attempt < jitter.max_attempts; ++attempt, eps *= 2.0) {
    Matrix jittered = sym;
    for (std::size_t i = 0; i < n; ++i) jittered(i, i) += eps;
    if (try_cholesky(jittered, lower)) return lower;
  }
  throw std::runtime_error("cholesky: matrix not SPD after max jitter");
}

Matrix partial_pivoted_cholesky(const Matrix& sym, std::size_t rank) {
  const std::size_t n = sym.rows();
  if (sym.cols() != n || n == 0) {
    throw std::invalid_argument("partial_pivoted_cholesky: matrix must be square");
  }
  rank = std::min(rank, n);
  Vector diag(n);
  double trace = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    diag[i] = sym(i, i);
    trace += diag[i];
  }
  Matrix v(n, rank);
  std::size_t r = 0;
  for (; r < rank; ++r) {
    std::size_t pivot = 0;
    for (std::size_t i = 1; i < n; ++i) {
      if (diag[i] > diag[pivot]) pivot = i;
    }
    if (!(diag[pivot] > 1e-12 * trace)) break;  // residual exhausted
    const double root = std::sqrt(diag[pivot]);
    for (std::size_t i = 0; i < n; ++i) {
      double s = sym(i, pivot);
      for (std::size_t m = 0; m < r; ++m) s -= v(i, m) * v(pivot, m);
      v(i, r) = s / root;
    }
    for (std::size_t i = 0; i < n; ++i) diag[i] -= v(i, r) * v(i, r);
  }
  if (r == rank) return v;
  Matrix trimmed(n, r);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t m = 0; m < r; ++m) trimmed(i, m) = v(i, m);
  }
  return trimmed;
}

Vector forward_solve(const Matrix& lower, std::span<const double> b) {
  const std::size_t n = lower.rows();
  if (b.size() != n) throw std::invalid_argument("forward_solve: size mismatch");
  Vector y(n);
  for (std::size_t i = 0; i < n; ++i) {
    double s = b[i];
    for (std::size_t j = 0; j < i; ++j) s -= lower(i, j) * y[j];
    y[i] = s / lower(i, i);
  }
  return y;
}

Vector backward_solve(const Matrix& lower, std::span<const double> b) {
  const std::size_t n = lower.rows();
  if (b.size() != n) throw std::invalid_argument("backward_solve: size mismatch");
  Vector x(n);
  for (std::size_t ii = n; ii-- > 0;) {
    double s = b[ii];
    for (std::size_t j = ii + 1; j < n; ++j) s -= lower(j, ii) * x[j];
    x[ii] = s / lower(ii, ii);
  }
  return x;
}

Vector chol_solve(const Matrix& lower, std::span<const double> b) {
  Vector y = forward_solve(lower, b);
  return backward_solve(lower, y);
}

double chol_log_det(const Matrix& lower) {
  double s = 0.0;
  for (std::size_t i = 0; i < lower.rows(); ++i) s += std::log(lower(i, i));
  return 2.0 * s;
}

Vector mvn_sample(const Matrix& chol_lower, Rng& rng) {
  const std::size_t n = chol_lower.rows();
  Vector z(n);
  for (std::size_t i = 0; i < n; ++i) z[i] = rng.normal();
  Vector out(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j <= i; ++j) s += chol_lower(i, j) * z[j];
    out[i] = s;
  }
  return out;
}

GaussianConditional gaussian_conditional(const Matrix& cov_oo, const Matrix& cov_no,
                                         const Matrix& cov_nn,
                                         std::span<const double> f_old,
                                         const JitterPolicy& jitter) {
  const std::size_t n_old = cov_oo.rows();
  const std::size_t n_new = cov_nn.rows();
  if (cov_no.rows() != n_new || cov_no.cols() != n_old || f_old.size() != n_old) {
    throw std::invalid_argument("gaussian_conditional: nonconformal blocks");
  }
  const Matrix lower = cholesky(cov_oo, jitter);

  const Vector alpha = chol_solve(lower, f_old);
  GaussianConditional out;
  out.mean = matvec(cov_no, alpha);

  // B = L^{-1} cov_on, column by column; cov = cov_nn - B^T B.
  Matrix b(n_old, n_new);
  Vector col(n_old);
  for (std::size_t j = 0; j < n_new; ++j) {
    for (std::size_t i = 0; i < n_old; ++i) col[i] = cov_no(j, i);
    Vector solved = forward_solve(lower, col);
    for (std::size_t i = 0; i < n_old; ++i) b(i, j) = solved[i];
  }
  out.cov = Matrix(n_new, n_new);
  for (std::size_t i = 0; i < n_new; ++i) {
    for (std::size_t j = 0; j < n_new; ++j) {
      double s = 0.0;
      for (std::size_t m = 0; m < n_old; ++m) s += b(m, i) * b(m, j);
      out.cov(i, j) = cov_nn(i, j) - s;
    }
  }
  return out;
}

double se_kernel(std::span<const double> x, std::span<const double> y,
                 double lengthscale, double variance) {
  if (x.size() != y.size()) throw std::invalid_argument("se_kernel: size mismatch");
  if (!(lengthscale > 0.0) || !(variance > 0.0)) {
    throw std::invalid_argument("se_kernel: lengthscale and variance must be positive");
  }
  double d2 = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double d = x[i] - y[i];
    d2 += d * d;
  }
  return variance * std::exp(-d2 / (2.0 * lengthscale * lengthscale));
}

double se_kernel(double x, double y, double lengthscale, double variance) {
  const double d = x - y;
  if (!(lengthscale > 0.0) || !(variance > 0.0)) {
    throw std::invalid_argument("se_kernel: lengthscale and variance must be positive");
  }
  return variance * std::exp(-d * d / (2.0 * lengthscale * lengthscale));
}

Matrix se_gram(std::span<const double> xs, std::span<const double> ys,
               double lengthscale, double variance) {
  Matrix g(xs.size(), ys.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    for (std::size_t j = 0; j < ys.size(); ++j) {
      g(i, j) = se_kernel(xs[i], ys[j], lengthscale, variance);
    }
  }
  return g;
}

}  // namespace mfmc
