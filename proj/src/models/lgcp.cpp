#include "mfmc/models/lgcp.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mfmc {

namespace {

constexpr double kLog2Pi = 1.8378770664093455;

class LgcpCursor : public LevelCursor {
public:
  LgcpCursor(const LgcpModel& model, State f, double log_prior)
      : model_(model), f_(std::move(f)), log_prior_(log_prior) {}

  double advance() override { return eval(level() + 1); }
  double seek(long k) override {
    if (k <= level()) {
      throw std::invalid_argument("LgcpCursor::seek: cannot move backward");
    }
    return eval(k);
  }

private:
  double eval(long k) {
    const double value = log_prior_ + model_.log_lik(f_, k);
    record(k, value, model_.cost(k));
    return value;
  }

  const LgcpModel& model_;
  State f_;
  double log_prior_;
};

}  // namespace

LgcpModel::LgcpModel(Vector events, LgcpConfig config)
    : events_(std::move(events)), config_(config) {
  if (events_.empty()) throw std::invalid_argument("LgcpModel: no events");
  if (!std::is_sorted(events_.begin(), events_.end())) {
    std::sort(events_.begin(), events_.end());
  }
  if (events_.front() < config_.domain_lo || events_.back() > config_.domain_hi) {
    throw std::invalid_argument("LgcpModel: events outside the domain");
  }
  if (config_.offset_c < 0 || 2 + config_.offset_c < 2) {
    throw std::invalid_argument("LgcpModel: bad quadrature offset");
  }
  const Matrix gram = se_gram(events_, events_, config_.lengthscale,
                              config_.kernel_variance);
  chol_obs_ = cholesky(gram);
  prior_log_norm_ = -0.5 * (static_cast<double>(events_.size()) * kLog2Pi +
                            chol_log_det(chol_obs_));
}

double LgcpModel::log_lik_values(std::span<const double> f_obs,
                                 std::span<const double> f_quad,
                                 const Grid1D& grid) {
  if (f_quad.size() != grid.size()) {
    throw std::invalid_argument("LgcpModel::log_lik_values: grid/state mismatch");
  }
  Vector integrand(f_quad.size());
  for (std::size_t i = 0; i < f_quad.size(); ++i) {
    integrand[i] = 1.0 - std::exp(f_quad[i]);
  }
  double log_l = trapezoid(integrand, grid);
  for (double v : f_obs) log_l += v;
  return log_l;
}

const LgcpModel::LevelGeometry& LgcpModel::geometry(long k) const {
  auto it = geometry_.find(k);
  if (it != geometry_.end()) return it->second;

  const long m = quadrature_points(k);
  Grid1D grid = Grid1D::uniform(config_.domain_lo, config_.domain_hi,
                                static_cast<std::size_t>(m));
  const std::size_t n = events_.size();
  const Matrix k_og = se_gram(events_, grid.nodes(), config_.lengthscale,
                              config_.kernel_variance);

  // smoother = Sigma_oo^{-1} K_og and B = L^{-1} K_og, column by column.
  Matrix smoother(n, static_cast<std::size_t>(m));
  Matrix b(n, static_cast<std::size_t>(m));
  Vector col(n);
  for (std::size_t j = 0; j < static_cast<std::size_t>(m); ++j) {
    for (std::size_t i = 0; i < n; ++i) col[i] = k_og(i, j);
    const Vector fwd = forward_solve(chol_obs_, col);
    const Vector full = backward_solve(chol_obs_, fwd);
    for (std::size_t i = 0; i < n; ++i) {
      b(i, j) = fwd[i];
      smoother(i, j) = full[i];
    }
  }

  // Conditional covariance K_gg - B^T B. The conditional variances between
  // densely pinned events sit near roundoff, so a nugget scaled to the prior
  // variance (not to the conditional diagonal) keeps the factorization SPD.
  Matrix cond(static_cast<std::size_t>(m), static_cast<std::size_t>(m));
  const Matrix k_gg = se_gram(grid.nodes(), grid.nodes(), config_.lengthscale,
                              config_.kernel_variance);
  const double nugget = 1e-8 * config_.kernel_variance;
  for (std::size_t i = 0; i < static_cast<std::size_t>(m); ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      double s = 0.0;
      for (std::size_t r = 0; r < n; ++r) s += b(r, i) * b(r, j);
      const double v = k_gg(i, j) - s + (i == j ? nugget : 0.0);
      cond(i, j) = v;
      cond(j, i) = v;
    }
  }

  LevelGeometry geom{std::move(grid), std::move(smoother), cholesky(cond)};
  return geometry_.emplace(k, std::move(geom)).first->second;
}

double LgcpModel::log_lik(const State& f, long k) const {
  if (f.size() != events_.size()) {
    throw std::invalid_argument("LgcpModel::log_lik: latent state size mismatch");
  }
  const LevelGeometry& geom = geometry(k);
  const std::size_t m = geom.grid.size();

  Vector f_quad = matvec_transposed(geom.smoother, f);  // conditional mean

  // Frozen conditional draw: the per-(epoch, level) noise is deterministic.
  Rng level_rng(stream_seed(aux_seed_, static_cast<std::uint64_t>(k)));
  Vector z(m);
  for (std::size_t i = 0; i < m; ++i) z[i] = level_rng.normal();
  for (std::size_t i = 0; i < m; ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j <= i; ++j) s += geom.chol_cond(i, j) * z[j];
    f_quad[i] += s;
  }
  return log_lik_values(f, f_quad, geom.grid);
}

Vector LgcpModel::smoother_weights(double x) const {
  Vector kx(events_.size());
  for (std::size_t i = 0; i < events_.size(); ++i) {
    kx[i] = se_kernel(events_[i], x, config_.lengthscale, config_.kernel_variance);
  }
  return chol_solve(chol_obs_, kx);
}

double LgcpModel::log_prior(const State& f) const {
  const Vector alpha = forward_solve(chol_obs_, f);
  return prior_log_norm_ - 0.5 * dot(alpha, alpha);
}

std::unique_ptr<LevelCursor> LgcpModel::cursor(const State& f) const {
  return std::make_unique<LgcpCursor>(*this, f, log_prior(f));
}

State LgcpModel::sample_prior_state(Rng& rng) const {
  return mvn_sample(chol_obs_, rng);
}

void LgcpModel::refresh_auxiliaries(Rng& rng) {
  aux_seed_ = rng.raw();
  ++epoch_;
}

}  // namespace mfmc
