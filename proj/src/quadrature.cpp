#include "mfmc/quadrature.hpp"

#include <algorithm>
#include <stdexcept>

namespace mfmc {

Grid1D::Grid1D(Vector nodes) : nodes_(std::move(nodes)) {
  if (nodes_.size() < 2) {
    throw std::invalid_argument("Grid1D: need at least two nodes");
  }
  for (std::size_t i = 1; i < nodes_.size(); ++i) {
    if (!(nodes_[i] > nodes_[i - 1])) {
      throw std::invalid_argument("Grid1D: nodes must be strictly increasing");
    }
  }
}

Grid1D Grid1D::uniform(double lo, double hi, std::size_t n) {
  if (n < 2) throw std::invalid_argument("Grid1D::uniform: need n >= 2");
  if (!(hi > lo)) throw std::invalid_argument("Grid1D::uniform: need hi > lo");
  Vector nodes(n);
  const double step = (hi - lo) / static_cast<double>(n - 1);
  for (std::size_t i = 0; i < n; ++i) nodes[i] = lo + step * static_cast<double>(i);
  nodes.back() = hi;
  return Grid1D(std::move(nodes));
}

double trapezoid(std::span<const double> values, const Grid1D& grid) {
  if (values.size() != grid.size()) {
    throw std::invalid_argument("trapezoid: values/grid length mismatch");
  }
  const Vector& x = grid.nodes();
  double s = 0.0;
  for (std::size_t i = 0; i + 1 < x.size(); ++i) {
    s += 0.5 * (values[i] + values[i + 1]) * (x[i + 1] - x[i]);
  }
  return s;
}

double linear_interp(const Grid1D& grid, std::span<const double> values, double x) {
  if (values.size() != grid.size()) {
    throw std::invalid_argument("linear_interp: values/grid length mismatch");
  }
  const Vector& nodes = grid.nodes();
  if (x <= nodes.front()) return values.front();
  if (x >= nodes.back()) return values.back();
  const auto it = std::upper_bound(nodes.begin(), nodes.end(), x);
  const std::size_t hi = static_cast<std::size_t>(it - nodes.begin());
  const std::size_t lo = hi - 1;
  const double w = (x - nodes[lo]) / (nodes[hi] - nodes[lo]);
  return values[lo] + w * (values[hi] - values[lo]);
}

}  // namespace mfmc
