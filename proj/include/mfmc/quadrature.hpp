#ifndef MFMC_QUADRATURE_HPP
#define MFMC_QUADRATURE_HPP

#include <cstddef>
#include <span>

#include "mfmc/linalg.hpp"

namespace mfmc {

// Strictly increasing 1-D grid with at least two nodes; spacing may be
// nonuniform.
class Grid1D {
public:
  explicit Grid1D(Vector nodes);
  static Grid1D uniform(double lo, double hi, std::size_t n);

  const Vector& nodes() const { return nodes_; }
  std::size_t size() const { return nodes_.size(); }
  double front() const { return nodes_.front(); }
  double back() const { return nodes_.back(); }

private:
  Vector nodes_;
};

// sum_i (v_i + v_{i+1})/2 * (x_{i+1} - x_i).
double trapezoid(std::span<const double> values, const Grid1D& grid);

// Piecewise-linear value of (grid, values) at x; clamps outside the grid.
double linear_interp(const Grid1D& grid, std::span<const double> values, double x);

}  // namespace mfmc

#endif  // MFMC_QUADRATURE_HPP
