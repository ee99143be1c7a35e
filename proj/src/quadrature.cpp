#include "ofpca/quadrature.hpp"

#include <cmath>
#include <string>

#include "ofpca/errors.hpp"

namespace ofpca {

void validate_time_grid(std::span<const double> grid) {
  if (grid.size() < 2) throw Error(ErrorCode::InvalidObject, "time grid needs at least 2 points");
  for (std::size_t k = 0; k < grid.size(); ++k) {
    if (!std::isfinite(grid[k])) throw Error(ErrorCode::InvalidObject, "non-finite time point");
    if (k > 0 && !(grid[k] > grid[k - 1]))
      throw Error(ErrorCode::InvalidObject,
                  "time grid not strictly increasing at index " + std::to_string(k));
  }
  if (grid.front() < 0.0 || grid.back() > 1.0)
    throw Error(ErrorCode::InvalidObject, "time grid must lie in [0,1]");
}

std::vector<double> trapezoid_weights(std::span<const double> grid) {
  const std::size_t T = grid.size();
  std::vector<double> w(T, 0.0);
  for (std::size_t k = 0; k + 1 < T; ++k) {
    const double half = 0.5 * (grid[k + 1] - grid[k]);
    w[k] += half;
    w[k + 1] += half;
  }
  return w;
}

double integrate(std::span<const double> weights, std::span<const double> values) {
  double acc = 0.0;
  for (std::size_t k = 0; k < weights.size(); ++k) acc += weights[k] * values[k];
  return acc;
}

std::vector<double> uniform_grid(std::size_t T) {
  std::vector<double> g(T);
  if (T == 1) {
    g[0] = 0.0;
    return g;
  }
  for (std::size_t k = 0; k < T; ++k) g[k] = static_cast<double>(k) / static_cast<double>(T - 1);
  g.back() = 1.0;
  return g;
}

}  // namespace ofpca
