#pragma once

#include <span>
#include <vector>

namespace ofpca {

/// Throws InvalidObject unless the grid is strictly increasing inside [0,1] with >= 2 points.
void validate_time_grid(std::span<const double> grid);

/// Composite trapezoid weights on a (possibly non-uniform) grid; they sum to last - first.
std::vector<double> trapezoid_weights(std::span<const double> grid);

/// Sum of weights[k] * values[k].
double integrate(std::span<const double> weights, std::span<const double> values);

/// T equally spaced points on [0,1].
std::vector<double> uniform_grid(std::size_t T);

}  // namespace ofpca
