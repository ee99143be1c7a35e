#pragma once

#include <Eigen/Core>

#include <cstddef>
#include <span>
#include <vector>

#include "ofpca/trajectory.hpp"

namespace ofpca {

/// A symmetric T x T kernel sampled on a time grid, with the trapezoid
/// weights used for every integral over it.
struct KernelSurface {
  std::vector<double> time_grid;
  Eigen::MatrixXd values;
  std::vector<double> quad_weights;

  std::size_t size() const noexcept { return time_grid.size(); }

  /// Builds a surface on `grid` with trapezoid weights.
  static KernelSurface on_grid(std::vector<double> grid, Eigen::MatrixXd values);
};

/// Throws InvalidSurface on shape mismatch, non-finite entries or asymmetry
/// beyond 1e-12 (relative to the largest entry).
void validate_surface(const KernelSurface& surface);

/// f_{s,t}(x,y) = d^2(x(s),y(t)) + d^2(y(s),x(t)) - d^2(x(s),x(t)) - d^2(y(s),y(t)).
double pair_kernel_f(const ObjectTrajectory& x, const ObjectTrajectory& y, std::size_t s_idx,
                     std::size_t t_idx);

enum class CovMethod {
  /// InnerProduct for the built-in spaces (all carry Euclidean coordinate metrics).
  Auto,
  /// Metric-only U-statistic accumulated over (i,j) pair blocks.
  PairBlocks,
  /// Unbiased cross-covariance of the metric coordinates; algebraically equal
  /// to the U-statistic whenever d^2 is a squared Hilbert norm.
  InnerProduct,
};

/// U-statistic estimate of the metric auto-covariance
///   C(s,t) = 1/(4n(n-1)) sum_{i != j} f_{s,t}(X_i, X_j).
/// Output is deterministic and independent of the OpenMP thread count.
/// Throws TooFewTrajectories for n < 2.
KernelSurface estimate_cov_surface(const ObjectSample& sample, CovMethod method = CovMethod::Auto);

/// (1/(2n(n-1))) sum_{i != j} d^2(x_i, x_j).
double metric_variance(std::span<const ObjectPoint> objects);

/// U-statistic metric covariance of paired objects (u_i, v_i).
double metric_covariance(std::span<const ObjectPoint> u, std::span<const ObjectPoint> v);

/// Metric covariance over the geometric mean of the two metric variances.
/// Throws DegenerateVariance when either variance is zero.
double metric_correlation(std::span<const ObjectPoint> u, std::span<const ObjectPoint> v);

/// Trapezoid integral of the diagonal.
double total_variance(const KernelSurface& surface);

/// Squared sample distance covariance (V-statistic, double-centred distance
/// matrices) between the time slices {X_i(s)} and {X_i(t)}. Comparison
/// baseline only; not an auto-covariance in the FPCA sense.
KernelSurface distance_cov_surface(const ObjectSample& sample);

namespace reference {

/// Direct serial evaluation of the U-statistic: every ordered pair i != j
/// and every (s,t) cell, no symmetry shortcuts. O(n^2 T^2) distance calls;
/// kept for tests and benchmarks.
KernelSurface estimate_cov_surface_serial(const ObjectSample& sample);

/// Serial double-centring distance covariance, one (s,t) cell at a time.
KernelSurface distance_cov_surface_serial(const ObjectSample& sample);

}  // namespace reference

}  // namespace ofpca
