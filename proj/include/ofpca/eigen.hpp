#pragma once

#include <Eigen/Core>

#include <cstddef>
#include <vector>

#include "ofpca/kernel.hpp"

namespace ofpca {

/// Relative threshold below which a raw eigenvalue counts as negative.
inline constexpr double kNegativeEigenTolerance = 1e-12;

/// Leading eigenpairs of the integral operator of a kernel surface.
///
/// Eigenfunctions are columns sampled on `time_grid`, orthonormal under the
/// trapezoid inner product sum_k w_k a(t_k) b(t_k). Each is signed so that its
/// integral is non-negative; when the integral is below 1e-9 in magnitude the
/// first entry larger than 1e-9 is made positive instead.
struct EigenSystem {
  std::vector<double> eigenvalues;  ///< retained, descending (clipped if requested)
  Eigen::MatrixXd eigenfunctions;   ///< T x num_retained
  std::vector<double> spectrum;     ///< full raw spectrum, descending
  std::vector<double> time_grid;
  std::vector<double> quad_weights;
  std::size_t num_retained = 0;
  /// Raw spectrum has an eigenvalue below -kNegativeEigenTolerance * max|lambda|;
  /// rounding-level negatives of a rank-deficient surface do not count.
  bool has_negative = false;
  bool clipped = false;

  Eigen::VectorXd eigenfunction(std::size_t k) const { return eigenfunctions.col(static_cast<Eigen::Index>(k)); }
};

struct EigenOptions {
  /// Zero out negative retained eigenvalues.
  bool clip_negative = false;
};

/// Nystrom discretization: eigenvectors v of W^{1/2} C W^{1/2} map to
/// eigenfunctions W^{-1/2} v. Throws BadRank for k == 0 or k > T and
/// InvalidSurface for a non-symmetric surface.
EigenSystem eigendecompose(const KernelSurface& surface, std::size_t k, EigenOptions options = {});

/// lambda_j / sum of the clipped full spectrum; j is 1-based.
/// Throws DegenerateSpectrum when the clipped spectrum sums to zero and
/// BadRank when j is out of range.
double explained_fraction(const EigenSystem& es, std::size_t j);

/// sum_j max(lambda_j, 0) phi_j phi_j^T over the retained components.
Eigen::MatrixXd reconstruct(const EigenSystem& es);

/// Smallest K whose cumulative explained fraction reaches `threshold`.
std::size_t components_for_fraction(const EigenSystem& es, double threshold);

}  // namespace ofpca
