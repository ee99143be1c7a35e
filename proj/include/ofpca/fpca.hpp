#pragma once

#include <Eigen/Core>

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ofpca/eigen.hpp"
#include "ofpca/kernel.hpp"
#include "ofpca/trajectory.hpp"

namespace ofpca {

/// Pointwise Frechet mean: uniform-weight barycenter of each time slice.
ObjectTrajectory frechet_mean_trajectory(const ObjectSample& sample);

/// phi_k / integral(phi_k), integrating to one under the trapezoid rule.
/// k is 0-based. Throws NonIntegrableEigenfunction when |integral| < 1e-6.
std::vector<double> normalize_eigenfunction(const EigenSystem& es, std::size_t k);

/// Frechet integral of a trajectory against a weight function phi_star that
/// integrates to one: the barycenter with (possibly signed) weights
/// quad_weights[k] * phi_star[k] over the trajectory's points.
ObjectPoint object_fpc(const ObjectTrajectory& traj, std::span<const double> phi_star,
                       std::span<const double> quad_weights);

/// Riemann sum sum_k d^2(omega, X(t_k)) phi_star(t_k) Delta_k with trapezoid
/// Delta_k on the trajectory grid.
double riemann_objective(const ObjectTrajectory& traj, std::span<const double> phi_star,
                         const ObjectPoint& omega);

/// Minimizer of riemann_objective over an explicit candidate set; ties go to
/// the first candidate. Metric-agnostic, so it doubles as the oracle for
/// object_fpc. Throws EmptyInput on an empty candidate set.
ObjectPoint generic_riemann_integral(const ObjectTrajectory& traj, std::span<const double> phi_star,
                                     std::span<const ObjectPoint> candidates);

/// Heuristic default: the trajectory's own observed objects as candidates.
ObjectPoint generic_riemann_integral(const ObjectTrajectory& traj, std::span<const double> phi_star);

/// D_i(t_k) = d(X_i(t_k), mean(t_k)), an n x T matrix.
Eigen::MatrixXd distance_curves(const ObjectSample& sample, const ObjectTrajectory& mean);

/// beta_ik = sum_k' w_k' D_i(t_k') phi_k(t_k'), an n x K matrix.
Eigen::MatrixXd frechet_scores(const ObjectSample& sample, const ObjectTrajectory& mean,
                               const EigenSystem& es);

struct FitOptions {
  std::size_t components = 4;
  bool clip_negative = false;
  bool object_fpcs = false;
  CovMethod method = CovMethod::Auto;
};

/// Object FPCs for one eigenfunction: one Frechet integral per trajectory.
struct ComponentFpcs {
  std::size_t component = 0;  ///< 0-based
  bool available = false;
  std::vector<ObjectPoint> per_trajectory;
  /// Frechet mean of the column; a display summary, derived output.
  std::optional<ObjectPoint> column_mean;
  std::string note;
};

struct FpcaFit {
  KernelSurface surface;
  EigenSystem eigen;
  ObjectTrajectory mean;
  Eigen::MatrixXd scores;           ///< n x K
  Eigen::MatrixXd distance_curves;  ///< n x T
  std::vector<ComponentFpcs> object_fpcs;
  std::vector<std::string> warnings;
  std::string status = "ok";  ///< "ok" or "partial"
};

/// Surface -> eigen -> mean -> scores (-> object FPCs). Eigenfunctions with a
/// vanishing integral skip their object FPCs with a warning; scores are
/// always produced.
FpcaFit fit_fpca(const ObjectSample& sample, const FitOptions& options);

}  // namespace ofpca
