#include "ofpca/fpca.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <string>

#include "ofpca/errors.hpp"
#include "ofpca/parallel.hpp"
#include "ofpca/quadrature.hpp"

namespace ofpca {

ObjectTrajectory frechet_mean_trajectory(const ObjectSample& sample) {
  const std::size_t n = sample.n();
  const std::size_t T = sample.grid_size();
  const std::vector<double> weights(n, 1.0 / static_cast<double>(n));
  std::vector<ObjectPoint> points(T);
  parallel_for(T, [&](std::size_t k) { points[k] = weighted_barycenter(sample.slice(k), weights); });
  return ObjectTrajectory(sample.space(), sample.time_grid(), std::move(points));
}

std::vector<double> normalize_eigenfunction(const EigenSystem& es, std::size_t k) {
  if (k >= es.num_retained) throw Error(ErrorCode::BadRank, "component index out of range");
  const Eigen::VectorXd phi = es.eigenfunction(k);
  const std::span<const double> values(phi.data(), static_cast<std::size_t>(phi.size()));
  const double integral = integrate(es.quad_weights, values);
  if (!(std::abs(integral) >= 1e-6)) {
    char buf[96];
    std::snprintf(buf, sizeof buf, "eigenfunction %zu integrates to %.3g", k + 1, integral);
    throw Error(ErrorCode::NonIntegrableEigenfunction, buf);
  }
  std::vector<double> out(values.begin(), values.end());
  for (double& v : out) v /= integral;
  return out;
}

ObjectPoint object_fpc(const ObjectTrajectory& traj, std::span<const double> phi_star,
                       std::span<const double> quad_weights) {
  if (phi_star.size() != traj.size() || quad_weights.size() != traj.size())
    throw Error(ErrorCode::InvalidObject, "weight function does not match the trajectory grid");
  std::vector<double> weights(traj.size());
  for (std::size_t k = 0; k < traj.size(); ++k) weights[k] = quad_weights[k] * phi_star[k];
  return weighted_barycenter(traj.points(), weights);
}

double riemann_objective(const ObjectTrajectory& traj, std::span<const double> phi_star,
                         const ObjectPoint& omega) {
  if (phi_star.size() != traj.size())
    throw Error(ErrorCode::InvalidObject, "weight function does not match the trajectory grid");
  const std::vector<double> delta = trapezoid_weights(traj.time_grid());
  double acc = 0.0;
  for (std::size_t k = 0; k < traj.size(); ++k)
    acc += squared_distance(omega, traj[k]) * phi_star[k] * delta[k];
  return acc;
}

ObjectPoint generic_riemann_integral(const ObjectTrajectory& traj, std::span<const double> phi_star,
                                     std::span<const ObjectPoint> candidates) {
  if (candidates.empty()) throw Error(ErrorCode::EmptyInput, "no candidates");
  std::size_t best = 0;
  double best_value = std::numeric_limits<double>::infinity();
  for (std::size_t c = 0; c < candidates.size(); ++c) {
    const double value = riemann_objective(traj, phi_star, candidates[c]);
    if (value < best_value) {
      best_value = value;
      best = c;
    }
  }
  return candidates[best];
}

ObjectPoint generic_riemann_integral(const ObjectTrajectory& traj, std::span<const double> phi_star) {
  return generic_riemann_integral(traj, phi_star, traj.points());
}

Eigen::MatrixXd distance_curves(const ObjectSample& sample, const ObjectTrajectory& mean) {
  const std::size_t n = sample.n();
  const std::size_t T = sample.grid_size();
  if (mean.time_grid() != sample.time_grid() || mean.space() != sample.space())
    throw Error(ErrorCode::InvalidObject, "mean trajectory is not on the sample grid");
  Eigen::MatrixXd d(n, T);
  parallel_for(n, [&](std::size_t i) {
    for (std::size_t k = 0; k < T; ++k)
      d(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = distance(sample[i][k], mean[k]);
  });
  return d;
}

Eigen::MatrixXd frechet_scores(const ObjectSample& sample, const ObjectTrajectory& mean,
                               const EigenSystem& es) {
  if (es.time_grid != sample.time_grid())
    throw Error(ErrorCode::InvalidObject, "eigen system is not on the sample grid");
  const Eigen::MatrixXd d = distance_curves(sample, mean);
  const Eigen::Map<const Eigen::VectorXd> w(es.quad_weights.data(),
                                            static_cast<Eigen::Index>(es.quad_weights.size()));
  return d * w.asDiagonal() * es.eigenfunctions;
}

FpcaFit fit_fpca(const ObjectSample& sample, const FitOptions& options) {
  FpcaFit fit;
  fit.surface = estimate_cov_surface(sample, options.method);
  fit.eigen = eigendecompose(fit.surface, options.components, {options.clip_negative});
  if (fit.eigen.has_negative)
  {
    char buf[96];
    std::snprintf(buf, sizeof buf, "estimated surface has negative eigenvalues (smallest %.6g)",
                  fit.eigen.spectrum.back());
    fit.warnings.emplace_back(buf);
  }
  fit.mean = frechet_mean_trajectory(sample);
  fit.distance_curves = distance_curves(sample, fit.mean);
  const Eigen::Map<const Eigen::VectorXd> w(fit.eigen.quad_weights.data(),
                                            static_cast<Eigen::Index>(fit.eigen.quad_weights.size()));
  fit.scores = fit.distance_curves * w.asDiagonal() * fit.eigen.eigenfunctions;

  if (!options.object_fpcs) return fit;
  const std::size_t n = sample.n();
  for (std::size_t k = 0; k < fit.eigen.num_retained; ++k) {
    ComponentFpcs comp;
    comp.component = k;
    std::vector<double> phi_star;
    try {
      phi_star = normalize_eigenfunction(fit.eigen, k);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::NonIntegrableEigenfunction) throw;
      comp.note = e.what();
      fit.warnings.push_back("object FPCs skipped for component " + std::to_string(k + 1) + ": " +
                             e.what());
      fit.status = "partial";
      fit.object_fpcs.push_back(std::move(comp));
      continue;
    }
    comp.per_trajectory.resize(n);
    parallel_for(n, [&](std::size_t i) {
      comp.per_trajectory[i] = object_fpc(sample[i], phi_star, fit.eigen.quad_weights);
    });
    const std::vector<double> uniform(n, 1.0 / static_cast<double>(n));
    comp.column_mean = weighted_barycenter(comp.per_trajectory, uniform);
    comp.available = true;
    fit.object_fpcs.push_back(std::move(comp));
  }
  return fit;
}

}  // namespace ofpca
