#include "ofpca/eigen.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "ofpca/errors.hpp"

namespace ofpca {

namespace {

void apply_sign_convention(Eigen::Ref<Eigen::VectorXd> phi, const std::vector<double>& w) {
  double integral = 0.0;
  for (Eigen::Index k = 0; k < phi.size(); ++k) integral += w[static_cast<std::size_t>(k)] * phi(k);
  if (std::abs(integral) >= 1e-9) {
    if (integral < 0.0) phi = -phi;
    return;
  }
  for (Eigen::Index k = 0; k < phi.size(); ++k)
    if (std::abs(phi(k)) > 1e-9) {
      if (phi(k) < 0.0) phi = -phi;
      return;
    }
}

}  // namespace

EigenSystem eigendecompose(const KernelSurface& surface, std::size_t k, EigenOptions options) {
  validate_surface(surface);
  const std::size_t T = surface.size();
  if (k == 0 || k > T)
    throw Error(ErrorCode::BadRank, "requested " + std::to_string(k) + " components on a grid of " +
                                        std::to_string(T));
  const auto Ti = static_cast<Eigen::Index>(T);
  Eigen::VectorXd sqrt_w(Ti);
  for (Eigen::Index i = 0; i < Ti; ++i) sqrt_w(i) = std::sqrt(surface.quad_weights[static_cast<std::size_t>(i)]);

  Eigen::MatrixXd b = sqrt_w.asDiagonal() * surface.values * sqrt_w.asDiagonal();
  b = 0.5 * (b + b.transpose()).eval();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(b);
  if (solver.info() != Eigen::Success)
    throw Error(ErrorCode::InvalidSurface, "symmetric eigensolver did not converge");

  // Eigen returns ascending order.
  const Eigen::VectorXd& lam = solver.eigenvalues();
  const Eigen::MatrixXd& vec = solver.eigenvectors();

  EigenSystem es;
  es.time_grid = surface.time_grid;
  es.quad_weights = surface.quad_weights;
  es.num_retained = k;
  es.clipped = options.clip_negative;
  es.spectrum.resize(T);
  for (std::size_t j = 0; j < T; ++j) es.spectrum[j] = lam(Ti - 1 - static_cast<Eigen::Index>(j));
  const double scale = std::max(std::abs(es.spectrum.front()), std::abs(es.spectrum.back()));
  es.has_negative = es.spectrum.back() < -kNegativeEigenTolerance * scale;

  es.eigenfunctions.resize(Ti, static_cast<Eigen::Index>(k));
  es.eigenvalues.resize(k);
  for (std::size_t j = 0; j < k; ++j) {
    Eigen::VectorXd phi = vec.col(Ti - 1 - static_cast<Eigen::Index>(j)).cwiseQuotient(sqrt_w);
    double norm2 = 0.0;
    for (Eigen::Index i = 0; i < Ti; ++i) norm2 += surface.quad_weights[static_cast<std::size_t>(i)] * phi(i) * phi(i);
    phi /= std::sqrt(norm2);
    apply_sign_convention(phi, surface.quad_weights);
    es.eigenfunctions.col(static_cast<Eigen::Index>(j)) = phi;
    const double value = es.spectrum[j];
    es.eigenvalues[j] = options.clip_negative ? std::max(value, 0.0) : value;
  }
  return es;
}

double explained_fraction(const EigenSystem& es, std::size_t j) {
  if (j == 0 || j > es.num_retained) throw Error(ErrorCode::BadRank, "component index out of range");
  double total = 0.0;
  for (double l : es.spectrum) total += std::max(l, 0.0);
  if (!(total > 0.0)) throw Error(ErrorCode::DegenerateSpectrum, "clipped spectrum sums to zero");
  return std::max(es.eigenvalues[j - 1], 0.0) / total;
}

Eigen::MatrixXd reconstruct(const EigenSystem& es) {
  const Eigen::Index T = es.eigenfunctions.rows();
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(T, T);
  for (std::size_t j = 0; j < es.num_retained; ++j) {
    const double l = std::max(es.eigenvalues[j], 0.0);
    const Eigen::VectorXd phi = es.eigenfunction(j);
    out.noalias() += l * phi * phi.transpose();
  }
  return out;
}

std::size_t components_for_fraction(const EigenSystem& es, double threshold) {
  double cumulative = 0.0;
  for (std::size_t j = 1; j <= es.num_retained; ++j) {
    cumulative += explained_fraction(es, j);
    if (cumulative >= threshold) return j;
  }
  return es.num_retained;
}

}  // namespace ofpca
