#pragma once

#include <Eigen/Core>

#include <algorithm>
#include <cstddef>
#include <random>
#include <vector>

#include "ofpca/quadrature.hpp"
#include "ofpca/trajectory.hpp"

namespace ofpca::fixtures {

inline ObjectTrajectory scalar_trajectory(const std::vector<double>& grid, const std::vector<double>& values) {
  std::vector<ObjectPoint> pts;
  for (double v : values) pts.push_back(ObjectPoint::scalar(v));
  return ObjectTrajectory(SpaceKind::scalar(), grid, std::move(pts));
}

/// Rows are trajectories, columns grid points.
inline ObjectSample scalar_sample(const std::vector<double>& grid, const Eigen::MatrixXd& x) {
  std::vector<ObjectTrajectory> out;
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    std::vector<double> row(x.cols());
    for (Eigen::Index k = 0; k < x.cols(); ++k) row[k] = x(i, k);
    out.push_back(scalar_trajectory(grid, row));
  }
  return ObjectSample(std::move(out));
}

inline Eigen::MatrixXd random_matrix(std::mt19937_64& rng, Eigen::Index rows, Eigen::Index cols,
                                     double scale = 1.0) {
  std::normal_distribution<double> z(0.0, scale);
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = z(rng);
  return m;
}

/// Classical unbiased cross-covariance, written out term by term.
inline Eigen::MatrixXd classical_cov(const Eigen::MatrixXd& x) {
  const auto n = x.rows();
  const auto T = x.cols();
  Eigen::MatrixXd c = Eigen::MatrixXd::Zero(T, T);
  for (Eigen::Index s = 0; s < T; ++s)
    for (Eigen::Index t = 0; t < T; ++t) {
      double ms = 0, mt = 0;
      for (Eigen::Index i = 0; i < n; ++i) {
        ms += x(i, s);
        mt += x(i, t);
      }
      ms /= n;
      mt /= n;
      double acc = 0;
      for (Eigen::Index i = 0; i < n; ++i) acc += (x(i, s) - ms) * (x(i, t) - mt);
      c(s, t) = acc / (n - 1);
    }
  return c;
}

/// Random quantile vector of length m: sorted normals.
inline std::vector<double> random_quantile(std::mt19937_64& rng, int m, double scale = 1.0) {
  std::normal_distribution<double> z(0.0, scale);
  std::vector<double> v(m);
  for (double& x : v) x = z(rng);
  std::sort(v.begin(), v.end());
  return v;
}

/// Random feasible adjacency matrix, row-major.
inline std::vector<double> random_adjacency(std::mt19937_64& rng, int r) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> a(r * r, 0.0);
  for (int i = 0; i < r; ++i)
    for (int j = i + 1; j < r; ++j) a[i * r + j] = a[j * r + i] = u(rng);
  return a;
}

/// Random PSD matrix B B^T, row-major.
inline std::vector<double> random_psd(std::mt19937_64& rng, int r) {
  const Eigen::MatrixXd b = random_matrix(rng, r, r);
  const Eigen::MatrixXd p = b * b.transpose();
  std::vector<double> out(r * r);
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < r; ++j) out[i * r + j] = 0.5 * (p(i, j) + p(j, i));
  return out;
}

}  // namespace ofpca::fixtures
