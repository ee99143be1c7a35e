#include <cmath>

#include "ofpca/errors.hpp"
#include "ofpca/kernel.hpp"

namespace ofpca::reference {

KernelSurface estimate_cov_surface_serial(const ObjectSample& sample) {
  const std::size_t n = sample.n();
  if (n < 2) throw Error(ErrorCode::TooFewTrajectories, "need at least 2 trajectories");
  const std::size_t T = sample.grid_size();
  Eigen::MatrixXd values = Eigen::MatrixXd::Zero(T, T);
  for (std::size_t s = 0; s < T; ++s)
    for (std::size_t t = 0; t < T; ++t) {
      double acc = 0.0;
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
          if (i != j) acc += pair_kernel_f(sample[i], sample[j], s, t);
      const double nn = static_cast<double>(n);
      values(s, t) = acc / (4.0 * nn * (nn - 1.0));
    }
  return KernelSurface::on_grid(sample.time_grid(), std::move(values));
}

KernelSurface distance_cov_surface_serial(const ObjectSample& sample) {
  const std::size_t n = sample.n();
  if (n < 2) throw Error(ErrorCode::TooFewTrajectories, "need at least 2 trajectories");
  const std::size_t T = sample.grid_size();
  const double nn = static_cast<double>(n);
  Eigen::MatrixXd values(T, T);
  for (std::size_t s = 0; s < T; ++s)
    for (std::size_t t = 0; t < T; ++t) {
      Eigen::MatrixXd a(n, n), b(n, n);
      for (std::size_t k = 0; k < n; ++k)
        for (std::size_t l = 0; l < n; ++l) {
          a(k, l) = distance(sample[k][s], sample[l][s]);
          b(k, l) = distance(sample[k][t], sample[l][t]);
        }
      const Eigen::VectorXd ar = a.rowwise().mean(), ac = a.colwise().mean().transpose();
      const Eigen::VectorXd br = b.rowwise().mean(), bc = b.colwise().mean().transpose();
      const double ag = a.mean(), bg = b.mean();
      double acc = 0.0;
      for (std::size_t k = 0; k < n; ++k)
        for (std::size_t l = 0; l < n; ++l)
          acc += (a(k, l) - ar(k) - ac(l) + ag) * (b(k, l) - br(k) - bc(l) + bg);
      values(s, t) = acc / (nn * nn);
    }
  return KernelSurface::on_grid(sample.time_grid(), std::move(values));
}

}  // namespace ofpca::reference
