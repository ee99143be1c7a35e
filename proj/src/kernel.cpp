#include "ofpca/kernel.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <string>

#include "ofpca/errors.hpp"
#include "ofpca/quadrature.hpp"

namespace ofpca {

KernelSurface KernelSurface::on_grid(std::vector<double> grid, Eigen::MatrixXd values) {
  KernelSurface s;
  s.quad_weights = trapezoid_weights(grid);
  s.time_grid = std::move(grid);
  s.values = std::move(values);
  return s;
}

void validate_surface(const KernelSurface& surface) {
  const auto T = static_cast<Eigen::Index>(surface.time_grid.size());
  if (surface.values.rows() != T || surface.values.cols() != T ||
      surface.quad_weights.size() != surface.time_grid.size())
    throw Error(ErrorCode::InvalidSurface, "surface shape does not match its grid");
  if (!surface.values.allFinite()) throw Error(ErrorCode::InvalidSurface, "non-finite entries");
  const double scale = std::max(1.0, surface.values.cwiseAbs().maxCoeff());
  const double asym = (surface.values - surface.values.transpose()).cwiseAbs().maxCoeff();
  if (asym > 1e-12 * scale)
    throw Error(ErrorCode::InvalidSurface, "surface not symmetric (max asymmetry " +
                                               std::to_string(asym) + ")");
}

namespace {

void require_pairs(std::size_t n) {
  if (n < 2)
    throw Error(ErrorCode::TooFewTrajectories,
                "need at least 2 trajectories, got " + std::to_string(n));
}

double sq_coord_distance(std::span<const double> a, std::span<const double> b) {
  double acc = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    const double diff = a[k] - b[k];
    acc += diff * diff;
  }
  return acc;
}

// Upper bound on doubles held by the per-block partial surfaces.
constexpr std::size_t kPartialBudget = std::size_t{1} << 23;
constexpr std::size_t kMaxBlocks = 64;

KernelSurface cov_pair_blocks(const ObjectSample& sample) {
  const std::size_t n = sample.n();
  const std::size_t T = sample.grid_size();
  const double cw = sample.space().coord_weight();
  const auto& trajs = sample.trajectories();

  // Pairs (i<j) enumerated row by row and split into a fixed number of
  // contiguous blocks; the split depends only on (n, T), never on threads.
  const std::size_t pairs = n * (n - 1) / 2;
  const std::size_t cells = T * T;
  const std::size_t blocks =
      std::max<std::size_t>(1, std::min({pairs, kMaxBlocks, kPartialBudget / cells}));
  std::vector<Eigen::MatrixXd> partial(blocks);

#pragma omp parallel for schedule(dynamic, 1)
  for (std::size_t b = 0; b < blocks; ++b) {
    const std::size_t first = b * pairs / blocks;
    const std::size_t last = (b + 1) * pairs / blocks;
    Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(T, T);
    // Locate the (i, j) of the block's first pair.
    std::size_t i = 0;
    std::size_t row_start = 0;
    while (row_start + (n - 1 - i) <= first) {
      row_start += n - 1 - i;
      ++i;
    }
    std::size_t j = i + 1 + (first - row_start);
    for (std::size_t p = first; p < last; ++p) {
      const ObjectTrajectory& xi = trajs[i];
      const ObjectTrajectory& xj = trajs[j];
      for (std::size_t t = 0; t < T; ++t) {
        const auto yt = xj[t].data();
        for (std::size_t s = 0; s < T; ++s) acc(s, t) += sq_coord_distance(xi[s].data(), yt);
      }
      if (++j == n) {
        ++i;
        j = i + 1;
      }
    }
    partial[b] = std::move(acc);
  }

  Eigen::MatrixXd cross = Eigen::MatrixXd::Zero(T, T);
  for (const auto& p : partial) cross += p;

  // Self terms: sum_{i<j} [d^2(X_i(s),X_i(t)) + d^2(X_j(s),X_j(t))] = (n-1) sum_i S_i(s,t).
  Eigen::MatrixXd self = Eigen::MatrixXd::Zero(T, T);
  for (const auto& x : trajs)
    for (std::size_t s = 0; s < T; ++s)
      for (std::size_t t = s + 1; t < T; ++t) {
        const double d = sq_coord_distance(x[s].data(), x[t].data());
        self(s, t) += d;
        self(t, s) += d;
      }

  const double nn = static_cast<double>(n);
  // Summing over i<j and doubling: 2/(4n(n-1)).
  const double scale = cw * 2.0 / (4.0 * nn * (nn - 1.0));
  Eigen::MatrixXd values(T, T);
  for (std::size_t s = 0; s < T; ++s)
    for (std::size_t t = s; t < T; ++t) {
      const double f = cross(s, t) + cross(t, s) - (nn - 1.0) * self(s, t);
      values(s, t) = scale * f;
      values(t, s) = values(s, t);
    }
  return KernelSurface::on_grid(sample.time_grid(), std::move(values));
}

KernelSurface cov_inner_product(const ObjectSample& sample) {
  const std::size_t n = sample.n();
  const std::size_t T = sample.grid_size();
  const std::size_t dim = sample.space().coord_size();
  const double cw = sample.space().coord_weight();

  // Row s holds the centred coordinates of all n objects at time s.
  using RowMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  RowMat centred(T, n * dim);
#pragma omp parallel for schedule(static)
  for (std::size_t s = 0; s < T; ++s) {
    std::vector<double> mean(dim, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      const auto x = sample[i][s].data();
      for (std::size_t d = 0; d < dim; ++d) mean[d] += x[d];
    }
    for (double& m : mean) m /= static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i) {
      const auto x = sample[i][s].data();
      for (std::size_t d = 0; d < dim; ++d) centred(s, i * dim + d) = x[d] - mean[d];
    }
  }

  const double scale = cw / static_cast<double>(n - 1);
  Eigen::MatrixXd values(T, T);
#pragma omp parallel for schedule(dynamic, 1)
  for (std::size_t s = 0; s < T; ++s)
    for (std::size_t t = s; t < T; ++t) values(s, t) = scale * centred.row(s).dot(centred.row(t));
  for (std::size_t s = 0; s < T; ++s)
    for (std::size_t t = 0; t < s; ++t) values(s, t) = values(t, s);
  return KernelSurface::on_grid(sample.time_grid(), std::move(values));
}

}  // namespace

double pair_kernel_f(const ObjectTrajectory& x, const ObjectTrajectory& y, std::size_t s_idx,
                     std::size_t t_idx) {
  if (s_idx >= x.size() || t_idx >= x.size() || s_idx >= y.size() || t_idx >= y.size())
    throw Error(ErrorCode::IndexError, "grid index out of range");
  return squared_distance(x[s_idx], y[t_idx]) + squared_distance(y[s_idx], x[t_idx]) -
         squared_distance(x[s_idx], x[t_idx]) - squared_distance(y[s_idx], y[t_idx]);
}

KernelSurface estimate_cov_surface(const ObjectSample& sample, CovMethod method) {
  require_pairs(sample.n());
  switch (method) {
    case CovMethod::PairBlocks: return cov_pair_blocks(sample);
    case CovMethod::Auto:
    case CovMethod::InnerProduct: return cov_inner_product(sample);
  }
  throw Error(ErrorCode::InvalidSurface, "unknown covariance method");
}

double metric_variance(std::span<const ObjectPoint> objects) {
  const std::size_t n = objects.size();
  require_pairs(n);
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) acc += squared_distance(objects[i], objects[j]);
  const double nn = static_cast<double>(n);
  return acc / (nn * (nn - 1.0));
}

double metric_covariance(std::span<const ObjectPoint> u, std::span<const ObjectPoint> v) {
  if (u.size() != v.size()) throw Error(ErrorCode::InvalidObject, "unpaired samples");
  const std::size_t n = u.size();
  require_pairs(n);
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      acc += squared_distance(u[i], v[j]) + squared_distance(u[j], v[i]) -
             squared_distance(u[i], v[i]) - squared_distance(u[j], v[j]);
  const double nn = static_cast<double>(n);
  return 2.0 * acc / (4.0 * nn * (nn - 1.0));
}

double metric_correlation(std::span<const ObjectPoint> u, std::span<const ObjectPoint> v) {
  const double cuv = metric_covariance(u, v);
  const double cuu = metric_covariance(u, u);
  const double cvv = metric_covariance(v, v);
  if (!(cuu > 0.0) || !(cvv > 0.0))
    throw Error(ErrorCode::DegenerateVariance, "zero metric variance in a margin");
  // sqrt(c * c) == c in IEEE arithmetic, so self-correlation is exactly 1.
  double rho = cuv / std::sqrt(cuu * cvv);
  if (rho > 1.0 && rho <= 1.0 + 1e-9) rho = 1.0;
  if (rho < -1.0 && rho >= -1.0 - 1e-9) rho = -1.0;
  return rho;
}

double total_variance(const KernelSurface& surface) {
  double acc = 0.0;
  for (std::size_t k = 0; k < surface.size(); ++k)
    acc += surface.quad_weights[k] * surface.values(static_cast<Eigen::Index>(k),
                                                    static_cast<Eigen::Index>(k));
  return acc;
}

namespace {

Eigen::MatrixXd double_centred_distances(const std::vector<ObjectPoint>& slice) {
  const auto n = static_cast<Eigen::Index>(slice.size());
  Eigen::MatrixXd a(n, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    a(k, k) = 0.0;
    for (Eigen::Index l = k + 1; l < n; ++l) {
      a(k, l) = distance(slice[k], slice[l]);
      a(l, k) = a(k, l);
    }
  }
  const Eigen::VectorXd row_mean = a.rowwise().mean();
  const double grand = row_mean.mean();
  for (Eigen::Index k = 0; k < n; ++k)
    for (Eigen::Index l = 0; l < n; ++l) a(k, l) += grand - row_mean(k) - row_mean(l);
  return a;
}

}  // namespace

KernelSurface distance_cov_surface(const ObjectSample& sample) {
  require_pairs(sample.n());
  const std::size_t T = sample.grid_size();
  const double nn = static_cast<double>(sample.n());
  std::vector<Eigen::MatrixXd> centred(T);
#pragma omp parallel for schedule(dynamic, 1)
  for (std::size_t s = 0; s < T; ++s) centred[s] = double_centred_distances(sample.slice(s));

  Eigen::MatrixXd values(T, T);
#pragma omp parallel for schedule(dynamic, 1)
  for (std::size_t s = 0; s < T; ++s)
    for (std::size_t t = s; t < T; ++t)
      values(s, t) = centred[s].cwiseProduct(centred[t]).sum() / (nn * nn);
  for (std::size_t s = 0; s < T; ++s)
    for (std::size_t t = 0; t < s; ++t) values(s, t) = values(t, s);
  return KernelSurface::on_grid(sample.time_grid(), std::move(values));
}

}  // namespace ofpca
