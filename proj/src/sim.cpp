#include "ofpca/sim.hpp"

#include <boost/math/distributions/normal.hpp>
#include <boost/math/quadrature/gauss.hpp>

#include <algorithm>
#include <cmath>

#include "ofpca/eigen.hpp"
#include "ofpca/errors.hpp"
#include "ofpca/parallel.hpp"
#include "ofpca/quadrature.hpp"

namespace ofpca::sim {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

std::mt19937_64 substream(std::uint64_t seed, std::uint64_t run, std::uint64_t index) {
  const std::uint64_t key = splitmix64(splitmix64(splitmix64(seed) ^ run) ^ index);
  std::seed_seq seq{static_cast<std::uint32_t>(key), static_cast<std::uint32_t>(key >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(run)};
  return std::mt19937_64(seq);
}

double uniform01(std::mt19937_64& rng) {
  // (k + 0.5) / 2^53 for k in [0, 2^53): never 0 or 1.
  const std::uint64_t k = rng() >> 11;
  return (static_cast<double>(k) + 0.5) * 0x1.0p-53;
}

double inverse_normal_cdf(double p) {
  static const boost::math::normal_distribution<double> standard;
  return boost::math::quantile(standard, p);
}

std::array<double, 3> dist_basis(double t) {
  return {(t * t - 0.5) / 0.3416, std::sqrt(3.0) * t,
          (t * t * t - 0.3571 * t * t - 0.6 * t + 0.1786) / 0.0895};
}

double jacobi_polynomial(int degree, double alpha, double beta, double x) {
  if (degree == 0) return 1.0;
  double prev = 1.0;
  double cur = 0.5 * (alpha - beta) + 0.5 * (alpha + beta + 2.0) * x;
  for (int k = 1; k < degree; ++k) {
    const double n = k;
    const double s = 2.0 * n + alpha + beta;
    const double a1 = 2.0 * (n + 1.0) * (n + alpha + beta + 1.0) * s;
    const double a2 = (s + 1.0) * (alpha * alpha - beta * beta);
    const double a3 = s * (s + 1.0) * (s + 2.0);
    const double a4 = 2.0 * (n + alpha) * (n + beta) * (s + 2.0);
    const double next = ((a2 + a3 * x) * cur - a4 * prev) / a1;
    prev = cur;
    cur = next;
  }
  return cur;
}

namespace {

double jacobi_shape(int j, double t) {
  return jacobi_polynomial(2 * j, 4.0, 3.0, 2.0 * t - 1.0) * std::pow(t, 1.5) * (1.0 - t) * (1.0 - t);
}

// Squared shape is a polynomial of degree <= 19 in t, so 20-point
// Gauss-Legendre is exact up to rounding.
const std::array<double, 3>& jacobi_norms() {
  static const std::array<double, 3> norms = [] {
    std::array<double, 3> out{};
    for (int j = 1; j <= 3; ++j) {
      const auto sq = [j](double x) {
        const double v = jacobi_shape(j, x);
        return v * v;
      };
      out[j - 1] = std::sqrt(boost::math::quadrature::gauss<double, 20>::integrate(sq, 0.0, 1.0));
    }
    return out;
  }();
  return norms;
}

}  // namespace

double jacobi_basis(int j, double t) {
  if (j < 1 || j > 3) throw Error(ErrorCode::IndexError, "jacobi basis index must be 1..3");
  return jacobi_shape(j, t) / jacobi_norms()[j - 1];
}

// ---------------------------------------------------------------------------

DistEffects draw_dist_effects(std::uint64_t seed, std::uint64_t run, std::uint64_t index) {
  auto rng = substream(seed, run, index);
  DistEffects e;
  e.U = std::sqrt(12.0) * inverse_normal_cdf(uniform01(rng));
  e.V = inverse_normal_cdf(uniform01(rng));
  e.W = std::sqrt(72.0) * uniform01(rng);
  e.Z = 3.0 * uniform01(rng);
  return e;
}

GaussianParams dist_params(const DistEffects& e, double t) {
  const auto phi = dist_basis(t);
  return {1.0 + e.U * phi[0] + e.V * phi[2],
          std::max(3.0 + e.W * phi[1] + e.Z * phi[2], 1e-6)};
}

std::vector<double> quantile_levels(int m) {
  std::vector<double> u(static_cast<std::size_t>(m));
  for (int k = 0; k < m; ++k) u[static_cast<std::size_t>(k)] = (k + 0.5) / m;
  return u;
}

ObjectSample simulate_distributions(const DistSimConfig& cfg) {
  if (cfg.n < 2 || cfg.T < 3 || cfg.m < 2)
    throw Error(ErrorCode::InvalidObject, "distribution design needs n >= 2, T >= 3, m >= 2");
  const std::vector<double> grid = uniform_grid(cfg.T);
  const SpaceKind space = SpaceKind::quantile(cfg.m);
  std::vector<double> z;
  for (double u : quantile_levels(cfg.m)) z.push_back(inverse_normal_cdf(u));

  std::vector<ObjectTrajectory> trajs(cfg.n);
  parallel_for(cfg.n, [&](std::size_t i) {
    const DistEffects e = cfg.zero_effects ? DistEffects{} : draw_dist_effects(cfg.seed, cfg.run, i);
    std::vector<ObjectPoint> points;
    points.reserve(cfg.T);
    for (double t : grid) {
      const GaussianParams g = dist_params(e, t);
      std::vector<double> q(z.size());
      for (std::size_t k = 0; k < z.size(); ++k) q[k] = g.mean + g.sd * z[k];
      points.emplace_back(space, std::move(q));
    }
    trajs[i] = ObjectTrajectory(space, grid, std::move(points));
  });
  return ObjectSample(std::move(trajs));
}

// ---------------------------------------------------------------------------

NetEffects draw_net_effects(std::uint64_t seed, std::uint64_t run, std::uint64_t index) {
  auto rng = substream(seed, run, index);
  NetEffects e;
  e.U = 0.4 * uniform01(rng);
  e.V = 0.1 * uniform01(rng);
  e.W = 0.3 * uniform01(rng);
  e.Z = 0.1 * uniform01(rng);
  return e;
}

CommunityWeights net_weights(const NetEffects& e, double t) {
  const double phi1 = jacobi_basis(1, t);
  const double phi2 = jacobi_basis(2, t);
  const double phi3 = jacobi_basis(3, t);
  CommunityWeights w;
  w.within_first = std::clamp(0.5 + e.U * phi1 + e.V * phi3, 0.0, 1.0);
  w.within_second = std::clamp(0.5 + e.W * phi2 + e.Z * phi3, 0.0, 1.0);
  w.between = kCrossWeight;
  return w;
}

ObjectPoint community_adjacency(const CommunityWeights& w) {
  constexpr int r = kNetNodes;
  std::vector<double> a(static_cast<std::size_t>(r * r), 0.0);
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < r; ++j) {
      if (i == j) continue;
      const bool first_i = i < kCommunitySize;
      const bool first_j = j < kCommunitySize;
      double v = w.between;
      if (first_i && first_j) v = w.within_first;
      if (!first_i && !first_j) v = w.within_second;
      a[static_cast<std::size_t>(i * r + j)] = v;
    }
  return ObjectPoint(SpaceKind::adjacency(r), std::move(a));
}

ObjectSample simulate_networks(const NetSimConfig& cfg) {
  if (cfg.n < 2 || cfg.T < 3) throw Error(ErrorCode::InvalidObject, "network design needs n >= 2, T >= 3");
  const std::vector<double> grid = uniform_grid(cfg.T);
  const SpaceKind space = SpaceKind::adjacency(kNetNodes);
  std::vector<ObjectTrajectory> trajs(cfg.n);
  parallel_for(cfg.n, [&](std::size_t i) {
    const NetEffects e = cfg.zero_effects ? NetEffects{} : draw_net_effects(cfg.seed, cfg.run, i);
    std::vector<ObjectPoint> points;
    points.reserve(cfg.T);
    for (double t : grid) points.push_back(community_adjacency(net_weights(e, t)));
    trajs[i] = ObjectTrajectory(space, grid, std::move(points));
  });
  return ObjectSample(std::move(trajs));
}

// ---------------------------------------------------------------------------

namespace {

double weighted_dot(const std::vector<double>& w, const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  double acc = 0.0;
  for (Eigen::Index k = 0; k < a.size(); ++k) acc += w[static_cast<std::size_t>(k)] * a(k) * b(k);
  return acc;
}

TruthSpec finish_truth(Design design, const std::vector<double>& grid, Eigen::MatrixXd surface,
                       const Eigen::MatrixXd& closed_form, std::vector<double> nominal) {
  TruthSpec truth;
  truth.design = design;
  truth.time_grid = grid;
  truth.quad_weights = trapezoid_weights(grid);
  truth.surface = std::move(surface);
  truth.nominal_eigenvalues = std::move(nominal);
  const EigenSystem es = eigendecompose(KernelSurface::on_grid(grid, truth.surface), 3);
  truth.eigenvalues = es.eigenvalues;
  truth.eigenfunctions = es.eigenfunctions;
  for (Eigen::Index j = 0; j < 3; ++j) {
    const Eigen::VectorXd phi = truth.eigenfunctions.col(j);
    if (weighted_dot(truth.quad_weights, phi, closed_form.col(j)) < 0.0)
      truth.eigenfunctions.col(j) = -phi;
  }
  return truth;
}

}  // namespace

TruthSpec dist_truth(const std::vector<double>& grid) {
  const auto T = static_cast<Eigen::Index>(grid.size());
  Eigen::MatrixXd phi(T, 3);
  for (Eigen::Index k = 0; k < T; ++k) {
    const auto b = dist_basis(grid[static_cast<std::size_t>(k)]);
    for (Eigen::Index j = 0; j < 3; ++j) phi(k, j) = b[static_cast<std::size_t>(j)];
  }
  const Eigen::Vector3d lambda(12.0, 6.0, 1.75);
  Eigen::MatrixXd surface = phi * lambda.asDiagonal() * phi.transpose();
  return finish_truth(Design::Dist, grid, std::move(surface), phi, {12.0, 6.0, 1.75});
}

Eigen::MatrixXd net_population_surface(const std::vector<double>& grid, std::size_t draws,
                                       std::uint64_t seed) {
  if (draws < 2) throw Error(ErrorCode::TooFewTrajectories, "oracle needs at least 2 draws");
  const auto T = static_cast<Eigen::Index>(grid.size());
  Eigen::MatrixXd basis(T, 3);
  for (Eigen::Index k = 0; k < T; ++k)
    for (int j = 1; j <= 3; ++j) basis(k, j - 1) = jacobi_basis(j, grid[static_cast<std::size_t>(k)]);

  constexpr std::size_t kBlock = 8192;
  const std::size_t blocks = (draws + kBlock - 1) / kBlock;
  struct Partial {
    Eigen::VectorXd sum1, sum2;
    Eigen::MatrixXd gram1, gram2;
  };
  std::vector<Partial> partial(blocks);
  constexpr std::uint64_t kOracleRun = 0x6f7261636c65ULL;

  parallel_for(blocks, [&](std::size_t b) {
    const std::size_t first = b * kBlock;
    const std::size_t count = std::min(kBlock, draws - first);
    auto rng = substream(seed, kOracleRun, b);
    // Edge weights centred at 0.5 to keep the Gram accumulation well conditioned.
    Eigen::MatrixXd p1(static_cast<Eigen::Index>(count), T), p2(static_cast<Eigen::Index>(count), T);
    for (std::size_t r = 0; r < count; ++r) {
      const double u = 0.4 * uniform01(rng);
      const double v = 0.1 * uniform01(rng);
      const double w = 0.3 * uniform01(rng);
      const double z = 0.1 * uniform01(rng);
      for (Eigen::Index k = 0; k < T; ++k) {
        const auto ri = static_cast<Eigen::Index>(r);
        p1(ri, k) = std::clamp(0.5 + u * basis(k, 0) + v * basis(k, 2), 0.0, 1.0) - 0.5;
        p2(ri, k) = std::clamp(0.5 + w * basis(k, 1) + z * basis(k, 2), 0.0, 1.0) - 0.5;
      }
    }
    partial[b] = {p1.colwise().sum().transpose(), p2.colwise().sum().transpose(),
                  p1.transpose() * p1, p2.transpose() * p2};
  });

  Eigen::VectorXd s1 = Eigen::VectorXd::Zero(T), s2 = Eigen::VectorXd::Zero(T);
  Eigen::MatrixXd g1 = Eigen::MatrixXd::Zero(T, T), g2 = Eigen::MatrixXd::Zero(T, T);
  for (const Partial& p : partial) {
    s1 += p.sum1;
    s2 += p.sum2;
    g1 += p.gram1;
    g2 += p.gram2;
  }
  const double nd = static_cast<double>(draws);
  const Eigen::MatrixXd cov1 = (g1 - s1 * s1.transpose() / nd) / (nd - 1.0);
  const Eigen::MatrixXd cov2 = (g2 - s2 * s2.transpose() / nd) / (nd - 1.0);
  const double entries = kCommunitySize * (kCommunitySize - 1);
  Eigen::MatrixXd c = entries * (cov1 + cov2);
  return 0.5 * (c + c.transpose());
}

TruthSpec net_truth(const std::vector<double>& grid, std::size_t draws, std::uint64_t seed) {
  const auto T = static_cast<Eigen::Index>(grid.size());
  Eigen::MatrixXd phi(T, 3);
  for (Eigen::Index k = 0; k < T; ++k)
    for (int j = 1; j <= 3; ++j) phi(k, j - 1) = jacobi_basis(j, grid[static_cast<std::size_t>(k)]);
  return finish_truth(Design::Net, grid, net_population_surface(grid, draws, seed), phi,
                      {0.266, 0.15, 0.0417});
}

TruthSpec truth_for(const MiseOptions& opts) {
  const std::vector<double> grid = uniform_grid(opts.T);
  return opts.design == Design::Dist ? dist_truth(grid) : net_truth(grid);
}

RunErrors run_errors(std::size_t n, std::uint64_t run, const MiseOptions& opts,
                     const TruthSpec& truth) {
  const std::vector<double> grid = uniform_grid(opts.T);
  if (grid != truth.time_grid) throw Error(ErrorCode::InvalidSurface, "truth grid differs from design grid");
  KernelSurface surface;
  if (opts.truth_fed) {
    surface = KernelSurface::on_grid(grid, truth.surface);
  } else if (opts.design == Design::Dist) {
    surface = estimate_cov_surface(
        simulate_distributions({n, opts.T, opts.m, opts.seed, run, false}), opts.method);
  } else {
    surface = estimate_cov_surface(simulate_networks({n, opts.T, opts.seed, run, false}), opts.method);
  }
  const EigenSystem es = eigendecompose(surface, 3);
  const std::vector<double>& w = truth.quad_weights;
  const Eigen::Map<const Eigen::VectorXd> wv(w.data(), static_cast<Eigen::Index>(w.size()));

  RunErrors err;
  const Eigen::MatrixXd diff = surface.values - truth.surface;
  err.surface = (wv.transpose() * diff.cwiseProduct(diff) * wv).value();
  for (Eigen::Index j = 0; j < 3; ++j) {
    Eigen::VectorXd phi = es.eigenfunctions.col(j);
    const Eigen::VectorXd target = truth.eigenfunctions.col(j);
    if (weighted_dot(w, phi, target) < 0.0) phi = -phi;
    const Eigen::VectorXd e = phi - target;
    const auto ju = static_cast<std::size_t>(j);
    err.eigenfunction[ju] = weighted_dot(w, e, e);
    const double dl = es.eigenvalues[ju] - truth.eigenvalues[ju];
    err.eigenvalue[ju] = dl * dl;
    err.estimated_eigenvalues[ju] = es.eigenvalues[ju];
  }
  return err;
}

MiseRow mise_report(std::size_t n, const MiseOptions& opts, const TruthSpec& truth) {
  if (opts.runs < 1) throw Error(ErrorCode::EmptyInput, "MISE needs at least one run");
  std::vector<RunErrors> per_run(opts.runs);
  parallel_for(opts.runs, [&](std::size_t r) { per_run[r] = run_errors(n, r, opts, truth); });

  MiseRow row;
  row.n = n;
  row.runs = opts.runs;
  for (const RunErrors& e : per_run) {
    row.surface += e.surface;
    for (std::size_t j = 0; j < 3; ++j) {
      row.eigenfunction[j] += e.eigenfunction[j];
      row.eigenvalue[j] += e.eigenvalue[j];
      row.mean_eigenvalues[j] += e.estimated_eigenvalues[j];
    }
  }
  const double runs = static_cast<double>(opts.runs);
  row.surface /= runs;
  for (std::size_t j = 0; j < 3; ++j) {
    row.eigenfunction[j] /= runs;
    row.eigenvalue[j] /= runs;
    row.mean_eigenvalues[j] /= runs;
  }
  return row;
}

}  // namespace ofpca::sim
