#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "ofpca/errors.hpp"
#include "ofpca/fpca.hpp"
#include "ofpca/quadrature.hpp"
#include "ofpca/sim.hpp"
#include "support.hpp"

using namespace ofpca;

namespace {

std::vector<double> sampled(const std::vector<double>& grid, double (*f)(double)) {
  std::vector<double> v(grid.size());
  for (std::size_t k = 0; k < grid.size(); ++k) v[k] = f(grid[k]);
  return v;
}

std::vector<ObjectPoint> scalar_lattice(double lo, double hi, double step) {
  std::vector<ObjectPoint> out;
  for (long q = 0; lo + q * step <= hi + 1e-12; ++q) out.push_back(ObjectPoint::scalar(lo + q * step));
  return out;
}

double phi1(double t) { return std::sqrt(2.0) * std::sin(M_PI * t); }
double phi2(double t) { return std::sqrt(2.0) * std::cos(M_PI * t); }

// Surface 3 phi1 phi1' + phi2 phi2' on the grid.
EigenSystem two_component_system(const std::vector<double>& grid, std::size_t k = 2) {
  const auto a = sampled(grid, phi1), b = sampled(grid, phi2);
  const auto T = static_cast<Eigen::Index>(grid.size());
  Eigen::MatrixXd c(T, T);
  for (Eigen::Index s = 0; s < T; ++s)
    for (Eigen::Index t = 0; t < T; ++t) c(s, t) = 3 * a[s] * a[t] + b[s] * b[t];
  return eigendecompose(KernelSurface::on_grid(grid, c), k);
}

}  // namespace

TEST(Fpca, MeanExamples) {
  const auto grid = uniform_grid(6);
  const auto x = fixtures::scalar_trajectory(grid, {1, 4, 2, 0, 3, 3});
  EXPECT_EQ(frechet_mean_trajectory(ObjectSample({x, x, x})), x);

  const auto g = sampled(grid, [](double t) { return std::exp(t) - 0.3; });
  std::vector<double> neg(g);
  for (double& v : neg) v = -v;
  const auto mean = frechet_mean_trajectory(
      ObjectSample({fixtures::scalar_trajectory(grid, g), fixtures::scalar_trajectory(grid, neg)}));
  for (std::size_t k = 0; k < 6; ++k) EXPECT_EQ(mean[k][0], 0.0);

  sim::DistSimConfig dc;
  dc.n = 7;
  dc.T = 5;
  dc.m = 30;
  const ObjectSample q = sim::simulate_distributions(dc);
  const ObjectTrajectory qm = frechet_mean_trajectory(q);
  for (std::size_t k = 0; k < 5; ++k)
    for (int u = 0; u < 30; ++u) {
      double avg = 0;
      for (std::size_t i = 0; i < 7; ++i) avg += q[i][k][u];
      EXPECT_NEAR(qm[k][u], avg / 7, 1e-12);
    }
}

TEST(Fpca, MeanBeatsFeasiblePerturbations) {
  sim::NetSimConfig nc;
  nc.n = 9;
  nc.T = 4;
  const ObjectSample s = sim::simulate_networks(nc);
  const ObjectTrajectory mean = frechet_mean_trajectory(s);
  std::mt19937_64 rng(31);
  std::normal_distribution<double> z(0.0, 0.05);
  const std::vector<double> w(9, 1.0 / 9);
  for (std::size_t k = 0; k < 4; ++k) {
    const auto slice = s.slice(k);
    const double best = barycenter_objective(mean[k], slice, w);
    for (int rep = 0; rep < 100; ++rep) {
      std::vector<double> raw(mean[k].data().begin(), mean[k].data().end());
      for (double& v : raw) v += z(rng);
      EXPECT_LE(best, barycenter_objective(project(mean[k].space(), raw), slice, w) + 1e-12);
    }
  }
}

TEST(Fpca, MeanContinuityUnderRefinement) {
  double previous = INFINITY;
  for (std::size_t T : {11u, 21u, 41u, 81u}) {
    sim::DistSimConfig dc;
    dc.n = 30;
    dc.T = T;
    const ObjectTrajectory mean = frechet_mean_trajectory(sim::simulate_distributions(dc));
    double jump = 0;
    for (std::size_t k = 1; k < T; ++k) jump = std::max(jump, distance(mean[k], mean[k - 1]));
    EXPECT_LT(jump, 0.6 * previous);
    previous = jump;
  }
}

TEST(Fpca, NormalizeEigenfunction) {
  const auto grid = uniform_grid(11);
  const auto w = trapezoid_weights(grid);
  EigenSystem es;
  es.time_grid = grid;
  es.quad_weights = w;
  es.num_retained = 3;
  es.eigenfunctions.resize(11, 3);
  for (int k = 0; k < 11; ++k) {
    es.eigenfunctions(k, 0) = 1.0;
    es.eigenfunctions(k, 1) = 4.0 * grid[k];  // integrates to 2
    es.eigenfunctions(k, 2) = grid[k] - 0.5;  // integrates to 0
  }
  const auto one = normalize_eigenfunction(es, 0);
  for (double v : one) EXPECT_EQ(v, 1.0);
  const auto half = normalize_eigenfunction(es, 1);
  for (int k = 0; k < 11; ++k) EXPECT_NEAR(half[k], 2.0 * grid[k], 1e-15);
  EXPECT_NEAR(integrate(w, half), 1.0, 1e-10);
  try {
    normalize_eigenfunction(es, 2);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NonIntegrableEigenfunction);
  }
}

TEST(Fpca, NormalizeDesignPhi2) {
  // sqrt(3) t integrates to sqrt(3)/2, so phi* = 2t.
  const auto grid = uniform_grid(51);
  EigenSystem es;
  es.time_grid = grid;
  es.quad_weights = trapezoid_weights(grid);
  es.num_retained = 1;
  es.eigenfunctions.resize(51, 1);
  for (int k = 0; k < 51; ++k) es.eigenfunctions(k, 0) = sim::dist_basis(grid[k])[1];
  const auto star = normalize_eigenfunction(es, 0);
  for (int k = 0; k < 51; ++k) EXPECT_NEAR(star[k], 2.0 * grid[k], 1e-12);
  EXPECT_NEAR(integrate(es.quad_weights, star), 1.0, 1e-10);
}

TEST(Fpca, ObjectFpcExamples) {
  const auto grid = uniform_grid(9);
  const auto w = trapezoid_weights(grid);
  const auto star = sampled(grid, [](double t) { return 6.0 * t * t - 1.0; });  // integrates to 1
  std::vector<double> star_q(star);
  const double total = integrate(w, star_q);
  for (double& v : star_q) v /= total;

  const ObjectPoint a(SpaceKind::adjacency(3), {0, 0.2, 0.7, 0.2, 0, 0.1, 0.7, 0.1, 0});
  const ObjectTrajectory constant(a.space(), grid, std::vector<ObjectPoint>(9, a));
  const ObjectPoint got = object_fpc(constant, star_q, w);
  for (std::size_t k = 0; k < 9; ++k) EXPECT_NEAR(got[k], a[k], 1e-14);

  const auto values = sampled(grid, [](double t) { return std::sin(4 * t); });
  const auto x = fixtures::scalar_trajectory(grid, values);
  const std::vector<double> ones(9, 1.0);
  EXPECT_NEAR(object_fpc(x, ones, w)[0], integrate(w, values), 1e-15);
}

TEST(Fpca, GenericRiemannIntegral) {
  const auto grid = uniform_grid(5);
  const auto w = trapezoid_weights(grid);
  const std::vector<double> ones(5, 1.0);
  const auto x = fixtures::scalar_trajectory(grid, {0, 1, 2, 3, 4});
  // Closed-form minimizer is the trapezoid average, 2.
  const std::vector<ObjectPoint> cands{ObjectPoint::scalar(-1), ObjectPoint::scalar(2), ObjectPoint::scalar(5)};
  EXPECT_EQ(generic_riemann_integral(x, ones, cands)[0], 2.0);

  const auto c = fixtures::scalar_trajectory(grid, {7, 7, 7, 7, 7});
  const std::vector<ObjectPoint> ab{ObjectPoint::scalar(3), ObjectPoint::scalar(7)};
  EXPECT_EQ(generic_riemann_integral(c, ones, ab)[0], 7.0);

  // Ties go to the first candidate.
  const std::vector<ObjectPoint> tie{ObjectPoint::scalar(1), ObjectPoint::scalar(3)};
  EXPECT_EQ(generic_riemann_integral(x, ones, tie)[0], 1.0);

  // Default candidates are the observed objects.
  EXPECT_EQ(generic_riemann_integral(x, ones)[0], 2.0);

  try {
    generic_riemann_integral(x, ones, std::vector<ObjectPoint>{});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::EmptyInput);
  }
}

TEST(Fpca, ObjectFpcMatchesLatticeOnQuantiles) {
  // Q(t)(u) = mu(t) + sigma(t) z_u on m = 2 levels; signed phi*.
  const std::size_t T = 12;
  const auto grid = uniform_grid(T);
  const auto w = trapezoid_weights(grid);
  const double z[2] = {-0.6744897501960817, 0.6744897501960817};
  std::vector<ObjectPoint> pts;
  for (double t : grid) {
    const double mu = std::sin(3 * t), sigma = 1.2 - t;
    pts.emplace_back(SpaceKind::quantile(2), std::vector<double>{mu + sigma * z[0], mu + sigma * z[1]});
  }
  const ObjectTrajectory traj(SpaceKind::quantile(2), grid, pts);
  // Strongly negative weight on early times pushes the average out of the cone.
  auto star = sampled(grid, [](double t) { return 12.0 * t - 5.0; });
  const double total = integrate(w, star);
  for (double& v : star) v /= total;

  const ObjectPoint fpc = object_fpc(traj, star, w);
  EXPECT_EQ(fpc[0], fpc[1]);  // the signed average had negative spread and was pooled
  const double step = 0.01;
  std::vector<ObjectPoint> lattice;
  for (double a = -2; a <= 2; a += step)
    for (double b = a; b <= 2; b += step) lattice.emplace_back(SpaceKind::quantile(2), std::vector<double>{a, b});
  const ObjectPoint brute = generic_riemann_integral(traj, star, lattice);
  EXPECT_LE(distance(fpc, brute), step);
  EXPECT_LE(riemann_objective(traj, star, fpc), riemann_objective(traj, star, brute) + 1e-12);
}

TEST(Fpca, RiemannMinimizerConvergesUnderRefinement) {
  // phi*(t) = 2t, X(t) = sin(3t); the continuum integral is 2 int t sin(3t).
  const double exact = 2.0 * (std::sin(3.0) / 9.0 - std::cos(3.0) / 3.0);
  double previous = INFINITY;
  for (std::size_t T : {5u, 9u, 17u, 33u}) {
    const auto grid = uniform_grid(T);
    const auto x = fixtures::scalar_trajectory(grid, sampled(grid, [](double t) { return std::sin(3 * t); }));
    const auto star = sampled(grid, [](double t) { return 2.0 * t; });
    const auto lattice = scalar_lattice(exact - 0.05, exact + 0.05, 1e-6);
    const double err = std::abs(generic_riemann_integral(x, star, lattice)[0] - exact);
    EXPECT_LE(err, 0.5 * previous + 1e-6);
    previous = err;
  }
}

TEST(Fpca, ScoreFixtures) {
  const auto grid = uniform_grid(51);
  const EigenSystem es = two_component_system(grid);
  const auto mu = sampled(grid, [](double t) { return t * t; });
  const auto p1 = sampled(grid, phi1);
  std::vector<double> shifted(51);
  for (int k = 0; k < 51; ++k) shifted[k] = mu[k] + p1[k];
  const auto mean = fixtures::scalar_trajectory(grid, mu);
  const ObjectSample s({fixtures::scalar_trajectory(grid, shifted), mean});
  const Eigen::MatrixXd b = frechet_scores(s, mean, es);
  EXPECT_NEAR(b(0, 0), 1.0, 1e-4);
  EXPECT_NEAR(b(0, 1), 0.0, 1e-4);
  EXPECT_EQ(b(1, 0), 0.0);
  EXPECT_EQ(b(1, 1), 0.0);

  // Equidistant trajectories above and below the mean share a score row.
  std::vector<double> below(51);
  for (int k = 0; k < 51; ++k) below[k] = mu[k] - p1[k];
  const ObjectSample pm({fixtures::scalar_trajectory(grid, shifted), fixtures::scalar_trajectory(grid, below)});
  const Eigen::MatrixXd bb = frechet_scores(pm, mean, es);
  EXPECT_LE((bb.row(0) - bb.row(1)).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(Fpca, ScoresRelabelAndSignFlip) {
  sim::DistSimConfig dc;
  dc.n = 12;
  dc.T = 21;
  const ObjectSample s = sim::simulate_distributions(dc);
  const ObjectTrajectory mean = frechet_mean_trajectory(s);
  const EigenSystem es = eigendecompose(estimate_cov_surface(s), 3);
  const Eigen::MatrixXd b = frechet_scores(s, mean, es);

  std::vector<ObjectTrajectory> rev(s.trajectories().rbegin(), s.trajectories().rend());
  const Eigen::MatrixXd br = frechet_scores(ObjectSample(rev), mean, es);
  for (Eigen::Index i = 0; i < 12; ++i) EXPECT_EQ(br.row(i), b.row(11 - i));

  EigenSystem flipped = es;
  flipped.eigenfunctions.col(1) *= -1.0;
  const Eigen::MatrixXd bf = frechet_scores(s, mean, flipped);
  EXPECT_EQ(bf.col(1), -b.col(1));
  EXPECT_EQ(bf.col(0), b.col(0));
}

TEST(Fpca, FitPipeline) {
  const auto grid = uniform_grid(51);
  const auto p1 = sampled(grid, phi1);
  const auto mu = sampled(grid, [](double t) { return 1.0 - t; });
  std::vector<double> up(51), down(51);
  for (int k = 0; k < 51; ++k) {
    up[k] = mu[k] + p1[k];
    down[k] = mu[k] - p1[k];
  }
  FitOptions opts;
  opts.components = 2;
  opts.object_fpcs = true;
  const FpcaFit fit =
      fit_fpca(ObjectSample({fixtures::scalar_trajectory(grid, up), fixtures::scalar_trajectory(grid, down)}), opts);
  EXPECT_NEAR(fit.scores(0, 0), 1.0, 1e-4);
  EXPECT_NEAR(fit.scores(1, 0), 1.0, 1e-4);
  for (std::size_t k = 0; k < 51; ++k) EXPECT_NEAR(fit.mean[k][0], mu[k], 1e-15);
  ASSERT_EQ(fit.object_fpcs.size(), 2u);
  EXPECT_TRUE(fit.object_fpcs[0].available);
  EXPECT_EQ(fit.object_fpcs[0].per_trajectory.size(), 2u);
  ASSERT_TRUE(fit.object_fpcs[0].column_mean);
  EXPECT_EQ(fit.distance_curves.rows(), 2);
  EXPECT_EQ(fit.distance_curves.cols(), 51);
}

TEST(Fpca, IdenticalSampleGivesZeroScoresAndPartialFpcs) {
  const auto grid = uniform_grid(9);
  const auto x = fixtures::scalar_trajectory(grid, {1, 2, 3, 4, 5, 4, 3, 2, 1});
  FitOptions opts;
  opts.components = 3;
  opts.object_fpcs = true;
  const FpcaFit fit = fit_fpca(ObjectSample({x, x, x}), opts);
  EXPECT_EQ(fit.surface.values.cwiseAbs().maxCoeff(), 0.0);
  EXPECT_EQ(fit.scores.cwiseAbs().maxCoeff(), 0.0);
}

TEST(Fpca, NonIntegrableComponentIsSkipped) {
  // Second eigenfunction cos(pi t) integrates to zero.
  const auto grid = uniform_grid(41);
  const auto a = sampled(grid, phi1), b = sampled(grid, phi2);
  std::vector<ObjectTrajectory> trajs;
  for (double c1 : {-1.0, 0.0, 1.0})
    for (double c2 : {-0.5, 0.5}) {
      std::vector<double> v(41);
      for (int k = 0; k < 41; ++k) v[k] = 2 * c1 * a[k] + c2 * b[k];
      trajs.push_back(fixtures::scalar_trajectory(grid, v));
    }
  FitOptions opts;
  opts.components = 2;
  opts.object_fpcs = true;
  const FpcaFit fit = fit_fpca(ObjectSample(trajs), opts);
  EXPECT_EQ(fit.status, "partial");
  ASSERT_EQ(fit.object_fpcs.size(), 2u);
  EXPECT_TRUE(fit.object_fpcs[0].available);
  EXPECT_FALSE(fit.object_fpcs[1].available);
  EXPECT_FALSE(fit.object_fpcs[1].note.empty());
  EXPECT_EQ(fit.scores.cols(), 2);
  EXPECT_TRUE(fit.scores.allFinite());
}
