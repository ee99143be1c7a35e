#include <gtest/gtest.h>

#include <boost/math/special_functions/jacobi.hpp>

#include <algorithm>
#include <cmath>

#include "ofpca/kernel.hpp"
#include "ofpca/quadrature.hpp"
#include "ofpca/sim.hpp"

using namespace ofpca;

namespace {

struct MeanSe {
  double mean, se;
};

// Sample covariance of paired draws with its standard error.
MeanSe covariance(const std::vector<double>& a, const std::vector<double>& b) {
  const double n = static_cast<double>(a.size());
  double ma = 0, mb = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    ma += a[i];
    mb += b[i];
  }
  ma /= n;
  mb /= n;
  double m = 0, m2 = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double p = (a[i] - ma) * (b[i] - mb);
    m += p;
    m2 += p * p;
  }
  m /= n;
  return {m, std::sqrt((m2 / n - m * m) / n)};
}

}  // namespace

TEST(Sim, DistBasis) {
  EXPECT_NEAR(sim::dist_basis(1.0)[1], std::sqrt(3.0), 1e-15);
  EXPECT_NEAR(sim::dist_basis(std::sqrt(0.5))[0], 0.0, 1e-15);
  const auto grid = uniform_grid(1001);
  const auto w = trapezoid_weights(grid);
  double ip = 0;
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const auto b = sim::dist_basis(grid[k]);
    ip += w[k] * b[0] * b[1];
  }
  EXPECT_NEAR(ip, 0.0, 1e-4);
}

TEST(Sim, JacobiPolynomialMatchesBoost) {
  for (int n = 0; n <= 8; ++n)
    for (double x = -1.0; x <= 1.0; x += 0.125)
      EXPECT_NEAR(sim::jacobi_polynomial(n, 4.0, 3.0, x), boost::math::jacobi(n, 4.0, 3.0, x),
                  1e-12 * std::max(1.0, std::abs(boost::math::jacobi(n, 4.0, 3.0, x))));
}

TEST(Sim, JacobiBasis) {
  const auto grid = uniform_grid(2001);
  const auto w = trapezoid_weights(grid);
  for (int j = 1; j <= 3; ++j) {
    EXPECT_EQ(sim::jacobi_basis(j, 0.0), 0.0);
    EXPECT_EQ(sim::jacobi_basis(j, 1.0), 0.0);
    for (int l = j; l <= 3; ++l) {
      double ip = 0;
      for (std::size_t k = 0; k < grid.size(); ++k)
        ip += w[k] * sim::jacobi_basis(j, grid[k]) * sim::jacobi_basis(l, grid[k]);
      if (j == l)
        EXPECT_NEAR(ip, 1.0, 1e-6);
      else
        EXPECT_NEAR(ip, 0.0, 1e-4);
    }
  }
}

TEST(Sim, InverseNormalCdf) {
  EXPECT_NEAR(sim::inverse_normal_cdf(0.975), 1.959963984540054, 1e-14);
  EXPECT_EQ(sim::inverse_normal_cdf(0.5), 0.0);
  EXPECT_NEAR(sim::inverse_normal_cdf(1e-10), -6.361340902404056, 1e-12);
  const auto u = sim::quantile_levels(4);
  EXPECT_EQ(u, (std::vector<double>{0.125, 0.375, 0.625, 0.875}));
}

TEST(Sim, UniformStreams) {
  auto rng = sim::substream(1, 0, 0);
  for (int k = 0; k < 10000; ++k) {
    const double v = sim::uniform01(rng);
    EXPECT_GT(v, 0.0);
    EXPECT_LT(v, 1.0);
  }
  auto a = sim::substream(1, 0, 0), b = sim::substream(1, 0, 1), c = sim::substream(1, 1, 0);
  const auto x = a();
  EXPECT_NE(x, b());
  EXPECT_NE(x, c());
}

TEST(Sim, ZeroEffectsGiveConstantTrajectories) {
  sim::DistSimConfig dc;
  dc.n = 4;
  dc.T = 6;
  dc.zero_effects = true;
  const ObjectSample d = sim::simulate_distributions(dc);
  EXPECT_EQ(estimate_cov_surface(d).values.cwiseAbs().maxCoeff(), 0.0);
  const auto z = sim::quantile_levels(dc.m);
  for (int k = 0; k < dc.m; ++k) EXPECT_NEAR(d[2][3][k], 1.0 + 3.0 * sim::inverse_normal_cdf(z[k]), 1e-14);

  sim::NetSimConfig nc;
  nc.n = 4;
  nc.T = 6;
  nc.zero_effects = true;
  EXPECT_EQ(estimate_cov_surface(sim::simulate_networks(nc)).values.cwiseAbs().maxCoeff(), 0.0);
}

TEST(Sim, Reproducible) {
  sim::DistSimConfig dc;
  dc.n = 5;
  dc.T = 7;
  dc.seed = 99;
  EXPECT_EQ(sim::simulate_distributions(dc), sim::simulate_distributions(dc));
  sim::DistSimConfig small = dc;
  small.n = 3;
  const ObjectSample big = sim::simulate_distributions(dc), few = sim::simulate_distributions(small);
  for (std::size_t i = 0; i < 3; ++i) EXPECT_EQ(big[i], few[i]);
  dc.seed = 100;
  EXPECT_NE(sim::simulate_distributions(dc)[0], big[0]);

  sim::NetSimConfig nc;
  nc.n = 5;
  nc.T = 7;
  EXPECT_EQ(sim::simulate_networks(nc), sim::simulate_networks(nc));
}

TEST(Sim, DistPopulationSurfaceByMonteCarlo) {
  const std::size_t N = 100000;
  const double s = 0.3, t = 0.7;
  std::vector<double> ms(N), mt(N), ss(N), st(N);
  for (std::size_t i = 0; i < N; ++i) {
    const auto e = sim::draw_dist_effects(2024, 0, i);
    const auto ps = sim::dist_params(e, s), pt = sim::dist_params(e, t);
    ms[i] = ps.mean;
    mt[i] = pt.mean;
    ss[i] = ps.sd;
    st[i] = pt.sd;
  }
  const MeanSe cm = covariance(ms, mt), cs = covariance(ss, st);
  const auto a = sim::dist_basis(s), b = sim::dist_basis(t);
  const double want = 12 * a[0] * b[0] + 6 * a[1] * b[1] + 1.75 * a[2] * b[2];
  EXPECT_NEAR(cm.mean + cs.mean, want, 3 * std::hypot(cm.se, cs.se));
}

TEST(Sim, GaussianWassersteinClosedForm) {
  sim::DistSimConfig dc;
  dc.n = 6;
  dc.T = 5;
  dc.m = 400;
  const ObjectSample d = sim::simulate_distributions(dc);
  const auto grid = uniform_grid(5);
  for (std::size_t i = 1; i < 6; ++i) {
    const auto p0 = sim::dist_params(sim::draw_dist_effects(dc.seed, dc.run, 0), grid[2]);
    const auto pi = sim::dist_params(sim::draw_dist_effects(dc.seed, dc.run, i), grid[2]);
    const double exact = std::hypot(p0.mean - pi.mean, p0.sd - pi.sd);
    // Midpoint levels under-weight the tails by O(log(m)/m) in the sd term.
    EXPECT_NEAR(distance(d[0][2], d[i][2]), exact, 0.01 * std::abs(p0.sd - pi.sd) + 1e-12);
  }
}

TEST(Sim, NetworkStructure) {
  sim::NetEffects e{0.2, 0.05, 0.1, 0.05};
  const auto w = sim::net_weights(e, 0.4);
  const ObjectPoint a = sim::community_adjacency(w);
  const int r = sim::kNetNodes;
  EXPECT_EQ(a[0 * r + 1], w.within_first);
  EXPECT_EQ(a[5 * r + 6], w.within_second);
  EXPECT_EQ(a[0 * r + 5], 0.1);
  for (int i = 0; i < r; ++i) {
    EXPECT_EQ(a[i * r + i], 0.0);
    for (int j = 0; j < r; ++j) EXPECT_EQ(a[i * r + j], a[j * r + i]);
  }
  const auto b = sim::jacobi_basis(1, 0.4), c = sim::jacobi_basis(3, 0.4);
  EXPECT_NEAR(w.within_first, std::clamp(0.5 + 0.2 * b + 0.05 * c, 0.0, 1.0), 1e-15);

  // Large effects are clamped into [0,1].
  const auto big = sim::net_weights({0.4, 0.1, 0.3, 0.1}, 0.6);
  EXPECT_LE(big.within_first, 1.0);
  EXPECT_GE(big.within_first, 0.0);

  sim::NetSimConfig nc;
  nc.n = 3;
  nc.T = 5;
  const ObjectSample sample = sim::simulate_networks(nc);
  for (const auto& traj : sample.trajectories())
    for (const auto& p : traj.points()) {
      EXPECT_EQ(p.space(), SpaceKind::adjacency(10));
      for (int i = 0; i < r; ++i) EXPECT_EQ(p[i * r + i], 0.0);
    }
}

TEST(Sim, NetworkPopulationDiagonalByMonteCarlo) {
  const std::size_t N = 100000;
  std::vector<double> p1(N), p2(N);
  for (std::size_t i = 0; i < N; ++i) {
    const auto w = sim::net_weights(sim::draw_net_effects(777, 0, i), 0.5);
    p1[i] = w.within_first;
    p2[i] = w.within_second;
  }
  const MeanSe v1 = covariance(p1, p1), v2 = covariance(p2, p2);
  const double mc = 20 * (v1.mean + v2.mean);
  const double se = 20 * std::hypot(v1.se, v2.se);
  const Eigen::MatrixXd oracle = sim::net_population_surface({0.0, 0.5, 1.0}, sim::kNetOracleDraws, sim::kNetOracleSeed);
  EXPECT_NEAR(mc, oracle(1, 1), 3 * se * std::sqrt(1.1));
}

TEST(Sim, TruthSpecs) {
  const auto grid = uniform_grid(51);
  const auto w = trapezoid_weights(grid);
  const sim::TruthSpec dist = sim::dist_truth(grid);
  const double nominal[3] = {12, 6, 1.75};
  for (int j = 0; j < 3; ++j) EXPECT_NEAR(dist.eigenvalues[j], nominal[j], 0.01 * nominal[j]);
  EXPECT_EQ(dist.nominal_eigenvalues, (std::vector<double>{12, 6, 1.75}));
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) {
      double ip = 0;
      for (int k = 0; k < 51; ++k) ip += w[k] * dist.eigenfunctions(k, a) * dist.eigenfunctions(k, b);
      EXPECT_NEAR(ip, a == b ? 1.0 : 0.0, 1e-6);
    }
  // Aligned with the closed-form basis.
  for (int j = 0; j < 3; ++j) {
    double ip = 0;
    for (int k = 0; k < 51; ++k) ip += w[k] * dist.eigenfunctions(k, j) * sim::dist_basis(grid[k])[j];
    EXPECT_GT(ip, 0.99);
  }

  const sim::TruthSpec net = sim::net_truth(grid, 200000, 5);
  const double oracle[3] = {0.2575, 0.1451, 0.0319};
  for (int j = 0; j < 3; ++j) EXPECT_NEAR(net.eigenvalues[j], oracle[j], 0.03 * oracle[j]);
}

TEST(Sim, TruthFedMiseIsZero) {
  for (sim::Design design : {sim::Design::Dist, sim::Design::Net}) {
    sim::MiseOptions opts;
    opts.design = design;
    opts.T = 21;
    opts.runs = 2;
    opts.truth_fed = true;
    const sim::TruthSpec truth = design == sim::Design::Dist ? sim::dist_truth(uniform_grid(21))
                                                             : sim::net_truth(uniform_grid(21), 20000, 3);
    const sim::MiseRow row = sim::mise_report(10, opts, truth);
    EXPECT_LE(row.surface, 1e-8);
    for (int j = 0; j < 3; ++j) {
      EXPECT_LE(row.eigenfunction[j], 1e-8);
      EXPECT_LE(row.eigenvalue[j], 1e-8);
    }
    EXPECT_EQ(row.runs, 2u);
    EXPECT_EQ(row.n, 10u);
  }
}

TEST(Sim, MiseIsDeterministicAndShrinks) {
  sim::MiseOptions opts;
  opts.T = 21;
  opts.m = 50;
  opts.runs = 20;
  const sim::TruthSpec truth = sim::truth_for(opts);
  const sim::MiseRow a = sim::mise_report(20, opts, truth), b = sim::mise_report(20, opts, truth);
  EXPECT_EQ(a.surface, b.surface);
  EXPECT_EQ(a.eigenvalue, b.eigenvalue);
  const sim::MiseRow big = sim::mise_report(80, opts, truth);
  EXPECT_LT(big.surface, a.surface);
}
