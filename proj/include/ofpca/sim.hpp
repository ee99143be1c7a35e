#pragma once

#include <Eigen/Core>

#include <array>
#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

#include "ofpca/kernel.hpp"
#include "ofpca/trajectory.hpp"

namespace ofpca::sim {

// ---------------------------------------------------------------------------
// Random streams
// ---------------------------------------------------------------------------

/// Independent generator for (seed, run, index). Each trajectory gets its own
/// stream, so growing n never reshuffles earlier trajectories.
std::mt19937_64 substream(std::uint64_t seed, std::uint64_t run, std::uint64_t index);

/// Uniform on the open interval (0,1) from the top 53 bits of one draw.
double uniform01(std::mt19937_64& rng);

/// Standard normal quantile, full double precision.
double inverse_normal_cdf(double p);

// ---------------------------------------------------------------------------
// Bases
// ---------------------------------------------------------------------------

/// Polynomial basis of the distribution design:
///   phi1 = (t^2 - 0.5)/0.3416, phi2 = sqrt(3) t,
///   phi3 = (t^3 - 0.3571 t^2 - 0.6 t + 0.1786)/0.0895.
std::array<double, 3> dist_basis(double t);

/// Jacobi polynomial P_n^{(alpha,beta)}(x) by the three-term recurrence.
double jacobi_polynomial(int degree, double alpha, double beta, double x);

/// Network-design basis, j in {1,2,3}:
///   P_{2j}^{(4,3)}(2t-1) t^1.5 (1-t)^2, scaled to unit L2 norm on [0,1].
double jacobi_basis(int j, double t);

// ---------------------------------------------------------------------------
// Distribution-valued trajectories
// ---------------------------------------------------------------------------

struct DistSimConfig {
  std::size_t n = 100;
  std::size_t T = 51;
  int m = 100;  ///< quantile levels u_k = (k - 0.5)/m
  std::uint64_t seed = 1;
  std::uint64_t run = 0;
  bool zero_effects = false;  ///< force U = V = W = Z = 0 (testing)
};

struct DistEffects {
  double U = 0, V = 0, W = 0, Z = 0;
};

/// U ~ N(0,12), V ~ N(0,1), W ~ sqrt(72) Unif(0,1), Z ~ 3 Unif(0,1).
DistEffects draw_dist_effects(std::uint64_t seed, std::uint64_t run, std::uint64_t index);

struct GaussianParams {
  double mean = 0;
  double sd = 0;
};

/// mu(t) = 1 + U phi1 + V phi3 and sigma(t) = 3 + W phi2 + Z phi3, with sigma
/// floored at 1e-6.
GaussianParams dist_params(const DistEffects& e, double t);

/// Midpoint quantile levels (k - 0.5)/m.
std::vector<double> quantile_levels(int m);

/// N(mu_i(t), sigma_i(t)^2) trajectories as quantile vectors on a uniform grid.
ObjectSample simulate_distributions(const DistSimConfig& cfg);

// ---------------------------------------------------------------------------
// Network-valued trajectories
// ---------------------------------------------------------------------------

inline constexpr int kNetNodes = 10;
inline constexpr int kCommunitySize = 5;
inline constexpr double kCrossWeight = 0.1;

struct NetSimConfig {
  std::size_t n = 100;
  std::size_t T = 51;
  std::uint64_t seed = 1;
  std::uint64_t run = 0;
  bool zero_effects = false;
};

struct NetEffects {
  double U = 0, V = 0, W = 0, Z = 0;
};

/// U ~ Unif(0,0.4), V ~ Unif(0,0.1), W ~ Unif(0,0.3), Z ~ Unif(0,0.1).
NetEffects draw_net_effects(std::uint64_t seed, std::uint64_t run, std::uint64_t index);

struct CommunityWeights {
  double within_first = 0;   ///< p1 = 0.5 + U phi1 + V phi3
  double within_second = 0;  ///< p2 = 0.5 + W phi2 + Z phi3
  double between = kCrossWeight;
};

/// Edge weights at time t, clamped to [0,1].
CommunityWeights net_weights(const NetEffects& e, double t);

/// 10-node, two-community adjacency matrix for the given weights.
ObjectPoint community_adjacency(const CommunityWeights& w);

ObjectSample simulate_networks(const NetSimConfig& cfg);

// ---------------------------------------------------------------------------
// Truth and MISE
// ---------------------------------------------------------------------------

enum class Design { Dist, Net };

/// Population surface on an evaluation grid together with its quadrature
/// eigendecomposition (top three, signs aligned with the closed-form bases).
struct TruthSpec {
  Design design = Design::Dist;
  std::vector<double> time_grid;
  std::vector<double> quad_weights;
  Eigen::MatrixXd surface;
  std::vector<double> eigenvalues;  ///< grid eigenvalues of `surface`
  Eigen::MatrixXd eigenfunctions;   ///< T x 3
  std::vector<double> nominal_eigenvalues;
};

/// C(s,t) = 12 phi1 phi1 + 6 phi2 phi2 + 1.75 phi3 phi3 on `grid`.
TruthSpec dist_truth(const std::vector<double>& grid);

/// Brute-force Monte-Carlo population surface of the network design
/// (clamping included): 20 Cov(p1(s),p1(t)) + 20 Cov(p2(s),p2(t)).
Eigen::MatrixXd net_population_surface(const std::vector<double>& grid, std::size_t draws,
                                       std::uint64_t seed);

inline constexpr std::size_t kNetOracleDraws = 1'000'000;
inline constexpr std::uint64_t kNetOracleSeed = 20200531;

TruthSpec net_truth(const std::vector<double>& grid, std::size_t draws = kNetOracleDraws,
                    std::uint64_t seed = kNetOracleSeed);

struct MiseOptions {
  Design design = Design::Dist;
  std::size_t T = 51;
  int m = 100;
  std::size_t runs = 100;
  std::uint64_t seed = 1;
  /// Feed the true surface into the eigen step instead of the estimate.
  bool truth_fed = false;
  CovMethod method = CovMethod::Auto;
};

struct RunErrors {
  double surface = 0;
  std::array<double, 3> eigenfunction{};
  std::array<double, 3> eigenvalue{};
  std::array<double, 3> estimated_eigenvalues{};
};

struct MiseRow {
  std::size_t n = 0;
  std::size_t runs = 0;
  double surface = 0;
  std::array<double, 3> eigenfunction{};
  std::array<double, 3> eigenvalue{};
  std::array<double, 3> mean_eigenvalues{};  ///< average estimated top-3 eigenvalues
};

/// Simulates one run of the design and returns its integrated squared errors.
RunErrors run_errors(std::size_t n, std::uint64_t run, const MiseOptions& opts,
                     const TruthSpec& truth);

/// MISE(C), MISE(phi_j), MISE(lambda_j) averaged over opts.runs runs.
/// Estimated eigenfunctions are sign-aligned with the truth before the ISE.
MiseRow mise_report(std::size_t n, const MiseOptions& opts, const TruthSpec& truth);

/// Truth for the design on a uniform grid of opts.T points.
TruthSpec truth_for(const MiseOptions& opts);

}  // namespace ofpca::sim
