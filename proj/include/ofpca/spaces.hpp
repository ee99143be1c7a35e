#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace ofpca {

enum class SpaceTag { Scalar, Quantile, Adjacency, SymPsd };

/// Which metric space a point lives in. `dim` is the quantile-grid size m,
/// the matrix side r, or 1 for scalars.
struct SpaceKind {
  SpaceTag tag = SpaceTag::Scalar;
  int dim = 1;

  static SpaceKind scalar() { return {SpaceTag::Scalar, 1}; }
  static SpaceKind quantile(int m) { return {SpaceTag::Quantile, m}; }
  static SpaceKind adjacency(int r) { return {SpaceTag::Adjacency, r}; }
  static SpaceKind sym_psd(int r) { return {SpaceTag::SymPsd, r}; }

  /// Length of the coordinate vector: m, r*r or 1.
  std::size_t coord_size() const;

  /// Squared distance is coord_weight() * ||a - b||^2 in coordinates.
  double coord_weight() const;

  bool operator==(const SpaceKind&) const = default;
};

/// Throws InvalidObject for dim < 1, or dim != 1 on Scalar.
void validate_space(SpaceKind space);

std::string_view space_name(SpaceTag tag);
std::optional<SpaceTag> parse_space_name(std::string_view name);

/// Tolerance for admitting symmetric matrices with slightly negative eigenvalues.
inline constexpr double kPsdTolerance = 1e-10;
/// Tolerance for monotonicity, symmetry and box constraints on admission.
inline constexpr double kAdmissionTolerance = 1e-12;
/// Allowed deviation of barycenter weights from summing to one.
inline constexpr double kWeightSumTolerance = 1e-10;

/// An element of one of the supported metric spaces. Always satisfies the
/// space's constraints: monotone quantile vector, symmetric zero-diagonal
/// adjacency matrix with entries in [0,1], symmetric PSD matrix, or a finite
/// scalar. Matrices are stored row-major.
class ObjectPoint {
 public:
  ObjectPoint() = default;

  /// Validates `data`. Monotonicity, symmetry and box violations within
  /// kAdmissionTolerance are repaired by projection; larger ones throw
  /// InvalidObject. SymPsd admits eigenvalues down to -kPsdTolerance as is
  /// (file ingestion re-projects them).
  ObjectPoint(SpaceKind space, std::vector<double> data);

  static ObjectPoint scalar(double value);

  const SpaceKind& space() const noexcept { return space_; }
  std::span<const double> data() const noexcept { return data_; }
  double operator[](std::size_t i) const { return data_[i]; }
  std::size_t size() const noexcept { return data_.size(); }

  bool operator==(const ObjectPoint&) const = default;

 private:
  friend ObjectPoint project(SpaceKind space, std::span<const double> raw);
  struct Trusted {};
  ObjectPoint(Trusted, SpaceKind space, std::vector<double> data)
      : space_(space), data_(std::move(data)) {}

  SpaceKind space_{};
  std::vector<double> data_;
};

/// Squared metric: (1/m) sum of squared quantile differences, squared
/// Frobenius norm for matrices, squared difference for scalars.
double squared_distance(const ObjectPoint& a, const ObjectPoint& b);
double distance(const ObjectPoint& a, const ObjectPoint& b);

/// L2 projection onto non-decreasing vectors (pool adjacent violators),
/// scanning left to right. Only strictly decreasing neighbours are pooled, so
/// the output is deterministic and monotone input is returned unchanged.
std::vector<double> isotonic_regression(std::span<const double> values);

/// Metric projection of raw coordinates onto the space's constraint set.
/// Throws InvalidObject on length mismatch or non-finite input.
ObjectPoint project(SpaceKind space, std::span<const double> raw);

struct WeightedBarycenterProblem {
  std::vector<ObjectPoint> points;
  std::vector<double> weights;
};

/// argmin_w sum_j weights[j] d^2(w, points[j]) over the constraint set.
/// Weights must sum to one and may be negative. Computed as the Euclidean
/// weighted average followed by project(); exact for all supported spaces
/// since the objective is a quadratic with leading coefficient sum(w) = 1.
ObjectPoint weighted_barycenter(std::span<const ObjectPoint> points,
                                std::span<const double> weights);
ObjectPoint weighted_barycenter(const WeightedBarycenterProblem& problem);

/// sum_j weights[j] d^2(candidate, points[j]).
double barycenter_objective(const ObjectPoint& candidate, std::span<const ObjectPoint> points,
                            std::span<const double> weights);

}  // namespace ofpca
