#include "ofpca/spaces.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <string>

#include "ofpca/errors.hpp"

namespace ofpca {

std::size_t SpaceKind::coord_size() const {
  switch (tag) {
    case SpaceTag::Scalar: return 1;
    case SpaceTag::Quantile: return static_cast<std::size_t>(dim);
    case SpaceTag::Adjacency:
    case SpaceTag::SymPsd: return static_cast<std::size_t>(dim) * static_cast<std::size_t>(dim);
  }
  return 0;
}

double SpaceKind::coord_weight() const {
  return tag == SpaceTag::Quantile ? 1.0 / static_cast<double>(dim) : 1.0;
}

void validate_space(SpaceKind space) {
  if (space.dim < 1) throw Error(ErrorCode::InvalidObject, "space dimension must be >= 1");
  if (space.tag == SpaceTag::Scalar && space.dim != 1)
    throw Error(ErrorCode::InvalidObject, "scalar space must have dim 1");
}

std::string_view space_name(SpaceTag tag) {
  switch (tag) {
    case SpaceTag::Scalar: return "scalar";
    case SpaceTag::Quantile: return "quantile";
    case SpaceTag::Adjacency: return "adjacency";
    case SpaceTag::SymPsd: return "sympsd";
  }
  return "unknown";
}

std::optional<SpaceTag> parse_space_name(std::string_view name) {
  if (name == "scalar") return SpaceTag::Scalar;
  if (name == "quantile") return SpaceTag::Quantile;
  if (name == "adjacency") return SpaceTag::Adjacency;
  if (name == "sympsd") return SpaceTag::SymPsd;
  return std::nullopt;
}

namespace {

using RowMajor = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

void check_shape(SpaceKind space, std::span<const double> raw) {
  validate_space(space);
  if (raw.size() != space.coord_size())
    throw Error(ErrorCode::InvalidObject, "expected " + std::to_string(space.coord_size()) +
                                              " coordinates, got " + std::to_string(raw.size()));
  for (double v : raw)
    if (!std::isfinite(v)) throw Error(ErrorCode::InvalidObject, "non-finite coordinate");
}

double max_abs(std::span<const double> v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

std::vector<double> project_adjacency(int r, std::span<const double> raw) {
  std::vector<double> out(raw.size());
  for (int i = 0; i < r; ++i) {
    out[i * r + i] = 0.0;
    for (int j = i + 1; j < r; ++j) {
      const double v = std::clamp(0.5 * (raw[i * r + j] + raw[j * r + i]), 0.0, 1.0);
      out[i * r + j] = v;
      out[j * r + i] = v;
    }
  }
  return out;
}

std::vector<double> symmetrize(int r, std::span<const double> raw) {
  std::vector<double> out(raw.size());
  for (int i = 0; i < r; ++i) {
    out[i * r + i] = raw[i * r + i];
    for (int j = i + 1; j < r; ++j) {
      const double v = 0.5 * (raw[i * r + j] + raw[j * r + i]);
      out[i * r + j] = v;
      out[j * r + i] = v;
    }
  }
  return out;
}

double min_eigenvalue(int r, std::span<const double> sym) {
  Eigen::Map<const RowMajor> m(sym.data(), r, r);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m, Eigen::EigenvaluesOnly);
  return solver.eigenvalues()(0);
}

std::vector<double> project_psd(int r, std::span<const double> raw) {
  std::vector<double> sym = symmetrize(r, raw);
  Eigen::Map<const RowMajor> m(sym.data(), r, r);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m);
  const Eigen::VectorXd& lam = solver.eigenvalues();
  if (lam(0) >= 0.0) return sym;
  const Eigen::VectorXd clipped = lam.cwiseMax(0.0);
  const Eigen::MatrixXd& v = solver.eigenvectors();
  const Eigen::MatrixXd rebuilt = v * clipped.asDiagonal() * v.transpose();
  std::vector<double> out(sym.size());
  for (int i = 0; i < r; ++i) {
    out[i * r + i] = std::max(rebuilt(i, i), 0.0);
    for (int j = i + 1; j < r; ++j) {
      const double value = 0.5 * (rebuilt(i, j) + rebuilt(j, i));
      out[i * r + j] = value;
      out[j * r + i] = value;
    }
  }
  return out;
}

}  // namespace

std::vector<double> isotonic_regression(std::span<const double> values) {
  struct Block {
    double sum;
    double count;
    double mean() const { return sum / count; }
  };
  std::vector<Block> blocks;
  blocks.reserve(values.size());
  for (double v : values) {
    blocks.push_back({v, 1.0});
    // Pool strict violators only: equal-mean neighbours stay separate so
    // monotone input comes back bit-for-bit.
    while (blocks.size() > 1 && blocks[blocks.size() - 2].mean() > blocks.back().mean()) {
      const Block last = blocks.back();
      blocks.pop_back();
      blocks.back().sum += last.sum;
      blocks.back().count += last.count;
    }
  }
  std::vector<double> out;
  out.reserve(values.size());
  for (const Block& b : blocks) {
    const double m = b.mean();
    out.insert(out.end(), static_cast<std::size_t>(b.count), m);
  }
  return out;
}

ObjectPoint project(SpaceKind space, std::span<const double> raw) {
  check_shape(space, raw);
  switch (space.tag) {
    case SpaceTag::Scalar:
      return ObjectPoint(ObjectPoint::Trusted{}, space, {raw[0]});
    case SpaceTag::Quantile:
      return ObjectPoint(ObjectPoint::Trusted{}, space, isotonic_regression(raw));
    case SpaceTag::Adjacency:
      return ObjectPoint(ObjectPoint::Trusted{}, space, project_adjacency(space.dim, raw));
    case SpaceTag::SymPsd:
      return ObjectPoint(ObjectPoint::Trusted{}, space, project_psd(space.dim, raw));
  }
  throw Error(ErrorCode::InvalidObject, "unknown space");
}

ObjectPoint::ObjectPoint(SpaceKind space, std::vector<double> data) {
  check_shape(space, data);
  const double tol = kAdmissionTolerance * std::max(1.0, max_abs(data));
  const int r = space.dim;
  bool exact = true;
  switch (space.tag) {
    case SpaceTag::Scalar:
      break;
    case SpaceTag::Quantile:
      for (std::size_t k = 1; k < data.size(); ++k) {
        if (data[k] < data[k - 1] - tol)
          throw Error(ErrorCode::InvalidObject,
                      "quantile vector decreases at index " + std::to_string(k));
        if (data[k] < data[k - 1]) exact = false;
      }
      break;
    case SpaceTag::Adjacency:
      for (int i = 0; i < r; ++i) {
        const double d = data[i * r + i];
        if (std::abs(d) > tol) throw Error(ErrorCode::InvalidObject, "adjacency diagonal not zero");
        if (d != 0.0) exact = false;
        for (int j = 0; j < r; ++j) {
          const double a = data[i * r + j];
          if (std::abs(a - data[j * r + i]) > tol)
            throw Error(ErrorCode::InvalidObject, "adjacency matrix not symmetric");
          if (a < -tol || a > 1.0 + tol)
            throw Error(ErrorCode::InvalidObject, "adjacency entry outside [0,1]");
          if (a != data[j * r + i] || a < 0.0 || a > 1.0) exact = false;
        }
      }
      break;
    case SpaceTag::SymPsd: {
      for (int i = 0; i < r; ++i)
        for (int j = i + 1; j < r; ++j) {
          if (std::abs(data[i * r + j] - data[j * r + i]) > tol)
            throw Error(ErrorCode::InvalidObject, "matrix not symmetric");
          if (data[i * r + j] != data[j * r + i]) exact = false;
        }
      const double lmin = min_eigenvalue(r, symmetrize(r, data));
      if (lmin < -kPsdTolerance)
        throw Error(ErrorCode::InvalidObject,
                    "matrix not positive semidefinite (min eigenvalue " + std::to_string(lmin) + ")");
      break;
    }
  }
  if (!exact) data = project(space, data).data_;
  space_ = space;
  data_ = std::move(data);
}

ObjectPoint ObjectPoint::scalar(double value) { return ObjectPoint(SpaceKind::scalar(), {value}); }

double squared_distance(const ObjectPoint& a, const ObjectPoint& b) {
  if (a.space() != b.space()) throw Error(ErrorCode::SpaceMismatch, "distance across spaces");
  const auto x = a.data();
  const auto y = b.data();
  double acc = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    const double diff = x[k] - y[k];
    acc += diff * diff;
  }
  return a.space().coord_weight() * acc;
}

double distance(const ObjectPoint& a, const ObjectPoint& b) {
  if (a.space().tag == SpaceTag::Scalar && b.space().tag == SpaceTag::Scalar)
    return std::abs(a[0] - b[0]);
  return std::sqrt(squared_distance(a, b));
}

ObjectPoint weighted_barycenter(std::span<const ObjectPoint> points,
                                std::span<const double> weights) {
  if (points.empty()) throw Error(ErrorCode::EmptyInput, "barycenter of no points");
  if (weights.size() != points.size())
    throw Error(ErrorCode::BadWeights, "weights and points differ in length");
  double total = 0.0;
  for (double w : weights) {
    if (!std::isfinite(w)) throw Error(ErrorCode::BadWeights, "non-finite weight");
    total += w;
  }
  if (std::abs(total - 1.0) > kWeightSumTolerance)
    throw Error(ErrorCode::BadWeights, "weights sum to " + std::to_string(total));

  const SpaceKind space = points.front().space();
  std::vector<double> avg(space.coord_size(), 0.0);
  for (std::size_t j = 0; j < points.size(); ++j) {
    if (points[j].space() != space) throw Error(ErrorCode::SpaceMismatch, "mixed spaces");
    const auto x = points[j].data();
    const double w = weights[j];
    for (std::size_t k = 0; k < avg.size(); ++k) avg[k] += w * x[k];
  }
  return project(space, avg);
}

ObjectPoint weighted_barycenter(const WeightedBarycenterProblem& problem) {
  return weighted_barycenter(problem.points, problem.weights);
}

double barycenter_objective(const ObjectPoint& candidate, std::span<const ObjectPoint> points,
                            std::span<const double> weights) {
  double acc = 0.0;
  for (std::size_t j = 0; j < points.size(); ++j)
    acc += weights[j] * squared_distance(candidate, points[j]);
  return acc;
}

}  // namespace ofpca
