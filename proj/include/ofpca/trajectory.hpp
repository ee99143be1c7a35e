#pragma once

#include <cstddef>
#include <vector>

#include "ofpca/spaces.hpp"

namespace ofpca {

/// One object-valued curve observed on a time grid in [0,1].
class ObjectTrajectory {
 public:
  ObjectTrajectory() = default;
  /// Throws InvalidObject on a bad grid or length mismatch, SpaceMismatch on mixed spaces.
  ObjectTrajectory(SpaceKind space, std::vector<double> time_grid, std::vector<ObjectPoint> points);

  const SpaceKind& space() const noexcept { return space_; }
  const std::vector<double>& time_grid() const noexcept { return time_grid_; }
  const std::vector<ObjectPoint>& points() const noexcept { return points_; }
  const ObjectPoint& operator[](std::size_t k) const { return points_[k]; }
  std::size_t size() const noexcept { return points_.size(); }

  bool operator==(const ObjectTrajectory&) const = default;

 private:
  SpaceKind space_{};
  std::vector<double> time_grid_;
  std::vector<ObjectPoint> points_;
};

/// n trajectories on a shared grid and space. The kernel estimators need
/// n >= 2 and check it themselves; the Frechet mean accepts n = 1.
class ObjectSample {
 public:
  ObjectSample() = default;
  /// Throws EmptyInput for no trajectories, SpaceMismatch / InvalidObject for
  /// inconsistent spaces or grids.
  explicit ObjectSample(std::vector<ObjectTrajectory> trajectories);

  std::size_t n() const noexcept { return trajectories_.size(); }
  std::size_t grid_size() const noexcept { return time_grid().size(); }
  const SpaceKind& space() const { return trajectories_.front().space(); }
  const std::vector<double>& time_grid() const { return trajectories_.front().time_grid(); }
  const std::vector<ObjectTrajectory>& trajectories() const noexcept { return trajectories_; }
  const ObjectTrajectory& operator[](std::size_t i) const { return trajectories_[i]; }

  /// Points of all trajectories at grid index k.
  std::vector<ObjectPoint> slice(std::size_t k) const;

  bool operator==(const ObjectSample&) const = default;

 private:
  std::vector<ObjectTrajectory> trajectories_;
};

}  // namespace ofpca
