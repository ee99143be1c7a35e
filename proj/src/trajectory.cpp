#include "ofpca/trajectory.hpp"

#include <string>

#include "ofpca/errors.hpp"
#include "ofpca/quadrature.hpp"

namespace ofpca {

ObjectTrajectory::ObjectTrajectory(SpaceKind space, std::vector<double> time_grid,
                                   std::vector<ObjectPoint> points)
    : space_(space), time_grid_(std::move(time_grid)), points_(std::move(points)) {
  validate_space(space_);
  validate_time_grid(time_grid_);
  if (points_.size() != time_grid_.size())
    throw Error(ErrorCode::InvalidObject, "trajectory has " + std::to_string(points_.size()) +
                                              " points for " + std::to_string(time_grid_.size()) +
                                              " grid times");
  for (const ObjectPoint& p : points_)
    if (p.space() != space_) throw Error(ErrorCode::SpaceMismatch, "trajectory mixes spaces");
}

ObjectSample::ObjectSample(std::vector<ObjectTrajectory> trajectories)
    : trajectories_(std::move(trajectories)) {
  if (trajectories_.empty()) throw Error(ErrorCode::EmptyInput, "sample has no trajectories");
  const ObjectTrajectory& first = trajectories_.front();
  for (std::size_t i = 1; i < trajectories_.size(); ++i) {
    if (trajectories_[i].space() != first.space())
      throw Error(ErrorCode::SpaceMismatch, "trajectory " + std::to_string(i) + " in other space");
    if (trajectories_[i].time_grid() != first.time_grid())
      throw Error(ErrorCode::InvalidObject, "trajectory " + std::to_string(i) + " has another grid");
  }
}

std::vector<ObjectPoint> ObjectSample::slice(std::size_t k) const {
  if (k >= grid_size()) throw Error(ErrorCode::IndexError, "grid index out of range");
  std::vector<ObjectPoint> out;
  out.reserve(n());
  for (const auto& traj : trajectories_) out.push_back(traj[k]);
  return out;
}

}  // namespace ofpca
