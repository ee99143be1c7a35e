#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "ofpca/fpca.hpp"
#include "ofpca/sim.hpp"
#include "ofpca/trajectory.hpp"

namespace ofpca::io {

struct LoadOptions {
  /// Repair constraint violations by projection instead of rejecting them.
  bool project_on_load = false;
  /// Space to assume when the file has none; must agree with the file otherwise.
  std::optional<SpaceKind> space;
};

/// Trajectory file (JSON):
///   { "space": "scalar"|"quantile"|"adjacency"|"sympsd", "dim": int,
///     "time_grid": [t...], "trajectories": [[object per time]...] }
/// Objects are a number (scalar), a flat array, or an array of matrix rows.
/// Schema problems throw SchemaError naming the offending field.
ObjectSample parse_trajectory_file(const std::string& text, const LoadOptions& options = {});
ObjectSample load_trajectory_file(const std::filesystem::path& path, const LoadOptions& options = {});
std::string format_trajectory_file(const ObjectSample& sample);
void save_trajectory_file(const std::filesystem::path& path, const ObjectSample& sample);

/// Fit artifact: surface, spectrum, eigenfunctions, mean trajectory, distance
/// curves, scores and object FPCs, as JSON.
std::string format_fit_artifact(const FpcaFit& fit);
FpcaFit parse_fit_artifact(const std::string& text);
void save_fit_artifact(const std::filesystem::path& path, const FpcaFit& fit);
FpcaFit load_fit_artifact(const std::filesystem::path& path);

/// Plot CSVs: long-format surface (s,t,value), eigenfunctions (t,phi_1..),
/// scores (i,beta_1..). Numbers use 17 significant digits.
void write_surface_csv(std::ostream& out, const KernelSurface& surface);
void write_eigenfunctions_csv(std::ostream& out, const EigenSystem& es);
void write_scores_csv(std::ostream& out, const Eigen::MatrixXd& scores);
void write_mise_csv(std::ostream& out, const std::vector<sim::MiseRow>& rows);

/// surface.csv, eigenfunctions.csv and scores.csv in `dir`.
void write_plot_csvs(const std::filesystem::path& dir, const FpcaFit& fit);

std::string read_text(const std::filesystem::path& path);
void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace ofpca::io
