#include "ofpca/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "ofpca/errors.hpp"
#include "ofpca/quadrature.hpp"

namespace ofpca::io {

using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

namespace {

[[noreturn]] void schema_error(const std::string& where, const std::string& what) {
  throw Error(ErrorCode::SchemaError, where + ": " + what);
}

const json& require(const json& obj, const char* key, const std::string& where) {
  if (!obj.is_object()) schema_error(where, "expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) schema_error(where, std::string("missing field \"") + key + "\"");
  return *it;
}

double number(const json& v, const std::string& where) {
  if (!v.is_number()) schema_error(where, "expected a number");
  return v.get<double>();
}

std::vector<double> number_array(const json& v, const std::string& where) {
  if (!v.is_array()) schema_error(where, "expected an array of numbers");
  std::vector<double> out;
  out.reserve(v.size());
  for (std::size_t k = 0; k < v.size(); ++k) out.push_back(number(v[k], where + "/" + std::to_string(k)));
  return out;
}

// A number, a flat array, or an array of rows, flattened row-major.
std::vector<double> object_coords(const json& v, const std::string& where) {
  if (v.is_number()) return {v.get<double>()};
  if (!v.is_array()) schema_error(where, "expected a number or an array");
  if (!v.empty() && v[0].is_array()) {
    std::vector<double> out;
    const std::size_t cols = v[0].size();
    for (std::size_t r = 0; r < v.size(); ++r) {
      const std::string row_where = where + "/" + std::to_string(r);
      if (!v[r].is_array() || v[r].size() != cols) schema_error(row_where, "ragged matrix row");
      const auto row = number_array(v[r], row_where);
      out.insert(out.end(), row.begin(), row.end());
    }
    return out;
  }
  return number_array(v, where);
}

SpaceKind parse_space(const json& doc, const std::optional<SpaceKind>& override_space) {
  std::optional<SpaceKind> from_file;
  if (doc.contains("space")) {
    const json& name = doc["space"];
    if (!name.is_string()) schema_error("/space", "expected a string");
    const auto tag = parse_space_name(name.get<std::string>());
    if (!tag) schema_error("/space", "unknown space \"" + name.get<std::string>() + "\"");
    int dim = 1;
    if (doc.contains("dim")) {
      if (!doc["dim"].is_number_integer()) schema_error("/dim", "expected an integer");
      dim = doc["dim"].get<int>();
    } else if (*tag != SpaceTag::Scalar) {
      schema_error("/", "missing field \"dim\"");
    }
    from_file = SpaceKind{*tag, dim};
  }
  if (!from_file && !override_space) schema_error("/", "missing field \"space\"");
  if (from_file && override_space && *from_file != *override_space)
    throw Error(ErrorCode::SpaceMismatch, "file space disagrees with the requested space");
  const SpaceKind space = from_file ? *from_file : *override_space;
  if (space.dim < 1 || (space.tag == SpaceTag::Scalar && space.dim != 1))
    schema_error("/dim", "invalid dimension " + std::to_string(space.dim));
  return space;
}

ordered_json object_json(const ObjectPoint& p) {
  const auto d = p.data();
  switch (p.space().tag) {
    case SpaceTag::Scalar: return d[0];
    case SpaceTag::Quantile: return std::vector<double>(d.begin(), d.end());
    case SpaceTag::Adjacency:
    case SpaceTag::SymPsd: {
      const auto r = static_cast<std::size_t>(p.space().dim);
      ordered_json rows = ordered_json::array();
      for (std::size_t i = 0; i < r; ++i)
        rows.push_back(std::vector<double>(d.begin() + static_cast<std::ptrdiff_t>(i * r),
                                           d.begin() + static_cast<std::ptrdiff_t>((i + 1) * r)));
      return rows;
    }
  }
  return nullptr;
}

ObjectPoint parse_object(SpaceKind space, const json& v, const std::string& where, bool project_on_load,
                         bool ingest) {
  std::vector<double> coords = object_coords(v, where);
  if (coords.size() != space.coord_size())
    schema_error(where, "expected " + std::to_string(space.coord_size()) + " values, got " +
                            std::to_string(coords.size()));
  try {
    if (project_on_load) return project(space, coords);
    ObjectPoint p(space, std::move(coords));
    if (ingest && space.tag == SpaceTag::SymPsd) return project(space, p.data());
    return p;
  } catch (const Error& e) {
    throw Error(e.code(), where + ": " + e.what());
  }
}

ordered_json space_header(const SpaceKind& space) {
  ordered_json j;
  j["space"] = std::string(space_name(space.tag));
  j["dim"] = space.dim;
  return j;
}

ordered_json matrix_json(const Eigen::MatrixXd& m) {
  ordered_json rows = ordered_json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    std::vector<double> row(static_cast<std::size_t>(m.cols()));
    for (Eigen::Index c = 0; c < m.cols(); ++c) row[static_cast<std::size_t>(c)] = m(r, c);
    rows.push_back(std::move(row));
  }
  return rows;
}

Eigen::MatrixXd parse_matrix(const json& v, const std::string& where, Eigen::Index rows, Eigen::Index cols) {
  if (!v.is_array() || static_cast<Eigen::Index>(v.size()) != rows)
    schema_error(where, "expected " + std::to_string(rows) + " rows");
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const std::string row_where = where + "/" + std::to_string(r);
    const auto row = number_array(v[static_cast<std::size_t>(r)], row_where);
    if (static_cast<Eigen::Index>(row.size()) != cols)
      schema_error(row_where, "expected " + std::to_string(cols) + " columns");
    for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = row[static_cast<std::size_t>(c)];
  }
  return m;
}

json parse_json(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::SchemaError, std::string("malformed JSON: ") + e.what());
  }
}

}  // namespace

ObjectSample parse_trajectory_file(const std::string& text, const LoadOptions& options) {
  const json doc = parse_json(text);
  if (!doc.is_object()) schema_error("/", "expected an object");
  const SpaceKind space = parse_space(doc, options.space);
  const std::vector<double> grid = number_array(require(doc, "time_grid", "/"), "/time_grid");
  try {
    validate_time_grid(grid);
  } catch (const Error& e) {
    throw Error(ErrorCode::SchemaError, std::string("/time_grid: ") + e.what());
  }
  const json& trajs = require(doc, "trajectories", "/");
  if (!trajs.is_array()) schema_error("/trajectories", "expected an array");

  std::vector<ObjectTrajectory> out;
  out.reserve(trajs.size());
  for (std::size_t i = 0; i < trajs.size(); ++i) {
    const std::string where = "/trajectories/" + std::to_string(i);
    const json& traj = trajs[i];
    if (!traj.is_array() || traj.size() != grid.size())
      schema_error(where, "expected an array of " + std::to_string(grid.size()) + " objects");
    std::vector<ObjectPoint> points;
    points.reserve(grid.size());
    for (std::size_t k = 0; k < traj.size(); ++k)
      points.push_back(parse_object(space, traj[k], where + "/" + std::to_string(k),
                                    options.project_on_load, true));
    out.emplace_back(space, grid, std::move(points));
  }
  if (out.empty()) schema_error("/trajectories", "no trajectories");
  return ObjectSample(std::move(out));
}

ObjectSample load_trajectory_file(const std::filesystem::path& path, const LoadOptions& options) {
  return parse_trajectory_file(read_text(path), options);
}

std::string format_trajectory_file(const ObjectSample& sample) {
  ordered_json doc = space_header(sample.space());
  doc["time_grid"] = sample.time_grid();
  ordered_json trajs = ordered_json::array();
  for (const auto& traj : sample.trajectories()) {
    ordered_json row = ordered_json::array();
    for (const auto& p : traj.points()) row.push_back(object_json(p));
    trajs.push_back(std::move(row));
  }
  doc["trajectories"] = std::move(trajs);
  return doc.dump(1) + "\n";
}

void save_trajectory_file(const std::filesystem::path& path, const ObjectSample& sample) {
  write_text(path, format_trajectory_file(sample));
}

// ---------------------------------------------------------------------------

std::string format_fit_artifact(const FpcaFit& fit) {
  const EigenSystem& es = fit.eigen;
  ordered_json doc;
  doc["format"] = "ofpca-fit";
  doc["version"] = 1;
  doc["status"] = fit.status;
  doc["warnings"] = fit.warnings;
  const ordered_json header = space_header(fit.mean.space());
  doc["space"] = header["space"];
  doc["dim"] = header["dim"];
  doc["time_grid"] = fit.surface.time_grid;
  doc["quad_weights"] = fit.surface.quad_weights;
  doc["surface"] = matrix_json(fit.surface.values);
  doc["spectrum"] = es.spectrum;
  doc["has_negative_eigenvalues"] = es.has_negative;
  doc["clipped"] = es.clipped;
  doc["eigenvalues"] = es.eigenvalues;
  ordered_json fractions = ordered_json::array();
  for (std::size_t j = 1; j <= es.num_retained; ++j) {
    try {
      fractions.push_back(explained_fraction(es, j));
    } catch (const Error&) {
      fractions.push_back(nullptr);
    }
  }
  doc["explained_fraction"] = std::move(fractions);
  doc["eigenfunctions"] = matrix_json(es.eigenfunctions.transpose());
  ordered_json mean = ordered_json::array();
  for (const auto& p : fit.mean.points()) mean.push_back(object_json(p));
  doc["mean"] = std::move(mean);
  doc["distance_curves"] = matrix_json(fit.distance_curves);
  doc["scores"] = matrix_json(fit.scores);
  ordered_json fpcs = ordered_json::array();
  for (const ComponentFpcs& c : fit.object_fpcs) {
    ordered_json item;
    item["component"] = c.component + 1;
    item["available"] = c.available;
    ordered_json per = ordered_json::array();
    for (const auto& p : c.per_trajectory) per.push_back(object_json(p));
    item["per_trajectory"] = std::move(per);
    item["column_mean"] = c.column_mean ? object_json(*c.column_mean) : ordered_json(nullptr);
    item["note"] = c.note;
    fpcs.push_back(std::move(item));
  }
  doc["object_fpcs"] = std::move(fpcs);
  return doc.dump(1) + "\n";
}

FpcaFit parse_fit_artifact(const std::string& text) {
  const json doc = parse_json(text);
  if (!doc.is_object()) schema_error("/", "expected an object");
  const json& format = require(doc, "format", "/");
  if (!format.is_string() || format.get<std::string>() != "ofpca-fit")
    schema_error("/format", "not an ofpca fit artifact");
  const SpaceKind space = parse_space(doc, std::nullopt);

  FpcaFit fit;
  fit.status = require(doc, "status", "/").get<std::string>();
  fit.warnings = require(doc, "warnings", "/").get<std::vector<std::string>>();

  std::vector<double> grid = number_array(require(doc, "time_grid", "/"), "/time_grid");
  const auto T = static_cast<Eigen::Index>(grid.size());
  fit.surface.time_grid = grid;
  fit.surface.quad_weights = number_array(require(doc, "quad_weights", "/"), "/quad_weights");
  fit.surface.values = parse_matrix(require(doc, "surface", "/"), "/surface", T, T);

  EigenSystem& es = fit.eigen;
  es.time_grid = grid;
  es.quad_weights = fit.surface.quad_weights;
  es.spectrum = number_array(require(doc, "spectrum", "/"), "/spectrum");
  es.eigenvalues = number_array(require(doc, "eigenvalues", "/"), "/eigenvalues");
  es.num_retained = es.eigenvalues.size();
  es.has_negative = require(doc, "has_negative_eigenvalues", "/").get<bool>();
  es.clipped = require(doc, "clipped", "/").get<bool>();
  const auto K = static_cast<Eigen::Index>(es.num_retained);
  es.eigenfunctions = parse_matrix(require(doc, "eigenfunctions", "/"), "/eigenfunctions", K, T).transpose();

  const json& mean = require(doc, "mean", "/");
  if (!mean.is_array() || static_cast<Eigen::Index>(mean.size()) != T)
    schema_error("/mean", "expected one object per grid time");
  std::vector<ObjectPoint> mean_points;
  for (std::size_t k = 0; k < mean.size(); ++k)
    mean_points.push_back(parse_object(space, mean[k], "/mean/" + std::to_string(k), false, false));
  fit.mean = ObjectTrajectory(space, grid, std::move(mean_points));

  const json& curves = require(doc, "distance_curves", "/");
  if (!curves.is_array()) schema_error("/distance_curves", "expected an array");
  const auto n = static_cast<Eigen::Index>(curves.size());
  fit.distance_curves = parse_matrix(curves, "/distance_curves", n, T);
  fit.scores = parse_matrix(require(doc, "scores", "/"), "/scores", n, K);

  const json& fpcs = require(doc, "object_fpcs", "/");
  if (!fpcs.is_array()) schema_error("/object_fpcs", "expected an array");
  for (std::size_t c = 0; c < fpcs.size(); ++c) {
    const std::string where = "/object_fpcs/" + std::to_string(c);
    const json& item = fpcs[c];
    ComponentFpcs comp;
    comp.component = require(item, "component", where).get<std::size_t>() - 1;
    comp.available = require(item, "available", where).get<bool>();
    const json& per = require(item, "per_trajectory", where);
    for (std::size_t i = 0; i < per.size(); ++i)
      comp.per_trajectory.push_back(
          parse_object(space, per[i], where + "/per_trajectory/" + std::to_string(i), false, false));
    const json& cm = require(item, "column_mean", where);
    if (!cm.is_null()) comp.column_mean = parse_object(space, cm, where + "/column_mean", false, false);
    comp.note = require(item, "note", where).get<std::string>();
    fit.object_fpcs.push_back(std::move(comp));
  }
  return fit;
}

void save_fit_artifact(const std::filesystem::path& path, const FpcaFit& fit) {
  write_text(path, format_fit_artifact(fit));
}

FpcaFit load_fit_artifact(const std::filesystem::path& path) { return parse_fit_artifact(read_text(path)); }

// ---------------------------------------------------------------------------

namespace {

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

void write_surface_csv(std::ostream& out, const KernelSurface& surface) {
  out << "s,t,value\n";
  for (std::size_t a = 0; a < surface.size(); ++a)
    for (std::size_t b = 0; b < surface.size(); ++b)
      out << num(surface.time_grid[a]) << ',' << num(surface.time_grid[b]) << ','
          << num(surface.values(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b))) << '\n';
}

void write_eigenfunctions_csv(std::ostream& out, const EigenSystem& es) {
  out << 't';
  for (std::size_t j = 1; j <= es.num_retained; ++j) out << ",phi_" << j;
  out << '\n';
  for (std::size_t k = 0; k < es.time_grid.size(); ++k) {
    out << num(es.time_grid[k]);
    for (std::size_t j = 0; j < es.num_retained; ++j)
      out << ',' << num(es.eigenfunctions(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(j)));
    out << '\n';
  }
}

void write_scores_csv(std::ostream& out, const Eigen::MatrixXd& scores) {
  out << 'i';
  for (Eigen::Index j = 1; j <= scores.cols(); ++j) out << ",beta_" << j;
  out << '\n';
  for (Eigen::Index i = 0; i < scores.rows(); ++i) {
    out << i;
    for (Eigen::Index j = 0; j < scores.cols(); ++j) out << ',' << num(scores(i, j));
    out << '\n';
  }
}

void write_mise_csv(std::ostream& out, const std::vector<sim::MiseRow>& rows) {
  out << "n,C,phi_1,phi_2,phi_3,lambda_1,lambda_2,lambda_3\n";
  for (const auto& r : rows) {
    out << r.n << ',' << num(r.surface);
    for (double v : r.eigenfunction) out << ',' << num(v);
    for (double v : r.eigenvalue) out << ',' << num(v);
    out << '\n';
  }
}

void write_plot_csvs(const std::filesystem::path& dir, const FpcaFit& fit) {
  std::filesystem::create_directories(dir);
  std::ostringstream surface, eigenfunctions, scores;
  write_surface_csv(surface, fit.surface);
  write_eigenfunctions_csv(eigenfunctions, fit.eigen);
  write_scores_csv(scores, fit.scores);
  write_text(dir / "surface.csv", surface.str());
  write_text(dir / "eigenfunctions.csv", eigenfunctions.str());
  write_text(dir / "scores.csv", scores.str());
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::SchemaError, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::SchemaError, "cannot write " + path.string());
  out << text;
}

}  // namespace ofpca::io
