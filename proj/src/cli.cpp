#include "ofpca/cli.hpp"

#include <cstdio>
#include <filesystem>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ofpca/errors.hpp"
#include "ofpca/io.hpp"
#include "ofpca/parallel.hpp"

namespace ofpca::cli {

namespace fs = std::filesystem;

namespace {

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::SchemaError:
    case ErrorCode::InvalidObject:
    case ErrorCode::SpaceMismatch:
    case ErrorCode::TooFewTrajectories:
    case ErrorCode::EmptyInput:
    case ErrorCode::BadRank:
      return kExitInput;
    default:
      return kExitNumeric;
  }
}

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

struct FitArgs {
  std::string input;
  std::size_t components = 4;
  double explained_fraction = 0;
  bool clip = false;
  bool fpc_objects = false;
  bool project_on_load = false;
  std::string space;
  std::string method = "auto";
  std::string out;
};

struct SimArgs {
  std::string design = "dist";
  std::size_t n = 100;
  std::size_t T = 51;
  int m = 100;
  std::uint64_t seed = 1;
  std::string out;
};

struct MiseArgs {
  std::string design = "dist";
  std::vector<std::size_t> n_list{25, 50, 100};
  std::size_t runs = 100;
  std::uint64_t seed = 1;
  std::size_t T = 51;
  int m = 100;
  bool truth_fed = false;
  std::string out;
};

const std::map<std::string, CovMethod> kMethods{
    {"auto", CovMethod::Auto}, {"pairs", CovMethod::PairBlocks}, {"inner", CovMethod::InnerProduct}};

const std::map<std::string, sim::Design> kDesigns{{"dist", sim::Design::Dist}, {"net", sim::Design::Net}};

// "quantile:100", "adjacency:10", "sympsd:3" or "scalar".
SpaceKind parse_space_flag(const std::string& text) {
  const auto colon = text.find(':');
  const std::string name = text.substr(0, colon);
  const auto tag = parse_space_name(name);
  if (!tag) throw Error(ErrorCode::SchemaError, "--space: unknown space \"" + name + "\"");
  int dim = 1;
  if (colon != std::string::npos) {
    try {
      dim = std::stoi(text.substr(colon + 1));
    } catch (const std::exception&) {
      throw Error(ErrorCode::SchemaError, "--space: bad dimension in \"" + text + "\"");
    }
  } else if (*tag != SpaceTag::Scalar) {
    throw Error(ErrorCode::SchemaError, "--space: " + name + " needs a dimension, e.g. " + name + ":10");
  }
  return {*tag, dim};
}

void emit(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty() || path == "-")
    out << text;
  else
    io::write_text(path, text);
}

int cmd_fit(const FitArgs& a, std::ostream& out) {
  io::LoadOptions load;
  load.project_on_load = a.project_on_load;
  if (!a.space.empty()) load.space = parse_space_flag(a.space);
  const ObjectSample sample = io::load_trajectory_file(a.input, load);

  FitOptions opts;
  opts.components = a.components;
  opts.clip_negative = a.clip;
  opts.object_fpcs = a.fpc_objects;
  opts.method = kMethods.at(a.method);
  if (a.explained_fraction > 0) {
    const KernelSurface surface = estimate_cov_surface(sample, opts.method);
    const EigenSystem full = eigendecompose(surface, surface.size(), {opts.clip_negative});
    opts.components = components_for_fraction(full, a.explained_fraction);
  }
  const FpcaFit fit = fit_fpca(sample, opts);

  const fs::path dir(a.out);
  io::save_fit_artifact(dir / "fit.json", fit);
  io::write_plot_csvs(dir, fit);

  out << "status " << fit.status << "\n";
  out << "n " << sample.n() << " T " << sample.grid_size() << " components " << fit.eigen.num_retained
      << "\n";
  for (std::size_t j = 0; j < fit.eigen.num_retained; ++j)
    out << "lambda_" << j + 1 << " " << num(fit.eigen.eigenvalues[j]) << "\n";
  for (const auto& w : fit.warnings) out << "warning: " << w << "\n";
  return kExitOk;
}

int cmd_simulate(const SimArgs& a, std::ostream& out) {
  ObjectSample sample = [&] {
    if (kDesigns.at(a.design) == sim::Design::Dist) {
      sim::DistSimConfig cfg;
      cfg.n = a.n;
      cfg.T = a.T;
      cfg.m = a.m;
      cfg.seed = a.seed;
      return sim::simulate_distributions(cfg);
    }
    sim::NetSimConfig cfg;
    cfg.n = a.n;
    cfg.T = a.T;
    cfg.seed = a.seed;
    return sim::simulate_networks(cfg);
  }();
  emit(a.out, io::format_trajectory_file(sample), out);
  return kExitOk;
}

int cmd_mise(const MiseArgs& a, std::ostream& out) {
  sim::MiseOptions opts;
  opts.design = kDesigns.at(a.design);
  opts.T = a.T;
  opts.m = a.m;
  opts.runs = a.runs;
  opts.seed = a.seed;
  opts.truth_fed = a.truth_fed;
  const sim::TruthSpec truth = sim::truth_for(opts);
  std::vector<sim::MiseRow> rows;
  for (std::size_t n : a.n_list) rows.push_back(sim::mise_report(n, opts, truth));
  std::ostringstream csv;
  io::write_mise_csv(csv, rows);
  emit(a.out, csv.str(), out);
  return kExitOk;
}

int cmd_scores(const std::string& artifact, const std::string& path, std::ostream& out) {
  const FpcaFit fit = io::load_fit_artifact(artifact);
  std::ostringstream csv;
  io::write_scores_csv(csv, fit.scores);
  emit(path, csv.str(), out);
  return kExitOk;
}

int cmd_export_plots(const std::string& artifact, const std::string& dir) {
  io::write_plot_csvs(dir, io::load_fit_artifact(artifact));
  return kExitOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Functional principal component analysis for object-valued trajectories", "ofpca"};
  app.require_subcommand(1);
  int threads = 0;
  app.add_option("--threads", threads, "OpenMP threads (default: OFPCA_THREADS or runtime default)")
      ->check(CLI::NonNegativeNumber);

  FitArgs fit;
  auto* fit_cmd = app.add_subcommand("fit", "Fit metric FPCA to a trajectory file");
  fit_cmd->add_option("input", fit.input, "Trajectory JSON file")->required();
  fit_cmd->add_option("--components,-k", fit.components, "Number of components")->check(CLI::PositiveNumber);
  fit_cmd->add_option("--explained-fraction", fit.explained_fraction,
                      "Pick the smallest K reaching this explained fraction")
      ->check(CLI::Range(0.0, 1.0));
  fit_cmd->add_flag("--clip-negative-eigenvalues", fit.clip, "Zero negative retained eigenvalues");
  fit_cmd->add_flag("--fpc-objects", fit.fpc_objects, "Compute object FPCs");
  fit_cmd->add_flag("--project-on-load", fit.project_on_load, "Project infeasible objects instead of rejecting");
  fit_cmd->add_option("--space", fit.space, "Expected space, e.g. quantile:100");
  fit_cmd->add_option("--kernel-method", fit.method, "auto, pairs or inner")
      ->check(CLI::IsMember({"auto", "pairs", "inner"}));
  fit_cmd->add_option("--out", fit.out, "Output directory")->required();

  SimArgs simulate;
  auto* sim_cmd = app.add_subcommand("simulate", "Simulate a trajectory sample");
  sim_cmd->add_option("--design", simulate.design, "dist or net")->check(CLI::IsMember({"dist", "net"}));
  sim_cmd->add_option("--n", simulate.n, "Trajectories")->check(CLI::PositiveNumber);
  sim_cmd->add_option("--T", simulate.T, "Grid points")->check(CLI::Range(2, 100000));
  sim_cmd->add_option("--m", simulate.m, "Quantile levels (dist)")->check(CLI::PositiveNumber);
  sim_cmd->add_option("--seed", simulate.seed, "Seed");
  sim_cmd->add_option("--out", simulate.out, "Output file (default stdout)");

  MiseArgs mise;
  auto* mise_cmd = app.add_subcommand("mise", "Monte-Carlo MISE table");
  mise_cmd->add_option("--design", mise.design, "dist or net")->check(CLI::IsMember({"dist", "net"}));
  mise_cmd->add_option("--n-list", mise.n_list, "Sample sizes")->delimiter(',')->check(CLI::Range(2, 1000000));
  mise_cmd->add_option("--runs", mise.runs, "Runs per sample size")->check(CLI::PositiveNumber);
  mise_cmd->add_option("--seed", mise.seed, "Seed");
  mise_cmd->add_option("--T", mise.T, "Grid points")->check(CLI::Range(4, 100000));
  mise_cmd->add_option("--m", mise.m, "Quantile levels (dist)")->check(CLI::PositiveNumber);
  mise_cmd->add_flag("--truth-fed", mise.truth_fed, "Feed the true surface to the eigen step");
  mise_cmd->add_option("--out", mise.out, "Output CSV (default stdout)");

  std::string scores_artifact, scores_out;
  auto* scores_cmd = app.add_subcommand("scores", "Print the scores of a fit artifact as CSV");
  scores_cmd->add_option("artifact", scores_artifact, "fit.json")->required();
  scores_cmd->add_option("--out", scores_out, "Output CSV (default stdout)");

  std::string plots_artifact, plots_out;
  auto* plots_cmd = app.add_subcommand("export-plots", "Write plot CSVs from a fit artifact");
  plots_cmd->add_option("artifact", plots_artifact, "fit.json")->required();
  plots_cmd->add_option("--out", plots_out, "Output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInput;
  }

  const ThreadCountGuard guard(threads > 0 ? threads : threads_from_env());
  try {
    if (*fit_cmd) return cmd_fit(fit, out);
    if (*sim_cmd) return cmd_simulate(simulate, out);
    if (*mise_cmd) return cmd_mise(mise, out);
    if (*scores_cmd) return cmd_scores(scores_artifact, scores_out, out);
    if (*plots_cmd) return cmd_export_plots(plots_artifact, plots_out);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return exit_code_for(e.code());
  } catch (const fs::filesystem_error& e) {
    err << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return kExitNumeric;
  }
  return kExitInput;
}

}  // namespace ofpca::cli
