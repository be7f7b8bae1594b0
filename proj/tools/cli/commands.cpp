#include "commands.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>

#include "config.hpp"
#include "cvconc/analysis.hpp"
#include "cvconc/cavity.hpp"
#include "cvconc/errors.hpp"
#include "cvconc/fock.hpp"
#include "cvconc/io.hpp"
#include "cvconc/kerr.hpp"
#include "plot.hpp"

#ifndef CVCONC_VERSION
#define CVCONC_VERSION "unknown"
#endif

namespace cvconc::cli {

namespace {

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

// Everything a command writes, keyed by file name. Collected in full before anything
// touches the disk so failures never leave partial output behind.
using OutputSet = std::map<std::string, std::string>;

struct CommonOptions {
  std::optional<std::string> config;
  std::string out = "out";
  std::vector<std::string> sets;
  unsigned threads = 0;
  std::string formats = "csv,json";
};

void add_common(CLI::App* cmd, CommonOptions& opts) {
  cmd->add_option("--config", opts.config, "INI file with [cavity] and/or [kerr] sections");
  cmd->add_option("--out", opts.out, "Output directory")->capture_default_str();
  cmd->add_option("--set", opts.sets, "Override a parameter, e.g. --set alpha=5 or kerr.step=0.05")
      ->take_all()
      ->allow_extra_args(false);
  cmd->add_option("--threads", opts.threads, "Worker threads (0 = all cores)")
      ->capture_default_str();
  cmd->add_option("--format", opts.formats, "Comma-separated subset of csv,json,svg")
      ->capture_default_str();
}

RunConfig resolve(Scheme scheme, const CommonOptions& opts) {
  std::optional<fs::path> path;
  if (opts.config) path = *opts.config;
  auto config = load_config(scheme, path, opts.sets);
  config.output_dir = opts.out;
  config.threads = opts.threads;
  config.formats = parse_formats(opts.formats);
  validate(config);
  return config;
}

ordered_json number_or_null(double v) { return std::isfinite(v) ? ordered_json(v) : ordered_json(); }

SweepResult pick(const SweepResult& sweep,
                 std::initializer_list<std::pair<const char*, const char*>> columns) {
  SweepResult out;
  out.axis_name = sweep.axis_name;
  out.axis_values = sweep.axis_values;
  for (const auto& [from, to] : columns) out.series.push_back({to, sweep.column(from)});
  return out;
}

void add_plot(OutputSet& files, const std::string& csv_name, const std::string& title) {
  const auto table = parse_csv(files.at(csv_name));
  files[fs::path(csv_name).replace_extension(".svg").string()] = plot_svg(table, title);
}

void write_all(const fs::path& dir, const OutputSet& files) {
  fs::create_directories(dir);
  for (const auto& [name, content] : files) {
    std::ofstream f(dir / name, std::ios::binary);
    f << content;
    if (!f) throw fs::filesystem_error("cannot write", dir / name, std::make_error_code(std::errc::io_error));
  }
}

ordered_json optimum_json(const CavityConfig& c, const std::optional<OptimumReport>& best,
                          const std::vector<std::string>& warnings) {
  ordered_json j;
  j["lambda"] = c.lambda;
  j["phi"] = c.phi;
  if (best) {
    j["phi0_star"] = best->phi0_star;
    j["fidelity"] = best->fidelity_star;
    j["success_probability"] = best->probability_at_star;
    j["entropy"] = von_neumann_entropy(
        cavity_schmidt(CavityParams(c.lambda, c.phi, best->phi0_star)).state);
    j["evaluations"] = best->evaluations;
  } else {
    for (const char* key : {"phi0_star", "fidelity", "success_probability", "entropy"}) j[key] = nullptr;
    j["evaluations"] = 0;
  }
  j["warnings"] = warnings;
  return j;
}

OutputSet cavity_outputs(const RunConfig& config, std::ostream& err) {
  const auto& c = config.cavity;
  const Parallelism par{config.threads};
  const auto sweep = sweep_cavity_phi0(c.lambda, c.phi, c.phi0_lo, c.phi0_hi, c.steps, par);

  std::vector<std::string> warnings = sweep.warnings;
  std::optional<OptimumReport> best;
  if (c.lambda > 0.0) {
    best = optimize_phi0(c.lambda, c.phi, c.scan_spacing, c.tolerance);
  } else {
    warnings.push_back("lambda = 0 is a product state; there is no phi0 optimum");
  }
  for (const auto& w : warnings) err << "warning: " << w << '\n';

  OutputSet files;
  const auto fig2a = pick(sweep, {{"P", "P"}, {"S", "S"}});
  const auto fig2b = pick(sweep, {{"F", "F"}});
  if (config.formats.csv || config.formats.svg) {
    files["fig2a.csv"] = sweep_to_csv(fig2a);
    files["fig2b.csv"] = sweep_to_csv(fig2b);
  }
  if (config.formats.svg) {
    add_plot(files, "fig2a.csv", "Success probability and entropy vs phi0");
    add_plot(files, "fig2b.csv", "Teleportation fidelity vs phi0");
    if (!config.formats.csv) {
      files.erase("fig2a.csv");
      files.erase("fig2b.csv");
    }
  }
  if (config.formats.json) files["cavity_sweep.json"] = sweep_to_json(sweep) + "\n";
  files["optimum.json"] = optimum_json(c, best, warnings).dump(2) + "\n";
  return files;
}

OutputSet kerr_outputs(const RunConfig& config, std::ostream& err) {
  const auto& k = config.kerr;
  const Parallelism par{config.threads};
  const KerrParams params(k.lambda, k.alpha, k.phi, k.fock_cut_n, k.n_max);
  const GridSpec grid{k.half_width, k.step};
  const auto scan = scan_grid(params, grid, ScanFields::kWithTeleport, par);
  const double baseline = baseline_merit(params);
  const auto sweep = sweep_kerr_threshold(scan, baseline, k.delta_f);
  for (const auto& w : sweep.warnings) err << "warning: " << w << '\n';

  OutputSet files;
  std::ostringstream q_csv, f_csv;
  q_csv << "x,y,Q\n";
  f_csv << "x,y,F\n";
  double q_integral = 0.0;
  const ScanPoint* best = nullptr;
  for (const auto& pt : scan.points) {
    const std::string xy = format_double(pt.x) + ',' + format_double(pt.y) + ',';
    q_csv << xy << format_double(pt.q) << '\n';
    f_csv << xy << format_double(pt.merit) << '\n';
    q_integral += pt.q * grid.weight();
    if (!std::isnan(pt.merit) && (best == nullptr || pt.merit > best->merit)) best = &pt;
  }

  const auto fig6 = pick(sweep, {{"avg_F", "avg_F"}, {"P_omega", "P_omega"}});
  const auto fig7 = pick(sweep, {{"avg_F_teleport", "F_teleport"}});
  if (config.formats.csv || config.formats.svg) {
    files["fig5a.csv"] = q_csv.str();
    files["fig5b.csv"] = f_csv.str();
    files["fig6.csv"] = sweep_to_csv(fig6);
    files["fig7.csv"] = sweep_to_csv(fig7);
  }
  if (config.formats.svg) {
    add_plot(files, "fig5a.csv", "Husimi Q of the auxiliary mode");
    add_plot(files, "fig5b.csv", "Fidelity to the maximally entangled state");
    add_plot(files, "fig6.csv", "Average fidelity and success probability vs threshold gap");
    add_plot(files, "fig7.csv", "Average teleportation fidelity vs threshold gap");
    if (!config.formats.csv) {
      for (const char* name : {"fig5a.csv", "fig5b.csv", "fig6.csv", "fig7.csv"}) files.erase(name);
    }
  }
  if (config.formats.json) files["kerr_sweep.json"] = sweep_to_json(sweep) + "\n";

  ordered_json j;
  j["scheme"] = "kerr";
  j["parameters"] = {{"lambda", k.lambda},         {"alpha", k.alpha},
                     {"phi", k.phi},               {"fock_cut_n", k.fock_cut_n},
                     {"n_max", params.n_max()},    {"half_width", k.half_width},
                     {"step", k.step},             {"points_per_axis", grid.points_per_axis()}};
  j["baseline_F0"] = baseline;
  j["q_integral"] = q_integral;
  j["max_F"] = best ? ordered_json{{"value", best->merit}, {"x", best->x}, {"y", best->y}}
                    : ordered_json();
  j["regions"] = ordered_json::array();
  for (std::size_t i = 0; i < sweep.axis_values.size(); ++i) {
    j["regions"].push_back({{"delta_F", sweep.axis_values[i]},
                            {"P_omega", number_or_null(sweep.column("P_omega")[i])},
                            {"avg_F", number_or_null(sweep.column("avg_F")[i])},
                            {"avg_F_teleport", number_or_null(sweep.column("avg_F_teleport")[i])},
                            {"n_points", static_cast<long long>(sweep.column("n_points")[i])}});
  }
  j["terminated_at"] = sweep.terminated_at ? ordered_json(*sweep.terminated_at) : ordered_json();
  j["warnings"] = sweep.warnings;
  j["meta"] = {{"version", CVCONC_VERSION}, {"threads", par.resolved()}};
  files["summary.json"] = j.dump(2) + "\n";
  return files;
}

// Runs body, mapping failures onto exit codes with a message on err.
template <typename Body>
int guarded(std::ostream& err, Body body) {
  try {
    body();
    return kExitOk;
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const fs::filesystem_error& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  }
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Entanglement concentration simulations for continuous-variable states"};
  app.name("cvconc");
  app.require_subcommand(1);

  CommonOptions cavity_opts, kerr_opts, opt_opts;
  auto* cavity = app.add_subcommand("cavity", "Cavity QED scheme: phi0 sweep and optimum");
  add_common(cavity, cavity_opts);
  auto* kerr = app.add_subcommand("kerr", "Cross-Kerr scheme: phase-space maps and threshold sweep");
  add_common(kerr, kerr_opts);
  auto* optimize = app.add_subcommand("optimize", "Find the phi0 maximizing teleportation fidelity");
  add_common(optimize, opt_opts);

  std::vector<std::string> csv_files;
  std::optional<std::string> plot_out;
  auto* plot = app.add_subcommand("plot", "Render CSV outputs as SVG");
  plot->add_option("files", csv_files, "CSV files written by cavity or kerr")->required();
  plot->add_option("--out", plot_out, "Output directory (default: next to each input)");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  if (cavity->parsed()) {
    return guarded(err, [&] {
      const auto config = resolve(Scheme::kCavity, cavity_opts);
      write_all(config.output_dir, cavity_outputs(config, err));
    });
  }
  if (kerr->parsed()) {
    return guarded(err, [&] {
      const auto config = resolve(Scheme::kKerr, kerr_opts);
      write_all(config.output_dir, kerr_outputs(config, err));
    });
  }
  if (optimize->parsed()) {
    return guarded(err, [&] {
      const auto config = resolve(Scheme::kCavity, opt_opts);
      const auto& c = config.cavity;
      if (!(c.lambda > 0.0)) throw ConfigError("optimize needs lambda > 0");
      const auto best = optimize_phi0(c.lambda, c.phi, c.scan_spacing, c.tolerance);
      const auto text = optimum_json(c, best, {}).dump(2) + "\n";
      write_all(config.output_dir, {{"optimum.json", text}});
      out << text;
    });
  }
  return guarded(err, [&] {
    OutputSet pending;
    std::vector<fs::path> targets;
    for (const auto& name : csv_files) {
      std::ifstream f(name, std::ios::binary);
      if (!f) throw ConfigError("cannot read " + name);
      std::ostringstream text;
      text << f.rdbuf();
      Table table;
      try {
        table = parse_csv(text.str());
      } catch (const ConfigError& e) {
        throw ConfigError(name + ": " + e.what());
      }
      const fs::path src(name);
      const fs::path dir = plot_out ? fs::path(*plot_out) : src.parent_path();
      const auto svg = plot_svg(table, src.stem().string());
      targets.push_back(dir / src.stem().concat(".svg"));
      pending[targets.back().string()] = svg;
    }
    for (const auto& target : targets) {
      if (target.has_parent_path()) fs::create_directories(target.parent_path());
      std::ofstream f(target, std::ios::binary);
      f << pending.at(target.string());
      if (!f) throw ConfigError("cannot write " + target.string());
      out << target.string() << '\n';
    }
  });
}

}  // namespace cvconc::cli
