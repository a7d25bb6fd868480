// ============================================================================
// acwave: command-line front end over the ray, mode, packet, dispersive, and
// scaling-ladder pipelines. Each subcommand validates its inputs, runs one
// pipeline, and writes plot-ready CSV and/or versioned JSON under
// --output-dir, echoing the fully resolved configuration in every file so a
// run can be reproduced from its outputs alone. Identical invocations write
// bit-identical files.
//
// Exit codes: 0 success, 2 rejected input or violated precondition,
// 3 numerical failure, 4 I/O failure.
// ============================================================================

#include "CLI11.hpp"
#include "json.hpp"

#include "acwave/dynamics.hpp"
#include "acwave/errors.hpp"
#include "acwave/experiments.hpp"
#include "acwave/measure.hpp"
#include "acwave/rays.hpp"
#include "acwave/spectral.hpp"
#include "acwave/synthesis.hpp"

#include <cmath>
#include <complex>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <string>
#include <utility>
#include <vector>

namespace {

using acwave::IoError;
using acwave::NumericalError;
using acwave::ValidationError;

constexpr int kSchemaVersion = 1;

std::string fnum(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// JSON cannot carry IEEE infinities; encode them the same way the norm
// reports do.
nlohmann::json jnum(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

// Resolved configuration of one run, echoed into every output file.
struct ConfigEcho {
  std::vector<std::pair<std::string, std::string>> items;

  void add(const std::string& key, const std::string& value) {
    items.emplace_back(key, value);
  }
  void add(const std::string& key, double value) { add(key, fnum(value)); }
  void add(const std::string& key, int value) {
    add(key, std::to_string(value));
  }

  void write_header(std::ostream& os) const {
    for (const auto& [key, value] : items)
      os << "# " << key << " = " << value << '\n';
  }
  nlohmann::json as_json() const {
    nlohmann::json doc = nlohmann::json::object();
    for (const auto& [key, value] : items) doc[key] = value;
    return doc;
  }
};

struct CommonOpts {
  std::string output_dir = ".";
  std::string format = "csv";
  int threads = 1;

  bool want_csv() const { return format != "json"; }
  bool want_json() const { return format != "csv"; }
};

void add_common(CLI::App* cmd, CommonOpts& opts) {
  cmd->add_option("--output-dir", opts.output_dir,
                  "directory for output files")
      ->capture_default_str();
  cmd->add_option("--format", opts.format, "output files to write")
      ->check(CLI::IsMember({"csv", "json", "both"}))
      ->capture_default_str();
  cmd->add_option("--threads", opts.threads,
                  "worker cap (compute runs deterministically; rung order is "
                  "ascending regardless)")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
}

std::filesystem::path resolve_dir(const CommonOpts& opts) {
  std::filesystem::path dir(opts.output_dir);
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec && !std::filesystem::is_directory(dir))
    throw IoError("cannot create output directory " + dir.string());
  return dir;
}

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError("cannot open " + path.string() + " for writing");
  return os;
}

void finish_output(std::ofstream& os, const std::filesystem::path& path) {
  os.flush();
  if (!os) throw IoError("write to " + path.string() + " failed");
}

void report_written(const std::filesystem::path& path) {
  std::cout << "wrote " << path.string() << '\n';
}

nlohmann::json fit_to_json(const acwave::ScalingFit& fit) {
  return {{"slope", fit.slope},
          {"intercept", fit.intercept},
          {"std_error", fit.std_error},
          {"predicted_slope", fit.predicted_slope},
          {"tolerance", fit.tolerance},
          {"pass", fit.pass}};
}

// ---------------------------------------------------------------------------
// trace-ray
// ---------------------------------------------------------------------------

struct TraceRayOpts {
  CommonOpts common;
  double kappa = 0.0;
  double xd0 = 0.0;
  double xid0 = 0.0;
  double tau0 = 0.0;
  double t0 = 0.0;
  std::vector<double> xip;
  std::vector<double> xp0;
  int reflections = 0;
  int samples = 512;
};

void run_trace_ray(const TraceRayOpts& opts) {
  acwave::rays::PhaseState state;
  state.t = opts.t0;
  state.xd = opts.xd0;
  state.tau = opts.tau0;
  state.xid = opts.xid0;
  state.xip = opts.xip;
  state.xp = opts.xp0.empty() ? std::vector<double>(opts.xip.size(), 0.0)
                              : opts.xp0;
  state.validate();
  if (!(opts.kappa > 0.0) || !std::isfinite(opts.kappa))
    throw ValidationError("kappa must be a positive finite real");
  if (!acwave::rays::on_characteristic_set(state, opts.kappa))
    throw ValidationError(
        "initial state must lie on the characteristic set "
        "kappa*xd*(xid^2 + |xip|^2) = tau^2");
  if (opts.reflections < 0)
    throw ValidationError("reflections must be >= 0");
  if (opts.samples < 2)
    throw ValidationError("samples must be >= 2");

  acwave::rays::RayPath path = acwave::rays::trace_ray(state, opts.kappa);
  if (opts.reflections > 0)
    path = acwave::rays::reflect_and_continue(path, opts.reflections);

  ConfigEcho echo;
  echo.add("command", "trace-ray");
  echo.add("kappa", opts.kappa);
  echo.add("xd0", opts.xd0);
  echo.add("xid0", opts.xid0);
  echo.add("tau0", opts.tau0);
  echo.add("t0", opts.t0);
  for (std::size_t i = 0; i < state.xip.size(); ++i)
    echo.add("xip_" + std::to_string(i), state.xip[i]);
  for (std::size_t i = 0; i < state.xp.size(); ++i)
    echo.add("xp0_" + std::to_string(i), state.xp[i]);
  echo.add("reflections", opts.reflections);
  echo.add("samples", opts.samples);
  echo.add("format", opts.common.format);
  echo.add("threads", opts.common.threads);
  echo.add("segments", static_cast<int>(path.segments.size()));

  const auto dir = resolve_dir(opts.common);
  if (opts.common.want_csv()) {
    const auto path_file = dir / "ray_path.csv";
    auto os = open_output(path_file);
    echo.write_header(os);
    acwave::rays::write_path_csv(path, opts.samples, os);
    finish_output(os, path_file);
    report_written(path_file);

    const auto coll_file = dir / "ray_collisions.csv";
    auto cs = open_output(coll_file);
    echo.write_header(cs);
    acwave::rays::write_collisions_csv(path, cs);
    finish_output(cs, coll_file);
    report_written(coll_file);
  }
  if (opts.common.want_json()) {
    nlohmann::json doc;
    doc["schema_version"] = kSchemaVersion;
    doc["report"] = "ray_summary";
    doc["config"] = echo.as_json();
    doc["segments"] = path.segments.size();
    doc["collision_period"] =
        3.14159265358979323846 / (opts.kappa * state.xip_norm());
    doc["collisions"] = nlohmann::json::array();
    for (std::size_t k = 0; k < path.collisions.size(); ++k)
      doc["collisions"].push_back({{"index", k},
                                   {"s", path.collisions[k].s},
                                   {"t", path.collisions[k].t},
                                   {"xp", path.collisions[k].xp}});
    const auto json_file = dir / "ray_summary.json";
    auto js = open_output(json_file);
    js << doc.dump(2) << '\n';
    finish_output(js, json_file);
    report_written(json_file);
  }
}

// ---------------------------------------------------------------------------
// mode
// ---------------------------------------------------------------------------

struct ModeOpts {
  CommonOpts common;
  double kappa = 0.0;
  int n = -1;
  double mu = std::numeric_limits<double>::quiet_NaN();
  double smax = 30.0;
  double xi = 1.0;
};

void run_mode(const ModeOpts& opts) {
  acwave::spectral::ModeSpec spec;
  if (opts.n >= 0 && !std::isnan(opts.mu))
    throw ValidationError("give either --n (quantized) or --mu, not both");
  if (opts.n >= 0) {
    spec = acwave::spectral::ModeSpec::quantized(opts.kappa, opts.n);
  } else if (!std::isnan(opts.mu)) {
    spec.kappa = opts.kappa;
    spec.mu = opts.mu;
    spec.validate();
  } else {
    throw ValidationError("one of --n or --mu is required");
  }
  if (!(opts.xi > 0.0) || !std::isfinite(opts.xi))
    throw ValidationError("xi must be a positive finite real");
  if (!(opts.smax > 0.0) || !std::isfinite(opts.smax))
    throw ValidationError("smax must be a positive finite real");

  acwave::spectral::ModeProfile profile =
      acwave::spectral::closed_form_profile(spec, opts.xi, opts.smax);
  const double residual = acwave::spectral::mode_ode_residual(profile);

  ConfigEcho echo;
  echo.add("command", "mode");
  echo.add("kappa", opts.kappa);
  if (opts.n >= 0) echo.add("n", opts.n);
  echo.add("mu", spec.mu);
  echo.add("xi", opts.xi);
  echo.add("smax", opts.smax);
  echo.add("format", opts.common.format);
  echo.add("threads", opts.common.threads);
  echo.add("ode_residual", residual);
  echo.add("contamination_bound", profile.contamination_bound);

  const auto dir = resolve_dir(opts.common);
  if (opts.common.want_csv()) {
    const auto csv_file = dir / "mode_profile.csv";
    auto os = open_output(csv_file);
    echo.write_header(os);
    os << "s,B,dB,d2B\n";
    for (std::size_t i = 0; i < profile.s_grid.size(); ++i)
      os << fnum(profile.s_grid[i]) << ',' << fnum(profile.B[i]) << ','
         << fnum(profile.dB[i]) << ',' << fnum(profile.d2B[i]) << '\n';
    finish_output(os, csv_file);
    report_written(csv_file);
  }
  if (opts.common.want_json()) {
    nlohmann::json doc;
    doc["schema_version"] = kSchemaVersion;
    doc["report"] = "mode_profile";
    doc["config"] = echo.as_json();
    doc["ode_residual"] = residual;
    doc["contamination_bound"] = profile.contamination_bound;
    doc["truncation_s_max"] = profile.truncation_s_max;
    doc["nodes"] = profile.s_grid.size();
    const auto json_file = dir / "mode_profile.json";
    auto js = open_output(json_file);
    js << doc.dump(2) << '\n';
    finish_output(js, json_file);
    report_written(json_file);
  }
}

// ---------------------------------------------------------------------------
// packet
// ---------------------------------------------------------------------------

struct PacketOpts {
  CommonOpts common;
  int j = 0;
  int d = 2;
  double kappa = 1.0;
  double epsilon = 0.1;
  double smax = 4.0;
  double t = 0.0;
};

void run_packet(const PacketOpts& opts) {
  acwave::synthesis::PacketSpec spec;
  spec.j = opts.j;
  spec.d = opts.d;
  spec.kappa = opts.kappa;
  spec.window.epsilon = opts.epsilon;
  spec.s_max = opts.smax;
  spec.validate();
  if (!std::isfinite(opts.t))
    throw ValidationError("t must be a finite real");

  const auto grid = acwave::synthesis::packet_grid(opts.j, opts.d, spec.window);
  const auto xg =
      acwave::synthesis::packet_normal_grid(opts.j, opts.d, opts.smax);
  acwave::synthesis::Field field =
      acwave::synthesis::wave_packet(spec, opts.t, grid, xg);

  ConfigEcho echo;
  echo.add("command", "packet");
  echo.add("j", opts.j);
  echo.add("d", opts.d);
  echo.add("kappa", opts.kappa);
  echo.add("epsilon", opts.epsilon);
  echo.add("smax", opts.smax);
  echo.add("t", opts.t);
  echo.add("format", opts.common.format);
  echo.add("threads", opts.common.threads);
  echo.add("box_length", grid.box_length);
  echo.add("points_per_dim", grid.points_per_dim);
  echo.add("slices", static_cast<int>(field.slice_count()));
  echo.add("harmonics", static_cast<int>(field.harmonics.size()));

  const auto dir = resolve_dir(opts.common);
  const auto bin_file = dir / "packet_field.acwf";
  {
    auto os = open_output(bin_file);
    acwave::synthesis::write_field(field, os);
    finish_output(os, bin_file);
    report_written(bin_file);
  }
  if (opts.common.want_csv()) {
    const auto csv_file = dir / "packet_summary.csv";
    auto os = open_output(csv_file);
    echo.write_header(os);
    acwave::synthesis::write_field_summary_csv(field, os);
    finish_output(os, csv_file);
    report_written(csv_file);
  }
  if (opts.common.want_json()) {
    nlohmann::json doc;
    doc["schema_version"] = kSchemaVersion;
    doc["report"] = "packet_summary";
    doc["config"] = echo.as_json();
    doc["profile_residual"] = acwave::synthesis::profile_residual(field);
    doc["roundtrip_error"] = field.roundtrip_error();
    doc["energy_constant"] =
        acwave::synthesis::packet_h_constant(spec, grid, xg);
    const auto json_file = dir / "packet_summary.json";
    auto js = open_output(json_file);
    js << doc.dump(2) << '\n';
    finish_output(js, json_file);
    report_written(json_file);
  }
}

// ---------------------------------------------------------------------------
// dispersive
// ---------------------------------------------------------------------------

struct DispersiveOpts {
  CommonOpts common;
  int d = 2;
  double lambda_min = 0.0;
  double lambda_max = 0.0;
  int points = 6;
  int j = 0;
  double mu = 1.0;
  double epsilon = 0.1;
  double tolerance = 0.05;
};

void run_dispersive(const DispersiveOpts& opts) {
  if (opts.d != 2 && opts.d != 3)
    throw ValidationError("d must be 2 or 3");
  if (!(opts.lambda_min >= 50.0))
    throw ValidationError("lambda-min must be >= 50");
  if (!(opts.lambda_max > opts.lambda_min))
    throw ValidationError("lambda-max must exceed lambda-min");
  if (opts.points < 6)
    throw ValidationError("points must be >= 6 for a stable fit");

  acwave::synthesis::Window window{opts.epsilon};
  window.validate();
  std::vector<double> lambdas(opts.points);
  const double ratio = opts.lambda_max / opts.lambda_min;
  for (int i = 0; i < opts.points; ++i)
    lambdas[i] =
        opts.lambda_min * std::pow(ratio, static_cast<double>(i) /
                                              (opts.points - 1));
  acwave::ScalingFit fit = acwave::dynamics::dispersive_decay_fit(
      opts.j, lambdas, opts.mu, window, opts.d, opts.tolerance);

  ConfigEcho echo;
  echo.add("command", "dispersive");
  echo.add("d", opts.d);
  echo.add("lambda_min", opts.lambda_min);
  echo.add("lambda_max", opts.lambda_max);
  echo.add("points", opts.points);
  echo.add("j", opts.j);
  echo.add("mu", opts.mu);
  echo.add("epsilon", opts.epsilon);
  echo.add("tolerance", opts.tolerance);
  echo.add("format", opts.common.format);
  echo.add("threads", opts.common.threads);
  echo.add("slope", fit.slope);
  echo.add("std_error", fit.std_error);
  echo.add("predicted_slope", fit.predicted_slope);
  echo.add("pass", fit.pass ? "true" : "false");

  const auto dir = resolve_dir(opts.common);
  if (opts.common.want_csv()) {
    const auto csv_file = dir / "dispersive_fit.csv";
    auto os = open_output(csv_file);
    echo.write_header(os);
    os << "lambda,sup_abs_J,log2_lambda,log2_sup_abs_J\n";
    for (std::size_t i = 0; i < lambdas.size(); ++i)
      os << fnum(lambdas[i]) << ',' << fnum(std::exp2(fit.log2_values[i]))
         << ',' << fnum(fit.xs[i]) << ',' << fnum(fit.log2_values[i]) << '\n';
    finish_output(os, csv_file);
    report_written(csv_file);
  }
  if (opts.common.want_json()) {
    nlohmann::json doc;
    doc["schema_version"] = kSchemaVersion;
    doc["report"] = "dispersive_fit";
    doc["config"] = echo.as_json();
    doc["fit"] = fit_to_json(fit);
    doc["samples"] = nlohmann::json::array();
    for (std::size_t i = 0; i < lambdas.size(); ++i)
      doc["samples"].push_back(
          {{"lambda", lambdas[i]},
           {"sup_abs_J", std::exp2(fit.log2_values[i])}});
    const auto json_file = dir / "dispersive_fit.json";
    auto js = open_output(json_file);
    js << doc.dump(2) << '\n';
    finish_output(js, json_file);
    report_written(json_file);
  }
}

// ---------------------------------------------------------------------------
// ladder / gallery-strichartz
// ---------------------------------------------------------------------------

ConfigEcho config_echo_from(const acwave::experiments::ExperimentConfig& cfg,
                            const CommonOpts& common,
                            const std::string& command,
                            const std::string& source) {
  ConfigEcho echo;
  echo.add("command", command);
  echo.add("config_file", source);
  echo.add("kind", cfg.kind);
  echo.add("d", cfg.d);
  echo.add("kappa", cfg.kappa);
  echo.add("q", cfg.q);
  echo.add("r", cfg.r);
  echo.add("s", cfg.s);
  echo.add("j_min", cfg.j_min);
  echo.add("j_max", cfg.j_max);
  echo.add("epsilon", cfg.epsilon);
  echo.add("s_max", cfg.s_max);
  echo.add("lattice_points", cfg.lattice_points);
  echo.add("mode_n", cfg.mode_n);
  echo.add("time_samples", cfg.time_samples);
  echo.add("tolerance", cfg.tolerance);
  echo.add("format", common.format);
  echo.add("threads", common.threads);
  return echo;
}

void write_ladder_outputs(const std::string& verdict, const std::string& csv,
                          const ConfigEcho& echo, const CommonOpts& common,
                          const std::string& stem) {
  const auto dir = resolve_dir(common);
  // The verdict is the point of the run; it is written regardless of format.
  nlohmann::json doc = nlohmann::json::parse(verdict);
  doc["config"] = echo.as_json();
  const auto json_file = dir / (stem + "_verdict.json");
  auto js = open_output(json_file);
  js << doc.dump(2) << '\n';
  finish_output(js, json_file);
  report_written(json_file);

  if (common.want_csv()) {
    const auto csv_file = dir / (stem + "_norms.csv");
    auto os = open_output(csv_file);
    echo.write_header(os);
    os << csv;
    finish_output(os, csv_file);
    report_written(csv_file);
  }
}

void run_experiment(const acwave::experiments::ExperimentConfig& cfg,
                    const CommonOpts& common, const std::string& source,
                    const std::string& stem) {
  using namespace acwave::experiments;
  ConfigEcho echo = config_echo_from(
      cfg, common, stem == "gallery" ? "gallery-strichartz" : "ladder", source);
  if (cfg.kind == "gallery") {
    auto rep = gallery_strichartz_ladder(
        cfg.mode_n, cfg.kappa, cfg.d, cfg.q, cfg.r, cfg.j_min, cfg.j_max,
        cfg.tolerance, cfg.time_samples,
        cfg.lattice_points > 0 ? cfg.lattice_points : 512, cfg.epsilon);
    write_ladder_outputs(verdict_json(rep), ladder_csv(rep), echo, common,
                         stem);
  } else {
    TripleSpec spec = cfg.kind == "wave"
                          ? TripleSpec::wave_triple(cfg.d, cfg.kappa, cfg.q,
                                                    cfg.r)
                          : TripleSpec::euler_triple(cfg.d, cfg.kappa, cfg.q,
                                                     cfg.r);
    auto rep = run_ladder(spec, cfg.j_min, cfg.j_max, cfg.s, cfg.tolerance,
                          cfg.time_samples, cfg.epsilon, cfg.s_max,
                          cfg.lattice_points);
    write_ladder_outputs(verdict_json(rep), ladder_csv(rep), echo, common,
                         stem);
  }
}

struct LadderOpts {
  CommonOpts common;
  std::string config_path;
};

void run_ladder_cmd(const LadderOpts& opts) {
  auto cfg = acwave::experiments::parse_config_file(opts.config_path);
  run_experiment(cfg, opts.common, opts.config_path, "ladder");
}

struct GalleryOpts {
  CommonOpts common;
  int n = 0;
  double kappa = 1.0;
  int d = 2;
  double q = 4.0;
  double r = std::numeric_limits<double>::infinity();
  int j_min = 1;
  int j_max = 3;
  double tolerance = 0.1;
  int time_samples = 0;
  int lattice_points = 512;
  double epsilon = 0.1;
};

void run_gallery(const GalleryOpts& opts) {
  acwave::experiments::ExperimentConfig cfg;
  cfg.kind = "gallery";
  cfg.d = opts.d;
  cfg.kappa = opts.kappa;
  cfg.q = opts.q;
  cfg.r = opts.r;
  cfg.j_min = opts.j_min;
  cfg.j_max = opts.j_max;
  cfg.epsilon = opts.epsilon;
  cfg.lattice_points = opts.lattice_points;
  cfg.mode_n = opts.n;
  cfg.time_samples = opts.time_samples;
  cfg.tolerance = opts.tolerance;
  cfg.validate();
  run_experiment(cfg, opts.common, "(command line)", "gallery");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "degenerate half-space wave pipelines: rays, gallery modes, dyadic "
      "packets, dispersive decay, and scaling ladders"};
  app.require_subcommand(1);

  TraceRayOpts ray;
  auto* cmd_ray = app.add_subcommand(
      "trace-ray", "trace a multiply reflecting bicharacteristic");
  cmd_ray->add_option("--kappa", ray.kappa, "degeneracy parameter")
      ->required();
  cmd_ray->add_option("--xd0", ray.xd0, "initial normal coordinate")
      ->required();
  cmd_ray->add_option("--xip", ray.xip,
                      "initial tangential frequency components (1 or 2)")
      ->required()
      ->expected(1, 2);
  cmd_ray->add_option("--xid0", ray.xid0, "initial normal frequency");
  cmd_ray->add_option("--tau0", ray.tau0, "dual of time")->required();
  cmd_ray->add_option("--t0", ray.t0, "initial time");
  cmd_ray->add_option("--xp0", ray.xp0,
                      "initial tangential coordinates (default 0)")
      ->expected(1, 2);
  cmd_ray->add_option("--reflections", ray.reflections,
                      "boundary collisions to continue through");
  cmd_ray->add_option("--samples", ray.samples, "path samples in the CSV")
      ->capture_default_str();
  add_common(cmd_ray, ray.common);
  cmd_ray->callback([&ray] { run_trace_ray(ray); });

  ModeOpts mode;
  auto* cmd_mode = app.add_subcommand(
      "mode", "evaluate a boundary-trapped mode profile");
  cmd_mode->add_option("--kappa", mode.kappa, "degeneracy parameter")
      ->required();
  cmd_mode->add_option("--n", mode.n, "quantum number (mu = 2 kappa n + 1)");
  cmd_mode->add_option("--mu", mode.mu, "mode parameter (non-quantized)");
  cmd_mode->add_option("--smax", mode.smax, "truncation in the scaled variable")
      ->capture_default_str();
  cmd_mode->add_option("--xi", mode.xi, "tangential frequency norm")
      ->capture_default_str();
  add_common(cmd_mode, mode.common);
  cmd_mode->callback([&mode] { run_mode(mode); });

  PacketOpts packet;
  auto* cmd_packet = app.add_subcommand(
      "packet", "synthesize a dyadic wave packet on the canonical grids");
  cmd_packet->add_option("--j", packet.j, "dyadic scale (annulus 2^{2j})")
      ->required();
  cmd_packet->add_option("--d", packet.d, "ambient dimension")
      ->capture_default_str();
  cmd_packet->add_option("--kappa", packet.kappa, "degeneracy parameter")
      ->required();
  cmd_packet->add_option("--epsilon", packet.epsilon, "window half-width")
      ->capture_default_str();
  cmd_packet->add_option("--smax", packet.smax,
                         "normal truncation (scaled variable)")
      ->capture_default_str();
  cmd_packet->add_option("--t", packet.t, "evaluation time")
      ->capture_default_str();
  add_common(cmd_packet, packet.common);
  cmd_packet->callback([&packet] { run_packet(packet); });

  DispersiveOpts dispersive;
  auto* cmd_disp = app.add_subcommand(
      "dispersive", "fit the oscillatory-integral sup decay in lambda");
  cmd_disp->add_option("--d", dispersive.d, "ambient dimension")->required();
  cmd_disp->add_option("--lambda-min", dispersive.lambda_min,
                       "smallest lambda (>= 50)")
      ->required();
  cmd_disp->add_option("--lambda-max", dispersive.lambda_max,
                       "largest lambda")
      ->required();
  cmd_disp->add_option("--points", dispersive.points, "ladder size (>= 6)")
      ->capture_default_str();
  cmd_disp->add_option("--j", dispersive.j, "dyadic scale")
      ->capture_default_str();
  cmd_disp->add_option("--mu", dispersive.mu, "dispersion parameter")
      ->capture_default_str();
  cmd_disp->add_option("--epsilon", dispersive.epsilon, "window half-width")
      ->capture_default_str();
  cmd_disp->add_option("--tolerance", dispersive.tolerance,
                       "slope pass band")
      ->capture_default_str();
  add_common(cmd_disp, dispersive.common);
  cmd_disp->callback([&dispersive] { run_dispersive(dispersive); });

  LadderOpts ladder;
  auto* cmd_ladder = app.add_subcommand(
      "ladder", "run a scaling-ladder experiment from a config file");
  cmd_ladder->add_option("--config", ladder.config_path,
                         "key=value experiment configuration")
      ->required();
  add_common(cmd_ladder, ladder.common);
  cmd_ladder->callback([&ladder] { run_ladder_cmd(ladder); });

  GalleryOpts gallery;
  auto* cmd_gallery = app.add_subcommand(
      "gallery-strichartz", "evolved gallery-mode mixed-norm ladder");
  cmd_gallery->add_option("--n", gallery.n, "mode quantum number")
      ->capture_default_str();
  cmd_gallery->add_option("--kappa", gallery.kappa, "degeneracy parameter")
      ->required();
  cmd_gallery->add_option("--d", gallery.d, "ambient dimension")
      ->capture_default_str();
  cmd_gallery->add_option("--q", gallery.q, "time exponent (inf allowed)")
      ->capture_default_str();
  cmd_gallery->add_option("--r", gallery.r, "space exponent (inf allowed)")
      ->capture_default_str();
  cmd_gallery->add_option("--j-min", gallery.j_min, "first rung")
      ->capture_default_str();
  cmd_gallery->add_option("--j-max", gallery.j_max, "last rung")
      ->capture_default_str();
  cmd_gallery->add_option("--tolerance", gallery.tolerance, "slope pass band")
      ->capture_default_str();
  cmd_gallery->add_option("--samples", gallery.time_samples,
                          "time samples per rung (0 = default)");
  cmd_gallery->add_option("--lattice", gallery.lattice_points,
                          "lattice points per dimension")
      ->capture_default_str();
  cmd_gallery->add_option("--epsilon", gallery.epsilon, "window half-width")
      ->capture_default_str();
  add_common(cmd_gallery, gallery.common);
  cmd_gallery->callback([&gallery] { run_gallery(gallery); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const NumericalError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 4;
  }
  return 0;
}
