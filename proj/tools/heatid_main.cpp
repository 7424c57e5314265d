// Command-line surface over the library: trace simulation, closed-form
// prediction, matrix/delta/graph sweeps, empirical comparison, and
// calibration. Every file-producing command writes a replayable manifest
// beside its outputs. Exit codes: 0 ok, 1 runtime failure, 2 usage.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "heatid/classifier.hpp"
#include "heatid/errors.hpp"
#include "heatid/fit.hpp"
#include "heatid/manifest.hpp"
#include "heatid/materials.hpp"
#include "heatid/model.hpp"
#include "heatid/thermal.hpp"
#include "heatid/trace_io.hpp"
#include "heatid/version.hpp"

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

// Flag combinations CLI11 cannot express; reported as usage (exit 2).
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct CommonFlags {
  heatid::SensorParams sensor;
  heatid::ContactConditions cond;
  double sigma = 0.05;
};

void add_sensor_options(CLI::App* cmd, CommonFlags& flags) {
  cmd->add_option("--esens", flags.sensor.e_sens, "Sensor thermal effusivity")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  cmd->add_option("--alpha", flags.sensor.alpha_sens, "Sensor thermal diffusivity, m^2/s")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  cmd->add_option("--depth", flags.sensor.thermistor_depth, "Thermistor depth, m")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  cmd->add_option("--rate", flags.sensor.sample_rate, "Sampling rate, Hz")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  cmd->add_option("--sigma", flags.sigma, "Temperature noise level, degC")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
}

void add_condition_options(CLI::App* cmd, CommonFlags& flags) {
  cmd->add_option("--tsens0", flags.cond.t_sens0, "Initial sensor temperature, degC")
      ->capture_default_str();
  cmd->add_option("--tamb", flags.cond.t_obj0, "Ambient / object temperature, degC")
      ->capture_default_str();
  cmd->add_option("--duration", flags.cond.t_contact, "Contact duration, s")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
}

json common_parameters(const CommonFlags& flags) {
  return {{"e_sens", flags.sensor.e_sens},
          {"alpha_sens", flags.sensor.alpha_sens},
          {"thermistor_depth", flags.sensor.thermistor_depth},
          {"sample_rate", flags.sensor.sample_rate},
          {"sigma", flags.sigma},
          {"t_sens0", flags.cond.t_sens0},
          {"t_obj0", flags.cond.t_obj0},
          {"t_contact", flags.cond.t_contact}};
}

fs::path ensure_out_dir(const std::string& out) {
  if (out.empty())
    throw UsageError("no output directory: pass --out or set HEATID_OUT");
  fs::path dir(out);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) throw heatid::IoError("cannot create directory: " + out);
  return dir;
}

void check_grid_flags(int intervals, double e_min, double e_max) {
  if (intervals < 2) throw UsageError("--intervals must be >= 2");
  if (e_min < 0.0 || !(e_min < e_max)) throw UsageError("grid bounds need 0 <= emin < emax");
}

void check_phi_flag(double phi) {
  if (!(phi > 0.5) || !(phi < 1.0)) throw UsageError("--phi must lie in (0.5, 1)");
}

heatid::MaterialDatabase open_database(const std::string& spec) {
  if (spec == "builtin") return heatid::builtin_table();
  return heatid::load_database(spec);
}

void report_warnings(const heatid::MaterialDatabase& db) {
  for (const auto& w : db.warnings) std::cerr << "warning: " << w << '\n';
}

json fit_result_json(const heatid::FitResult& result, std::size_t n_traces) {
  json j;
  j["e_obj"] = result.e_obj;
  j["t_offset"] = result.t_offset;
  if (result.e_sens) j["e_sens"] = *result.e_sens;
  if (result.alpha_sens) j["alpha_sens"] = *result.alpha_sens;
  j["sse"] = result.sse;
  j["converged"] = result.converged;
  j["iterations"] = result.iterations;
  j["bound_active"] = result.bound_active;
  j["n_traces"] = n_traces;
  return j;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw heatid::IoError("cannot write: " + path.string());
  out << text;
  if (!out) throw heatid::IoError("write failed: " + path.string());
}

int run_cli(const std::vector<std::string>& args);

// ---- simulate ----

struct SimulateFlags {
  CommonFlags common;
  double effusivity = 0.0;
  std::string material;
  std::string db = "builtin";
  int trials = 1;
  std::uint64_t seed = 0;
  std::string out;
};

void cmd_simulate(const SimulateFlags& flags, bool have_effusivity,
                  const std::vector<std::string>& argv) {
  const fs::path dir = ensure_out_dir(flags.out);
  if (flags.trials < 1) throw UsageError("--trials must be >= 1");

  double effusivity = flags.effusivity;
  std::string name;
  if (!have_effusivity) {
    const auto db = open_database(flags.db);
    report_warnings(db);
    const auto& rec = db.find(flags.material);
    effusivity = rec.representative_effusivity();
    name = rec.name;
  }

  heatid::SensorParams sensor = flags.common.sensor;
  sensor.noise_sigma = flags.common.sigma;
  for (int k = 0; k < flags.trials; ++k) {
    auto trace = heatid::generate_trace(sensor, {effusivity}, flags.common.cond,
                                        heatid::derive_seed(flags.seed, 0, k));
    trace.meta.material_name = name;
    char base[32];
    std::snprintf(base, sizeof(base), "trace_%03d", k);
    heatid::write_trace(dir / base, trace);
  }

  json params = common_parameters(flags.common);
  params["effusivity"] = effusivity;
  params["material"] = name;
  params["db"] = flags.db;
  params["trials"] = flags.trials;
  params["out"] = flags.out;
  heatid::write_manifest(dir / "manifest.json",
                         heatid::make_manifest("simulate", params, flags.seed, argv));
}

// ---- predict ----

struct PredictFlags {
  CommonFlags common;
  double e1 = 0.0;
  double e2 = 0.0;
  std::string out;
};

void cmd_predict(const PredictFlags& flags, const std::vector<std::string>& argv) {
  const auto& c = flags.common;
  const double lambda = heatid::noncentrality_lambda(c.sensor, flags.e1, flags.e2, c.cond, c.sigma);
  const double f1 = heatid::f1_pair(c.sensor, flags.e1, flags.e2, c.cond, c.sigma);
  const auto n = static_cast<long>(std::floor(c.cond.t_contact * c.sensor.sample_rate));

  json out;
  out["f1"] = f1;
  out["lambda"] = lambda;
  out["t_surf1"] = heatid::surface_temperature(c.sensor, {flags.e1}, c.cond);
  out["t_surf2"] = heatid::surface_temperature(c.sensor, {flags.e2}, c.cond);
  out["n"] = n;
  std::cout << out.dump(2) << '\n';

  if (!flags.out.empty()) {
    const fs::path dir = ensure_out_dir(flags.out);
    write_text(dir / "prediction.json", out.dump(2) + "\n");
    json params = common_parameters(flags.common);
    params["e1"] = flags.e1;
    params["e2"] = flags.e2;
    params["out"] = flags.out;
    heatid::write_manifest(dir / "manifest.json",
                           heatid::make_manifest("predict", params, 0, argv));
  }
}

// ---- matrix ----

struct MatrixFlags {
  CommonFlags common;
  int intervals = 500;
  double e_min = 0.0;
  double e_max = heatid::kMaxPhysicalEffusivity;
  int threads = 0;
  std::string out;
};

void cmd_matrix(const MatrixFlags& flags, const std::vector<std::string>& argv) {
  check_grid_flags(flags.intervals, flags.e_min, flags.e_max);
  const fs::path dir = ensure_out_dir(flags.out);
  const heatid::EffusivityGrid grid{flags.e_min, flags.e_max, flags.intervals};
  const auto m = heatid::f1_matrix(flags.common.sensor, grid, flags.common.cond,
                                   flags.common.sigma, flags.threads);
  heatid::write_matrix(dir / "matrix", m);

  json params = common_parameters(flags.common);
  params["intervals"] = flags.intervals;
  params["emin"] = flags.e_min;
  params["emax"] = flags.e_max;
  params["threads"] = flags.threads;
  params["out"] = flags.out;
  heatid::write_manifest(dir / "manifest.json",
                         heatid::make_manifest("matrix", params, 0, argv));
}

// ---- delta ----

struct DeltaFlags {
  CommonFlags common;
  int intervals = 500;
  double e_min = 0.0;
  double e_max = heatid::kMaxPhysicalEffusivity;
  double phi = 0.9;
  std::string out;
};

void cmd_delta(const DeltaFlags& flags, const std::vector<std::string>& argv) {
  check_grid_flags(flags.intervals, flags.e_min, flags.e_max);
  check_phi_flag(flags.phi);
  const fs::path dir = ensure_out_dir(flags.out);
  const heatid::EffusivityGrid grid{flags.e_min, flags.e_max, flags.intervals};
  grid.validate();

  std::ostringstream csv;
  csv << "e,delta,distinguishable\n";
  char buf[96];
  for (int i = 0; i < grid.n_intervals; ++i) {
    const double e = grid.midpoint(i);
    const auto res = heatid::min_distinguishable_difference(flags.common.sensor, e,
                                                            flags.common.cond, flags.common.sigma,
                                                            flags.phi, grid.width());
    if (res.indistinguishable_everywhere)
      std::snprintf(buf, sizeof(buf), "%.17g,NA,0\n", e);
    else
      std::snprintf(buf, sizeof(buf), "%.17g,%.17g,1\n", e, res.delta);
    csv << buf;
  }
  write_text(dir / "delta.csv", csv.str());

  json params = common_parameters(flags.common);
  params["intervals"] = flags.intervals;
  params["emin"] = flags.e_min;
  params["emax"] = flags.e_max;
  params["phi"] = flags.phi;
  params["out"] = flags.out;
  heatid::write_manifest(dir / "manifest.json",
                         heatid::make_manifest("delta", params, 0, argv));
}

// ---- graph ----

struct GraphFlags {
  CommonFlags common;
  std::string db = "builtin";
  int intervals = 500;
  double e_min = 0.0;
  double e_max = heatid::kMaxPhysicalEffusivity;
  double phi = 0.9;
  int threads = 0;
  std::string out;
};

void cmd_graph(const GraphFlags& flags, const std::vector<std::string>& argv) {
  check_grid_flags(flags.intervals, flags.e_min, flags.e_max);
  check_phi_flag(flags.phi);
  const fs::path dir = ensure_out_dir(flags.out);
  const auto db = open_database(flags.db);
  report_warnings(db);
  const heatid::EffusivityGrid grid{flags.e_min, flags.e_max, flags.intervals};
  const auto m = heatid::f1_matrix(flags.common.sensor, grid, flags.common.cond,
                                   flags.common.sigma, flags.threads);
  const auto graph = heatid::build_node_graph(db, m, flags.phi);
  write_text(dir / "graph.dot", heatid::to_dot(graph));

  json params = common_parameters(flags.common);
  params["db"] = flags.db;
  params["intervals"] = flags.intervals;
  params["emin"] = flags.e_min;
  params["emax"] = flags.e_max;
  params["phi"] = flags.phi;
  params["threads"] = flags.threads;
  params["out"] = flags.out;
  heatid::write_manifest(dir / "manifest.json",
                         heatid::make_manifest("graph", params, 0, argv));
}

// ---- compare ----

struct CompareFlags {
  CommonFlags common;
  int intervals = 50;
  double e_min = 0.0;
  double e_max = heatid::kMaxPhysicalEffusivity;
  int trials = 50;
  double phi = 0.9;
  std::uint64_t seed = 0;
  int threads = 0;
  std::string out;
};

void cmd_compare(const CompareFlags& flags, const std::vector<std::string>& argv) {
  check_grid_flags(flags.intervals, flags.e_min, flags.e_max);
  check_phi_flag(flags.phi);
  if (flags.trials < 3) throw UsageError("--trials must be >= 3 for 3-fold cross-validation");
  const fs::path dir = ensure_out_dir(flags.out);
  const heatid::EffusivityGrid grid{flags.e_min, flags.e_max, flags.intervals};

  const auto model = heatid::f1_matrix(flags.common.sensor, grid, flags.common.cond,
                                       flags.common.sigma, flags.threads);
  const auto empirical =
      heatid::empirical_matrix(flags.common.sensor, grid, flags.common.cond, flags.common.sigma,
                               flags.trials, flags.seed, flags.threads);
  heatid::write_matrix(dir / "model_matrix", model);
  heatid::write_matrix(dir / "empirical_matrix", empirical);

  const double match = heatid::matrix_match(heatid::binary_map(model, flags.phi),
                                            heatid::binary_map(empirical, flags.phi));
  json report;
  report["match_percent"] = match;
  report["phi"] = flags.phi;
  report["n_intervals"] = flags.intervals;
  report["trials_per_interval"] = flags.trials;
  report["sigma"] = flags.common.sigma;
  report["t_sens0"] = flags.common.cond.t_sens0;
  report["t_obj0"] = flags.common.cond.t_obj0;
  report["t_contact"] = flags.common.cond.t_contact;
  report["seed"] = flags.seed;
  write_text(dir / "match_report.json", report.dump(2) + "\n");

  json params = common_parameters(flags.common);
  params["intervals"] = flags.intervals;
  params["emin"] = flags.e_min;
  params["emax"] = flags.e_max;
  params["trials"] = flags.trials;
  params["phi"] = flags.phi;
  params["threads"] = flags.threads;
  params["out"] = flags.out;
  heatid::write_manifest(dir / "manifest.json",
                         heatid::make_manifest("compare", params, flags.seed, argv));
}

// ---- fit ----

struct FitFlags {
  CommonFlags common;
  std::string traces_dir;
  std::vector<double> bounds{30.5, 4.0e4};
  std::vector<double> offset_bounds{-1.0, 1.0};
  bool fit_sensor = false;
  double tol = 1e-10;
  int max_iters = 200;
  std::string out;
};

void cmd_fit(const FitFlags& flags, const std::vector<std::string>& argv) {
  if (flags.bounds.size() != 2 || !(flags.bounds[0] < flags.bounds[1]))
    throw UsageError("--bounds needs lo,hi with lo < hi");
  if (flags.offset_bounds.size() != 2 || !(flags.offset_bounds[0] < flags.offset_bounds[1]))
    throw UsageError("--offset-bounds needs lo,hi with lo < hi");
  if (flags.max_iters < 1) throw UsageError("--max-iters must be >= 1");
  if (!(flags.tol > 0.0)) throw UsageError("--tol must be positive");

  const auto traces = heatid::read_trace_dir(flags.traces_dir);
  if (traces.empty()) throw heatid::IoError("no traces found in " + flags.traces_dir);

  heatid::FitConfig cfg;
  cfg.e_bounds = {flags.bounds[0], flags.bounds[1]};
  cfg.offset_bounds = {flags.offset_bounds[0], flags.offset_bounds[1]};
  cfg.fit_sensor_params = flags.fit_sensor;
  cfg.convergence_tol = flags.tol;
  cfg.max_iters = flags.max_iters;

  const auto result = heatid::fit_material(traces, flags.common.sensor, cfg);
  const json j = fit_result_json(result, traces.size());
  std::cout << j.dump(2) << '\n';

  if (!flags.out.empty()) {
    const fs::path dir = ensure_out_dir(flags.out);
    write_text(dir / "fit.json", j.dump(2) + "\n");
    json params = common_parameters(flags.common);
    params["traces"] = flags.traces_dir;
    params["bounds"] = flags.bounds;
    params["offset_bounds"] = flags.offset_bounds;
    params["fit_sensor"] = flags.fit_sensor;
    params["tol"] = flags.tol;
    params["max_iters"] = flags.max_iters;
    params["out"] = flags.out;
    heatid::write_manifest(dir / "manifest.json", heatid::make_manifest("fit", params, 0, argv));
  }
}

// ---- export-db ----

void cmd_export_db(const std::string& out, const std::vector<std::string>& argv) {
  const fs::path dir = ensure_out_dir(out);
  const auto db = heatid::builtin_table();
  report_warnings(db);
  heatid::save_database(dir / "materials.csv", db);
  json params;
  params["out"] = out;
  heatid::write_manifest(dir / "manifest.json",
                         heatid::make_manifest("export-db", params, 0, argv));
}

// ---- replay ----

int cmd_replay(const std::string& manifest_path) {
  const auto manifest = heatid::read_manifest(manifest_path);
  if (manifest.argv.empty()) throw heatid::ValidationError(manifest_path, "manifest has no argv");
  if (manifest.argv.front() == "replay")
    throw heatid::ValidationError(manifest_path, "refusing to replay a replay");
  if (manifest.tool_version != heatid::kVersion)
    std::cerr << "warning: manifest was written by version " << manifest.tool_version
              << ", this is " << heatid::kVersion << '\n';
  return run_cli(manifest.argv);
}

int run_cli(const std::vector<std::string>& args) {
  CLI::App app{"Closed-form recognition-performance model for heat-transfer tactile sensing"};
  app.require_subcommand(1);
  app.set_version_flag("--version", heatid::kVersion);

  SimulateFlags sim;
  auto* sim_cmd = app.add_subcommand("simulate", "Generate noisy temperature traces");
  add_sensor_options(sim_cmd, sim.common);
  add_condition_options(sim_cmd, sim.common);
  auto* sim_eff = sim_cmd->add_option("--effusivity", sim.effusivity, "Object effusivity")
                      ->check(CLI::PositiveNumber);
  auto* sim_mat = sim_cmd->add_option("--material", sim.material, "Material name from --db");
  sim_eff->excludes(sim_mat);
  sim_cmd->add_option("--db", sim.db, "Material database CSV, or 'builtin'")
      ->capture_default_str();
  sim_cmd->add_option("--trials", sim.trials, "Number of traces")->capture_default_str();
  sim_cmd->add_option("--seed", sim.seed, "Experiment seed")->capture_default_str();
  sim_cmd->add_option("--out", sim.out, "Output directory")->envname("HEATID_OUT");

  PredictFlags pred;
  auto* pred_cmd = app.add_subcommand("predict", "Closed-form F1 for one material pair");
  add_sensor_options(pred_cmd, pred.common);
  add_condition_options(pred_cmd, pred.common);
  pred_cmd->add_option("--e1", pred.e1, "First effusivity")->required()->check(CLI::PositiveNumber);
  pred_cmd->add_option("--e2", pred.e2, "Second effusivity")->required()->check(CLI::PositiveNumber);
  pred_cmd->add_option("--out", pred.out, "Optional output directory")->envname("HEATID_OUT");

  MatrixFlags mat;
  auto* mat_cmd = app.add_subcommand("matrix", "Model F1 matrix over an effusivity grid");
  add_sensor_options(mat_cmd, mat.common);
  add_condition_options(mat_cmd, mat.common);
  mat_cmd->add_option("--intervals", mat.intervals, "Grid intervals")->capture_default_str();
  mat_cmd->add_option("--emin", mat.e_min, "Grid lower bound (exclusive)")->capture_default_str();
  mat_cmd->add_option("--emax", mat.e_max, "Grid upper bound")->capture_default_str();
  mat_cmd->add_option("--threads", mat.threads, "Worker threads (0 = auto)")->capture_default_str();
  mat_cmd->add_option("--out", mat.out, "Output directory")->envname("HEATID_OUT");

  DeltaFlags del;
  auto* del_cmd = app.add_subcommand("delta", "Minimum distinguishable difference curve");
  add_sensor_options(del_cmd, del.common);
  add_condition_options(del_cmd, del.common);
  del_cmd->add_option("--intervals", del.intervals, "Grid intervals")->capture_default_str();
  del_cmd->add_option("--emin", del.e_min, "Grid lower bound (exclusive)")->capture_default_str();
  del_cmd->add_option("--emax", del.e_max, "Grid upper bound")->capture_default_str();
  del_cmd->add_option("--phi", del.phi, "F1 threshold")->capture_default_str();
  del_cmd->add_option("--out", del.out, "Output directory")->envname("HEATID_OUT");

  GraphFlags gr;
  auto* gr_cmd = app.add_subcommand("graph", "Material indistinguishability graph (DOT)");
  add_sensor_options(gr_cmd, gr.common);
  add_condition_options(gr_cmd, gr.common);
  gr_cmd->add_option("--db", gr.db, "Material database CSV, or 'builtin'")->capture_default_str();
  gr_cmd->add_option("--intervals", gr.intervals, "Grid intervals")->capture_default_str();
  gr_cmd->add_option("--emin", gr.e_min, "Grid lower bound (exclusive)")->capture_default_str();
  gr_cmd->add_option("--emax", gr.e_max, "Grid upper bound")->capture_default_str();
  gr_cmd->add_option("--phi", gr.phi, "F1 threshold")->capture_default_str();
  gr_cmd->add_option("--threads", gr.threads, "Worker threads (0 = auto)")->capture_default_str();
  gr_cmd->add_option("--out", gr.out, "Output directory")->envname("HEATID_OUT");

  CompareFlags cmp;
  auto* cmp_cmd = app.add_subcommand("compare", "Empirical classifier vs model binary map");
  add_sensor_options(cmp_cmd, cmp.common);
  add_condition_options(cmp_cmd, cmp.common);
  cmp_cmd->add_option("--intervals", cmp.intervals, "Grid intervals")->capture_default_str();
  cmp_cmd->add_option("--emin", cmp.e_min, "Grid lower bound (exclusive)")->capture_default_str();
  cmp_cmd->add_option("--emax", cmp.e_max, "Grid upper bound")->capture_default_str();
  cmp_cmd->add_option("--trials", cmp.trials, "Trials per interval")->capture_default_str();
  cmp_cmd->add_option("--phi", cmp.phi, "F1 threshold")->capture_default_str();
  cmp_cmd->add_option("--seed", cmp.seed, "Experiment seed")->capture_default_str();
  cmp_cmd->add_option("--threads", cmp.threads, "Worker threads (0 = auto)")->capture_default_str();
  cmp_cmd->add_option("--out", cmp.out, "Output directory")->envname("HEATID_OUT");

  FitFlags fit;
  auto* fit_cmd = app.add_subcommand("fit", "Calibrate effusivity and time offset from traces");
  add_sensor_options(fit_cmd, fit.common);
  fit_cmd->add_option("--traces", fit.traces_dir, "Directory of trace CSV/JSON pairs")->required();
  fit_cmd->add_option("--bounds", fit.bounds, "Effusivity bounds lo,hi")
      ->delimiter(',')
      ->expected(1, 2)
      ->capture_default_str();
  fit_cmd->add_option("--offset-bounds", fit.offset_bounds, "Time offset bounds lo,hi (s)")
      ->delimiter(',')
      ->expected(1, 2)
      ->capture_default_str();
  fit_cmd->add_flag("--fit-sensor", fit.fit_sensor, "Also fit e_sens and alpha_sens");
  fit_cmd->add_option("--tol", fit.tol, "Relative SSE convergence tolerance")
      ->capture_default_str();
  fit_cmd->add_option("--max-iters", fit.max_iters, "Iteration cap per start")
      ->capture_default_str();
  fit_cmd->add_option("--out", fit.out, "Optional output directory")->envname("HEATID_OUT");

  std::string export_out;
  auto* exp_cmd = app.add_subcommand("export-db", "Write the built-in material table as CSV");
  exp_cmd->add_option("--out", export_out, "Output directory")->envname("HEATID_OUT");

  std::string replay_manifest;
  auto* rep_cmd = app.add_subcommand("replay", "Re-run a recorded manifest");
  rep_cmd->add_option("manifest", replay_manifest, "Path to manifest.json")->required();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (sim_cmd->parsed()) {
      if (sim_eff->count() == 0 && sim_mat->count() == 0)
        throw UsageError("simulate needs --effusivity or --material");
      cmd_simulate(sim, sim_eff->count() > 0, args);
    } else if (pred_cmd->parsed()) {
      cmd_predict(pred, args);
    } else if (mat_cmd->parsed()) {
      cmd_matrix(mat, args);
    } else if (del_cmd->parsed()) {
      cmd_delta(del, args);
    } else if (gr_cmd->parsed()) {
      cmd_graph(gr, args);
    } else if (cmp_cmd->parsed()) {
      cmd_compare(cmp, args);
    } else if (fit_cmd->parsed()) {
      cmd_fit(fit, args);
    } else if (exp_cmd->parsed()) {
      cmd_export_db(export_out, args);
    } else if (rep_cmd->parsed()) {
      return cmd_replay(replay_manifest);
    }
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const heatid::FitNonConvergence& e) {
    std::cerr << "error: " << e.what() << " (best SSE " << e.best.sse << ")\n";
    return 1;
  } catch (const heatid::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  std::vector<std::string> args;
  args.reserve(static_cast<std::size_t>(argc > 1 ? argc - 1 : 0));
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run_cli(args);
}
