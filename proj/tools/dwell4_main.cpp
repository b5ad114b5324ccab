// Command-line front end over the dwell4 C API: coefficient computation,
// simulation, fixed-point tables and scans, regime maps, phase portraits,
// and Poincare sections. Configuration comes from an optional JSON file
// plus flag overrides (flags win); identical configurations produce
// byte-identical outputs.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "dwell4.h"

using nlohmann::json;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitNumeric = 3;

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

[[noreturn]] void config_fail(const std::string &msg) { throw ConfigError(msg); }

std::string fnv1a_hex(const std::string &bytes) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  char buf[24];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

int report_status(dw4_status st) {
  json err = {{"error",
               {{"code", static_cast<int>(st)}, {"message", dw4_last_error()}}}};
  std::cerr << err.dump() << "\n";
  return st == DW4_ERR_INVALID_ARGUMENT ? kExitConfig : kExitNumeric;
}

void write_file(const std::string &path, const std::string &content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  if (target.has_parent_path()) {
    std::error_code ec;
    fs::create_directories(target.parent_path(), ec);
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) config_fail("cannot open output file: " + path);
  out.write(content.data(), std::streamsize(content.size()));
}

void write_manifest_file(const std::string &path, const json &resolved) {
  const std::string config_text = resolved.dump(2);
  json doc;
  doc["config"] = resolved;
  doc["config_hash"] = fnv1a_hex(config_text);
  doc["version"] = dw4_version();
  write_file(path, doc.dump(2) + "\n");
}

void ensure_keys(const json &obj, const std::string &ctx, const std::set<std::string> &allowed) {
  if (!obj.is_object()) config_fail("config section '" + ctx + "' must be an object");
  for (const auto &item : obj.items()) {
    if (allowed.find(item.key()) == allowed.end())
      config_fail("unknown key '" + item.key() + "' in config section '" + ctx + "'");
  }
}

json load_config(const std::string &path) {
  std::ifstream in(path);
  if (!in) config_fail("cannot read config file: " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error &ex) {
    config_fail(std::string("config parse error: ") + ex.what());
  }
}

double num_at(const json &obj, const char *key, double fallback) {
  if (!obj.contains(key)) return fallback;
  if (!obj[key].is_number()) config_fail(std::string("config key '") + key + "' must be a number");
  return obj[key].get<double>();
}

int int_at(const json &obj, const char *key, int fallback) {
  if (!obj.contains(key)) return fallback;
  if (!obj[key].is_number_integer())
    config_fail(std::string("config key '") + key + "' must be an integer");
  return obj[key].get<int>();
}

std::string str_at(const json &obj, const char *key, const std::string &fallback) {
  if (!obj.contains(key)) return fallback;
  if (!obj[key].is_string()) config_fail(std::string("config key '") + key + "' must be a string");
  return obj[key].get<std::string>();
}

int var_index(const std::string &name) {
  if (name == "z0") return DW4_VAR_Z0;
  if (name == "theta0") return DW4_VAR_THETA0;
  if (name == "z1") return DW4_VAR_Z1;
  if (name == "theta1") return DW4_VAR_THETA1;
  if (name == "z2") return DW4_VAR_Z2;
  if (name == "theta2") return DW4_VAR_THETA2;
  config_fail("unknown variable name: " + name);
}

const char *regime_name(int r) {
  switch (r) {
    case DW4_REGIME_RABI: return "rabi";
    case DW4_REGIME_MIXED: return "mixed";
    case DW4_REGIME_JOSEPHSON: return "josephson";
    case DW4_REGIME_FOCK: return "fock";
    default: return "invalid";
  }
}

const char *validity_name(int v) {
  switch (v) {
    case DW4_VALIDITY_VALIDATED: return "validated";
    case DW4_VALIDITY_MARGINAL: return "marginal";
    default: return "invalid";
  }
}

const char *termination_name(int t) {
  switch (t) {
    case DW4_TERMINATION_COMPLETED: return "completed";
    case DW4_TERMINATION_BOUNDARY_HIT: return "boundary-hit";
    default: return "step-failure";
  }
}

// ---- shared option blocks -------------------------------------------------

struct SolverArgs {
  std::optional<double> v0;
  std::optional<double> halfwidth;
  std::optional<int> grid_points;
  std::optional<std::string> cache;

  void attach(CLI::App *cmd) {
    cmd->add_option("--v0", v0, "Barrier height in recoil units");
    cmd->add_option("--halfwidth", halfwidth, "Box half-width (wells at z = ±1/2)");
    cmd->add_option("--grid-points", grid_points, "Interior grid points of the eigensolver");
    cmd->add_option("--cache", cache, "Coefficient cache file (DWELL4_CACHE overrides)");
  }

  // Resolve against the config "solver" block; flags win, env wins for cache.
  dw4_solver_options resolve(const json &cfg, std::string &cache_storage, json &resolved) const {
    json block = cfg.value("solver", json::object());
    ensure_keys(block, "solver", {"v0", "domain_halfwidth", "grid_points", "cache_path"});
    dw4_solver_options opts{};
    opts.v0 = v0 ? *v0 : num_at(block, "v0", 0.0);
    if (!(opts.v0 > 0.0)) config_fail("a positive --v0 is required");
    opts.domain_halfwidth = halfwidth ? *halfwidth : num_at(block, "domain_halfwidth", 1.5);
    opts.grid_points = grid_points ? *grid_points : int_at(block, "grid_points", 2048);
    cache_storage = cache ? *cache : str_at(block, "cache_path", "");
    if (const char *env = std::getenv("DWELL4_CACHE")) cache_storage = env;
    opts.cache_path = cache_storage.c_str();
    resolved["solver"] = {{"v0", opts.v0},
                          {"domain_halfwidth", opts.domain_halfwidth},
                          {"grid_points", opts.grid_points},
                          {"cache_path", cache_storage}};
    return opts;
  }
};

struct IntegratorArgs {
  std::optional<double> rel_tol, abs_tol, max_step, t_end, sample_interval, fixed_step;
  std::optional<std::string> model, scheme;

  void attach(CLI::App *cmd) {
    cmd->add_option("--rel-tol", rel_tol, "Relative tolerance (default 1e-10)");
    cmd->add_option("--abs-tol", abs_tol, "Absolute tolerance (default 1e-12)");
    cmd->add_option("--max-step", max_step, "Maximum step size (default unlimited)");
    cmd->add_option("--t-end", t_end, "Integration horizon (default 50 slow periods)");
    cmd->add_option("--sample-interval", sample_interval, "Output sampling interval");
    cmd->add_option("--fixed-step", fixed_step, "Step size for the fixed-step scheme");
    cmd->add_option("--model", model, "full | averaged | two-mode");
    cmd->add_option("--scheme", scheme, "dopri54 | rkf78");
  }

  dw4_integrator_options resolve(const json &cfg, json &resolved) const {
    json block = cfg.value("integrator", json::object());
    ensure_keys(block, "integrator",
                {"rel_tol", "abs_tol", "max_step", "t_end", "sample_interval", "model", "scheme",
                 "fixed_step"});
    dw4_integrator_options opts{};
    opts.rel_tol = rel_tol ? *rel_tol : num_at(block, "rel_tol", 0.0);
    opts.abs_tol = abs_tol ? *abs_tol : num_at(block, "abs_tol", 0.0);
    opts.max_step = max_step ? *max_step : num_at(block, "max_step", 0.0);
    opts.t_end = t_end ? *t_end : num_at(block, "t_end", 0.0);
    opts.sample_interval =
        sample_interval ? *sample_interval : num_at(block, "sample_interval", 0.0);
    opts.fixed_step = fixed_step ? *fixed_step : num_at(block, "fixed_step", 0.0);
    const std::string model_name = model ? *model : str_at(block, "model", "full");
    if (model_name == "full") opts.model = DW4_MODEL_FULL;
    else if (model_name == "averaged") opts.model = DW4_MODEL_AVERAGED;
    else if (model_name == "two-mode") opts.model = DW4_MODEL_TWO_MODE;
    else config_fail("unknown model: " + model_name);
    const std::string scheme_name = scheme ? *scheme : str_at(block, "scheme", "dopri54");
    if (scheme_name == "dopri54") opts.scheme = DW4_SCHEME_DOPRI54;
    else if (scheme_name == "rkf78") opts.scheme = DW4_SCHEME_RKF78_FIXED;
    else config_fail("unknown scheme: " + scheme_name);
    resolved["integrator"] = {{"rel_tol", opts.rel_tol},
                              {"abs_tol", opts.abs_tol},
                              {"max_step", opts.max_step},
                              {"t_end", opts.t_end},
                              {"sample_interval", opts.sample_interval},
                              {"fixed_step", opts.fixed_step},
                              {"model", model_name},
                              {"scheme", scheme_name}};
    return opts;
  }
};

struct InitialArgs {
  std::optional<double> z0, theta0, z1, theta1, z2, theta2;

  void attach(CLI::App *cmd) {
    cmd->add_option("--z0", z0, "Initial ground-level imbalance");
    cmd->add_option("--theta0", theta0, "Initial ground-level phase");
    cmd->add_option("--z1", z1, "Initial excited-level imbalance");
    cmd->add_option("--theta1", theta1, "Initial excited-level phase");
    cmd->add_option("--z2", z2, "Initial ground-minus-excited imbalance");
    cmd->add_option("--theta2", theta2, "Initial inter-level phase");
  }

  dw4_state resolve(const json &cfg, json &resolved) const {
    json block = cfg.value("initial", json::object());
    ensure_keys(block, "initial", {"z0", "theta0", "z1", "theta1", "z2", "theta2"});
    dw4_state s{};
    s.z0 = z0 ? *z0 : num_at(block, "z0", 0.0);
    s.theta0 = theta0 ? *theta0 : num_at(block, "theta0", 0.0);
    s.z1 = z1 ? *z1 : num_at(block, "z1", 0.0);
    s.theta1 = theta1 ? *theta1 : num_at(block, "theta1", 0.0);
    s.z2 = z2 ? *z2 : num_at(block, "z2", 0.0);
    s.theta2 = theta2 ? *theta2 : num_at(block, "theta2", 0.0);
    resolved["initial"] = {{"z0", s.z0},   {"theta0", s.theta0}, {"z1", s.z1},
                           {"theta1", s.theta1}, {"z2", s.z2},   {"theta2", s.theta2}};
    return s;
  }
};

double resolve_gamma(const std::optional<double> &flag, const json &cfg, json &resolved) {
  const double gamma = flag ? *flag : num_at(cfg, "gamma", 0.0);
  if (gamma < 0.0) config_fail("gamma must be non-negative");
  resolved["gamma"] = gamma;
  return gamma;
}

json params_json(const dw4_params &p) {
  return {{"e0", p.e0},   {"e1", p.e1},   {"j0", p.j0},     {"j1", p.j1},
          {"nu0", p.nu0}, {"nu1", p.nu1}, {"nu01", p.nu01}, {"delta_e", p.delta_e}};
}

// ---- subcommands ----------------------------------------------------------

struct CoefficientsCmd {
  SolverArgs solver;
  std::optional<double> gamma;
  double n_atoms = 0.0;
  std::string config_path, out_path;

  int run() {
    json cfg = config_path.empty() ? json::object() : load_config(config_path);
    ensure_keys(cfg, "top level", {"solver", "gamma", "n_atoms", "output", "seed"});
    json resolved;
    std::string cache_storage;
    const dw4_solver_options opts = solver.resolve(cfg, cache_storage, resolved);
    const double g = resolve_gamma(gamma, cfg, resolved);

    dw4_params params{};
    if (dw4_status st = dw4_compute_params(&opts, g, &params); st != DW4_OK)
      return report_status(st);
    dw4_regime_info info{};
    if (dw4_status st = dw4_classify(&params, opts.v0, n_atoms, &info); st != DW4_OK)
      return report_status(st);

    json doc;
    doc["version"] = dw4_version();
    doc["config"] = resolved;
    doc["config_hash"] = fnv1a_hex(resolved.dump(2));
    doc["params"] = params_json(params);
    doc["regime"] = {{"chi0", info.chi0},
                     {"chi1", info.chi1},
                     {"chi01", info.chi01},
                     {"regime", regime_name(info.regime)},
                     {"hopping_validity", validity_name(info.hopping_validity)},
                     {"coupling_validity", validity_name(info.coupling_validity)},
                     {"barrier_above_e1", info.barrier_above_e1 != 0},
                     {"fock_determined", info.fock_determined != 0}};
    const std::string text = doc.dump(2) + "\n";
    if (out_path.empty())
      std::cout << text;
    else
      write_file(out_path, text);
    return 0;
  }
};

struct SimulateCmd {
  SolverArgs solver;
  IntegratorArgs integrator;
  InitialArgs initial;
  std::optional<double> gamma;
  std::string config_path, out_path = "trajectory.csv", manifest_path;

  int run() {
    json cfg = config_path.empty() ? json::object() : load_config(config_path);
    ensure_keys(cfg, "top level",
                {"solver", "gamma", "integrator", "initial", "output", "seed"});
    json out_block = cfg.value("output", json::object());
    ensure_keys(out_block, "output", {"csv", "manifest"});
    json resolved;
    std::string cache_storage;
    const dw4_solver_options sopts = solver.resolve(cfg, cache_storage, resolved);
    const double g = resolve_gamma(gamma, cfg, resolved);
    const dw4_integrator_options iopts = integrator.resolve(cfg, resolved);
    const dw4_state init = initial.resolve(cfg, resolved);

    const std::string csv =
        out_path != "trajectory.csv" ? out_path : str_at(out_block, "csv", out_path);
    const std::string manifest =
        !manifest_path.empty() ? manifest_path
                               : str_at(out_block, "manifest", csv + ".manifest.json");
    resolved["output"] = {{"csv", csv}, {"manifest", manifest}};

    dw4_params params{};
    if (dw4_status st = dw4_compute_params(&sopts, g, &params); st != DW4_OK)
      return report_status(st);
    dw4_trajectory *traj = nullptr;
    if (dw4_status st = dw4_integrate(&init, &params, &iopts, &traj); st != DW4_OK)
      return report_status(st);
    const dw4_status st = dw4_traj_write_csv(traj, csv.c_str(), nullptr, nullptr);
    json summary = {{"samples", dw4_traj_length(traj)},
                    {"termination", termination_name(dw4_traj_termination(traj))},
                    {"max_energy_drift", dw4_traj_max_drift(traj)}};
    dw4_traj_free(traj);
    if (st != DW4_OK) return report_status(st);
    write_manifest_file(manifest, resolved);
    std::cout << summary.dump() << "\n";
    return 0;
  }
};

struct FixedPointsCmd {
  SolverArgs solver;
  std::optional<double> gamma;
  std::optional<double> z2;
  std::string scan_z0, config_path, out_path = "fixed_points.csv";

  int run() {
    json cfg = config_path.empty() ? json::object() : load_config(config_path);
    ensure_keys(cfg, "top level", {"solver", "gamma", "z2", "scan_z0", "output", "seed"});
    json out_block = cfg.value("output", json::object());
    ensure_keys(out_block, "output", {"csv", "manifest"});
    json resolved;
    std::string cache_storage;
    const dw4_solver_options sopts = solver.resolve(cfg, cache_storage, resolved);
    const double g = resolve_gamma(gamma, cfg, resolved);
    const double z2_frozen = z2 ? *z2 : num_at(cfg, "z2", 0.0);
    resolved["z2"] = z2_frozen;
    const std::string scan = !scan_z0.empty() ? scan_z0 : str_at(cfg, "scan_z0", "");

    const std::string csv =
        out_path != "fixed_points.csv" ? out_path : str_at(out_block, "csv", out_path);
    const std::string manifest = str_at(out_block, "manifest", csv + ".manifest.json");
    resolved["output"] = {{"csv", csv}, {"manifest", manifest}};

    dw4_params params{};
    if (dw4_status st = dw4_compute_params(&sopts, g, &params); st != DW4_OK)
      return report_status(st);

    if (!scan.empty()) {
      double a = 0, b = 0, step = 0;
      char sep1 = 0, sep2 = 0;
      std::istringstream in(scan);
      in >> a >> sep1 >> b >> sep2 >> step;
      if (!in || sep1 != ':' || sep2 != ':' || !(step > 0.0) || b < a)
        config_fail("--scan-z0 must be start:stop:step with step > 0 and stop >= start");
      resolved["scan_z0"] = scan;
      if (dw4_status st = dw4_effective_scan_csv(&params, z2_frozen, a, b, step, csv.c_str(),
                                                 nullptr, nullptr);
          st != DW4_OK)
        return report_status(st);
    } else {
      if (dw4_status st = dw4_fixed_point_table_csv(&params, csv.c_str(), nullptr, nullptr);
          st != DW4_OK)
        return report_status(st);
    }
    write_manifest_file(manifest, resolved);
    return 0;
  }
};

struct RegimeMapCmd {
  std::optional<double> v0_min, v0_max, gamma_min, gamma_max, halfwidth;
  std::optional<int> v0_count, gamma_count, grid_points, jobs;
  bool linear_gamma = false;
  std::optional<std::string> cache;
  std::string config_path, out_path = "regime_map.csv", curves_path;

  int run() {
    json cfg = config_path.empty() ? json::object() : load_config(config_path);
    ensure_keys(cfg, "top level", {"sweep", "solver", "output", "seed"});
    json sweep = cfg.value("sweep", json::object());
    ensure_keys(sweep, "sweep",
                {"v0_min", "v0_max", "v0_count", "gamma_min", "gamma_max", "gamma_count",
                 "log_gamma", "jobs"});
    json solver_block = cfg.value("solver", json::object());
    ensure_keys(solver_block, "solver", {"domain_halfwidth", "grid_points", "cache_path"});
    json out_block = cfg.value("output", json::object());
    ensure_keys(out_block, "output", {"csv", "curves", "manifest"});

    dw4_sweep_options opts{};
    opts.v0_min = v0_min ? *v0_min : num_at(sweep, "v0_min", 3.0);
    opts.v0_max = v0_max ? *v0_max : num_at(sweep, "v0_max", 12.0);
    opts.v0_count = v0_count ? *v0_count : int_at(sweep, "v0_count", 60);
    opts.gamma_min = gamma_min ? *gamma_min : num_at(sweep, "gamma_min", 1e-6);
    opts.gamma_max = gamma_max ? *gamma_max : num_at(sweep, "gamma_max", 1e-1);
    opts.gamma_count = gamma_count ? *gamma_count : int_at(sweep, "gamma_count", 60);
    const bool log_gamma =
        linear_gamma ? false : (sweep.contains("log_gamma") ? sweep["log_gamma"].get<bool>() : true);
    opts.log_gamma = log_gamma ? 1 : 0;
    opts.grid_points = grid_points ? *grid_points : int_at(solver_block, "grid_points", 2048);
    opts.domain_halfwidth =
        halfwidth ? *halfwidth : num_at(solver_block, "domain_halfwidth", 1.5);
    std::string cache_storage = cache ? *cache : str_at(solver_block, "cache_path", "");
    if (const char *env = std::getenv("DWELL4_CACHE")) cache_storage = env;
    opts.cache_path = cache_storage.c_str();
    opts.jobs = jobs ? *jobs : int_at(sweep, "jobs", 0);

    const std::string csv =
        out_path != "regime_map.csv" ? out_path : str_at(out_block, "csv", out_path);
    const std::string curves =
        !curves_path.empty() ? curves_path : str_at(out_block, "curves", "");
    const std::string manifest = str_at(out_block, "manifest", csv + ".manifest.json");

    json resolved;
    resolved["sweep"] = {{"v0_min", opts.v0_min},         {"v0_max", opts.v0_max},
                         {"v0_count", opts.v0_count},     {"gamma_min", opts.gamma_min},
                         {"gamma_max", opts.gamma_max},   {"gamma_count", opts.gamma_count},
                         {"log_gamma", log_gamma},        {"jobs", opts.jobs}};
    resolved["solver"] = {{"domain_halfwidth", opts.domain_halfwidth},
                          {"grid_points", opts.grid_points},
                          {"cache_path", cache_storage}};
    resolved["output"] = {{"csv", csv}, {"curves", curves}, {"manifest", manifest}};

    if (dw4_status st = dw4_regime_map_csv(&opts, csv.c_str(), nullptr, nullptr); st != DW4_OK)
      return report_status(st);
    if (!curves.empty()) {
      if (dw4_status st = dw4_boundary_curves_json(&opts, curves.c_str()); st != DW4_OK)
        return report_status(st);
    }
    write_manifest_file(manifest, resolved);
    return 0;
  }
};

struct PortraitCmd {
  SolverArgs solver;
  IntegratorArgs integrator;
  std::optional<double> gamma;
  std::optional<int> jobs;
  std::string plane = "theta1,z1";
  std::string config_path, out_dir = "portrait";

  int run() {
    if (config_path.empty()) config_fail("portrait requires --config with an 'initials' list");
    json cfg = load_config(config_path);
    ensure_keys(cfg, "top level",
                {"solver", "gamma", "integrator", "initials", "plane", "jobs", "output", "seed"});
    json out_block = cfg.value("output", json::object());
    ensure_keys(out_block, "output", {"dir"});
    json resolved;
    std::string cache_storage;
    const dw4_solver_options sopts = solver.resolve(cfg, cache_storage, resolved);
    const double g = resolve_gamma(gamma, cfg, resolved);
    const dw4_integrator_options iopts = integrator.resolve(cfg, resolved);

    if (!cfg.contains("initials") || !cfg["initials"].is_array() || cfg["initials"].empty())
      config_fail("portrait config must provide a non-empty 'initials' array");
    std::vector<dw4_state> initials;
    for (const auto &row : cfg["initials"]) {
      if (!row.is_array() || row.size() != 6)
        config_fail("each portrait initial condition must be six numbers");
      dw4_state s{row[0].get<double>(), row[1].get<double>(), row[2].get<double>(),
                  row[3].get<double>(), row[4].get<double>(), row[5].get<double>()};
      initials.push_back(s);
    }
    resolved["initials"] = cfg["initials"];

    const std::string plane_spec = plane != "theta1,z1" ? plane : str_at(cfg, "plane", plane);
    const auto comma = plane_spec.find(',');
    if (comma == std::string::npos) config_fail("--plane must be 'xvar,yvar'");
    const int px = var_index(plane_spec.substr(0, comma));
    const int py = var_index(plane_spec.substr(comma + 1));
    resolved["plane"] = plane_spec;

    const int n_jobs = jobs ? *jobs : int_at(cfg, "jobs", 0);
    resolved["jobs"] = n_jobs;
    const std::string dir = out_dir != "portrait" ? out_dir : str_at(out_block, "dir", out_dir);
    resolved["output"] = {{"dir", dir}};

    dw4_params params{};
    if (dw4_status st = dw4_compute_params(&sopts, g, &params); st != DW4_OK)
      return report_status(st);
    const std::string config_text = resolved.dump(2);
    if (dw4_status st = dw4_portrait_run(&params, &iopts, initials.data(), initials.size(), px,
                                         py, n_jobs, dir.c_str(), config_text.c_str());
        st != DW4_OK)
      return report_status(st);
    return 0;
  }
};

struct PoincareCmd {
  SolverArgs solver;
  IntegratorArgs integrator;
  InitialArgs initial;
  std::optional<double> gamma;
  std::string section = "z1=0";
  std::string direction = "rising";
  std::string plane = "theta0,z0";
  std::string config_path, out_path = "poincare.csv";

  int run() {
    json cfg = config_path.empty() ? json::object() : load_config(config_path);
    ensure_keys(cfg, "top level",
                {"solver", "gamma", "integrator", "initial", "section", "plane", "output", "seed"});
    json out_block = cfg.value("output", json::object());
    ensure_keys(out_block, "output", {"csv", "manifest"});
    json resolved;
    std::string cache_storage;
    const dw4_solver_options sopts = solver.resolve(cfg, cache_storage, resolved);
    const double g = resolve_gamma(gamma, cfg, resolved);
    const dw4_integrator_options iopts = integrator.resolve(cfg, resolved);
    const dw4_state init = initial.resolve(cfg, resolved);

    std::string section_spec = section;
    std::string direction_spec = direction;
    if (cfg.contains("section")) {
      json sec = cfg["section"];
      ensure_keys(sec, "section", {"variable", "value", "direction"});
      if (section == "z1=0")
        section_spec = str_at(sec, "variable", "z1") + "=" +
                       json(num_at(sec, "value", 0.0)).dump();
      if (direction == "rising") direction_spec = str_at(sec, "direction", "rising");
    }
    const auto eq = section_spec.find('=');
    if (eq == std::string::npos) config_fail("--section must be 'variable=value'");
    const int section_var = var_index(section_spec.substr(0, eq));
    double section_value = 0.0;
    try {
      section_value = std::stod(section_spec.substr(eq + 1));
    } catch (const std::exception &) {
      config_fail("--section value must be a number");
    }
    int dir = 0;
    if (direction_spec == "rising") dir = 1;
    else if (direction_spec == "falling") dir = -1;
    else if (direction_spec == "both") dir = 0;
    else config_fail("--direction must be rising, falling, or both");

    const std::string plane_spec = plane != "theta0,z0" ? plane : str_at(cfg, "plane", plane);
    const auto comma = plane_spec.find(',');
    if (comma == std::string::npos) config_fail("--plane must be 'xvar,yvar'");
    const int px = var_index(plane_spec.substr(0, comma));
    const int py = var_index(plane_spec.substr(comma + 1));

    const std::string csv =
        out_path != "poincare.csv" ? out_path : str_at(out_block, "csv", out_path);
    const std::string manifest = str_at(out_block, "manifest", csv + ".manifest.json");
    resolved["section"] = section_spec;
    resolved["direction"] = direction_spec;
    resolved["plane"] = plane_spec;
    resolved["output"] = {{"csv", csv}, {"manifest", manifest}};

    dw4_params params{};
    if (dw4_status st = dw4_compute_params(&sopts, g, &params); st != DW4_OK)
      return report_status(st);
    dw4_trajectory *traj = nullptr;
    if (dw4_status st = dw4_integrate(&init, &params, &iopts, &traj); st != DW4_OK)
      return report_status(st);
    double hull_area = 0.0;
    int chaos = 0;
    const dw4_status st = dw4_poincare_csv(traj, section_var, section_value, dir, px, py,
                                           csv.c_str(), &hull_area, &chaos);
    dw4_traj_free(traj);
    if (st != DW4_OK) return report_status(st);
    write_manifest_file(manifest, resolved);
    json summary = {{"hull_area", hull_area}, {"chaos_candidate", chaos != 0}};
    std::cout << summary.dump() << "\n";
    return 0;
  }
};

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{"Four-mode double-well condensate toolkit"};
  app.require_subcommand(1);

  CoefficientsCmd coeffs;
  auto *c1 = app.add_subcommand("coefficients", "Compute model coefficients and regime labels");
  coeffs.solver.attach(c1);
  c1->add_option("--gamma", coeffs.gamma, "Interaction scale N g1 / E_r");
  c1->add_option("--n-atoms", coeffs.n_atoms, "Atom number for the Fock-regime test");
  c1->add_option("--config", coeffs.config_path, "JSON configuration file");
  c1->add_option("--out", coeffs.out_path, "Output JSON file (default: stdout)");

  SimulateCmd sim;
  auto *c2 = app.add_subcommand("simulate", "Integrate the equations of motion");
  sim.solver.attach(c2);
  sim.integrator.attach(c2);
  sim.initial.attach(c2);
  c2->add_option("--gamma", sim.gamma, "Interaction scale N g1 / E_r");
  c2->add_option("--config", sim.config_path, "JSON configuration file");
  c2->add_option("--out", sim.out_path, "Trajectory CSV path");
  c2->add_option("--manifest", sim.manifest_path, "Manifest JSON path");

  FixedPointsCmd fp;
  auto *c3 = app.add_subcommand("fixed-points", "Stationary-state tables and scans");
  fp.solver.attach(c3);
  c3->add_option("--gamma", fp.gamma, "Interaction scale N g1 / E_r");
  c3->add_option("--z2", fp.z2, "Frozen ground-minus-excited imbalance");
  c3->add_option("--scan-z0", fp.scan_z0,
                 "start:stop:step scan of the frozen ground imbalance (effective fixed points)");
  c3->add_option("--config", fp.config_path, "JSON configuration file");
  c3->add_option("--out", fp.out_path, "Output CSV path");

  RegimeMapCmd rm;
  auto *c4 = app.add_subcommand("regime-map", "Classify the (V0, gamma) plane");
  c4->add_option("--v0-min", rm.v0_min, "Lower barrier height");
  c4->add_option("--v0-max", rm.v0_max, "Upper barrier height");
  c4->add_option("--v0-count", rm.v0_count, "Barrier axis sample count");
  c4->add_option("--gamma-min", rm.gamma_min, "Lower interaction scale");
  c4->add_option("--gamma-max", rm.gamma_max, "Upper interaction scale");
  c4->add_option("--gamma-count", rm.gamma_count, "Interaction axis sample count");
  c4->add_flag("--linear-gamma", rm.linear_gamma, "Linear instead of logarithmic gamma spacing");
  c4->add_option("--grid-points", rm.grid_points, "Eigensolver grid points");
  c4->add_option("--halfwidth", rm.halfwidth, "Eigensolver box half-width");
  c4->add_option("--jobs", rm.jobs, "Worker threads (0 = hardware)");
  c4->add_option("--cache", rm.cache, "Coefficient cache file");
  c4->add_option("--config", rm.config_path, "JSON configuration file");
  c4->add_option("--out", rm.out_path, "Map CSV path");
  c4->add_option("--curves", rm.curves_path, "Boundary-curve JSON path");

  PortraitCmd portrait;
  auto *c5 = app.add_subcommand("portrait", "Phase portraits over an initial-condition grid");
  portrait.solver.attach(c5);
  portrait.integrator.attach(c5);
  c5->add_option("--gamma", portrait.gamma, "Interaction scale N g1 / E_r");
  c5->add_option("--plane", portrait.plane, "Projection plane 'xvar,yvar'");
  c5->add_option("--jobs", portrait.jobs, "Worker threads (0 = hardware)");
  c5->add_option("--config", portrait.config_path, "JSON configuration file with 'initials'");
  c5->add_option("--out-dir", portrait.out_dir, "Output directory");

  PoincareCmd poincare;
  auto *c6 = app.add_subcommand("poincare", "Poincare section of one trajectory");
  poincare.solver.attach(c6);
  poincare.integrator.attach(c6);
  poincare.initial.attach(c6);
  c6->add_option("--gamma", poincare.gamma, "Interaction scale N g1 / E_r");
  c6->add_option("--section", poincare.section, "Section condition 'variable=value'");
  c6->add_option("--direction", poincare.direction, "rising | falling | both");
  c6->add_option("--plane", poincare.plane, "Projection plane 'xvar,yvar'");
  c6->add_option("--config", poincare.config_path, "JSON configuration file");
  c6->add_option("--out", poincare.out_path, "Section CSV path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    std::cerr << json{{"error", {{"code", kExitConfig}, {"message", e.what()}}}}.dump() << "\n";
    return kExitConfig;
  }

  try {
    if (c1->parsed()) return coeffs.run();
    if (c2->parsed()) return sim.run();
    if (c3->parsed()) return fp.run();
    if (c4->parsed()) return rm.run();
    if (c5->parsed()) return portrait.run();
    if (c6->parsed()) return poincare.run();
  } catch (const ConfigError &ex) {
    std::cerr << json{{"error", {{"code", kExitConfig}, {"message", ex.what()}}}}.dump() << "\n";
    return kExitConfig;
  } catch (const std::exception &ex) {
    std::cerr << json{{"error", {{"code", kExitNumeric}, {"message", ex.what()}}}}.dump() << "\n";
    return kExitNumeric;
  }
  return kExitConfig;
}
