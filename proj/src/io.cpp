#include "io.hpp"

#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <unistd.h>

namespace dw4 {

std::string fmt17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17e", x);
  return buf;
}

std::uint64_t fnv1a64(const std::string &bytes) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

std::string config_hash(const std::string &config_json) {
  char buf[24];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a64(config_json)));
  return buf;
}

const char *regime_name(Regime r) {
  switch (r) {
    case Regime::Rabi: return "rabi";
    case Regime::Josephson: return "josephson";
    case Regime::Fock: return "fock";
    case Regime::Mixed: return "mixed";
    case Regime::Invalid: return "invalid";
  }
  return "?";
}

const char *validity_name(Validity v) {
  switch (v) {
    case Validity::Validated: return "validated";
    case Validity::Marginal: return "marginal";
    case Validity::Invalid: return "invalid";
  }
  return "?";
}

const char *stability_name(Stability s) {
  switch (s) {
    case Stability::Center: return "center";
    case Stability::Unstable: return "unstable";
    case Stability::Mixed: return "mixed";
  }
  return "?";
}

void atomic_write(const std::string &path, const std::string &content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  if (target.has_parent_path()) {
    std::error_code ec;
    fs::create_directories(target.parent_path(), ec);
  }
  const fs::path tmp = target.string() + ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) fail(ErrorCode::IoError, "cannot open for writing: " + tmp.string());
    out.write(content.data(), std::streamsize(content.size()));
    if (!out) fail(ErrorCode::IoError, "short write: " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp, ec);
    fail(ErrorCode::IoError, "cannot replace " + path);
  }
}

void write_trajectory_csv(const std::string &path, const Trajectory &traj) {
  std::ostringstream out;
  out << "t,z0,theta0,z1,theta1,z2,theta2,energy\n";
  for (std::size_t i = 0; i < traj.times.size(); ++i) {
    const PendulumState &s = traj.states[i];
    out << fmt17(traj.times[i]) << ',' << fmt17(s.z0) << ',' << fmt17(s.theta0) << ','
        << fmt17(s.z1) << ',' << fmt17(s.theta1) << ',' << fmt17(s.z2) << ',' << fmt17(s.theta2)
        << ',' << fmt17(traj.energy[i]) << '\n';
  }
  atomic_write(path, out.str());
}

void write_manifest(const std::string &path, const std::string &config_json,
                    const std::vector<std::pair<std::string, std::string>> &extra) {
  nlohmann::json doc;
  doc["config"] = nlohmann::json::parse(config_json);
  doc["config_hash"] = config_hash(config_json);
  doc["version"] = kVersionString;
  for (const auto &[key, value] : extra) doc[key] = nlohmann::json::parse(value);
  atomic_write(path, doc.dump(2) + "\n");
}

void write_regime_map_csv(const std::string &path, const SweepResult &result) {
  std::ostringstream out;
  out << "v0,gamma,chi0,chi1,chi01,regime,valid,z2_0_exists\n";
  for (std::size_t iv = 0; iv < result.v0s.size(); ++iv)
    for (std::size_t ig = 0; ig < result.gammas.size(); ++ig) {
      const RegimeCell &c = result.at(iv, ig);
      out << fmt17(c.v0) << ',' << fmt17(c.gamma) << ',' << fmt17(c.indicators.chi0) << ','
          << fmt17(c.indicators.chi1) << ',' << fmt17(c.indicators.chi01) << ','
          << regime_name(c.indicators.regime) << ','
          << (c.solver_ok && c.indicators.regime != Regime::Invalid ? 1 : 0) << ','
          << (c.z2_0_exists ? 1 : 0) << '\n';
    }
  atomic_write(path, out.str());
}

void write_boundary_json(const std::string &path, const std::vector<BoundaryCurve> &curves) {
  nlohmann::json doc;
  doc["version"] = kVersionString;
  nlohmann::json list = nlohmann::json::array();
  for (const BoundaryCurve &c : curves) {
    nlohmann::json entry;
    entry["name"] = c.name;
    nlohmann::json pts = nlohmann::json::array();
    for (const auto &[v0, gamma] : c.points) pts.push_back({v0, gamma});
    entry["points"] = pts;
    entry["missing_v0"] = c.missing_v0;
    list.push_back(entry);
  }
  doc["curves"] = list;
  atomic_write(path, doc.dump(2) + "\n");
}

void write_fixed_point_table_csv(const std::string &path,
                                 const std::array<FixedPointReport, 8> &table) {
  std::ostringstream out;
  out << "k0,k1,k2,z2_0,exists,stability\n";
  for (const FixedPointReport &r : table) {
    out << r.k0 << ',' << r.k1 << ',' << r.k2 << ',' << fmt17(r.z2_0) << ','
        << (r.exists ? 1 : 0) << ',' << (r.exists ? stability_name(r.stability) : "-") << '\n';
  }
  atomic_write(path, out.str());
}

void write_effective_scan_csv(const std::string &path,
                              const std::vector<EffectiveFixedPoint> &points) {
  std::ostringstream out;
  out << "z0_frozen,theta1_0,z1_0,stability\n";
  for (const EffectiveFixedPoint &p : points)
    out << fmt17(p.z0_frozen) << ',' << fmt17(p.theta1_0) << ',' << fmt17(p.z1_0) << ','
        << (p.stable ? "stable" : "unstable") << '\n';
  atomic_write(path, out.str());
}

void write_portrait(const std::string &out_dir, const std::vector<PortraitEntry> &entries,
                    Var plane_x, Var plane_y, const std::string &config_json) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(out_dir, ec);

  nlohmann::json manifest;
  manifest["config"] = nlohmann::json::parse(config_json);
  manifest["config_hash"] = config_hash(config_json);
  manifest["version"] = kVersionString;
  nlohmann::json ics = nlohmann::json::array();

  for (std::size_t i = 0; i < entries.size(); ++i) {
    const PortraitEntry &e = entries[i];
    char name[32];
    std::snprintf(name, sizeof name, "traj_%03zu.csv", i);

    nlohmann::json rec;
    rec["initial"] = {e.initial.z0, e.initial.theta0, e.initial.z1,
                      e.initial.theta1, e.initial.z2, e.initial.theta2};
    rec["file"] = name;
    rec["ok"] = e.ok;
    if (!e.ok) rec["error"] = e.error;
    ics.push_back(rec);
    if (!e.ok) continue;

    std::ostringstream out;
    out << var_name(plane_x) << ',' << var_name(plane_y) << '\n';
    for (const PendulumState &s : e.traj.states) {
      double x = component(s, plane_x), y = component(s, plane_y);
      if (is_angle(plane_x)) x = wrap_angle(x);
      if (is_angle(plane_y)) y = wrap_angle(y);
      out << fmt17(x) << ',' << fmt17(y) << '\n';
    }
    atomic_write((fs::path(out_dir) / name).string(), out.str());
  }
  manifest["trajectories"] = ics;
  atomic_write((fs::path(out_dir) / "manifest.json").string(), manifest.dump(2) + "\n");
}

void write_poincare_csv(const std::string &path, const PoincareResult &result, Var plane_x,
                        Var plane_y) {
  std::ostringstream out;
  out << var_name(plane_x) << ',' << var_name(plane_y) << ",t\n";
  for (const SectionPoint &p : result.points)
    out << fmt17(p.x) << ',' << fmt17(p.y) << ',' << fmt17(p.t) << '\n';
  atomic_write(path, out.str());
}

}  // namespace dw4
