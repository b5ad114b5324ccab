#include <doctest.h>

#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "fixed_points.hpp"
#include "io.hpp"
#include "test_support.hpp"

using namespace dw4;
using namespace dw4test;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("dw4_io_" + std::to_string(::getpid()));
    fs::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
  std::string file(const std::string &name) const { return (path / name).string(); }
};

std::string slurp(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

std::vector<std::string> lines_of(const std::string &text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) out.push_back(line);
  return out;
}

std::vector<std::string> split_csv(const std::string &line) {
  std::vector<std::string> out;
  std::istringstream in(line);
  std::string field;
  while (std::getline(in, field, ',')) out.push_back(field);
  return out;
}

}  // namespace

TEST_SUITE("io") {

TEST_CASE("deterministic numeric formatting round-trips exactly") {
  CHECK(fmt17(0.0) == "0.00000000000000000e+00");
  CHECK(fmt17(1.0) == "1.00000000000000000e+00");
  CHECK(fmt17(-2.5e-3) == "-2.50000000000000005e-03");  // nearest double to -2.5e-3
  for (double x : {0.1, 1.0 / 3.0, 6.626e-34, -1.2345678901234567e300, 3.976e-3}) {
    const std::string s = fmt17(x);
    CHECK(std::strtod(s.c_str(), nullptr) == x);
  }
}

TEST_CASE("hash test vectors") {
  CHECK(fnv1a64("") == 0xcbf29ce484222325ull);
  CHECK(fnv1a64("abc") == 0xe71fa2190541574bull);
  CHECK(config_hash("abc") == "e71fa2190541574b");
  CHECK(config_hash("").size() == 16);
}

TEST_CASE("enum name tables") {
  CHECK(std::string(regime_name(Regime::Rabi)) == "rabi");
  CHECK(std::string(regime_name(Regime::Josephson)) == "josephson");
  CHECK(std::string(regime_name(Regime::Fock)) == "fock");
  CHECK(std::string(regime_name(Regime::Mixed)) == "mixed");
  CHECK(std::string(regime_name(Regime::Invalid)) == "invalid");
  CHECK(std::string(validity_name(Validity::Validated)) == "validated");
  CHECK(std::string(validity_name(Validity::Marginal)) == "marginal");
  CHECK(std::string(validity_name(Validity::Invalid)) == "invalid");
  CHECK(std::string(stability_name(Stability::Center)) == "center");
  CHECK(std::string(stability_name(Stability::Unstable)) == "unstable");
  CHECK(std::string(stability_name(Stability::Mixed)) == "mixed");
}

TEST_CASE("atomic write creates parents, replaces content, leaves no debris") {
  TempDir dir;
  const std::string target = dir.file("sub/deeper/a.txt");
  atomic_write(target, "one");
  CHECK(slurp(target) == "one");
  atomic_write(target, "two");
  CHECK(slurp(target) == "two");
  size_t entries = 0;
  for (const auto &e : fs::directory_iterator(fs::path(target).parent_path())) {
    ++entries;
    CHECK(e.path().filename() == "a.txt");
  }
  CHECK(entries == 1);
}

TEST_CASE("trajectory CSV: layout, precision, and byte determinism") {
  Trajectory traj;
  traj.times = {0.0, 0.5, 1.0};
  PendulumState a;
  a.z0 = 0.1;
  PendulumState b;
  b.z0 = -1.0 / 3.0;
  b.theta2 = 3.25;
  PendulumState c;
  c.z1 = 1e-15;
  traj.states = {a, b, c};
  traj.energy = {1.5, 1.5, 1.5000000001};

  TempDir dir;
  write_trajectory_csv(dir.file("t.csv"), traj);
  const auto lines = lines_of(slurp(dir.file("t.csv")));
  REQUIRE(lines.size() == 4);
  CHECK(lines[0] == "t,z0,theta0,z1,theta1,z2,theta2,energy");
  const auto row1 = split_csv(lines[2]);
  REQUIRE(row1.size() == 8);
  CHECK(std::strtod(row1[0].c_str(), nullptr) == 0.5);
  CHECK(std::strtod(row1[1].c_str(), nullptr) == -1.0 / 3.0);
  CHECK(std::strtod(row1[6].c_str(), nullptr) == 3.25);
  const auto row2 = split_csv(lines[3]);
  CHECK(std::strtod(row2[3].c_str(), nullptr) == 1e-15);

  write_trajectory_csv(dir.file("t2.csv"), traj);
  CHECK(slurp(dir.file("t.csv")) == slurp(dir.file("t2.csv")));
}

TEST_CASE("manifest embeds config, hash, version, and extra fields") {
  TempDir dir;
  const std::string config = R"({"a":1,"b":[2,3]})";
  write_manifest(dir.file("manifest.json"), config, {{"result", R"({"n":4})"}});
  const auto doc = nlohmann::json::parse(slurp(dir.file("manifest.json")));
  CHECK(doc["config"]["a"] == 1);
  CHECK(doc["config"]["b"][1] == 3);
  CHECK(doc["config_hash"] == config_hash(config));
  CHECK(doc["version"] == kVersionString);
  CHECK(doc["result"]["n"] == 4);
}

TEST_CASE("regime map CSV marks failed and invalid cells") {
  SweepResult res;
  res.v0s = {3.0, 4.0};
  res.gammas = {0.01};
  res.cells.resize(2);
  res.cells[0].v0 = 3.0;
  res.cells[0].gamma = 0.01;
  res.cells[0].solver_ok = true;
  res.cells[0].indicators.chi0 = 0.5;
  res.cells[0].indicators.chi1 = 0.05;
  res.cells[0].indicators.chi01 = 1e-3;
  res.cells[0].indicators.regime = Regime::Mixed;
  res.cells[0].z2_0_exists = true;
  res.cells[1].v0 = 4.0;
  res.cells[1].gamma = 0.01;
  res.cells[1].solver_ok = false;
  res.cells[1].error = "solver failed";
  res.cells[1].indicators.regime = Regime::Invalid;

  TempDir dir;
  write_regime_map_csv(dir.file("map.csv"), res);
  const auto lines = lines_of(slurp(dir.file("map.csv")));
  REQUIRE(lines.size() == 3);
  CHECK(lines[0] == "v0,gamma,chi0,chi1,chi01,regime,valid,z2_0_exists");
  const auto good = split_csv(lines[1]);
  REQUIRE(good.size() == 8);
  CHECK(good[5] == "mixed");
  CHECK(good[6] == "1");
  CHECK(good[7] == "1");
  const auto bad = split_csv(lines[2]);
  CHECK(bad[5] == "invalid");
  CHECK(bad[6] == "0");
  CHECK(bad[7] == "0");
}

TEST_CASE("fixed point table and effective scan CSVs") {
  const auto table = analytic_fixed_points(synthetic_existing_branch_params());
  TempDir dir;
  write_fixed_point_table_csv(dir.file("fp.csv"), table);
  const auto lines = lines_of(slurp(dir.file("fp.csv")));
  REQUIRE(lines.size() == 9);
  CHECK(lines[0] == "k0,k1,k2,z2_0,exists,stability");
  for (size_t i = 0; i < 8; ++i) {
    const auto row = split_csv(lines[1 + i]);
    REQUIRE(row.size() == 6);
    CHECK(std::strtod(row[3].c_str(), nullptr) == table[i].z2_0);
    CHECK(row[4] == (table[i].exists ? "1" : "0"));
    if (!table[i].exists) CHECK(row[5] == "-");
  }

  std::vector<EffectiveFixedPoint> pts;
  pts.push_back({0.0, 0.25, 0.1, true});
  pts.push_back({3.141592653589793, -0.25, 0.1, false});
  write_effective_scan_csv(dir.file("eff.csv"), pts);
  const auto elines = lines_of(slurp(dir.file("eff.csv")));
  REQUIRE(elines.size() == 3);
  CHECK(elines[0] == "z0_frozen,theta1_0,z1_0,stability");
  CHECK(split_csv(elines[1])[3] == "stable");
  CHECK(split_csv(elines[2])[3] == "unstable");
}

TEST_CASE("boundary curve JSON structure") {
  std::vector<BoundaryCurve> curves(1);
  curves[0].name = "chi0=1";
  curves[0].points = {{3.0, 0.5}, {4.0, 0.25}};
  curves[0].missing_v0 = {5.0};
  TempDir dir;
  write_boundary_json(dir.file("b.json"), curves);
  const auto doc = nlohmann::json::parse(slurp(dir.file("b.json")));
  CHECK(doc["version"] == kVersionString);
  REQUIRE(doc["curves"].size() == 1);
  CHECK(doc["curves"][0]["name"] == "chi0=1");
  CHECK(doc["curves"][0]["points"][0][0] == 3.0);
  CHECK(doc["curves"][0]["points"][1][1] == 0.25);
  CHECK(doc["curves"][0]["missing_v0"][0] == 5.0);
}

TEST_CASE("portrait directory: per-trajectory files, wrapping, error records") {
  std::vector<PortraitEntry> entries(2);
  entries[0].initial.z0 = 0.1;
  entries[0].ok = true;
  PendulumState s1;
  s1.theta0 = 4.0;  // wraps to 4 - 2 pi
  s1.z0 = 0.2;
  PendulumState s2;
  s2.theta0 = -0.5;
  s2.z0 = 0.3;
  entries[0].traj.times = {0.0, 1.0};
  entries[0].traj.states = {s1, s2};
  entries[0].traj.energy = {0.0, 0.0};
  entries[1].initial.z0 = 0.9;
  entries[1].ok = false;
  entries[1].error = "boom";

  TempDir dir;
  const std::string out = dir.file("portrait");
  write_portrait(out, entries, Var::Theta0, Var::Z0, R"({"kind":"portrait"})");
  CHECK(fs::exists(fs::path(out) / "traj_000.csv"));
  CHECK(!fs::exists(fs::path(out) / "traj_001.csv"));

  const auto lines = lines_of(slurp((fs::path(out) / "traj_000.csv").string()));
  REQUIRE(lines.size() == 3);
  CHECK(lines[0] == "theta0,z0");
  const auto row = split_csv(lines[1]);
  CHECK(std::strtod(row[0].c_str(), nullptr) == wrap_angle(4.0));
  CHECK(std::strtod(row[1].c_str(), nullptr) == 0.2);

  const auto man = nlohmann::json::parse(slurp((fs::path(out) / "manifest.json").string()));
  REQUIRE(man["trajectories"].size() == 2);
  CHECK(man["trajectories"][0]["ok"] == true);
  CHECK(man["trajectories"][0]["file"] == "traj_000.csv");
  CHECK(man["trajectories"][1]["ok"] == false);
  CHECK(man["trajectories"][1]["error"] == "boom");
  CHECK(man["config"]["kind"] == "portrait");
}

TEST_CASE("poincare CSV carries the plane names and crossing times") {
  PoincareResult res;
  res.points = {{0.1, 0.2, 3.5}, {-0.4, 0.6, 7.25}};
  TempDir dir;
  write_poincare_csv(dir.file("p.csv"), res, Var::Theta0, Var::Z0);
  const auto lines = lines_of(slurp(dir.file("p.csv")));
  REQUIRE(lines.size() == 3);
  CHECK(lines[0] == "theta0,z0,t");
  const auto row = split_csv(lines[2]);
  CHECK(std::strtod(row[0].c_str(), nullptr) == -0.4);
  CHECK(std::strtod(row[2].c_str(), nullptr) == 7.25);
}

}  // TEST_SUITE
