#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "analysis.hpp"
#include "fixed_points.hpp"
#include "integrator.hpp"
#include "regime_map.hpp"
#include "types.hpp"

namespace dw4 {

inline constexpr const char *kVersionString = "dwell4 0.1.0";

// Full-precision scientific notation; all numeric file output goes
// through this so repeated runs are byte-identical.
std::string fmt17(double x);

std::uint64_t fnv1a64(const std::string &bytes);
std::string config_hash(const std::string &config_json);

const char *regime_name(Regime r);
const char *validity_name(Validity v);
const char *stability_name(Stability s);

// All writers go through a temp file plus rename.
void atomic_write(const std::string &path, const std::string &content);

void write_trajectory_csv(const std::string &path, const Trajectory &traj);

// {"config": <parsed config>, "config_hash": ..., "version": ...} plus
// caller-provided extra top-level fields as serialized JSON pairs.
void write_manifest(const std::string &path, const std::string &config_json,
                    const std::vector<std::pair<std::string, std::string>> &extra = {});

void write_regime_map_csv(const std::string &path, const SweepResult &result);
void write_boundary_json(const std::string &path, const std::vector<BoundaryCurve> &curves);

void write_fixed_point_table_csv(const std::string &path,
                                 const std::array<FixedPointReport, 8> &table);
void write_effective_scan_csv(const std::string &path,
                              const std::vector<EffectiveFixedPoint> &points);

// One CSV of wrapped plane pairs per initial condition, plus manifest.json
// recording the run configuration and per-trajectory outcomes.
void write_portrait(const std::string &out_dir, const std::vector<PortraitEntry> &entries,
                    Var plane_x, Var plane_y, const std::string &config_json);

void write_poincare_csv(const std::string &path, const PoincareResult &result, Var plane_x,
                        Var plane_y);

}  // namespace dw4
