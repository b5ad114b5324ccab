#pragma once

#include <string>
#include <vector>

#include "integrator.hpp"
#include "types.hpp"

namespace dw4 {

// Trajectory component selectors, in state order.
enum class Var { Z0 = 0, Theta0 = 1, Z1 = 2, Theta1 = 3, Z2 = 4, Theta2 = 5 };

double component(const PendulumState &s, Var v);
bool is_angle(Var v);
const char *var_name(Var v);

// Map a wrapped angle into (-pi, pi].
double wrap_angle(double theta);

struct FrequencyEstimate {
  double omega;        // angular frequency from mean-crossing spacing
  double uncertainty;  // spread of per-period estimates
  int crossings;       // total mean-crossings used
};

// Angular frequency of the selected component via linear-interpolated
// mean-level crossings. Requires at least five crossings.
FrequencyEstimate estimate_frequency(const Trajectory &traj, Var v);

struct TrappingReport {
  bool trapped;
  double time_mean;
  double min;
  double max;
};

// Self-trapping = the component never changes sign and its time average
// exceeds the jitter threshold.
inline constexpr double kTrappingMeanThreshold = 0.05;
TrappingReport detect_self_trapping(const Trajectory &traj, Var v);

struct PortraitEntry {
  PendulumState initial;
  Trajectory traj;   // valid when ok
  bool ok;
  std::string error;
};

// One trajectory per initial condition; per-trajectory failures are recorded,
// not fatal. jobs <= 0 selects hardware concurrency.
std::vector<PortraitEntry> phase_portrait(const std::vector<PendulumState> &initials,
                                          const ModelParams &params, const IntegratorConfig &cfg,
                                          int jobs);

struct SectionPoint {
  double x, y, t;
};

struct PoincareResult {
  std::vector<SectionPoint> points;
  double hull_area;
  bool chaos_candidate;
};

// Scatter above this convex-hull area is flagged as a chaos candidate; small
// regular loops in the section planes of interest stay well below it.
inline constexpr double kChaosAreaThreshold = 0.04;

// Linear-interpolated crossings of {component(section_var) = value} projected
// onto the (plane_x, plane_y) plane; direction +1 rising, -1 falling, 0 both.
// Angle-plane coordinates are wrapped after interpolation.
PoincareResult poincare_section(const Trajectory &traj, Var section_var, double value,
                                int direction, Var plane_x, Var plane_y);

// Convex-hull area of a planar point set (monotone chain + shoelace).
double convex_hull_area(const std::vector<std::pair<double, double>> &pts);

// Time average of a sampled signal by trapezoid rule.
double time_mean(const std::vector<double> &t, const std::vector<double> &v);

}  // namespace dw4
