#pragma once
// Trajectory integration with conservation auditing.

#include <vector>

#include "types.hpp"

namespace dw4 {

enum class Model { Full, Averaged, TwoMode };
enum class Scheme { Dopri54, Rkf78Fixed };
enum class Termination { Completed, BoundaryHit, StepFailure };

struct IntegratorConfig {
  double rel_tol = 1e-10;
  double abs_tol = 1e-12;
  double max_step = 0.0;         // 0 = unlimited
  double t_end = 0.0;            // 0 = auto: 50 slow (ground-mode) periods
  double sample_interval = 0.0;  // 0 = auto: t_end / 5000
  Model model = Model::Full;
  Scheme scheme = Scheme::Dopri54;
  double fixed_step = 0.0;  // Rkf78Fixed only; 0 = auto from the fast scale
  // Relative energy-drift ceiling; exceeding it ends the run as a step
  // failure. Infinity (default) records the drift without enforcing it.
  double audit_bound = 0.0;  // 0 = unenforced
  void validate() const;
};

struct Trajectory {
  std::vector<double> times;
  std::vector<PendulumState> states;
  std::vector<double> energy;
  Termination termination = Termination::Completed;
  // max |H(t) - H(0)| / max(|H(0)|, 1e-3) over every accepted step (not
  // just the recorded samples).
  double max_energy_drift = 0.0;
  Model model = Model::Full;
};

// Integrate from the given interior state. The adaptive scheme is an
// embedded Runge-Kutta 5(4) pair with PI step control; the energy audit
// (rather than a symplectic scheme) guards long-horizon validity.
// Integration stops with BoundaryHit when any |z_l| comes within 1e-9 of
// its depletion bound, and with StepFailure when the controller cannot
// meet tolerances.
Trajectory integrate(const PendulumState &initial, const ModelParams &params,
                     const IntegratorConfig &cfg);

// Scale-derived defaults exposed for callers that need them explicitly.
double auto_t_end(const PendulumState &initial, const ModelParams &params);
double auto_initial_step(const PendulumState &initial, const ModelParams &params);

}  // namespace dw4
