#include "integrator.hpp"

#include <boost/numeric/odeint/stepper/runge_kutta_fehlberg78.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>

#include "model.hpp"

namespace dw4 {

void IntegratorConfig::validate() const {
  if (!(rel_tol > 0.0) || !(abs_tol > 0.0))
    fail(ErrorCode::InvalidArgument, "integrator: tolerances must be positive");
  if (max_step < 0.0 || t_end < 0.0 || sample_interval < 0.0 || fixed_step < 0.0 || audit_bound < 0.0)
    fail(ErrorCode::InvalidArgument, "integrator: negative durations are not allowed");
  // A sample_interval coarser than t_end is capped to t_end, not rejected.
}

namespace {

using Vec6 = std::array<double, 6>;

Vec6 to_vec(const PendulumState &s) { return {s.z0, s.theta0, s.z1, s.theta1, s.z2, s.theta2}; }
PendulumState to_state(const Vec6 &v) { return {v[0], v[1], v[2], v[3], v[4], v[5]}; }

Vec6 rhs(const Vec6 &y, const ModelParams &p, Model model) {
  const PendulumState s = to_state(y);
  switch (model) {
    case Model::Full: {
      const PendulumState d = eom_full(s, p);
      return {d.z0, d.theta0, d.z1, d.theta1, d.z2, d.theta2};
    }
    case Model::Averaged: {
      const AveragedState d = eom_averaged({s.z0, s.theta0, s.z1, s.theta1}, s.z2, p);
      return {d.z0, d.theta0, d.z1, d.theta1, 0.0, 0.0};
    }
    case Model::TwoMode: {
      const auto [dz0, dth0] = eom_two_mode(s.z0, s.theta0, s.z2, p);
      return {dz0, dth0, 0.0, 0.0, 0.0, 0.0};
    }
  }
  fail(ErrorCode::InvalidArgument, "integrator: unknown model");
}

double energy_of(const Vec6 &y, const ModelParams &p, Model model) {
  const PendulumState s = to_state(y);
  switch (model) {
    case Model::Full:
      return hamiltonian(s, p);
    case Model::Averaged:
      return hamiltonian_averaged({s.z0, s.theta0, s.z1, s.theta1}, s.z2, p);
    case Model::TwoMode:
      return hamiltonian_two_mode(s.z0, s.theta0, s.z2, p);
  }
  fail(ErrorCode::InvalidArgument, "integrator: unknown model");
}

constexpr double kBoundaryTol = 1e-9;

bool near_boundary(const Vec6 &y, Model model) {
  const double z2 = y[4];
  if (model == Model::Full && std::abs(z2) >= 1.0 - kBoundaryTol) return true;
  if (std::abs(y[0]) >= zl_bound(0, z2) - kBoundaryTol) return true;
  if (model != Model::TwoMode && std::abs(y[2]) >= zl_bound(1, z2) - kBoundaryTol) return true;
  return false;
}

// Dormand–Prince 5(4) tableau.
constexpr double kC[7] = {0.0, 1.0 / 5, 3.0 / 10, 4.0 / 5, 8.0 / 9, 1.0, 1.0};
constexpr double kA[7][6] = {
    {},
    {1.0 / 5},
    {3.0 / 40, 9.0 / 40},
    {44.0 / 45, -56.0 / 15, 32.0 / 9},
    {19372.0 / 6561, -25360.0 / 2187, 64448.0 / 6561, -212.0 / 729},
    {9017.0 / 3168, -355.0 / 33, 46732.0 / 5247, 49.0 / 176, -5103.0 / 18656},
    {35.0 / 384, 0.0, 500.0 / 1113, 125.0 / 192, -2187.0 / 6784, 11.0 / 84},
};
// b5 - b4: error-estimate weights for the embedded fourth-order solution.
constexpr double kE[7] = {71.0 / 57600, 0.0,          -71.0 / 16695, 71.0 / 1920,
                          -17253.0 / 339200, 22.0 / 525, -1.0 / 40};

struct Sampler {
  Trajectory *traj;
  const ModelParams *params;
  Model model;
  double h0 = std::numeric_limits<double>::quiet_NaN();
  double audit_bound = 0.0;
  bool audit_exceeded = false;

  void record(double t, const Vec6 &y) {
    traj->times.push_back(t);
    traj->states.push_back(to_state(y));
    traj->energy.push_back(energy_of(y, *params, model));
  }

  // Energy audit at every accepted step, sampled or not.
  void audit(const Vec6 &y) {
    const double h = energy_of(y, *params, model);
    if (std::isnan(h0)) h0 = h;
    const double drift = std::abs(h - h0) / std::max(std::abs(h0), 1e-3);
    traj->max_energy_drift = std::max(traj->max_energy_drift, drift);
    if (audit_bound > 0.0 && drift > audit_bound) audit_exceeded = true;
  }
};

// Smallest step worth attempting, relative to the current time magnitude.
constexpr double kStepFloorScale = 1e3 * std::numeric_limits<double>::epsilon();

// Repeated accumulation of sample_interval can leave a stop boundary an
// ulp-scale sliver away from the horizon; treat such a boundary as the
// horizon itself so the leftover never reads as a collapsed step.
double snap_stop(double next_sample, double t_end) {
  const double stop = std::min(next_sample, t_end);
  if (t_end - stop < kStepFloorScale * std::max(1.0, t_end)) return t_end;
  return stop;
}

void run_dopri54(Vec6 y, double t_end, double sample_interval, double h_init, double max_step,
                 double rel_tol, double abs_tol, const ModelParams &p, Model model, Sampler &smp) {
  Trajectory &traj = *smp.traj;
  double t = 0.0;
  smp.audit(y);
  smp.record(t, y);
  double next_sample = sample_interval;

  std::array<Vec6, 7> k;
  bool have_k0 = false;
  double h = h_init;
  double facold = 1e-4;
  bool last_rejected = false;
  int consecutive_rejects = 0;
  while (t < t_end) {
    const double stop = snap_stop(next_sample, t_end);
    if (max_step > 0.0) h = std::min(h, max_step);
    const bool clipped = t + h >= stop;
    const double h_try = clipped ? stop - t : h;
    if (h_try < kStepFloorScale * std::max(1.0, std::abs(t))) {
      traj.termination = Termination::StepFailure;
      return;
    }

    bool stage_failed = false;
    Vec6 y_new{}, err_vec{};
    try {
      if (!have_k0) {
        k[0] = rhs(y, p, model);
        have_k0 = true;
      }
      for (int s = 1; s < 7; ++s) {
        Vec6 ys = y;
        for (int j = 0; j < s; ++j)
          for (int i = 0; i < 6; ++i) ys[i] += h_try * kA[s][j] * k[j][i];
        k[s] = rhs(ys, p, model);
      }
      // Stage 7 evaluates at the fifth-order solution point (FSAL).
      for (int i = 0; i < 6; ++i) {
        y_new[i] = y[i];
        for (int j = 0; j < 6; ++j) y_new[i] += h_try * kA[6][j] * k[j][i];
        double e = 0.0;
        for (int j = 0; j < 7; ++j) e += kE[j] * k[j][i];
        err_vec[i] = h_try * e;
      }
    } catch (const Error &ex) {
      if (ex.code() != ErrorCode::OutOfBounds) throw;
      stage_failed = true;
    }

    double err = 2.0;
    if (!stage_failed) {
      double acc = 0.0;
      for (int i = 0; i < 6; ++i) {
        const double sc = abs_tol + rel_tol * std::max(std::abs(y[i]), std::abs(y_new[i]));
        const double q = err_vec[i] / sc;
        acc += q * q;
      }
      err = std::sqrt(acc / 6.0);
    }

    if (err <= 1.0) {
      t = clipped ? stop : t + h_try;
      y = y_new;
      k[0] = k[6];  // first-same-as-last
      smp.audit(y);
      if (smp.audit_exceeded) {
        smp.record(t, y);
        traj.termination = Termination::StepFailure;
        return;
      }
      const bool on_sample = clipped && stop == next_sample;
      if (on_sample || t >= t_end) {
        smp.record(t, y);
        while (next_sample <= t + 1e-12 * std::max(1.0, t)) next_sample += sample_interval;
      }
      if (near_boundary(y, model)) {
        if (traj.times.empty() || traj.times.back() != t) smp.record(t, y);
        traj.termination = Termination::BoundaryHit;
        return;
      }
      // PI controller (accepted branch).
      const double expo1 = 0.2 - 0.04 * 0.75;
      const double fac11 = std::pow(std::max(err, 1e-30), expo1);
      double fac = fac11 / std::pow(facold, 0.04);
      fac = std::clamp(fac / 0.9, 0.1, 5.0);
      double h_new = h_try / fac;
      if (last_rejected) h_new = std::min(h_new, h_try);
      h = h_new;
      facold = std::max(err, 1e-4);
      last_rejected = false;
      consecutive_rejects = 0;
    } else {
      have_k0 = !stage_failed && have_k0;  // k[0] is still f(y) unless stages never ran
      if (stage_failed) {
        h = h_try * 0.25;
      } else {
        const double fac11 = std::pow(err, 0.2 - 0.04 * 0.75);
        h = h_try / std::min(5.0, fac11 / 0.9);
      }
      last_rejected = true;
      if (++consecutive_rejects > 1000) {
        traj.termination = Termination::StepFailure;
        return;
      }
    }
  }
  traj.termination = Termination::Completed;
}

void run_rkf78(Vec6 y, double t_end, double sample_interval, double dt_req, const ModelParams &p,
               Model model, Sampler &smp) {
  Trajectory &traj = *smp.traj;
  boost::numeric::odeint::runge_kutta_fehlberg78<Vec6> stepper;
  auto sys = [&](const Vec6 &state, Vec6 &dxdt, double) { dxdt = rhs(state, p, model); };

  double t = 0.0;
  smp.audit(y);
  smp.record(t, y);
  double next_sample = sample_interval;
  while (t < t_end) {
    const double stop = snap_stop(next_sample, t_end);
    const long steps = std::max(1L, std::lround(std::ceil((stop - t) / dt_req)));
    const double dt = (stop - t) / static_cast<double>(steps);
    try {
      for (long i = 0; i < steps; ++i) {
        stepper.do_step(sys, y, t + i * dt, dt);
        smp.audit(y);
        if (smp.audit_exceeded || near_boundary(y, model)) {
          smp.record(t + (i + 1) * dt, y);
          traj.termination =
              smp.audit_exceeded ? Termination::StepFailure : Termination::BoundaryHit;
          return;
        }
      }
    } catch (const Error &ex) {
      if (ex.code() != ErrorCode::OutOfBounds) throw;
      traj.termination = near_boundary(y, model) ? Termination::BoundaryHit : Termination::StepFailure;
      return;
    }
    t = stop;
    smp.record(t, y);
    if (stop == next_sample) next_sample += sample_interval;
  }
  traj.termination = Termination::Completed;
}

}  // namespace

double auto_t_end(const PendulumState &initial, const ModelParams &p) {
  const double w0_sq = p.j0 * (2.0 * p.nu0 * (1.0 + initial.z2) + 4.0 * p.j0);
  if (!(w0_sq > 0.0))
    fail(ErrorCode::InvalidArgument, "integrator: cannot derive t_end, set it explicitly");
  return 50.0 * 2.0 * std::numbers::pi / std::sqrt(w0_sq);
}

double auto_initial_step(const PendulumState &initial, const ModelParams &p) {
  // Resolve the fastest angular scale: the theta2 rotation at ~delta_e and
  // the upper normal mode.
  double fast = std::abs(p.delta_e);
  try {
    fast = std::max(fast, normal_mode_frequencies(p, initial.z2).omega_plus);
  } catch (const Error &) {
    // Outside the oscillatory neighborhood the gap alone sets the scale.
  }
  if (!(fast > 0.0)) fast = 1.0;
  return 0.01 / fast;
}

Trajectory integrate(const PendulumState &initial, const ModelParams &params,
                     const IntegratorConfig &cfg) {
  cfg.validate();
  const Vec6 y0 = to_vec(initial);
  if (near_boundary(y0, cfg.model))
    fail(ErrorCode::OutOfBounds, "integrator: initial state is at a depletion bound");

  const double t_end = cfg.t_end > 0.0 ? cfg.t_end : auto_t_end(initial, params);
  double sample_interval = cfg.sample_interval > 0.0 ? cfg.sample_interval : t_end / 5000.0;
  sample_interval = std::min(sample_interval, t_end);

  Trajectory traj;
  traj.model = cfg.model;
  Sampler smp{&traj, &params, cfg.model};
  smp.audit_bound = cfg.audit_bound;

  const double h0 = std::min(auto_initial_step(initial, params),
                             cfg.max_step > 0.0 ? cfg.max_step : std::numeric_limits<double>::max());
  if (cfg.scheme == Scheme::Dopri54) {
    run_dopri54(y0, t_end, sample_interval, h0, cfg.max_step, cfg.rel_tol, cfg.abs_tol, params,
                cfg.model, smp);
  } else {
    const double dt = cfg.fixed_step > 0.0 ? cfg.fixed_step : h0;
    run_rkf78(y0, t_end, sample_interval, dt, params, cfg.model, smp);
  }
  return traj;
}

}  // namespace dw4
