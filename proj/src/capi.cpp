#include "dwell4.h"

#include <cmath>
#include <cstring>
#include <exception>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "analysis.hpp"
#include "cache.hpp"
#include "fixed_points.hpp"
#include "integrator.hpp"
#include "io.hpp"
#include "model.hpp"
#include "regime_map.hpp"
#include "types.hpp"

struct dw4_trajectory {
  dw4::Trajectory traj;
};

namespace {

thread_local std::string t_last_error;

dw4_status map_code(dw4::ErrorCode code) {
  using EC = dw4::ErrorCode;
  switch (code) {
    case EC::InvalidArgument: return DW4_ERR_INVALID_ARGUMENT;
    case EC::DomainTooSmall: return DW4_ERR_DOMAIN_TOO_SMALL;
    case EC::NotConverged: return DW4_ERR_NOT_CONVERGED;
    case EC::ParityViolation: return DW4_ERR_PARITY_VIOLATION;
    case EC::NegativeSplitting: return DW4_ERR_NEGATIVE_SPLITTING;
    case EC::OutOfBounds: return DW4_ERR_OUT_OF_BOUNDS;
    case EC::DegeneratePopulation: return DW4_ERR_DEGENERATE_POPULATION;
    case EC::NegativeSquare: return DW4_ERR_NEGATIVE_SQUARE;
    case EC::StepFailure: return DW4_ERR_STEP_FAILURE;
    case EC::InsufficientOscillations: return DW4_ERR_INSUFFICIENT_OSCILLATIONS;
    case EC::NoCrossings: return DW4_ERR_NO_CROSSINGS;
    case EC::NotAFixedPoint: return DW4_ERR_NOT_A_FIXED_POINT;
    case EC::NoCriticalPoint: return DW4_ERR_NO_CRITICAL_POINT;
    case EC::DegenerateDenominator: return DW4_ERR_DEGENERATE_DENOMINATOR;
    case EC::NoRootInRange: return DW4_ERR_NO_ROOT_IN_RANGE;
    case EC::IoError: return DW4_ERR_IO;
  }
  return DW4_ERR_INTERNAL;
}

template <typename Fn>
dw4_status guarded(Fn &&fn) {
  try {
    fn();
    t_last_error.clear();
    return DW4_OK;
  } catch (const dw4::Error &ex) {
    t_last_error = ex.what();
    return map_code(ex.code());
  } catch (const std::exception &ex) {
    t_last_error = ex.what();
    return DW4_ERR_INTERNAL;
  } catch (...) {
    t_last_error = "unknown failure";
    return DW4_ERR_INTERNAL;
  }
}

dw4_status invalid(const char *msg) {
  t_last_error = msg;
  return DW4_ERR_INVALID_ARGUMENT;
}

dw4::ModelParams to_params(const dw4_params *p) {
  return {p->e0, p->e1, p->j0, p->j1, p->nu0, p->nu1, p->nu01, p->delta_e};
}

void from_params(const dw4::ModelParams &p, dw4_params *out) {
  out->e0 = p.e0;
  out->e1 = p.e1;
  out->j0 = p.j0;
  out->j1 = p.j1;
  out->nu0 = p.nu0;
  out->nu1 = p.nu1;
  out->nu01 = p.nu01;
  out->delta_e = p.delta_e;
}

dw4::PendulumState to_state(const dw4_state *s) {
  return {s->z0, s->theta0, s->z1, s->theta1, s->z2, s->theta2};
}

void from_state(const dw4::PendulumState &s, dw4_state *out) {
  out->z0 = s.z0;
  out->theta0 = s.theta0;
  out->z1 = s.z1;
  out->theta1 = s.theta1;
  out->z2 = s.z2;
  out->theta2 = s.theta2;
}

std::unique_ptr<dw4::CoefficientCache> make_cache(const char *path) {
  if (path == nullptr || path[0] == '\0') return nullptr;
  return std::make_unique<dw4::CoefficientCache>(path);
}

dw4::PotentialSpec to_spec(const dw4_solver_options *opts) {
  dw4::PotentialSpec spec;
  spec.v0 = opts->v0;
  if (opts->domain_halfwidth > 0.0) spec.domain_halfwidth = opts->domain_halfwidth;
  if (opts->grid_points > 0) spec.grid_points = opts->grid_points;
  return spec;
}

dw4::IntegratorConfig to_config(const dw4_integrator_options *opts) {
  dw4::IntegratorConfig cfg;
  if (opts == nullptr) return cfg;
  if (opts->rel_tol > 0.0) cfg.rel_tol = opts->rel_tol;
  if (opts->abs_tol > 0.0) cfg.abs_tol = opts->abs_tol;
  cfg.max_step = opts->max_step > 0.0 ? opts->max_step : 0.0;
  cfg.t_end = opts->t_end > 0.0 ? opts->t_end : 0.0;
  cfg.sample_interval = opts->sample_interval > 0.0 ? opts->sample_interval : 0.0;
  cfg.fixed_step = opts->fixed_step > 0.0 ? opts->fixed_step : 0.0;
  switch (opts->model) {
    case DW4_MODEL_FULL: cfg.model = dw4::Model::Full; break;
    case DW4_MODEL_AVERAGED: cfg.model = dw4::Model::Averaged; break;
    case DW4_MODEL_TWO_MODE: cfg.model = dw4::Model::TwoMode; break;
    default: dw4::fail(dw4::ErrorCode::InvalidArgument, "unknown model selector");
  }
  switch (opts->scheme) {
    case DW4_SCHEME_DOPRI54: cfg.scheme = dw4::Scheme::Dopri54; break;
    case DW4_SCHEME_RKF78_FIXED: cfg.scheme = dw4::Scheme::Rkf78Fixed; break;
    default: dw4::fail(dw4::ErrorCode::InvalidArgument, "unknown scheme selector");
  }
  return cfg;
}

dw4::Var to_var(int v) {
  if (v < 0 || v > 5) dw4::fail(dw4::ErrorCode::InvalidArgument, "variable selector out of range");
  return static_cast<dw4::Var>(v);
}

int stability_code(dw4::Stability s) {
  switch (s) {
    case dw4::Stability::Center: return DW4_STABILITY_CENTER;
    case dw4::Stability::Unstable: return DW4_STABILITY_UNSTABLE;
    case dw4::Stability::Mixed: return DW4_STABILITY_MIXED;
  }
  return DW4_STABILITY_MIXED;
}

dw4::SweepGrid to_grid(const dw4_sweep_options *opts) {
  dw4::SweepGrid grid;
  if (opts->v0_count > 0) {
    grid.v0_min = opts->v0_min;
    grid.v0_max = opts->v0_max;
    grid.v0_count = opts->v0_count;
  }
  if (opts->gamma_count > 0) {
    grid.gamma_min = opts->gamma_min;
    grid.gamma_max = opts->gamma_max;
    grid.gamma_count = opts->gamma_count;
  }
  grid.log_gamma = opts->log_gamma != 0;
  if (opts->grid_points > 0) grid.grid_points = opts->grid_points;
  if (opts->domain_halfwidth > 0.0) grid.domain_halfwidth = opts->domain_halfwidth;
  return grid;
}

}  // namespace

extern "C" {

const char *dw4_version(void) { return dw4::kVersionString; }

const char *dw4_last_error(void) { return t_last_error.c_str(); }

dw4_status dw4_compute_params(const dw4_solver_options *opts, double gamma, dw4_params *out) {
  if (opts == nullptr || out == nullptr) return invalid("compute_params: null argument");
  return guarded([&] {
    auto cache = make_cache(opts->cache_path);
    from_params(dw4::coefficients_for(to_spec(opts), gamma, cache.get()), out);
  });
}

dw4_status dw4_hamiltonian(const dw4_state *state, const dw4_params *params, double *out) {
  if (state == nullptr || params == nullptr || out == nullptr)
    return invalid("hamiltonian: null argument");
  return guarded([&] { *out = dw4::hamiltonian(to_state(state), to_params(params)); });
}

dw4_status dw4_eom_full(const dw4_state *state, const dw4_params *params, dw4_state *out) {
  if (state == nullptr || params == nullptr || out == nullptr)
    return invalid("eom_full: null argument");
  return guarded([&] { from_state(dw4::eom_full(to_state(state), to_params(params)), out); });
}

dw4_status dw4_normal_modes(const dw4_params *params, double z2, double out[4]) {
  if (params == nullptr || out == nullptr) return invalid("normal_modes: null argument");
  return guarded([&] {
    const dw4::NormalModes nm = dw4::normal_mode_frequencies(to_params(params), z2);
    out[0] = nm.omega_minus;
    out[1] = nm.omega0;
    out[2] = nm.omega1;
    out[3] = nm.omega_plus;
  });
}

dw4_status dw4_classify(const dw4_params *params, double v0, double n_atoms, dw4_regime_info *out) {
  if (params == nullptr || out == nullptr) return invalid("classify: null argument");
  return guarded([&] {
    std::optional<double> v = std::isnan(v0) ? std::nullopt : std::optional<double>(v0);
    std::optional<double> n = n_atoms > 0.0 ? std::optional<double>(n_atoms) : std::nullopt;
    const dw4::RegimeIndicators ind = dw4::classify_regime(to_params(params), n, v);
    out->chi0 = ind.chi0;
    out->chi1 = ind.chi1;
    out->chi01 = ind.chi01;
    switch (ind.regime) {
      case dw4::Regime::Rabi: out->regime = DW4_REGIME_RABI; break;
      case dw4::Regime::Mixed: out->regime = DW4_REGIME_MIXED; break;
      case dw4::Regime::Josephson: out->regime = DW4_REGIME_JOSEPHSON; break;
      case dw4::Regime::Fock: out->regime = DW4_REGIME_FOCK; break;
      case dw4::Regime::Invalid: out->regime = DW4_REGIME_INVALID; break;
    }
    auto validity = [](dw4::Validity val) {
      switch (val) {
        case dw4::Validity::Validated: return DW4_VALIDITY_VALIDATED;
        case dw4::Validity::Marginal: return DW4_VALIDITY_MARGINAL;
        case dw4::Validity::Invalid: break;
      }
      return DW4_VALIDITY_INVALID;
    };
    out->hopping_validity = validity(ind.hopping_validity);
    out->coupling_validity = validity(ind.coupling_validity);
    out->barrier_above_e1 = ind.barrier_above_e1 ? 1 : 0;
    out->fock_determined = ind.fock_determined ? 1 : 0;
  });
}

dw4_status dw4_integrate(const dw4_state *initial, const dw4_params *params,
                         const dw4_integrator_options *opts, dw4_trajectory **out) {
  if (initial == nullptr || params == nullptr || out == nullptr)
    return invalid("integrate: null argument");
  *out = nullptr;
  return guarded([&] {
    auto holder = std::make_unique<dw4_trajectory>();
    holder->traj = dw4::integrate(to_state(initial), to_params(params), to_config(opts));
    *out = holder.release();
  });
}

size_t dw4_traj_length(const dw4_trajectory *traj) {
  return traj == nullptr ? 0 : traj->traj.times.size();
}

dw4_status dw4_traj_sample(const dw4_trajectory *traj, size_t index, double *t, dw4_state *state,
                           double *energy) {
  if (traj == nullptr) return invalid("traj_sample: null trajectory");
  if (index >= traj->traj.times.size()) return invalid("traj_sample: index out of range");
  if (t != nullptr) *t = traj->traj.times[index];
  if (state != nullptr) from_state(traj->traj.states[index], state);
  if (energy != nullptr) *energy = traj->traj.energy[index];
  t_last_error.clear();
  return DW4_OK;
}

int dw4_traj_termination(const dw4_trajectory *traj) {
  if (traj == nullptr) return DW4_TERMINATION_STEP_FAILURE;
  switch (traj->traj.termination) {
    case dw4::Termination::Completed: return DW4_TERMINATION_COMPLETED;
    case dw4::Termination::BoundaryHit: return DW4_TERMINATION_BOUNDARY_HIT;
    case dw4::Termination::StepFailure: break;
  }
  return DW4_TERMINATION_STEP_FAILURE;
}

double dw4_traj_max_drift(const dw4_trajectory *traj) {
  return traj == nullptr ? 0.0 : traj->traj.max_energy_drift;
}

void dw4_traj_free(dw4_trajectory *traj) { delete traj; }

dw4_status dw4_traj_write_csv(const dw4_trajectory *traj, const char *csv_path,
                              const char *manifest_path, const char *config_json) {
  if (traj == nullptr || csv_path == nullptr) return invalid("traj_write_csv: null argument");
  return guarded([&] {
    dw4::write_trajectory_csv(csv_path, traj->traj);
    if (manifest_path != nullptr && config_json != nullptr)
      dw4::write_manifest(manifest_path, config_json);
  });
}

dw4_status dw4_estimate_frequency(const dw4_trajectory *traj, int variable, double *frequency,
                                  double *uncertainty) {
  if (traj == nullptr || frequency == nullptr) return invalid("estimate_frequency: null argument");
  return guarded([&] {
    const dw4::FrequencyEstimate est = dw4::estimate_frequency(traj->traj, to_var(variable));
    *frequency = est.omega;
    if (uncertainty != nullptr) *uncertainty = est.uncertainty;
  });
}

dw4_status dw4_self_trapping(const dw4_trajectory *traj, int variable, dw4_trapping *out) {
  if (traj == nullptr || out == nullptr) return invalid("self_trapping: null argument");
  return guarded([&] {
    const dw4::TrappingReport rep = dw4::detect_self_trapping(traj->traj, to_var(variable));
    out->trapped = rep.trapped ? 1 : 0;
    out->time_mean = rep.time_mean;
    out->min = rep.min;
    out->max = rep.max;
  });
}

dw4_status dw4_poincare_csv(const dw4_trajectory *traj, int section_var, double value,
                            int direction, int plane_x, int plane_y, const char *path,
                            double *hull_area, int *chaos_candidate) {
  if (traj == nullptr) return invalid("poincare: null trajectory");
  return guarded([&] {
    const dw4::PoincareResult res = dw4::poincare_section(
        traj->traj, to_var(section_var), value, direction, to_var(plane_x), to_var(plane_y));
    if (path != nullptr) dw4::write_poincare_csv(path, res, to_var(plane_x), to_var(plane_y));
    if (hull_area != nullptr) *hull_area = res.hull_area;
    if (chaos_candidate != nullptr) *chaos_candidate = res.chaos_candidate ? 1 : 0;
  });
}

dw4_status dw4_analytic_fixed_points(const dw4_params *params, dw4_fixed_point out[8]) {
  if (params == nullptr || out == nullptr) return invalid("analytic_fixed_points: null argument");
  return guarded([&] {
    const auto table = dw4::analytic_fixed_points(to_params(params));
    for (std::size_t i = 0; i < table.size(); ++i) {
      const dw4::FixedPointReport &r = table[i];
      out[i].k0 = r.k0;
      out[i].k1 = r.k1;
      out[i].k2 = r.k2;
      out[i].z2_0 = r.z2_0;
      out[i].exists = r.exists ? 1 : 0;
      out[i].stability = stability_code(r.stability);
      for (int k = 0; k < 6; ++k) {
        out[i].eig_re[k] = r.eigenvalues[k].real();
        out[i].eig_im[k] = r.eigenvalues[k].imag();
      }
    }
  });
}

dw4_status dw4_pitchfork_points(const dw4_params *params, double z2, dw4_pitchfork *out) {
  if (params == nullptr || out == nullptr) return invalid("pitchfork_points: null argument");
  return guarded([&] {
    const dw4::PitchforkBranches b = dw4::pitchfork_points(to_params(params), z2);
    out->exists = b.exists ? 1 : 0;
    out->z0_plus = b.z0_plus;
    out->z0_minus = b.z0_minus;
    out->physical = b.physical ? 1 : 0;
    out->residual = b.residual;
  });
}

dw4_status dw4_critical_imbalance(const dw4_params *params, double z2, double *out) {
  if (params == nullptr || out == nullptr) return invalid("critical_imbalance: null argument");
  return guarded([&] { *out = dw4::critical_imbalance(to_params(params), z2); });
}

dw4_status dw4_effective_fixed_points(const dw4_params *params, double z2, double z0_frozen,
                                      dw4_eff_fixed_point *out, size_t cap, size_t *count) {
  if (params == nullptr || count == nullptr) return invalid("effective_fixed_points: null argument");
  return guarded([&] {
    const auto points = dw4::effective_fixed_points(to_params(params), z2, z0_frozen);
    *count = points.size();
    if (out != nullptr) {
      for (std::size_t i = 0; i < points.size() && i < cap; ++i) {
        out[i].theta1_0 = points[i].theta1_0;
        out[i].z1_0 = points[i].z1_0;
        out[i].z0_frozen = points[i].z0_frozen;
        out[i].stable = points[i].stable ? 1 : 0;
      }
    }
  });
}

dw4_status dw4_effective_scan_csv(const dw4_params *params, double z2, double z0_start,
                                  double z0_stop, double z0_step, const char *path,
                                  const char *manifest_path, const char *config_json) {
  if (params == nullptr || path == nullptr) return invalid("effective_scan: null argument");
  if (!(z0_step > 0.0) || z0_stop < z0_start)
    return invalid("effective_scan: scan range must be increasing with positive step");
  return guarded([&] {
    const dw4::ModelParams p = to_params(params);
    std::vector<dw4::EffectiveFixedPoint> all;
    const int n = int(std::floor((z0_stop - z0_start) / z0_step + 1e-9)) + 1;
    for (int i = 0; i < n; ++i) {
      const double z0 = z0_start + i * z0_step;
      const auto points = dw4::effective_fixed_points(p, z2, z0);
      all.insert(all.end(), points.begin(), points.end());
    }
    dw4::write_effective_scan_csv(path, all);
    if (manifest_path != nullptr && config_json != nullptr)
      dw4::write_manifest(manifest_path, config_json);
  });
}

dw4_status dw4_fixed_point_table_csv(const dw4_params *params, const char *path,
                                     const char *manifest_path, const char *config_json) {
  if (params == nullptr || path == nullptr) return invalid("fixed_point_table: null argument");
  return guarded([&] {
    dw4::write_fixed_point_table_csv(path, dw4::analytic_fixed_points(to_params(params)));
    if (manifest_path != nullptr && config_json != nullptr)
      dw4::write_manifest(manifest_path, config_json);
  });
}

dw4_status dw4_regime_map_csv(const dw4_sweep_options *opts, const char *csv_path,
                              const char *manifest_path, const char *config_json) {
  if (opts == nullptr || csv_path == nullptr) return invalid("regime_map: null argument");
  return guarded([&] {
    auto cache = make_cache(opts->cache_path);
    const dw4::SweepResult result = dw4::sweep(to_grid(opts), cache.get(), opts->jobs);
    dw4::write_regime_map_csv(csv_path, result);
    if (manifest_path != nullptr && config_json != nullptr)
      dw4::write_manifest(manifest_path, config_json);
  });
}

dw4_status dw4_boundary_curves_json(const dw4_sweep_options *opts, const char *path) {
  if (opts == nullptr || path == nullptr) return invalid("boundary_curves: null argument");
  return guarded([&] {
    auto cache = make_cache(opts->cache_path);
    dw4::write_boundary_json(path, dw4::boundary_curves(to_grid(opts), cache.get(), opts->jobs));
  });
}

dw4_status dw4_portrait_run(const dw4_params *params, const dw4_integrator_options *opts,
                            const dw4_state *initials, size_t n_initials, int plane_x, int plane_y,
                            int jobs, const char *out_dir, const char *config_json) {
  if (params == nullptr || initials == nullptr || out_dir == nullptr)
    return invalid("portrait_run: null argument");
  if (n_initials == 0) return invalid("portrait_run: no initial conditions");
  return guarded([&] {
    std::vector<dw4::PendulumState> ics(n_initials);
    for (size_t i = 0; i < n_initials; ++i) ics[i] = to_state(&initials[i]);
    const auto entries =
        dw4::phase_portrait(ics, to_params(params), to_config(opts), jobs);
    dw4::write_portrait(out_dir, entries, to_var(plane_x), to_var(plane_y),
                        config_json != nullptr ? config_json : "{}");
  });
}

}  // extern "C"
