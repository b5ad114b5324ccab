/*
 * dwell4 — C API for the four-mode double-well condensate toolkit.
 *
 * The library models a Bose-Einstein condensate in a symmetric 1D double
 * well keeping the lowest two single-particle levels per well (four modes).
 * It computes the model coefficients from the Duffing barrier potential,
 * integrates the semiclassical equations of motion (three coupled
 * non-rigid pendula), locates fixed points, and classifies dynamical
 * regimes over the (V0, gamma) plane.
 *
 * All functions return dw4_status; on failure dw4_last_error() gives a
 * thread-local human-readable message. Handles returned through out
 * parameters must be released with the matching *_free function.
 */
#ifndef DWELL4_H
#define DWELL4_H

#include <stddef.h>

#if defined(_WIN32)
#define DW4_API __declspec(dllexport)
#else
#define DW4_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum dw4_status {
  DW4_OK = 0,
  DW4_ERR_INVALID_ARGUMENT = 1,
  DW4_ERR_DOMAIN_TOO_SMALL = 2,
  DW4_ERR_NOT_CONVERGED = 3,
  DW4_ERR_PARITY_VIOLATION = 4,
  DW4_ERR_NEGATIVE_SPLITTING = 5,
  DW4_ERR_OUT_OF_BOUNDS = 6,
  DW4_ERR_DEGENERATE_POPULATION = 7,
  DW4_ERR_NEGATIVE_SQUARE = 8,
  DW4_ERR_STEP_FAILURE = 9,
  DW4_ERR_INSUFFICIENT_OSCILLATIONS = 10,
  DW4_ERR_NO_CROSSINGS = 11,
  DW4_ERR_NOT_A_FIXED_POINT = 12,
  DW4_ERR_NO_CRITICAL_POINT = 13,
  DW4_ERR_DEGENERATE_DENOMINATOR = 14,
  DW4_ERR_NO_ROOT_IN_RANGE = 15,
  DW4_ERR_IO = 16,
  DW4_ERR_INTERNAL = 17
} dw4_status;

/* Model coefficients: hopping and level energies plus interaction
 * energies premultiplied by atom number (N*U). Recoil units throughout. */
typedef struct dw4_params {
  double e0;
  double e1;
  double j0;
  double j1;
  double nu0;
  double nu1;
  double nu01;
  double delta_e;
} dw4_params;

/* The six canonical variables: per-level left-right imbalances and
 * phases (z0,theta0), (z1,theta1), and the ground-minus-excited pair
 * (z2,theta2). theta2 is unbounded. */
typedef struct dw4_state {
  double z0;
  double theta0;
  double z1;
  double theta1;
  double z2;
  double theta2;
} dw4_state;

/* Eigensolver configuration. cache_path NULL disables caching; an empty
 * string also disables it. */
typedef struct dw4_solver_options {
  double v0;               /* barrier height, recoil units, > 0 */
  double domain_halfwidth; /* box half width, >= 1 (wells at z = ±1/2) */
  int grid_points;         /* interior grid points, >= 64 */
  const char *cache_path;
} dw4_solver_options;

/* Equations of motion selector. */
enum { DW4_MODEL_FULL = 0, DW4_MODEL_AVERAGED = 1, DW4_MODEL_TWO_MODE = 2 };
/* Stepper selector. */
enum { DW4_SCHEME_DOPRI54 = 0, DW4_SCHEME_RKF78_FIXED = 1 };

/* Zeros select the documented defaults: rel_tol 1e-10, abs_tol 1e-12,
 * t_end = 50 slow (ground-mode) periods, sample_interval = t_end/5000,
 * max_step unlimited. */
typedef struct dw4_integrator_options {
  double rel_tol;
  double abs_tol;
  double max_step;
  double t_end;
  double sample_interval;
  int model;  /* DW4_MODEL_* */
  int scheme; /* DW4_SCHEME_* */
  double fixed_step; /* RKF78 only; 0 = auto */
} dw4_integrator_options;

enum { DW4_REGIME_RABI = 0, DW4_REGIME_MIXED = 1, DW4_REGIME_JOSEPHSON = 2, DW4_REGIME_FOCK = 3, DW4_REGIME_INVALID = 4 };
enum { DW4_VALIDITY_VALIDATED = 0, DW4_VALIDITY_MARGINAL = 1, DW4_VALIDITY_INVALID = 2 };

typedef struct dw4_regime_info {
  double chi0;
  double chi1;
  double chi01;
  int regime;            /* DW4_REGIME_* */
  int hopping_validity;  /* DW4_VALIDITY_*, worst of J_l/dE against the smallness bands */
  int coupling_validity; /* DW4_VALIDITY_* for chi01 */
  int barrier_above_e1;  /* 1 if V0 >= E1, or if V0 was not supplied */
  int fock_determined;   /* 1 when an atom number was supplied to test the Fock condition */
} dw4_regime_info;

enum { DW4_TERMINATION_COMPLETED = 0, DW4_TERMINATION_BOUNDARY_HIT = 1, DW4_TERMINATION_STEP_FAILURE = 2 };

/* Trajectory variable indices for frequency/trapping/Poincare selectors. */
enum { DW4_VAR_Z0 = 0, DW4_VAR_THETA0 = 1, DW4_VAR_Z1 = 2, DW4_VAR_THETA1 = 3, DW4_VAR_Z2 = 4, DW4_VAR_THETA2 = 5 };

enum { DW4_STABILITY_CENTER = 0, DW4_STABILITY_UNSTABLE = 1, DW4_STABILITY_MIXED = 2 };

typedef struct dw4_trajectory dw4_trajectory;

DW4_API const char *dw4_version(void);
DW4_API const char *dw4_last_error(void);

/* Solve the double-well spectrum and assemble coefficients for the given
 * interaction scale gamma. Uses/updates the cache when a path is set. */
DW4_API dw4_status dw4_compute_params(const dw4_solver_options *opts, double gamma, dw4_params *out);

/* Renormalized Hamiltonian H' of the reduced six-variable system. */
DW4_API dw4_status dw4_hamiltonian(const dw4_state *state, const dw4_params *params, double *out);

/* Exact time derivatives of the six variables (canonical gradients of H'). */
DW4_API dw4_status dw4_eom_full(const dw4_state *state, const dw4_params *params, dw4_state *out);

/* Small-oscillation frequencies about the balanced state at fixed z2:
 * out = {omega_minus, omega0, omega1, omega_plus}. */
DW4_API dw4_status dw4_normal_modes(const dw4_params *params, double z2, double out[4]);

/* Regime classification. Pass v0 = NAN when the barrier height is not
 * known; pass n_atoms = 0 when no atom number is available (the Fock
 * condition is then left undetermined). */
DW4_API dw4_status dw4_classify(const dw4_params *params, double v0, double n_atoms, dw4_regime_info *out);

DW4_API dw4_status dw4_integrate(const dw4_state *initial, const dw4_params *params,
                                 const dw4_integrator_options *opts, dw4_trajectory **out);
DW4_API size_t dw4_traj_length(const dw4_trajectory *traj);
DW4_API dw4_status dw4_traj_sample(const dw4_trajectory *traj, size_t index, double *t, dw4_state *state, double *energy);
DW4_API int dw4_traj_termination(const dw4_trajectory *traj);
DW4_API double dw4_traj_max_drift(const dw4_trajectory *traj);
DW4_API void dw4_traj_free(dw4_trajectory *traj);

/* Write "t,z0,theta0,z1,theta1,z2,theta2,energy" in full double precision.
 * manifest_path / config_json may be NULL to skip the manifest. */
DW4_API dw4_status dw4_traj_write_csv(const dw4_trajectory *traj, const char *csv_path,
                                      const char *manifest_path, const char *config_json);

DW4_API dw4_status dw4_estimate_frequency(const dw4_trajectory *traj, int variable, double *frequency, double *uncertainty);

typedef struct dw4_trapping {
  int trapped;
  double time_mean;
  double min;
  double max;
} dw4_trapping;

DW4_API dw4_status dw4_self_trapping(const dw4_trajectory *traj, int variable, dw4_trapping *out);

/* Poincare section of a trajectory: crossings of section_var == value in
 * the given direction (+1 rising, -1 falling, 0 both), projected on the
 * (plane_x, plane_y) plane. Writes "x,y" CSV when path is non-NULL. */
DW4_API dw4_status dw4_poincare_csv(const dw4_trajectory *traj, int section_var, double value, int direction,
                                    int plane_x, int plane_y, const char *path,
                                    double *hull_area, int *chaos_candidate);

typedef struct dw4_fixed_point {
  int k0, k1, k2;  /* branch: theta_i = k_i * pi */
  double z2_0;
  int exists;      /* |z2_0| <= 1 */
  int stability;   /* DW4_STABILITY_*, meaningful only when exists */
  double eig_re[6];
  double eig_im[6];
} dw4_fixed_point;

/* The eight balanced stationary states (z0 = z1 = 0, theta_i in {0, pi}). */
DW4_API dw4_status dw4_analytic_fixed_points(const dw4_params *params, dw4_fixed_point out[8]);

typedef struct dw4_pitchfork {
  int exists;      /* bifurcated pair exists: chi0 > 1 + z2 */
  double z0_plus;
  double z0_minus;
  int physical;    /* within the |z0| < (1+z2)/2 bound */
  double residual; /* |dtheta0/dt| of the averaged flow at (z0_plus, theta0 = pi) */
} dw4_pitchfork;

DW4_API dw4_status dw4_pitchfork_points(const dw4_params *params, double z2, dw4_pitchfork *out);

/* Merge ordinate of the two theta1 = pi effective fixed points. */
DW4_API dw4_status dw4_critical_imbalance(const dw4_params *params, double z2, double *out);

typedef struct dw4_eff_fixed_point {
  double theta1_0; /* 0 or pi */
  double z1_0;
  double z0_frozen;
  int stable;
} dw4_eff_fixed_point;

/* Stationary points of the excited-mode pendulum with the ground-mode
 * imbalance frozen at z0_frozen. Returns up to cap points. */
DW4_API dw4_status dw4_effective_fixed_points(const dw4_params *params, double z2, double z0_frozen,
                                              dw4_eff_fixed_point *out, size_t cap, size_t *count);

/* Sweep z0_frozen over [start, stop] (step > 0) and write
 * "z0_frozen,theta1_0,z1_0,stability" rows. */
DW4_API dw4_status dw4_effective_scan_csv(const dw4_params *params, double z2,
                                          double z0_start, double z0_stop, double z0_step,
                                          const char *path, const char *manifest_path, const char *config_json);

/* Fixed-point table: "k0,k1,k2,z2_0,exists,stability". */
DW4_API dw4_status dw4_fixed_point_table_csv(const dw4_params *params, const char *path,
                                             const char *manifest_path, const char *config_json);

typedef struct dw4_sweep_options {
  double v0_min, v0_max;
  int v0_count;
  double gamma_min, gamma_max;
  int gamma_count;
  int log_gamma;  /* 1 = logarithmic gamma spacing */
  int grid_points;
  double domain_halfwidth;
  const char *cache_path;
  int jobs; /* worker threads; <= 1 means sequential */
} dw4_sweep_options;

/* Classify the whole (V0, gamma) window; writes
 * "v0,gamma,chi0,chi1,chi01,regime,valid,z2_0_exists". */
DW4_API dw4_status dw4_regime_map_csv(const dw4_sweep_options *opts, const char *csv_path,
                                      const char *manifest_path, const char *config_json);

/* Boundary curves (chi levels 1 and 0.1, barrier = E1 line, stationary
 * state existence) as a JSON object of named (v0, gamma) polylines. */
DW4_API dw4_status dw4_boundary_curves_json(const dw4_sweep_options *opts, const char *path);

/* Integrate one trajectory per initial state and write per-trajectory
 * portrait CSVs ("<plane_x>,<plane_y>", phases wrapped to (-pi, pi]) plus
 * a manifest into out_dir. Failed trajectories are recorded in the
 * manifest, not fatal. */
DW4_API dw4_status dw4_portrait_run(const dw4_params *params, const dw4_integrator_options *opts,
                                    const dw4_state *initials, size_t n_initials,
                                    int plane_x, int plane_y, int jobs,
                                    const char *out_dir, const char *config_json);

#ifdef __cplusplus
}
#endif

#endif /* DWELL4_H */
