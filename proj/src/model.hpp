#pragma once
// The reduced six-variable model: renormalized Hamiltonian, exact
// equations of motion, phase-averaged and linearized variants, normal
// modes, the well/level-basis transformation, and regime indicators.

#include <optional>
#include <utility>

#include "types.hpp"

namespace dw4 {

// Renormalized energy H' = 2H/N - E0 - E1 of the reduced system. Throws
// OutOfBounds when a square-root argument is negative.
double hamiltonian(const PendulumState &state, const ModelParams &params);

// Same energy evaluated in the well/level basis (mode populations and
// phases); independent route used to validate the reduced form.
double hamiltonian_lab(const LabState &lab, const ModelParams &params);

// Exact canonical derivatives: dz_i/dt = -dH'/dtheta_i, dtheta_i/dt = +dH'/dz_i.
// Throws OutOfBounds when (1±z2)² - 4 z_l² is not positive.
PendulumState eom_full(const PendulumState &state, const ModelParams &params);

// Ground/excited pendulum pair with z2 held fixed and the fast theta2
// rotation averaged out.
struct AveragedState {
  double z0 = 0, theta0 = 0, z1 = 0, theta1 = 0;
};

AveragedState eom_averaged(const AveragedState &state, double z2, const ModelParams &params);

// Conserved energy of the averaged flow.
double hamiltonian_averaged(const AveragedState &state, double z2, const ModelParams &params);

// Linearization of the averaged flow about z_l = theta_l = 0.
AveragedState eom_linearized(const AveragedState &state, double z2, const ModelParams &params);

// Isolated ground-level pendulum (inter-level coupling dropped), used as
// the two-mode comparison model.
double hamiltonian_two_mode(double z0, double theta0, double z2, const ModelParams &params);
std::pair<double, double> eom_two_mode(double z0, double theta0, double z2, const ModelParams &params);

struct NormalModes {
  double omega_minus = 0, omega0 = 0, omega1 = 0, omega_plus = 0;
};

// Small-oscillation frequencies about the balanced state at fixed z2.
// The uncoupled frequencies satisfy omega_l² = J_l(2 NU_l [1+(-1)^l z2] + 4 J_l);
// the coupled pair brackets them. Throws NegativeSquare when the lower
// normal mode turns imaginary (leaving the oscillatory neighborhood).
NormalModes normal_mode_frequencies(const ModelParams &params, double z2);

// Well/level basis <-> reduced variables. The reduction drops the total
// phase, returned separately so the map is invertible.
std::pair<PendulumState, double> to_pendulum(const LabState &lab);
LabState from_pendulum(const PendulumState &state, double total_phase);

// Interaction-versus-hopping indicators and the regime label. v0 enables
// the barrier-above-E1 validity check; n_atoms enables the Fock test.
RegimeIndicators classify_regime(const ModelParams &params, std::optional<double> n_atoms = std::nullopt,
                                 std::optional<double> v0 = std::nullopt);

}  // namespace dw4
