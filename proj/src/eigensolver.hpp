#pragma once
// 1D Schrödinger eigensolver for the Duffing double well and the model
// coefficients built from its lowest two doublets.

#include "types.hpp"

namespace dw4 {

// Number of eigenpairs computed by solve_spectrum.
inline constexpr int kSpectrumStates = 8;

// Kinetic prefactor in recoil units: H = -(1/4π²) d²/dz² + V(z) once
// lengths are measured in well separations and energies in recoils.
double kinetic_prefactor();

// Lowest kSpectrumStates eigenpairs on a uniform interior grid (fourth
// order five-point Laplacian, Dirichlet boundaries). Wavefunctions carry
// a fixed sign convention: positive at their |z| < 0 peak region.
// Throws DomainTooSmall when any of the four lowest states fails to decay
// below 1e-6 at the box edge, NotConverged on LAPACK failure.
EigenSolution solve_spectrum(const PotentialSpec &spec);

// Left/right localized combinations (phi_2l ∓ phi_2l+1)/√2 with the sign
// chosen so psi_L has its dominant weight at z < 0. Throws
// ParityViolation when the doublet states do not alternate parity.
LocalizedModes build_localized_modes(const EigenSolution &sol);

// gamma-independent pieces: doublet means e_l, half-splittings j_l, and
// the quartic/cross overlap integrals of the localized modes.
CoefficientIntegrals coefficient_integrals(const EigenSolution &sol, const LocalizedModes &modes);

// Scale integrals by the interaction strength. Throws NegativeSplitting
// when a doublet is inverted.
ModelParams params_from_integrals(const CoefficientIntegrals &ci, double gamma);

// Full pipeline: solve, localize, assemble.
ModelParams compute_model_params(const EigenSolution &sol, const LocalizedModes &modes, double gamma);

// Hopping via the localized-mode matrix element -⟨psi_L| H |psi_R⟩ of the
// discretized Hamiltonian; used to cross-check the splitting route.
double hopping_integral(const EigenSolution &sol, const LocalizedModes &modes, int level,
                        const PotentialSpec &spec);

// Trapezoidal quadrature on the solver grid.
double trapezoid(const std::vector<double> &values, double dz);

// Parity of a state about z = 0: +1 even, -1 odd (tolerance-checked).
int parity_of(const std::vector<double> &psi, double dz);

}  // namespace dw4
