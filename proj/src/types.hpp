#pragma once
// Core domain types shared across the dwell4 library.

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace dw4 {

enum class ErrorCode {
  InvalidArgument,
  DomainTooSmall,
  NotConverged,
  ParityViolation,
  NegativeSplitting,
  OutOfBounds,
  DegeneratePopulation,
  NegativeSquare,
  StepFailure,
  InsufficientOscillations,
  NoCrossings,
  NotAFixedPoint,
  NoCriticalPoint,
  DegenerateDenominator,
  NoRootInRange,
  IoError,
};

class Error : public std::runtime_error {
public:
  Error(ErrorCode code, const std::string &what) : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string &msg) { throw Error(code, msg); }

// Duffing barrier V(z) = v0 * (1 - 4 z^2)^2 sampled on a uniform grid with
// Dirichlet boundaries at |z| = domain_halfwidth. Lengths are in units of
// the well separation, energies in recoil units.
struct PotentialSpec {
  double v0 = 0.0;
  double domain_halfwidth = 1.5;
  int grid_points = 2048;
  void validate() const;
};

// Lowest eigenpairs of the single-particle problem. Wavefunctions are
// real, unit L2-norm on the grid, stored row-per-state.
struct EigenSolution {
  std::vector<double> grid;
  double dz = 0.0;
  std::vector<double> energies;
  std::vector<std::vector<double>> wavefunctions;
};

// Left/right localized combinations of the two lowest doublets.
struct LocalizedModes {
  std::vector<double> psi_l0, psi_r0, psi_l1, psi_r1;
};

// gamma-independent spectral quantities: doublet means/splittings and the
// localized-mode overlap integrals that scale linearly with gamma.
struct CoefficientIntegrals {
  double e0 = 0, e1 = 0;
  double j0 = 0, j1 = 0;
  double i0 = 0, i1 = 0, i01 = 0;  // ∫psi_l0^4, ∫psi_l1^4, ∫psi_l0^2 psi_l1^2
};

// The seven model coefficients plus the level gap. nu* are interaction
// energies premultiplied by atom number (N·U); the dynamics depend on the
// parameters only through these products.
struct ModelParams {
  double e0 = 0, e1 = 0;
  double j0 = 0, j1 = 0;
  double nu0 = 0, nu1 = 0, nu01 = 0;
  double delta_e = 0;
};

// The six canonical variables. z0/z1: left-minus-right population
// fractions within the ground/excited level; z2: ground-minus-excited
// total fraction; theta2 is unbounded (it rotates at roughly the level
// gap), theta0/theta1 are kept unwrapped during integration.
struct PendulumState {
  double z0 = 0, theta0 = 0, z1 = 0, theta1 = 0, z2 = 0, theta2 = 0;
};

// Well/level basis: four mode populations (fractions of N, summing to 1)
// and four mode phases.
struct LabState {
  double n_l0 = 0, n_r0 = 0, n_l1 = 0, n_r1 = 0;
  double phi_l0 = 0, phi_r0 = 0, phi_l1 = 0, phi_r1 = 0;
};

enum class Regime { Rabi, Mixed, Josephson, Fock, Invalid };
enum class Validity { Validated, Marginal, Invalid };

struct RegimeIndicators {
  double chi0 = 0, chi1 = 0, chi01 = 0;
  Regime regime = Regime::Invalid;
  Validity hopping_validity = Validity::Invalid;   // worst J_l/delta_e band
  Validity coupling_validity = Validity::Invalid;  // chi01 band
  bool barrier_above_e1 = true;  // V0 >= E1; true when V0 unknown
  bool fock_determined = false;  // atom number supplied, Fock test evaluated
};

// Maximum |z_l| at a given z2: half the population fraction of level l.
inline double zl_bound(int level, double z2) { return 0.5 * (1.0 + (level == 0 ? z2 : -z2)); }

}  // namespace dw4
