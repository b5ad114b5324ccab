#pragma once

#include <array>
#include <complex>
#include <functional>
#include <vector>

#include "types.hpp"

namespace dw4 {

enum class Stability { Center, Unstable, Mixed };

struct FixedPointReport {
  int k0, k1, k2;            // branch indices, theta_i = k_i * pi
  double z2_0;               // stationary ground/excited imbalance
  bool exists;               // |z2_0| <= 1
  PendulumState location;    // populated when exists
  std::array<std::complex<double>, 6> eigenvalues;  // populated when exists
  Stability stability;       // populated when exists
};

// Closed-form stationary z2 of one branch (theta_i = k_i pi). Throws
// DegenerateDenominator when the interaction denominator vanishes.
double stationary_imbalance(const ModelParams &params, int k0, int k1, int k2);

// All eight balanced stationary branches (z0 = z1 = 0, theta_i in {0, pi}).
std::array<FixedPointReport, 8> analytic_fixed_points(const ModelParams &params);

struct PitchforkBranches {
  bool exists;      // radicand positive, i.e. chi0 > 1 + z2
  double z0_plus;   // per closed-form branch expression
  double z0_minus;
  bool physical;    // |z0| within the depletion bound (1 + z2)/2
  double residual;  // |dtheta0/dt| of the averaged field at (z0_plus, theta0 = pi)
};

PitchforkBranches pitchfork_points(const ModelParams &params, double z2);

// Merge ordinate of the two theta1 = pi effective fixed points.
double critical_imbalance(const ModelParams &params, double z2);

struct EffectiveFixedPoint {
  double theta1_0;   // 0 or pi
  double z1_0;
  double z0_frozen;
  bool stable;
};

inline constexpr int kEffectiveScanBrackets = 2048;

// Roots of dtheta1/dt(z1) = 0 of the averaged field with z0 held constant,
// for theta1 in {0, pi}; dense bracketing scan plus bisection refinement.
std::vector<EffectiveFixedPoint> effective_fixed_points(const ModelParams &params, double z2,
                                                        double z0_frozen,
                                                        int brackets = kEffectiveScanBrackets);

enum class FieldModel { Full, AveragedGround, AveragedExcited };

struct StabilityReport {
  std::vector<std::complex<double>> eigenvalues;
  Stability label;
  double residual;
};

// Finite-difference Jacobian spectrum and stability label of the selected
// field at a (near-)stationary point. The averaged subsystem variants act on
// the (z0, theta0) or (z1, theta1) pair with the other coordinates frozen.
StabilityReport jacobian_stability(const PendulumState &point, const ModelParams &params,
                                   FieldModel model);

// Same machinery for an arbitrary vector field (used for synthetic oracles).
using VectorField = std::function<void(const double *x, double *dx)>;
StabilityReport stability_of_field(const VectorField &field, const double *point, int dim,
                                   double residual_tol = 1e-8);

}  // namespace dw4
