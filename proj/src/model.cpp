#include "model.hpp"

#include <cmath>

namespace dw4 {

namespace {

struct Radicals {
  double s0, s1;  // sqrt((1+z2)² - 4 z0²), sqrt((1-z2)² - 4 z1²)
};

Radicals radicals_checked(const PendulumState &s, bool strict) {
  const double a0 = (1.0 + s.z2) * (1.0 + s.z2) - 4.0 * s.z0 * s.z0;
  const double a1 = (1.0 - s.z2) * (1.0 - s.z2) - 4.0 * s.z1 * s.z1;
  // The Hamiltonian tolerates a vanishing radical; the vector field does
  // not (theta rates diverge at mode depletion).
  if (strict ? (a0 <= 0.0 || a1 <= 0.0) : (a0 < 0.0 || a1 < 0.0))
    fail(ErrorCode::OutOfBounds, "state outside the |z_l| < [1+(-1)^l z2]/2 region");
  return {std::sqrt(a0), std::sqrt(a1)};
}

}  // namespace

double hamiltonian(const PendulumState &s, const ModelParams &p) {
  const auto [s0, s1] = radicals_checked(s, false);
  const double delta = s.theta0 - s.theta1;
  const double a = s.z0 + s.z1 - s.z2 * (s.z0 - s.z1);
  const double b = 1.0 - s.z2 * s.z2 + 4.0 * s.z0 * s.z1;
  double h = 0.0;
  h += -p.j0 * s0 * std::cos(s.theta0);
  h += 0.25 * p.nu0 * ((1.0 + s.z2) * (1.0 + s.z2) + 4.0 * s.z0 * s.z0);
  h += -p.j1 * s1 * std::cos(s.theta1);
  h += 0.25 * p.nu1 * ((1.0 - s.z2) * (1.0 - s.z2) + 4.0 * s.z1 * s.z1);
  h += -p.nu01 * a * std::sin(s.theta2) * std::sin(delta);
  h += 0.5 * p.nu01 * b * (2.0 + std::cos(s.theta2) * std::cos(delta));
  h += -p.delta_e * s.z2;
  return h;
}

double hamiltonian_lab(const LabState &l, const ModelParams &p) {
  for (double n : {l.n_l0, l.n_r0, l.n_l1, l.n_r1})
    if (!(n > 0.0)) fail(ErrorCode::DegeneratePopulation, "lab state: populations must be positive");
  double h = 0.0;
  h += p.e0 * (l.n_l0 + l.n_r0) + p.e1 * (l.n_l1 + l.n_r1);
  h += p.nu0 * (l.n_l0 * l.n_l0 + l.n_r0 * l.n_r0) + p.nu1 * (l.n_l1 * l.n_l1 + l.n_r1 * l.n_r1);
  h += -2.0 * p.j0 * std::sqrt(l.n_l0 * l.n_r0) * std::cos(l.phi_l0 - l.phi_r0);
  h += -2.0 * p.j1 * std::sqrt(l.n_l1 * l.n_r1) * std::cos(l.phi_l1 - l.phi_r1);
  h += 2.0 * p.nu01 * l.n_l0 * l.n_l1 * (2.0 + std::cos(2.0 * (l.phi_l0 - l.phi_l1)));
  h += 2.0 * p.nu01 * l.n_r0 * l.n_r1 * (2.0 + std::cos(2.0 * (l.phi_r0 - l.phi_r1)));
  return 2.0 * h - p.e0 - p.e1;
}

PendulumState eom_full(const PendulumState &s, const ModelParams &p) {
  const auto [s0, s1] = radicals_checked(s, true);
  const double delta = s.theta0 - s.theta1;
  const double sd = std::sin(delta), cd = std::cos(delta);
  const double s2 = std::sin(s.theta2), c2 = std::cos(s.theta2);
  const double a = s.z0 + s.z1 - s.z2 * (s.z0 - s.z1);
  const double b = 1.0 - s.z2 * s.z2 + 4.0 * s.z0 * s.z1;
  // Mixed-angle combinations shared by the z-rates.
  const double gz = 0.5 * b * c2 * sd + a * s2 * cd;

  PendulumState d;
  d.z0 = -p.j0 * s0 * std::sin(s.theta0) + p.nu01 * gz;
  d.z1 = -p.j1 * s1 * std::sin(s.theta1) - p.nu01 * gz;
  d.z2 = p.nu01 * (a * c2 * sd + 0.5 * b * s2 * cd);
  d.theta0 = 2.0 * s.z0 * (p.nu0 + 2.0 * p.j0 * std::cos(s.theta0) / s0) +
             p.nu01 * (2.0 * s.z1 * (2.0 + c2 * cd) - (1.0 - s.z2) * s2 * sd);
  d.theta1 = 2.0 * s.z1 * (p.nu1 + 2.0 * p.j1 * std::cos(s.theta1) / s1) +
             p.nu01 * (2.0 * s.z0 * (2.0 + c2 * cd) - (1.0 + s.z2) * s2 * sd);
  d.theta2 = -p.delta_e - p.j0 * (1.0 + s.z2) * std::cos(s.theta0) / s0 +
             p.j1 * (1.0 - s.z2) * std::cos(s.theta1) / s1 + 0.5 * p.nu0 * (1.0 + s.z2) -
             0.5 * p.nu1 * (1.0 - s.z2) -
             p.nu01 * (s.z2 * (2.0 + c2 * cd) + (s.z1 - s.z0) * s2 * sd);
  return d;
}

namespace {

Radicals averaged_radicals(const AveragedState &s, double z2, bool strict) {
  const double a0 = (1.0 + z2) * (1.0 + z2) - 4.0 * s.z0 * s.z0;
  const double a1 = (1.0 - z2) * (1.0 - z2) - 4.0 * s.z1 * s.z1;
  if (strict ? (a0 <= 0.0 || a1 <= 0.0) : (a0 < 0.0 || a1 < 0.0))
    fail(ErrorCode::OutOfBounds, "state outside the |z_l| < [1+(-1)^l z2]/2 region");
  return {std::sqrt(a0), std::sqrt(a1)};
}

}  // namespace

AveragedState eom_averaged(const AveragedState &s, double z2, const ModelParams &p) {
  const auto [s0, s1] = averaged_radicals(s, z2, true);
  AveragedState d;
  d.z0 = -p.j0 * std::sin(s.theta0) * s0;
  d.z1 = -p.j1 * std::sin(s.theta1) * s1;
  d.theta0 = 2.0 * s.z0 * (p.nu0 + 2.0 * p.j0 * std::cos(s.theta0) / s0) + 4.0 * p.nu01 * s.z1;
  d.theta1 = 2.0 * s.z1 * (p.nu1 + 2.0 * p.j1 * std::cos(s.theta1) / s1) + 4.0 * p.nu01 * s.z0;
  return d;
}

double hamiltonian_averaged(const AveragedState &s, double z2, const ModelParams &p) {
  const auto [s0, s1] = averaged_radicals(s, z2, false);
  double h = 0.0;
  h += -p.j0 * s0 * std::cos(s.theta0);
  h += 0.25 * p.nu0 * ((1.0 + z2) * (1.0 + z2) + 4.0 * s.z0 * s.z0);
  h += -p.j1 * s1 * std::cos(s.theta1);
  h += 0.25 * p.nu1 * ((1.0 - z2) * (1.0 - z2) + 4.0 * s.z1 * s.z1);
  // theta2-average of the coupling: the sin(theta2) term drops, the
  // cos(theta2)cos(delta) factor averages to a constant 2.
  h += p.nu01 * (1.0 - z2 * z2 + 4.0 * s.z0 * s.z1);
  h += -p.delta_e * z2;
  return h;
}

AveragedState eom_linearized(const AveragedState &s, double z2, const ModelParams &p) {
  const double f0 = 1.0 + z2, f1 = 1.0 - z2;
  AveragedState d;
  d.z0 = -p.j0 * f0 * s.theta0;
  d.z1 = -p.j1 * f1 * s.theta1;
  d.theta0 = (2.0 * p.nu0 + 4.0 * p.j0 / f0) * s.z0 + 4.0 * p.nu01 * s.z1;
  d.theta1 = (2.0 * p.nu1 + 4.0 * p.j1 / f1) * s.z1 + 4.0 * p.nu01 * s.z0;
  return d;
}

double hamiltonian_two_mode(double z0, double theta0, double z2, const ModelParams &p) {
  const double a0 = (1.0 + z2) * (1.0 + z2) - 4.0 * z0 * z0;
  if (a0 < 0.0) fail(ErrorCode::OutOfBounds, "state outside the |z0| < (1+z2)/2 region");
  return -p.j0 * std::sqrt(a0) * std::cos(theta0) +
         0.25 * p.nu0 * ((1.0 + z2) * (1.0 + z2) + 4.0 * z0 * z0);
}

std::pair<double, double> eom_two_mode(double z0, double theta0, double z2, const ModelParams &p) {
  const double a0 = (1.0 + z2) * (1.0 + z2) - 4.0 * z0 * z0;
  if (a0 <= 0.0) fail(ErrorCode::OutOfBounds, "state outside the |z0| < (1+z2)/2 region");
  const double s0 = std::sqrt(a0);
  return {-p.j0 * std::sin(theta0) * s0,
          2.0 * z0 * (p.nu0 + 2.0 * p.j0 * std::cos(theta0) / s0)};
}

NormalModes normal_mode_frequencies(const ModelParams &p, double z2) {
  if (!(std::abs(z2) <= 1.0)) fail(ErrorCode::InvalidArgument, "normal modes: need |z2| <= 1");
  const double w0sq = p.j0 * (2.0 * p.nu0 * (1.0 + z2) + 4.0 * p.j0);
  const double w1sq = p.j1 * (2.0 * p.nu1 * (1.0 - z2) + 4.0 * p.j1);
  const double coupling = 64.0 * (1.0 - z2 * z2) * p.j0 * p.j1 * p.nu01 * p.nu01;
  const double gap = std::sqrt((w0sq - w1sq) * (w0sq - w1sq) + coupling);
  const double wm_sq = 0.5 * (w0sq + w1sq - gap);
  const double wp_sq = 0.5 * (w0sq + w1sq + gap);
  if (wm_sq < 0.0)
    fail(ErrorCode::NegativeSquare, "normal modes: lower mode squared frequency is negative");
  NormalModes nm;
  nm.omega0 = std::sqrt(w0sq);
  nm.omega1 = std::sqrt(w1sq);
  nm.omega_minus = std::sqrt(wm_sq);
  nm.omega_plus = std::sqrt(wp_sq);
  return nm;
}

std::pair<PendulumState, double> to_pendulum(const LabState &l) {
  for (double n : {l.n_l0, l.n_r0, l.n_l1, l.n_r1})
    if (!(n > 0.0)) fail(ErrorCode::DegeneratePopulation, "lab state: populations must be positive");
  PendulumState s;
  s.z0 = l.n_l0 - l.n_r0;
  s.z1 = l.n_l1 - l.n_r1;
  s.z2 = (l.n_l0 + l.n_r0) - (l.n_l1 + l.n_r1);
  s.theta0 = l.phi_r0 - l.phi_l0;
  s.theta1 = l.phi_r1 - l.phi_l1;
  s.theta2 = (l.phi_l1 + l.phi_r1) - (l.phi_l0 + l.phi_r0);
  const double total_phase = -(l.phi_l0 + l.phi_r0 + l.phi_l1 + l.phi_r1);
  return {s, total_phase};
}

LabState from_pendulum(const PendulumState &s, double total_phase) {
  LabState l;
  l.n_l0 = 0.25 * (1.0 + 2.0 * s.z0 + s.z2);
  l.n_r0 = 0.25 * (1.0 - 2.0 * s.z0 + s.z2);
  l.n_l1 = 0.25 * (1.0 + 2.0 * s.z1 - s.z2);
  l.n_r1 = 0.25 * (1.0 - 2.0 * s.z1 - s.z2);
  for (double n : {l.n_l0, l.n_r0, l.n_l1, l.n_r1})
    if (!(n > 0.0)) fail(ErrorCode::DegeneratePopulation, "state maps to a depleted mode");
  // Invert the phase map through the transposed row-orthogonal matrix.
  l.phi_l0 = -(0.25 * total_phase + 0.5 * s.theta0 + 0.25 * s.theta2);
  l.phi_r0 = -(0.25 * total_phase - 0.5 * s.theta0 + 0.25 * s.theta2);
  l.phi_l1 = -(0.25 * total_phase + 0.5 * s.theta1 - 0.25 * s.theta2);
  l.phi_r1 = -(0.25 * total_phase - 0.5 * s.theta1 - 0.25 * s.theta2);
  return l;
}

RegimeIndicators classify_regime(const ModelParams &p, std::optional<double> n_atoms,
                                 std::optional<double> v0) {
  RegimeIndicators r;
  r.chi0 = p.nu0 / (2.0 * p.j0);
  r.chi1 = p.nu1 / (2.0 * p.j1);
  r.chi01 = p.nu01 / p.delta_e;

  auto band = [](double x) {
    if (x < 0.1) return Validity::Validated;
    if (x <= 1.0) return Validity::Marginal;
    return Validity::Invalid;
  };
  const double hop_ratio = std::max(p.j0, p.j1) / p.delta_e;
  r.hopping_validity = band(hop_ratio);
  r.coupling_validity = band(r.chi01);
  r.barrier_above_e1 = !v0 || *v0 >= p.e1;
  r.fock_determined = n_atoms.has_value();

  // The two-level truncation needs the hopping well below the level gap
  // and the inter-level coupling below it; a barrier under the excited
  // doublet leaves no localized modes to expand in.
  if (hop_ratio > 0.1 || r.chi01 > 1.0 || !r.barrier_above_e1) {
    r.regime = Regime::Invalid;
    return r;
  }
  if (n_atoms && std::min(r.chi0, r.chi1) > (*n_atoms) * (*n_atoms)) {
    r.regime = Regime::Fock;
  } else if (r.chi0 < 1.0) {
    r.regime = Regime::Rabi;
  } else if (r.chi1 < 1.0) {
    r.regime = Regime::Mixed;
  } else {
    r.regime = Regime::Josephson;
  }
  return r;
}

}  // namespace dw4
