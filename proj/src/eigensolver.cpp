#include "eigensolver.hpp"

#include <lapacke.h>

#include <algorithm>
#include <cmath>
#include <numbers>

namespace dw4 {

void PotentialSpec::validate() const {
  if (!(v0 > 0.0)) fail(ErrorCode::InvalidArgument, "potential: v0 must be positive");
  if (!(domain_halfwidth >= 1.0))
    fail(ErrorCode::InvalidArgument, "potential: domain_halfwidth must be >= 1 (wells at z = ±1/2)");
  if (grid_points < 64) fail(ErrorCode::InvalidArgument, "potential: grid_points must be >= 64");
}

double kinetic_prefactor() { return 1.0 / (4.0 * std::numbers::pi * std::numbers::pi); }

double trapezoid(const std::vector<double> &values, double dz) {
  if (values.size() < 2) return 0.0;
  double sum = 0.5 * (values.front() + values.back());
  for (size_t i = 1; i + 1 < values.size(); ++i) sum += values[i];
  return sum * dz;
}

int parity_of(const std::vector<double> &psi, double dz) {
  // Overlap with the mirrored state; ±1 for clean parity on the symmetric grid.
  double overlap = 0.0;
  const size_t n = psi.size();
  for (size_t i = 0; i < n; ++i) overlap += psi[i] * psi[n - 1 - i];
  overlap *= dz;
  if (overlap > 0.9) return +1;
  if (overlap < -0.9) return -1;
  return 0;
}

namespace {

double duffing(double v0, double z) {
  const double u = 1.0 - 4.0 * z * z;
  return v0 * u * u;
}

// Flip sign so the state is positive at its dominant extremum on z < 0.
void fix_sign(std::vector<double> &psi, const std::vector<double> &grid) {
  size_t peak = 0;
  double best = -1.0;
  for (size_t i = 0; i < psi.size() && grid[i] < 0.0; ++i) {
    if (std::abs(psi[i]) > best) {
      best = std::abs(psi[i]);
      peak = i;
    }
  }
  if (psi[peak] < 0.0)
    for (double &v : psi) v = -v;
}

}  // namespace

EigenSolution solve_spectrum(const PotentialSpec &spec) {
  spec.validate();
  const int n = spec.grid_points;
  const double L = spec.domain_halfwidth;
  const double dz = 2.0 * L / (n + 1);
  const double kin = kinetic_prefactor();
  // Five-point Laplacian: f'' ≈ (-f[i-2] + 16 f[i-1] - 30 f[i] + 16 f[i+1] - f[i+2]) / (12 dz²).
  const double d2 = 30.0 * kin / (12.0 * dz * dz);
  const double off1 = -16.0 * kin / (12.0 * dz * dz);
  const double off2 = kin / (12.0 * dz * dz);

  EigenSolution sol;
  sol.dz = dz;
  sol.grid.resize(n);
  for (int i = 0; i < n; ++i) sol.grid[i] = -L + dz * (i + 1);

  // Symmetric pentadiagonal matrix in LAPACK upper band storage (column
  // major, ka = 2): AB(ka + i - j, j) = A(i, j).
  const int ka = 2;
  const int ldab = ka + 1;
  std::vector<double> ab(static_cast<size_t>(ldab) * n, 0.0);
  for (int j = 0; j < n; ++j) {
    ab[static_cast<size_t>(j) * ldab + ka] = d2 + duffing(spec.v0, sol.grid[j]);
    if (j >= 1) ab[static_cast<size_t>(j) * ldab + ka - 1] = off1;
    if (j >= 2) ab[static_cast<size_t>(j) * ldab + ka - 2] = off2;
  }

  const int nev = std::min(kSpectrumStates, n);
  std::vector<double> w(n), z(static_cast<size_t>(n) * nev), q(static_cast<size_t>(n) * n);
  std::vector<lapack_int> ifail(n);
  lapack_int found = 0;
  const double abstol = 2.0 * LAPACKE_dlamch('S');
  lapack_int info = LAPACKE_dsbevx(
      LAPACK_COL_MAJOR, 'V', 'I', 'U', n, ka, ab.data(), ldab, q.data(), n, 0.0, 0.0, 1, nev,
      abstol, &found, w.data(), z.data(), n, ifail.data());
  if (info != 0 || found < nev)
    fail(ErrorCode::NotConverged, "eigensolver: banded solver failed (info=" + std::to_string(info) + ")");

  sol.energies.assign(w.begin(), w.begin() + nev);
  sol.wavefunctions.resize(nev);
  const double inv_sqrt_dz = 1.0 / std::sqrt(dz);
  for (int k = 0; k < nev; ++k) {
    auto &psi = sol.wavefunctions[k];
    psi.resize(n);
    // LAPACK returns unit 2-norm vectors; dividing by √dz makes ∑psi²dz = 1.
    for (int i = 0; i < n; ++i) psi[i] = z[static_cast<size_t>(k) * n + i] * inv_sqrt_dz;
    fix_sign(psi, sol.grid);
  }

  for (int k = 0; k < std::min(nev, 4); ++k) {
    const auto &psi = sol.wavefunctions[k];
    const double edge = std::max(std::abs(psi.front()), std::abs(psi.back()));
    if (edge > 1e-6)
      fail(ErrorCode::DomainTooSmall,
           "eigensolver: state " + std::to_string(k) + " reaches " + std::to_string(edge) +
               " at the box edge; enlarge domain_halfwidth");
  }
  return sol;
}

LocalizedModes build_localized_modes(const EigenSolution &sol) {
  if (sol.wavefunctions.size() < 4)
    fail(ErrorCode::InvalidArgument, "localized modes: need at least four states");
  for (int k = 0; k < 4; ++k) {
    const int expect = (k % 2 == 0) ? +1 : -1;
    if (parity_of(sol.wavefunctions[k], sol.dz) != expect)
      fail(ErrorCode::ParityViolation,
           "localized modes: state " + std::to_string(k) + " does not have the expected parity");
  }

  const size_t n = sol.grid.size();

  // The exact eigenstates of the symmetric potential have definite parity,
  // but a banded eigensolver mixes the two members of a near-degenerate
  // doublet at the level of eps·||H||/splitting (up to ~1e-4 for deep
  // barriers). Projecting each state onto its parity sector removes that
  // contamination and makes psi_L(z) = psi_R(-z) hold exactly.
  auto purified = [&](int k) {
    const auto &psi = sol.wavefunctions[k];
    const double s = (k % 2 == 0) ? 1.0 : -1.0;
    std::vector<double> out(n);
    double norm = 0.0;
    for (size_t i = 0; i < n; ++i) {
      out[i] = 0.5 * (psi[i] + s * psi[n - 1 - i]);
      norm += out[i] * out[i];
    }
    norm = std::sqrt(norm * sol.dz);
    if (!(norm > 0.5))
      fail(ErrorCode::ParityViolation,
           "localized modes: state " + std::to_string(k) + " lost in parity projection");
    for (double &v : out) v /= norm;
    return out;
  };

  LocalizedModes modes;
  auto build = [&](int level, std::vector<double> &left, std::vector<double> &right) {
    const std::vector<double> sym = purified(2 * level);
    const std::vector<double> asym = purified(2 * level + 1);
    left.resize(n);
    right.resize(n);
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    // Try s = -1 first; keep whichever combination localizes on z < 0.
    for (size_t i = 0; i < n; ++i) left[i] = (sym[i] + asym[i]) * inv_sqrt2;
    double left_weight = 0.0;
    for (size_t i = 0; i < n && sol.grid[i] < 0.0; ++i) left_weight += left[i] * left[i] * sol.dz;
    const double sign = left_weight > 0.5 ? 1.0 : -1.0;
    for (size_t i = 0; i < n; ++i) {
      left[i] = (sym[i] + sign * asym[i]) * inv_sqrt2;
      right[i] = (sym[i] - sign * asym[i]) * inv_sqrt2;
    }
  };
  build(0, modes.psi_l0, modes.psi_r0);
  build(1, modes.psi_l1, modes.psi_r1);
  return modes;
}

CoefficientIntegrals coefficient_integrals(const EigenSolution &sol, const LocalizedModes &modes) {
  if (sol.energies.size() < 4) fail(ErrorCode::InvalidArgument, "coefficients: need four energies");
  CoefficientIntegrals ci;
  ci.e0 = 0.5 * (sol.energies[0] + sol.energies[1]);
  ci.e1 = 0.5 * (sol.energies[2] + sol.energies[3]);
  ci.j0 = 0.5 * (sol.energies[1] - sol.energies[0]);
  ci.j1 = 0.5 * (sol.energies[3] - sol.energies[2]);

  const size_t n = sol.grid.size();
  std::vector<double> f(n);
  auto quartic = [&](const std::vector<double> &psi) {
    for (size_t i = 0; i < n; ++i) f[i] = psi[i] * psi[i] * psi[i] * psi[i];
    return trapezoid(f, sol.dz);
  };
  ci.i0 = quartic(modes.psi_l0);
  ci.i1 = quartic(modes.psi_l1);
  for (size_t i = 0; i < n; ++i)
    f[i] = modes.psi_l0[i] * modes.psi_l0[i] * modes.psi_l1[i] * modes.psi_l1[i];
  ci.i01 = trapezoid(f, sol.dz);
  return ci;
}

ModelParams params_from_integrals(const CoefficientIntegrals &ci, double gamma) {
  if (!(gamma >= 0.0)) fail(ErrorCode::InvalidArgument, "coefficients: gamma must be >= 0");
  if (ci.j0 < 0.0 || ci.j1 < 0.0)
    fail(ErrorCode::NegativeSplitting,
         "coefficients: antisymmetric state below symmetric within a doublet (solver failure)");
  ModelParams p;
  p.e0 = ci.e0;
  p.e1 = ci.e1;
  p.j0 = ci.j0;
  p.j1 = ci.j1;
  p.nu0 = gamma * ci.i0;
  p.nu1 = gamma * ci.i1;
  p.nu01 = gamma * ci.i01;
  p.delta_e = ci.e1 - ci.e0;
  return p;
}

ModelParams compute_model_params(const EigenSolution &sol, const LocalizedModes &modes, double gamma) {
  return params_from_integrals(coefficient_integrals(sol, modes), gamma);
}

double hopping_integral(const EigenSolution &sol, const LocalizedModes &modes, int level,
                        const PotentialSpec &spec) {
  if (level != 0 && level != 1) fail(ErrorCode::InvalidArgument, "hopping_integral: level must be 0 or 1");
  const auto &left = level == 0 ? modes.psi_l0 : modes.psi_l1;
  const auto &right = level == 0 ? modes.psi_r0 : modes.psi_r1;
  const int n = static_cast<int>(sol.grid.size());
  const double dz = sol.dz;
  const double kin = kinetic_prefactor();
  const double c0 = 30.0 * kin / (12.0 * dz * dz);
  const double c1 = -16.0 * kin / (12.0 * dz * dz);
  const double c2 = kin / (12.0 * dz * dz);
  // Apply the same discrete Hamiltonian the spectrum was computed with, so
  // that -⟨L|H|R⟩ reproduces the half-splitting identically.
  double acc = 0.0;
  for (int i = 0; i < n; ++i) {
    double h = (c0 + duffing(spec.v0, sol.grid[i])) * right[i];
    if (i >= 1) h += c1 * right[i - 1];
    if (i + 1 < n) h += c1 * right[i + 1];
    if (i >= 2) h += c2 * right[i - 2];
    if (i + 2 < n) h += c2 * right[i + 2];
    acc += left[i] * h;
  }
  return -acc * dz;
}

}  // namespace dw4
