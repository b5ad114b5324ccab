#pragma once
// Shared fixtures for the test suites: frozen reference coefficients
// (computed by an independent prototype of the same discretization and
// pinned here to twelve digits), the three benchmark points on the
// (V0, gamma) plane, and memoized parameter construction so each barrier
// height is eigensolved at most once per test run.

#include <map>
#include <mutex>
#include <random>

#include "cache.hpp"
#include "eigensolver.hpp"
#include "model.hpp"
#include "types.hpp"

#ifndef DWELL4_TEST_CACHE
#define DWELL4_TEST_CACHE ""
#endif

namespace dw4test {

// gamma-independent reference values at default solver settings
// (halfwidth 1.5, 2048 interior points).
struct RefCoefficients {
  double e0, e1, j0, j1, i0, i1, i01;
};

inline constexpr RefCoefficients kRefV0_3_75{
    1.1760548651564022, 3.227167559902228,  2.520301314689277e-3, 1.043130530042613e-1,
    2.6318176484004816, 1.7347409197820332, 1.0863694347493513};
inline constexpr RefCoefficients kRefV0_5{
    1.3678214108231257, 3.8189488074858673, 9.123201652982971e-4, 5.355427390441014e-2,
    2.8552613549817987, 1.9283810982903136, 1.2256473589643337};
inline constexpr RefCoefficients kRefV0_8_75{
    1.8289084403813831, 5.232851062075497,  6.974420648497848e-5, 6.867103450531875e-3,
    3.328153468957757,  2.35880302747554,   1.5235372770374278};
inline constexpr RefCoefficients kRefV0_20{
    2.7941561616262334, 8.151066651627843,  2.3565644413636733e-7, 4.160751177373356e-5,
    4.142946620156459,  3.019259246738657,  1.9760792870060593};
// Additional reference excited-doublet means used by validity tests.
inline constexpr double kRefE1V0_0_5 = 1.2356904788466636;
inline constexpr double kRefE1V0_3 = 2.8304105203424115;
inline constexpr double kRefE1V0_12 = 6.211912435722296;

// Benchmark points (barrier height, interaction scale).
inline constexpr double kV0A = 3.75, kGammaA = 2.5e-5;
inline constexpr double kV0B = 5.0, kGammaB = 2.5e-3;
inline constexpr double kV0C = 8.75, kGammaC = 2.5e-2;

// Interaction-to-hopping ratios at the benchmark points, frozen from the
// reference coefficients (chi_l = nu_l/2j_l, chi01 = nu01/delta_e).
inline constexpr double kChi0A = 1.305309028459e-2, kChi1A = 2.078767792981e-4,
                        kChi01A = 1.324122069855e-5;
inline constexpr double kChi0B = 3.912087915497, kChi1B = 4.500997207366e-2,
                        kChi01B = 1.250085328728e-3;
inline constexpr double kChi0C = 5.964928193847e2, kChi1C = 4.293664433024,
                        kChi01C = 1.118950468882e-2;

inline dw4::CoefficientCache &shared_cache() {
  static dw4::CoefficientCache cache{DWELL4_TEST_CACHE};
  return cache;
}

// One eigensolve per (v0, grid, halfwidth) per process; gamma rescaling is
// free afterwards.
inline const dw4::CoefficientIntegrals &integrals(double v0, int grid_points = 2048,
                                                  double halfwidth = 1.5) {
  static std::map<std::tuple<double, int, double>, dw4::CoefficientIntegrals> memo;
  static std::mutex mu;
  std::lock_guard<std::mutex> lock(mu);
  auto key = std::make_tuple(v0, grid_points, halfwidth);
  auto it = memo.find(key);
  if (it == memo.end()) {
    dw4::PotentialSpec spec;
    spec.v0 = v0;
    spec.grid_points = grid_points;
    spec.domain_halfwidth = halfwidth;
    it = memo.emplace(key, dw4::integrals_for(spec, &shared_cache())).first;
  }
  return it->second;
}

inline dw4::ModelParams params_for(double v0, double gamma) {
  return dw4::params_from_integrals(integrals(v0), gamma);
}

inline dw4::ModelParams params_a() { return params_for(kV0A, kGammaA); }
inline dw4::ModelParams params_b() { return params_for(kV0B, kGammaB); }
inline dw4::ModelParams params_c() { return params_for(kV0C, kGammaC); }

// Synthetic coefficient set whose inter-level coupling dominates the level
// gap (chi01 = 1.5); the (k0,k1,k2) = (0,0,1) stationary branch sits at
// z2 = 2/7 with theta2 = pi.
inline dw4::ModelParams synthetic_existing_branch_params() {
  dw4::ModelParams p;
  p.e0 = 1.0;
  p.e1 = 1.2;
  p.j0 = 0.05;
  p.j1 = 0.05;
  p.nu0 = 1.0;
  p.nu1 = 1.0;
  p.nu01 = 0.3;
  p.delta_e = 0.2;
  return p;
}

// Random interior state away from the depletion boundaries.
inline dw4::PendulumState random_interior_state(std::mt19937 &rng, double margin = 0.8) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  dw4::PendulumState s;
  s.z2 = 0.9 * u(rng);
  s.z0 = margin * dw4::zl_bound(0, s.z2) * u(rng);
  s.z1 = margin * dw4::zl_bound(1, s.z2) * u(rng);
  const double pi = 3.14159265358979323846;
  s.theta0 = pi * u(rng);
  s.theta1 = pi * u(rng);
  s.theta2 = 3.0 * pi * u(rng);
  return s;
}

}  // namespace dw4test
