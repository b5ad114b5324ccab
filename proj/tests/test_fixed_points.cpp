#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "fixed_points.hpp"
#include "integrator.hpp"
#include "model.hpp"
#include "test_support.hpp"

using namespace dw4;
using namespace dw4test;

namespace {

ModelParams reference_set() {
  // Worked reference: delta_e = 1, no hopping, nu0 = nu1 = 4, nu01 = 0.5.
  ModelParams p;
  p.e0 = 1.0;
  p.e1 = 2.0;
  p.j0 = 0.0;
  p.j1 = 0.0;
  p.nu0 = 4.0;
  p.nu1 = 4.0;
  p.nu01 = 0.5;
  p.delta_e = 1.0;
  return p;
}

const FixedPointReport &branch(const std::array<FixedPointReport, 8> &all, int k0, int k1,
                               int k2) {
  for (const auto &r : all)
    if (r.k0 == k0 && r.k1 == k1 && r.k2 == k2) return r;
  FAIL("branch not found");
  return all[0];
}

// Max-abs of the six components of a state derivative.
double flow_norm(const PendulumState &d) {
  double m = 0.0;
  for (double v : {d.z0, d.theta0, d.z1, d.theta1, d.z2, d.theta2}) m = std::max(m, std::abs(v));
  return m;
}

}  // namespace

TEST_SUITE("fixed_points") {

TEST_CASE("stationary imbalance reproduces the worked reference") {
  const ModelParams p = reference_set();
  // All-even branch: numerator 2*delta_e = 2, denominator nu0+nu1-6*nu01 = 5.
  CHECK(stationary_imbalance(p, 0, 0, 0) == doctest::Approx(0.4).epsilon(1e-15));
  // Flipping the fast-phase index changes the sign parity: denominator 7.
  CHECK(stationary_imbalance(p, 0, 0, 1) == doctest::Approx(2.0 / 7.0).epsilon(1e-15));
}

TEST_CASE("all eight branches of the synthetic parameter set") {
  const ModelParams p = synthetic_existing_branch_params();
  const auto all = analytic_fixed_points(p);

  struct Expect {
    int k0, k1, k2;
    double z2;
    bool exists;
  };
  const Expect table[] = {
      {0, 0, 0, 2.0, false},      {0, 0, 1, 2.0 / 7.0, true}, {0, 1, 0, 3.0 / 7.0, true},
      {0, 1, 1, 3.0, false},      {1, 0, 0, 1.0 / 7.0, true}, {1, 0, 1, 1.0, true},
      {1, 1, 0, 2.0, false},      {1, 1, 1, 2.0 / 7.0, true},
  };
  for (const Expect &e : table) {
    const FixedPointReport &r = branch(all, e.k0, e.k1, e.k2);
    CHECK(r.z2_0 == doctest::Approx(e.z2).epsilon(1e-13));
    CHECK(r.exists == e.exists);
    if (e.exists && std::abs(e.z2) < 1.0) {
      CHECK(r.location.z0 == 0.0);
      CHECK(r.location.z1 == 0.0);
      CHECK(r.location.z2 == doctest::Approx(e.z2).epsilon(1e-13));
      CHECK(r.location.theta0 == e.k0 * std::numbers::pi);
      CHECK(r.location.theta1 == e.k1 * std::numbers::pi);
      CHECK(r.location.theta2 == e.k2 * std::numbers::pi);
    }
  }
  // The branch landing exactly on the depletion edge is reported but not
  // classified: its linearization is skipped.
  const FixedPointReport &edge = branch(all, 1, 0, 1);
  CHECK(edge.z2_0 == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(edge.stability == Stability::Mixed);
  for (const auto &l : edge.eigenvalues) CHECK(std::abs(l) == 0.0);
}

TEST_CASE("analytic fixed points are equilibria of the full flow") {
  const ModelParams p = synthetic_existing_branch_params();
  for (const auto &r : analytic_fixed_points(p)) {
    if (!r.exists || std::abs(r.z2_0) >= 1.0 - 1e-12) continue;
    CHECK(flow_norm(eom_full(r.location, p)) < 1e-12);
  }
}

TEST_CASE("degenerate interaction denominator is reported") {
  ModelParams p = reference_set();
  p.nu0 = 1.0;
  p.nu1 = 1.0;
  p.nu01 = 1.0 / 3.0;  // nu0 + nu1 == 2 nu01 (2 + 1) on even branches
  try {
    stationary_imbalance(p, 0, 0, 0);
    FAIL("expected DegenerateDenominator");
  } catch (const Error &e) {
    CHECK(e.code() == ErrorCode::DegenerateDenominator);
  }
  // Odd branches see sigma = -1 and remain regular.
  CHECK(std::isfinite(stationary_imbalance(p, 0, 0, 1)));
}

TEST_CASE("conservative linearization: eigenvalues come in opposite pairs") {
  const ModelParams p = synthetic_existing_branch_params();
  for (const auto &r : analytic_fixed_points(p)) {
    if (!r.exists || std::abs(r.z2_0) >= 1.0 - 1e-12) continue;
    for (const auto &l : r.eigenvalues) {
      double best = 1e30;
      for (const auto &m : r.eigenvalues) best = std::min(best, std::abs(m + l));
      CHECK(best < 1e-6 * std::max(1.0, std::abs(l)));
    }
    if (r.stability == Stability::Center)
      for (const auto &l : r.eigenvalues) CHECK(std::abs(l.real()) < 1e-8);
  }
}

TEST_CASE("ground-pendulum saddle at the mixed benchmark: rate and label") {
  const ModelParams p = params_b();
  PendulumState saddle;
  saddle.theta0 = std::numbers::pi;
  const StabilityReport rep = jacobian_stability(saddle, p, FieldModel::AveragedGround);
  CHECK(rep.label == Stability::Unstable);
  REQUIRE(rep.eigenvalues.size() == 2);
  const double rate = std::max(rep.eigenvalues[0].real(), rep.eigenvalues[1].real());
  // Linearizing the inverted pendulum gives lambda^2 = j0 (2 nu0 - 4 j0).
  const double expected = std::sqrt(p.j0 * (2.0 * p.nu0 - 4.0 * p.j0));
  CHECK(rate == doctest::Approx(expected).epsilon(1e-4));
  CHECK(rate == doctest::Approx(3.114e-3).epsilon(0.01));
  CHECK(rep.eigenvalues[0].real() == doctest::Approx(-rate).epsilon(1e-6));
}

TEST_CASE("ground-pendulum center at the weak benchmark: frequency and label") {
  const ModelParams p = params_a();
  const StabilityReport rep = jacobian_stability(PendulumState{}, p, FieldModel::AveragedGround);
  CHECK(rep.label == Stability::Center);
  const NormalModes nm = normal_mode_frequencies(p, 0.0);
  for (const auto &l : rep.eigenvalues) {
    CHECK(std::abs(l.real()) < 1e-8);
    CHECK(std::abs(l.imag()) == doctest::Approx(nm.omega0).epsilon(1e-6));
  }
  CHECK(rep.residual < 1e-12);
}

TEST_CASE("stability query away from any fixed point is rejected") {
  const ModelParams p = params_b();
  PendulumState off;
  off.z0 = 0.2;
  off.theta0 = 0.7;
  off.z1 = 0.1;
  off.theta1 = 0.3;
  off.z2 = 0.1;
  off.theta2 = 0.5;
  try {
    jacobian_stability(off, p, FieldModel::Full);
    FAIL("expected NotAFixedPoint");
  } catch (const Error &e) {
    CHECK(e.code() == ErrorCode::NotAFixedPoint);
  }
}

TEST_CASE("stability of a hand-built linear field") {
  const VectorField rotation = [](const double *x, double *dx) {
    dx[0] = x[1];
    dx[1] = -4.0 * x[0];
  };
  const double origin[2] = {0.0, 0.0};
  const StabilityReport center = stability_of_field(rotation, origin, 2, 1e-8);
  CHECK(center.label == Stability::Center);
  CHECK(std::abs(center.eigenvalues[0].imag()) == doctest::Approx(2.0).epsilon(1e-7));
  CHECK(center.residual == 0.0);

  const VectorField hyperbolic = [](const double *x, double *dx) {
    dx[0] = x[1];
    dx[1] = 4.0 * x[0];
  };
  const StabilityReport saddle = stability_of_field(hyperbolic, origin, 2, 1e-8);
  CHECK(saddle.label == Stability::Unstable);
  CHECK(saddle.eigenvalues[1].real() == doctest::Approx(2.0).epsilon(1e-7));

  // The stationarity tolerance is honoured: a residual below it passes
  // through and is reported.
  const VectorField offset = [](const double *x, double *dx) {
    dx[0] = x[1] + 1e-3;
    dx[1] = -x[0];
  };
  const StabilityReport shifted = stability_of_field(offset, origin, 2, 1e-2);
  CHECK(shifted.residual == doctest::Approx(1e-3).epsilon(1e-12));
}

TEST_CASE("pitchfork branches: beyond the fold, at the fold, and absent") {
  // Mixed benchmark: the branch value exceeds the ground-mode population
  // bound, so it is reported as unphysical and carries no residual.
  const ModelParams pb = params_b();
  const PitchforkBranches wide = pitchfork_points(pb, 0.0);
  CHECK(wide.exists);
  const double chi0 = pb.nu0 / (2.0 * pb.j0);
  CHECK(wide.z0_plus == doctest::Approx(std::sqrt(1.0 - 1.0 / (chi0 * chi0))).epsilon(1e-12));
  CHECK(wide.z0_minus == -wide.z0_plus);
  CHECK(!wide.physical);
  CHECK(std::isnan(wide.residual));

  // Weak benchmark: interaction far below the fold, no branch at all.
  const PitchforkBranches none = pitchfork_points(params_a(), 0.0);
  CHECK(!none.exists);
  CHECK(std::isnan(none.z0_plus));

  // Exactly at the fold the branch sits at the origin, which is a genuine
  // equilibrium of the averaged flow.
  ModelParams fold = reference_set();
  fold.j0 = 0.1;
  fold.nu0 = 0.24;  // nu0 / (2 j0) = 1.2 = 1 + z2
  const PitchforkBranches at = pitchfork_points(fold, 0.2);
  CHECK(at.exists);
  CHECK(at.z0_plus == 0.0);
  CHECK(at.physical);
  CHECK(at.residual < 1e-10);

  ModelParams bad = reference_set();
  CHECK_THROWS_AS(pitchfork_points(bad, 0.0), Error);  // j0 = 0
  CHECK_THROWS_AS(pitchfork_points(fold, 1.0), Error);
}

TEST_CASE("pitchfork residual reports the averaged-flow defect exactly") {
  // Close to the fold the branch is inside the physical disk; the residual
  // then equals the phase-rate of the averaged flow at that point.
  ModelParams p = reference_set();
  p.j0 = 0.05;
  p.nu0 = 0.11;  // chi0 = 1.1
  const PitchforkBranches br = pitchfork_points(p, 0.0);
  REQUIRE(br.exists);
  REQUIRE(br.physical);
  const double z0 = br.z0_plus;
  const double s0 = std::sqrt(1.0 - 4.0 * z0 * z0);
  const double predicted = std::abs(2.0 * z0 * (p.nu0 - 2.0 * p.j0 / s0));
  CHECK(br.residual == doctest::Approx(predicted).epsilon(1e-12));
  CHECK(br.residual > 0.05);  // the branch curve is not itself stationary

  // The stationary point of the same inverted pendulum sits at half the
  // branch value: z = (1/2) sqrt(1 - 1/chi0^2).
  const double chi0 = p.nu0 / (2.0 * p.j0);
  const double z_true = 0.5 * std::sqrt(1.0 - 1.0 / (chi0 * chi0));
  const AveragedState d = eom_averaged({z_true, std::numbers::pi, 0.0, 0.0}, 0.0, p);
  CHECK(std::abs(d.theta0) < 1e-14);
}

TEST_CASE("critical imbalance: value, growth, limits, and absence") {
  const ModelParams pc = params_c();
  const double chi1 = pc.nu1 / (2.0 * pc.j1);
  const double v = critical_imbalance(pc, 0.0);
  CHECK(v == doctest::Approx(0.5 * std::sqrt(1.0 - std::pow(1.0 / chi1, 2.0 / 3.0)))
                 .epsilon(1e-13));
  CHECK(v == doctest::Approx(0.394171).epsilon(1e-5));
  // Raising the frozen level population (z2 > 0) moves the merge point up.
  CHECK(critical_imbalance(pc, 0.2) > v);

  // Strong-interaction limit approaches the full half-population.
  ModelParams deep = reference_set();
  deep.j1 = 0.05;
  deep.nu1 = 2e6 * deep.j1;
  CHECK(critical_imbalance(deep, 0.0) == doctest::Approx(0.5).epsilon(1e-4));

  try {
    critical_imbalance(params_a(), 0.0);  // chi1 ~ 2e-4, far below threshold
    FAIL("expected NoCriticalPoint");
  } catch (const Error &e) {
    CHECK(e.code() == ErrorCode::NoCriticalPoint);
  }
  ModelParams edge = reference_set();
  edge.j1 = 0.05;
  edge.nu1 = 2.0 * edge.j1;  // chi1 == 1 bitwise: exactly at threshold for z2 = 0
  CHECK_THROWS_AS(critical_imbalance(edge, 0.0), Error);
  ModelParams bad = reference_set();
  CHECK_THROWS_AS(critical_imbalance(bad, 0.0), Error);  // j1 = 0
}

TEST_CASE("effective fixed points at rest: the four-root portrait") {
  CHECK(kEffectiveScanBrackets == 2048);
  const ModelParams p = params_c();
  const auto roots = effective_fixed_points(p, 0.0, 0.0, kEffectiveScanBrackets);
  REQUIRE(roots.size() == 4);
  // Sorted by (theta1, z1): the libration center first.
  CHECK(roots[0].theta1_0 == 0.0);
  CHECK(std::abs(roots[0].z1_0) < 1e-9);
  CHECK(roots[0].stable);
  // Then the three pi-phase roots: island, saddle, island.
  const double chi1 = p.nu1 / (2.0 * p.j1);
  const double star = 0.5 * std::sqrt(1.0 - 1.0 / (chi1 * chi1));
  CHECK(roots[1].theta1_0 == doctest::Approx(std::numbers::pi));
  CHECK(roots[1].z1_0 == doctest::Approx(-star).epsilon(1e-8));
  CHECK(roots[1].stable);
  CHECK(std::abs(roots[2].z1_0) < 1e-9);
  CHECK(!roots[2].stable);
  CHECK(roots[3].z1_0 == doctest::Approx(star).epsilon(1e-8));
  CHECK(roots[3].stable);
  CHECK(roots[1].z1_0 == doctest::Approx(-roots[3].z1_0).epsilon(1e-9));
  for (const auto &r : roots) CHECK(r.z0_frozen == 0.0);
}

TEST_CASE("effective fixed points: displacement, sign law, and the island merge") {
  const ModelParams p = params_c();

  const auto shifted = effective_fixed_points(p, 0.0, 0.1, kEffectiveScanBrackets);
  REQUIRE(shifted.size() == 4);
  // Libration center is pushed opposite to the frozen ground imbalance;
  // the displacement stays well inside the pi-island position (~0.49).
  CHECK(shifted[0].theta1_0 == 0.0);
  CHECK(shifted[0].z1_0 < 0.0);
  CHECK(std::abs(shifted[0].z1_0) < 0.2);
  const auto mirrored = effective_fixed_points(p, 0.0, -0.1, kEffectiveScanBrackets);
  REQUIRE(mirrored.size() == 4);
  CHECK(mirrored[0].z1_0 > 0.0);
  CHECK(mirrored[0].z1_0 == doctest::Approx(-shifted[0].z1_0).epsilon(1e-9));

  // Past the merge the negative-imbalance island and its saddle are gone.
  const auto late = effective_fixed_points(p, 0.0, 0.2, kEffectiveScanBrackets);
  REQUIRE(late.size() == 2);
  CHECK(late[0].theta1_0 == 0.0);
  CHECK(late[1].theta1_0 == doctest::Approx(std::numbers::pi));
  CHECK(late[1].z1_0 > 0.4);

  // Locate the merge by bisection on the root count.
  double lo = 0.1, hi = 0.2;
  while (hi - lo > 1e-6) {
    const double mid = 0.5 * (lo + hi);
    const auto r = effective_fixed_points(p, 0.0, mid, kEffectiveScanBrackets);
    (r.size() == 4 ? lo : hi) = mid;
  }
  const double z0_star = 0.5 * (lo + hi);
  CHECK(z0_star == doctest::Approx(0.18962).epsilon(3e-3));

  // Just below the merge, the two coalescing pi-phase roots straddle the
  // critical imbalance of the frozen excited pendulum.
  const auto last = effective_fixed_points(p, 0.0, lo, kEffectiveScanBrackets);
  REQUIRE(last.size() == 4);
  std::vector<double> pi_roots;
  for (const auto &r : last)
    if (r.theta1_0 > 1.0 && r.z1_0 < 0.0) pi_roots.push_back(r.z1_0);
  REQUIRE(pi_roots.size() == 2);
  const double midpoint = 0.5 * (pi_roots[0] + pi_roots[1]);
  CHECK(midpoint == doctest::Approx(-critical_imbalance(p, 0.0)).epsilon(1e-3));
}

TEST_CASE("effective fixed point scan input validation") {
  const ModelParams p = params_c();
  CHECK_THROWS_AS(effective_fixed_points(p, 0.0, 0.0, 1), Error);
  try {
    effective_fixed_points(p, 0.0, 0.6, kEffectiveScanBrackets);
    FAIL("expected OutOfBounds");
  } catch (const Error &e) {
    CHECK(e.code() == ErrorCode::OutOfBounds);
  }
  CHECK_THROWS_AS(effective_fixed_points(p, 1.0, 0.0, kEffectiveScanBrackets), Error);
}

TEST_CASE("a center holds a perturbed trajectory; a saddle releases it") {
  // Center: weak-interaction ground pendulum, averaged flow. A small kick
  // stays small for fifty slow periods.
  {
    const ModelParams p = params_a();
    PendulumState s;
    s.z0 = 1e-3;
    IntegratorConfig cfg;
    cfg.model = Model::Averaged;
    cfg.t_end = 1506.0;
    cfg.sample_interval = 1.0;
    const Trajectory traj = integrate(s, p, cfg);
    REQUIRE(traj.termination == Termination::Completed);
    for (const PendulumState &st : traj.states) {
      CHECK(std::abs(st.z0) < 1e-2);
      CHECK(std::abs(st.theta0) < 1e-2);
      CHECK(std::abs(st.z1) < 1e-2);
      CHECK(std::abs(st.theta1) < 1e-2);
    }
  }
  // Saddle: mixed benchmark at the inverted phase. A kick a thousand times
  // smaller escapes to order one within the window.
  {
    const ModelParams p = params_b();
    PendulumState s;
    s.z0 = 1e-6;
    s.theta0 = std::numbers::pi;
    IntegratorConfig cfg;
    cfg.model = Model::Averaged;
    cfg.t_end = 31080.0;
    cfg.sample_interval = 10.0;
    const Trajectory traj = integrate(s, p, cfg);
    REQUIRE(traj.termination == Termination::Completed);
    double early = 0.0, ever = 0.0;
    for (size_t i = 0; i < traj.states.size(); ++i) {
      const double a = std::abs(traj.states[i].z0);
      if (traj.times[i] < 500.0) early = std::max(early, a);
      ever = std::max(ever, a);
    }
    CHECK(early < 1e-3);  // still near the saddle at first
    CHECK(ever > 0.1);    // gone by the end of the window
  }
}

}  // TEST_SUITE
