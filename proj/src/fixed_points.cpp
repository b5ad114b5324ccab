#include "fixed_points.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "model.hpp"

namespace dw4 {

namespace {

constexpr double kFdStep = 1e-7;
constexpr double kResidualTol = 1e-8;
constexpr double kCenterRealTol = 1e-8;
constexpr double kUnstableRealTol = 1e-6;

Stability label_spectrum(const std::vector<std::complex<double>> &eig) {
  bool any_unstable = false, all_center = true;
  for (const auto &l : eig) {
    if (l.real() > kUnstableRealTol) any_unstable = true;
    if (std::abs(l.real()) >= kCenterRealTol || std::abs(l) <= 1e-12) all_center = false;
  }
  if (any_unstable) return Stability::Unstable;
  if (all_center) return Stability::Center;
  return Stability::Mixed;
}

std::vector<std::complex<double>> fd_spectrum(const VectorField &field, const double *point,
                                              int dim, double *residual_out) {
  std::vector<double> x(point, point + dim), fp(dim), fm(dim);
  field(x.data(), fp.data());
  double res = 0.0;
  for (int i = 0; i < dim; ++i) res = std::max(res, std::abs(fp[i]));
  if (residual_out) *residual_out = res;

  Eigen::MatrixXd jac(dim, dim);
  for (int j = 0; j < dim; ++j) {
    const double xj = x[j];
    x[j] = xj + kFdStep;
    field(x.data(), fp.data());
    x[j] = xj - kFdStep;
    field(x.data(), fm.data());
    x[j] = xj;
    for (int i = 0; i < dim; ++i) jac(i, j) = (fp[i] - fm[i]) / (2.0 * kFdStep);
  }
  Eigen::EigenSolver<Eigen::MatrixXd> solver(jac, /*computeEigenvectors=*/false);
  std::vector<std::complex<double>> out(dim);
  for (int i = 0; i < dim; ++i) out[i] = solver.eigenvalues()[i];
  std::sort(out.begin(), out.end(), [](const auto &a, const auto &b) {
    return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
  });
  return out;
}

VectorField field_for(const PendulumState &point, const ModelParams &params, FieldModel model) {
  switch (model) {
    case FieldModel::Full:
      return [params](const double *x, double *dx) {
        const PendulumState d = eom_full({x[0], x[1], x[2], x[3], x[4], x[5]}, params);
        dx[0] = d.z0; dx[1] = d.theta0; dx[2] = d.z1; dx[3] = d.theta1; dx[4] = d.z2; dx[5] = d.theta2;
      };
    case FieldModel::AveragedGround:
      return [params, point](const double *x, double *dx) {
        const AveragedState d =
            eom_averaged({x[0], x[1], point.z1, point.theta1}, point.z2, params);
        dx[0] = d.z0;
        dx[1] = d.theta0;
      };
    case FieldModel::AveragedExcited:
      return [params, point](const double *x, double *dx) {
        const AveragedState d =
            eom_averaged({point.z0, point.theta0, x[0], x[1]}, point.z2, params);
        dx[0] = d.z1;
        dx[1] = d.theta1;
      };
  }
  fail(ErrorCode::InvalidArgument, "jacobian_stability: unknown field model");
}

}  // namespace

StabilityReport stability_of_field(const VectorField &field, const double *point, int dim,
                                   double residual_tol) {
  StabilityReport rep;
  rep.eigenvalues = fd_spectrum(field, point, dim, &rep.residual);
  if (rep.residual > residual_tol)
    fail(ErrorCode::NotAFixedPoint, "stability: field residual exceeds the stationarity threshold");
  rep.label = label_spectrum(rep.eigenvalues);
  return rep;
}

StabilityReport jacobian_stability(const PendulumState &point, const ModelParams &params,
                                   FieldModel model) {
  const VectorField field = field_for(point, params, model);
  if (model == FieldModel::Full) {
    const double x[6] = {point.z0, point.theta0, point.z1, point.theta1, point.z2, point.theta2};
    return stability_of_field(field, x, 6, kResidualTol);
  }
  const bool ground = model == FieldModel::AveragedGround;
  const double x[2] = {ground ? point.z0 : point.z1, ground ? point.theta0 : point.theta1};
  return stability_of_field(field, x, 2, kResidualTol);
}

double stationary_imbalance(const ModelParams &params, int k0, int k1, int k2) {
  const double sigma = ((k0 + k1 + k2) % 2 == 0) ? 1.0 : -1.0;
  const double num = 2.0 * params.delta_e + 2.0 * (k0 == 0 ? 1.0 : -1.0) * params.j0 -
                     2.0 * (k1 == 0 ? 1.0 : -1.0) * params.j1 + (params.nu1 - params.nu0);
  const double den = params.nu0 + params.nu1 - 2.0 * params.nu01 * (2.0 + sigma);
  if (std::abs(den) < 1e-30)
    fail(ErrorCode::DegenerateDenominator,
         "stationary_imbalance: interaction denominator vanishes");
  return num / den;
}

std::array<FixedPointReport, 8> analytic_fixed_points(const ModelParams &params) {
  std::array<FixedPointReport, 8> out{};
  std::size_t idx = 0;
  for (int k0 = 0; k0 < 2; ++k0)
    for (int k1 = 0; k1 < 2; ++k1)
      for (int k2 = 0; k2 < 2; ++k2) {
        FixedPointReport rep{};
        rep.k0 = k0;
        rep.k1 = k1;
        rep.k2 = k2;
        rep.z2_0 = stationary_imbalance(params, k0, k1, k2);
        rep.exists = std::abs(rep.z2_0) <= 1.0;
        if (rep.exists && std::abs(rep.z2_0) < 1.0 - 1e-12) {
          rep.location = {0.0, k0 * std::numbers::pi, 0.0, k1 * std::numbers::pi, rep.z2_0,
                          k2 * std::numbers::pi};
          const StabilityReport st = jacobian_stability(rep.location, params, FieldModel::Full);
          for (int i = 0; i < 6; ++i) rep.eigenvalues[i] = st.eigenvalues[i];
          rep.stability = st.label;
        } else {
          rep.stability = Stability::Mixed;
        }
        out[idx++] = rep;
      }
  return out;
}

PitchforkBranches pitchfork_points(const ModelParams &params, double z2) {
  if (!(params.j0 > 0.0))
    fail(ErrorCode::InvalidArgument, "pitchfork_points: ground hopping must be positive");
  if (!(std::abs(z2) < 1.0))
    fail(ErrorCode::InvalidArgument, "pitchfork_points: |z2| must be below 1");
  const double chi0 = params.nu0 / (2.0 * params.j0);
  const double ratio = (1.0 + z2) / chi0;
  const double rad = 1.0 - ratio * ratio;

  PitchforkBranches out{};
  out.exists = rad >= 0.0;
  if (!out.exists) {
    out.z0_plus = out.z0_minus = std::numeric_limits<double>::quiet_NaN();
    out.residual = std::numeric_limits<double>::quiet_NaN();
    return out;
  }
  out.z0_plus = std::sqrt(rad);
  out.z0_minus = -out.z0_plus;
  out.physical = std::abs(out.z0_plus) < zl_bound(0, z2);
  if (out.physical) {
    const AveragedState d = eom_averaged({out.z0_plus, std::numbers::pi, 0.0, 0.0}, z2, params);
    out.residual = std::abs(d.theta0);
  } else {
    out.residual = std::numeric_limits<double>::quiet_NaN();
  }
  return out;
}

double critical_imbalance(const ModelParams &params, double z2) {
  if (!(params.j1 > 0.0))
    fail(ErrorCode::InvalidArgument, "critical_imbalance: excited hopping must be positive");
  const double chi1 = params.nu1 / (2.0 * params.j1);
  if (!(chi1 > 1.0 - z2))
    fail(ErrorCode::NoCriticalPoint,
         "critical_imbalance: no merge point, interaction ratio at or below 1 - z2");
  const double r = std::pow((1.0 - z2) / chi1, 2.0 / 3.0);
  return 0.5 * std::sqrt(1.0 - r);
}

std::vector<EffectiveFixedPoint> effective_fixed_points(const ModelParams &params, double z2,
                                                        double z0_frozen, int brackets) {
  if (brackets < 2)
    fail(ErrorCode::InvalidArgument, "effective_fixed_points: bracket count too small");
  const double bound = zl_bound(1, z2);
  if (!(bound > 0.0))
    fail(ErrorCode::InvalidArgument, "effective_fixed_points: excited level fully depleted");
  if (!(std::abs(z0_frozen) < zl_bound(0, z2)))
    fail(ErrorCode::OutOfBounds, "effective_fixed_points: frozen z0 outside its bound");

  std::vector<EffectiveFixedPoint> out;
  for (const double theta1 : {0.0, std::numbers::pi}) {
    auto f = [&](double z1) {
      const AveragedState d = eom_averaged({z0_frozen, 0.0, z1, theta1}, z2, params);
      return d.theta1;
    };
    const double lo = -bound * (1.0 - 1e-9);
    const double hi = +bound * (1.0 - 1e-9);
    const double dz = (hi - lo) / brackets;
    double xa = lo, fa = f(xa);
    for (int i = 1; i <= brackets; ++i) {
      const double xb = (i == brackets) ? hi : lo + i * dz;
      const double fb = f(xb);
      if (fa == 0.0 || (fa < 0.0) != (fb < 0.0)) {
        double a = xa, b = xb;
        if (fa != 0.0) {
          double fav = fa;
          while (b - a > 1e-12) {
            const double m = 0.5 * (a + b);
            const double fm = f(m);
            if (fm == 0.0) { a = b = m; break; }
            if ((fav < 0.0) != (fm < 0.0)) b = m; else { a = m; fav = fm; }
          }
        } else {
          b = a;
        }
        const double root = 0.5 * (a + b);
        const double x[2] = {root, theta1};
        const PendulumState frozen{z0_frozen, 0.0, root, theta1, z2, 0.0};
        const VectorField field = field_for(frozen, params, FieldModel::AveragedExcited);
        double residual = 0.0;
        const auto eig = fd_spectrum(field, x, 2, &residual);
        bool stable = true;
        for (const auto &l : eig)
          if (l.real() > kUnstableRealTol) stable = false;
        out.push_back({theta1, root, z0_frozen, stable});
      }
      xa = xb;
      fa = fb;
    }
  }
  std::sort(out.begin(), out.end(), [](const auto &a, const auto &b) {
    return a.theta1_0 != b.theta1_0 ? a.theta1_0 < b.theta1_0 : a.z1_0 < b.z1_0;
  });
  // A zero of f landing exactly on a bracket edge is found by both intervals.
  out.erase(std::unique(out.begin(), out.end(),
                        [](const auto &a, const auto &b) {
                          return a.theta1_0 == b.theta1_0 && std::abs(a.z1_0 - b.z1_0) < 1e-9;
                        }),
            out.end());
  return out;
}

}  // namespace dw4
