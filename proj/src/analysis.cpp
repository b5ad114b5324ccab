#include "analysis.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numbers>
#include <thread>

namespace dw4 {

double component(const PendulumState &s, Var v) {
  switch (v) {
    case Var::Z0: return s.z0;
    case Var::Theta0: return s.theta0;
    case Var::Z1: return s.z1;
    case Var::Theta1: return s.theta1;
    case Var::Z2: return s.z2;
    case Var::Theta2: return s.theta2;
  }
  fail(ErrorCode::InvalidArgument, "analysis: unknown variable selector");
}

bool is_angle(Var v) {
  return v == Var::Theta0 || v == Var::Theta1 || v == Var::Theta2;
}

const char *var_name(Var v) {
  switch (v) {
    case Var::Z0: return "z0";
    case Var::Theta0: return "theta0";
    case Var::Z1: return "z1";
    case Var::Theta1: return "theta1";
    case Var::Z2: return "z2";
    case Var::Theta2: return "theta2";
  }
  return "?";
}

double wrap_angle(double theta) {
  const double two_pi = 2.0 * std::numbers::pi;
  double w = std::fmod(theta + std::numbers::pi, two_pi);
  if (w <= 0.0) w += two_pi;
  return w - std::numbers::pi;
}

double time_mean(const std::vector<double> &t, const std::vector<double> &v) {
  if (t.size() < 2) fail(ErrorCode::InvalidArgument, "time_mean: need at least two samples");
  double acc = 0.0;
  for (std::size_t i = 0; i + 1 < t.size(); ++i)
    acc += 0.5 * (v[i] + v[i + 1]) * (t[i + 1] - t[i]);
  const double span = t.back() - t.front();
  if (!(span > 0.0)) fail(ErrorCode::InvalidArgument, "time_mean: zero time span");
  return acc / span;
}

namespace {

struct Crossing {
  double t;
  bool rising;
};

std::vector<Crossing> mean_crossings(const std::vector<double> &t, const std::vector<double> &v,
                                     double level) {
  std::vector<Crossing> out;
  for (std::size_t i = 0; i + 1 < v.size(); ++i) {
    const double a = v[i] - level;
    const double b = v[i + 1] - level;
    const bool rising = a < 0.0 && b >= 0.0;
    const bool falling = a > 0.0 && b <= 0.0;
    if (!rising && !falling) continue;
    const double alpha = -a / (b - a);
    out.push_back({t[i] + alpha * (t[i + 1] - t[i]), rising});
  }
  return out;
}

}  // namespace

FrequencyEstimate estimate_frequency(const Trajectory &traj, Var v) {
  if (traj.times.size() < 3)
    fail(ErrorCode::InsufficientOscillations, "estimate_frequency: trajectory too short");
  std::vector<double> vals(traj.states.size());
  for (std::size_t i = 0; i < traj.states.size(); ++i) vals[i] = component(traj.states[i], v);
  const double level = time_mean(traj.times, vals);
  const auto crossings = mean_crossings(traj.times, vals, level);

  std::vector<double> rising;
  for (const auto &c : crossings)
    if (c.rising) rising.push_back(c.t);

  if (crossings.size() < 5 || rising.size() < 2)
    fail(ErrorCode::InsufficientOscillations,
         "estimate_frequency: fewer than five mean-crossings of the selected variable");

  const double period = (rising.back() - rising.front()) / static_cast<double>(rising.size() - 1);
  const double omega = 2.0 * std::numbers::pi / period;

  double spread = 0.0;
  if (rising.size() > 2) {
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < rising.size(); ++i) {
      const double w = 2.0 * std::numbers::pi / (rising[i + 1] - rising[i]);
      acc += (w - omega) * (w - omega);
    }
    spread = std::sqrt(acc / static_cast<double>(rising.size() - 2));
  }
  return {omega, spread, static_cast<int>(crossings.size())};
}

TrappingReport detect_self_trapping(const Trajectory &traj, Var v) {
  if (traj.times.size() < 2)
    fail(ErrorCode::InvalidArgument, "detect_self_trapping: trajectory too short");
  std::vector<double> vals(traj.states.size());
  bool pos = false, neg = false;
  double lo = component(traj.states[0], v), hi = lo;
  for (std::size_t i = 0; i < traj.states.size(); ++i) {
    vals[i] = component(traj.states[i], v);
    pos = pos || vals[i] > 0.0;
    neg = neg || vals[i] < 0.0;
    lo = std::min(lo, vals[i]);
    hi = std::max(hi, vals[i]);
  }
  const double mean = time_mean(traj.times, vals);
  const bool sign_change = pos && neg;
  return {!sign_change && std::abs(mean) > kTrappingMeanThreshold, mean, lo, hi};
}

std::vector<PortraitEntry> phase_portrait(const std::vector<PendulumState> &initials,
                                          const ModelParams &params, const IntegratorConfig &cfg,
                                          int jobs) {
  std::vector<PortraitEntry> out(initials.size());
  if (initials.empty()) return out;
  unsigned n_threads = jobs > 0 ? static_cast<unsigned>(jobs) : std::thread::hardware_concurrency();
  n_threads = std::clamp<unsigned>(n_threads, 1, static_cast<unsigned>(initials.size()));

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= initials.size()) return;
      out[i].initial = initials[i];
      try {
        out[i].traj = integrate(initials[i], params, cfg);
        out[i].ok = true;
      } catch (const std::exception &ex) {
        out[i].ok = false;
        out[i].error = ex.what();
      }
    }
  };
  std::vector<std::thread> pool;
  for (unsigned k = 1; k < n_threads; ++k) pool.emplace_back(worker);
  worker();
  for (auto &th : pool) th.join();
  return out;
}

double convex_hull_area(const std::vector<std::pair<double, double>> &pts) {
  std::vector<std::pair<double, double>> p = pts;
  std::sort(p.begin(), p.end());
  p.erase(std::unique(p.begin(), p.end()), p.end());
  const std::size_t n = p.size();
  if (n < 3) return 0.0;

  auto cross = [](const std::pair<double, double> &o, const std::pair<double, double> &a,
                  const std::pair<double, double> &b) {
    return (a.first - o.first) * (b.second - o.second) -
           (a.second - o.second) * (b.first - o.first);
  };
  std::vector<std::pair<double, double>> hull(2 * n);
  std::size_t k = 0;
  for (std::size_t i = 0; i < n; ++i) {
    while (k >= 2 && cross(hull[k - 2], hull[k - 1], p[i]) <= 0.0) --k;
    hull[k++] = p[i];
  }
  const std::size_t lower = k + 1;
  for (std::size_t i = n - 1; i-- > 0;) {
    while (k >= lower && cross(hull[k - 2], hull[k - 1], p[i]) <= 0.0) --k;
    hull[k++] = p[i];
  }
  hull.resize(k > 1 ? k - 1 : 0);

  double area = 0.0;
  for (std::size_t i = 0; i < hull.size(); ++i) {
    const auto &a = hull[i];
    const auto &b = hull[(i + 1) % hull.size()];
    area += a.first * b.second - b.first * a.second;
  }
  return std::abs(area) / 2.0;
}

PoincareResult poincare_section(const Trajectory &traj, Var section_var, double value,
                                int direction, Var plane_x, Var plane_y) {
  if (traj.times.size() < 2)
    fail(ErrorCode::NoCrossings, "poincare_section: trajectory too short");

  PoincareResult res;
  for (std::size_t i = 0; i + 1 < traj.times.size(); ++i) {
    const double a = component(traj.states[i], section_var) - value;
    const double b = component(traj.states[i + 1], section_var) - value;
    const bool rising = a < 0.0 && b >= 0.0;
    const bool falling = a > 0.0 && b <= 0.0;
    const bool take = (direction > 0 && rising) || (direction < 0 && falling) ||
                      (direction == 0 && (rising || falling));
    if (!take) continue;
    const double alpha = -a / (b - a);
    auto interp = [&](Var v) {
      const double u = component(traj.states[i], v);
      const double w = component(traj.states[i + 1], v);
      const double x = u + alpha * (w - u);
      return is_angle(v) ? wrap_angle(x) : x;
    };
    res.points.push_back(
        {interp(plane_x), interp(plane_y), traj.times[i] + alpha * (traj.times[i + 1] - traj.times[i])});
  }
  if (res.points.size() < 10)
    fail(ErrorCode::NoCrossings, "poincare_section: fewer than ten section crossings");

  std::vector<std::pair<double, double>> xy;
  xy.reserve(res.points.size());
  for (const auto &p : res.points) xy.emplace_back(p.x, p.y);
  res.hull_area = convex_hull_area(xy);
  res.chaos_candidate = res.hull_area > kChaosAreaThreshold;
  return res;
}

}  // namespace dw4
