#include "regime_map.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

#include "eigensolver.hpp"
#include "fixed_points.hpp"
#include "model.hpp"

namespace dw4 {

void SweepGrid::validate() const {
  if (v0_count < 2 || gamma_count < 2)
    fail(ErrorCode::InvalidArgument, "sweep: axis counts must be at least 2");
  if (!(v0_min > 0.0) || !(v0_max > v0_min))
    fail(ErrorCode::InvalidArgument, "sweep: barrier range must be positive and increasing");
  if (!(gamma_min > 0.0) || !(gamma_max > gamma_min))
    fail(ErrorCode::InvalidArgument, "sweep: interaction range must be positive and increasing");
}

std::vector<double> SweepGrid::v0_values() const {
  std::vector<double> out(v0_count);
  for (int i = 0; i < v0_count; ++i)
    out[i] = v0_min + (v0_max - v0_min) * i / double(v0_count - 1);
  return out;
}

std::vector<double> SweepGrid::gamma_values() const {
  std::vector<double> out(gamma_count);
  if (log_gamma) {
    const double la = std::log(gamma_min), lb = std::log(gamma_max);
    for (int i = 0; i < gamma_count; ++i)
      out[i] = std::exp(la + (lb - la) * i / double(gamma_count - 1));
  } else {
    for (int i = 0; i < gamma_count; ++i)
      out[i] = gamma_min + (gamma_max - gamma_min) * i / double(gamma_count - 1);
  }
  return out;
}

namespace {

bool any_branch_exists(const ModelParams &p) {
  for (int k0 = 0; k0 < 2; ++k0)
    for (int k1 = 0; k1 < 2; ++k1)
      for (int k2 = 0; k2 < 2; ++k2) {
        try {
          if (std::abs(stationary_imbalance(p, k0, k1, k2)) <= 1.0) return true;
        } catch (const Error &) {
          // A degenerate branch denominator means no stationary value there.
        }
      }
  return false;
}

template <typename Fn>
void parallel_columns(int n, int jobs, Fn &&fn) {
  unsigned n_threads = jobs > 0 ? unsigned(jobs) : std::thread::hardware_concurrency();
  n_threads = std::clamp<unsigned>(n_threads, 1, unsigned(std::max(n, 1)));
  std::atomic<int> next{0};
  auto worker = [&] {
    for (;;) {
      const int i = next.fetch_add(1);
      if (i >= n) return;
      fn(i);
    }
  };
  std::vector<std::thread> pool;
  for (unsigned k = 1; k < n_threads; ++k) pool.emplace_back(worker);
  worker();
  for (auto &th : pool) th.join();
}

PotentialSpec column_spec(const SweepGrid &grid, double v0) {
  PotentialSpec spec;
  spec.v0 = v0;
  spec.domain_halfwidth = grid.domain_halfwidth;
  spec.grid_points = grid.grid_points;
  return spec;
}

}  // namespace

SweepResult sweep(const SweepGrid &grid, CoefficientCache *cache, int jobs) {
  grid.validate();
  SweepResult res;
  res.v0s = grid.v0_values();
  res.gammas = grid.gamma_values();
  res.cells.resize(res.v0s.size() * res.gammas.size());

  parallel_columns(int(res.v0s.size()), jobs, [&](int iv) {
    const double v0 = res.v0s[iv];
    CoefficientIntegrals ci{};
    std::string column_error;
    bool ok = true;
    try {
      ci = integrals_for(column_spec(grid, v0), cache);
    } catch (const std::exception &ex) {
      ok = false;
      column_error = ex.what();
    }
    for (std::size_t ig = 0; ig < res.gammas.size(); ++ig) {
      RegimeCell &cell = res.cells[iv * res.gammas.size() + ig];
      cell.v0 = v0;
      cell.gamma = res.gammas[ig];
      if (!ok) {
        cell.solver_ok = false;
        cell.error = column_error;
        cell.indicators.regime = Regime::Invalid;
        continue;
      }
      try {
        cell.params = params_from_integrals(ci, cell.gamma);
        cell.indicators = classify_regime(cell.params, std::nullopt, v0);
        cell.z2_0_exists = any_branch_exists(cell.params);
        cell.solver_ok = true;
      } catch (const std::exception &ex) {
        cell.solver_ok = false;
        cell.error = ex.what();
        cell.indicators.regime = Regime::Invalid;
      }
    }
  });
  return res;
}

std::vector<BoundaryCurve> boundary_curves(const SweepGrid &grid, CoefficientCache *cache,
                                           int jobs) {
  grid.validate();
  const std::vector<double> v0s = grid.v0_values();

  std::vector<CoefficientIntegrals> columns(v0s.size());
  std::vector<std::string> column_errors(v0s.size());
  parallel_columns(int(v0s.size()), jobs, [&](int iv) {
    try {
      columns[iv] = integrals_for(column_spec(grid, v0s[iv]), cache);
    } catch (const std::exception &ex) {
      column_errors[iv] = ex.what();
    }
  });

  struct Level {
    const char *name;
    double level;
    int which;  // 0: chi0, 1: chi1, 2: chi01
  };
  const Level levels[] = {
      {"chi0=1", 1.0, 0},   {"chi1=1", 1.0, 1},   {"chi01=1", 1.0, 2},
      {"chi0=0.1", 0.1, 0}, {"chi1=0.1", 0.1, 1}, {"chi01=0.1", 0.1, 2},
  };

  std::vector<BoundaryCurve> out;
  for (const Level &lv : levels) {
    BoundaryCurve curve;
    curve.name = lv.name;
    for (std::size_t iv = 0; iv < v0s.size(); ++iv) {
      if (!column_errors[iv].empty()) {
        curve.missing_v0.push_back(v0s[iv]);
        continue;
      }
      const CoefficientIntegrals &ci = columns[iv];
      // chi ratios are linear in gamma, so the level crossing is exact.
      double gamma = 0.0;
      switch (lv.which) {
        case 0: gamma = lv.level * 2.0 * ci.j0 / ci.i0; break;
        case 1: gamma = lv.level * 2.0 * ci.j1 / ci.i1; break;
        default: gamma = lv.level * (ci.e1 - ci.e0) / ci.i01; break;
      }
      if (gamma >= grid.gamma_min && gamma <= grid.gamma_max)
        curve.points.emplace_back(v0s[iv], gamma);
      else
        curve.missing_v0.push_back(v0s[iv]);
    }
    out.push_back(std::move(curve));
  }

  {
    // Vertical validity line v0 = E1(v0), bisected on the barrier height.
    BoundaryCurve curve;
    curve.name = "v0=e1";
    auto gap = [&](double v0) {
      return integrals_for(column_spec(grid, v0), cache).e1 - v0;
    };
    double a = grid.v0_min, b = grid.v0_max;
    double fa = gap(a), fb = gap(b);
    if ((fa < 0.0) != (fb < 0.0)) {
      for (int it = 0; it < 40 && b - a > 1e-4; ++it) {
        const double m = 0.5 * (a + b);
        const double fm = gap(m);
        if ((fa < 0.0) != (fm < 0.0)) {
          b = m;
          fb = fm;
        } else {
          a = m;
          fa = fm;
        }
      }
      const double root = 0.5 * (a + b);
      curve.points.emplace_back(root, grid.gamma_min);
      curve.points.emplace_back(root, grid.gamma_max);
    } else {
      curve.missing_v0.assign(v0s.begin(), v0s.end());
    }
    out.push_back(std::move(curve));
  }

  {
    // Onset of balanced stationary points: smallest gamma where any branch
    // satisfies |z2| <= 1; existence is monotone in gamma per column.
    BoundaryCurve curve;
    curve.name = "z2_0-existence";
    for (std::size_t iv = 0; iv < v0s.size(); ++iv) {
      if (!column_errors[iv].empty()) {
        curve.missing_v0.push_back(v0s[iv]);
        continue;
      }
      const CoefficientIntegrals &ci = columns[iv];
      auto exists_at = [&](double gamma) {
        return any_branch_exists(params_from_integrals(ci, gamma));
      };
      const bool lo = exists_at(grid.gamma_min);
      const bool hi = exists_at(grid.gamma_max);
      if (lo == hi) {
        curve.missing_v0.push_back(v0s[iv]);
        continue;
      }
      double la = std::log(grid.gamma_min), lb = std::log(grid.gamma_max);
      for (int it = 0; it < 60; ++it) {
        const double lm = 0.5 * (la + lb);
        if (exists_at(std::exp(lm)) == lo)
          la = lm;
        else
          lb = lm;
      }
      curve.points.emplace_back(v0s[iv], std::exp(0.5 * (la + lb)));
    }
    out.push_back(std::move(curve));
  }
  return out;
}

}  // namespace dw4
