#pragma once

#include <string>
#include <utility>
#include <vector>

#include "cache.hpp"
#include "types.hpp"

namespace dw4 {

struct SweepGrid {
  double v0_min = 3.0, v0_max = 12.0;
  int v0_count = 60;
  double gamma_min = 1e-6, gamma_max = 1e-1;
  int gamma_count = 60;
  bool log_gamma = true;
  double domain_halfwidth = 1.5;
  int grid_points = 2048;

  void validate() const;
  std::vector<double> v0_values() const;
  std::vector<double> gamma_values() const;
};

struct RegimeCell {
  double v0 = 0.0, gamma = 0.0;
  ModelParams params{};
  RegimeIndicators indicators{};
  bool z2_0_exists = false;  // any balanced stationary branch within |z2| <= 1
  bool solver_ok = false;
  std::string error;
};

struct SweepResult {
  std::vector<double> v0s, gammas;
  std::vector<RegimeCell> cells;  // row-major, index = iv * gammas.size() + ig

  const RegimeCell &at(std::size_t iv, std::size_t ig) const {
    return cells[iv * gammas.size() + ig];
  }
};

// Classify every grid cell; one eigensolve per potential column, shared
// across the gamma axis. jobs <= 0 selects hardware concurrency.
SweepResult sweep(const SweepGrid &grid, CoefficientCache *cache, int jobs);

struct BoundaryCurve {
  std::string name;
  std::vector<std::pair<double, double>> points;  // (v0, gamma) inside the window
  std::vector<double> missing_v0;                 // columns where the root leaves the window
};

// gamma(v0) loci of the interaction-ratio levels {1, 0.1}, the barrier
// validity line v0 = E1, and the onset of balanced stationary points.
std::vector<BoundaryCurve> boundary_curves(const SweepGrid &grid, CoefficientCache *cache,
                                           int jobs);

}  // namespace dw4
