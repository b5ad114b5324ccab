#pragma once
// Persistent cache of gamma-independent spectral quantities, keyed by the
// potential configuration. Interaction integrals scale linearly with
// gamma, so one eigensolve per (v0, grid, halfwidth) serves every gamma.

#include <mutex>
#include <optional>
#include <string>

#include "types.hpp"

namespace dw4 {

class CoefficientCache {
public:
  // Empty path disables persistence (lookups miss, stores are dropped).
  explicit CoefficientCache(std::string path) : path_(std::move(path)) {}

  static std::string key(const PotentialSpec &spec);

  std::optional<CoefficientIntegrals> lookup(const PotentialSpec &spec) const;

  // Read-merge-write with an atomic rename; concurrent writers of the
  // same key produce identical values, so last-write-wins is safe.
  void store(const PotentialSpec &spec, const CoefficientIntegrals &ci);

  const std::string &path() const { return path_; }

private:
  std::string path_;
  mutable std::mutex mu_;
};

// Cached integrals for the spec, solving and storing on miss. cache may
// be null (always solves).
CoefficientIntegrals integrals_for(const PotentialSpec &spec, CoefficientCache *cache);

// Full coefficient set at the given interaction scale.
ModelParams coefficients_for(const PotentialSpec &spec, double gamma, CoefficientCache *cache);

}  // namespace dw4
