#include "cache.hpp"

#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include <unistd.h>

#include "eigensolver.hpp"

namespace dw4 {

namespace {

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

nlohmann::json load_file(const std::string &path) {
  std::ifstream in(path);
  if (!in) return nlohmann::json::object();
  try {
    nlohmann::json j;
    in >> j;
    if (j.is_object()) return j;
  } catch (const nlohmann::json::exception &) {
    // Corrupt cache: treat as empty, it will be rewritten.
  }
  return nlohmann::json::object();
}

}  // namespace

std::string CoefficientCache::key(const PotentialSpec &spec) {
  return "v0=" + num(spec.v0) + ";n=" + std::to_string(spec.grid_points) +
         ";L=" + num(spec.domain_halfwidth);
}

std::optional<CoefficientIntegrals> CoefficientCache::lookup(const PotentialSpec &spec) const {
  if (path_.empty()) return std::nullopt;
  std::lock_guard lock(mu_);
  const nlohmann::json j = load_file(path_);
  const auto it = j.find(key(spec));
  if (it == j.end()) return std::nullopt;
  try {
    CoefficientIntegrals ci;
    ci.e0 = it->at("e0").get<double>();
    ci.e1 = it->at("e1").get<double>();
    ci.j0 = it->at("j0").get<double>();
    ci.j1 = it->at("j1").get<double>();
    ci.i0 = it->at("u0_per_gamma").get<double>();
    ci.i1 = it->at("u1_per_gamma").get<double>();
    ci.i01 = it->at("u01_per_gamma").get<double>();
    return ci;
  } catch (const nlohmann::json::exception &) {
    return std::nullopt;
  }
}

void CoefficientCache::store(const PotentialSpec &spec, const CoefficientIntegrals &ci) {
  if (path_.empty()) return;
  std::lock_guard lock(mu_);
  nlohmann::json j = load_file(path_);
  j[key(spec)] = {{"e0", ci.e0},   {"e1", ci.e1},           {"j0", ci.j0},
                  {"j1", ci.j1},   {"u0_per_gamma", ci.i0}, {"u1_per_gamma", ci.i1},
                  {"u01_per_gamma", ci.i01}};
  std::error_code ec;
  const auto parent = std::filesystem::path(path_).parent_path();
  if (!parent.empty()) std::filesystem::create_directories(parent, ec);
  const std::string tmp = path_ + ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::trunc);
    if (!out) fail(ErrorCode::IoError, "cache: cannot write " + tmp);
    out << j.dump(2) << '\n';
  }
  std::filesystem::rename(tmp, path_, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    fail(ErrorCode::IoError, "cache: cannot replace " + path_);
  }
}

CoefficientIntegrals integrals_for(const PotentialSpec &spec, CoefficientCache *cache) {
  if (cache) {
    if (auto hit = cache->lookup(spec)) return *hit;
  }
  const EigenSolution sol = solve_spectrum(spec);
  const LocalizedModes modes = build_localized_modes(sol);
  const CoefficientIntegrals ci = coefficient_integrals(sol, modes);
  if (cache) cache->store(spec, ci);
  return ci;
}

ModelParams coefficients_for(const PotentialSpec &spec, double gamma, CoefficientCache *cache) {
  return params_from_integrals(integrals_for(spec, cache), gamma);
}

}  // namespace dw4
