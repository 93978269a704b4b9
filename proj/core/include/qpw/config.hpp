#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "qpw/green_dyson.hpp"
#include "qpw/hartree_fock.hpp"
#include "qpw/model_system.hpp"
#include "qpw/quasiparticle.hpp"

namespace qpw {

/// Config rejection carrying the dotted path of the offending field.
class ConfigError : public InvalidArgument {
 public:
  ConfigError(std::string field, const std::string& message)
      : InvalidArgument(field + ": " + message), field_(std::move(field)) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

struct OracleConfig {
  int orbital_cutoff = 8;
};

struct BandsConfig {
  Index count = 3;
};

/// Correlation self-energy description. Kernels are c * identity (constant),
/// sum_i g_i |phi_i><phi_i| over reference orbitals (separable), or one
/// c_k * identity per k-point (tabulated); `dispersion` = "cos" multiplies
/// static kernels by cos(k).
struct SelfEnergyConfig {
  std::string kind = "zero";
  double value = 0.0;
  std::vector<int> orbitals;
  std::vector<double> couplings;
  std::string dispersion = "none";
  std::vector<double> momentum_values;
};

struct QuasiparticleConfig {
  Extremum extremum = Extremum::min;
  double gauge_constant = 0.0;
  double regime_threshold = 1.0;
};

struct DysonConfig {
  Index orbitals = 16;
  std::size_t frequency_points = 2000;
  double eta = 1e-3;
  double padding = 1.0;
  DysonMethod method = DysonMethod::direct;
};

struct SpectrumConfig {
  double mass = 1.0;
  std::vector<double> gammas{0.1};
  std::vector<int> n_values{1, 2, 3, 4, 5, 10, 100};
  std::vector<int> k_values{1};
  std::vector<int> limit_sequence{10, 100, 1000};
};

inline const std::vector<std::string> kAllStages = {"oracle", "hf", "bands", "quasiparticle", "dyson", "spectrum"};

struct RunConfig {
  SystemSpec system;
  ScfOptions scf;
  OracleConfig oracle;
  BandsConfig bands;
  SelfEnergyConfig self_energy;
  QuasiparticleConfig quasiparticle;
  DysonConfig dyson;
  SpectrumConfig spectrum;
  /// Requested stages in any order; run in dependency order.
  std::vector<std::string> stages;
  unsigned threads = 1;
  std::uint64_t seed = 0;
};

/// Strict parse: unknown keys, wrong types and out-of-range values throw ConfigError.
RunConfig parse_run_config(const nlohmann::json& j);
RunConfig load_run_config(const std::filesystem::path& path);

/// Canonical encoding with every field spelled out.
nlohmann::json to_json(const RunConfig& config);

/// FNV-1a of the canonical encoding (threads excluded: it does not change results).
std::string config_hash(const RunConfig& config);

/// Stages applicable to the system when none are requested.
std::vector<std::string> default_stages(const SystemSpec& spec);

}  // namespace qpw
