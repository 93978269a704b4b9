#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "qpw/config.hpp"
#include "qpw/density_matrix.hpp"
#include "qpw/hartree_fock.hpp"
#include "qpw/self_energy.hpp"

namespace qpw {

enum class StageStatus { ok, failed, skipped };
std::string to_string(StageStatus s);

struct StageRecord {
  std::string name;
  StageStatus status = StageStatus::skipped;
  std::string message;
  /// Pulled in as a dependency rather than requested.
  bool implied = false;
};

struct RunReport {
  std::filesystem::path out_dir;
  std::string config_hash;
  /// Emitted files, relative to out_dir, in emission order.
  std::vector<std::string> artifacts;
  std::vector<StageRecord> stages;
  /// Per-stage summary values keyed by stage name.
  nlohmann::json metrics = nlohmann::json::object();
  bool degraded = false;
  nlohmann::json to_json() const;
};

/// Runs the requested stages (plus their prerequisites) in dependency order,
/// writing every artifact under `out_dir`. A failing stage is recorded, its
/// dependents are skipped, and the report is marked degraded; files of the
/// completed stages are kept. report.json is written last.
RunReport run_pipeline(const RunConfig& config, const std::filesystem::path& out_dir);

/// Stages to execute for a request, prerequisites included, in run order.
std::vector<std::string> resolve_stages(const std::vector<std::string>& requested);

/// Correlation self-energy on the grid at crystal momentum resolution.
SelfEnergyModel grid_self_energy(const ModelSystem& system, const SelfEnergyConfig& config);

/// Static kernel in an orbital basis (columns of `basis`), taken at the k point
/// nearest the zone centre.
SelfEnergyModel orbital_self_energy(const ModelSystem& system, const SelfEnergyConfig& config,
                                    const ComplexMatrix& basis);

/// Trace-identity blocks from converged per-k SCF results: one projector per
/// occupied spin-band, k weight 2 pi / (K L) and vectors scaled so that each
/// projector carries weight 1/K. Band energies are measured from `epsilon0`.
std::vector<MomentumBlock> trace_identity_blocks(const ModelSystem& system, const BandRun& run, double epsilon0);

}  // namespace qpw
