#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "qpw/types.hpp"

namespace qpw {

enum class Boundary { box, periodic };

std::string to_string(Boundary b);
Boundary boundary_from_string(const std::string& s);

/// Uniform 1D grid centred on the origin: x_i = (i - (n-1)/2) h.
class Grid {
 public:
  Grid(Index count, double spacing);

  Index size() const { return static_cast<Index>(points_.size()); }
  double spacing() const { return spacing_; }
  /// spacing * count; for periodic systems this is the lattice period.
  double length() const { return spacing_ * static_cast<double>(points_.size()); }
  double point(Index i) const { return points_[static_cast<std::size_t>(i)]; }
  const std::vector<double>& points() const { return points_; }

 private:
  double spacing_;
  std::vector<double> points_;
};

/// Parameters from which a ModelSystem is fully determined.
struct SystemSpec {
  Index grid_points = 64;
  double spacing = 0.25;
  double well_depth = 2.0;
  double well_softening = 1.0;
  /// Softening s of the electron-electron kernel 1/sqrt(dx^2 + s^2).
  double softening = 1.0;
  /// Prefactor of the electron-electron kernel (1 = Coulomb, 0 = free electrons).
  double interaction_strength = 1.0;
  int electrons = 2;
  Boundary boundary = Boundary::box;
  /// Number of Monkhorst-Pack points; ignored for box systems.
  Index k_points = 8;

  friend bool operator==(const SystemSpec&, const SystemSpec&) = default;
};

void to_json(nlohmann::json& j, const SystemSpec& spec);
/// Strict: unknown keys and out-of-range values throw InvalidArgument.
void from_json(const nlohmann::json& j, SystemSpec& spec);

/// Discretized system: one isolated soft well (box) or one cell of a lattice
/// of soft wells with twisted periodic boundary conditions (periodic).
/// Immutable after construction.
class ModelSystem {
 public:
  const SystemSpec& spec() const { return spec_; }
  const Grid& grid() const { return grid_; }
  const RealVector& external_potential() const { return potential_; }
  const RealMatrix& interaction_kernel() const { return kernel_; }
  int electron_count() const { return spec_.electrons; }
  Boundary boundary() const { return spec_.boundary; }
  const std::vector<double>& kgrid() const { return kgrid_; }

  /// U(x) for any x; periodic systems repeat with the cell length.
  double potential_at(double x) const;

  /// One-body operator -1/2 d^2/dx^2 + U at crystal momentum k (k must be 0
  /// for box systems).
  ComplexMatrix h_core(double k = 0.0) const;

  /// FNV-1a hash of the canonical spec encoding, as 16 hex digits.
  std::string hash() const;

  /// Self-describing snapshot: spec, arrays, and hash.
  nlohmann::json snapshot() const;

 private:
  friend ModelSystem build_soft_coulomb_system(const SystemSpec& spec);
  ModelSystem(SystemSpec spec, Grid grid);

  SystemSpec spec_;
  Grid grid_;
  RealVector potential_;
  RealMatrix kernel_;
  std::vector<double> kgrid_;
};

/// Builds U (soft well, minimum-image for periodic cells) and the softened
/// kernel v_ij = lambda / sqrt((x_i - x_j)^2 + s^2).
ModelSystem build_soft_coulomb_system(const SystemSpec& spec);

/// Three-point Laplacian. Periodic boundaries wrap the stencil.
RealMatrix laplacian_matrix(const Grid& grid, Boundary boundary);

/// Periodic Laplacian with the Bloch twist psi(x + L) = exp(ikL) psi(x).
ComplexMatrix bloch_laplacian(const Grid& grid, double k);

/// Monkhorst-Pack crystal momenta for a cell of length `period`; symmetric
/// under k -> -k and containing k = 0 exactly when `count` is odd.
std::vector<double> monkhorst_pack(Index count, double period);

/// Signed separation reduced to [-L/2, L/2].
double minimum_image(double dx, double period);

std::uint64_t fnv1a(const std::string& bytes);
std::string hex_digest(std::uint64_t h);

}  // namespace qpw
