#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "qpw/combinatorics.hpp"
#include "qpw/density_matrix.hpp"
#include "qpw/model_system.hpp"
#include "qpw/types.hpp"

namespace qpw {

enum class Spin { up = 0, down = 1 };

/// Spin-orbital p = 2*o + s built on spatial orbital o.
constexpr int spin_orbital(int spatial, Spin s) { return 2 * spatial + static_cast<int>(s); }

/// Antisymmetric N-electron state expanded over determinants of spin-orbitals.
/// Spatial orbitals are the columns of `orbitals` (grid vectors).
class NBodyWavefunction {
 public:
  NBodyWavefunction(int electrons, ComplexMatrix orbitals, std::vector<Determinant> configurations,
                    ComplexVector amplitudes);

  int electrons() const { return electrons_; }
  const ComplexMatrix& orbitals() const { return orbitals_; }
  int spin_orbital_count() const { return static_cast<int>(2 * orbitals_.cols()); }
  const std::vector<Determinant>& configurations() const { return configurations_; }
  const ComplexVector& amplitudes() const { return amplitudes_; }

  double norm_squared() const { return amplitudes_.squaredNorm(); }

  /// Amplitude of the ordered occupation tuple; antisymmetric under any
  /// transposition and zero for repeated indices.
  Complex amplitude(std::span<const int> occupied) const;

  /// Spin label of a spin-orbital.
  static Spin spin_of(int spin_orbital) { return spin_orbital % 2 == 0 ? Spin::up : Spin::down; }

 private:
  int electrons_;
  ComplexMatrix orbitals_;
  std::vector<Determinant> configurations_;
  ComplexVector amplitudes_;
};

struct SpinSector {
  int up = 0;
  int down = 0;
};

struct CiOptions {
  int orbital_cutoff = 8;
  /// Fixed (n_up, n_down); default is n_up = ceil(N/2).
  std::optional<SpinSector> sector;
  /// Limit on C(2 * orbital_cutoff, N).
  std::size_t max_configurations = 20000;
  /// Number of lowest eigenvalues reported alongside the ground state.
  int reported_levels = 4;
};

struct CiResult {
  double energy = 0.0;
  NBodyWavefunction state;
  std::vector<double> lowest_energies;
  std::size_t dimension = 0;
  /// One-body orbital energies of the CI basis.
  std::vector<double> orbital_energies;
};

/// Exact ground state of sum_i h(i) + sum_{i>j} v(i,j) in the space spanned by
/// the `orbital_cutoff` lowest eigenvectors of the one-body operator h.
CiResult full_ci_ground_state(const ModelSystem& system, const CiOptions& options = {});

/// Same, over caller-supplied orthonormal spatial orbitals (grid vectors).
CiResult full_ci_ground_state(const ModelSystem& system, const ComplexMatrix& orbitals,
                              const CiOptions& options = {});

/// Lowest `count` eigenvectors and eigenvalues of a Hermitian one-body operator.
struct OrbitalSet {
  ComplexMatrix vectors;
  RealVector energies;
};
OrbitalSet one_body_orbitals(const ComplexMatrix& h, Index count);

/// Single determinant occupying the listed spin-orbitals of `orbitals`.
NBodyWavefunction slater_determinant(const ComplexMatrix& orbitals, std::span<const int> occupied);

/// rho_n from the direct sum over the remaining N-n coordinates, with the
/// N!/(N-n)! prefactor. Requires 1 <= n <= N.
DensityMatrix exact_reduced_density_matrix(const NBodyWavefunction& state, int order);

/// <psi|H|psi> for the system Hamiltonian, evaluated with Slater-Condon rules.
double expectation_energy(const ModelSystem& system, const NBodyWavefunction& state);

}  // namespace qpw
