#pragma once

#include <string>
#include <vector>

#include "qpw/model_system.hpp"
#include "qpw/types.hpp"

namespace qpw {

/// h^HF = h_core + V^sc - Sigma^x at one crystal momentum.
struct FockOperator {
  ComplexMatrix h_core;
  ComplexMatrix hartree;
  ComplexMatrix exchange;
  ComplexMatrix total;
  double momentum = 0.0;
  /// True when the only occupied spin-orbital is the one being acted on, so the
  /// Coulomb and exchange self-action terms were cancelled pairwise (N = 1).
  bool self_action_cancelled = false;

  /// Hartree minus exchange.
  ComplexMatrix interaction() const { return hartree - exchange; }
};

/// Builds the Fock operator from the spin-summed one-body density
/// P(x_i, x_j) = sum_occ f_m c_m(i) c_m(j)* (grid vectors, f_m = 2 for closed shells).
///   hartree_ii  = sum_j v_ij P_jj
///   exchange_ij = v_ij P_ij / 2      (same-spin density, full nonlocal matrix)
/// For a one-electron system both terms are the electron's own field and
/// cancel identically, leaving h_core.
FockOperator build_fock(const ModelSystem& system, const ComplexMatrix& density, double k = 0.0);

struct ScfOptions {
  double mixing = 0.5;
  int max_iter = 500;
  /// Convergence threshold on max |P_out - P_in|.
  double tol = 1e-10;
};

struct ScfIteration {
  int index = 0;
  double energy = 0.0;
  double density_change = 0.0;
};

struct SCFResult {
  /// Eigenvectors of the final Fock matrix, ascending by eigenvalue.
  ComplexMatrix orbitals;
  RealVector eigenvalues;
  int iterations = 0;
  double final_residual = 0.0;
  bool converged = false;
  double momentum = 0.0;
  int occupied_orbitals = 0;
  /// Spin-summed density built from the occupied final orbitals.
  ComplexMatrix density;
  /// Fock operator whose eigenvectors are `orbitals`.
  FockOperator fock;
  /// Closed-shell energy Tr(P h) + 1/2 Tr(P (J - K)) at the final density.
  double total_energy = 0.0;
  std::vector<ScfIteration> history;
  /// False when the energy rose after the third iteration.
  bool energy_monotone = true;
  std::string message;
};

/// Self-consistent closed-shell Hartree-Fock at crystal momentum k with
/// linear density mixing. N must be even, or 1. Non-convergence is reported
/// through `converged`/`history`, not thrown.
SCFResult scf_solve(const ModelSystem& system, double k = 0.0, const ScfOptions& options = {});

/// Closed-shell energy of a spin-summed density under its own Fock operator.
double hf_energy(const ModelSystem& system, const ComplexMatrix& density, const FockOperator& fock);

struct BandStructure {
  std::vector<double> kgrid;
  /// bands[n][ik] = epsilon_n(k).
  std::vector<std::vector<double>> bands;
  /// Electrons per band (2 for occupied closed-shell bands, 1 for N = 1).
  std::vector<int> occupations;
  /// Per-k SCF convergence; a band is usable only if every k converged.
  std::vector<bool> converged;

  Index band_count() const { return static_cast<Index>(bands.size()); }
  bool band_converged(Index n) const;
  /// max_k |epsilon_n(k) - epsilon_n(-k)|, matching k with -k on the grid.
  double symmetry_error(Index n) const;
};

struct BandRun {
  BandStructure bands;
  std::vector<SCFResult> per_k;
  /// max over converged bands of symmetry_error.
  double symmetry_error = 0.0;
};

/// Runs scf_solve at every k of a periodic system, optionally in parallel.
BandRun band_structure(const ModelSystem& system, const ScfOptions& options = {}, Index band_count = 4,
                       unsigned threads = 1);

/// Index of -k in a symmetric k-grid, or -1.
Index mirror_index(const std::vector<double>& kgrid, Index ik, double tol = 1e-12);

}  // namespace qpw
