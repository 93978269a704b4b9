#pragma once

#include <span>
#include <vector>

#include "qpw/model_system.hpp"
#include "qpw/types.hpp"

namespace qpw {

/// Parameters of the quasirelativistic charged vector-boson level E_1.
struct BosonSpectrumParams {
  double mass = 1.0;
  double gamma = 0.0;
  int n = 1;
  /// Nonzero; only |k| and k^2 enter the expansion.
  int k = 1;
};

/// E_1 = m/2 - m g^2/(2n^2) - m g^4/(8n^3) (4/|k| - 3/n)
///       - m g^6/(8n^4) (3/n^2 - 8/(n|k|) + 4/k^2), truncated after g^6.
double boson_energy(const BosonSpectrumParams& params);

/// Delta M_inf = lim_{n->inf} 2 E_1(n), by polynomial extrapolation in 1/n^2
/// through the last three terms of `n_sequence` (two Richardson levels).
double mass_operator_limit(double mass, double gamma, int k, std::span<const int> n_sequence);

/// Least-squares slope of log |E_1 - (m/2 - m g^2/(2n^2))| against log g over
/// the given couplings: the order of the leading term left after the g^2 one.
double truncation_exponent(double mass, int n, int k, std::span<const double> gammas);

struct HydrogenicLevel {
  int n = 1;
  /// -Z^2 / (2 n^2), the hydrogen-like level in atomic units.
  double energy = 0.0;
  int degeneracy = 1;
  /// Eigenvalue of the 1D soft-core analog on the grid.
  double model_energy = 0.0;
};

/// Exact hydrogen-like level -Z^2/(2n^2) with degeneracy n^2.
HydrogenicLevel hydrogenic_level(int n, double z);

struct HydrogenicBasis {
  /// Orthonormal grid vectors (columns), lowest first.
  ComplexMatrix functions;
  std::vector<HydrogenicLevel> levels;
};

/// Bound eigenfunctions of -1/2 d^2/dx^2 - Z / sqrt(x^2 + s^2) on a box grid.
/// Rejects grids with spacing > 0.2 / Z and requests for more levels than the
/// grid binds.
HydrogenicBasis hydrogenic_basis(int n_max, double z, const Grid& grid, double softening = 1.0);

}  // namespace qpw
