#pragma once

#include <span>
#include <vector>

#include "qpw/combinatorics.hpp"
#include "qpw/types.hpp"

namespace qpw {

/// Order-n reduced density matrix
///   rho_n(x'_1..x'_n; x_1..x_n) = N!/(N-n)! * sum over the other N-n coordinates
/// expressed over spin-orbitals phi_p, p = 2*o + s, built from the spatial
/// orbitals held in `orbitals()` (columns are grid vectors). A pure grid-coordinate
/// matrix is the special case orbitals() == identity.
///
/// Because rho_n is antisymmetric in each tuple, only strictly increasing
/// tuples are stored; `matrix()(I, J)` equals the full element for sorted I, J.
/// `element()` expands arbitrary tuples and `trace()` is the trace over the
/// full (ordered) tuple space.
class DensityMatrix {
 public:
  DensityMatrix(int order, int electrons, ComplexMatrix orbitals, ComplexMatrix matrix);

  int order() const { return order_; }
  int electrons() const { return electrons_; }
  /// N!/(N-n)!
  double normalization_target() const;
  int spin_orbital_count() const { return static_cast<int>(2 * orbitals_.cols()); }

  const ComplexMatrix& orbitals() const { return orbitals_; }
  const ComplexMatrix& matrix() const { return matrix_; }
  Tuple tuple(Index row) const { return tuples_[static_cast<std::size_t>(row)]; }

  /// Element for arbitrary (possibly unsorted or repeating) tuples.
  Complex element(std::span<const int> bra, std::span<const int> ket) const;

  double trace() const;
  double hermiticity_error() const { return qpw::hermiticity_error(matrix_); }

  /// Order 1 only: grid-spin coordinate matrix, index a = 2*i + s.
  ComplexMatrix grid_spin_matrix() const;
  /// Order 1 only: the spin-s block over grid points.
  ComplexMatrix spin_block(int spin) const;

  /// Order 2 only: rho_2(a b; a b) over ordered grid-spin coordinate pairs,
  /// packed as a (2G x 2G) real matrix.
  RealMatrix pair_diagonal() const;

 private:
  int order_;
  int electrons_;
  ComplexMatrix orbitals_;
  ComplexMatrix matrix_;
  std::vector<Tuple> tuples_;
};

/// Outer product |ket><bra| tagged with band and momentum labels; stores the
/// generating vectors alongside the matrix.
class Projector {
 public:
  Projector(int ket_band, double ket_momentum, ComplexVector ket, int bra_band, double bra_momentum,
            ComplexVector bra);

  int ket_band() const { return ket_band_; }
  int bra_band() const { return bra_band_; }
  double ket_momentum() const { return ket_momentum_; }
  double bra_momentum() const { return bra_momentum_; }
  const ComplexVector& ket() const { return ket_; }
  const ComplexVector& bra() const { return bra_; }

  ComplexMatrix matrix() const { return ket_ * bra_.adjoint(); }
  Complex trace() const { return bra_.dot(ket_); }
  /// Tr(P A) = <bra|A|ket>.
  Complex expectation(const ComplexMatrix& op) const { return bra_.dot(op * ket_); }
  /// |P^2 - P|_max computed from the generating vectors: P^2 = <bra|ket> P.
  double idempotency_error() const;
  /// |P^2|_max; vanishes for orthogonal ket and bra (m != n bands).
  double square_max_norm() const;
  /// True when the labels describe a diagonal projector (same band and momentum).
  bool diagonal() const { return ket_band_ == bra_band_ && ket_momentum_ == bra_momentum_; }

 private:
  int ket_band_;
  int bra_band_;
  double ket_momentum_;
  double bra_momentum_;
  ComplexVector ket_;
  ComplexVector bra_;
};

/// rho = |psi><psi|; rejects states whose norm differs from 1 by more than 1e-10.
Projector pure_state_projector(const ComplexVector& state);

/// E = Sp h rho_1 + 1/2 Sp v rho_2, traces taken over diagonal grid coordinates.
/// `h_matrix` is the one-body operator on the grid and `v_kernel` the local
/// two-body kernel v(x_i, x_j).
double energy_from_density_matrices(const DensityMatrix& rho1, const DensityMatrix& rho2,
                                    const ComplexMatrix& h_matrix, const RealMatrix& v_kernel);

struct EnergySplit {
  /// Sp h rho_1 = epsilon^(0) N.
  double one_electron = 0.0;
  /// E^HF = 1/2 Sp v rho_2.
  double excitation = 0.0;
  double total() const { return one_electron + excitation; }
};

/// Split of the functional for a single-determinant (factorized) rho_2.
/// Throws InvalidArgument when rho_2 differs from rho_1 ^ rho_1 by more than
/// `factorization_tol` (relative to max |rho_2|).
EnergySplit hf_decomposition(const DensityMatrix& rho1, const DensityMatrix& rho2,
                             const ComplexMatrix& h_matrix, const RealMatrix& v_kernel,
                             double factorization_tol = 1e-10);

/// One-electron case: no pairs, so the excitation term is zero. Requires N = 1.
EnergySplit hf_decomposition(const DensityMatrix& rho1, const ComplexMatrix& h_matrix);

/// sum_m psi_m(x') psi_m*(x) over the given (doubly occupied) orbital columns.
ComplexMatrix spin_zero_density(const ComplexMatrix& occupied_orbitals);

/// One crystal momentum's contribution to the trace identity.
struct MomentumBlock {
  double k = 0.0;
  /// Quadrature weight of the k integral.
  double weight = 1.0;
  ComplexMatrix h;
  /// Mean-field interaction at this k (Hartree minus exchange).
  ComplexMatrix v;
  /// One diagonal projector per occupied spin-band.
  std::vector<Projector> projectors;
  /// epsilon_n(k) per projector, measured from the reference epsilon_n(0).
  std::vector<double> band_energies;
};

struct TraceIdentityReport {
  double lhs = 0.0;                  ///< Sp rho (h + v)
  double rhs = 0.0;                  ///< epsilon_n(0) N + epsilon
  double quasiparticle_energy = 0.0; ///< epsilon
  double residual = 0.0;
};

/// Evaluates both sides of Sp rho(h + v) = epsilon_n(0) N + epsilon.
TraceIdentityReport trace_energy_identity(std::span<const MomentumBlock> blocks, double epsilon0,
                                          int electrons);

}  // namespace qpw
