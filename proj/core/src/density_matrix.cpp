#include "qpw/density_matrix.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace qpw {

namespace {

double factorial(int n) {
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

/// Spin-orbital functions on grid-spin coordinates: row 2i+s, column 2o+s.
ComplexMatrix spin_orbital_functions(const ComplexMatrix& orbitals) {
  const Index g = orbitals.rows();
  const Index m = orbitals.cols();
  ComplexMatrix out = ComplexMatrix::Zero(2 * g, 2 * m);
  for (Index i = 0; i < g; ++i) {
    for (Index o = 0; o < m; ++o) {
      out(2 * i, 2 * o) = orbitals(i, o);
      out(2 * i + 1, 2 * o + 1) = orbitals(i, o);
    }
  }
  return out;
}

void require_same_basis(const DensityMatrix& a, const DensityMatrix& b) {
  if (a.orbitals().rows() != b.orbitals().rows() || a.orbitals().cols() != b.orbitals().cols()) {
    throw InvalidArgument("density matrices are expressed over different orbital bases");
  }
  if ((a.orbitals() - b.orbitals()).cwiseAbs().maxCoeff() > 1e-12) {
    throw InvalidArgument("density matrices are expressed over different orbital bases");
  }
}

double one_body_trace(const DensityMatrix& rho1, const ComplexMatrix& h) {
  if (rho1.order() != 1) throw InvalidArgument("expected an order-1 density matrix");
  if (h.rows() != rho1.orbitals().rows() || h.cols() != h.rows()) {
    throw InvalidArgument("one-body operator dimension " + std::to_string(h.rows()) +
                          " does not match grid size " + std::to_string(rho1.orbitals().rows()));
  }
  const ComplexMatrix summed = rho1.spin_block(0) + rho1.spin_block(1);
  return (h * summed).trace().real();
}

double two_body_trace(const DensityMatrix& rho2, const RealMatrix& v) {
  if (rho2.order() != 2) throw InvalidArgument("expected an order-2 density matrix");
  const Index g = rho2.orbitals().rows();
  if (v.rows() != g || v.cols() != g) {
    throw InvalidArgument("two-body kernel dimension " + std::to_string(v.rows()) +
                          " does not match grid size " + std::to_string(g));
  }
  const RealMatrix pairs = rho2.pair_diagonal();
  double sum = 0.0;
  for (Index a = 0; a < 2 * g; ++a) {
    for (Index b = 0; b < 2 * g; ++b) sum += v(a / 2, b / 2) * pairs(a, b);
  }
  return 0.5 * sum;
}

}  // namespace

DensityMatrix::DensityMatrix(int order, int electrons, ComplexMatrix orbitals, ComplexMatrix matrix)
    : order_(order), electrons_(electrons), orbitals_(std::move(orbitals)), matrix_(std::move(matrix)) {
  if (order_ < 1 || order_ > electrons_) {
    throw InvalidArgument("density-matrix order must satisfy 1 <= n <= N");
  }
  const int m = spin_orbital_count();
  if (m > kMaxSpinOrbitals) throw InvalidArgument("too many spin-orbitals for a density matrix");
  const auto dim = static_cast<Index>(binomial(m, order_));
  if (matrix_.rows() != dim || matrix_.cols() != dim) {
    throw InvalidArgument("density matrix must be C(M, n) square over sorted tuples");
  }
  tuples_ = combinations(m, order_);
}

double DensityMatrix::normalization_target() const {
  return factorial(electrons_) / factorial(electrons_ - order_);
}

Complex DensityMatrix::element(std::span<const int> bra, std::span<const int> ket) const {
  if (static_cast<int>(bra.size()) != order_ || static_cast<int>(ket.size()) != order_) {
    throw InvalidArgument("tuple length must equal the density-matrix order");
  }
  Tuple b(bra.begin(), bra.end());
  Tuple k(ket.begin(), ket.end());
  const int sb = sort_with_sign(b);
  const int sk = sort_with_sign(k);
  if (sb == 0 || sk == 0) return {0.0, 0.0};
  for (int p : b) {
    if (p < 0 || p >= spin_orbital_count()) throw InvalidArgument("spin-orbital index out of range");
  }
  for (int p : k) {
    if (p < 0 || p >= spin_orbital_count()) throw InvalidArgument("spin-orbital index out of range");
  }
  return static_cast<double>(sb * sk) * matrix_(combination_rank(b), combination_rank(k));
}

double DensityMatrix::trace() const { return factorial(order_) * matrix_.trace().real(); }

ComplexMatrix DensityMatrix::grid_spin_matrix() const {
  if (order_ != 1) throw InvalidArgument("grid_spin_matrix needs an order-1 density matrix");
  const ComplexMatrix phi = spin_orbital_functions(orbitals_);
  return phi * matrix_ * phi.adjoint();
}

ComplexMatrix DensityMatrix::spin_block(int spin) const {
  if (spin != 0 && spin != 1) throw InvalidArgument("spin index must be 0 or 1");
  const ComplexMatrix full = grid_spin_matrix();
  const Index g = orbitals_.rows();
  ComplexMatrix block(g, g);
  for (Index i = 0; i < g; ++i) {
    for (Index j = 0; j < g; ++j) block(i, j) = full(2 * i + spin, 2 * j + spin);
  }
  return block;
}

RealMatrix DensityMatrix::pair_diagonal() const {
  if (order_ != 2) throw InvalidArgument("pair_diagonal needs an order-2 density matrix");
  const ComplexMatrix phi = spin_orbital_functions(orbitals_);
  const Index coords = phi.rows();
  const auto npairs = static_cast<Index>(tuples_.size());

  // Row (a<b) of t: antisymmetrized two-particle amplitude of tuple I at (a, b).
  const Index ncoord_pairs = coords * (coords - 1) / 2;
  ComplexMatrix t(ncoord_pairs, npairs);
  Index row = 0;
  for (Index a = 0; a < coords; ++a) {
    for (Index b = a + 1; b < coords; ++b, ++row) {
      for (Index c = 0; c < npairs; ++c) {
        const auto& tup = tuples_[static_cast<std::size_t>(c)];
        const Index p = tup[0];
        const Index q = tup[1];
        t(row, c) = phi(a, p) * phi(b, q) - phi(a, q) * phi(b, p);
      }
    }
  }
  const ComplexMatrix tm = t * matrix_;
  RealMatrix out = RealMatrix::Zero(coords, coords);
  row = 0;
  for (Index a = 0; a < coords; ++a) {
    for (Index b = a + 1; b < coords; ++b, ++row) {
      const double value = tm.row(row).dot(t.row(row)).real();
      out(a, b) = value;
      out(b, a) = value;
    }
  }
  return out;
}

Projector::Projector(int ket_band, double ket_momentum, ComplexVector ket, int bra_band,
                     double bra_momentum, ComplexVector bra)
    : ket_band_(ket_band),
      bra_band_(bra_band),
      ket_momentum_(ket_momentum),
      bra_momentum_(bra_momentum),
      ket_(std::move(ket)),
      bra_(std::move(bra)) {
  if (ket_.size() != bra_.size()) throw InvalidArgument("projector ket and bra dimensions differ");
}

double Projector::idempotency_error() const {
  const double scale = ket_.cwiseAbs().maxCoeff() * bra_.cwiseAbs().maxCoeff();
  return std::abs(trace() - 1.0) * scale;
}

double Projector::square_max_norm() const {
  const double scale = ket_.cwiseAbs().maxCoeff() * bra_.cwiseAbs().maxCoeff();
  return std::abs(trace()) * scale;
}

Projector pure_state_projector(const ComplexVector& state) {
  if (state.size() == 0) throw InvalidArgument("empty state vector");
  const double norm = state.norm();
  if (std::abs(norm - 1.0) > 1e-10) {
    throw InvalidArgument("state is not normalized (|psi| = " + std::to_string(norm) + ")");
  }
  return Projector(0, 0.0, state, 0, 0.0, state);
}

double energy_from_density_matrices(const DensityMatrix& rho1, const DensityMatrix& rho2,
                                    const ComplexMatrix& h_matrix, const RealMatrix& v_kernel) {
  if (rho1.electrons() != rho2.electrons()) {
    throw InvalidArgument("rho_1 and rho_2 describe different electron counts");
  }
  require_same_basis(rho1, rho2);
  return one_body_trace(rho1, h_matrix) + two_body_trace(rho2, v_kernel);
}

EnergySplit hf_decomposition(const DensityMatrix& rho1, const DensityMatrix& rho2,
                             const ComplexMatrix& h_matrix, const RealMatrix& v_kernel,
                             double factorization_tol) {
  if (rho1.order() != 1 || rho2.order() != 2) {
    throw InvalidArgument("hf_decomposition needs rho_1 and rho_2");
  }
  if (rho1.electrons() != rho2.electrons()) {
    throw InvalidArgument("rho_1 and rho_2 describe different electron counts");
  }
  require_same_basis(rho1, rho2);

  // A single determinant has rho_2(pq; rs) = rho_1(p;r) rho_1(q;s) - rho_1(p;s) rho_1(q;r).
  const ComplexMatrix& r1 = rho1.matrix();
  const ComplexMatrix& r2 = rho2.matrix();
  const double scale = std::max(1.0, r2.cwiseAbs().maxCoeff());
  double worst = 0.0;
  for (Index i = 0; i < r2.rows(); ++i) {
    const Tuple bra = rho2.tuple(i);
    for (Index j = 0; j < r2.cols(); ++j) {
      const Tuple ket = rho2.tuple(j);
      const Complex factorized = r1(bra[0], ket[0]) * r1(bra[1], ket[1]) - r1(bra[0], ket[1]) * r1(bra[1], ket[0]);
      worst = std::max(worst, std::abs(r2(i, j) - factorized));
    }
  }
  if (worst > factorization_tol * scale) {
    throw InvalidArgument("rho_2 is not factorized (deviation " + std::to_string(worst) +
                          "); the epsilon0 N + E^HF split needs a single determinant");
  }

  EnergySplit split;
  split.one_electron = one_body_trace(rho1, h_matrix);
  split.excitation = two_body_trace(rho2, v_kernel);
  return split;
}

EnergySplit hf_decomposition(const DensityMatrix& rho1, const ComplexMatrix& h_matrix) {
  if (rho1.order() != 1 || rho1.electrons() != 1) {
    throw InvalidArgument("the rho_1-only split applies to one-electron systems");
  }
  EnergySplit split;
  split.one_electron = one_body_trace(rho1, h_matrix);
  return split;
}

ComplexMatrix spin_zero_density(const ComplexMatrix& occupied_orbitals) {
  return occupied_orbitals * occupied_orbitals.adjoint();
}

TraceIdentityReport trace_energy_identity(std::span<const MomentumBlock> blocks, double epsilon0,
                                          int electrons) {
  TraceIdentityReport report;
  for (const auto& block : blocks) {
    const Index dim = block.h.rows();
    if (block.h.cols() != dim || block.v.rows() != dim || block.v.cols() != dim) {
      throw InvalidArgument("trace identity: h and v must be square and of equal size");
    }
    if (block.projectors.size() != block.band_energies.size()) {
      throw InvalidArgument("trace identity: one band energy per projector is required");
    }
    const ComplexMatrix total = block.h + block.v;
    for (std::size_t p = 0; p < block.projectors.size(); ++p) {
      const Projector& proj = block.projectors[p];
      if (proj.ket().size() != dim) {
        throw InvalidArgument("trace identity: projector dimension does not match the operators");
      }
      if (!proj.diagonal()) throw InvalidArgument("trace identity: occupied projectors must be diagonal");
      report.lhs += block.weight * proj.expectation(total).real();
      report.quasiparticle_energy += block.weight * proj.trace().real() * block.band_energies[p];
    }
  }
  report.rhs = epsilon0 * electrons + report.quasiparticle_energy;
  report.residual = std::abs(report.lhs - report.rhs);
  return report;
}

}  // namespace qpw
