#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "qpw/types.hpp"

namespace qpw {

/// Pluggable correlation self-energy Sigma^c.
///
/// * zero       - Sigma = 0
/// * constant   - one frequency- and momentum-independent Hermitian matrix
/// * separable  - sum_i g_i |u_i><u_i| (low rank, Hermitian by construction)
/// * tabulated  - one Hermitian matrix per tabulated momentum, or one matrix
///                per frequency-grid index (Hermitian at real frequency)
///
/// Any static kernel may also carry a scalar momentum modulation f(k), giving
/// Sigma(k) = f(k) * Sigma.
class SelfEnergyModel {
 public:
  enum class Kind { zero, constant, separable, tabulated };
  enum class Axis { none, momentum, frequency };

  static SelfEnergyModel zero(Index dim);
  static SelfEnergyModel constant(ComplexMatrix kernel);
  static SelfEnergyModel scaled_identity(Index dim, double value);
  static SelfEnergyModel separable(ComplexMatrix vectors, RealVector couplings);
  static SelfEnergyModel tabulated_momentum(std::vector<double> kgrid, std::vector<ComplexMatrix> kernels);
  static SelfEnergyModel tabulated_frequency(std::vector<ComplexMatrix> kernels);

  /// Returns a copy whose kernel at momentum k is f(k) times the static kernel.
  SelfEnergyModel with_dispersion(std::function<double(double)> f, std::string label) const;

  Kind kind() const { return kind_; }
  Axis axis() const { return axis_; }
  Index dimension() const { return dim_; }
  bool frequency_independent() const { return axis_ != Axis::frequency; }
  const std::string& dispersion_label() const { return dispersion_label_; }

  /// Kernel at crystal momentum k (tabulated-momentum models require an exact grid match).
  ComplexMatrix at_momentum(double k) const;
  /// Kernel at frequency-grid index iw.
  ComplexMatrix at_frequency(std::size_t iw) const;
  /// The static kernel (throws for frequency-tabulated models).
  ComplexMatrix static_kernel() const;

  std::size_t table_size() const { return table_.size(); }

  /// Expresses the kernel in another basis: Sigma' = B^dagger Sigma B.
  SelfEnergyModel projected(const ComplexMatrix& basis) const;

  std::string kind_name() const;

 private:
  SelfEnergyModel(Kind kind, Axis axis, Index dim) : kind_(kind), axis_(axis), dim_(dim) {}

  Kind kind_;
  Axis axis_;
  Index dim_;
  ComplexMatrix kernel_;
  std::vector<double> keys_;
  std::vector<ComplexMatrix> table_;
  std::function<double(double)> dispersion_;
  std::string dispersion_label_;
};

}  // namespace qpw
