#include "qpw/self_energy.hpp"

#include <cmath>

namespace qpw {

namespace {

void require_hermitian(const ComplexMatrix& m, const char* what) {
  if (m.rows() != m.cols()) throw InvalidArgument(std::string(what) + " must be square");
  if (hermiticity_error(m) > 1e-12) {
    throw InvalidArgument(std::string(what) + " is not Hermitian (unphysical self-energy)");
  }
}

}  // namespace

SelfEnergyModel SelfEnergyModel::zero(Index dim) {
  if (dim < 1) throw InvalidArgument("self-energy dimension must be >= 1");
  SelfEnergyModel m(Kind::zero, Axis::none, dim);
  m.kernel_ = ComplexMatrix::Zero(dim, dim);
  return m;
}

SelfEnergyModel SelfEnergyModel::constant(ComplexMatrix kernel) {
  require_hermitian(kernel, "constant self-energy");
  SelfEnergyModel m(Kind::constant, Axis::none, kernel.rows());
  m.kernel_ = std::move(kernel);
  return m;
}

SelfEnergyModel SelfEnergyModel::scaled_identity(Index dim, double value) {
  if (dim < 1) throw InvalidArgument("self-energy dimension must be >= 1");
  return constant(value * ComplexMatrix::Identity(dim, dim));
}

SelfEnergyModel SelfEnergyModel::separable(ComplexMatrix vectors, RealVector couplings) {
  if (vectors.cols() != couplings.size()) {
    throw InvalidArgument("separable self-energy needs one coupling per vector");
  }
  SelfEnergyModel m(Kind::separable, Axis::none, vectors.rows());
  m.kernel_ = vectors * couplings.cast<Complex>().asDiagonal() * vectors.adjoint();
  // Enforce exact Hermiticity against rounding in the product.
  m.kernel_ = 0.5 * (m.kernel_ + m.kernel_.adjoint()).eval();
  return m;
}

SelfEnergyModel SelfEnergyModel::tabulated_momentum(std::vector<double> kgrid,
                                                    std::vector<ComplexMatrix> kernels) {
  if (kgrid.empty() || kgrid.size() != kernels.size()) {
    throw InvalidArgument("tabulated self-energy needs one kernel per momentum");
  }
  for (const auto& k : kernels) require_hermitian(k, "tabulated self-energy kernel");
  const Index dim = kernels.front().rows();
  for (const auto& k : kernels) {
    if (k.rows() != dim) throw InvalidArgument("tabulated kernels must share one dimension");
  }
  SelfEnergyModel m(Kind::tabulated, Axis::momentum, dim);
  m.keys_ = std::move(kgrid);
  m.table_ = std::move(kernels);
  return m;
}

SelfEnergyModel SelfEnergyModel::tabulated_frequency(std::vector<ComplexMatrix> kernels) {
  if (kernels.empty()) throw InvalidArgument("tabulated self-energy needs at least one kernel");
  for (const auto& k : kernels) require_hermitian(k, "tabulated self-energy kernel");
  const Index dim = kernels.front().rows();
  for (const auto& k : kernels) {
    if (k.rows() != dim) throw InvalidArgument("tabulated kernels must share one dimension");
  }
  SelfEnergyModel m(Kind::tabulated, Axis::frequency, dim);
  m.table_ = std::move(kernels);
  return m;
}

SelfEnergyModel SelfEnergyModel::with_dispersion(std::function<double(double)> f, std::string label) const {
  if (axis_ != Axis::none) throw InvalidArgument("only static kernels accept a momentum dispersion");
  SelfEnergyModel m = *this;
  m.dispersion_ = std::move(f);
  m.dispersion_label_ = std::move(label);
  return m;
}

ComplexMatrix SelfEnergyModel::at_momentum(double k) const {
  switch (axis_) {
    case Axis::none:
      return dispersion_ ? (dispersion_(k) * kernel_).eval() : kernel_;
    case Axis::momentum:
      for (std::size_t i = 0; i < keys_.size(); ++i) {
        if (std::abs(keys_[i] - k) <= 1e-12 * std::max(1.0, std::abs(k))) return table_[i];
      }
      throw InvalidArgument("momentum " + std::to_string(k) + " is not tabulated");
    case Axis::frequency:
      break;
  }
  throw InvalidArgument("frequency-tabulated self-energy has no momentum dependence");
}

ComplexMatrix SelfEnergyModel::at_frequency(std::size_t iw) const {
  if (axis_ == Axis::frequency) {
    if (iw >= table_.size()) throw InvalidArgument("frequency index outside the tabulated range");
    return table_[iw];
  }
  return static_kernel();
}

ComplexMatrix SelfEnergyModel::static_kernel() const {
  if (axis_ == Axis::frequency) throw InvalidArgument("self-energy is frequency dependent");
  if (axis_ == Axis::momentum) throw InvalidArgument("self-energy is momentum tabulated");
  return kernel_;
}

SelfEnergyModel SelfEnergyModel::projected(const ComplexMatrix& basis) const {
  if (basis.rows() != dim_) throw InvalidArgument("projection basis does not match the kernel dimension");
  SelfEnergyModel m = *this;
  m.dim_ = basis.cols();
  auto project = [&](const ComplexMatrix& k) {
    ComplexMatrix p = basis.adjoint() * k * basis;
    return ComplexMatrix(0.5 * (p + p.adjoint()));
  };
  if (axis_ == Axis::none) m.kernel_ = project(kernel_);
  for (auto& t : m.table_) t = project(t);
  return m;
}

std::string SelfEnergyModel::kind_name() const {
  switch (kind_) {
    case Kind::zero:
      return "zero";
    case Kind::constant:
      return "constant";
    case Kind::separable:
      return "separable";
    case Kind::tabulated:
      return "tabulated";
  }
  return "unknown";
}

}  // namespace qpw
