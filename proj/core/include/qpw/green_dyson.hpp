#pragma once

#include <string>
#include <vector>

#include "qpw/self_energy.hpp"
#include "qpw/types.hpp"

namespace qpw {

/// Real frequencies with a common broadening: z = omega + i eta.
struct FrequencyGrid {
  std::vector<double> points;
  double eta = 1e-3;

  std::size_t size() const { return points.size(); }
  double spacing() const;

  static FrequencyGrid uniform(double lo, double hi, std::size_t count, double eta);
  /// [min(levels) - padding, max(levels) + padding].
  static FrequencyGrid spanning(const RealVector& levels, double padding = 1.0, std::size_t count = 2000,
                                double eta = 1e-3);
};

/// Frequency-sampled one-particle propagator over an orbital basis.
struct GreenFunction {
  enum class Kind { free, dressed };

  Kind kind = Kind::free;
  FrequencyGrid grid;
  std::vector<ComplexMatrix> matrices;
  /// Scale of the source term, (-epsilon_n(0)) N. Propagators are stored for
  /// a unit source; this records the factor that was normalized out.
  double source_scale = 1.0;

  Index dimension() const { return matrices.empty() ? 0 : matrices.front().rows(); }
};

/// G0(omega) = (omega + i eta - h)^-1 for Hermitian h, through its eigenbasis.
GreenFunction free_green(const ComplexMatrix& hf_hamiltonian, const FrequencyGrid& grid);

/// max over the grid of |(omega + i eta - h) G0 - 1|.
double free_green_residual(const GreenFunction& g0, const ComplexMatrix& hf_hamiltonian);

enum class DysonMethod { direct, iterative };

std::string to_string(DysonMethod m);
DysonMethod dyson_method_from_string(const std::string& s);

struct DysonOptions {
  DysonMethod method = DysonMethod::direct;
  double damping = 0.5;
  int max_sweeps = 200;
  /// Target for the per-frequency residual of the iterative solve.
  double tolerance = 1e-12;
};

struct DysonResult {
  GreenFunction g;
  /// |G - G0 - G0 Sigma G|_max per frequency.
  std::vector<double> residuals;
  /// Frequencies where I - G0 Sigma was singular; their matrices are left at zero.
  std::vector<std::size_t> singular;
  /// Frequencies where the iterative solve fell back to the direct one.
  std::vector<std::size_t> fallbacks;
  std::vector<std::string> notes;

  double max_residual() const;
};

/// Solves G = G0 + G0 Sigma G at every frequency.
DysonResult dyson_solve(const GreenFunction& g0, const SelfEnergyModel& sigma, const DysonOptions& options = {});

/// Spectrum of h + Sigma^c for a frequency-independent Hermitian Sigma^c.
RealVector dressed_eigenproblem(const ComplexMatrix& hf_hamiltonian, const ComplexMatrix& sigma);

/// A(omega) = -Im Tr G(omega) / pi.
std::vector<double> spectral_function(const GreenFunction& g);

/// Frequencies of the strict local maxima of A(omega) above `min_height`.
std::vector<double> spectral_peaks(const GreenFunction& g, double min_height = 1.0);

}  // namespace qpw
