#include "qpw/green_dyson.hpp"

#include <algorithm>
#include <cmath>

namespace qpw {

double FrequencyGrid::spacing() const {
  if (points.size() < 2) return 0.0;
  return (points.back() - points.front()) / static_cast<double>(points.size() - 1);
}

FrequencyGrid FrequencyGrid::uniform(double lo, double hi, std::size_t count, double eta) {
  if (!(eta > 0.0)) throw InvalidArgument("broadening eta must be > 0");
  if (count < 2 || !(hi > lo)) throw InvalidArgument("frequency grid needs count >= 2 and hi > lo");
  FrequencyGrid g;
  g.eta = eta;
  g.points.resize(count);
  const double step = (hi - lo) / static_cast<double>(count - 1);
  for (std::size_t i = 0; i < count; ++i) g.points[i] = lo + step * static_cast<double>(i);
  return g;
}

FrequencyGrid FrequencyGrid::spanning(const RealVector& levels, double padding, std::size_t count, double eta) {
  if (levels.size() == 0) throw InvalidArgument("no levels to span");
  return uniform(levels.minCoeff() - padding, levels.maxCoeff() + padding, count, eta);
}

GreenFunction free_green(const ComplexMatrix& hf_hamiltonian, const FrequencyGrid& grid) {
  if (!(grid.eta > 0.0)) throw InvalidArgument("broadening eta must be > 0");
  if (hermiticity_error(hf_hamiltonian) > 1e-12) {
    throw InvalidArgument("free propagator needs a Hermitian one-particle Hamiltonian");
  }
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(hf_hamiltonian);
  if (solver.info() != Eigen::Success) throw ComputationError("eigensolve of h^HF failed");
  const RealVector& e = solver.eigenvalues();
  const ComplexMatrix& u = solver.eigenvectors();

  GreenFunction g;
  g.kind = GreenFunction::Kind::free;
  g.grid = grid;
  g.matrices.reserve(grid.size());
  for (double w : grid.points) {
    const Complex z(w, grid.eta);
    ComplexVector d(e.size());
    for (Index n = 0; n < e.size(); ++n) d(n) = 1.0 / (z - e(n));
    g.matrices.push_back(u * d.asDiagonal() * u.adjoint());
  }
  return g;
}

double free_green_residual(const GreenFunction& g0, const ComplexMatrix& hf_hamiltonian) {
  const Index n = hf_hamiltonian.rows();
  const ComplexMatrix id = ComplexMatrix::Identity(n, n);
  double worst = 0.0;
  for (std::size_t i = 0; i < g0.grid.size(); ++i) {
    const Complex z(g0.grid.points[i], g0.grid.eta);
    const ComplexMatrix r = (z * id - hf_hamiltonian) * g0.matrices[i] - id;
    worst = std::max(worst, r.cwiseAbs().maxCoeff());
  }
  return worst;
}

std::string to_string(DysonMethod m) { return m == DysonMethod::direct ? "direct" : "iterative"; }

DysonMethod dyson_method_from_string(const std::string& s) {
  if (s == "direct") return DysonMethod::direct;
  if (s == "iterative") return DysonMethod::iterative;
  throw InvalidArgument("Dyson method must be \"direct\" or \"iterative\", got \"" + s + "\"");
}

double DysonResult::max_residual() const {
  return residuals.empty() ? 0.0 : *std::max_element(residuals.begin(), residuals.end());
}

namespace {

double residual(const ComplexMatrix& g, const ComplexMatrix& g0, const ComplexMatrix& sigma) {
  return (g - g0 - g0 * sigma * g).cwiseAbs().maxCoeff();
}

/// (I - G0 Sigma) G = G0, with one step of iterative refinement.
bool direct_solve(const ComplexMatrix& g0, const ComplexMatrix& sigma, ComplexMatrix& g) {
  const Index n = g0.rows();
  const ComplexMatrix a = ComplexMatrix::Identity(n, n) - g0 * sigma;
  Eigen::FullPivLU<ComplexMatrix> lu(a);
  if (!lu.isInvertible()) return false;
  g = lu.solve(g0);
  const ComplexMatrix r = g0 - a * g;
  if (r.cwiseAbs().maxCoeff() > 0.0) g += lu.solve(r);
  return true;
}

}  // namespace

DysonResult dyson_solve(const GreenFunction& g0, const SelfEnergyModel& sigma, const DysonOptions& options) {
  const Index dim = g0.dimension();
  if (sigma.dimension() != dim) {
    throw InvalidArgument("self-energy dimension " + std::to_string(sigma.dimension()) +
                          " does not match the propagator dimension " + std::to_string(dim));
  }
  if (sigma.axis() == SelfEnergyModel::Axis::frequency && sigma.table_size() != g0.grid.size()) {
    throw InvalidArgument("frequency-tabulated self-energy must match the frequency grid");
  }
  if (sigma.axis() == SelfEnergyModel::Axis::momentum) {
    throw InvalidArgument("Dyson solve needs a frequency-resolved or static self-energy");
  }

  DysonResult out;
  out.g.kind = GreenFunction::Kind::dressed;
  out.g.grid = g0.grid;
  out.g.source_scale = g0.source_scale;
  out.g.matrices.resize(g0.matrices.size());
  out.residuals.resize(g0.matrices.size(), 0.0);

  const ComplexMatrix static_sigma =
      sigma.axis() == SelfEnergyModel::Axis::none ? sigma.static_kernel() : ComplexMatrix();

  for (std::size_t iw = 0; iw < g0.matrices.size(); ++iw) {
    const ComplexMatrix& g0w = g0.matrices[iw];
    const ComplexMatrix sig = sigma.axis() == SelfEnergyModel::Axis::none ? static_sigma : sigma.at_frequency(iw);
    ComplexMatrix g;
    bool solved = false;

    if (options.method == DysonMethod::iterative) {
      const ComplexMatrix kernel = g0w * sig;
      Eigen::ComplexEigenSolver<ComplexMatrix> es(kernel, false);
      const double radius = es.info() == Eigen::Success ? es.eigenvalues().cwiseAbs().maxCoeff() : 2.0;
      if (radius < 1.0) {
        g = g0w;
        for (int sweep = 0; sweep < options.max_sweeps; ++sweep) {
          const ComplexMatrix update = g0w + kernel * g;
          g = (1.0 - options.damping) * g + options.damping * update;
          if (residual(g, g0w, sig) <= options.tolerance) {
            solved = true;
            break;
          }
        }
      }
      if (!solved) out.fallbacks.push_back(iw);
    }

    if (!solved) {
      if (!direct_solve(g0w, sig, g)) {
        out.singular.push_back(iw);
        out.g.matrices[iw] = ComplexMatrix::Zero(dim, dim);
        out.residuals[iw] = std::numeric_limits<double>::infinity();
        continue;
      }
    }
    out.residuals[iw] = residual(g, g0w, sig);
    out.g.matrices[iw] = std::move(g);
  }

  if (!out.fallbacks.empty()) {
    out.notes.push_back("iterative Dyson solve fell back to the direct solve at " +
                        std::to_string(out.fallbacks.size()) + " frequencies");
  }
  if (!out.singular.empty()) {
    out.notes.push_back("I - G0 Sigma was singular at " + std::to_string(out.singular.size()) + " frequencies");
  }
  return out;
}

RealVector dressed_eigenproblem(const ComplexMatrix& hf_hamiltonian, const ComplexMatrix& sigma) {
  if (hf_hamiltonian.rows() != sigma.rows() || hf_hamiltonian.cols() != sigma.cols()) {
    throw InvalidArgument("self-energy and Hamiltonian dimensions differ");
  }
  if (hermiticity_error(sigma) > 1e-12) throw InvalidArgument("self-energy is not Hermitian");
  if (hermiticity_error(hf_hamiltonian) > 1e-12) throw InvalidArgument("h^HF is not Hermitian");
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(hf_hamiltonian + sigma, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw ComputationError("dressed eigensolve failed");
  return solver.eigenvalues();
}

std::vector<double> spectral_function(const GreenFunction& g) {
  std::vector<double> a;
  a.reserve(g.matrices.size());
  for (const auto& m : g.matrices) a.push_back(-m.trace().imag() / kPi);
  return a;
}

std::vector<double> spectral_peaks(const GreenFunction& g, double min_height) {
  const std::vector<double> a = spectral_function(g);
  std::vector<double> peaks;
  for (std::size_t i = 1; i + 1 < a.size(); ++i) {
    if (a[i] > a[i - 1] && a[i] >= a[i + 1] && a[i] > min_height) peaks.push_back(g.grid.points[i]);
  }
  return peaks;
}

}  // namespace qpw
