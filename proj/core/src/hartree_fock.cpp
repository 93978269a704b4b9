#include "qpw/hartree_fock.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <numeric>

namespace qpw {

namespace {

struct Eigenpairs {
  RealVector values;
  ComplexMatrix vectors;
};

/// Hermitian eigensolve; near-degenerate levels are ordered by decreasing
/// overlap with `previous` occupied orbitals so occupations do not oscillate.
Eigenpairs ordered_eigenpairs(const ComplexMatrix& f, const ComplexMatrix* previous) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(f);
  if (solver.info() != Eigen::Success) throw ComputationError("Fock eigensolve failed");
  const RealVector& values = solver.eigenvalues();
  const ComplexMatrix& vectors = solver.eigenvectors();
  const Index n = values.size();

  std::vector<double> overlap(static_cast<std::size_t>(n), 0.0);
  if (previous != nullptr && previous->cols() > 0) {
    for (Index i = 0; i < n; ++i) {
      overlap[static_cast<std::size_t>(i)] = (previous->adjoint() * vectors.col(i)).squaredNorm();
    }
  }
  std::vector<Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) {
    if (std::abs(values(a) - values(b)) > 1e-10) return values(a) < values(b);
    return overlap[static_cast<std::size_t>(a)] > overlap[static_cast<std::size_t>(b)];
  });

  Eigenpairs out{RealVector(n), ComplexMatrix(f.rows(), n)};
  for (Index i = 0; i < n; ++i) {
    const Index src = order[static_cast<std::size_t>(i)];
    out.values(i) = values(src);
    ComplexVector v = vectors.col(src);
    Index best = 0;
    for (Index r = 1; r < v.size(); ++r) {
      if (std::abs(v(r)) > std::abs(v(best)) + 1e-12) best = r;
    }
    if (std::abs(v(best)) > 0.0) v *= std::conj(v(best)) / std::abs(v(best));
    out.vectors.col(i) = v;
  }
  return out;
}

ComplexMatrix closed_shell_density(const ComplexMatrix& orbitals, int occupied, double occupancy) {
  const auto occ = orbitals.leftCols(occupied);
  return occupancy * occ * occ.adjoint();
}

}  // namespace

FockOperator build_fock(const ModelSystem& system, const ComplexMatrix& density, double k) {
  const Index n = system.grid().size();
  if (density.rows() != n || density.cols() != n) {
    throw InvalidArgument("density is " + std::to_string(density.rows()) + "x" +
                          std::to_string(density.cols()) + ", grid has " + std::to_string(n) + " points");
  }
  FockOperator f;
  f.momentum = k;
  f.h_core = system.h_core(k);
  f.hartree = ComplexMatrix::Zero(n, n);
  f.exchange = ComplexMatrix::Zero(n, n);

  if (system.electron_count() == 1) {
    // The lone electron's Coulomb field and its exchange are the same
    // self-action term and cancel exactly.
    f.self_action_cancelled = true;
  } else {
    const RealMatrix& v = system.interaction_kernel();
    const RealVector occupation = density.diagonal().real();
    const RealVector potential = v * occupation;
    f.hartree.diagonal() = potential.cast<Complex>();
    f.exchange = 0.5 * (v.cast<Complex>().array() * density.array()).matrix();
  }
  f.total = f.h_core + f.hartree - f.exchange;
  return f;
}

double hf_energy(const ModelSystem& system, const ComplexMatrix& density, const FockOperator& fock) {
  (void)system;
  const Complex one_body = (density * fock.h_core).trace();
  const Complex two_body = 0.5 * (density * fock.interaction()).trace();
  return (one_body + two_body).real();
}

SCFResult scf_solve(const ModelSystem& system, double k, const ScfOptions& options) {
  const int n_elec = system.electron_count();
  if (n_elec != 1 && n_elec % 2 != 0) {
    throw InvalidArgument("closed-shell Hartree-Fock needs an even electron count (or N = 1)");
  }
  if (!(options.tol > 0.0)) throw InvalidArgument("SCF tolerance must be > 0");
  if (!(options.mixing > 0.0 && options.mixing <= 1.0)) throw InvalidArgument("mixing must lie in (0, 1]");
  if (options.max_iter < 1) throw InvalidArgument("max_iter must be >= 1");
  if (system.boundary() == Boundary::box && k != 0.0) {
    throw InvalidArgument("box systems only support k = 0");
  }

  const int occupied = n_elec == 1 ? 1 : n_elec / 2;
  const double occupancy = n_elec == 1 ? 1.0 : 2.0;
  if (occupied > system.grid().size()) throw InvalidArgument("more occupied orbitals than grid points");

  SCFResult result;
  result.momentum = k;
  result.occupied_orbitals = occupied;

  // Core guess.
  Eigenpairs pairs = ordered_eigenpairs(system.h_core(k), nullptr);
  ComplexMatrix density_in = closed_shell_density(pairs.vectors, occupied, occupancy);
  ComplexMatrix previous_occ = pairs.vectors.leftCols(occupied);

  for (int it = 1; it <= options.max_iter; ++it) {
    FockOperator fock = build_fock(system, density_in, k);
    pairs = ordered_eigenpairs(fock.total, &previous_occ);
    const ComplexMatrix density_out = closed_shell_density(pairs.vectors, occupied, occupancy);
    const double change = (density_out - density_in).cwiseAbs().maxCoeff();

    ScfIteration record{it, hf_energy(system, density_in, fock), change};
    result.history.push_back(record);
    if (it > 3) {
      const double prev = result.history[result.history.size() - 2].energy;
      if (record.energy > prev + 1e-12 * std::max(1.0, std::abs(prev))) result.energy_monotone = false;
    }

    result.iterations = it;
    result.final_residual = change;
    result.orbitals = pairs.vectors;
    result.eigenvalues = pairs.values;
    result.fock = std::move(fock);
    previous_occ = pairs.vectors.leftCols(occupied);

    if (change < options.tol) {
      result.converged = true;
      break;
    }
    density_in = (1.0 - options.mixing) * density_in + options.mixing * density_out;
  }

  result.density = closed_shell_density(result.orbitals, occupied, occupancy);
  result.total_energy = hf_energy(system, result.density, build_fock(system, result.density, k));
  if (!result.converged) {
    result.message = "SCF did not converge in " + std::to_string(options.max_iter) +
                     " iterations (last density change " + std::to_string(result.final_residual) + ")";
  }
  return result;
}

bool BandStructure::band_converged(Index n) const {
  if (n < 0 || n >= band_count()) return false;
  return std::all_of(converged.begin(), converged.end(), [](bool c) { return c; });
}

Index mirror_index(const std::vector<double>& kgrid, Index ik, double tol) {
  const double target = -kgrid[static_cast<std::size_t>(ik)];
  for (std::size_t j = 0; j < kgrid.size(); ++j) {
    if (std::abs(kgrid[j] - target) <= tol * std::max(1.0, std::abs(target))) return static_cast<Index>(j);
  }
  return -1;
}

double BandStructure::symmetry_error(Index n) const {
  const auto& band = bands[static_cast<std::size_t>(n)];
  double worst = 0.0;
  for (std::size_t ik = 0; ik < kgrid.size(); ++ik) {
    const Index jk = mirror_index(kgrid, static_cast<Index>(ik));
    if (jk < 0) return std::numeric_limits<double>::infinity();
    worst = std::max(worst, std::abs(band[ik] - band[static_cast<std::size_t>(jk)]));
  }
  return worst;
}

BandRun band_structure(const ModelSystem& system, const ScfOptions& options, Index band_count,
                       unsigned threads) {
  if (system.boundary() != Boundary::periodic) throw InvalidArgument("band structure needs a periodic system");
  const auto& kgrid = system.kgrid();
  if (kgrid.empty()) throw InvalidArgument("periodic system has an empty k-grid");
  band_count = std::clamp<Index>(band_count, 1, system.grid().size());

  BandRun run;
  run.per_k.resize(kgrid.size());
  threads = std::max(1u, threads);
  for (std::size_t start = 0; start < kgrid.size(); start += threads) {
    std::vector<std::future<SCFResult>> jobs;
    const std::size_t stop = std::min(kgrid.size(), start + threads);
    for (std::size_t ik = start; ik < stop; ++ik) {
      jobs.push_back(std::async(threads > 1 ? std::launch::async : std::launch::deferred,
                                [&system, &options, k = kgrid[ik]] { return scf_solve(system, k, options); }));
    }
    for (std::size_t ik = start; ik < stop; ++ik) run.per_k[ik] = jobs[ik - start].get();
  }

  BandStructure& bs = run.bands;
  bs.kgrid = kgrid;
  bs.bands.assign(static_cast<std::size_t>(band_count), std::vector<double>(kgrid.size()));
  for (std::size_t ik = 0; ik < kgrid.size(); ++ik) {
    bs.converged.push_back(run.per_k[ik].converged);
    for (Index n = 0; n < band_count; ++n) {
      bs.bands[static_cast<std::size_t>(n)][ik] = run.per_k[ik].eigenvalues(n);
    }
  }
  const int occupied = run.per_k.front().occupied_orbitals;
  const int per_band = system.electron_count() == 1 ? 1 : 2;
  for (Index n = 0; n < band_count; ++n) bs.occupations.push_back(n < occupied ? per_band : 0);

  for (Index n = 0; n < band_count; ++n) {
    if (bs.band_converged(n)) run.symmetry_error = std::max(run.symmetry_error, bs.symmetry_error(n));
  }
  return run;
}

}  // namespace qpw
