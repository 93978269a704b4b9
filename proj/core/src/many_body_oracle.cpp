#include "qpw/many_body_oracle.hpp"

#include <algorithm>
#include <map>
#include <string>
#include <unordered_map>

namespace qpw {

namespace {

/// Rotates a vector so its largest-magnitude component is real and positive.
void fix_phase(Eigen::Ref<ComplexVector> v) {
  Index best = 0;
  for (Index i = 1; i < v.size(); ++i) {
    if (std::abs(v(i)) > std::abs(v(best)) + 1e-12) best = i;
  }
  if (std::abs(v(best)) > 0.0) v *= std::conj(v(best)) / std::abs(v(best));
}

/// One- and two-electron integrals over spatial orbitals.
struct Integrals {
  ComplexMatrix one_body;  // h_pq = <p|h|q>
  ComplexMatrix two_body;  // (pq|rs) at row p*m+q, column r*m+s
  Index orbitals = 0;

  Complex eri(Index p, Index q, Index r, Index s) const {
    return two_body(p * orbitals + q, r * orbitals + s);
  }
};

Integrals make_integrals(const ModelSystem& system, const ComplexMatrix& phi) {
  Integrals ints;
  ints.orbitals = phi.cols();
  ints.one_body = phi.adjoint() * system.h_core(0.0) * phi;
  const Index g = phi.rows();
  const Index m = phi.cols();
  ComplexMatrix pair(m * m, g);
  for (Index p = 0; p < m; ++p) {
    for (Index q = 0; q < m; ++q) {
      pair.row(p * m + q) = (phi.col(p).conjugate().array() * phi.col(q).array()).matrix().transpose();
    }
  }
  const ComplexMatrix v = system.interaction_kernel().cast<Complex>();
  ints.two_body = pair * v * pair.transpose();
  return ints;
}

/// Matrix of H over `configs` (bra index = row).
ComplexMatrix build_hamiltonian(const Integrals& ints, const std::vector<Determinant>& configs) {
  const auto dim = static_cast<Index>(configs.size());
  std::unordered_map<Determinant, Index> index;
  index.reserve(configs.size());
  for (Index i = 0; i < dim; ++i) index.emplace(configs[static_cast<std::size_t>(i)], i);

  const int nso = static_cast<int>(2 * ints.orbitals);
  ComplexMatrix h = ComplexMatrix::Zero(dim, dim);
  for (Index col = 0; col < dim; ++col) {
    const Determinant det = configs[static_cast<std::size_t>(col)];
    const Tuple occ = occupied_indices(det);

    // sum_pq h_pq a+_p a_q
    for (int q : occ) {
      Determinant d1 = det;
      const int s1 = annihilate(d1, q);
      for (int p = 0; p < nso; ++p) {
        if ((p % 2) != (q % 2)) continue;
        Determinant d2 = d1;
        const int s2 = create(d2, p);
        if (s2 == 0) continue;
        const auto it = index.find(d2);
        if (it == index.end()) continue;
        h(it->second, col) += static_cast<double>(s1 * s2) * ints.one_body(p / 2, q / 2);
      }
    }

    // 1/2 sum_pqrs (pq|rs) a+_p a+_r a_s a_q
    for (int q : occ) {
      Determinant d1 = det;
      const int s1 = annihilate(d1, q);
      for (int s : occ) {
        if (s == q) continue;
        Determinant d2 = d1;
        const int s2 = annihilate(d2, s);
        for (int r = 0; r < nso; ++r) {
          if ((r % 2) != (s % 2)) continue;
          Determinant d3 = d2;
          const int s3 = create(d3, r);
          if (s3 == 0) continue;
          for (int p = 0; p < nso; ++p) {
            if ((p % 2) != (q % 2)) continue;
            Determinant d4 = d3;
            const int s4 = create(d4, p);
            if (s4 == 0) continue;
            const auto it = index.find(d4);
            if (it == index.end()) continue;
            h(it->second, col) +=
                0.5 * static_cast<double>(s1 * s2 * s3 * s4) * ints.eri(p / 2, q / 2, r / 2, s / 2);
          }
        }
      }
    }
  }
  return h;
}

std::vector<Determinant> sector_configurations(int orbitals, SpinSector sector) {
  const auto ups = combinations(orbitals, sector.up);
  const auto downs = combinations(orbitals, sector.down);
  std::vector<Determinant> out;
  out.reserve(ups.size() * downs.size());
  for (const auto& u : ups) {
    Determinant base = 0;
    for (int o : u) base |= Determinant{1} << spin_orbital(o, Spin::up);
    for (const auto& d : downs) {
      Determinant det = base;
      for (int o : d) det |= Determinant{1} << spin_orbital(o, Spin::down);
      out.push_back(det);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

NBodyWavefunction::NBodyWavefunction(int electrons, ComplexMatrix orbitals,
                                     std::vector<Determinant> configurations, ComplexVector amplitudes)
    : electrons_(electrons),
      orbitals_(std::move(orbitals)),
      configurations_(std::move(configurations)),
      amplitudes_(std::move(amplitudes)) {
  if (electrons_ < 1) throw InvalidArgument("wavefunction needs at least one electron");
  if (spin_orbital_count() > kMaxSpinOrbitals) throw InvalidArgument("too many spin-orbitals");
  if (static_cast<Index>(configurations_.size()) != amplitudes_.size()) {
    throw InvalidArgument("one amplitude per configuration is required");
  }
  const Determinant allowed =
      spin_orbital_count() == 64 ? ~Determinant{0} : (Determinant{1} << spin_orbital_count()) - 1;
  for (Determinant d : configurations_) {
    if (std::popcount(d) != electrons_ || (d & ~allowed) != 0) {
      throw InvalidArgument("configuration does not hold N electrons in the orbital set");
    }
  }
}

Complex NBodyWavefunction::amplitude(std::span<const int> occupied) const {
  if (static_cast<int>(occupied.size()) != electrons_) {
    throw InvalidArgument("amplitude needs exactly N spin-orbital indices");
  }
  Tuple t(occupied.begin(), occupied.end());
  const int sign = sort_with_sign(t);
  if (sign == 0) return {0.0, 0.0};
  Determinant det = 0;
  for (int p : t) det |= Determinant{1} << p;
  const auto it = std::find(configurations_.begin(), configurations_.end(), det);
  if (it == configurations_.end()) return {0.0, 0.0};
  return static_cast<double>(sign) * amplitudes_(it - configurations_.begin());
}

OrbitalSet one_body_orbitals(const ComplexMatrix& h, Index count) {
  if (hermiticity_error(h) > 1e-12) throw InvalidArgument("one-body operator is not Hermitian");
  if (count < 1 || count > h.rows()) throw InvalidArgument("orbital count out of range");
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(h);
  if (solver.info() != Eigen::Success) throw ComputationError("one-body eigensolve failed");
  OrbitalSet set;
  set.vectors = solver.eigenvectors().leftCols(count);
  set.energies = solver.eigenvalues().head(count);
  for (Index c = 0; c < count; ++c) fix_phase(set.vectors.col(c));
  return set;
}

CiResult full_ci_ground_state(const ModelSystem& system, const CiOptions& options) {
  if (options.orbital_cutoff < 1 || options.orbital_cutoff > system.grid().size()) {
    throw InvalidArgument("orbital_cutoff must lie in [1, grid size]");
  }
  const OrbitalSet basis = one_body_orbitals(system.h_core(0.0), options.orbital_cutoff);
  return full_ci_ground_state(system, basis.vectors, options);
}

CiResult full_ci_ground_state(const ModelSystem& system, const ComplexMatrix& orbitals,
                              const CiOptions& options) {
  const int n = system.electron_count();
  if (n > 4) throw InvalidArgument("full CI oracle supports N <= 4");
  if (orbitals.rows() != system.grid().size()) {
    throw InvalidArgument("orbital vectors must live on the system grid");
  }
  const auto m = static_cast<int>(orbitals.cols());
  if (2 * m > kMaxSpinOrbitals) throw InvalidArgument("too many orbitals for the determinant encoding");
  const auto full_space = binomial(2 * m, n);
  if (full_space > options.max_configurations) {
    throw ComputationError("configuration space C(" + std::to_string(2 * m) + ", " + std::to_string(n) +
                           ") = " + std::to_string(full_space) + " exceeds the limit of " +
                           std::to_string(options.max_configurations));
  }
  const SpinSector sector = options.sector.value_or(SpinSector{(n + 1) / 2, n / 2});
  if (sector.up + sector.down != n || sector.up < 0 || sector.down < 0 || sector.up > m || sector.down > m) {
    throw InvalidArgument("spin sector is incompatible with N and the orbital count");
  }
  const ComplexMatrix gram = orbitals.adjoint() * orbitals;
  if ((gram - ComplexMatrix::Identity(m, m)).cwiseAbs().maxCoeff() > 1e-10) {
    throw InvalidArgument("CI orbitals must be orthonormal");
  }

  const Integrals ints = make_integrals(system, orbitals);
  std::vector<Determinant> configs = sector_configurations(m, sector);
  const ComplexMatrix h = build_hamiltonian(ints, configs);

  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(h);
  if (solver.info() != Eigen::Success) throw ComputationError("CI eigensolve failed");

  ComplexVector ground = solver.eigenvectors().col(0);
  fix_phase(ground);

  CiResult result{solver.eigenvalues()(0), NBodyWavefunction(n, orbitals, configs, ground), {}, configs.size(), {}};
  const Index levels = std::min<Index>(options.reported_levels, solver.eigenvalues().size());
  for (Index i = 0; i < levels; ++i) result.lowest_energies.push_back(solver.eigenvalues()(i));
  const RealVector diag = ints.one_body.diagonal().real();
  result.orbital_energies.assign(diag.data(), diag.data() + diag.size());
  return result;
}

NBodyWavefunction slater_determinant(const ComplexMatrix& orbitals, std::span<const int> occupied) {
  Tuple t(occupied.begin(), occupied.end());
  const int sign = sort_with_sign(t);
  if (sign == 0) throw InvalidArgument("determinant occupies a spin-orbital twice");
  Determinant det = 0;
  for (int p : t) {
    if (p < 0 || p >= 2 * orbitals.cols()) throw InvalidArgument("spin-orbital index out of range");
    det |= Determinant{1} << p;
  }
  // The amplitude of the sorted determinant carries the sign of the given order.
  ComplexVector amp(1);
  amp(0) = static_cast<double>(sign);
  return NBodyWavefunction(static_cast<int>(t.size()), orbitals, {det}, amp);
}

DensityMatrix exact_reduced_density_matrix(const NBodyWavefunction& state, int order) {
  const int n = state.electrons();
  if (order < 1 || order > n) {
    throw InvalidArgument("reduced density matrix order " + std::to_string(order) + " outside [1, " +
                          std::to_string(n) + "]");
  }
  const int m = state.spin_orbital_count();
  const auto dim = static_cast<Index>(binomial(m, order));

  // chi_I = A_I |psi>, A_I = a_{I_n} ... a_{I_1}; rho(I; J) = <chi_J | chi_I>.
  // Group the components of every chi_I by the residual determinant R.
  std::map<Determinant, std::vector<std::pair<Index, Complex>>> by_residual;
  const auto& configs = state.configurations();
  const ComplexVector& amps = state.amplitudes();
  for (std::size_t c = 0; c < configs.size(); ++c) {
    const Tuple occ = occupied_indices(configs[c]);
    for (const Tuple& pick : combinations(static_cast<int>(occ.size()), order)) {
      Tuple subset(pick.size());
      for (std::size_t i = 0; i < pick.size(); ++i) subset[i] = occ[static_cast<std::size_t>(pick[i])];
      Determinant residual = configs[c];
      int sign = 1;
      for (int p : subset) sign *= annihilate(residual, p);
      by_residual[residual].emplace_back(combination_rank(subset),
                                         static_cast<double>(sign) * amps(static_cast<Index>(c)));
    }
  }

  ComplexMatrix rho = ComplexMatrix::Zero(dim, dim);
  for (const auto& [residual, entries] : by_residual) {
    for (const auto& [i, ui] : entries) {
      for (const auto& [j, uj] : entries) rho(i, j) += ui * std::conj(uj);
    }
  }
  return DensityMatrix(order, n, state.orbitals(), std::move(rho));
}

double expectation_energy(const ModelSystem& system, const NBodyWavefunction& state) {
  if (state.orbitals().rows() != system.grid().size()) {
    throw InvalidArgument("state orbitals must live on the system grid");
  }
  const Integrals ints = make_integrals(system, state.orbitals());
  const ComplexMatrix h = build_hamiltonian(ints, state.configurations());
  const ComplexVector& c = state.amplitudes();
  return c.dot(h * c).real() / c.squaredNorm();
}

}  // namespace qpw
