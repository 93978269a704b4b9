#include <cmath>
#include <numeric>

#include <gtest/gtest.h>

#include "qpw/hartree_fock.hpp"
#include "qpw/many_body_oracle.hpp"
#include "test_support.hpp"

namespace qpw {
namespace {

SystemSpec small_well(int electrons, Index points = 16) {
  SystemSpec s;
  s.grid_points = points;
  s.spacing = 0.4;
  s.electrons = electrons;
  return s;
}

RealVector bare_levels(const ModelSystem& sys) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(sys.h_core(0.0), Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

TEST(FullCi, NoninteractingOppositeSpins) {
  SystemSpec s = small_well(2);
  s.interaction_strength = 0.0;
  const ModelSystem sys = build_soft_coulomb_system(s);
  const CiResult r = full_ci_ground_state(sys);
  const RealVector e = bare_levels(sys);
  EXPECT_NEAR(r.energy, 2 * e(0), 1e-12);
}

TEST(FullCi, NoninteractingSameSpinObeysPauli) {
  SystemSpec s = small_well(2);
  s.interaction_strength = 0.0;
  const ModelSystem sys = build_soft_coulomb_system(s);
  CiOptions o;
  o.sector = SpinSector{2, 0};
  const CiResult r = full_ci_ground_state(sys, o);
  const RealVector e = bare_levels(sys);
  EXPECT_NEAR(r.energy, e(0) + e(1), 1e-12);
}

TEST(FullCi, MatchesFirstQuantizedTwoElectronHamiltonian) {
  // Complete orbital set on an 8-point grid: CI must equal the lowest
  // eigenvalue of h x 1 + 1 x h + diag(v) on the two-particle grid space.
  SystemSpec s = small_well(2, 8);
  s.spacing = 0.6;
  const ModelSystem sys = build_soft_coulomb_system(s);
  const Index g = 8;
  const RealMatrix h = sys.h_core(0.0).real();
  RealMatrix big = RealMatrix::Zero(g * g, g * g);
  for (Index i = 0; i < g; ++i) {
    for (Index j = 0; j < g; ++j) {
      for (Index k = 0; k < g; ++k) {
        big(i * g + j, k * g + j) += h(i, k);
        big(i * g + j, i * g + k) += h(j, k);
      }
      big(i * g + j, i * g + j) += sys.interaction_kernel()(i, j);
    }
  }
  Eigen::SelfAdjointEigenSolver<RealMatrix> es(big, Eigen::EigenvaluesOnly);
  CiOptions o;
  o.orbital_cutoff = 8;
  EXPECT_NEAR(full_ci_ground_state(sys, o).energy, es.eigenvalues()(0), 1e-10);
}

TEST(FullCi, BelowHartreeFockInFockBasis) {
  const ModelSystem sys = build_soft_coulomb_system(SystemSpec{});
  const SCFResult hf = scf_solve(sys);
  ASSERT_TRUE(hf.converged);
  const CiResult ci = full_ci_ground_state(sys, hf.orbitals.leftCols(8));
  EXPECT_LE(ci.energy, hf.total_energy + 1e-10);
  EXPECT_LE(hf.total_energy - ci.energy, 0.1 * std::abs(ci.energy));
}

TEST(FullCi, EnergyNonIncreasingWithCutoff) {
  const ModelSystem sys = build_soft_coulomb_system(small_well(3, 20));
  double previous = INFINITY;
  for (int cutoff = 2; cutoff <= 9; ++cutoff) {
    CiOptions o;
    o.orbital_cutoff = cutoff;
    const double e = full_ci_ground_state(sys, o).energy;
    EXPECT_LE(e, previous + 1e-12) << "cutoff " << cutoff;
    previous = e;
  }
}

TEST(FullCi, RejectsOversizedSpaceWithReport) {
  const ModelSystem sys = build_soft_coulomb_system(small_well(4, 32));
  CiOptions o;
  o.orbital_cutoff = 16;
  try {
    full_ci_ground_state(sys, o);
    FAIL() << "expected rejection";
  } catch (const ComputationError& e) {
    EXPECT_NE(std::string(e.what()).find("35960"), std::string::npos) << e.what();
  }
}

TEST(FullCi, RejectsMoreThanFourElectrons) {
  const ModelSystem sys = build_soft_coulomb_system(small_well(5));
  CiOptions o;
  o.orbital_cutoff = 5;
  EXPECT_THROW(full_ci_ground_state(sys, o), InvalidArgument);
}

TEST(Wavefunction, NormalizedAndAntisymmetric) {
  const ModelSystem sys = build_soft_coulomb_system(small_well(3));
  CiOptions o;
  o.orbital_cutoff = 5;
  const CiResult r = full_ci_ground_state(sys, o);
  EXPECT_NEAR(r.state.norm_squared(), 1.0, 1e-12);
  testing::Gen gen(11);
  for (int t = 0; t < 50; ++t) {
    std::vector<int> tuple;
    while (tuple.size() < 3) {
      const int p = gen.integer(0, 9);
      if (std::find(tuple.begin(), tuple.end(), p) == tuple.end()) tuple.push_back(p);
    }
    const Complex a = r.state.amplitude(tuple);
    std::swap(tuple[0], tuple[2]);
    EXPECT_NEAR(std::abs(r.state.amplitude(tuple) + a), 0.0, 1e-14);
    tuple[1] = tuple[0];
    EXPECT_EQ(r.state.amplitude(tuple), Complex(0.0));
  }
  EXPECT_EQ(NBodyWavefunction::spin_of(4), Spin::up);
  EXPECT_EQ(NBodyWavefunction::spin_of(5), Spin::down);
}

TEST(ReducedDensity, TracesFollowFactorialNormalization) {
  const ModelSystem s2 = build_soft_coulomb_system(small_well(2));
  const ModelSystem s3 = build_soft_coulomb_system(small_well(3));
  CiOptions o;
  o.orbital_cutoff = 6;
  const CiResult r2 = full_ci_ground_state(s2, o);
  const CiResult r3 = full_ci_ground_state(s3, o);
  EXPECT_NEAR(exact_reduced_density_matrix(r2.state, 1).trace(), 2.0, 1e-10 * 2);
  EXPECT_NEAR(exact_reduced_density_matrix(r3.state, 2).trace(), 6.0, 1e-10 * 6);
  EXPECT_THROW(exact_reduced_density_matrix(r2.state, 3), InvalidArgument);
  EXPECT_THROW(exact_reduced_density_matrix(r2.state, 0), InvalidArgument);
}

TEST(ReducedDensity, SingleParticleIsOuterProduct) {
  const ModelSystem sys = build_soft_coulomb_system(small_well(1));
  CiOptions o;
  o.orbital_cutoff = 4;
  const CiResult r = full_ci_ground_state(sys, o);
  const DensityMatrix rho = exact_reduced_density_matrix(r.state, 1);
  ComplexVector psi = ComplexVector::Zero(8);
  for (std::size_t i = 0; i < r.state.configurations().size(); ++i) {
    const Tuple occ = occupied_indices(r.state.configurations()[i]);
    psi(occ[0]) = r.state.amplitudes()(static_cast<Index>(i));
  }
  EXPECT_LT(testing::max_abs(rho.matrix() - psi * psi.adjoint()), 1e-14);
  EXPECT_NEAR(rho.trace(), 1.0, 1e-12);
}

// N!/(N-n)! * sum over the remaining coordinates of Psi Psi*, with
// Psi(p_1..p_N) = amplitude / sqrt(N!) over ordered spin-orbital tuples.
Complex brute_force_element(const NBodyWavefunction& psi, const std::vector<int>& bra, const std::vector<int>& ket) {
  const int n_el = psi.electrons();
  const int m = psi.spin_orbital_count();
  const int rest = n_el - static_cast<int>(bra.size());
  double fact = 1.0;
  for (int i = 2; i <= n_el; ++i) fact *= i;
  double nfact = 1.0;
  for (int i = rest + 1; i <= n_el; ++i) nfact *= i;  // N!/(N-n)!
  Complex sum = 0.0;
  std::vector<int> r(static_cast<std::size_t>(rest), 0);
  const long total = static_cast<long>(std::pow(m, rest));
  for (long code = 0; code < total; ++code) {
    long c = code;
    for (int i = 0; i < rest; ++i) {
      r[static_cast<std::size_t>(i)] = static_cast<int>(c % m);
      c /= m;
    }
    std::vector<int> a = bra, b = ket;
    a.insert(a.end(), r.begin(), r.end());
    b.insert(b.end(), r.begin(), r.end());
    sum += psi.amplitude(a) * std::conj(psi.amplitude(b));
  }
  return nfact * sum / fact;
}

TEST(ReducedDensity, MatchesBruteForceCoordinateSum) {
  const ModelSystem sys = build_soft_coulomb_system(small_well(3));
  CiOptions o;
  o.orbital_cutoff = 4;
  const CiResult r = full_ci_ground_state(sys, o);
  const DensityMatrix rho1 = exact_reduced_density_matrix(r.state, 1);
  const DensityMatrix rho2 = exact_reduced_density_matrix(r.state, 2);
  testing::Gen gen(5);
  for (int t = 0; t < 40; ++t) {
    const std::vector<int> b1{gen.integer(0, 7)}, k1{gen.integer(0, 7)};
    EXPECT_NEAR(std::abs(rho1.element(b1, k1) - brute_force_element(r.state, b1, k1)), 0.0, 1e-12);
    const std::vector<int> b2{gen.integer(0, 7), gen.integer(0, 7)}, k2{gen.integer(0, 7), gen.integer(0, 7)};
    EXPECT_NEAR(std::abs(rho2.element(b2, k2) - brute_force_element(r.state, b2, k2)), 0.0, 1e-12);
  }
}

TEST(ReducedDensity, HermitianPsdAndContracts) {
  testing::Gen gen(3);
  for (int n_el : {2, 3, 4}) {
    const ModelSystem sys = build_soft_coulomb_system(gen.well(16, n_el));
    CiOptions o;
    o.orbital_cutoff = 5;
    const CiResult r = full_ci_ground_state(sys, o);
    const DensityMatrix rho1 = exact_reduced_density_matrix(r.state, 1);
    const DensityMatrix rho2 = exact_reduced_density_matrix(r.state, 2);
    EXPECT_LT(rho1.hermiticity_error(), 1e-12);
    EXPECT_LT(rho2.hermiticity_error(), 1e-12);
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(rho1.matrix(), Eigen::EigenvaluesOnly);
    EXPECT_GE(es.eigenvalues()(0), -1e-10);
    const int m = rho1.spin_orbital_count();
    for (int p = 0; p < m; ++p) {
      for (int q = 0; q < m; ++q) {
        Complex c = 0.0;
        for (int s = 0; s < m; ++s) {
          const int bra[2] = {p, s}, ket[2] = {q, s};
          c += rho2.element(bra, ket);
        }
        const int bp[1] = {p}, kq[1] = {q};
        EXPECT_NEAR(std::abs(c - (n_el - 1.0) * rho1.element(bp, kq)), 0.0, 1e-10);
      }
    }
  }
}

TEST(SlaterRules, DeterminantEnergyMatchesDirectMinusExchange) {
  const ModelSystem sys = build_soft_coulomb_system(small_well(2, 24));
  const OrbitalSet orb = one_body_orbitals(sys.h_core(0.0), 3);
  const ComplexMatrix h = sys.h_core(0.0);
  const RealMatrix& v = sys.interaction_kernel();
  // Orbital 0 up, orbital 2 up: same spin, exchange present.
  const std::vector<int> occ{spin_orbital(0, Spin::up), spin_orbital(2, Spin::up)};
  const NBodyWavefunction det = slater_determinant(orb.vectors, occ);
  const ComplexVector a = orb.vectors.col(0), b = orb.vectors.col(2);
  double one = (a.dot(h * a) + b.dot(h * b)).real();
  double direct = 0.0, exchange = 0.0;
  for (Index i = 0; i < a.size(); ++i) {
    for (Index j = 0; j < a.size(); ++j) {
      direct += std::norm(a(i)) * v(i, j) * std::norm(b(j));
      exchange += (std::conj(a(i)) * b(i) * v(i, j) * std::conj(b(j)) * a(j)).real();
    }
  }
  EXPECT_NEAR(expectation_energy(sys, det), one + direct - exchange, 1e-10);

  // Opposite spins: no exchange.
  const std::vector<int> occ2{spin_orbital(0, Spin::up), spin_orbital(2, Spin::down)};
  EXPECT_NEAR(expectation_energy(sys, slater_determinant(orb.vectors, occ2)), one + direct, 1e-10);
}

TEST(SlaterRules, CiEnergyEqualsExpectation) {
  const ModelSystem sys = build_soft_coulomb_system(small_well(3));
  CiOptions o;
  o.orbital_cutoff = 5;
  const CiResult r = full_ci_ground_state(sys, o);
  EXPECT_NEAR(expectation_energy(sys, r.state), r.energy, 1e-10);
}

TEST(SlaterRules, DeterminantSignFollowsOrder) {
  const OrbitalSet orb = one_body_orbitals(build_soft_coulomb_system(small_well(2)).h_core(0.0), 2);
  const std::vector<int> ab{0, 3}, ba{3, 0};
  const NBodyWavefunction x = slater_determinant(orb.vectors, ab);
  const NBodyWavefunction y = slater_determinant(orb.vectors, ba);
  EXPECT_EQ(x.amplitudes()(0), -y.amplitudes()(0));
}

}  // namespace
}  // namespace qpw
