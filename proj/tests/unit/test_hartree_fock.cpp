#include <cmath>

#include <gtest/gtest.h>

#include "qpw/hartree_fock.hpp"
#include "qpw/many_body_oracle.hpp"
#include "test_support.hpp"

namespace qpw {
namespace {

using testing::max_abs;

SystemSpec crystal(int electrons, Index k_points = 8) {
  SystemSpec s;
  s.boundary = Boundary::periodic;
  s.electrons = electrons;
  s.k_points = k_points;
  s.grid_points = 32;
  s.spacing = 0.25;
  return s;
}

RealVector bare(const ModelSystem& sys, double k = 0.0) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(sys.h_core(k), Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

TEST(BuildFock, SingleElectronLeavesHcore) {
  SystemSpec s;
  s.electrons = 1;
  const ModelSystem sys = build_soft_coulomb_system(s);
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(sys.h_core(0.0));
  const ComplexVector c = es.eigenvectors().col(0);
  const FockOperator f = build_fock(sys, c * c.adjoint());
  EXPECT_LT(max_abs(f.total - f.h_core), 1e-12);
  EXPECT_LT(max_abs(f.hartree - f.exchange), 1e-12);
  EXPECT_TRUE(f.self_action_cancelled);
}

TEST(BuildFock, EmptyDensity) {
  const ModelSystem sys = build_soft_coulomb_system(SystemSpec{});
  const FockOperator f = build_fock(sys, ComplexMatrix::Zero(64, 64));
  EXPECT_EQ(max_abs(f.hartree), 0.0);
  EXPECT_EQ(max_abs(f.exchange), 0.0);
  EXPECT_EQ(f.total, f.h_core);
}

TEST(BuildFock, HartreeMatchesDirectCoulombDoubleSum) {
  const ModelSystem sys = build_soft_coulomb_system(SystemSpec{});
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(sys.h_core(0.0));
  const ComplexVector phi = es.eigenvectors().col(0);
  const FockOperator f = build_fock(sys, 2.0 * phi * phi.adjoint());
  // (00|00) = sum_ij |phi_i|^2 v_ij |phi_j|^2, one electron in the field of the other.
  double direct = 0.0;
  const RealMatrix& v = sys.interaction_kernel();
  for (Index i = 0; i < 64; ++i) {
    for (Index j = 0; j < 64; ++j) direct += std::norm(phi(i)) * v(i, j) * std::norm(phi(j));
  }
  EXPECT_NEAR(phi.dot(f.interaction() * phi).real(), direct, 1e-10);
  EXPECT_NEAR(phi.dot(f.hartree * phi).real(), 2.0 * direct, 1e-10);
  EXPECT_LT(hermiticity_error(f.total), 1e-12);
}

TEST(BuildFock, DimensionMismatch) {
  const ModelSystem sys = build_soft_coulomb_system(SystemSpec{});
  EXPECT_THROW(build_fock(sys, ComplexMatrix::Zero(10, 10)), InvalidArgument);
}

TEST(Scf, NoninteractingConvergesImmediately) {
  SystemSpec s;
  s.interaction_strength = 0.0;
  const ModelSystem sys = build_soft_coulomb_system(s);
  const SCFResult r = scf_solve(sys);
  ASSERT_TRUE(r.converged);
  EXPECT_EQ(r.iterations, 1);
  EXPECT_LT((r.eigenvalues - bare(sys)).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Scf, SingleElectronEigenvalueIsBareGround) {
  testing::Gen gen(12);
  for (int t = 0; t < 4; ++t) {
    const ModelSystem sys = build_soft_coulomb_system(gen.well(32, 1));
    const SCFResult r = scf_solve(sys);
    ASSERT_TRUE(r.converged);
    EXPECT_NEAR(r.eigenvalues(0), bare(sys)(0), 1e-12);
  }
}

TEST(Scf, TwoElectronWellAboveCiAndClose) {
  const ModelSystem sys = build_soft_coulomb_system(SystemSpec{});
  const SCFResult r = scf_solve(sys);
  ASSERT_TRUE(r.converged);
  const CiResult ci = full_ci_ground_state(sys);
  EXPECT_GE(r.total_energy, ci.energy - 1e-10);
  EXPECT_LE(r.total_energy - ci.energy, 0.1 * std::abs(ci.energy));
}

TEST(Scf, EnergyEqualsDeterminantExpectation) {
  SystemSpec s;
  s.grid_points = 24;
  s.spacing = 0.35;
  s.electrons = 4;
  const ModelSystem sys = build_soft_coulomb_system(s);
  const SCFResult r = scf_solve(sys);
  ASSERT_TRUE(r.converged);
  const std::vector<int> so{0, 1, 2, 3};
  const NBodyWavefunction det = slater_determinant(r.orbitals.leftCols(2), so);
  EXPECT_NEAR(r.total_energy, expectation_energy(sys, det), 1e-10);
}

TEST(Scf, BlochEnergyMatchesClosedShellSlaterRules) {
  // Complex orbitals at k != 0: E = sum_m 2 h_mm + sum_mn [2 (mm|nn) - (mn|nm)].
  const ModelSystem sys = build_soft_coulomb_system(crystal(4));
  const double k = sys.kgrid().front();
  const SCFResult r = scf_solve(sys, k);
  ASSERT_TRUE(r.converged);
  const ComplexMatrix h = sys.h_core(k);
  const RealMatrix& v = sys.interaction_kernel();
  double e = 0.0;
  for (int m = 0; m < 2; ++m) {
    const ComplexVector a = r.orbitals.col(m);
    e += 2.0 * a.dot(h * a).real();
    for (int n = 0; n < 2; ++n) {
      const ComplexVector b = r.orbitals.col(n);
      for (Index i = 0; i < a.size(); ++i) {
        for (Index j = 0; j < a.size(); ++j) {
          e += 2.0 * std::norm(a(i)) * v(i, j) * std::norm(b(j));
          e -= (std::conj(a(i)) * b(i) * v(i, j) * std::conj(b(j)) * a(j)).real();
        }
      }
    }
  }
  EXPECT_NEAR(r.total_energy, e, 1e-10);
}

TEST(Scf, OrthonormalSortedHermitian) {
  const ModelSystem sys = build_soft_coulomb_system(crystal(2));
  for (double k : {sys.kgrid()[1], sys.kgrid()[6]}) {
    const SCFResult r = scf_solve(sys, k);
    ASSERT_TRUE(r.converged);
    const Index n = r.orbitals.cols();
    EXPECT_LT(max_abs(r.orbitals.adjoint() * r.orbitals - ComplexMatrix::Identity(n, n)), 1e-10);
    for (Index i = 1; i < n; ++i) EXPECT_LE(r.eigenvalues(i - 1), r.eigenvalues(i));
    EXPECT_LT(hermiticity_error(r.fock.total), 1e-12);
    EXPECT_TRUE(r.energy_monotone);
  }
}

TEST(Scf, NonConvergenceReportedWithHistory) {
  const ModelSystem sys = build_soft_coulomb_system(SystemSpec{});
  ScfOptions o;
  o.max_iter = 2;
  o.tol = 1e-14;
  const SCFResult r = scf_solve(sys, 0.0, o);
  EXPECT_FALSE(r.converged);
  EXPECT_EQ(r.history.size(), 2u);
  EXPECT_FALSE(r.message.empty());
  EXPECT_GT(r.final_residual, 0.0);
}

TEST(Scf, Rejections) {
  SystemSpec s;
  s.electrons = 3;
  EXPECT_THROW(scf_solve(build_soft_coulomb_system(s)), InvalidArgument);
  const ModelSystem sys = build_soft_coulomb_system(SystemSpec{});
  ScfOptions o;
  o.tol = 0.0;
  EXPECT_THROW(scf_solve(sys, 0.0, o), InvalidArgument);
  o = {};
  o.mixing = 1.5;
  EXPECT_THROW(scf_solve(sys, 0.0, o), InvalidArgument);
  EXPECT_THROW(scf_solve(sys, 0.2), InvalidArgument);
}

TEST(Bands, FreeLatticeMatchesStencilDispersion) {
  SystemSpec s = crystal(2);
  s.well_depth = 0.0;
  s.interaction_strength = 0.0;
  const ModelSystem sys = build_soft_coulomb_system(s);
  const BandRun run = band_structure(sys, {}, 2);
  const double h = s.spacing;
  for (std::size_t ik = 0; ik < sys.kgrid().size(); ++ik) {
    const double k = sys.kgrid()[ik];
    EXPECT_NEAR(run.bands.bands[0][ik], (1.0 - std::cos(k * h)) / (h * h), 1e-10);
  }
}

TEST(Bands, SymmetricUnderKNegation) {
  const ModelSystem sys = build_soft_coulomb_system(crystal(2));
  const BandRun run = band_structure(sys, {}, 4);
  for (Index n = 0; n < 4; ++n) {
    ASSERT_TRUE(run.bands.band_converged(n));
    EXPECT_LE(run.bands.symmetry_error(n), 1e-8);
  }
  EXPECT_EQ(run.bands.occupations, (std::vector<int>{2, 0, 0, 0}));
}

TEST(Bands, GammaOnlyReducesToScf) {
  const ModelSystem sys = build_soft_coulomb_system(crystal(2, 1));
  ASSERT_EQ(sys.kgrid(), std::vector<double>{0.0});
  const BandRun run = band_structure(sys, {}, 3);
  const SCFResult r = scf_solve(sys, 0.0);
  for (Index n = 0; n < 3; ++n) EXPECT_EQ(run.bands.bands[static_cast<std::size_t>(n)][0], r.eigenvalues(n));
}

TEST(Bands, ThreadCountDoesNotChangeResults) {
  const ModelSystem sys = build_soft_coulomb_system(crystal(2, 4));
  const BandRun a = band_structure(sys, {}, 3, 1);
  const BandRun b = band_structure(sys, {}, 3, 3);
  EXPECT_EQ(a.bands.bands, b.bands.bands);
}

TEST(Bands, UnconvergedKMarksBands) {
  const ModelSystem sys = build_soft_coulomb_system(crystal(2, 2));
  ScfOptions o;
  o.max_iter = 1;
  o.tol = 1e-15;
  const BandRun run = band_structure(sys, o, 2);
  EXPECT_FALSE(run.bands.band_converged(0));
}

TEST(Bands, BoxRejected) {
  EXPECT_THROW(band_structure(build_soft_coulomb_system(SystemSpec{})), InvalidArgument);
}

TEST(Bands, MirrorIndex) {
  const std::vector<double> k{-0.3, -0.1, 0.1, 0.3};
  EXPECT_EQ(mirror_index(k, 0), 3);
  EXPECT_EQ(mirror_index(k, 2), 1);
  const std::vector<double> skew{-0.3, 0.1};
  EXPECT_EQ(mirror_index(skew, 0), -1);
}

}  // namespace
}  // namespace qpw
