#include <cmath>

#include <gtest/gtest.h>

#include "qpw/green_dyson.hpp"
#include "test_support.hpp"

namespace qpw {
namespace {

using testing::max_abs;

ComplexMatrix diagonal_h(std::initializer_list<double> levels) {
  RealVector d(static_cast<Index>(levels.size()));
  Index i = 0;
  for (double e : levels) d(i++) = e;
  return d.cast<Complex>().asDiagonal();
}

TEST(FrequencyGrid, UniformAndSpanning) {
  const FrequencyGrid g = FrequencyGrid::uniform(-1.0, 1.0, 5, 0.01);
  EXPECT_EQ(g.points, (std::vector<double>{-1.0, -0.5, 0.0, 0.5, 1.0}));
  EXPECT_DOUBLE_EQ(g.spacing(), 0.5);
  RealVector levels(2);
  levels << -0.3, 0.7;
  const FrequencyGrid s = FrequencyGrid::spanning(levels, 0.5, 11, 0.02);
  EXPECT_DOUBLE_EQ(s.points.front(), -0.8);
  EXPECT_DOUBLE_EQ(s.points.back(), 1.2);
  EXPECT_EQ(s.eta, 0.02);
}

TEST(FrequencyGrid, Rejections) {
  EXPECT_THROW(FrequencyGrid::uniform(0, 1, 10, 0.0), InvalidArgument);
  EXPECT_THROW(FrequencyGrid::uniform(1, 1, 10, 0.1), InvalidArgument);
  EXPECT_THROW(FrequencyGrid::uniform(0, 1, 1, 0.1), InvalidArgument);
  EXPECT_THROW(FrequencyGrid::spanning(RealVector(0)), InvalidArgument);
}

TEST(FreeGreen, ScalarResolvent) {
  const FrequencyGrid grid = FrequencyGrid::uniform(-2, 2, 41, 0.05);
  const GreenFunction g = free_green(diagonal_h({0.3}), grid);
  ASSERT_EQ(g.matrices.size(), 41u);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const Complex expect = 1.0 / Complex(grid.points[i] - 0.3, 0.05);
    EXPECT_LT(std::abs(g.matrices[i](0, 0) - expect), 1e-14);
  }
}

TEST(FreeGreen, ResidualOnRandomHamiltonian) {
  testing::Gen gen(8);
  const ComplexMatrix h = gen.hermitian(12);
  const GreenFunction g = free_green(h, FrequencyGrid::uniform(-3, 3, 300, 1e-3));
  EXPECT_LE(free_green_residual(g, h), 1e-10);
  EXPECT_EQ(g.kind, GreenFunction::Kind::free);
  EXPECT_EQ(g.dimension(), 12);
}

TEST(FreeGreen, RejectsNonHermitian) {
  ComplexMatrix h = diagonal_h({0.0, 1.0});
  h(0, 1) = 1.0;
  EXPECT_THROW(free_green(h, FrequencyGrid::uniform(-1, 1, 5, 0.1)), InvalidArgument);
}

TEST(Dyson, ScalarMatchesShiftedResolvent) {
  const FrequencyGrid grid = FrequencyGrid::uniform(-2, 2, 81, 0.05);
  const GreenFunction g0 = free_green(diagonal_h({0.3}), grid);
  const DysonResult r = dyson_solve(g0, SelfEnergyModel::scaled_identity(1, 0.2));
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const Complex expect = 1.0 / Complex(grid.points[i] - 0.5, 0.05);
    EXPECT_LT(std::abs(r.g.matrices[i](0, 0) - expect), 1e-13);
  }
  EXPECT_LE(r.max_residual(), 1e-12);
  EXPECT_EQ(r.g.kind, GreenFunction::Kind::dressed);
}

TEST(Dyson, ZeroSelfEnergyIsBitwiseFree) {
  testing::Gen gen(9);
  const GreenFunction g0 = free_green(gen.hermitian(6), FrequencyGrid::uniform(-3, 3, 50, 1e-2));
  const DysonResult r = dyson_solve(g0, SelfEnergyModel::zero(6));
  for (std::size_t i = 0; i < g0.matrices.size(); ++i) EXPECT_TRUE(r.g.matrices[i] == g0.matrices[i]);
}

TEST(Dyson, FrequencyTabulatedResidual) {
  testing::Gen gen(10);
  const FrequencyGrid grid = FrequencyGrid::uniform(-3, 3, 60, 1e-2);
  const GreenFunction g0 = free_green(gen.hermitian(5), grid);
  std::vector<ComplexMatrix> table;
  for (std::size_t i = 0; i < grid.size(); ++i) table.push_back(gen.hermitian(5, 0.1));
  const DysonResult r = dyson_solve(g0, SelfEnergyModel::tabulated_frequency(table));
  EXPECT_LE(r.max_residual(), 1e-10);
  EXPECT_TRUE(r.singular.empty());
}

TEST(Dyson, IterativeAgreesWithDirect) {
  testing::Gen gen(11);
  const FrequencyGrid grid = FrequencyGrid::uniform(-4, 4, 40, 0.5);
  const GreenFunction g0 = free_green(gen.hermitian(4), grid);
  const SelfEnergyModel sigma = SelfEnergyModel::constant(gen.hermitian(4, 0.05));
  const DysonResult direct = dyson_solve(g0, sigma);
  DysonOptions o;
  o.method = DysonMethod::iterative;
  o.tolerance = 1e-13;
  o.max_sweeps = 2000;
  const DysonResult iter = dyson_solve(g0, sigma, o);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    EXPECT_LT(max_abs(iter.g.matrices[i] - direct.g.matrices[i]), 1e-11);
  }
}

TEST(Dyson, IterativeFallsBackWhenDivergent) {
  const FrequencyGrid grid = FrequencyGrid::uniform(-1, 1, 21, 1e-3);
  const GreenFunction g0 = free_green(diagonal_h({0.0, 0.5}), grid);
  DysonOptions o;
  o.method = DysonMethod::iterative;
  const DysonResult r = dyson_solve(g0, SelfEnergyModel::scaled_identity(2, 0.3), o);
  EXPECT_FALSE(r.fallbacks.empty());
  EXPECT_FALSE(r.notes.empty());
  EXPECT_LE(r.max_residual(), 1e-9);
}

TEST(Dyson, Rejections) {
  const GreenFunction g0 = free_green(diagonal_h({0.0, 1.0}), FrequencyGrid::uniform(-1, 1, 5, 0.1));
  EXPECT_THROW(dyson_solve(g0, SelfEnergyModel::zero(3)), InvalidArgument);
  const std::vector<ComplexMatrix> short_table(2, ComplexMatrix::Zero(2, 2));
  EXPECT_THROW(dyson_solve(g0, SelfEnergyModel::tabulated_frequency(short_table)), InvalidArgument);
  const SelfEnergyModel by_k = SelfEnergyModel::tabulated_momentum({0.0}, {ComplexMatrix::Zero(2, 2)});
  EXPECT_THROW(dyson_solve(g0, by_k), InvalidArgument);
  EXPECT_THROW(dyson_method_from_string("newton"), InvalidArgument);
  EXPECT_EQ(to_string(dyson_method_from_string("iterative")), "iterative");
}

TEST(Dressed, RankOneShift) {
  const ComplexMatrix h = diagonal_h({-1.0, 0.0, 2.0});
  ComplexVector u = ComplexVector::Zero(3);
  u(1) = 1.0;
  const RealVector e = dressed_eigenproblem(h, 0.4 * u * u.adjoint());
  EXPECT_NEAR(e(0), -1.0, 1e-14);
  EXPECT_NEAR(e(1), 0.4, 1e-14);
  EXPECT_NEAR(e(2), 2.0, 1e-14);
  EXPECT_THROW(dressed_eigenproblem(h, ComplexMatrix::Zero(2, 2)), InvalidArgument);
  ComplexMatrix bad = ComplexMatrix::Zero(3, 3);
  bad(0, 2) = 1.0;
  EXPECT_THROW(dressed_eigenproblem(h, bad), InvalidArgument);
}

TEST(Spectral, PeaksSitAtDressedLevels) {
  const ComplexMatrix h = diagonal_h({-1.0, 0.5});
  const FrequencyGrid grid = FrequencyGrid::uniform(-2, 2, 401, 0.02);
  const SelfEnergyModel sigma = SelfEnergyModel::scaled_identity(2, 0.1);
  const DysonResult r = dyson_solve(free_green(h, grid), sigma);
  const std::vector<double> peaks = spectral_peaks(r.g);
  ASSERT_EQ(peaks.size(), 2u);
  EXPECT_NEAR(peaks[0], -0.9, grid.spacing());
  EXPECT_NEAR(peaks[1], 0.6, grid.spacing());
  const std::vector<double> a = spectral_function(r.g);
  for (double v : a) EXPECT_GE(v, 0.0);
}

}  // namespace
}  // namespace qpw
