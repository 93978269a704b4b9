#include <cmath>

#include <gtest/gtest.h>

#include "qpw/hydrogenic_spectrum.hpp"
#include "test_support.hpp"

namespace qpw {
namespace {

TEST(BosonEnergy, FreeLimitIsHalfMass) {
  EXPECT_EQ(boson_energy({1.0, 0.0, 1, 1}), 0.5);
  EXPECT_EQ(boson_energy({3.0, 0.0, 4, -2}), 1.5);
}

TEST(BosonEnergy, HandExpansion) {
  // 1/2 - 0.01/2 - 1e-4/8 (4 - 3) - 1e-6/8 (3 - 8 + 4)
  EXPECT_NEAR(boson_energy({1.0, 0.1, 1, 1}), 0.494987625, 1e-15);
}

TEST(BosonEnergy, DependsOnlyOnMagnitudeOfK) {
  EXPECT_EQ(boson_energy({1.0, 0.3, 2, 3}), boson_energy({1.0, 0.3, 2, -3}));
}

TEST(BosonEnergy, Rejections) {
  EXPECT_THROW(boson_energy({1.0, 0.1, 1, 0}), InvalidArgument);
  EXPECT_THROW(boson_energy({1.0, 0.1, 0, 1}), InvalidArgument);
  EXPECT_THROW(boson_energy({0.0, 0.1, 1, 1}), InvalidArgument);
  EXPECT_THROW(boson_energy({1.0, 1.0, 1, 1}), InvalidArgument);
  EXPECT_THROW(boson_energy({1.0, -0.1, 1, 1}), InvalidArgument);
}

TEST(BosonEnergy, RisesTowardHalfMassWithN) {
  double prev = boson_energy({1.0, 0.2, 2, 1});
  for (int n = 3; n <= 40; ++n) {
    const double e = boson_energy({1.0, 0.2, n, 1});
    EXPECT_GT(e, prev);
    EXPECT_LT(e, 0.5);
    prev = e;
  }
}

TEST(MassLimit, ApproachesMass) {
  const std::vector<int> seq{10, 20, 40, 80};
  for (double m : {1.0, 2.0, 0.37}) {
    for (double g : {0.05, 0.3, 0.7}) {
      EXPECT_NEAR(mass_operator_limit(m, g, 1, seq), m, 1e-6 * m) << "m=" << m << " g=" << g;
    }
  }
}

TEST(MassLimit, Rejections) {
  EXPECT_THROW(mass_operator_limit(1, 0.1, 1, std::vector<int>{1, 2}), InvalidArgument);
  EXPECT_THROW(mass_operator_limit(1, 0.1, 1, std::vector<int>{1, 3, 2}), InvalidArgument);
  EXPECT_THROW(mass_operator_limit(1, 0.1, 1, std::vector<int>{0, 1, 2}), InvalidArgument);
}

TEST(TruncationExponent, LeadingCorrectionIsQuartic) {
  const std::vector<double> g{0.01, 0.02, 0.04};
  EXPECT_NEAR(truncation_exponent(1.0, 10, 1, g), 4.0, 0.05);
  EXPECT_NEAR(truncation_exponent(2.5, 3, 2, g), 4.0, 0.05);
  EXPECT_THROW(truncation_exponent(1, 1, 1, std::vector<double>{0.1}), InvalidArgument);
  EXPECT_THROW(truncation_exponent(1, 1, 1, std::vector<double>{0.0, 0.1}), InvalidArgument);
  EXPECT_THROW(truncation_exponent(1, 1, 1, std::vector<double>{0.1, 0.1}), InvalidArgument);
}

TEST(HydrogenicLevel, ExactFormula) {
  const HydrogenicLevel l = hydrogenic_level(3, 2.0);
  EXPECT_DOUBLE_EQ(l.energy, -4.0 / 18.0);
  EXPECT_EQ(l.degeneracy, 9);
  EXPECT_DOUBLE_EQ(hydrogenic_level(1, 1.0).energy, -0.5);
  EXPECT_THROW(hydrogenic_level(0, 1.0), InvalidArgument);
  EXPECT_THROW(hydrogenic_level(1, 0.0), InvalidArgument);
}

TEST(HydrogenicBasis, OrthonormalAndBound) {
  const Grid grid(400, 0.1);
  const HydrogenicBasis b = hydrogenic_basis(4, 1.0, grid);
  ASSERT_EQ(b.functions.cols(), 4);
  ASSERT_EQ(b.levels.size(), 4u);
  EXPECT_LT(testing::max_abs(b.functions.adjoint() * b.functions - ComplexMatrix::Identity(4, 4)), 1e-12);
  for (std::size_t i = 0; i < 4; ++i) {
    EXPECT_LT(b.levels[i].model_energy, 0.0);
    EXPECT_EQ(b.levels[i].n, static_cast<int>(i) + 1);
    if (i > 0) EXPECT_GT(b.levels[i].model_energy, b.levels[i - 1].model_energy);
  }
}

TEST(HydrogenicBasis, ConvergesUnderRefinement) {
  const HydrogenicBasis coarse = hydrogenic_basis(2, 1.0, Grid(400, 0.1));
  const HydrogenicBasis fine = hydrogenic_basis(2, 1.0, Grid(800, 0.05));
  for (std::size_t i = 0; i < 2; ++i) {
    EXPECT_NEAR(coarse.levels[i].model_energy, fine.levels[i].model_energy, 5e-3);
  }
}

TEST(HydrogenicBasis, Rejections) {
  EXPECT_THROW(hydrogenic_basis(1, 2.0, Grid(200, 0.15)), InvalidArgument);
  EXPECT_THROW(hydrogenic_basis(0, 1.0, Grid(200, 0.1)), InvalidArgument);
  EXPECT_THROW(hydrogenic_basis(1, 1.0, Grid(200, 0.1), 0.0), InvalidArgument);
  EXPECT_THROW(hydrogenic_basis(50, 1.0, Grid(40, 0.1)), InvalidArgument);
}

}  // namespace
}  // namespace qpw
