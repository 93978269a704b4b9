#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "qpw/quasiparticle.hpp"
#include "test_support.hpp"

namespace qpw {
namespace {

std::vector<double> cosine_band(int count) {
  std::vector<double> s;
  for (int i = 0; i < count; ++i) s.push_back(std::cos(2.0 * std::numbers::pi * (i + 0.5) / count - std::numbers::pi));
  return s;
}

SystemSpec crystal(int electrons) {
  SystemSpec s;
  s.boundary = Boundary::periodic;
  s.electrons = electrons;
  s.k_points = 8;
  s.grid_points = 24;
  s.spacing = 0.3;
  return s;
}

TEST(ReferencePoint, CosineBand) {
  const std::vector<double> k{0.0, std::numbers::pi / 2, std::numbers::pi};
  std::vector<double> band;
  for (double x : k) band.push_back(std::cos(x));
  EXPECT_DOUBLE_EQ(reference_point(band, 1, Extremum::max), 1.0);
  EXPECT_DOUBLE_EQ(reference_point(band, 2, Extremum::min), -0.5);
}

TEST(ReferencePoint, Rejections) {
  EXPECT_THROW(reference_point(std::vector<double>{}, 1, Extremum::min), InvalidArgument);
  EXPECT_THROW(reference_point(std::vector<double>{1.0}, 0, Extremum::min), InvalidArgument);
  BandStructure bs;
  bs.kgrid = {-0.5, 0.5};
  bs.bands = {{1.0, 1.0}};
  bs.converged = {true, false};
  EXPECT_THROW(reference_point(bs, 0, 1, Extremum::min), InvalidArgument);
  bs.converged = {true, true};
  EXPECT_DOUBLE_EQ(reference_point(bs, 0, 1, Extremum::min), 1.0);
  EXPECT_THROW(reference_point(bs, 1, 1, Extremum::min), InvalidArgument);
}

TEST(Extremum, Parse) {
  EXPECT_EQ(extremum_from_string("max"), Extremum::max);
  EXPECT_EQ(to_string(extremum_from_string("min")), "min");
  EXPECT_THROW(extremum_from_string("mid"), InvalidArgument);
}

TEST(Extrapolation, ExactForQuadratics) {
  const std::vector<double> k{-0.75, -0.25, 0.25, 0.75};
  std::vector<double> v;
  for (double x : k) v.push_back(0.3 - 1.1 * x + 2.0 * x * x);
  EXPECT_NEAR(extrapolate_to_gamma(k, v), 0.3, 1e-14);
  const std::vector<double> single{0.2};
  EXPECT_DOUBLE_EQ(extrapolate_to_gamma(single, std::vector<double>{5.0}), 5.0);
  EXPECT_THROW(extrapolate_to_gamma(k, single), InvalidArgument);
}

TEST(ZoneReference, Examples) {
  const ZoneReference a = zone_reference(0.0, 2.0);
  EXPECT_DOUBLE_EQ(a.plus_level, -1.0);
  EXPECT_DOUBLE_EQ(a.minus_level, 1.0);
  EXPECT_DOUBLE_EQ(a.pair_energy, -1.0);
  const ZoneReference b = zone_reference(4.0, 0.0);
  EXPECT_DOUBLE_EQ(b.plus_level, 2.0);
  EXPECT_DOUBLE_EQ(b.minus_level, 2.0);
  EXPECT_DOUBLE_EQ(b.pair_energy, 0.0);
}

TEST(ZoneReference, PairEnergyIsMinusHalfShift) {
  testing::Gen gen(3);
  for (int t = 0; t < 200; ++t) {
    const double e = gen.uniform(-5, 5);
    const double d = gen.uniform(-3, 3);
    const ZoneReference z = zone_reference(e, d);
    EXPECT_NEAR(z.pair_energy, -0.5 * d, 1e-14);
    EXPECT_NEAR(z.plus_level + z.minus_level, e, 1e-14);
  }
}

TEST(StrictReference, ExampleAndAffine) {
  EXPECT_DOUBLE_EQ(strict_reference(-0.5, 0.1), -0.6);
  testing::Gen gen(4);
  for (int t = 0; t < 100; ++t) {
    const double x = gen.uniform(-2, 2);
    const double d = gen.uniform(-2, 2);
    const double c = gen.uniform(-2, 2);
    EXPECT_NEAR(strict_reference(x + c, d), strict_reference(x, d) + c, 1e-14);
    EXPECT_NEAR(strict_reference(x, d + c), strict_reference(x, d) - c, 1e-14);
  }
}

TEST(Regime, Classification) {
  EXPECT_EQ(classify_regime(0.0).regime, Regime::light);
  EXPECT_FALSE(classify_regime(0.0).indeterminate);
  EXPECT_EQ(classify_regime(2.0).regime, Regime::heavy);
  EXPECT_EQ(classify_regime(1.0).regime, Regime::heavy);
  const RegimeClassification mid = classify_regime(0.4);
  EXPECT_EQ(mid.regime, Regime::light);
  EXPECT_TRUE(mid.indeterminate);
  EXPECT_TRUE(classify_regime(-0.3).indeterminate);
  EXPECT_FALSE(classify_regime(5e-7).indeterminate);
  EXPECT_EQ(to_string(Regime::heavy), "heavy");
}

TEST(Level, HeavyAndLight) {
  const std::vector<double> band = cosine_band(8);
  const QuasiparticleLevel heavy = quasiparticle_level(0, band, 2, 2.0);
  EXPECT_EQ(heavy.regime, Regime::heavy);
  EXPECT_NEAR(heavy.pair_energy, -1.0, 1e-15);
  EXPECT_NEAR(heavy.reference_epsilon0, heavy.extremum / 2 - 2.0, 1e-15);
  EXPECT_NEAR(heavy.shifted_reference, heavy.extremum / 2, 1e-15);

  const QuasiparticleLevel light = quasiparticle_level(0, band, 2, 0.0);
  EXPECT_EQ(light.regime, Regime::light);
  EXPECT_EQ(light.pair_energy, 0.0);
  EXPECT_EQ(light.plus_level, light.minus_level);

  const QuasiparticleLevel flagged = quasiparticle_level(0, band, 2, 0.05);
  EXPECT_TRUE(flagged.indeterminate);
  EXPECT_EQ(flagged.pair_energy, 0.0);
  EXPECT_EQ(flagged.delta_m0, 0.05);
}

TEST(Level, GaugeConstantShiftsPairLevelsOnly) {
  const std::vector<double> band = cosine_band(6);
  LevelOptions o;
  o.extremum = Extremum::max;
  const QuasiparticleLevel a = quasiparticle_level(1, band, 1, 3.0, o);
  o.gauge_constant = 0.4;
  const QuasiparticleLevel b = quasiparticle_level(1, band, 1, 3.0, o);
  EXPECT_NEAR(a.plus_level - b.plus_level, 0.2, 1e-15);
  EXPECT_NEAR(a.minus_level - b.minus_level, 0.2, 1e-15);
  EXPECT_EQ(a.pair_energy, b.pair_energy);
  EXPECT_EQ(a.reference_epsilon0, b.reference_epsilon0);
  EXPECT_EQ(b.offset_constant, 0.4);
}

TEST(Level, HeavyPropertyOverRandomInputs) {
  testing::Gen gen(77);
  for (int t = 0; t < 100; ++t) {
    std::vector<double> band(static_cast<std::size_t>(gen.integer(2, 12)));
    for (double& e : band) e = gen.uniform(-3, 1);
    const double d = gen.uniform(1.0, 10.0);
    const QuasiparticleLevel l = quasiparticle_level(0, band, gen.integer(1, 4), d);
    ASSERT_EQ(l.regime, Regime::heavy);
    EXPECT_LT(l.plus_level, l.minus_level);
    EXPECT_NEAR(l.pair_energy, -d / 2, 1e-12);
  }
}

class MassShiftTest : public ::testing::Test {
 protected:
  void SetUp() override {
    sys_ = std::make_unique<ModelSystem>(build_soft_coulomb_system(crystal(2)));
    run_ = band_structure(*sys_, {}, 2);
  }
  std::unique_ptr<ModelSystem> sys_;
  BandRun run_;
};

TEST_F(MassShiftTest, ZeroSelfEnergy) {
  const MassShift m = mass_shift(0, SelfEnergyModel::zero(24), run_.per_k);
  EXPECT_EQ(m.delta_m0, 0.0);
  for (double d : m.delta_mk) EXPECT_EQ(d, 0.0);
}

TEST_F(MassShiftTest, ConstantShift) {
  const MassShift m = mass_shift(0, SelfEnergyModel::scaled_identity(24, 0.3), run_.per_k);
  EXPECT_NEAR(m.delta_m0, 0.3, 1e-12);
  for (double d : m.delta_mk) EXPECT_NEAR(d, 0.0, 1e-12);
  EXPECT_EQ(m.kgrid, sys_->kgrid());
}

TEST_F(MassShiftTest, CosineDispersionIsEven) {
  const SelfEnergyModel sigma = SelfEnergyModel::scaled_identity(24, 0.2).with_dispersion(
      [](double k) { return std::cos(k); }, "cos");
  const MassShift m = mass_shift(1, sigma, run_.per_k);
  EXPECT_LE(m.evenness_error(), 1e-12);
  for (std::size_t i = 0; i < m.kgrid.size(); ++i) {
    EXPECT_NEAR(m.expectation[i], 0.2 * std::cos(m.kgrid[i]), 1e-12);
  }
  // Quadratic extrapolation of 0.2 cos k through the innermost points.
  EXPECT_NEAR(m.delta_m0, 0.2, 0.2 * std::pow(sys_->kgrid()[4], 4));
}

TEST_F(MassShiftTest, StrictReferenceMovesWithConstantShift) {
  const double c = 0.15;
  const MassShift m = mass_shift(0, SelfEnergyModel::scaled_identity(24, c), run_.per_k);
  const QuasiparticleLevel base = quasiparticle_level(0, run_.bands.bands[0], 2, 0.0);
  const QuasiparticleLevel shifted = quasiparticle_level(0, run_.bands.bands[0], 2, m.delta_m0);
  EXPECT_NEAR(shifted.reference_epsilon0 - base.reference_epsilon0, -c, 1e-12);
}

TEST_F(MassShiftTest, Rejections) {
  testing::Gen gen(5);
  ComplexMatrix bad = gen.hermitian(24);
  bad(0, 1) += 0.1;
  EXPECT_THROW(mass_shift(0, SelfEnergyModel::constant(bad), run_.per_k), InvalidArgument);
  EXPECT_THROW(mass_shift(0, SelfEnergyModel::zero(10), run_.per_k), InvalidArgument);
  EXPECT_THROW(mass_shift(99, SelfEnergyModel::zero(24), run_.per_k), InvalidArgument);
  EXPECT_THROW(mass_shift(0, SelfEnergyModel::zero(24), std::span<const SCFResult>{}), InvalidArgument);
}

}  // namespace
}  // namespace qpw
