#pragma once

#include <span>
#include <string>
#include <vector>

#include "qpw/hartree_fock.hpp"
#include "qpw/self_energy.hpp"
#include "qpw/types.hpp"

namespace qpw {

enum class Extremum { min, max };
enum class Regime { light, heavy };

std::string to_string(Extremum e);
std::string to_string(Regime r);
Extremum extremum_from_string(const std::string& s);

/// Band reference point Extr E_n(k) / N over the sampled k values.
double reference_point(std::span<const double> samples, int electrons, Extremum kind);

/// Same, for band `band` of a band structure; rejects unconverged bands.
double reference_point(const BandStructure& bands, Index band, int electrons, Extremum kind);

/// Diagonal mass operator Delta M_n(0) + Delta M_n(k) of one band.
struct MassShift {
  Index band = 0;
  std::vector<double> kgrid;
  /// <psi_n(k)| Sigma^c(k) |psi_n(k)> per k.
  std::vector<double> expectation;
  /// Delta M_n(0): quadratic extrapolation to k = 0 through the three
  /// k points nearest the origin (exact when k = 0 is on the grid).
  double delta_m0 = 0.0;
  /// Delta M_n(k) = expectation(k) - delta_m0.
  std::vector<double> delta_mk;

  /// max_k |delta_mk(k) - delta_mk(-k)|.
  double evenness_error() const;
};

/// Evaluates the mass operator of `band` from per-k Hartree-Fock orbitals.
/// Rejects non-Hermitian kernels.
MassShift mass_shift(Index band, const SelfEnergyModel& sigma_c, std::span<const SCFResult> per_k);

/// Lagrange extrapolation to k = 0 through the (up to) three samples with the
/// smallest |k|; ties are resolved by grid order.
double extrapolate_to_gamma(std::span<const double> kgrid, std::span<const double> values);

struct ZoneReference {
  double plus_level = 0.0;   ///< epsilon(0)^+ = (Extr E~ - Delta M(0)) / 2
  double minus_level = 0.0;  ///< epsilon(0)^- = (Extr E~ + Delta M(0)) / 2
  double pair_energy = 0.0;  ///< a_n = (epsilon^+ - epsilon^-) / 2
};

ZoneReference zone_reference(double extr_tilde, double delta_m0);

/// epsilon_n(0) = Extr E_n / N - Delta M_n(0).
double strict_reference(double extr_over_n, double delta_m0);

struct RegimeClassification {
  Regime regime = Regime::light;
  /// Set when |Delta M| is neither below the light tolerance nor >= threshold;
  /// such values are reported as light with this flag raised.
  bool indeterminate = false;
};

inline constexpr double kLightTolerance = 1e-6;

RegimeClassification classify_regime(double delta_m0, double threshold = 1.0,
                                     double light_tolerance = kLightTolerance);

struct QuasiparticleLevel {
  Index band = 0;
  Extremum extremum_kind = Extremum::min;
  double extremum = 0.0;            ///< Extr E_n(k)
  double band_midpoint = 0.0;       ///< (min + max) / 2, reported alongside Extr
  double delta_m0 = 0.0;
  double reference_epsilon0 = 0.0;  ///< epsilon_n(0) = Extr/N - Delta M(0)
  double shifted_reference = 0.0;   ///< epsilon_n(0) + Delta M(0)
  double offset_constant = 0.0;     ///< gauge C; Extr E~ = Extr E - C
  double plus_level = 0.0;
  double minus_level = 0.0;
  double pair_energy = 0.0;
  Regime regime = Regime::light;
  bool indeterminate = false;
};

struct LevelOptions {
  Extremum extremum = Extremum::min;
  double gauge_constant = 0.0;
  double regime_threshold = 1.0;
};

/// Assembles the reference points of one band. In the light regime, including
/// indeterminate values reported as light, the pair levels are taken in the
/// Delta M -> 0 limit, so the pair energy is zero; delta_m0 and the strict
/// reference keep the actual shift.
QuasiparticleLevel quasiparticle_level(Index band, std::span<const double> samples, int electrons,
                                       double delta_m0, const LevelOptions& options = {});

}  // namespace qpw
