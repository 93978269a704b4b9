#include "qpw/quasiparticle.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace qpw {

std::string to_string(Extremum e) { return e == Extremum::min ? "min" : "max"; }
std::string to_string(Regime r) { return r == Regime::light ? "light" : "heavy"; }

Extremum extremum_from_string(const std::string& s) {
  if (s == "min") return Extremum::min;
  if (s == "max") return Extremum::max;
  throw InvalidArgument("extremum must be \"min\" or \"max\", got \"" + s + "\"");
}

double reference_point(std::span<const double> samples, int electrons, Extremum kind) {
  if (samples.empty()) throw InvalidArgument("reference point of an empty band");
  if (electrons < 1) throw InvalidArgument("electron count must be >= 1");
  const auto [lo, hi] = std::minmax_element(samples.begin(), samples.end());
  const double extr = kind == Extremum::min ? *lo : *hi;
  return extr / electrons;
}

double reference_point(const BandStructure& bands, Index band, int electrons, Extremum kind) {
  if (band < 0 || band >= bands.band_count()) throw InvalidArgument("band index out of range");
  if (!bands.band_converged(band)) throw InvalidArgument("band " + std::to_string(band) + " is unconverged");
  return reference_point(bands.bands[static_cast<std::size_t>(band)], electrons, kind);
}

double extrapolate_to_gamma(std::span<const double> kgrid, std::span<const double> values) {
  if (kgrid.empty() || kgrid.size() != values.size()) {
    throw InvalidArgument("extrapolation needs matching, non-empty k and value lists");
  }
  std::vector<std::size_t> order(kgrid.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return std::abs(kgrid[a]) < std::abs(kgrid[b]); });
  const std::size_t use = std::min<std::size_t>(3, order.size());
  double result = 0.0;
  for (std::size_t i = 0; i < use; ++i) {
    const double ki = kgrid[order[i]];
    double weight = 1.0;
    for (std::size_t j = 0; j < use; ++j) {
      if (j == i) continue;
      const double kj = kgrid[order[j]];
      weight *= (0.0 - kj) / (ki - kj);
    }
    result += weight * values[order[i]];
  }
  return result;
}

double MassShift::evenness_error() const {
  double worst = 0.0;
  for (std::size_t ik = 0; ik < kgrid.size(); ++ik) {
    const Index jk = mirror_index(kgrid, static_cast<Index>(ik));
    if (jk < 0) return std::numeric_limits<double>::infinity();
    worst = std::max(worst, std::abs(delta_mk[ik] - delta_mk[static_cast<std::size_t>(jk)]));
  }
  return worst;
}

MassShift mass_shift(Index band, const SelfEnergyModel& sigma_c, std::span<const SCFResult> per_k) {
  if (per_k.empty()) throw InvalidArgument("mass shift needs at least one k-point");
  MassShift shift;
  shift.band = band;
  for (const SCFResult& r : per_k) {
    if (band < 0 || band >= r.orbitals.cols()) throw InvalidArgument("band index out of range");
    const ComplexMatrix kernel = sigma_c.at_momentum(r.momentum);
    if (kernel.rows() != r.orbitals.rows()) {
      throw InvalidArgument("self-energy dimension does not match the orbital grid");
    }
    if (hermiticity_error(kernel) > 1e-12) {
      throw InvalidArgument("self-energy kernel at k = " + std::to_string(r.momentum) +
                            " is not Hermitian (unphysical)");
    }
    const ComplexVector psi = r.orbitals.col(band);
    shift.kgrid.push_back(r.momentum);
    shift.expectation.push_back(psi.dot(kernel * psi).real());
  }
  shift.delta_m0 = extrapolate_to_gamma(shift.kgrid, shift.expectation);
  for (double e : shift.expectation) shift.delta_mk.push_back(e - shift.delta_m0);
  return shift;
}

ZoneReference zone_reference(double extr_tilde, double delta_m0) {
  ZoneReference z;
  z.plus_level = (extr_tilde - delta_m0) / 2.0;
  z.minus_level = (extr_tilde + delta_m0) / 2.0;
  z.pair_energy = (z.plus_level - z.minus_level) / 2.0;
  return z;
}

double strict_reference(double extr_over_n, double delta_m0) { return extr_over_n - delta_m0; }

RegimeClassification classify_regime(double delta_m0, double threshold, double light_tolerance) {
  if (delta_m0 >= threshold) return {Regime::heavy, false};
  if (std::abs(delta_m0) < light_tolerance) return {Regime::light, false};
  return {Regime::light, true};
}

QuasiparticleLevel quasiparticle_level(Index band, std::span<const double> samples, int electrons,
                                       double delta_m0, const LevelOptions& options) {
  QuasiparticleLevel level;
  level.band = band;
  level.extremum_kind = options.extremum;
  level.extremum = reference_point(samples, 1, options.extremum);
  const auto [lo, hi] = std::minmax_element(samples.begin(), samples.end());
  level.band_midpoint = 0.5 * (*lo + *hi);
  level.delta_m0 = delta_m0;
  level.reference_epsilon0 = strict_reference(level.extremum / electrons, delta_m0);
  level.shifted_reference = level.reference_epsilon0 + delta_m0;
  level.offset_constant = options.gauge_constant;

  const RegimeClassification cls = classify_regime(delta_m0, options.regime_threshold);
  level.regime = cls.regime;
  level.indeterminate = cls.indeterminate;

  // Light levels (flagged or not) take the pair levels at Delta M -> 0.
  const bool light = cls.regime == Regime::light;
  const ZoneReference z = zone_reference(level.extremum - options.gauge_constant, light ? 0.0 : delta_m0);
  level.plus_level = z.plus_level;
  level.minus_level = z.minus_level;
  level.pair_energy = z.pair_energy;
  return level;
}

}  // namespace qpw
