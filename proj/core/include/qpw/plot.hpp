#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "qpw/hartree_fock.hpp"
#include "qpw/quasiparticle.hpp"
#include "qpw/records.hpp"

namespace qpw {

/// SVG band plot: one polyline per band over k, plus one dashed horizontal per
/// reference level at epsilon(0)+ and a second one at epsilon(0)- when the
/// two differ. Rejects empty or unconverged band structures.
std::string render_band_plot(const BandStructure& bands, std::span<const QuasiparticleLevel> levels,
                             const ArtifactMeta& meta);
void emit_band_plot(const BandStructure& bands, std::span<const QuasiparticleLevel> levels,
                    const std::filesystem::path& path, const ArtifactMeta& meta);

struct Series {
  std::string name;
  std::vector<double> y;
};

/// SVG line chart of several series over a shared x axis.
std::string render_line_plot(std::span<const double> x, std::span<const Series> series, const std::string& x_label,
                             const std::string& y_label, const ArtifactMeta& meta);

}  // namespace qpw
