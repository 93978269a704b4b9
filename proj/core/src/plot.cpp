#include "qpw/plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace qpw {

namespace {

constexpr double kWidth = 640.0;
constexpr double kHeight = 420.0;
constexpr double kLeft = 70.0;
constexpr double kRight = 20.0;
constexpr double kTop = 20.0;
constexpr double kBottom = 50.0;

const char* const kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};

struct Frame {
  double x0, x1, y0, y1;

  double px(double x) const { return kLeft + (x - x0) / (x1 - x0) * (kWidth - kLeft - kRight); }
  double py(double y) const { return kHeight - kBottom - (y - y0) / (y1 - y0) * (kHeight - kTop - kBottom); }
};

Frame make_frame(double x0, double x1, double y0, double y1) {
  if (!(x1 > x0)) {
    x0 -= 0.5;
    x1 += 0.5;
  }
  if (!(y1 > y0)) {
    y0 -= 0.5;
    y1 += 0.5;
  }
  const double pad = 0.05 * (y1 - y0);
  return {x0, x1, y0 - pad, y1 + pad};
}

std::string num(double v) {
  std::ostringstream s;
  s.setf(std::ios::fixed);
  s.precision(2);
  s << v;
  return s.str();
}

std::string tick(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", std::abs(v) < 1e-12 ? 0.0 : v);
  return buf;
}

void open_svg(std::ostringstream& out, const ArtifactMeta& meta) {
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
      << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\">\n"
      << "<!-- qpw " << meta.version << " config=" << meta.config_hash << " -->\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
}

void axes(std::ostringstream& out, const Frame& f, const std::string& x_label, const std::string& y_label) {
  const double xa = kLeft;
  const double xb = kWidth - kRight;
  const double ya = kHeight - kBottom;
  const double yb = kTop;
  out << "<g class=\"axes\" stroke=\"black\" stroke-width=\"1\">\n"
      << "<line x1=\"" << xa << "\" y1=\"" << ya << "\" x2=\"" << xb << "\" y2=\"" << ya << "\"/>\n"
      << "<line x1=\"" << xa << "\" y1=\"" << ya << "\" x2=\"" << xa << "\" y2=\"" << yb << "\"/>\n"
      << "</g>\n";
  out << "<g class=\"ticks\" font-family=\"sans-serif\" font-size=\"11\">\n";
  for (int i = 0; i <= 4; ++i) {
    const double t = i / 4.0;
    const double xv = f.x0 + t * (f.x1 - f.x0);
    const double yv = f.y0 + t * (f.y1 - f.y0);
    out << "<text x=\"" << num(f.px(xv)) << "\" y=\"" << num(ya + 16) << "\" text-anchor=\"middle\">"
        << tick(xv) << "</text>\n";
    out << "<text x=\"" << num(xa - 6) << "\" y=\"" << num(f.py(yv) + 4) << "\" text-anchor=\"end\">"
        << tick(yv) << "</text>\n";
  }
  out << "</g>\n";
  out << "<text class=\"xlabel\" x=\"" << num((xa + xb) / 2) << "\" y=\"" << num(kHeight - 10)
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">" << x_label << "</text>\n";
  out << "<text class=\"ylabel\" x=\"16\" y=\"" << num((ya + yb) / 2) << "\" transform=\"rotate(-90 16 "
      << num((ya + yb) / 2) << ")\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">" << y_label
      << "</text>\n";
}

void polyline(std::ostringstream& out, const Frame& f, std::span<const double> x, std::span<const double> y,
              const char* cls, std::size_t colour) {
  out << "<polyline class=\"" << cls << "\" fill=\"none\" stroke=\"" << kPalette[colour % std::size(kPalette)]
      << "\" stroke-width=\"1.5\" points=\"";
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (i) out << ' ';
    out << num(f.px(x[i])) << ',' << num(f.py(y[i]));
  }
  out << "\"/>\n";
}

void hline(std::ostringstream& out, const Frame& f, double y, const char* cls, const std::string& title) {
  out << "<line class=\"" << cls << "\" x1=\"" << num(kLeft) << "\" y1=\"" << num(f.py(y)) << "\" x2=\""
      << num(kWidth - kRight) << "\" y2=\"" << num(f.py(y))
      << "\" stroke=\"gray\" stroke-width=\"1\" stroke-dasharray=\"6 4\"><title>" << title << "</title></line>\n";
}

}  // namespace

std::string render_band_plot(const BandStructure& bands, std::span<const QuasiparticleLevel> levels,
                             const ArtifactMeta& meta) {
  if (bands.bands.empty() || bands.kgrid.empty()) throw InvalidArgument("band plot: empty band structure");
  for (Index n = 0; n < bands.band_count(); ++n) {
    if (bands.bands[static_cast<std::size_t>(n)].size() != bands.kgrid.size()) {
      throw InvalidArgument("band plot: band " + std::to_string(n) + " does not match the k grid");
    }
    if (!bands.band_converged(n)) throw InvalidArgument("band plot: band " + std::to_string(n) + " is unconverged");
  }

  double lo = bands.bands.front().front();
  double hi = lo;
  for (const auto& b : bands.bands) {
    lo = std::min(lo, *std::min_element(b.begin(), b.end()));
    hi = std::max(hi, *std::max_element(b.begin(), b.end()));
  }
  for (const auto& l : levels) {
    lo = std::min({lo, l.plus_level, l.minus_level});
    hi = std::max({hi, l.plus_level, l.minus_level});
  }
  const auto [kmin, kmax] = std::minmax_element(bands.kgrid.begin(), bands.kgrid.end());
  const Frame f = make_frame(*kmin, *kmax, lo, hi);

  std::ostringstream out;
  open_svg(out, meta);
  axes(out, f, "k (1/bohr)", "energy (hartree)");
  for (std::size_t n = 0; n < bands.bands.size(); ++n) {
    polyline(out, f, bands.kgrid, bands.bands[n], "band", n);
  }
  for (const auto& l : levels) {
    const std::string tag = "band " + std::to_string(l.band);
    hline(out, f, l.plus_level, "reference", tag + " epsilon(0)+ = " + format_double(l.plus_level));
    if (std::abs(l.plus_level - l.minus_level) > 1e-12) {
      hline(out, f, l.minus_level, "gap", tag + " epsilon(0)- = " + format_double(l.minus_level));
    }
  }
  out << "</svg>\n";
  return out.str();
}

void emit_band_plot(const BandStructure& bands, std::span<const QuasiparticleLevel> levels,
                    const std::filesystem::path& path, const ArtifactMeta& meta) {
  write_text(path, render_band_plot(bands, levels, meta));
}

std::string render_line_plot(std::span<const double> x, std::span<const Series> series, const std::string& x_label,
                             const std::string& y_label, const ArtifactMeta& meta) {
  if (x.empty() || series.empty()) throw InvalidArgument("line plot: no data");
  double lo = series.front().y.empty() ? 0.0 : series.front().y.front();
  double hi = lo;
  for (const auto& s : series) {
    if (s.y.size() != x.size()) throw InvalidArgument("line plot: series \"" + s.name + "\" has the wrong length");
    for (double v : s.y) {
      if (std::isfinite(v)) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
      }
    }
  }
  const auto [xmin, xmax] = std::minmax_element(x.begin(), x.end());
  const Frame f = make_frame(*xmin, *xmax, lo, hi);

  std::ostringstream out;
  open_svg(out, meta);
  axes(out, f, x_label, y_label);
  for (std::size_t i = 0; i < series.size(); ++i) {
    polyline(out, f, x, series[i].y, "series", i);
    out << "<text x=\"" << num(kWidth - kRight - 4) << "\" y=\"" << num(kTop + 14 + 14 * static_cast<double>(i))
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\" fill=\""
        << kPalette[i % std::size(kPalette)] << "\">" << series[i].name << "</text>\n";
  }
  out << "</svg>\n";
  return out.str();
}

}  // namespace qpw
