#include "qpw/model_system.hpp"

#include <cmath>
#include <cstdio>
#include <set>

#include <nlohmann/json.hpp>

namespace qpw {

std::string to_string(Boundary b) { return b == Boundary::box ? "box" : "periodic"; }

Boundary boundary_from_string(const std::string& s) {
  if (s == "box") return Boundary::box;
  if (s == "periodic") return Boundary::periodic;
  throw InvalidArgument("boundary must be \"box\" or \"periodic\", got \"" + s + "\"");
}

Grid::Grid(Index count, double spacing) : spacing_(spacing) {
  if (count < 1) throw InvalidArgument("grid needs at least one point");
  if (!(spacing > 0.0) || !std::isfinite(spacing)) {
    throw InvalidArgument("grid spacing must be positive and finite");
  }
  points_.resize(static_cast<std::size_t>(count));
  const double centre = 0.5 * static_cast<double>(count - 1);
  for (Index i = 0; i < count; ++i) {
    points_[static_cast<std::size_t>(i)] = (static_cast<double>(i) - centre) * spacing;
  }
}

void to_json(nlohmann::json& j, const SystemSpec& spec) {
  j = nlohmann::json{{"grid_points", spec.grid_points},
                     {"spacing", spec.spacing},
                     {"well_depth", spec.well_depth},
                     {"well_softening", spec.well_softening},
                     {"softening", spec.softening},
                     {"interaction_strength", spec.interaction_strength},
                     {"electrons", spec.electrons},
                     {"boundary", to_string(spec.boundary)},
                     {"k_points", spec.k_points}};
}

void from_json(const nlohmann::json& j, SystemSpec& spec) {
  if (!j.is_object()) throw InvalidArgument("system: expected an object");
  static const std::set<std::string> known = {
      "grid_points", "spacing",   "well_depth", "well_softening", "softening",
      "interaction_strength", "electrons", "boundary", "k_points"};
  for (const auto& [key, value] : j.items()) {
    if (!known.contains(key)) throw InvalidArgument("system." + key + ": unknown key");
  }
  auto read = [&](const char* key, auto& field) {
    if (!j.contains(key)) return;
    try {
      j.at(key).get_to(field);
    } catch (const nlohmann::json::exception&) {
      throw InvalidArgument(std::string("system.") + key + ": wrong type");
    }
  };
  SystemSpec out;
  read("grid_points", out.grid_points);
  read("spacing", out.spacing);
  read("well_depth", out.well_depth);
  read("well_softening", out.well_softening);
  read("softening", out.softening);
  read("interaction_strength", out.interaction_strength);
  read("electrons", out.electrons);
  read("k_points", out.k_points);
  if (j.contains("boundary")) {
    if (!j.at("boundary").is_string()) throw InvalidArgument("system.boundary: wrong type");
    try {
      out.boundary = boundary_from_string(j.at("boundary").get<std::string>());
    } catch (const InvalidArgument& e) {
      throw InvalidArgument(std::string("system.boundary: ") + e.what());
    }
  }
  if (out.grid_points < 8) throw InvalidArgument("system.grid_points: need at least 8 points");
  if (!(out.spacing > 0.0)) throw InvalidArgument("system.spacing: must be > 0");
  if (!(out.softening > 0.0)) throw InvalidArgument("system.softening: must be > 0");
  if (!(out.well_softening > 0.0)) throw InvalidArgument("system.well_softening: must be > 0");
  if (out.electrons < 1) throw InvalidArgument("system.electrons: must be >= 1");
  if (out.k_points < 1) throw InvalidArgument("system.k_points: must be >= 1");
  spec = out;
}

double minimum_image(double dx, double period) { return dx - period * std::round(dx / period); }

std::vector<double> monkhorst_pack(Index count, double period) {
  if (count < 1) throw InvalidArgument("k-grid needs at least one point");
  std::vector<double> ks(static_cast<std::size_t>(count));
  const double cell = 2.0 * kPi / period;
  for (Index j = 0; j < count; ++j) {
    const auto num = static_cast<double>(2 * j - count + 1);
    ks[static_cast<std::size_t>(j)] = cell * num / (2.0 * static_cast<double>(count));
  }
  return ks;
}

RealMatrix laplacian_matrix(const Grid& grid, Boundary boundary) {
  const Index n = grid.size();
  const double inv_h2 = 1.0 / (grid.spacing() * grid.spacing());
  RealMatrix lap = RealMatrix::Zero(n, n);
  for (Index i = 0; i < n; ++i) {
    lap(i, i) = -2.0 * inv_h2;
    if (i + 1 < n) {
      lap(i, i + 1) = inv_h2;
      lap(i + 1, i) = inv_h2;
    }
  }
  if (boundary == Boundary::periodic && n > 2) {
    lap(0, n - 1) += inv_h2;
    lap(n - 1, 0) += inv_h2;
  }
  return lap;
}

ComplexMatrix bloch_laplacian(const Grid& grid, double k) {
  const Index n = grid.size();
  if (n < 3) throw InvalidArgument("Bloch Laplacian needs at least 3 points");
  ComplexMatrix lap = laplacian_matrix(grid, Boundary::box).cast<Complex>();
  const double inv_h2 = 1.0 / (grid.spacing() * grid.spacing());
  const Complex twist = std::polar(1.0, k * grid.length());
  // psi(x_n) = e^{ikL} psi(x_0), psi(x_{-1}) = e^{-ikL} psi(x_{n-1}).
  lap(n - 1, 0) += inv_h2 * twist;
  lap(0, n - 1) += inv_h2 * std::conj(twist);
  return lap;
}

ModelSystem::ModelSystem(SystemSpec spec, Grid grid) : spec_(spec), grid_(std::move(grid)) {}

double ModelSystem::potential_at(double x) const {
  const double d = spec_.boundary == Boundary::periodic ? minimum_image(x, grid_.length()) : x;
  return -spec_.well_depth / std::sqrt(d * d + spec_.well_softening * spec_.well_softening);
}

ComplexMatrix ModelSystem::h_core(double k) const {
  ComplexMatrix h;
  if (spec_.boundary == Boundary::periodic) {
    h = -0.5 * bloch_laplacian(grid_, k);
  } else {
    if (k != 0.0) throw InvalidArgument("box systems have no crystal momentum");
    h = (-0.5 * laplacian_matrix(grid_, Boundary::box)).cast<Complex>();
  }
  h.diagonal() += potential_.cast<Complex>();
  return h;
}

std::uint64_t fnv1a(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hex_digest(std::uint64_t h) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string ModelSystem::hash() const {
  nlohmann::json j = spec_;
  return hex_digest(fnv1a(j.dump()));
}

nlohmann::json ModelSystem::snapshot() const {
  nlohmann::json j;
  j["format"] = "qpw.model_system";
  j["format_version"] = 1;
  j["hash"] = hash();
  j["spec"] = spec_;
  j["points"] = grid_.points();
  j["external_potential"] = std::vector<double>(potential_.data(), potential_.data() + potential_.size());
  j["kgrid"] = kgrid_;
  auto kernel = nlohmann::json::array();
  for (Index i = 0; i < kernel_.rows(); ++i) {
    std::vector<double> row(static_cast<std::size_t>(kernel_.cols()));
    for (Index c = 0; c < kernel_.cols(); ++c) row[static_cast<std::size_t>(c)] = kernel_(i, c);
    kernel.push_back(std::move(row));
  }
  j["interaction_kernel"] = std::move(kernel);
  return j;
}

ModelSystem build_soft_coulomb_system(const SystemSpec& spec) {
  if (!(spec.softening > 0.0)) {
    throw InvalidArgument("softening must be > 0 (the bare Coulomb kernel is singular on a grid)");
  }
  if (spec.grid_points < 8) throw InvalidArgument("grid needs at least 8 points");
  if (!(spec.well_softening > 0.0)) throw InvalidArgument("well softening must be > 0");
  if (spec.electrons < 1) throw InvalidArgument("electron count must be >= 1");
  if (spec.boundary == Boundary::periodic && spec.k_points < 1) {
    throw InvalidArgument("periodic systems need at least one k-point");
  }

  ModelSystem sys(spec, Grid(spec.grid_points, spec.spacing));
  const Grid& g = sys.grid_;
  const Index n = g.size();
  const bool periodic = spec.boundary == Boundary::periodic;
  const double period = g.length();

  sys.potential_.resize(n);
  for (Index i = 0; i < n; ++i) sys.potential_(i) = sys.potential_at(g.point(i));

  sys.kernel_.resize(n, n);
  const double s2 = spec.softening * spec.softening;
  for (Index i = 0; i < n; ++i) {
    for (Index j = i; j < n; ++j) {
      double dx = g.point(i) - g.point(j);
      if (periodic) dx = minimum_image(dx, period);
      const double v = spec.interaction_strength / std::sqrt(dx * dx + s2);
      sys.kernel_(i, j) = v;
      sys.kernel_(j, i) = v;
    }
  }

  if (periodic) sys.kgrid_ = monkhorst_pack(spec.k_points, period);
  return sys;
}

}  // namespace qpw
