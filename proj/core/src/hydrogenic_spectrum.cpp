#include "qpw/hydrogenic_spectrum.hpp"

#include <cmath>
#include <cstdlib>
#include <string>

namespace qpw {

double boson_energy(const BosonSpectrumParams& p) {
  if (p.k == 0) throw InvalidArgument("boson_energy: k must be nonzero");
  if (p.n < 1) throw InvalidArgument("boson_energy: n must be >= 1");
  if (!(p.mass > 0.0)) throw InvalidArgument("boson_energy: mass must be > 0");
  if (!(p.gamma >= 0.0 && p.gamma < 1.0)) throw InvalidArgument("boson_energy: gamma must lie in [0, 1)");

  const double m = p.mass;
  const double n = p.n;
  const double ak = std::abs(p.k);
  const double k2 = static_cast<double>(p.k) * static_cast<double>(p.k);
  const double g2 = p.gamma * p.gamma;
  const double g4 = g2 * g2;
  const double g6 = g4 * g2;

  const double t0 = m / 2.0;
  const double t2 = m * g2 / (2.0 * n * n);
  const double t4 = m * g4 / (8.0 * n * n * n) * (4.0 / ak - 3.0 / n);
  const double t6 = m * g6 / (8.0 * n * n * n * n) * (3.0 / (n * n) - 8.0 / (n * ak) + 4.0 / k2);
  return t0 - t2 - t4 - t6;
}

double mass_operator_limit(double mass, double gamma, int k, std::span<const int> n_sequence) {
  if (n_sequence.size() < 3) throw InvalidArgument("mass_operator_limit needs at least three n values");
  for (std::size_t i = 1; i < n_sequence.size(); ++i) {
    if (n_sequence[i] <= n_sequence[i - 1]) throw InvalidArgument("n sequence must be strictly increasing");
  }
  if (n_sequence.front() < 1) throw InvalidArgument("n values must be >= 1");

  // Quadratic in h = 1/n^2 through the three largest n, evaluated at h = 0.
  const std::size_t last = n_sequence.size() - 1;
  double h[3];
  double f[3];
  for (std::size_t i = 0; i < 3; ++i) {
    const int n = n_sequence[last - 2 + i];
    h[i] = 1.0 / (static_cast<double>(n) * static_cast<double>(n));
    f[i] = 2.0 * boson_energy({mass, gamma, n, k});
  }
  double limit = 0.0;
  for (int i = 0; i < 3; ++i) {
    double w = 1.0;
    for (int j = 0; j < 3; ++j) {
      if (j != i) w *= (0.0 - h[j]) / (h[i] - h[j]);
    }
    limit += w * f[i];
  }
  return limit;
}

double truncation_exponent(double mass, int n, int k, std::span<const double> gammas) {
  if (gammas.size() < 2) throw InvalidArgument("exponent fit needs at least two couplings");
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (double g : gammas) {
    if (!(g > 0.0)) throw InvalidArgument("exponent fit needs couplings > 0");
    const double nn = static_cast<double>(n) * n;
    const double rest = boson_energy({mass, g, n, k}) - (mass / 2.0 - mass * g * g / (2.0 * nn));
    if (rest == 0.0) throw ComputationError("residual vanished; exponent undefined");
    const double x = std::log(g);
    const double y = std::log(std::abs(rest));
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double m = static_cast<double>(gammas.size());
  const double denom = m * sxx - sx * sx;
  if (denom == 0.0) throw InvalidArgument("exponent fit needs distinct couplings");
  return (m * sxy - sx * sy) / denom;
}

HydrogenicLevel hydrogenic_level(int n, double z) {
  if (n < 1) throw InvalidArgument("principal quantum number must be >= 1");
  if (!(z > 0.0)) throw InvalidArgument("nuclear charge must be > 0");
  HydrogenicLevel level;
  level.n = n;
  level.energy = -z * z / (2.0 * n * n);
  level.degeneracy = n * n;
  return level;
}

HydrogenicBasis hydrogenic_basis(int n_max, double z, const Grid& grid, double softening) {
  if (n_max < 1) throw InvalidArgument("n_max must be >= 1");
  if (!(z > 0.0)) throw InvalidArgument("nuclear charge must be > 0");
  if (!(softening > 0.0)) throw InvalidArgument("softening must be > 0");
  const double required = 0.2 / z;
  if (grid.spacing() > required) {
    throw InvalidArgument("grid spacing " + std::to_string(grid.spacing()) + " does not resolve Z = " +
                          std::to_string(z) + "; need spacing <= " + std::to_string(required));
  }
  if (n_max > grid.size()) throw InvalidArgument("more levels requested than grid points");

  RealMatrix h = -0.5 * laplacian_matrix(grid, Boundary::box);
  for (Index i = 0; i < grid.size(); ++i) {
    const double x = grid.point(i);
    h(i, i) += -z / std::sqrt(x * x + softening * softening);
  }
  Eigen::SelfAdjointEigenSolver<RealMatrix> solver(h);
  if (solver.info() != Eigen::Success) throw ComputationError("hydrogenic eigensolve failed");
  if (solver.eigenvalues()(n_max - 1) >= 0.0) {
    throw InvalidArgument("grid binds fewer than " + std::to_string(n_max) + " levels");
  }

  HydrogenicBasis basis;
  basis.functions = solver.eigenvectors().leftCols(n_max).cast<Complex>();
  for (int n = 1; n <= n_max; ++n) {
    auto col = basis.functions.col(n - 1);
    Index best = 0;
    for (Index r = 1; r < col.size(); ++r) {
      if (std::abs(col(r)) > std::abs(col(best)) + 1e-12) best = r;
    }
    if (col(best).real() < 0.0) col *= -1.0;
    HydrogenicLevel level = hydrogenic_level(n, z);
    level.model_energy = solver.eigenvalues()(n - 1);
    basis.levels.push_back(level);
  }
  return basis;
}

}  // namespace qpw
