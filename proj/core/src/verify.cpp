#include "qpw/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iterator>
#include <random>
#include <sstream>

#include "qpw/config.hpp"
#include "qpw/green_dyson.hpp"
#include "qpw/hydrogenic_spectrum.hpp"
#include "qpw/many_body_oracle.hpp"
#include "qpw/pipeline.hpp"
#include "qpw/quasiparticle.hpp"
#include "qpw/records.hpp"

namespace qpw {

namespace {

Check make(std::string name, double value, double tolerance, bool passed, std::string detail = {}) {
  Check c;
  c.name = std::move(name);
  c.value = value;
  c.tolerance = tolerance;
  c.passed = passed;
  c.detail = std::move(detail);
  return c;
}

SystemSpec crystal_spec() {
  SystemSpec s;
  s.boundary = Boundary::periodic;
  s.electrons = 2;
  s.k_points = 8;
  return s;
}

SystemSpec random_well(std::mt19937_64& rng, Index points, int electrons) {
  std::uniform_real_distribution<double> depth(1.0, 3.0), soft(0.6, 1.5), spacing(0.2, 0.4), width(0.7, 1.5);
  SystemSpec s;
  s.grid_points = points;
  s.spacing = spacing(rng);
  s.well_depth = depth(rng);
  s.well_softening = width(rng);
  s.softening = soft(rng);
  s.electrons = electrons;
  return s;
}

double lowest_bare(const ModelSystem& sys, double k) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(sys.h_core(k), Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

// Criterion 1.
Check density_normalization() {
  double worst = 0.0;
  for (int n_el = 1; n_el <= 4; ++n_el) {
    SystemSpec spec;
    spec.grid_points = 16;
    spec.spacing = 0.4;
    spec.electrons = n_el;
    const ModelSystem sys = build_soft_coulomb_system(spec);
    CiOptions opts;
    opts.orbital_cutoff = 6;
    const CiResult ci = full_ci_ground_state(sys, opts);
    for (int order = 1; order <= n_el; ++order) {
      const DensityMatrix rho = exact_reduced_density_matrix(ci.state, order);
      worst = std::max(worst, std::abs(rho.trace() - rho.normalization_target()) / rho.normalization_target());
    }
  }
  return make("density-matrix normalization Sp rho_n = N!/(N-n)!", worst, 1e-10, worst <= 1e-10,
              "max relative error over N=1..4, n<=N, 16-point grid");
}

// Criterion 2.
Check energy_functional(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  double worst = 0.0;
  for (int trial = 0; trial < 5; ++trial) {
    const ModelSystem sys = build_soft_coulomb_system(random_well(rng, 24, 2));
    CiOptions opts;
    opts.orbital_cutoff = 8;
    const CiResult ci = full_ci_ground_state(sys, opts);
    const DensityMatrix r1 = exact_reduced_density_matrix(ci.state, 1);
    const DensityMatrix r2 = exact_reduced_density_matrix(ci.state, 2);
    const double e = energy_from_density_matrices(r1, r2, sys.h_core(0.0), sys.interaction_kernel());
    worst = std::max(worst, std::abs(e - ci.energy));
  }
  return make("energy functional Sp h rho1 + 1/2 Sp v rho2 equals CI energy", worst, 1e-10, worst <= 1e-10,
              "5 randomized N=2 wells");
}

// Criterion 3.
Check self_action(std::uint64_t seed) {
  std::mt19937_64 rng(seed + 1);
  std::vector<std::pair<SystemSpec, double>> fixtures;
  SystemSpec box;
  box.electrons = 1;
  fixtures.emplace_back(box, 0.0);
  for (int i = 0; i < 3; ++i) fixtures.emplace_back(random_well(rng, 32, 1), 0.0);
  SystemSpec cell = crystal_spec();
  cell.electrons = 1;
  const ModelSystem probe = build_soft_coulomb_system(cell);
  fixtures.emplace_back(cell, probe.kgrid().front());
  fixtures.emplace_back(cell, probe.kgrid()[probe.kgrid().size() / 2]);

  double worst = 0.0;
  for (const auto& [spec, k] : fixtures) {
    const ModelSystem sys = build_soft_coulomb_system(spec);
    const SCFResult r = scf_solve(sys, k);
    if (!r.converged) return make("N=1 SCF eigenvalue equals bare h_core ground level", INFINITY, 1e-12, false, r.message);
    worst = std::max(worst, std::abs(r.eigenvalues(0) - lowest_bare(sys, k)));
  }
  return make("N=1 SCF eigenvalue equals bare h_core ground level", worst, 1e-12, worst <= 1e-12,
              std::to_string(fixtures.size()) + " systems (box and periodic)");
}

// Criterion 4.
Check band_symmetry(unsigned threads) {
  const ModelSystem sys = build_soft_coulomb_system(crystal_spec());
  const BandRun run = band_structure(sys, {}, 4, threads);
  double worst = 0.0;
  Index converged = 0;
  for (Index n = 0; n < run.bands.band_count(); ++n) {
    if (!run.bands.band_converged(n)) continue;
    ++converged;
    worst = std::max(worst, run.bands.symmetry_error(n));
  }
  return make("band symmetry eps_n(k) = eps_n(-k)", worst, 1e-8, converged > 0 && worst <= 1e-8,
              std::to_string(converged) + " converged bands, 8 k-points");
}

// Criterion 5.
Check variational_ordering(std::uint64_t seed) {
  std::mt19937_64 rng(seed + 2);
  std::vector<SystemSpec> fixtures{SystemSpec{}};
  for (int i = 0; i < 3; ++i) fixtures.push_back(random_well(rng, 48, 2));
  double min_slack = INFINITY;
  double default_ratio = 0.0;
  for (std::size_t i = 0; i < fixtures.size(); ++i) {
    const ModelSystem sys = build_soft_coulomb_system(fixtures[i]);
    const SCFResult hf = scf_solve(sys);
    if (!hf.converged) return make("E_HF >= E_CI", INFINITY, 1e-10, false, "SCF did not converge");
    // CI in the lowest Fock eigenvectors: the HF determinant lies in this space.
    const CiResult ci = full_ci_ground_state(sys, hf.orbitals.leftCols(8));
    min_slack = std::min(min_slack, hf.total_energy - ci.energy);
    if (i == 0) default_ratio = (hf.total_energy - ci.energy) / std::abs(ci.energy);
  }
  const bool ok = min_slack >= -1e-10 && default_ratio <= 0.1;
  std::ostringstream d;
  d << "min(E_HF - E_CI) = " << format_double(min_slack) << " over 4 N=2 wells; default well (E_HF - E_CI)/|E_CI| = "
    << format_double(default_ratio) << " (bound 0.1)";
  return make("variational ordering E_HF >= E_CI", min_slack, -1e-10, ok, d.str());
}

// Criterion 6.
Check trace_identity(unsigned threads) {
  const ModelSystem sys = build_soft_coulomb_system(crystal_spec());
  const BandRun run = band_structure(sys, {}, 2, threads);
  const auto& b0 = run.bands.bands.front();
  const double eps0 = *std::min_element(b0.begin(), b0.end());
  const auto blocks = trace_identity_blocks(sys, run, eps0);
  const TraceIdentityReport rep = trace_energy_identity(blocks, eps0, sys.electron_count());
  return make("trace-energy identity Sp rho(h+v) = eps(0) N + eps", rep.residual, 1e-8, rep.residual <= 1e-8,
              "N=2 model crystal, 8 k-points");
}

struct DysonFixture {
  ComplexMatrix h;
  ComplexMatrix basis;
  ModelSystem system;
};

DysonFixture dyson_fixture(Index orbitals) {
  ModelSystem sys = build_soft_coulomb_system(SystemSpec{});
  const SCFResult hf = scf_solve(sys);
  if (!hf.converged) throw ComputationError("SCF did not converge for the Dyson fixture");
  ComplexMatrix h = hf.eigenvalues.head(orbitals).cast<Complex>().asDiagonal();
  return {h, hf.orbitals.leftCols(orbitals), std::move(sys)};
}

// Criterion 7.
Check dyson_correctness(std::uint64_t seed) {
  const DysonFixture f = dyson_fixture(16);
  const FrequencyGrid grid = FrequencyGrid::spanning(f.h.diagonal().real(), 1.0, 2000, 1e-3);
  const GreenFunction g0 = free_green(f.h, grid);

  SelfEnergyConfig constant;
  constant.kind = "constant";
  constant.value = 0.05;
  std::mt19937_64 rng(seed + 3);
  std::normal_distribution<double> normal(0.0, 0.02);
  std::vector<ComplexMatrix> table;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    ComplexMatrix m(16, 16);
    for (Index r = 0; r < 16; ++r) {
      for (Index c = 0; c < 16; ++c) m(r, c) = Complex(normal(rng), normal(rng));
    }
    table.push_back(0.5 * (m + m.adjoint()));
  }

  const DysonResult zero = dyson_solve(g0, SelfEnergyModel::zero(16));
  bool bitwise = zero.singular.empty();
  for (std::size_t i = 0; i < grid.size() && bitwise; ++i) bitwise = zero.g.matrices[i] == g0.matrices[i];
  const DysonResult cst = dyson_solve(g0, orbital_self_energy(f.system, constant, f.basis));
  const DysonResult tab = dyson_solve(g0, SelfEnergyModel::tabulated_frequency(table));

  const double worst = std::max({zero.max_residual(), cst.max_residual(), tab.max_residual()});
  std::ostringstream d;
  d << "zero " << format_double(zero.max_residual()) << ", constant " << format_double(cst.max_residual())
    << ", tabulated " << format_double(tab.max_residual()) << "; Sigma=0 gives G=G0 bitwise: "
    << (bitwise ? "yes" : "no");
  return make("Dyson residual |G - G0 - G0 Sigma G|_max", worst, 1e-10, worst <= 1e-10 && bitwise, d.str());
}

// Criterion 8.
Check dressing_consistency() {
  const DysonFixture f = dyson_fixture(16);
  double worst_ratio = 0.0;
  std::ostringstream d;
  for (const char* kind : {"constant", "separable"}) {
    SelfEnergyConfig cfg;
    cfg.kind = kind;
    cfg.value = -0.08;
    cfg.orbitals = {0, 1, 2};
    cfg.couplings = {0.1, -0.05, 0.2};
    const SelfEnergyModel sigma = orbital_self_energy(f.system, cfg, f.basis);
    const RealVector dressed = dressed_eigenproblem(f.h, sigma.static_kernel());
    RealVector span(32);
    span << f.h.diagonal().real(), dressed;
    const FrequencyGrid grid = FrequencyGrid::spanning(span, 1.0, 2000, 1e-3);
    const DysonResult res = dyson_solve(free_green(f.h, grid), sigma);
    const std::vector<double> peaks = spectral_peaks(res.g);
    double worst = 0.0;
    for (Index i = 0; i < dressed.size(); ++i) {
      double best = INFINITY;
      for (double p : peaks) best = std::min(best, std::abs(p - dressed(i)));
      worst = std::max(worst, best);
    }
    for (double p : peaks) {
      worst = std::max(worst, (dressed.array() - p).abs().minCoeff());
    }
    worst_ratio = std::max(worst_ratio, worst / grid.spacing());
    if (d.tellp() > 0) d << "; ";
    d << kind << ": " << peaks.size() << " peaks, max offset " << format_double(worst / grid.spacing())
      << " spacings";
  }
  return make("spectral peaks align with dressed eigenvalues (in grid spacings)", worst_ratio, 1.0,
              worst_ratio <= 1.0, d.str());
}

// Criterion 9.
Check quasiparticle_algebra(std::uint64_t seed) {
  std::mt19937_64 rng(seed + 4);
  std::uniform_real_distribution<double> extr_dist(-5.0, 5.0), heavy(1.0, 4.0);
  bool exact = true;
  double heavy_err = 0.0;
  double light_max = 0.0;
  for (int i = 0; i < 100; ++i) {
    const double extr = extr_dist(rng);
    const double dm = heavy(rng);
    const std::vector<double> samples{extr, extr + 0.3, extr + 0.7};
    const QuasiparticleLevel l = quasiparticle_level(0, samples, 2, dm);
    if (l.regime != Regime::heavy) exact = false;
    if (l.pair_energy != (l.plus_level - l.minus_level) / 2.0) exact = false;
    heavy_err = std::max(heavy_err, std::abs(l.pair_energy + dm / 2.0));
    const ZoneReference z = zone_reference(extr, dm);
    if (z.pair_energy != (z.plus_level - z.minus_level) / 2.0) exact = false;
    const QuasiparticleLevel light = quasiparticle_level(0, samples, 2, 0.0);
    if (light.regime != Regime::light) exact = false;
    light_max = std::max(light_max, std::abs(light.pair_energy));
  }
  std::ostringstream d;
  d << "a = (eps+ - eps-)/2 exact: " << (exact ? "yes" : "no") << "; max |a + dM/2| (heavy) "
    << format_double(heavy_err) << "; max |a| (light) " << format_double(light_max);
  return make("pair energy algebra over 100 random (Extr, dM)", heavy_err, 1e-12,
              exact && heavy_err <= 1e-12 && light_max == 0.0, d.str());
}

// Criterion 10.
Check boson_spectrum() {
  bool rest = true;
  for (int n : {1, 2, 3, 7, 100}) {
    for (int k : {-3, -1, 1, 2}) rest = rest && boson_energy({1.0, 0.0, n, k}) == 0.5;
  }
  const double oracle = 0.494987625;
  const double e = boson_energy({1.0, 0.1, 1, 1});
  const std::vector<int> seq{10, 100, 1000};
  double limit_err = 0.0;
  for (double m : {1.0, 2.0}) {
    for (double g : {0.1, 0.5}) limit_err = std::max(limit_err, std::abs(mass_operator_limit(m, g, 1, seq) - m));
  }
  std::ostringstream d;
  d << "gamma=0 gives 0.5 exactly: " << (rest ? "yes" : "no") << "; |E1(1,0.1,1,1) - 0.494987625| = "
    << format_double(std::abs(e - oracle)) << "; max |Delta M_inf - m| = " << format_double(limit_err);
  return make("boson spectrum and mass-operator limit", limit_err, 1e-8,
              rest && std::abs(e - oracle) <= 1e-15 && limit_err <= 1e-8, d.str());
}

// Criterion 11.
Check truncation_order() {
  const std::vector<double> gammas{0.05, 0.1, 0.2, 0.4};
  const double p = truncation_exponent(1.0, 10, 1, gammas);
  const double p1 = truncation_exponent(1.0, 1, 1, gammas);
  return make("small-gamma residual exponent after the gamma^2 term", p, 4.0, p >= 4.0,
              "n=10, k=1, gammas {0.05, 0.1, 0.2, 0.4}; n=1 gives " + format_double(p1) + " (reported)");
}

RunConfig determinism_config(std::uint64_t seed, unsigned threads) {
  RunConfig cfg;
  cfg.system = crystal_spec();
  cfg.self_energy.kind = "constant";
  cfg.self_energy.value = 0.05;
  cfg.seed = seed;
  cfg.threads = threads;
  cfg.stages = default_stages(cfg.system);
  return cfg;
}

// Criterion 12.
Check determinism(std::uint64_t seed, const std::filesystem::path& scratch) {
  const auto a = scratch / "determinism_a";
  const auto b = scratch / "determinism_b";
  std::filesystem::remove_all(a);
  std::filesystem::remove_all(b);
  const RunReport ra = run_pipeline(determinism_config(seed, 1), a);
  const RunReport rb = run_pipeline(determinism_config(seed, 1), b);
  std::string diff;
  const bool same = trees_identical(a, b, &diff);
  const bool clean = !ra.degraded && !rb.degraded;
  std::string detail = std::to_string(ra.artifacts.size()) + " artifacts";
  if (!same) detail += "; differs: " + diff;
  if (!clean) detail += "; a run was degraded";
  return make("pipeline output trees byte-identical across runs", same ? 0.0 : 1.0, 0.0, same && clean, detail);
}

// Structural invariants beyond the acceptance list.
Check kinetic_psd() {
  double worst = 0.0;
  for (Boundary b : {Boundary::box, Boundary::periodic}) {
    const Grid g(32, 0.3);
    const RealMatrix t = -0.5 * laplacian_matrix(g, b);
    Eigen::SelfAdjointEigenSolver<RealMatrix> es(t, Eigen::EigenvaluesOnly);
    worst = std::min(worst, es.eigenvalues()(0));
    worst = std::min(worst, -(t - t.transpose()).cwiseAbs().maxCoeff());
  }
  return make("kinetic matrix symmetric and positive semidefinite", worst, -1e-10, worst >= -1e-10);
}

Check ci_monotone() {
  SystemSpec spec;
  spec.grid_points = 24;
  spec.spacing = 0.35;
  const ModelSystem sys = build_soft_coulomb_system(spec);
  double previous = INFINITY;
  double worst = -INFINITY;
  for (int cutoff = 2; cutoff <= 10; ++cutoff) {
    CiOptions o;
    o.orbital_cutoff = cutoff;
    const double e = full_ci_ground_state(sys, o).energy;
    worst = std::max(worst, e - previous);
    previous = e;
  }
  return make("CI energy non-increasing in orbital cutoff", worst, 1e-12, worst <= 1e-12);
}

Check contraction_and_psd() {
  SystemSpec spec;
  spec.grid_points = 16;
  spec.spacing = 0.4;
  spec.electrons = 3;
  const ModelSystem sys = build_soft_coulomb_system(spec);
  CiOptions o;
  o.orbital_cutoff = 6;
  const CiResult ci = full_ci_ground_state(sys, o);
  const DensityMatrix r1 = exact_reduced_density_matrix(ci.state, 1);
  const DensityMatrix r2 = exact_reduced_density_matrix(ci.state, 2);
  const int m = r1.spin_orbital_count();
  double worst = std::max(r1.hermiticity_error(), r2.hermiticity_error());
  for (int p = 0; p < m; ++p) {
    for (int q = 0; q < m; ++q) {
      Complex sum = 0.0;
      for (int r = 0; r < m; ++r) {
        const int bra[2] = {p, r};
        const int ket[2] = {q, r};
        sum += r2.element(bra, ket);
      }
      const int bp[1] = {p};
      const int kq[1] = {q};
      worst = std::max(worst, std::abs(sum - 2.0 * r1.element(bp, kq)));
    }
  }
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(r1.matrix(), Eigen::EigenvaluesOnly);
  const bool psd = es.eigenvalues()(0) >= -1e-10;
  return make("rho_2 contracts to (N-1) rho_1; rho_1 Hermitian and PSD", worst, 1e-10, worst <= 1e-10 && psd);
}

Check spin_zero_density_match() {
  const ModelSystem sys = build_soft_coulomb_system(SystemSpec{});
  const SCFResult hf = scf_solve(sys);
  const ComplexMatrix occ = hf.orbitals.leftCols(hf.occupied_orbitals);
  const std::vector<int> so{0, 1};
  const DensityMatrix r1 = exact_reduced_density_matrix(slater_determinant(occ, so), 1);
  const ComplexMatrix s = r1.spin_block(0);
  const double err = (s - spin_zero_density(occ)).cwiseAbs().maxCoeff();
  const double ortho = (hf.orbitals.adjoint() * hf.orbitals -
                        ComplexMatrix::Identity(hf.orbitals.cols(), hf.orbitals.cols()))
                           .cwiseAbs()
                           .maxCoeff();
  return make("spin-zero density equals rho_1 block; SCF orbitals orthonormal", std::max(err, ortho), 1e-10,
              err <= 1e-10 && ortho <= 1e-10);
}

Check hydrogenic_convergence() {
  // The soft-core ground level converges under grid refinement.
  const auto level = [](double h) {
    const Index n = static_cast<Index>(std::llround(40.0 / h));
    return hydrogenic_basis(1, 1.0, Grid(n, h)).levels.front().model_energy;
  };
  const double e1 = level(0.2), e2 = level(0.1), e3 = level(0.05);
  const double ratio = std::abs(e1 - e2) / std::abs(e2 - e3);
  return make("soft-core hydrogenic level second-order grid convergence", ratio, 4.0, std::abs(ratio - 4.0) < 0.3,
              "successive-difference ratio for h = 0.2, 0.1, 0.05");
}

}  // namespace

Check run_check(const NamedCheck& check) {
  const auto start = std::chrono::steady_clock::now();
  Check c;
  try {
    c = check.run();
  } catch (const std::exception& e) {
    c = make(check.id, INFINITY, 0.0, false, std::string("exception: ") + e.what());
  }
  c.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  c.id = check.id;
  return c;
}

std::vector<NamedCheck> acceptance_suite(std::uint64_t seed, const std::filesystem::path& scratch) {
  const auto timed = [](std::string id, double limit, std::function<Check()> fn) {
    return NamedCheck{std::move(id), [limit, fn] {
                        Check c = fn();
                        c.time_limit = limit;
                        return c;
                      }};
  };
  return {
      timed("AC01", 10.0, density_normalization),
      timed("AC02", 30.0, [seed] { return energy_functional(seed); }),
      timed("AC03", 0.0, [seed] { return self_action(seed); }),
      timed("AC04", 0.0, [] { return band_symmetry(1); }),
      timed("AC05", 0.0, [seed] { return variational_ordering(seed); }),
      timed("AC06", 0.0, [] { return trace_identity(1); }),
      timed("AC07", 20.0, [seed] { return dyson_correctness(seed); }),
      timed("AC08", 0.0, dressing_consistency),
      timed("AC09", 0.0, [seed] { return quasiparticle_algebra(seed); }),
      timed("AC10", 1.0, boson_spectrum),
      timed("AC11", 0.0, truncation_order),
      timed("AC12", 0.0, [seed, scratch] { return determinism(seed, scratch); }),
  };
}

std::vector<NamedCheck> verification_suite(std::uint64_t seed, const std::filesystem::path& scratch) {
  std::vector<NamedCheck> all = acceptance_suite(seed, scratch);
  all.push_back({"INV-kinetic", kinetic_psd});
  all.push_back({"INV-ci-monotone", ci_monotone});
  all.push_back({"INV-contraction", contraction_and_psd});
  all.push_back({"INV-spin-zero", spin_zero_density_match});
  all.push_back({"INV-hydrogenic", hydrogenic_convergence});
  return all;
}

bool trees_identical(const std::filesystem::path& a, const std::filesystem::path& b, std::string* difference) {
  namespace fs = std::filesystem;
  const auto listing = [](const fs::path& root) {
    std::vector<std::string> files;
    for (const auto& e : fs::recursive_directory_iterator(root)) {
      if (e.is_regular_file()) files.push_back(fs::relative(e.path(), root).generic_string());
    }
    std::sort(files.begin(), files.end());
    return files;
  };
  const auto slurp = [](const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return std::string(std::istreambuf_iterator<char>(in), {});
  };
  const auto fa = listing(a);
  const auto fb = listing(b);
  if (fa != fb) {
    if (difference) *difference = "file lists differ";
    return false;
  }
  for (const auto& f : fa) {
    if (slurp(a / f) != slurp(b / f)) {
      if (difference) *difference = f;
      return false;
    }
  }
  return true;
}

}  // namespace qpw
