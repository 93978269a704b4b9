#include "qpw/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>

#include "qpw/green_dyson.hpp"
#include "qpw/hydrogenic_spectrum.hpp"
#include "qpw/many_body_oracle.hpp"
#include "qpw/plot.hpp"
#include "qpw/quasiparticle.hpp"
#include "qpw/records.hpp"

namespace qpw {

std::string to_string(StageStatus s) {
  switch (s) {
    case StageStatus::ok:
      return "ok";
    case StageStatus::failed:
      return "failed";
    case StageStatus::skipped:
      break;
  }
  return "skipped";
}

nlohmann::json RunReport::to_json() const {
  nlohmann::json stage_list = nlohmann::json::array();
  for (const auto& s : stages) {
    nlohmann::json e = {{"name", s.name}, {"status", qpw::to_string(s.status)}, {"implied", s.implied}};
    if (!s.message.empty()) e["message"] = s.message;
    stage_list.push_back(e);
  }
  return {{"artifacts", artifacts}, {"stages", stage_list}, {"metrics", metrics}, {"degraded", degraded}};
}

namespace {

const std::map<std::string, std::vector<std::string>> kPrerequisites = {
    {"quasiparticle", {"bands"}},
    {"dyson", {"hf"}},
};

std::vector<double> to_std(const RealVector& v) { return {v.data(), v.data() + v.size()}; }

ComplexMatrix hermitize(const ComplexMatrix& m) { return 0.5 * (m + m.adjoint()); }

/// k point of the grid nearest 0, first on ties.
double nearest_to_gamma(const std::vector<double>& kgrid) {
  if (kgrid.empty()) return 0.0;
  double best = kgrid.front();
  for (double k : kgrid) {
    if (std::abs(k) < std::abs(best)) best = k;
  }
  return best;
}

struct Context {
  const RunConfig& config;
  const ModelSystem& system;
  const std::filesystem::path& out;
  ArtifactMeta meta;
  RunReport& report;

  std::optional<CiResult> ci;
  std::optional<SCFResult> hf;
  std::optional<BandRun> bands;
  std::vector<QuasiparticleLevel> levels;

  void json(const std::string& name, nlohmann::json record) {
    write_json(out / name, stamped(std::move(record), meta));
    report.artifacts.push_back(name);
  }
  void text(const std::string& name, const std::string& body) {
    write_text(out / name, body);
    report.artifacts.push_back(name);
  }
};

void stage_oracle(Context& c) {
  CiOptions opts;
  opts.orbital_cutoff = c.config.oracle.orbital_cutoff;
  c.ci = full_ci_ground_state(c.system, opts);
  const CiResult& ci = *c.ci;
  const int n_el = c.system.electron_count();

  nlohmann::json traces = nlohmann::json::array();
  std::optional<DensityMatrix> rho1, rho2;
  for (int n = 1; n <= n_el; ++n) {
    DensityMatrix rho = exact_reduced_density_matrix(ci.state, n);
    traces.push_back({{"order", n},
                      {"trace", rho.trace()},
                      {"target", rho.normalization_target()},
                      {"hermiticity_error", rho.hermiticity_error()}});
    if (n == 1) rho1 = std::move(rho);
    if (n == 2) rho2 = std::move(rho);
  }
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> nat(rho1->matrix(), Eigen::EigenvaluesOnly);
  std::vector<double> occupations = to_std(nat.eigenvalues());
  std::sort(occupations.rbegin(), occupations.rend());

  nlohmann::json record = {{"system_hash", c.system.hash()},
                           {"energy", ci.energy},
                           {"lowest_energies", ci.lowest_energies},
                           {"dimension", ci.dimension},
                           {"orbital_cutoff", opts.orbital_cutoff},
                           {"orbital_energies", ci.orbital_energies},
                           {"natural_occupations", occupations},
                           {"density_matrix_traces", traces}};
  double functional_gap = 0.0;
  if (rho2) {
    const double e = energy_from_density_matrices(*rho1, *rho2, c.system.h_core(0.0), c.system.interaction_kernel());
    functional_gap = std::abs(e - ci.energy);
    record["functional_energy"] = e;
  }
  c.json("oracle.json", record);
  c.report.metrics["oracle"] = {{"energy", ci.energy}, {"dimension", ci.dimension}, {"functional_gap", functional_gap}};
}

void stage_hf(Context& c) {
  c.hf = scf_solve(c.system, 0.0, c.config.scf);
  const SCFResult& r = *c.hf;

  nlohmann::json history = nlohmann::json::array();
  for (const auto& it : r.history) {
    history.push_back({{"iteration", it.index}, {"energy", it.energy}, {"density_change", it.density_change}});
  }
  c.json("scf_history.json", {{"converged", r.converged}, {"energy_monotone", r.energy_monotone}, {"history", history}});
  if (!r.converged) throw ComputationError("SCF did not converge: " + r.message);

  Eigen::SelfAdjointEigenSolver<ComplexMatrix> bare(c.system.h_core(0.0), Eigen::EigenvaluesOnly);
  const int n_el = c.system.electron_count();
  const double self_action =
      n_el == 1 ? std::max(std::abs(r.eigenvalues(0) - bare.eigenvalues()(0)),
                           r.fock.interaction().cwiseAbs().maxCoeff())
                : 0.0;

  // Energy split from the determinant's reduced density matrices.
  const ComplexMatrix occ = r.orbitals.leftCols(r.occupied_orbitals);
  std::vector<int> spin_orbitals;
  for (int p = 0; p < n_el; ++p) spin_orbitals.push_back(p);
  const NBodyWavefunction det = slater_determinant(occ, spin_orbitals);
  const DensityMatrix rho1 = exact_reduced_density_matrix(det, 1);
  EnergySplit split;
  if (n_el >= 2) {
    const DensityMatrix rho2 = exact_reduced_density_matrix(det, 2);
    split = hf_decomposition(rho1, rho2, c.system.h_core(0.0), c.system.interaction_kernel());
  } else {
    split = hf_decomposition(rho1, c.system.h_core(0.0));
  }

  const std::size_t shown = std::min<std::size_t>(static_cast<std::size_t>(r.eigenvalues.size()), 16);
  std::vector<double> eigenvalues(r.eigenvalues.data(), r.eigenvalues.data() + shown);
  nlohmann::json record = {{"system_hash", c.system.hash()},
                           {"eigenvalues", eigenvalues},
                           {"occupied_orbitals", r.occupied_orbitals},
                           {"iterations", r.iterations},
                           {"final_residual", r.final_residual},
                           {"converged", r.converged},
                           {"total_energy", r.total_energy},
                           {"fock_hermiticity_error", hermiticity_error(r.fock.total)},
                           {"self_action_residual", self_action},
                           {"energy_split",
                            {{"one_electron", split.one_electron},
                             {"excitation", split.excitation},
                             {"total", split.total()}}}};
  nlohmann::json metrics = {{"eigenvalues", eigenvalues},
                            {"total_energy", r.total_energy},
                            {"iterations", r.iterations},
                            {"self_action_residual", self_action}};
  if (c.ci) {
    record["ci_energy"] = c.ci->energy;
    metrics["hf_minus_ci"] = r.total_energy - c.ci->energy;
  }
  c.json("scf.json", record);
  c.report.metrics["hf"] = metrics;
}

void stage_bands(Context& c) {
  c.bands = band_structure(c.system, c.config.scf, c.config.bands.count, c.config.threads);
  const BandRun& run = *c.bands;
  const BandStructure& bs = run.bands;

  CsvTable table({"k", "band", "energy", "converged"});
  for (Index n = 0; n < bs.band_count(); ++n) {
    for (std::size_t ik = 0; ik < bs.kgrid.size(); ++ik) {
      table.row({cell(bs.kgrid[ik]), cell(static_cast<long long>(n)), cell(bs.bands[static_cast<std::size_t>(n)][ik]),
                 cell(bs.converged[ik] ? 1 : 0)});
    }
  }
  c.text("bands.csv", table.render(c.meta));

  bool all_converged = true;
  for (Index n = 0; n < bs.band_count(); ++n) all_converged = all_converged && bs.band_converged(n);
  if (!all_converged) throw ComputationError("SCF failed at one or more k points; bands marked unconverged");

  c.text("bands.svg", render_band_plot(bs, {}, c.meta));

  const double epsilon0 = *std::min_element(bs.bands.front().begin(), bs.bands.front().end());
  const auto blocks = trace_identity_blocks(c.system, run, epsilon0);
  const TraceIdentityReport ti = trace_energy_identity(blocks, epsilon0, c.system.electron_count());
  c.json("trace_identity.json", {{"system_hash", c.system.hash()},
                                 {"epsilon0", epsilon0},
                                 {"lhs", ti.lhs},
                                 {"rhs", ti.rhs},
                                 {"quasiparticle_energy", ti.quasiparticle_energy},
                                 {"residual", ti.residual},
                                 {"symmetry_error", run.symmetry_error}});
  c.report.metrics["bands"] = {{"band_count", bs.band_count()},
                               {"k_points", bs.kgrid.size()},
                               {"symmetry_error", run.symmetry_error},
                               {"trace_identity_residual", ti.residual}};
}

void stage_quasiparticle(Context& c) {
  const BandRun& run = *c.bands;
  const SelfEnergyModel sigma = grid_self_energy(c.system, c.config.self_energy);
  LevelOptions opts;
  opts.extremum = c.config.quasiparticle.extremum;
  opts.gauge_constant = c.config.quasiparticle.gauge_constant;
  opts.regime_threshold = c.config.quasiparticle.regime_threshold;

  CsvTable table({"band", "extremum", "delta_m0", "epsilon0", "shifted_reference", "plus_level", "minus_level",
                  "pair_energy", "regime", "indeterminate"});
  nlohmann::json levels = nlohmann::json::array();
  double evenness = 0.0;
  c.levels.clear();
  for (Index n = 0; n < run.bands.band_count(); ++n) {
    const MassShift shift = mass_shift(n, sigma, run.per_k);
    evenness = std::max(evenness, shift.evenness_error());
    const auto& samples = run.bands.bands[static_cast<std::size_t>(n)];
    const QuasiparticleLevel l = quasiparticle_level(n, samples, c.system.electron_count(), shift.delta_m0, opts);
    c.levels.push_back(l);
    table.row({cell(static_cast<long long>(n)), cell(l.extremum), cell(l.delta_m0), cell(l.reference_epsilon0),
               cell(l.shifted_reference), cell(l.plus_level), cell(l.minus_level), cell(l.pair_energy),
               to_string(l.regime), cell(l.indeterminate ? 1 : 0)});
    levels.push_back({{"band", n},
                      {"extremum_kind", to_string(l.extremum_kind)},
                      {"extremum", l.extremum},
                      {"band_midpoint", l.band_midpoint},
                      {"delta_m0", l.delta_m0},
                      {"delta_mk", shift.delta_mk},
                      {"reference_epsilon0", l.reference_epsilon0},
                      {"shifted_reference", l.shifted_reference},
                      {"offset_constant", l.offset_constant},
                      {"plus_level", l.plus_level},
                      {"minus_level", l.minus_level},
                      {"pair_energy", l.pair_energy},
                      {"regime", to_string(l.regime)},
                      {"indeterminate", l.indeterminate}});
  }
  c.text("quasiparticle.csv", table.render(c.meta));
  c.json("quasiparticle.json", {{"self_energy", sigma.kind_name()},
                                {"dispersion", sigma.dispersion_label()},
                                {"mass_shift_evenness_error", evenness},
                                {"levels", levels}});
  c.text("quasiparticle.svg", render_band_plot(run.bands, c.levels, c.meta));
  c.report.metrics["quasiparticle"] = {{"levels", c.levels.size()},
                                       {"pair_energy_band0", c.levels.front().pair_energy},
                                       {"mass_shift_evenness_error", evenness}};
}

void stage_dyson(Context& c) {
  const SCFResult& hf = *c.hf;
  const Index dim = std::min<Index>(c.config.dyson.orbitals, hf.eigenvalues.size());
  const RealVector levels = hf.eigenvalues.head(dim);
  const ComplexMatrix h = levels.cast<Complex>().asDiagonal();
  const SelfEnergyModel sigma = orbital_self_energy(c.system, c.config.self_energy, hf.orbitals.leftCols(dim));
  const ComplexMatrix sig = sigma.static_kernel();
  const RealVector dressed = dressed_eigenproblem(h, sig);

  RealVector span(2 * dim);
  span << levels, dressed;
  const FrequencyGrid grid =
      FrequencyGrid::spanning(span, c.config.dyson.padding, c.config.dyson.frequency_points, c.config.dyson.eta);
  const GreenFunction g0 = free_green(h, grid);
  DysonOptions opts;
  opts.method = c.config.dyson.method;
  const DysonResult res = dyson_solve(g0, sigma, opts);

  const std::vector<double> a0 = spectral_function(g0);
  const std::vector<double> a = spectral_function(res.g);
  CsvTable table({"omega", "a_free", "a_dressed", "residual"});
  for (std::size_t i = 0; i < grid.size(); ++i) {
    table.row({cell(grid.points[i]), cell(a0[i]), cell(a[i]), cell(res.residuals[i])});
  }
  c.text("spectral.csv", table.render(c.meta));
  const std::vector<Series> series = {{"A free", a0}, {"A dressed", a}};
  c.text("spectral.svg", render_line_plot(grid.points, series, "omega (hartree)", "A(omega)", c.meta));

  const std::vector<double> peaks = spectral_peaks(res.g);
  double alignment = 0.0;
  for (Index i = 0; i < dressed.size(); ++i) {
    double best = std::numeric_limits<double>::infinity();
    for (double p : peaks) best = std::min(best, std::abs(p - dressed(i)));
    alignment = std::max(alignment, best);
  }
  const double free_residual = free_green_residual(g0, h);
  c.json("dyson.json", {{"orbitals", dim},
                        {"frequency_points", grid.size()},
                        {"eta", grid.eta},
                        {"spacing", grid.spacing()},
                        {"method", to_string(opts.method)},
                        {"self_energy", sigma.kind_name()},
                        {"hf_levels", to_std(levels)},
                        {"dressed_levels", to_std(dressed)},
                        {"spectral_peaks", peaks},
                        {"peak_alignment", alignment},
                        {"max_residual", res.max_residual()},
                        {"free_residual", free_residual},
                        {"singular_frequencies", res.singular},
                        {"fallback_frequencies", res.fallbacks.size()},
                        {"notes", res.notes}});
  c.report.metrics["dyson"] = {{"max_residual", res.max_residual()},
                               {"free_residual", free_residual},
                               {"peak_alignment", alignment},
                               {"spacing", grid.spacing()}};
  if (!res.singular.empty()) throw ComputationError(res.notes.back());
}

void stage_spectrum(Context& c) {
  const SpectrumConfig& s = c.config.spectrum;
  CsvTable table({"n", "k", "gamma", "e1", "two_e1"});
  for (double g : s.gammas) {
    for (int k : s.k_values) {
      for (int n : s.n_values) {
        const double e = boson_energy({s.mass, g, n, k});
        table.row({cell(n), cell(k), cell(g), cell(e), cell(2.0 * e)});
      }
    }
  }
  c.text("spectrum.csv", table.render(c.meta));

  nlohmann::json limits = nlohmann::json::array();
  double worst = 0.0;
  for (double g : s.gammas) {
    for (int k : s.k_values) {
      const double lim = mass_operator_limit(s.mass, g, k, s.limit_sequence);
      worst = std::max(worst, std::abs(lim - s.mass));
      limits.push_back({{"gamma", g}, {"k", k}, {"limit", lim}, {"deviation", lim - s.mass}});
    }
  }
  c.json("mass_limit.json", {{"mass", s.mass}, {"limit_sequence", s.limit_sequence}, {"limits", limits}});
  c.report.metrics["spectrum"] = {{"rows", table.rows()}, {"max_limit_deviation", worst}};
}

using StageFn = void (*)(Context&);
const std::map<std::string, StageFn> kStages = {
    {"oracle", stage_oracle}, {"hf", stage_hf},       {"bands", stage_bands},
    {"quasiparticle", stage_quasiparticle}, {"dyson", stage_dyson}, {"spectrum", stage_spectrum},
};

}  // namespace

std::vector<std::string> resolve_stages(const std::vector<std::string>& requested) {
  std::vector<std::string> wanted = requested;
  for (const auto& s : requested) {
    auto it = kPrerequisites.find(s);
    if (it != kPrerequisites.end()) wanted.insert(wanted.end(), it->second.begin(), it->second.end());
  }
  std::vector<std::string> ordered;
  for (const auto& s : kAllStages) {
    if (std::find(wanted.begin(), wanted.end(), s) != wanted.end()) ordered.push_back(s);
  }
  return ordered;
}

SelfEnergyModel grid_self_energy(const ModelSystem& system, const SelfEnergyConfig& cfg) {
  const Index g = system.grid().size();
  SelfEnergyModel model = SelfEnergyModel::zero(g);
  if (cfg.kind == "constant") {
    model = SelfEnergyModel::scaled_identity(g, cfg.value);
  } else if (cfg.kind == "separable") {
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(system.h_core(0.0));
    ComplexMatrix vectors(g, static_cast<Index>(cfg.orbitals.size()));
    RealVector couplings(static_cast<Index>(cfg.couplings.size()));
    for (std::size_t i = 0; i < cfg.orbitals.size(); ++i) {
      vectors.col(static_cast<Index>(i)) = es.eigenvectors().col(cfg.orbitals[i]);
      couplings(static_cast<Index>(i)) = cfg.couplings[i];
    }
    model = SelfEnergyModel::separable(vectors, couplings);
  } else if (cfg.kind == "tabulated") {
    std::vector<ComplexMatrix> kernels;
    for (double v : cfg.momentum_values) kernels.push_back(ComplexMatrix::Identity(g, g) * v);
    return SelfEnergyModel::tabulated_momentum(system.kgrid(), kernels);
  }
  if (cfg.dispersion == "cos") model = model.with_dispersion([](double k) { return std::cos(k); }, "cos");
  return model;
}

SelfEnergyModel orbital_self_energy(const ModelSystem& system, const SelfEnergyConfig& cfg,
                                    const ComplexMatrix& basis) {
  if (cfg.kind == "zero") return SelfEnergyModel::zero(basis.cols());
  const SelfEnergyModel grid = grid_self_energy(system, cfg);
  const double k = cfg.kind == "tabulated" ? nearest_to_gamma(system.kgrid()) : 0.0;
  return SelfEnergyModel::constant(hermitize(basis.adjoint() * grid.at_momentum(k) * basis));
}

std::vector<MomentumBlock> trace_identity_blocks(const ModelSystem& system, const BandRun& run, double epsilon0) {
  const double period = system.grid().length();
  const double count = static_cast<double>(run.per_k.size());
  const double weight = 2.0 * kPi / (count * period);
  const double scale = std::sqrt(period / (2.0 * kPi));
  std::vector<MomentumBlock> blocks;
  for (const SCFResult& r : run.per_k) {
    if (!r.converged) throw InvalidArgument("trace identity needs converged SCF at every k");
    MomentumBlock b;
    b.k = r.momentum;
    b.weight = weight;
    b.h = r.fock.h_core;
    b.v = r.fock.interaction();
    const int spins = system.electron_count() == 1 ? 1 : 2;
    for (int m = 0; m < r.occupied_orbitals; ++m) {
      const ComplexVector psi = scale * r.orbitals.col(m);
      for (int s = 0; s < spins; ++s) {
        b.projectors.emplace_back(m, r.momentum, psi, m, r.momentum, psi);
        b.band_energies.push_back(r.eigenvalues(m) - epsilon0);
      }
    }
    blocks.push_back(std::move(b));
  }
  return blocks;
}

RunReport run_pipeline(const RunConfig& config, const std::filesystem::path& out_dir) {
  RunReport report;
  report.out_dir = out_dir;
  report.config_hash = config_hash(config);
  std::filesystem::create_directories(out_dir);

  const ModelSystem system = build_soft_coulomb_system(config.system);
  Context ctx{config, system, out_dir, ArtifactMeta{report.config_hash}, report, {}, {}, {}, {}};
  ctx.json("config.json", to_json(config));
  ctx.json("system.json", system.snapshot());

  const std::vector<std::string> requested = config.stages.empty() ? default_stages(config.system) : config.stages;
  std::map<std::string, StageStatus> done;
  for (const auto& name : resolve_stages(requested)) {
    StageRecord rec;
    rec.name = name;
    rec.implied = std::find(requested.begin(), requested.end(), name) == requested.end();
    bool blocked = false;
    auto pre = kPrerequisites.find(name);
    if (pre != kPrerequisites.end()) {
      for (const auto& p : pre->second) {
        if (done[p] != StageStatus::ok) {
          blocked = true;
          rec.message = "prerequisite \"" + p + "\" did not complete";
        }
      }
    }
    if (blocked) {
      rec.status = StageStatus::skipped;
      report.degraded = true;
    } else {
      try {
        kStages.at(name)(ctx);
        rec.status = StageStatus::ok;
      } catch (const std::exception& e) {
        rec.status = StageStatus::failed;
        rec.message = e.what();
        report.degraded = true;
      }
    }
    done[name] = rec.status;
    report.stages.push_back(rec);
  }

  report.artifacts.push_back("report.json");
  write_json(out_dir / "report.json", stamped(report.to_json(), ctx.meta));
  return report;
}

}  // namespace qpw
