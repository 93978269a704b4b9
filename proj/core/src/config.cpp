#include "qpw/config.hpp"

#include <algorithm>
#include <fstream>
#include <set>

namespace qpw {

namespace {

/// Reads fields of one JSON object, rejecting keys that were never asked for.
class Section {
 public:
  Section(const nlohmann::json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw ConfigError(path_, "expected an object");
  }

  template <typename T>
  void read(const char* key, T& field) {
    known_.insert(key);
    if (!j_.contains(key)) return;
    const auto& value = j_.at(key);
    if constexpr (std::is_same_v<T, bool>) {
      if (!value.is_boolean()) throw ConfigError(at(key), "expected a boolean");
    } else if constexpr (std::is_integral_v<T>) {
      if (!value.is_number_integer()) throw ConfigError(at(key), "expected an integer");
      if constexpr (std::is_unsigned_v<T>) {
        if (value.is_number_integer() && !value.is_number_unsigned() && value.get<long long>() < 0) {
          throw ConfigError(at(key), "expected a non-negative integer");
        }
      }
    } else if constexpr (std::is_floating_point_v<T>) {
      if (!value.is_number()) throw ConfigError(at(key), "expected a number");
    } else if constexpr (std::is_same_v<T, std::string>) {
      if (!value.is_string()) throw ConfigError(at(key), "expected a string");
    } else {
      if (!value.is_array()) throw ConfigError(at(key), "expected an array");
    }
    try {
      value.get_to(field);
    } catch (const nlohmann::json::exception&) {
      throw ConfigError(at(key), "wrong element type");
    }
  }

  const nlohmann::json* child(const char* key) {
    known_.insert(key);
    return j_.contains(key) ? &j_.at(key) : nullptr;
  }

  void finish() const {
    for (const auto& [key, value] : j_.items()) {
      if (!known_.contains(key)) throw ConfigError(at(key), "unknown key");
    }
  }

  std::string at(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

 private:
  const nlohmann::json& j_;
  std::string path_;
  std::set<std::string> known_;
};

void require(bool ok, const std::string& field, const std::string& message) {
  if (!ok) throw ConfigError(field, message);
}

}  // namespace

std::vector<std::string> default_stages(const SystemSpec& spec) {
  std::vector<std::string> stages{"hf", "dyson", "spectrum"};
  if (spec.electrons <= 4) stages.insert(stages.begin(), "oracle");
  if (spec.boundary == Boundary::periodic) {
    stages.insert(std::find(stages.begin(), stages.end(), "dyson"), {"bands", "quasiparticle"});
  }
  return stages;
}

RunConfig parse_run_config(const nlohmann::json& j) {
  RunConfig cfg;
  Section root(j, "");

  if (const auto* sys = root.child("system")) {
    try {
      from_json(*sys, cfg.system);
    } catch (const InvalidArgument& e) {
      const std::string msg = e.what();
      const auto colon = msg.find(':');
      throw ConfigError(msg.substr(0, colon), colon == std::string::npos ? msg : msg.substr(colon + 2));
    }
  }

  if (const auto* s = root.child("scf")) {
    Section scf(*s, "scf");
    scf.read("mixing", cfg.scf.mixing);
    scf.read("tol", cfg.scf.tol);
    scf.read("max_iter", cfg.scf.max_iter);
    scf.finish();
    require(cfg.scf.mixing > 0.0 && cfg.scf.mixing <= 1.0, "scf.mixing", "must lie in (0, 1]");
    require(cfg.scf.tol > 0.0, "scf.tol", "must be > 0");
    require(cfg.scf.max_iter >= 1, "scf.max_iter", "must be >= 1");
  }

  if (const auto* s = root.child("oracle")) {
    Section o(*s, "oracle");
    o.read("orbital_cutoff", cfg.oracle.orbital_cutoff);
    o.finish();
    require(cfg.oracle.orbital_cutoff >= 1, "oracle.orbital_cutoff", "must be >= 1");
    require(cfg.oracle.orbital_cutoff <= cfg.system.grid_points, "oracle.orbital_cutoff",
            "must not exceed system.grid_points");
  }

  if (const auto* s = root.child("bands")) {
    Section b(*s, "bands");
    b.read("count", cfg.bands.count);
    b.finish();
    require(cfg.bands.count >= 1 && cfg.bands.count <= cfg.system.grid_points, "bands.count",
            "must lie in [1, grid_points]");
  }

  if (const auto* s = root.child("self_energy")) {
    Section se(*s, "self_energy");
    se.read("kind", cfg.self_energy.kind);
    se.read("value", cfg.self_energy.value);
    se.read("orbitals", cfg.self_energy.orbitals);
    se.read("couplings", cfg.self_energy.couplings);
    se.read("dispersion", cfg.self_energy.dispersion);
    se.read("momentum_values", cfg.self_energy.momentum_values);
    se.finish();
    const auto& kind = cfg.self_energy.kind;
    require(kind == "zero" || kind == "constant" || kind == "separable" || kind == "tabulated",
            "self_energy.kind", "must be zero, constant, separable or tabulated");
    require(cfg.self_energy.dispersion == "none" || cfg.self_energy.dispersion == "cos",
            "self_energy.dispersion", "must be none or cos");
    if (kind == "separable") {
      require(!cfg.self_energy.orbitals.empty(), "self_energy.orbitals", "separable kernels need orbitals");
      require(cfg.self_energy.orbitals.size() == cfg.self_energy.couplings.size(), "self_energy.couplings",
              "one coupling per orbital is required");
      for (int o : cfg.self_energy.orbitals) {
        require(o >= 0 && o < cfg.system.grid_points, "self_energy.orbitals", "orbital index out of range");
      }
    }
    if (kind == "tabulated") {
      require(cfg.system.boundary == Boundary::periodic, "self_energy.kind",
              "tabulated kernels are per k-point and need a periodic system");
      require(static_cast<Index>(cfg.self_energy.momentum_values.size()) == cfg.system.k_points,
              "self_energy.momentum_values", "need one value per k-point");
    }
  }

  if (const auto* s = root.child("quasiparticle")) {
    Section q(*s, "quasiparticle");
    std::string extremum = to_string(cfg.quasiparticle.extremum);
    q.read("extremum", extremum);
    q.read("gauge_constant", cfg.quasiparticle.gauge_constant);
    q.read("regime_threshold", cfg.quasiparticle.regime_threshold);
    q.finish();
    try {
      cfg.quasiparticle.extremum = extremum_from_string(extremum);
    } catch (const InvalidArgument& e) {
      throw ConfigError("quasiparticle.extremum", e.what());
    }
    require(cfg.quasiparticle.regime_threshold > 0.0, "quasiparticle.regime_threshold", "must be > 0");
  }

  if (const auto* s = root.child("dyson")) {
    Section d(*s, "dyson");
    std::string method = to_string(cfg.dyson.method);
    d.read("orbitals", cfg.dyson.orbitals);
    d.read("frequency_points", cfg.dyson.frequency_points);
    d.read("eta", cfg.dyson.eta);
    d.read("padding", cfg.dyson.padding);
    d.read("method", method);
    d.finish();
    try {
      cfg.dyson.method = dyson_method_from_string(method);
    } catch (const InvalidArgument& e) {
      throw ConfigError("dyson.method", e.what());
    }
    require(cfg.dyson.orbitals >= 1, "dyson.orbitals", "must be >= 1");
    require(cfg.dyson.frequency_points >= 2, "dyson.frequency_points", "must be >= 2");
    require(cfg.dyson.eta > 0.0, "dyson.eta", "must be > 0");
    require(cfg.dyson.padding > 0.0, "dyson.padding", "must be > 0");
  }

  if (const auto* s = root.child("spectrum")) {
    Section sp(*s, "spectrum");
    sp.read("mass", cfg.spectrum.mass);
    sp.read("gammas", cfg.spectrum.gammas);
    sp.read("n_values", cfg.spectrum.n_values);
    sp.read("k_values", cfg.spectrum.k_values);
    sp.read("limit_sequence", cfg.spectrum.limit_sequence);
    sp.finish();
    require(cfg.spectrum.mass > 0.0, "spectrum.mass", "must be > 0");
    for (double g : cfg.spectrum.gammas) require(g >= 0.0 && g < 1.0, "spectrum.gammas", "need 0 <= gamma < 1");
    for (int n : cfg.spectrum.n_values) require(n >= 1, "spectrum.n_values", "need n >= 1");
    for (int k : cfg.spectrum.k_values) require(k != 0, "spectrum.k_values", "k must be nonzero");
    const auto& seq = cfg.spectrum.limit_sequence;
    require(seq.size() >= 3, "spectrum.limit_sequence", "need at least three n values");
    for (std::size_t i = 1; i < seq.size(); ++i) {
      require(seq[i] > seq[i - 1], "spectrum.limit_sequence", "must be strictly increasing");
    }
  }

  root.read("stages", cfg.stages);
  root.read("threads", cfg.threads);
  root.read("seed", cfg.seed);
  root.finish();

  for (const auto& stage : cfg.stages) {
    require(std::find(kAllStages.begin(), kAllStages.end(), stage) != kAllStages.end(), "stages",
            "unknown stage \"" + stage + "\"");
  }
  if (cfg.stages.empty()) cfg.stages = default_stages(cfg.system);
  const auto wants = [&](const char* s) { return std::find(cfg.stages.begin(), cfg.stages.end(), s) != cfg.stages.end(); };
  if (wants("bands") || wants("quasiparticle")) {
    require(cfg.system.boundary == Boundary::periodic, "stages", "bands and quasiparticle need a periodic system");
  }
  if (wants("oracle")) require(cfg.system.electrons <= 4, "stages", "the CI oracle supports at most 4 electrons");
  if (wants("hf") || wants("bands") || wants("dyson")) {
    require(cfg.system.electrons == 1 || cfg.system.electrons % 2 == 0, "system.electrons",
            "Hartree-Fock stages need an even electron count or N = 1");
  }
  require(cfg.threads >= 1, "threads", "must be >= 1");
  return cfg;
}

RunConfig load_run_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config", "cannot open " + path.string());
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in, nullptr, true, true);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError("config", std::string("parse error: ") + e.what());
  }
  return parse_run_config(j);
}

nlohmann::json to_json(const RunConfig& c) {
  nlohmann::json j;
  j["system"] = c.system;
  j["scf"] = {{"mixing", c.scf.mixing}, {"tol", c.scf.tol}, {"max_iter", c.scf.max_iter}};
  j["oracle"] = {{"orbital_cutoff", c.oracle.orbital_cutoff}};
  j["bands"] = {{"count", c.bands.count}};
  j["self_energy"] = {{"kind", c.self_energy.kind},
                      {"value", c.self_energy.value},
                      {"orbitals", c.self_energy.orbitals},
                      {"couplings", c.self_energy.couplings},
                      {"dispersion", c.self_energy.dispersion},
                      {"momentum_values", c.self_energy.momentum_values}};
  j["quasiparticle"] = {{"extremum", to_string(c.quasiparticle.extremum)},
                        {"gauge_constant", c.quasiparticle.gauge_constant},
                        {"regime_threshold", c.quasiparticle.regime_threshold}};
  j["dyson"] = {{"orbitals", c.dyson.orbitals},
                {"frequency_points", c.dyson.frequency_points},
                {"eta", c.dyson.eta},
                {"padding", c.dyson.padding},
                {"method", to_string(c.dyson.method)}};
  j["spectrum"] = {{"mass", c.spectrum.mass},
                   {"gammas", c.spectrum.gammas},
                   {"n_values", c.spectrum.n_values},
                   {"k_values", c.spectrum.k_values},
                   {"limit_sequence", c.spectrum.limit_sequence}};
  j["stages"] = c.stages;
  j["threads"] = c.threads;
  j["seed"] = c.seed;
  return j;
}

std::string config_hash(const RunConfig& config) {
  nlohmann::json j = to_json(config);
  j.erase("threads");
  return hex_digest(fnv1a(j.dump()));
}

}  // namespace qpw
