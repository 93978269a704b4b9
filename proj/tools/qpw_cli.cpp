// qpw: command-line driver for the workbench pipeline.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "qpw/config.hpp"
#include "qpw/pipeline.hpp"
#include "qpw/records.hpp"
#include "qpw/verify.hpp"

namespace {

enum Exit { kOk = 0, kInternal = 1, kConfig = 2, kDegraded = 3, kVerifyFailed = 4 };

struct Options {
  std::string config;
  std::string out = "qpw_out";
  unsigned threads = 1;
  std::uint64_t seed = 0;
  bool threads_set = false;
  bool seed_set = false;
};

int fail(int code, const std::string& kind, const std::string& message, const std::string& field = {}) {
  nlohmann::json err = {{"status", "error"}, {"error", kind}, {"message", message}, {"exit_code", code}};
  if (!field.empty()) err["field"] = field;
  std::cout << err.dump() << std::endl;
  return code;
}

qpw::RunConfig resolve_config(const Options& o, const std::vector<std::string>& stages) {
  nlohmann::json j = nlohmann::json::object();
  if (!o.config.empty()) {
    std::ifstream in(o.config);
    if (!in) throw qpw::ConfigError("config", "cannot open " + o.config);
    try {
      j = nlohmann::json::parse(in, nullptr, true, true);
    } catch (const nlohmann::json::parse_error& e) {
      throw qpw::ConfigError("config", std::string("parse error: ") + e.what());
    }
    if (!j.is_object()) throw qpw::ConfigError("config", "top level must be an object");
  }
  if (!stages.empty()) j["stages"] = stages;
  if (o.threads_set) j["threads"] = o.threads;
  if (o.seed_set) j["seed"] = o.seed;
  return qpw::parse_run_config(j);
}

int run_stages(const Options& o, const std::vector<std::string>& stages) {
  const qpw::RunConfig cfg = resolve_config(o, stages);
  const qpw::RunReport report = qpw::run_pipeline(cfg, o.out);
  nlohmann::json summary = {{"status", report.degraded ? "degraded" : "ok"},
                            {"out", o.out},
                            {"config_hash", report.config_hash},
                            {"report", "report.json"},
                            {"degraded", report.degraded}};
  for (const auto& s : report.stages) summary["stages"][s.name] = qpw::to_string(s.status);
  if (report.degraded) {
    for (const auto& s : report.stages) {
      if (s.status == qpw::StageStatus::failed) {
        summary["error"] = "stage_failed";
        summary["message"] = s.name + ": " + s.message;
        break;
      }
    }
    summary["exit_code"] = static_cast<int>(kDegraded);
  }
  std::cout << summary.dump() << std::endl;
  return report.degraded ? kDegraded : kOk;
}

int run_verify(const Options& o) {
  const qpw::RunConfig cfg = resolve_config(o, {});
  const std::filesystem::path out = o.out;
  std::filesystem::create_directories(out);
  nlohmann::json checks = nlohmann::json::array();
  bool all = true;
  for (const auto& nc : qpw::verification_suite(cfg.seed, out / "verify_scratch")) {
    const qpw::Check c = qpw::run_check(nc);
    const bool within_time = c.time_limit <= 0.0 || c.seconds < c.time_limit;
    const bool ok = c.passed && within_time;
    all = all && ok;
    std::cerr << (ok ? "PASS " : "FAIL ") << c.id << "  " << c.name << "  value=" << qpw::format_double(c.value)
              << " tol=" << qpw::format_double(c.tolerance) << "  " << c.detail << '\n';
    checks.push_back({{"id", c.id},
                      {"name", c.name},
                      {"value", c.value},
                      {"tolerance", c.tolerance},
                      {"passed", ok},
                      {"detail", c.detail},
                      {"time_limit", c.time_limit}});
  }
  std::filesystem::remove_all(out / "verify_scratch");
  qpw::write_json(out / "verify.json", qpw::stamped({{"seed", cfg.seed}, {"checks", checks}},
                                                    qpw::ArtifactMeta{qpw::config_hash(cfg)}));
  nlohmann::json summary = {{"status", all ? "ok" : "error"}, {"out", o.out}, {"report", "verify.json"}};
  if (!all) {
    summary["error"] = "verification_failed";
    summary["exit_code"] = static_cast<int>(kVerifyFailed);
  }
  std::cout << summary.dump() << std::endl;
  return all ? kOk : kVerifyFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"qpw: Hartree-Fock, density-matrix and quasiparticle workbench"};
  app.set_version_flag("--version", qpw::artifact_version());
  app.require_subcommand(1);
  app.fallthrough();

  Options o;
  app.add_option("--config", o.config, "JSON run configuration")->check(CLI::ExistingFile);
  app.add_option("--out", o.out, "output directory")->capture_default_str();
  auto* threads = app.add_option("--threads", o.threads, "worker threads for per-k stages")->check(CLI::Range(1u, 256u));
  auto* seed = app.add_option("--seed", o.seed, "seed for randomized fixtures");

  struct Sub {
    const char* name;
    const char* help;
    std::vector<std::string> stages;
  };
  const std::vector<Sub> subs = {
      {"run", "run the stages listed in the config (or the defaults)", {}},
      {"oracle", "full-CI oracle only", {"oracle"}},
      {"bands", "Hartree-Fock band structure", {"bands"}},
      {"quasiparticle", "band reference points and mass operator", {"quasiparticle"}},
      {"dyson", "free and dressed Green functions", {"dyson"}},
      {"spectrum", "charged vector-boson spectrum and mass limit", {"spectrum"}},
  };
  for (const auto& s : subs) app.add_subcommand(s.name, s.help);
  app.add_subcommand("verify", "run the acceptance and invariant suite");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return fail(kConfig, "usage", e.what());
  }
  o.threads_set = threads->count() > 0;
  o.seed_set = seed->count() > 0;

  try {
    for (const auto& s : subs) {
      if (app.got_subcommand(s.name)) return run_stages(o, s.stages);
    }
    return run_verify(o);
  } catch (const qpw::ConfigError& e) {
    return fail(kConfig, "invalid_config", e.what(), e.field());
  } catch (const qpw::InvalidArgument& e) {
    return fail(kConfig, "invalid_argument", e.what());
  } catch (const std::exception& e) {
    return fail(kInternal, "internal", e.what());
  }
}
