#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <string>
#include <vector>

namespace qpw {

/// Outcome of one property or acceptance check.
struct Check {
  std::string id;
  std::string name;
  /// Measured quantity compared against `tolerance` (meaning depends on the check).
  double value = 0.0;
  double tolerance = 0.0;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
  /// Wall-clock budget in seconds; 0 when the check has none.
  double time_limit = 0.0;
};

struct NamedCheck {
  std::string id;
  std::function<Check()> run;
};

/// The twelve acceptance criteria, in order. Randomized fixtures draw from
/// `seed`; the determinism check writes two pipeline trees under `scratch`.
std::vector<NamedCheck> acceptance_suite(std::uint64_t seed, const std::filesystem::path& scratch);

/// Acceptance criteria plus structural invariants of every module.
std::vector<NamedCheck> verification_suite(std::uint64_t seed, const std::filesystem::path& scratch);

/// Runs a check, timing it and turning exceptions into failures.
Check run_check(const NamedCheck& check);

/// True when both directory trees hold the same relative paths with identical bytes.
bool trees_identical(const std::filesystem::path& a, const std::filesystem::path& b, std::string* difference = nullptr);

}  // namespace qpw
