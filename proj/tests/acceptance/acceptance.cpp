// Acceptance criteria: one PASS/FAIL line per criterion.

#include <cstdio>
#include <filesystem>
#include <iostream>

#include "qpw/records.hpp"
#include "qpw/verify.hpp"

int main(int argc, char** argv) {
  const std::filesystem::path scratch = argc > 1 ? argv[1] : "acceptance_scratch";
  const std::uint64_t seed = 20240611;
  int failures = 0;
  for (const auto& nc : qpw::acceptance_suite(seed, scratch)) {
    const qpw::Check c = qpw::run_check(nc);
    const bool in_time = c.time_limit <= 0.0 || c.seconds < c.time_limit;
    const bool ok = c.passed && in_time;
    if (!ok) ++failures;
    std::printf("%s %s: %s | value=%s tol=%s | %.2fs%s | %s\n", ok ? "PASS" : "FAIL", c.id.c_str(), c.name.c_str(),
                qpw::format_double(c.value).c_str(), qpw::format_double(c.tolerance).c_str(), c.seconds,
                c.time_limit > 0.0 ? (" (limit " + qpw::format_double(c.time_limit) + "s)").c_str() : "",
                c.detail.c_str());
  }
  std::filesystem::remove_all(scratch);
  std::printf("%d of 12 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
