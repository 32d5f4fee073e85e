// Runs every acceptance criterion and prints one PASS/FAIL line per criterion.

#include <cstdio>
#include <cstdlib>
#include <string>

#include "thermoflux/thermoflux.hpp"

int main(int argc, char** argv) {
  thermoflux::VerifyOptions opt;
  if (argc > 1) opt.seed = std::strtoull(argv[1], nullptr, 10);
  int failures = 0;
  for (const auto& suite : thermoflux::all_suites()) {
    const auto r = suite(opt);
    std::string detail;
    char buf[128];
    for (const auto& m : r.metrics) {
      std::snprintf(buf, sizeof buf, " %s=%.3g(%s%.0e)", m.name.c_str(), m.value, m.at_least ? ">=" : "<=", m.limit);
      detail += buf;
    }
    std::printf("%s criterion %2d %-24s %7.2fs/%gs%s\n", r.passed() ? "PASS" : "FAIL", r.criterion, r.name.c_str(),
                r.seconds, r.time_budget, detail.c_str());
    if (!r.passed()) ++failures;
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(thermoflux::all_suites().size()) - failures,
              thermoflux::all_suites().size());
  return failures == 0 ? 0 : 1;
}
