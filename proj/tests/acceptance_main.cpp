// One PASS/FAIL line per acceptance criterion; exit status 1 if any fails.

#include <cstdio>

#include "cqed/acceptance.hpp"

int main() {
  using namespace cqed::acceptance;
  int failures = 0;
  run_all([&](const Result& r) {
    std::printf("%s\n", format_line(r).c_str());
    std::fflush(stdout);
    if (!r.pass) ++failures;
  });
  std::printf("%d of 11 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
