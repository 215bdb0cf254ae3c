// One line per acceptance criterion; exit status 1 if any of them fails.
#include <cstdio>

#include "walshlab/verify.h"

int main() {
  const auto results = walshlab::run_suite("all", 10);
  int failed = 0;
  for (const auto& r : results) {
    std::printf("%s\n", walshlab::format_result(r).c_str());
    failed += !r.passed;
  }
  std::printf("%zu/%zu criteria passed\n", results.size() - failed, results.size());
  return failed == 0 ? 0 : 1;
}
