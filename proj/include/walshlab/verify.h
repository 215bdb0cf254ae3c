#ifndef WALSHLAB_VERIFY_H_
#define WALSHLAB_VERIFY_H_

// Acceptance checks. Each check runs one criterion at its pinned tolerance and
// reports pass/fail with the measured quantities. Used by the acceptance test
// binary and by `walsh-lab verify`.

#include <string>
#include <vector>

#include "walshlab/hardy.h"

namespace walshlab {

// Fixed set of eight functions on a 32 x 32 grid: five random atoms (valid for
// every p in [1/2, 1]) followed by three random functions with spectrum in
// [0, 8)^2. Deterministic.
std::vector<Martingale2> weisz_test_set();

struct CheckResult {
  int id = 0;
  std::string name;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
};

CheckResult check_dyadic_kernels();             // 1
CheckResult check_paley_identity(int bits = 10);  // 2
CheckResult check_transform();                  // 3
CheckResult check_atoms();                      // 4
CheckResult check_coefficient_pattern();        // 5
CheckResult check_closed_form();                // 6
CheckResult check_lower_bound();                // 7
CheckResult check_divergence();                 // 8
CheckResult check_weisz_boundedness();          // 9
CheckResult check_negative_control();           // 10

// Suites: kernels, transform, hardy, summability, counterexample, all.
std::vector<CheckResult> run_suite(const std::string& suite, int bits = 10);

std::string format_result(const CheckResult& r);

}  // namespace walshlab

#endif  // WALSHLAB_VERIFY_H_
