// One line per acceptance criterion; nonzero exit if any fails.

#include "coulomb_eq/io.hpp"
#include "coulomb_eq/verification.hpp"

#include <iostream>

int main() {
  const ceq::VerifyOptions opt;
  bool all = true;
  for (const auto& r : ceq::run_suite(opt)) {
    all = all && r.passed;
    std::cout << (r.passed ? "PASS" : "FAIL") << " criterion " << r.id << ": " << r.name << " | " << r.detail
              << " | " << ceq::format_double(r.seconds) << " s\n";
  }
  return all ? 0 : 1;
}
