#pragma once

// Acceptance checks. Each criterion recomputes its values with the library and
// compares them against closed forms or finite-difference oracles.

#include <json.hpp>

#include <string>
#include <vector>

namespace ceq {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool passed = false;
  std::string detail;    // deterministic summary of the measured values
  double seconds = 0.0;  // wall time; not part of the JSON report
};

struct VerifyOptions {
  unsigned threads = 0;
  bool full = false;  // adds the control-triangle grid scan and torus region check
};

CriterionResult check_aligned_segment(const VerifyOptions& opt);      // 1
CriterionResult check_triangle_taxonomy(const VerifyOptions& opt);    // 2
CriterionResult check_degenerate_boundary(const VerifyOptions& opt);  // 3
CriterionResult check_pitchfork(const VerifyOptions& opt);            // 4
CriterionResult check_torus_equilateral(const VerifyOptions& opt);    // 5
CriterionResult check_torus_form_signs(const VerifyOptions& opt);     // 6
CriterionResult check_torus_morse_count(const VerifyOptions& opt);    // 7
CriterionResult check_quadrilateral(const VerifyOptions& opt);        // 8
CriterionResult check_derivative_oracles(const VerifyOptions& opt);   // 9
CriterionResult check_inverse_roundtrip(const VerifyOptions& opt);    // 10
CriterionResult check_region_scan(const VerifyOptions& opt);          // 11, full suite
CriterionResult check_torus_regions(const VerifyOptions& opt);        // 12, full suite

/// Criteria 1-10, plus 11-12 when opt.full is set.
std::vector<CriterionResult> run_suite(const VerifyOptions& opt);

/// {suite, passed, criteria: [{id, name, passed, detail}]}.
nlohmann::json report_json(const std::vector<CriterionResult>& results, bool full);

}  // namespace ceq
