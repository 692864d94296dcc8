#pragma once

// JSON and CSV serialization of configurations, solve results, inverse results
// and bifurcation data. All output is deterministic for identical input.

#include "coulomb_eq/bifurcation.hpp"
#include "coulomb_eq/inverse.hpp"
#include "coulomb_eq/morse.hpp"

#include <json.hpp>

#include <cstdint>
#include <string>
#include <string_view>

namespace ceq {

inline constexpr std::string_view kToolName = "coulomb-eq";
inline constexpr std::string_view kToolVersion = "1.0.0";

/// Shortest decimal string that round-trips to the same double ("." decimal point).
std::string format_double(double v);

/// 64-bit FNV-1a.
std::uint64_t fnv1a(std::string_view bytes);
std::string hex64(std::uint64_t v);

nlohmann::json to_json(const Configuration& config);
/// {space: "polygon", points: [[x, y], ...]} or
/// {space: "torus", radii: [r1, r2, r3], angles: [a1, a2, a3?]}.
Configuration config_from_json(const nlohmann::json& j);

nlohmann::json to_json(const SolveSettings& settings);
nlohmann::json to_json(const CriticalPoint& cp);
nlohmann::json to_json(const MorseSummary& summary);
nlohmann::json to_json(const InverseResult& result);
nlohmann::json to_json(const ThresholdResult& threshold);

nlohmann::json solve_document(const Space& space, const ChargeVector& q, const PotentialSpec& spec,
                              const SolveResult& result, const MorseSummary& summary);

/// Header: lambda,q1,q2,q3,branch,amplitude,energy,stability
std::string branch_csv(const BranchDiagram& diagram);
/// Header: curve,label,q1,q2,q3
std::string curves_csv(const std::vector<BifurcationCurve>& curves);

struct RunManifest {
  std::string command;
  nlohmann::json arguments;  // every flag that affects the output
  std::string input_hash;    // FNV-1a of the canonical argument dump
  std::string version{kToolVersion};

  static RunManifest make(std::string command, nlohmann::json arguments);
  nlohmann::json to_json() const;
};

}  // namespace ceq
