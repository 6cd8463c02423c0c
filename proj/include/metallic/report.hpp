#pragma once

#include "metallic/catalog.hpp"
#include "metallic/checks.hpp"

#include <json.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace metallic {

inline constexpr const char* version = "1.0.0";
inline constexpr int schema_version = 1;

enum class Suite { structure, slant, connection, inheritance };

const char* to_string(Suite suite);

/// "structure", "slant", "connection", "inheritance" or "all" (every suite, fixed order).
std::vector<Suite> parse_suites(const std::string& text);

struct RunConfig {
  std::string entry;
  ParamMap params;
  int samples = 20;
  std::uint64_t seed = 0;
  DerivativeMode mode = DerivativeMode::analytic;
  std::vector<Suite> suites{Suite::structure, Suite::slant, Suite::connection, Suite::inheritance};

  // Unset tolerances take the defaults below.
  std::optional<double> tol_structure;    // 1e-9 analytic, 1e-5 central differences
  std::optional<double> tol_angle;        // 1e-6
  std::optional<double> tol_connection;   // 1e-10 for linear entries in analytic mode, else 1e-5
  std::optional<double> tol_inheritance;  // 1e-8
  std::optional<double> tol_oracle;       // 1e-8

  /// Throws DomainError when samples < 1 or a tolerance is not positive.
  void validate() const;
};

struct RunResult {
  nlohmann::ordered_json report;
  std::vector<VerificationReport> suites;
  bool passed = true;
};

/// Builds the entry and runs the selected suites in fixed order.
RunResult run(const RunConfig& config);

/// Sigma-structure at the first sample point and the slant summary.
nlohmann::ordered_json analyze(const RunConfig& config);

/// Indented JSON with every float printed with 17 significant digits; non-finite
/// numbers become null.
std::string to_json_text(const nlohmann::ordered_json& value);

/// One line per check: PASS/FAIL/INFO suite.name residual tolerance.
std::string summary_text(const RunResult& result);

}  // namespace metallic
