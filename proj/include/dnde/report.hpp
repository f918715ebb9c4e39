#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "dnde/params.hpp"

namespace dnde {

struct Check {
  std::string name;
  double value = 0.0;
  double expected = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  std::string paper_anchor;
};

struct Report {
  std::string suite;
  Params params;
  std::vector<Check> checks;
  std::optional<std::string> series_file;
  double wallclock_s = 0.0;
  /// Set when the run aborted; the report then also carries a failing check.
  std::optional<std::string> error;

  bool pass() const;
};

/// Pass iff |value - expected| <= tolerance * |expected| (relative) ...
Check relative_check(std::string name, double value, double expected, double tol, std::string anchor);
/// ... iff |value - expected| <= tolerance (absolute) ...
Check absolute_check(std::string name, double value, double expected, double tol, std::string anchor);
/// ... iff value <= tolerance; `expected` is informational.
Check upper_check(std::string name, double value, double expected, double tol, std::string anchor);
/// ... iff value >= tolerance.
Check lower_check(std::string name, double value, double expected, double tol, std::string anchor);

nlohmann::json to_json(const Report& report);
nlohmann::json params_json(const Params& params);

/// Human-readable one-line-per-check summary.
std::string format_report(const Report& report);

}  // namespace dnde
