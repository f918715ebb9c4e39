#include "dnde/report.hpp"

#include <cmath>
#include <cstdio>

namespace dnde {
namespace {

nlohmann::json number(double v) { return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr); }

}  // namespace

bool Report::pass() const {
  if (error || checks.empty()) return false;
  for (const Check& c : checks) {
    if (!c.pass) return false;
  }
  return true;
}

Check relative_check(std::string name, double value, double expected, double tol, std::string anchor) {
  const bool ok = std::abs(value - expected) <= tol * std::abs(expected);
  return Check{std::move(name), value, expected, tol, ok, std::move(anchor)};
}

Check absolute_check(std::string name, double value, double expected, double tol, std::string anchor) {
  const bool ok = std::abs(value - expected) <= tol;
  return Check{std::move(name), value, expected, tol, ok, std::move(anchor)};
}

Check upper_check(std::string name, double value, double expected, double tol, std::string anchor) {
  const bool ok = value <= tol;
  return Check{std::move(name), value, expected, tol, ok, std::move(anchor)};
}

Check lower_check(std::string name, double value, double expected, double tol, std::string anchor) {
  const bool ok = value >= tol;
  return Check{std::move(name), value, expected, tol, ok, std::move(anchor)};
}

nlohmann::json params_json(const Params& p) {
  return {{"n", p.n},         {"p", p.p},         {"gamma", p.gamma}, {"b", p.b},
          {"q", p.q},         {"sigma", p.sigma}, {"a", p.a},         {"regime", to_string(p.regime)}};
}

nlohmann::json to_json(const Report& r) {
  nlohmann::json checks = nlohmann::json::array();
  for (const Check& c : r.checks) {
    checks.push_back({{"name", c.name},
                      {"value", number(c.value)},
                      {"expected", number(c.expected)},
                      {"tolerance", number(c.tolerance)},
                      {"pass", c.pass},
                      {"paper_anchor", c.paper_anchor}});
  }
  nlohmann::json j;
  j["suite"] = r.suite;
  j["params"] = params_json(r.params);
  j["checks"] = checks;
  j["series_file"] = r.series_file ? nlohmann::json(*r.series_file) : nlohmann::json(nullptr);
  j["wallclock_s"] = r.wallclock_s;
  if (r.error) j["error"] = *r.error;
  return j;
}

std::string format_report(const Report& r) {
  std::string out = r.suite + "  " + describe(r.params) + "\n";
  char buf[512];
  for (const Check& c : r.checks) {
    std::snprintf(buf, sizeof buf, "  [%s] %-24s value=%-14.8g expected=%-14.8g tol=%-10.6g (%s)\n",
                  c.pass ? "PASS" : "FAIL", c.name.c_str(), c.value, c.expected, c.tolerance,
                  c.paper_anchor.c_str());
    out += buf;
  }
  if (r.error) out += "  error: " + *r.error + "\n";
  std::snprintf(buf, sizeof buf, "  %s in %.2fs\n", r.pass() ? "PASS" : "FAIL", r.wallclock_s);
  out += buf;
  return out;
}

}  // namespace dnde
