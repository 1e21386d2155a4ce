#include "torsionlab/report.hpp"

#include <cstdio>

namespace torsionlab::report {

bool ReportDocument::all_pass() const {
  for (const auto& c : checks)
    if (!c.pass) return false;
  return true;
}

json ReportDocument::to_json() const {
  json j;
  j["schema_version"] = io::kSchemaVersion;
  j["all_pass"] = all_pass();
  j["checks"] = json::array();
  for (const auto& c : checks) {
    json cj;
    cj["name"] = c.name;
    cj["status"] = c.pass ? "PASS" : "FAIL";
    cj["residual"] = c.residual;
    cj["tolerance"] = c.tolerance;
    if (!c.computed.is_null()) cj["computed"] = c.computed;
    j["checks"].push_back(std::move(cj));
  }
  return j;
}

std::string ReportDocument::to_text() const {
  std::string out;
  char line[256];
  for (const auto& c : checks) {
    std::snprintf(line, sizeof(line), "[%s] %-42s residual=%.3e tol=%.1e\n",
                  c.pass ? "PASS" : "FAIL", c.name.c_str(), c.residual, c.tolerance);
    out += line;
  }
  out += all_pass() ? "all checks passed\n" : "CHECK FAILURES PRESENT\n";
  return out;
}

}  // namespace torsionlab::report
