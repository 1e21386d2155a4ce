#pragma once

#include "torsionlab/io.hpp"

namespace torsionlab::report {

using io::json;

struct Check {
  std::string name;
  bool pass = false;
  double residual = 0.0;
  double tolerance = 0.0;
  json computed;  // named quantities (betti tables, page dims, torsions, ...)
};

struct ReportDocument {
  std::vector<Check> checks;

  bool all_pass() const;
  void add(Check c) { checks.push_back(std::move(c)); }
  json to_json() const;
  std::string to_text() const;
};

}  // namespace torsionlab::report
