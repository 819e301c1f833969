#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace akprop {

class config_error : public std::runtime_error {
 public:
  explicit config_error(const std::string& what) : std::runtime_error(what) {}
};

struct ScenarioOutcome {
  int exit_code = 0;  // 0 all checks pass; 1 computation failed or check red
  std::vector<std::string> summary;  // one machine-parseable line per check
  std::vector<std::string> files;    // result tables and the JSON summary
};

/// Validates and executes one scenario configuration (JSON text).  Unknown
/// keys anywhere in the document are rejected.  Throws config_error on
/// validation problems; computation errors surface as exceptions from the
/// compute modules.
ScenarioOutcome run_scenario(const std::string& json_text,
                             const std::string& out_dir_override = "");

ScenarioOutcome run_scenario_file(const std::string& path,
                                  const std::string& out_dir_override = "");

}  // namespace akprop
