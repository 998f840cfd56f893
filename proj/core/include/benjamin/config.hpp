#pragma once

#include <istream>
#include <string>
#include <utility>
#include <vector>

#include "benjamin/evolution.hpp"
#include "benjamin/nonlinear_control.hpp"

namespace benjamin {

struct ControlOptions {
  double horizon = 1.0;
  double tol = 1e-12;
  int max_iter = 20;
  InitialCondition target;
  LargeDataOptions large;
};

/// Everything a CLI scenario needs: one run plus the control targets.
struct Config {
  RunConfig run;
  ControlOptions control;
};

using Overrides = std::vector<std::pair<std::string, std::string>>;

/// Reads a sectioned key = value file (';' or '#' comments). Overrides
/// ("section.key", value) replace or add entries before interpretation.
/// Unknown sections or keys, unparsable values and invalid runs raise
/// ConfigError.
Config parse_config(std::istream& in, const Overrides& overrides = {});
/// An empty path yields the defaults (plus overrides).
Config load_config(const std::string& path, const Overrides& overrides = {});
/// Splits "section.key=value". Throws ConfigError.
std::pair<std::string, std::string> parse_override(const std::string& text);

/// Flat "section.key = value" listing of every resolved setting, in the
/// order they are documented.
std::vector<std::pair<std::string, std::string>> describe(const Config& cfg);

}  // namespace benjamin
