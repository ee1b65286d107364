#pragma once

// The qgt command-line front end. run() is the whole program minus the
// process boundary, so tests can drive it with captured streams.

#include "qgt/classifier.hpp"
#include "qgt/itpfi_spec.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

namespace qgt::cli {

struct RunConfig {
  unsigned precision = 32;  // p-adic digits; QGT_PRECISION sets the default
  ClassifierParams classifier;
  Truncation truncation;
  // json | csv; empty = the command default (CSV for tables, JSON otherwise).
  // Commands without a CSV form reject csv as a usage error.
  std::string format;
  std::uint64_t seed = 1;
};

// Defaults with QGT_PRECISION applied.
RunConfig default_config();
// Overlays a JSON config object onto `base`; raises ParseError on unknown
// keys or invalid values.
RunConfig load_config(const nlohmann::json& j, RunConfig base);

// corner-units | corner-dual | corner-selfdual | boca(b) | powers(l)
// | uniform(k) | uniform(p-2) | a JSON rule object.
ListRule parse_rule(const std::string& text);

// Exit codes: 0 success, 1 domain error, 2 usage error.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace qgt::cli
