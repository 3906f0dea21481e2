#pragma once

#include <nlohmann/json.hpp>

#include <stdexcept>
#include <string>
#include <vector>

#include "stable_msu/verify.hpp"

namespace stable_msu {

/// Malformed acceptance configuration (missing key, wrong type, unknown kind).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Names accepted in a check's "kind" field.
const std::vector<std::string>& check_kinds();

/// Runs one check object. Required keys: "name", "kind", "threshold"; the
/// remaining keys depend on the kind. A ConfigError for a missing "kind" or
/// "name" propagates; any error raised while running the check is caught and
/// reported as a failed IdentityReport with details["error"].
IdentityReport run_check(const nlohmann::json& check, std::uint64_t default_seed = 20240229);

/// Runs every entry of config["checks"] without stopping at failures and
/// returns {"schema": 1, "passed", "n_checks", "n_failed", "checks": [...]},
/// checks sorted by name. Contains no timings, so equal configs give
/// byte-identical dumps. An empty object or empty "checks" list passes.
nlohmann::json run_acceptance(const nlohmann::json& config);

/// Parses a JSON file. Throws ConfigError if it cannot be read or parsed.
nlohmann::json load_config(const std::string& path);

}  // namespace stable_msu
