#pragma once

#include <stdexcept>
#include <string>

namespace wpcn {

// Raised for malformed or out-of-range configuration input (JSON files,
// --set overrides, scenario generation knobs).  The CLI maps this to a
// distinct exit code so scripts can tell bad input from failed checks.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace wpcn
