// satdist: learning distributions over satisfying assignments
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace satdist {

/// Error categories, aligned with the CLI exit codes.
enum class errc : int {
  config = 2,         // bad input, bad flag, malformed file, dimension misuse
  unsatisfiable = 3,  // f has no satisfying assignment where one is required
  numeric = 4,        // non-finite values, sampler gave up, support violation
};

class Error : public std::runtime_error {
public:
  Error(errc code, const std::string& msg) : std::runtime_error(msg), code_(code) {}
  errc code() const noexcept { return code_; }

private:
  errc code_;
};

struct ConfigError : Error {
  explicit ConfigError(const std::string& msg) : Error(errc::config, msg) {}
};

struct UnsatisfiableError : Error {
  explicit UnsatisfiableError(const std::string& msg) : Error(errc::unsatisfiable, msg) {}
};

struct NumericError : Error {
  explicit NumericError(const std::string& msg) : Error(errc::numeric, msg) {}
};

}  // namespace satdist
