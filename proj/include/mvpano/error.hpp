#pragma once

#include <stdexcept>
#include <string>

namespace mvpano {

/// Coarse error category, mapped to distinct process exit codes by the CLI.
enum class ErrorKind {
  config,   // invalid configuration, flags, or API contract violation
  data,     // malformed, mismatched, or missing data
  numeric,  // NaN, singularity, undefined metric
};

class Error : public std::runtime_error {
public:
  Error(ErrorKind kind, const std::string& msg) : std::runtime_error(msg), kind_(kind) {}
  ErrorKind kind() const { return kind_; }

private:
  ErrorKind kind_;
};

[[noreturn]] inline void throw_config(const std::string& msg) { throw Error(ErrorKind::config, msg); }
[[noreturn]] inline void throw_data(const std::string& msg) { throw Error(ErrorKind::data, msg); }
[[noreturn]] inline void throw_numeric(const std::string& msg) { throw Error(ErrorKind::numeric, msg); }

}  // namespace mvpano
