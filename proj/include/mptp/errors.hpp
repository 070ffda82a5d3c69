#pragma once

#include <stdexcept>
#include <string>

namespace mptp {

// Failure categories; the CLI maps them to exit codes 1/2/3.
enum class ErrorKind { config = 1, solver = 2, statistics = 3 };

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

// Bad configs, unknown ids, dimension mismatches, invalid parameter ranges.
struct ConfigError : Error {
  explicit ConfigError(const std::string& w) : Error(ErrorKind::config, w) {}
};

// Numerical failures: singular drifts, non-finite states, domain violations.
struct SolverError : Error {
  explicit SolverError(const std::string& w) : Error(ErrorKind::solver, w) {}
};

// Monte-Carlo estimates without enough statistical power.
struct StatisticsError : Error {
  explicit StatisticsError(const std::string& w) : Error(ErrorKind::statistics, w) {}
};

}  // namespace mptp
