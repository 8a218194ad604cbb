#pragma once

#include <stdexcept>
#include <string>

namespace qsage {

// Malformed or inconsistent input data (files, rows, model documents).
class DataError : public std::runtime_error {
 public:
  explicit DataError(const std::string& what) : std::runtime_error(what) {}
};

// Invalid configuration (search configs, workload configs, model specs).
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace qsage
