#pragma once

#include <stdexcept>
#include <string>

namespace dg {

// Input data is malformed, inconsistent, or references unknown entities.
class DataError : public std::runtime_error {
 public:
  explicit DataError(const std::string& msg) : std::runtime_error(msg) {}
};

// A numeric computation produced or consumed non-finite values.
class NumericError : public std::runtime_error {
 public:
  explicit NumericError(const std::string& msg) : std::runtime_error(msg) {}
};

// Command-line / configuration misuse.
class UsageError : public std::runtime_error {
 public:
  explicit UsageError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace dg
