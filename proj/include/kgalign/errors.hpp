#pragma once

#include <stdexcept>
#include <string>

namespace kgalign {

// Raised for malformed input files (wrong arity, bad header, bad floats).
class parse_error : public std::runtime_error {
 public:
  explicit parse_error(const std::string& msg) : std::runtime_error(msg) {}
};

// Raised when a dataset directory is missing files or internally inconsistent.
class dataset_error : public std::runtime_error {
 public:
  explicit dataset_error(const std::string& msg) : std::runtime_error(msg) {}
};

// Raised for out-of-contract arguments (bad fractions, k out of range, ...).
class argument_error : public std::invalid_argument {
 public:
  explicit argument_error(const std::string& msg) : std::invalid_argument(msg) {}
};

}  // namespace kgalign
