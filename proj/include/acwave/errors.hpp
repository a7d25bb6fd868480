#pragma once

#include <stdexcept>
#include <string>

namespace acwave {

// Error categories map one-to-one onto process exit codes (see tools/):
//   ValidationError -> 2   rejected input or violated precondition
//   NumericalError  -> 3   runtime numerical failure (instability, divergence,
//                          truncation shortfall, contamination, ...)
//   IoError         -> 4   file read/write failure
//
// The message names the violated condition; callers that need to distinguish
// finer kinds (segment vs pole, contamination vs overflow) match on it.

class ValidationError : public std::runtime_error {
public:
  explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

class NumericalError : public std::runtime_error {
public:
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

class IoError : public std::runtime_error {
public:
  explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace acwave
