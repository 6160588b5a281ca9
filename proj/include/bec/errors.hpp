#pragma once

#include <stdexcept>
#include <string>

namespace bec {

// Thrown on violated preconditions (bad parameters, out-of-domain arguments).
// The CLI maps this to exit code 2.
class InvalidInput : public std::runtime_error {
 public:
  explicit InvalidInput(const std::string& what) : std::runtime_error(what) {}
};

// Thrown when an iterative scheme fails to meet its tolerance (quadrature
// subdivision cap, root bracketing, fit quality). The CLI maps this to exit 3.
class NonConvergence : public std::runtime_error {
 public:
  explicit NonConvergence(const std::string& what) : std::runtime_error(what) {}
};

// Thrown when an output file cannot be written. The CLI maps this to exit 4.
class IoError : public std::runtime_error {
 public:
  explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace bec
