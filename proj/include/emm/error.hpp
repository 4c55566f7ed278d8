#pragma once

#include <stdexcept>
#include <string>

namespace emm {

enum class ErrorKind {
  Config,         // invalid user input
  Domain,         // energy or parameter outside the valid window
  Structural,     // a moment key cannot be generated or is missing
  Numerical,      // non-convergence or breakdown
  NoFeasible,     // energy scan found no feasible point
  MultiInterval,  // scan found disjoint feasible runs
};

const char* to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace emm
