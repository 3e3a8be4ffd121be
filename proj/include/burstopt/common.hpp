#pragma once

#include <stdexcept>
#include <string>

namespace burstopt {

/// Thrown when a solver's size or consistency guard rejects a request that is
/// syntactically valid but outside the solver's supported range (the CLI maps
/// this to exit code 3, while input validation maps to exit code 2).
class SolverGuardError : public std::runtime_error {
 public:
  explicit SolverGuardError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace burstopt
