#pragma once

#include <stdexcept>
#include <string>

namespace macroent {

// Bad input: malformed parameters, out-of-range sites, over-cap sizes.
class ValidationError : public std::invalid_argument {
  public:
    explicit ValidationError(const std::string &msg) : std::invalid_argument(msg) {}
};

// A computation that was well-posed but failed numerically
// (eigensolver non-convergence, vanishing measurement branch, ...).
class NumericalError : public std::runtime_error {
  public:
    explicit NumericalError(const std::string &msg) : std::runtime_error(msg) {}
};

} // namespace macroent
