#pragma once

#include <stdexcept>

namespace slsht {

/// Bad arguments or malformed inputs. The CLI maps this to exit code 2.
struct ValidationError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Numerical failure (eigensolver non-convergence, vanishing window DC,
/// residue checks). The CLI maps this to exit code 3.
struct NumericError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace slsht
