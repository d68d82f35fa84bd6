#pragma once

#include <stdexcept>
#include <string>

namespace meanfield {

// Configuration problems: bad grammar, malformed potentials, unknown keys.
// The CLI maps this to exit code 2.
struct config_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Requested run does not fit the memory or size budget.  Exit code 3.
struct infeasible_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A numerical invariant failed at run time (norm drift, negative density
// eigenvalue beyond tolerance, truncation overflow).  Exit code 4.
struct numeric_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace meanfield
