#pragma once

#include <ostream>

namespace bfi::cli {

/// Process exit codes. Stable; documented in the README.
enum ExitCode : int {
  kOk = 0,                     // includes FI not attained
  kNotApplicable = 2,          // k = 0 probability does not exceed p0
  kInputError = 3,             // unreadable/invalid input or bad flags
  kNumericalFailure = 4,       // convergence or bracketing failure
  kReproductionMismatch = 5,   // reproduce-paper: computed FI differs from published
};

/// Entry point shared by the executable and the tests. Reports go to `out`
/// (or the --out file); one-line diagnostics go to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace bfi::cli
