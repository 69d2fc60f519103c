#pragma once

// Gradient verification: both tape engines against central finite
// differences of the plain loss, on reduced architectures and node counts
// so a full sweep over every parameter stays fast.

#include <string>

#include "dem/problems.hpp"

namespace dem::check {

struct GradCheckResult {
  double max_rel_tape = 0.0;
  double max_rel_batched = 0.0;
  bool pass = false;
};

// Shrinks hidden layers (cap 8 wide) and node counts, then compares
// gradients over `n_seeds` random initializations.
GradCheckResult gradcheck(prob::ProblemCode code, int n_seeds = 3,
                          double tol = 1e-5);

prob::ProblemDef reduced_problem(prob::ProblemCode code);

}  // namespace dem::check
