#pragma once

#include <vector>

#include "nsbox/rational.hpp"

namespace nsbox {

// maximize objective . x  subject to  rows . x = rhs, x >= 0
struct LinearProgram {
  int num_vars = 0;
  std::vector<std::vector<Rat>> rows;
  std::vector<Rat> rhs;
  std::vector<Rat> objective;
};

enum class LpStatus { Optimal, Infeasible, Unbounded };

struct LpResult {
  LpStatus status = LpStatus::Infeasible;
  Rat value;
  std::vector<Rat> solution;
};

// Exact two-phase simplex over rationals. Redundant equality rows are
// eliminated up front; pivoting uses the largest reduced cost with a switch
// to Bland's rule when the objective stalls.
LpResult solve_lp(const LinearProgram& lp);

}  // namespace nsbox
