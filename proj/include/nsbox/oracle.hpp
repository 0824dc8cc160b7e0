#pragma once

#include <string>
#include <vector>

#include "nsbox/attack.hpp"
#include "nsbox/boolfun.hpp"
#include "nsbox/box.hpp"
#include "nsbox/rational.hpp"

namespace nsbox {

// Success probability of guessing f(a) from the side value e, computed with
// a deliberately different loop structure than guessing_probability so the
// two act as independent checks on each other.
Rat brute_force_guess(const ClassicalJoint& q, const BooleanFunction& f);

// All extreme points of the bipartite no-signalling polytope with two inputs
// and two outputs per side, found by enumerating candidate bases of the
// defining equality system.
std::vector<Box> ns_vertices_2x2();

enum class OracleMethod { Lp, Enum };

struct OracleResult {
  Rat value;   // optimal guessing probability at the all-zero input
  Box witness; // verified time-ordered extension achieving it
};

// Exact optimum of the adversary's guessing probability for f on the first
// party's outputs, over all time-ordered no-signalling extensions of `base`.
// Lp solves the extension polytope directly (rounds <= 2); Enum decomposes
// the base over the polytope vertices (single round, binary 2x2 boxes only).
OracleResult optimal_tons_attack(const Box& base, const BooleanFunction& f,
                                 OracleMethod method);

struct PrefixSearchResult {
  std::vector<std::string> code;
  Rat value;
  bool constant_f = false;
};

// Exhaustive search over all nonempty prefix-free codes of codeword length
// <= max_depth for the one maximizing the assembled attack value at noise
// eps. A constant f has no influence anywhere, so the family is stuck at
// 1/2; the flag reports that case (guessing the constant would give 1).
PrefixSearchResult best_prefix_attack(const BooleanFunction& f, int max_depth,
                                      const Rat& eps);

}  // namespace nsbox
