#pragma once

#include <string>
#include <vector>

#include "nsbox/attack.hpp"

namespace nsbox {

// P(f(a) = e) under the joint q. Exact.
Rat guessing_probability(const ClassicalJoint& q, const BooleanFunction& f);

// Closed-form value of the assembled prefix-code attack on the n-bit
// majority: 1/2 + eps * 2^(1-n) * binom(n-1, (n-1)/2). n odd.
Rat prefix_majority_value(int n, const Rat& eps);

// Value of any assembled prefix-code attack:
// 1/2 + 2 eps * sum_m 2^(-|c_m|) |influence(f, c_m)|. Exact; equals the
// brute-force value of the assembled mixture.
Rat assembled_prefix_value(const BooleanFunction& f, const PrefixCode& code, const Rat& eps);

// P(Maj_n(a) = Maj_S(a_S)) for uniform a and |S| = s; depends only on s.
// n odd, 1 <= s <= n. Exact double binomial sum.
Rat majority_agreement(int n, int s);
double majority_agreement_f(long n, long s);

// Mixture value sum_s binom(n,s) (1-2e)^(n-s) (2e)^s g(n,s), with
// g(n,0) = 1/2. Equals the value of the assembled majority attack.
// The exact path covers n <= 25; use the float path beyond.
Rat divisible_majority_value(int n, const Rat& eps);
double divisible_majority_value_f(long n, double eps);

// Large-n limit of g(n, c*n): 1 - arctan(sqrt((1-c)/c)) / pi, 0 < c < 1.
double asymptotic_majority_value(double c);

// The same limit at c = 2*eps - delta; a lower bound on the divisible
// majority value for large n. Requires 0 < 2*eps - delta < 1.
double asymptotic_divisible_bound(double eps, double delta);

// 1/2 + eps / (2n): the single-round baseline every attack family beats.
double baseline_bound(long n, double eps);

struct SweepRow {
  long n = 0;
  Rat eps;
  double prefix_bias = 0;    // closed-form prefix-attack bias on majority
  double majority_bias = 0;  // divisible majority-attack bias
  double ratio = 0;
  double baseline = 0;       // 1/2 + eps/(2n)
  double limit_at_2eps = 0;  // asymptotic value at c = 2 eps
};

// One row per n (all odd). Uses exact biases for n <= 25, floats beyond.
std::vector<SweepRow> separation_sweep(const std::vector<long>& ns, const Rat& eps);

}  // namespace nsbox
