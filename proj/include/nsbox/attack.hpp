#pragma once

#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "nsbox/boolfun.hpp"
#include "nsbox/box.hpp"

namespace nsbox {

// Joint distribution Q(a_1..a_n, e) over Alice's n bits and Eve's bit.
// Index = (a packed big-endian) * 2 + e.
struct ClassicalJoint {
  int n = 0;
  std::vector<Rat> p;

  bool valid(std::string* why = nullptr) const;
};

// Subset of round indices {1..n} that Eve may influence. Bit (i - 1) of
// `mask` is set iff round i is a member.
struct SubsetS {
  int n = 0;
  std::uint64_t mask = 0;

  static SubsetS from_members(int n, const std::vector<int>& members);
  std::vector<int> members() const;
  int size() const { return __builtin_popcountll(mask); }
  bool contains(int i) const { return (mask >> (i - 1)) & 1u; }
};

// Prefix-free set of binary codewords; "" denotes the empty word. A codeword
// c biases bit |c| + 1, so lengths must stay <= n - 1.
struct PrefixCode {
  std::vector<std::string> codewords;
};

// Throws std::invalid_argument unless the code is prefix-free, binary, and
// all codewords are shorter than n.
void validate_prefix_code(const PrefixCode& code, int n);

// Kraft sum == 1, i.e. the codewords exhaust all strings.
bool is_complete_code(const PrefixCode& code);

struct SInfluenceCheck {
  bool ok = false;
  std::string diagnostics;
};

// Checks the two defining conditions: sum_e Q(a, e) = 2^-n for every a, and
// Q(a_i | a_<i, e) = 1/2 for every round i outside S wherever the
// conditioning event has positive probability.
SInfluenceCheck validate_s_influenceable(const ClassicalJoint& q, const SubsetS& s);

// (1 - 2 eps)^(n - |S|) * (2 eps)^|S|
Rat weight(const SubsetS& s, const Rat& eps);

ClassicalJoint uniform_joint(int n);

// Weighted mixture over every subset of {1..n}; the family must contain a
// valid member for each subset mask.
ClassicalJoint assemble_divisible(const std::map<std::uint64_t, ClassicalJoint>& family,
                                  int n, const Rat& eps);

// Extends q to a full (2n+1)-system box: rounds outside S behave like v,
// rounds in S give Bob a uniform output and draw Alice's bit from q's
// conditional (1/2 where the conditional is undefined). The result's
// marginal on the first two parties is the round-wise product of uniform
// (in S) and v (outside S) boxes, its marginal on Alice plus Eve equals q,
// and it passes the time-ordered check.
Box build_tons_extension(const ClassicalJoint& q, const SubsetS& s, const Box& v);

// Eve's bit is fair; after a matched codeword c with round |c| + 1 in S,
// Alice's next bit is pushed toward e when the influence at c is positive,
// away when negative, and left fair when zero. All other bits are fair.
ClassicalJoint prefix_code_attack(const BooleanFunction& f, const PrefixCode& code,
                                  const SubsetS& s);

// Majority of the S-indexed bits; an even-sized S drops its largest index.
int majority_s(std::uint64_t a, const SubsetS& s);

// Eve outputs Maj_S(a_S); Alice's string is uniform among the consistent
// ones. S must be nonempty.
ClassicalJoint majority_attack(int n, const SubsetS& s);

// Random joint satisfying the S-influenceable conditions, built by splitting
// prefix-tree masses with denominators dividing `denom` at each S round.
ClassicalJoint random_s_influenceable(int n, const SubsetS& s, std::mt19937_64& rng,
                                      int denom = 16);

// All complete prefix codes with codeword lengths <= max_depth
// (1, 2, 5, 26 codes for depths 0..3).
std::vector<PrefixCode> enumerate_complete_codes(int max_depth);

// All nonempty prefix-free codes with codeword lengths <= max_depth.
std::vector<PrefixCode> enumerate_prefix_codes(int max_depth);

// Families keyed by subset mask, for assemble_divisible.
std::map<std::uint64_t, ClassicalJoint> prefix_attack_family(const BooleanFunction& f,
                                                             const PrefixCode& code);
std::map<std::uint64_t, ClassicalJoint> majority_attack_family(int n);

}  // namespace nsbox
