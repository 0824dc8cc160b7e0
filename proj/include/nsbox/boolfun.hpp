#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "nsbox/rational.hpp"

namespace nsbox {

// Total boolean function on n-bit strings. Strings are packed big-endian:
// bit 1 is the most significant. Tabulated functions are limited to n <= 25;
// the named families evaluate procedurally at any n.
struct BooleanFunction {
  enum class Kind { Table, Majority, Parity, Bit, Const };

  int n = 0;
  Kind kind = Kind::Const;
  int bit_index = 1;   // Kind::Bit, 1-based
  int const_value = 0; // Kind::Const
  std::vector<std::uint8_t> values;  // Kind::Table, size 2^n

  static BooleanFunction majority(int n);  // n odd
  static BooleanFunction parity(int n);
  static BooleanFunction bit(int n, int i);
  static BooleanFunction constant(int n, int v);
  static BooleanFunction from_table(int n, std::vector<std::uint8_t> values);

  int eval(std::uint64_t a) const;
  bool is_constant() const;  // semantic: scans tabulated values
};

// Influence of the bit following `prefix` (chars '0'/'1', length < n) under
// the uniform measure: half the difference in P(f = 0) between setting that
// bit to 0 and to 1. Exact; enumerates the 2^(n - |prefix| - 1) suffixes.
Rat influence(const BooleanFunction& f, const std::string& prefix);

}  // namespace nsbox
