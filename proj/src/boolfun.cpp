#include "nsbox/boolfun.hpp"

#include <bit>
#include <stdexcept>

namespace nsbox {

namespace {

void check_arity(int n) {
  if (n < 1 || n > 63) throw std::invalid_argument("function arity must be in [1, 63]");
}

}  // namespace

BooleanFunction BooleanFunction::majority(int n) {
  check_arity(n);
  if (n % 2 == 0) throw std::invalid_argument("majority needs an odd number of bits");
  BooleanFunction f;
  f.n = n;
  f.kind = Kind::Majority;
  return f;
}

BooleanFunction BooleanFunction::parity(int n) {
  check_arity(n);
  BooleanFunction f;
  f.n = n;
  f.kind = Kind::Parity;
  return f;
}

BooleanFunction BooleanFunction::bit(int n, int i) {
  check_arity(n);
  if (i < 1 || i > n) throw std::invalid_argument("bit index out of range");
  BooleanFunction f;
  f.n = n;
  f.kind = Kind::Bit;
  f.bit_index = i;
  return f;
}

BooleanFunction BooleanFunction::constant(int n, int v) {
  check_arity(n);
  if (v != 0 && v != 1) throw std::invalid_argument("constant value must be 0 or 1");
  BooleanFunction f;
  f.n = n;
  f.kind = Kind::Const;
  f.const_value = v;
  return f;
}

BooleanFunction BooleanFunction::from_table(int n, std::vector<std::uint8_t> values) {
  check_arity(n);
  if (n > 25) throw std::invalid_argument("tabulated functions are limited to n <= 25");
  if (values.size() != (std::size_t(1) << n))
    throw std::invalid_argument("table size must be 2^n");
  for (auto v : values)
    if (v > 1) throw std::invalid_argument("table values must be 0 or 1");
  BooleanFunction f;
  f.n = n;
  f.kind = Kind::Table;
  f.values = std::move(values);
  return f;
}

int BooleanFunction::eval(std::uint64_t a) const {
  switch (kind) {
    case Kind::Table:
      return values[a];
    case Kind::Majority:
      return std::popcount(a) * 2 > n ? 1 : 0;
    case Kind::Parity:
      return std::popcount(a) & 1;
    case Kind::Bit:
      return static_cast<int>((a >> (n - bit_index)) & 1u);
    case Kind::Const:
      return const_value;
  }
  return 0;
}

bool BooleanFunction::is_constant() const {
  switch (kind) {
    case Kind::Const:
      return true;
    case Kind::Table: {
      for (auto v : values)
        if (v != values[0]) return false;
      return true;
    }
    default:
      return n == 0;
  }
}

Rat influence(const BooleanFunction& f, const std::string& prefix) {
  if (static_cast<int>(prefix.size()) >= f.n)
    throw std::invalid_argument("influence: prefix must be shorter than the arity");
  if (f.n > 25) throw std::invalid_argument("influence: enumeration limited to n <= 25");
  std::uint64_t head = 0;
  for (char c : prefix) {
    if (c != '0' && c != '1') throw std::invalid_argument("influence: prefix must be binary");
    head = head << 1 | static_cast<std::uint64_t>(c - '0');
  }
  const int i = static_cast<int>(prefix.size()) + 1;  // position being probed
  const int rest = f.n - i;
  long zeros_low = 0, zeros_high = 0;  // f = 0 counts with the probed bit 0 / 1
  for (std::uint64_t suffix = 0; suffix < (std::uint64_t(1) << rest); ++suffix) {
    const std::uint64_t base = head << (f.n - i + 1);
    if (f.eval(base | suffix) == 0) ++zeros_low;
    if (f.eval(base | (std::uint64_t(1) << rest) | suffix) == 0) ++zeros_high;
  }
  return Rat(zeros_low - zeros_high) / pow_rat(Rat(2), rest + 1);
}

}  // namespace nsbox
