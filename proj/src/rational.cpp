#include "nsbox/rational.hpp"

#include <stdexcept>

namespace nsbox {

namespace {

bool all_digits(const std::string& s, std::size_t from, std::size_t to) {
  if (from >= to) return false;
  for (std::size_t i = from; i < to; ++i)
    if (s[i] < '0' || s[i] > '9') return false;
  return true;
}

}  // namespace

Rat parse_rat(const std::string& s) {
  std::size_t slash = s.find('/');
  std::string num = slash == std::string::npos ? s : s.substr(0, slash);
  std::string den = slash == std::string::npos ? "1" : s.substr(slash + 1);
  std::size_t num_start = (!num.empty() && num[0] == '-') ? 1 : 0;
  if (!all_digits(num, num_start, num.size()) || !all_digits(den, 0, den.size()))
    throw std::invalid_argument("not a rational: '" + s + "'");
  Int p(num), q(den);
  if (q == 0) throw std::invalid_argument("zero denominator: '" + s + "'");
  return Rat(p, q);
}

std::string format_rat(const Rat& r) {
  return numerator(r).str() + "/" + denominator(r).str();
}

Rat pow_rat(const Rat& base, long exp) {
  if (exp == 0) return Rat(1);
  if (exp < 0) {
    if (base == 0) throw std::invalid_argument("pow_rat: zero to negative power");
    return Rat(1) / pow_rat(base, -exp);
  }
  Rat acc(1), b = base;
  long e = exp;
  while (e > 0) {
    if (e & 1) acc *= b;
    b *= b;
    e >>= 1;
  }
  return acc;
}

Int binom(long n, long k) {
  if (k < 0 || k > n) return Int(0);
  if (k > n - k) k = n - k;
  Int acc(1);
  for (long i = 1; i <= k; ++i) {
    acc *= Int(n - k + i);
    acc /= Int(i);  // exact at every step
  }
  return acc;
}

double to_double(const Rat& r) { return r.convert_to<double>(); }

}  // namespace nsbox
