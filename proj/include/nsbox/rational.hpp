#pragma once

#include <boost/multiprecision/gmp.hpp>
#include <string>

namespace nsbox {

using Rat = boost::multiprecision::mpq_rational;
using Int = boost::multiprecision::mpz_int;

// Parses "p/q" or plain "p" (decimal, optional leading '-'). Throws
// std::invalid_argument on malformed input or a zero denominator.
Rat parse_rat(const std::string& s);

// Always emits "p/q", including "0/1" and "3/1", with canonical sign on p.
std::string format_rat(const Rat& r);

Rat pow_rat(const Rat& base, long exp);

Int binom(long n, long k);

double to_double(const Rat& r);

}  // namespace nsbox
