#include "nsbox/eval.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace nsbox {

namespace {

void require_odd(int n) {
  if (n < 1 || n % 2 == 0) throw std::invalid_argument("n must be odd and positive");
}

// log k! with a growing cache
double log_factorial(long k) {
  static std::vector<double> cache{0.0, 0.0};
  while (static_cast<long>(cache.size()) <= k)
    cache.push_back(cache.back() + std::log(static_cast<double>(cache.size())));
  return cache[static_cast<std::size_t>(k)];
}

double log_binom(long n, long k) {
  return log_factorial(n) - log_factorial(k) - log_factorial(n - k);
}

// effective odd majority size: an even subset drops one bit
long effective_size(long s) { return s % 2 == 1 ? s : s - 1; }

// g(n, t) for odd t >= 1 via P(Binom(R,1/2) >= j) tails, R = n - t
double agreement_for_odd(long n, long t) {
  const long R = n - t;
  const double log2 = std::numbers::ln2;
  std::vector<double> tail(static_cast<std::size_t>(R) + 2, 0.0);
  for (long j = R; j >= 0; --j)
    tail[static_cast<std::size_t>(j)] = tail[static_cast<std::size_t>(j) + 1] +
                                        std::exp(log_binom(R, j) - static_cast<double>(R) * log2);
  const long m = (n + 1) / 2;
  double total = 0.0;
  for (long k = 0; k <= t; ++k) {
    const double pk = std::exp(log_binom(t, k) - static_cast<double>(t) * log2);
    double p_tail;  // P(K >= m | k ones among the t)
    if (m - k <= 0)
      p_tail = 1.0;
    else if (m - k > R)
      p_tail = 0.0;
    else
      p_tail = tail[static_cast<std::size_t>(m - k)];
    total += pk * (2 * k > t ? p_tail : 1.0 - p_tail);
  }
  return total;
}

}  // namespace

Rat guessing_probability(const ClassicalJoint& q, const BooleanFunction& f) {
  std::string why;
  if (!q.valid(&why)) throw std::invalid_argument("guessing_probability: invalid joint: " + why);
  if (f.n != q.n) throw std::invalid_argument("guessing_probability: arity mismatch");
  Rat total(0);
  for (std::uint64_t a = 0; a < (std::uint64_t(1) << q.n); ++a)
    total += q.p[a * 2 + static_cast<std::uint64_t>(f.eval(a))];
  return total;
}

Rat prefix_majority_value(int n, const Rat& eps) {
  require_odd(n);
  if (eps < 0 || eps > Rat(1, 2)) throw std::invalid_argument("noise level out of range");
  return Rat(1, 2) + eps * pow_rat(Rat(2), 1 - n) * Rat(binom(n - 1, (n - 1) / 2));
}

Rat assembled_prefix_value(const BooleanFunction& f, const PrefixCode& code, const Rat& eps) {
  validate_prefix_code(code, f.n);
  if (eps < 0 || eps > Rat(1, 2)) throw std::invalid_argument("noise level out of range");
  Rat sum(0);
  for (const auto& c : code.codewords) {
    Rat d = influence(f, c);
    if (d < 0) d = -d;
    sum += pow_rat(Rat(1, 2), static_cast<long>(c.size())) * d;
  }
  return Rat(1, 2) + 2 * eps * sum;
}

Rat majority_agreement(int n, int s) {
  require_odd(n);
  if (s < 1 || s > n) throw std::invalid_argument("subset size must be in [1, n]");
  const long t = effective_size(s);
  const long R = n - t;
  // count strings where Maj over the t bits matches Maj over all n
  Int agree(0);
  for (long k = 0; k <= t; ++k)
    for (long r = 0; r <= R; ++r) {
      const bool maj_t = 2 * k > t;
      const bool maj_n = 2 * (k + r) > n;
      if (maj_t == maj_n) agree += binom(t, k) * binom(R, r);
    }
  return Rat(agree) / pow_rat(Rat(2), n);
}

double majority_agreement_f(long n, long s) {
  if (n < 1 || n % 2 == 0) throw std::invalid_argument("n must be odd and positive");
  if (s < 1 || s > n) throw std::invalid_argument("subset size must be in [1, n]");
  return agreement_for_odd(n, effective_size(s));
}

Rat divisible_majority_value(int n, const Rat& eps) {
  require_odd(n);
  if (n > 25) throw std::invalid_argument("exact path covers n <= 25; use the float path");
  if (eps < 0 || eps > Rat(1, 2)) throw std::invalid_argument("noise level out of range");
  Rat total(0);
  for (int s = 0; s <= n; ++s) {
    const Rat w = Rat(binom(n, s)) * pow_rat(1 - 2 * eps, n - s) * pow_rat(2 * eps, s);
    const Rat g = s == 0 ? Rat(1, 2) : majority_agreement(n, s);
    total += w * g;
  }
  return total;
}

double divisible_majority_value_f(long n, double eps) {
  if (n < 1 || n % 2 == 0) throw std::invalid_argument("n must be odd and positive");
  if (eps < 0.0 || eps > 0.5) throw std::invalid_argument("noise level out of range");
  const double p = 2.0 * eps;
  if (p == 0.0) return 0.5;
  if (p == 1.0) return 1.0;  // g(n, n) = 1
  // g depends on s only through the effective odd size
  std::vector<double> g_odd(static_cast<std::size_t>(n) + 1, 0.0);
  for (long t = 1; t <= n; t += 2)
    g_odd[static_cast<std::size_t>(t)] = agreement_for_odd(n, t);
  const double lp = std::log(p), lq = std::log1p(-p);
  double total = 0.0;
  for (long s = 0; s <= n; ++s) {
    const double w = std::exp(log_binom(n, s) + static_cast<double>(s) * lp +
                              static_cast<double>(n - s) * lq);
    const long t = effective_size(s);
    total += w * (t <= 0 ? 0.5 : g_odd[static_cast<std::size_t>(t)]);
  }
  return total;
}

double asymptotic_majority_value(double c) {
  if (!(c > 0.0 && c < 1.0)) throw std::invalid_argument("c must lie in (0, 1)");
  return 1.0 - std::atan(std::sqrt((1.0 - c) / c)) / std::numbers::pi;
}

double asymptotic_divisible_bound(double eps, double delta) {
  const double c = 2.0 * eps - delta;
  if (!(c > 0.0 && c < 1.0))
    throw std::invalid_argument("2*eps - delta must lie in (0, 1)");
  return asymptotic_majority_value(c);
}

double baseline_bound(long n, double eps) {
  if (n < 1) throw std::invalid_argument("n must be positive");
  return 0.5 + eps / (2.0 * static_cast<double>(n));
}

std::vector<SweepRow> separation_sweep(const std::vector<long>& ns, const Rat& eps) {
  if (eps < 0 || eps > Rat(1, 2)) throw std::invalid_argument("noise level out of range");
  const double e = to_double(eps);
  std::vector<SweepRow> rows;
  for (long n : ns) {
    if (n < 1 || n % 2 == 0) throw std::invalid_argument("sweep needs odd n");
    SweepRow row;
    row.n = n;
    row.eps = eps;
    if (n <= 25) {
      row.prefix_bias = to_double(prefix_majority_value(static_cast<int>(n), eps) - Rat(1, 2));
      row.majority_bias = to_double(divisible_majority_value(static_cast<int>(n), eps) - Rat(1, 2));
    } else {
      row.prefix_bias = e * std::exp(log_binom(n - 1, (n - 1) / 2) -
                                     static_cast<double>(n - 1) * std::numbers::ln2);
      row.majority_bias = divisible_majority_value_f(n, e) - 0.5;
    }
    row.ratio = row.prefix_bias == 0.0 ? 0.0 : row.majority_bias / row.prefix_bias;
    row.baseline = baseline_bound(n, e);
    // continuous extension at the endpoints
    row.limit_at_2eps = e <= 0.0 ? 0.5 : e >= 0.5 ? 1.0 : asymptotic_majority_value(2.0 * e);
    rows.push_back(row);
  }
  return rows;
}

}  // namespace nsbox
