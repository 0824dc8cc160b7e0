#include "nsbox/attack.hpp"

#include <algorithm>
#include <array>
#include <map>
#include <stdexcept>

namespace nsbox {

namespace {

void check_joint_arity(int n) {
  if (n < 1 || n > 25) throw std::invalid_argument("joint arity must be in [1, 25]");
}

// masses[e][level][prefix]: total probability of strings starting with the
// given prefix, jointly with Eve's bit e. Level i holds 2^i prefixes.
using PrefixMasses = std::vector<std::vector<Rat>>;

std::array<PrefixMasses, 2> prefix_masses(const ClassicalJoint& q) {
  std::array<PrefixMasses, 2> m;
  for (int e = 0; e < 2; ++e) {
    m[e].assign(static_cast<std::size_t>(q.n) + 1, {});
    m[e][static_cast<std::size_t>(q.n)].resize(std::size_t(1) << q.n);
    for (std::uint64_t a = 0; a < (std::uint64_t(1) << q.n); ++a)
      m[e][static_cast<std::size_t>(q.n)][a] = q.p[a * 2 + static_cast<std::uint64_t>(e)];
    for (int lvl = q.n - 1; lvl >= 0; --lvl) {
      m[e][static_cast<std::size_t>(lvl)].resize(std::size_t(1) << lvl);
      for (std::size_t p = 0; p < (std::size_t(1) << lvl); ++p)
        m[e][static_cast<std::size_t>(lvl)][p] =
            m[e][static_cast<std::size_t>(lvl) + 1][2 * p] +
            m[e][static_cast<std::size_t>(lvl) + 1][2 * p + 1];
    }
  }
  return m;
}

int sign_of(const Rat& r) { return r > 0 ? 1 : r < 0 ? -1 : 0; }

}  // namespace

bool ClassicalJoint::valid(std::string* why) const {
  if (n < 1 || n > 25) {
    if (why) *why = "arity out of range";
    return false;
  }
  if (p.size() != (std::size_t(1) << (n + 1))) {
    if (why) *why = "table size must be 2^(n+1)";
    return false;
  }
  Rat sum(0);
  for (const auto& v : p) {
    if (v < 0) {
      if (why) *why = "negative entry";
      return false;
    }
    sum += v;
  }
  if (sum != 1) {
    if (why) *why = "entries sum to " + format_rat(sum);
    return false;
  }
  return true;
}

SubsetS SubsetS::from_members(int n, const std::vector<int>& members) {
  if (n < 1 || n > 63) throw std::invalid_argument("subset arity out of range");
  SubsetS s;
  s.n = n;
  for (int i : members) {
    if (i < 1 || i > n) throw std::invalid_argument("subset member out of range");
    s.mask |= std::uint64_t(1) << (i - 1);
  }
  return s;
}

std::vector<int> SubsetS::members() const {
  std::vector<int> out;
  for (int i = 1; i <= n; ++i)
    if (contains(i)) out.push_back(i);
  return out;
}

void validate_prefix_code(const PrefixCode& code, int n) {
  for (const auto& c : code.codewords) {
    if (static_cast<int>(c.size()) > n - 1)
      throw std::invalid_argument("codeword '" + c + "' is too long for " +
                                  std::to_string(n) + " rounds");
    for (char ch : c)
      if (ch != '0' && ch != '1')
        throw std::invalid_argument("codeword '" + c + "' is not binary");
  }
  for (std::size_t i = 0; i < code.codewords.size(); ++i)
    for (std::size_t j = 0; j < code.codewords.size(); ++j) {
      if (i == j) continue;
      const auto &a = code.codewords[i], &b = code.codewords[j];
      if (a.size() <= b.size() && b.compare(0, a.size(), a) == 0)
        throw std::invalid_argument("code is not prefix-free: '" + a +
                                    "' is a prefix of '" + b + "'");
    }
}

bool is_complete_code(const PrefixCode& code) {
  Rat kraft(0);
  for (const auto& c : code.codewords)
    kraft += pow_rat(Rat(1, 2), static_cast<long>(c.size()));
  return kraft == 1;
}

SInfluenceCheck validate_s_influenceable(const ClassicalJoint& q, const SubsetS& s) {
  std::string why;
  if (!q.valid(&why)) return {false, "invalid joint: " + why};
  if (s.n != q.n) return {false, "subset arity does not match the joint"};

  const Rat cell = pow_rat(Rat(1, 2), q.n);
  for (std::uint64_t a = 0; a < (std::uint64_t(1) << q.n); ++a) {
    const Rat total = q.p[a * 2] + q.p[a * 2 + 1];
    if (total != cell)
      return {false, "uniformity fails at a=" + std::to_string(a) + ": sum_e Q = " +
                         format_rat(total) + ", want " + format_rat(cell)};
  }

  const auto masses = prefix_masses(q);
  for (int e = 0; e < 2; ++e)
    for (int i = 1; i <= q.n; ++i) {
      if (s.contains(i)) continue;
      for (std::size_t p = 0; p < (std::size_t(1) << (i - 1)); ++p) {
        const Rat& parent = masses[e][static_cast<std::size_t>(i) - 1][p];
        if (parent == 0) continue;  // conditional undefined, vacuous
        const Rat& child0 = masses[e][static_cast<std::size_t>(i)][2 * p];
        if (2 * child0 != parent)
          return {false, "round " + std::to_string(i) + " outside S is biased: Q(a_i=0|prefix " +
                             std::to_string(p) + ", e=" + std::to_string(e) + ") = " +
                             format_rat(child0 / parent)};
      }
    }
  return {true, ""};
}

Rat weight(const SubsetS& s, const Rat& eps) {
  if (eps < 0 || eps > Rat(1, 2))
    throw std::invalid_argument("noise level must lie in [0, 1/2]");
  return pow_rat(1 - 2 * eps, s.n - s.size()) * pow_rat(2 * eps, s.size());
}

ClassicalJoint uniform_joint(int n) {
  check_joint_arity(n);
  ClassicalJoint q;
  q.n = n;
  q.p.assign(std::size_t(1) << (n + 1), pow_rat(Rat(1, 2), n + 1));
  return q;
}

ClassicalJoint assemble_divisible(const std::map<std::uint64_t, ClassicalJoint>& family,
                                  int n, const Rat& eps) {
  check_joint_arity(n);
  if (n > 20) throw std::invalid_argument("assemble_divisible: n too large");
  ClassicalJoint out;
  out.n = n;
  out.p.assign(std::size_t(1) << (n + 1), Rat(0));
  for (std::uint64_t mask = 0; mask < (std::uint64_t(1) << n); ++mask) {
    const auto it = family.find(mask);
    if (it == family.end())
      throw std::invalid_argument("assemble_divisible: family is missing subset mask " +
                                  std::to_string(mask));
    SubsetS s;
    s.n = n;
    s.mask = mask;
    const auto check = validate_s_influenceable(it->second, s);
    if (!check.ok)
      throw std::invalid_argument("assemble_divisible: member for mask " +
                                  std::to_string(mask) + " is invalid: " + check.diagnostics);
    const Rat w = weight(s, eps);
    if (w == 0) continue;
    for (std::size_t idx = 0; idx < out.p.size(); ++idx) out.p[idx] += w * it->second.p[idx];
  }
  return out;
}

Box build_tons_extension(const ClassicalJoint& q, const SubsetS& s, const Box& v) {
  const auto qcheck = validate_s_influenceable(q, s);
  if (!qcheck.ok)
    throw std::invalid_argument("build_tons_extension: joint is not S-influenceable: " +
                                qcheck.diagnostics);
  const auto vcheck = is_valid_v_box(v);
  if (!vcheck.ok)
    throw std::invalid_argument("build_tons_extension: invalid v box: " + vcheck.diagnostic);

  const int n = q.n;
  const int X = v.parties[0].inputs, Y = v.parties[1].inputs, B = v.parties[1].outputs;
  Box out = make_box({PartySpec{X, 2, n}, PartySpec{Y, B, n}, PartySpec{1, 2, 1}});

  const auto masses = prefix_masses(q);
  // alice_part[a * 2 + e] = Q(e) * prod_{i in S} Q(a_i | a_<i, e) / B^|S|
  std::vector<Rat> alice_part((std::size_t(1) << (n + 1)), Rat(0));
  const Rat bob_uniform = pow_rat(Rat(1, B), s.size());
  for (std::uint64_t a = 0; a < (std::uint64_t(1) << n); ++a)
    for (int e = 0; e < 2; ++e) {
      Rat acc = masses[static_cast<std::size_t>(e)][0][0];  // Q(e)
      std::size_t prefix = 0;
      for (int i = 1; i <= n && acc != 0; ++i) {
        const int ai = static_cast<int>((a >> (n - i)) & 1u);
        const std::size_t child = prefix * 2 + static_cast<std::size_t>(ai);
        if (s.contains(i)) {
          const Rat& parent = masses[static_cast<std::size_t>(e)][static_cast<std::size_t>(i) - 1][prefix];
          if (parent == 0)
            acc /= 2;  // undefined conditional: fair coin
          else
            acc *= masses[static_cast<std::size_t>(e)][static_cast<std::size_t>(i)][child] / parent;
        }
        prefix = child;
      }
      alice_part[a * 2 + static_cast<std::size_t>(e)] = acc * bob_uniform;
    }

  const auto in_dims = out.in_dims(), out_dims = out.out_dims();
  const auto v_in = v.in_dims(), v_out = v.out_dims();
  for (std::size_t I = 0; I < out.in_dim(); ++I) {
    const auto xs = unpack_index(in_dims, I);
    for (std::size_t O = 0; O < out.out_dim(); ++O) {
      const auto as = unpack_index(out_dims, O);
      std::uint64_t abits = 0;
      for (int i = 0; i < n; ++i)
        abits = abits << 1 | static_cast<std::uint64_t>(as[static_cast<std::size_t>(i)]);
      const int e = as[static_cast<std::size_t>(2 * n)];
      Rat p = alice_part[abits * 2 + static_cast<std::size_t>(e)];
      for (int i = 1; i <= n && p != 0; ++i) {
        if (s.contains(i)) continue;
        const int xi = xs[static_cast<std::size_t>(i - 1)], yi = xs[static_cast<std::size_t>(n + i - 1)];
        const int ai = as[static_cast<std::size_t>(i - 1)], bi = as[static_cast<std::size_t>(n + i - 1)];
        p *= v.at(pack_index(v_in, {xi, yi}), pack_index(v_out, {ai, bi}));
      }
      out.at(I, O) = p;
    }
  }
  return out;
}

ClassicalJoint prefix_code_attack(const BooleanFunction& f, const PrefixCode& code,
                                  const SubsetS& s) {
  const int n = f.n;
  check_joint_arity(n);
  if (s.n != n) throw std::invalid_argument("prefix_code_attack: subset arity mismatch");
  validate_prefix_code(code, n);

  std::map<std::string, int> sign_at;  // codeword -> sign of its influence
  for (const auto& c : code.codewords) sign_at[c] = sign_of(influence(f, c));

  ClassicalJoint q;
  q.n = n;
  q.p.assign(std::size_t(1) << (n + 1), Rat(0));
  std::string prefix;
  for (std::uint64_t a = 0; a < (std::uint64_t(1) << n); ++a)
    for (int e = 0; e < 2; ++e) {
      Rat p(1, 2);  // Q(e)
      prefix.clear();
      for (int i = 1; i <= n; ++i) {
        const int ai = static_cast<int>((a >> (n - i)) & 1u);
        int sign = 0;
        if (s.contains(i)) {
          const auto it = sign_at.find(prefix);
          if (it != sign_at.end()) sign = it->second;
        }
        if (sign == 0)
          p /= 2;
        else if ((ai == e) != (sign > 0))
          p *= 0;
        prefix.push_back(static_cast<char>('0' + ai));
      }
      q.p[a * 2 + static_cast<std::uint64_t>(e)] = p;
    }
  return q;
}

int majority_s(std::uint64_t a, const SubsetS& s) {
  if (s.size() == 0) throw std::invalid_argument("majority over an empty subset");
  auto mem = s.members();
  if (mem.size() % 2 == 0) mem.pop_back();  // even size: drop the largest index
  int ones = 0;
  for (int i : mem) ones += static_cast<int>((a >> (s.n - i)) & 1u);
  return ones * 2 > static_cast<int>(mem.size()) ? 1 : 0;
}

ClassicalJoint majority_attack(int n, const SubsetS& s) {
  check_joint_arity(n);
  if (s.n != n) throw std::invalid_argument("majority_attack: subset arity mismatch");
  if (s.size() == 0) throw std::invalid_argument("majority_attack: S must be nonempty");
  ClassicalJoint q;
  q.n = n;
  q.p.assign(std::size_t(1) << (n + 1), Rat(0));
  const Rat cell = pow_rat(Rat(1, 2), n);
  for (std::uint64_t a = 0; a < (std::uint64_t(1) << n); ++a)
    q.p[a * 2 + static_cast<std::uint64_t>(majority_s(a, s))] = cell;
  return q;
}

ClassicalJoint random_s_influenceable(int n, const SubsetS& s, std::mt19937_64& rng,
                                      int denom) {
  check_joint_arity(n);
  if (s.n != n) throw std::invalid_argument("random_s_influenceable: subset arity mismatch");
  if (denom < 1) throw std::invalid_argument("random_s_influenceable: denom must be >= 1");
  std::uniform_int_distribution<int> pick(0, denom);

  ClassicalJoint q;
  q.n = n;
  q.p.assign(std::size_t(1) << (n + 1), Rat(0));

  // descend the prefix tree keeping m0 + m1 = 2^-depth at every node
  auto descend = [&](auto&& self, int depth, std::uint64_t prefix, Rat m0, Rat m1) -> void {
    if (depth == n) {
      q.p[prefix * 2] = m0;
      q.p[prefix * 2 + 1] = m1;
      return;
    }
    const int round = depth + 1;
    if (!s.contains(round)) {
      self(self, depth + 1, prefix << 1, m0 / 2, m1 / 2);
      self(self, depth + 1, prefix << 1 | 1, m0 / 2, m1 / 2);
      return;
    }
    const Rat half = (m0 + m1) / 2;
    const Rat lo = std::max(Rat(0), Rat(half - m1));
    const Rat hi = std::min(m0, half);
    const Rat alpha = lo + (hi - lo) * Rat(pick(rng), denom);
    self(self, depth + 1, prefix << 1, alpha, half - alpha);
    self(self, depth + 1, prefix << 1 | 1, m0 - alpha, m1 - half + alpha);
  };
  const Rat q0 = Rat(pick(rng), denom);
  descend(descend, 0, 0, q0, 1 - q0);
  return q;
}

namespace {

std::vector<std::vector<std::string>> complete_codes_from(const std::string& prefix,
                                                          int depth) {
  std::vector<std::vector<std::string>> out{{prefix}};
  if (depth == 0) return out;
  const auto left = complete_codes_from(prefix + "0", depth - 1);
  const auto right = complete_codes_from(prefix + "1", depth - 1);
  for (const auto& l : left)
    for (const auto& r : right) {
      std::vector<std::string> c = l;
      c.insert(c.end(), r.begin(), r.end());
      out.push_back(std::move(c));
    }
  return out;
}

// all prefix-free sets over the subtree, including the empty set
std::vector<std::vector<std::string>> antichains_from(const std::string& prefix, int depth) {
  std::vector<std::vector<std::string>> out{{}, {prefix}};
  if (depth == 0) return out;
  const auto left = antichains_from(prefix + "0", depth - 1);
  const auto right = antichains_from(prefix + "1", depth - 1);
  for (const auto& l : left)
    for (const auto& r : right) {
      if (l.empty() && r.empty()) continue;  // already listed
      std::vector<std::string> c = l;
      c.insert(c.end(), r.begin(), r.end());
      out.push_back(std::move(c));
    }
  return out;
}

}  // namespace

std::vector<PrefixCode> enumerate_complete_codes(int max_depth) {
  if (max_depth < 0 || max_depth > 4)
    throw std::invalid_argument("enumerate_complete_codes: depth must be in [0, 4]");
  std::vector<PrefixCode> out;
  for (auto& c : complete_codes_from("", max_depth)) out.push_back({std::move(c)});
  return out;
}

std::vector<PrefixCode> enumerate_prefix_codes(int max_depth) {
  if (max_depth < 0 || max_depth > 4)
    throw std::invalid_argument("enumerate_prefix_codes: depth must be in [0, 4]");
  std::vector<PrefixCode> out;
  for (auto& c : antichains_from("", max_depth)) {
    if (c.empty()) continue;
    out.push_back({std::move(c)});
  }
  return out;
}

std::map<std::uint64_t, ClassicalJoint> prefix_attack_family(const BooleanFunction& f,
                                                             const PrefixCode& code) {
  if (f.n > 20) throw std::invalid_argument("prefix_attack_family: n too large");
  std::map<std::uint64_t, ClassicalJoint> family;
  for (std::uint64_t mask = 0; mask < (std::uint64_t(1) << f.n); ++mask) {
    SubsetS s;
    s.n = f.n;
    s.mask = mask;
    family.emplace(mask, prefix_code_attack(f, code, s));
  }
  return family;
}

std::map<std::uint64_t, ClassicalJoint> majority_attack_family(int n) {
  if (n > 20) throw std::invalid_argument("majority_attack_family: n too large");
  std::map<std::uint64_t, ClassicalJoint> family;
  family.emplace(0, uniform_joint(n));
  for (std::uint64_t mask = 1; mask < (std::uint64_t(1) << n); ++mask) {
    SubsetS s;
    s.n = n;
    s.mask = mask;
    family.emplace(mask, majority_attack(n, s));
  }
  return family;
}

}  // namespace nsbox
