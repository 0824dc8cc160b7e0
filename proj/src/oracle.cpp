#include "nsbox/oracle.hpp"

#include <bit>
#include <cstdint>
#include <set>
#include <stdexcept>
#include <utility>

#include "nsbox/eval.hpp"
#include "nsbox/simplex.hpp"
#include "nsbox/verify.hpp"

namespace nsbox {

namespace {

// Solves m . x = r exactly. Returns true only when the solution is unique.
bool solve_unique(std::vector<std::vector<Rat>> m, std::vector<Rat> r,
                  std::vector<Rat>& out) {
  const std::size_t rows = m.size();
  const std::size_t cols = rows == 0 ? 0 : m[0].size();
  std::vector<std::size_t> pivot_row(cols, rows);
  std::size_t rank = 0;
  for (std::size_t col = 0; col < cols && rank < rows; ++col) {
    std::size_t p = rank;
    while (p < rows && m[p][col] == 0) ++p;
    if (p == rows) continue;
    std::swap(m[p], m[rank]);
    std::swap(r[p], r[rank]);
    const Rat inv = Rat(1) / m[rank][col];
    for (std::size_t j = col; j < cols; ++j) m[rank][j] *= inv;
    r[rank] *= inv;
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == rank) continue;
      const Rat factor = m[i][col];
      if (factor == 0) continue;
      for (std::size_t j = col; j < cols; ++j) m[i][j] -= factor * m[rank][j];
      r[i] -= factor * r[rank];
    }
    pivot_row[col] = rank;
    ++rank;
  }
  for (std::size_t i = rank; i < rows; ++i)
    if (r[i] != 0) return false;
  if (rank != cols) return false;
  out.assign(cols, Rat(0));
  for (std::size_t col = 0; col < cols; ++col) out[col] = r[pivot_row[col]];
  return true;
}

// The 12 defining equalities of the 2x2 no-signalling polytope over the 16
// variables P(ab|xy), indexed ((x*2+y)*2+a)*2+b.
void ns_2x2_equalities(std::vector<std::vector<Rat>>& rows, std::vector<Rat>& rhs) {
  auto idx = [](int x, int y, int a, int b) {
    return static_cast<std::size_t>(((x * 2 + y) * 2 + a) * 2 + b);
  };
  for (int x = 0; x < 2; ++x)
    for (int y = 0; y < 2; ++y) {
      std::vector<Rat> row(16, Rat(0));
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) row[idx(x, y, a, b)] = 1;
      rows.push_back(std::move(row));
      rhs.emplace_back(1);
    }
  for (int x = 0; x < 2; ++x)
    for (int a = 0; a < 2; ++a) {
      std::vector<Rat> row(16, Rat(0));
      for (int b = 0; b < 2; ++b) {
        row[idx(x, 0, a, b)] += 1;
        row[idx(x, 1, a, b)] -= 1;
      }
      rows.push_back(std::move(row));
      rhs.emplace_back(0);
    }
  for (int y = 0; y < 2; ++y)
    for (int b = 0; b < 2; ++b) {
      std::vector<Rat> row(16, Rat(0));
      for (int a = 0; a < 2; ++a) {
        row[idx(0, y, a, b)] += 1;
        row[idx(1, y, a, b)] -= 1;
      }
      rows.push_back(std::move(row));
      rhs.emplace_back(0);
    }
}

Box shape_2x2() {
  Box box;
  box.parties = {PartySpec{2, 2, 1}, PartySpec{2, 2, 1}};
  box.table.assign(16, Rat(0));
  return box;
}

// Shape of a one-sided-value extension of an n-round base with the given
// per-round input/output alphabets.
Box extension_shape(int n, int a_in, int b_in, int b_out) {
  Box box;
  box.parties = {PartySpec{a_in, 2, n}, PartySpec{b_in, b_out, n},
                 PartySpec{1, 2, 1}};
  box.table.assign(box.in_dim() * box.out_dim(), Rat(0));
  return box;
}

struct ExtensionLp {
  Box shape;
  LinearProgram lp;
};

// Equality system cutting out the time-ordered extensions of `base`, plus the
// guessing objective at the all-zero input.
ExtensionLp build_extension_lp(const Box& base, const BooleanFunction& f) {
  const int n = base.parties[0].rounds;
  const int a_in = base.parties[0].inputs;
  const int b_in = base.parties[1].inputs;
  const int b_out = base.parties[1].outputs;
  ExtensionLp built;
  built.shape = extension_shape(n, a_in, b_in, b_out);
  const Box& ext = built.shape;
  const std::vector<int> in_dims = ext.in_dims();
  const std::vector<int> out_dims = ext.out_dims();
  const std::size_t out_dim = ext.out_dim();
  const std::size_t total = ext.in_dim() * out_dim;
  LinearProgram& lp = built.lp;
  lp.num_vars = static_cast<int>(total);

  auto var = [&](std::size_t i, std::size_t o) { return i * out_dim + o; };

  // Marginal rows: summing out the side value must reproduce the base table.
  // The extension's input index coincides with the base's (the side system
  // has a single input).
  for (std::size_t i = 0; i < base.in_dim(); ++i)
    for (std::size_t o = 0; o < base.out_dim(); ++o) {
      std::vector<Rat> row(total, Rat(0));
      row[var(i, o * 2 + 0)] = 1;
      row[var(i, o * 2 + 1)] = 1;
      lp.rows.push_back(std::move(row));
      lp.rhs.push_back(base.at(i, o));
    }

  // Time-ordering rows, versus-first form: for every split (i rounds of the
  // first party, j of the second, side value included), every past input and
  // every past output, the summed-out future must not depend on which future
  // input is chosen. The splits without the side value follow by summing
  // these rows over it.
  for (int i = 0; i <= n; ++i)
    for (int j = 0; j <= n; ++j) {
      if (i == n && j == n) continue;
      std::vector<int> past_in_dims, fut_in_dims, past_out_dims, fut_out_dims;
      for (int r = 0; r < i; ++r) past_in_dims.push_back(a_in);
      for (int r = i; r < n; ++r) fut_in_dims.push_back(a_in);
      for (int r = 0; r < j; ++r) past_in_dims.push_back(b_in);
      for (int r = j; r < n; ++r) fut_in_dims.push_back(b_in);
      for (int r = 0; r < i; ++r) past_out_dims.push_back(2);
      for (int r = i; r < n; ++r) fut_out_dims.push_back(2);
      for (int r = 0; r < j; ++r) past_out_dims.push_back(b_out);
      for (int r = j; r < n; ++r) fut_out_dims.push_back(b_out);
      past_out_dims.push_back(2);  // the side value always counts as past here

      std::size_t past_in = 1, fut_in = 1, past_out = 1, fut_out = 1;
      for (int d : past_in_dims) past_in *= static_cast<std::size_t>(d);
      for (int d : fut_in_dims) fut_in *= static_cast<std::size_t>(d);
      for (int d : past_out_dims) past_out *= static_cast<std::size_t>(d);
      for (int d : fut_out_dims) fut_out *= static_cast<std::size_t>(d);

      auto splice_inputs = [&](const std::vector<int>& pi, const std::vector<int>& fi) {
        std::vector<int> digits(static_cast<std::size_t>(2 * n + 1), 0);
        std::size_t p = 0, q = 0;
        for (int r = 0; r < n; ++r)
          digits[static_cast<std::size_t>(r)] = r < i ? pi[p++] : fi[q++];
        for (int r = 0; r < n; ++r)
          digits[static_cast<std::size_t>(n + r)] = r < j ? pi[p++] : fi[q++];
        return pack_index(in_dims, digits);
      };
      auto splice_outputs = [&](const std::vector<int>& po, const std::vector<int>& fo) {
        std::vector<int> digits(static_cast<std::size_t>(2 * n + 1), 0);
        std::size_t p = 0, q = 0;
        for (int r = 0; r < n; ++r)
          digits[static_cast<std::size_t>(r)] = r < i ? po[p++] : fo[q++];
        for (int r = 0; r < n; ++r)
          digits[static_cast<std::size_t>(n + r)] = r < j ? po[p++] : fo[q++];
        digits[static_cast<std::size_t>(2 * n)] = po.back();
        return pack_index(out_dims, digits);
      };

      const std::vector<int> fi_first = unpack_index(fut_in_dims, 0);
      for (std::size_t pii = 0; pii < past_in; ++pii) {
        const std::vector<int> pi = unpack_index(past_in_dims, pii);
        const std::size_t input_first = splice_inputs(pi, fi_first);
        for (std::size_t fii = 1; fii < fut_in; ++fii) {
          const std::vector<int> fi = unpack_index(fut_in_dims, fii);
          const std::size_t input_other = splice_inputs(pi, fi);
          for (std::size_t poi = 0; poi < past_out; ++poi) {
            const std::vector<int> po = unpack_index(past_out_dims, poi);
            std::vector<Rat> row(total, Rat(0));
            for (std::size_t foi = 0; foi < fut_out; ++foi) {
              const std::size_t o = splice_outputs(po, unpack_index(fut_out_dims, foi));
              row[var(input_other, o)] += 1;
              row[var(input_first, o)] -= 1;
            }
            lp.rows.push_back(std::move(row));
            lp.rhs.emplace_back(0);
          }
        }
      }
    }

  // Objective: probability that the side value equals f of the first party's
  // outputs, at the all-zero input.
  lp.objective.assign(total, Rat(0));
  std::size_t b_out_dim = 1;
  for (int r = 0; r < n; ++r) b_out_dim *= static_cast<std::size_t>(b_out);
  for (std::uint64_t a = 0; a < (1ULL << n); ++a) {
    const auto e = static_cast<std::size_t>(f.eval(a));
    for (std::size_t b = 0; b < b_out_dim; ++b)
      lp.objective[var(0, (static_cast<std::size_t>(a) * b_out_dim + b) * 2 + e)] = 1;
  }
  return built;
}

void verify_witness(const Box& ext, const Box& base) {
  if (!ext.valid()) throw std::logic_error("oracle: witness table is not a distribution");
  std::vector<int> kept;
  for (int s = 0; s < 2 * base.parties[0].rounds; ++s) kept.push_back(s);
  if (!check_extension(ext, base, kept).ok)
    throw std::logic_error("oracle: witness does not extend the base box");
  if (!check_tons(ext, causal_order_of(ext), TonsMode::Auto).ok())
    throw std::logic_error("oracle: witness violates time-ordering");
}

void require_base(const Box& base, const BooleanFunction& f) {
  if (!base.valid()) throw std::invalid_argument("oracle: base box is invalid");
  if (base.parties.size() != 2)
    throw std::invalid_argument("oracle: base box must be bipartite");
  if (base.parties[0].outputs != 2)
    throw std::invalid_argument("oracle: first party must have binary outputs");
  if (base.parties[0].rounds != base.parties[1].rounds)
    throw std::invalid_argument("oracle: parties must have equal round counts");
  if (f.n != base.parties[0].rounds)
    throw std::invalid_argument("oracle: function arity must match the round count");
  const int n = base.parties[0].rounds;
  std::vector<int> sys_a, sys_b;
  for (int s = 0; s < n; ++s) sys_a.push_back(s);
  for (int s = n; s < 2 * n; ++s) sys_b.push_back(s);
  if (!check_no_signalling(base, sys_a, sys_b).ok() ||
      !check_no_signalling(base, sys_b, sys_a).ok())
    throw std::invalid_argument("oracle: base box is signalling");
}

OracleResult solve_by_lp(const Box& base, const BooleanFunction& f) {
  const int n = base.parties[0].rounds;
  if (n > 2)
    throw std::invalid_argument("oracle: lp method supports at most 2 rounds");
  ExtensionLp built = build_extension_lp(base, f);
  LpResult res = solve_lp(built.lp);
  if (res.status != LpStatus::Optimal)
    throw std::runtime_error("oracle: extension program did not solve");
  OracleResult out;
  out.value = res.value;
  out.witness = std::move(built.shape);
  out.witness.table = std::move(res.solution);
  verify_witness(out.witness, base);
  return out;
}

OracleResult solve_by_enum(const Box& base, const BooleanFunction& f) {
  if (base.parties[0].rounds != 1)
    throw std::invalid_argument("oracle: enum method supports a single round");
  if (base.parties[0].inputs != 2 || base.parties[1].inputs != 2 ||
      base.parties[1].outputs != 2)
    throw std::invalid_argument("oracle: enum method needs binary 2x2 boxes");

  const std::vector<Box> vertices = ns_vertices_2x2();
  const std::size_t count = vertices.size();

  // Best guess per vertex at input x=0 (y irrelevant by no-signalling).
  std::vector<Rat> best(count, Rat(0));
  std::vector<int> best_e(count, 0);
  for (std::size_t v = 0; v < count; ++v) {
    Rat pe[2] = {Rat(0), Rat(0)};
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b)
        pe[f.eval(static_cast<std::uint64_t>(a))] +=
            vertices[v].table[static_cast<std::size_t>(a * 2 + b)];
    const int e = pe[1] > pe[0] ? 1 : 0;
    best_e[v] = e;
    best[v] = pe[e];
  }

  // Maximize the mixture of per-vertex guesses over all decompositions of
  // the base into vertices.
  LinearProgram lp;
  lp.num_vars = static_cast<int>(count);
  for (std::size_t t = 0; t < 16; ++t) {
    std::vector<Rat> row(count, Rat(0));
    for (std::size_t v = 0; v < count; ++v) row[v] = vertices[v].table[t];
    lp.rows.push_back(std::move(row));
    lp.rhs.push_back(base.table[t]);
  }
  lp.objective = best;
  LpResult res = solve_lp(lp);
  if (res.status != LpStatus::Optimal)
    throw std::runtime_error("oracle: decomposition program did not solve");

  OracleResult out;
  out.value = res.value;
  out.witness = extension_shape(1, 2, 2, 2);
  for (std::size_t v = 0; v < count; ++v) {
    const Rat& weight = res.solution[v];
    if (weight == 0) continue;
    for (std::size_t xy = 0; xy < 4; ++xy)
      for (std::size_t ab = 0; ab < 4; ++ab)
        out.witness.table[xy * 8 + ab * 2 + static_cast<std::size_t>(best_e[v])] +=
            weight * vertices[v].table[xy * 4 + ab];
  }
  verify_witness(out.witness, base);
  return out;
}

}  // namespace

Rat brute_force_guess(const ClassicalJoint& q, const BooleanFunction& f) {
  if (q.n != f.n)
    throw std::invalid_argument("brute_force_guess: arity mismatch");
  if (q.n > 20) throw std::invalid_argument("brute_force_guess: arity too large");
  Rat total = 0;
  for (int e = 0; e < 2; ++e) {
    Rat part = 0;
    for (std::uint64_t a = 0; a < (1ULL << q.n); ++a)
      if (f.eval(a) == e)
        part += q.p[static_cast<std::size_t>(a * 2 + static_cast<std::uint64_t>(e))];
    total += part;
  }
  return total;
}

std::vector<Box> ns_vertices_2x2() {
  std::vector<std::vector<Rat>> rows;
  std::vector<Rat> rhs;
  ns_2x2_equalities(rows, rhs);

  std::set<std::vector<Rat>> seen;
  std::vector<Box> vertices;
  for (unsigned mask = 0; mask < (1u << 16); ++mask) {
    if (std::popcount(mask) != 8) continue;  // 8 zeros leave 8 free variables
    std::vector<std::size_t> free_vars;
    for (std::size_t t = 0; t < 16; ++t)
      if ((mask & (1u << t)) == 0) free_vars.push_back(t);
    std::vector<std::vector<Rat>> sub(rows.size());
    for (std::size_t r = 0; r < rows.size(); ++r) {
      sub[r].reserve(free_vars.size());
      for (std::size_t t : free_vars) sub[r].push_back(rows[r][t]);
    }
    std::vector<Rat> sol;
    if (!solve_unique(std::move(sub), rhs, sol)) continue;
    bool nonneg = true;
    for (const Rat& v : sol)
      if (v < 0) {
        nonneg = false;
        break;
      }
    if (!nonneg) continue;
    std::vector<Rat> table(16, Rat(0));
    for (std::size_t k = 0; k < free_vars.size(); ++k) table[free_vars[k]] = sol[k];
    if (!seen.insert(table).second) continue;
    Box box = shape_2x2();
    box.table = std::move(table);
    vertices.push_back(std::move(box));
  }
  return vertices;
}

OracleResult optimal_tons_attack(const Box& base, const BooleanFunction& f,
                                 OracleMethod method) {
  require_base(base, f);
  return method == OracleMethod::Lp ? solve_by_lp(base, f) : solve_by_enum(base, f);
}

PrefixSearchResult best_prefix_attack(const BooleanFunction& f, int max_depth,
                                      const Rat& eps) {
  if (f.n > 5)
    throw std::invalid_argument("best_prefix_attack: arity too large for exhaustive search");
  if (max_depth < 0 || max_depth > f.n - 1)
    throw std::invalid_argument("best_prefix_attack: depth must lie in [0, arity-1]");
  if (eps < 0 || eps > Rat(1, 2))
    throw std::invalid_argument("best_prefix_attack: eps must lie in [0, 1/2]");

  PrefixSearchResult result;
  if (f.is_constant()) {
    // No influence anywhere, so every code is worthless; the flag tells the
    // caller that simply outputting the constant (value 1) beats this family.
    result.value = Rat(1, 2);
    result.constant_f = true;
    return result;
  }

  // Influence of the next bit after every prefix up to the depth bound.
  std::vector<std::vector<Rat>> influences(static_cast<std::size_t>(max_depth) + 1);
  for (int len = 0; len <= max_depth; ++len) {
    auto& level = influences[static_cast<std::size_t>(len)];
    level.resize(1ULL << len);
    for (std::uint64_t bits = 0; bits < (1ULL << len); ++bits) {
      std::string prefix(static_cast<std::size_t>(len), '0');
      for (int k = 0; k < len; ++k)
        if (bits & (1ULL << (len - 1 - k))) prefix[static_cast<std::size_t>(k)] = '1';
      level[bits] = influence(f, prefix);
    }
  }
  auto abs_influence = [&](const std::string& word) {
    std::uint64_t bits = 0;
    for (char c : word) bits = bits * 2 + static_cast<std::uint64_t>(c - '0');
    Rat v = influences[word.size()][bits];
    return v < 0 ? -v : v;
  };

  const auto codes = enumerate_prefix_codes(max_depth);
  Rat best_sum(-1);
  const PrefixCode* best_code = nullptr;
  for (const auto& code : codes) {
    Rat sum = 0;
    for (const auto& word : code.codewords)
      sum += abs_influence(word) / pow_rat(Rat(2), static_cast<int>(word.size()));
    if (sum > best_sum) {
      best_sum = sum;
      best_code = &code;
    }
  }
  if (best_code != nullptr) result.code = best_code->codewords;
  result.value = Rat(1, 2) + 2 * eps * best_sum;
  return result;
}

}  // namespace nsbox
