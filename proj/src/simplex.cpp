#include "nsbox/simplex.hpp"

#include <cstddef>
#include <stdexcept>
#include <utility>

namespace nsbox {

namespace {

// Row-reduce the augmented system [rows | rhs] in place, keeping only an
// independent set of (transformed) equations. Returns false when a row
// reduces to 0 = nonzero, i.e. the system is inconsistent.
bool reduce_equations(std::vector<std::vector<Rat>>& rows, std::vector<Rat>& rhs,
                      int num_vars) {
  const std::size_t m = rows.size();
  std::size_t rank = 0;
  for (int col = 0; col < num_vars && rank < m; ++col) {
    std::size_t pivot = rank;
    while (pivot < m && rows[pivot][static_cast<std::size_t>(col)] == 0) ++pivot;
    if (pivot == m) continue;
    std::swap(rows[pivot], rows[rank]);
    std::swap(rhs[pivot], rhs[rank]);
    const Rat inv = Rat(1) / rows[rank][static_cast<std::size_t>(col)];
    for (int j = col; j < num_vars; ++j) rows[rank][static_cast<std::size_t>(j)] *= inv;
    rhs[rank] *= inv;
    for (std::size_t i = 0; i < m; ++i) {
      if (i == rank) continue;
      const Rat factor = rows[i][static_cast<std::size_t>(col)];
      if (factor == 0) continue;
      for (int j = col; j < num_vars; ++j)
        rows[i][static_cast<std::size_t>(j)] -= factor * rows[rank][static_cast<std::size_t>(j)];
      rhs[i] -= factor * rhs[rank];
    }
    ++rank;
  }
  for (std::size_t i = rank; i < m; ++i)
    if (rhs[i] != 0) return false;
  rows.resize(rank);
  rhs.resize(rank);
  return true;
}

struct Tableau {
  // body[i] has total_cols entries; the last entry is the row's rhs.
  std::vector<std::vector<Rat>> body;
  std::vector<Rat> zrow;  // reduced costs, last entry = objective value
  std::vector<int> basis;
  int num_structural = 0;
  int total_cols = 0;  // structural + artificial + 1

  [[nodiscard]] std::size_t rows() const { return body.size(); }

  void pivot(std::size_t row, int col) {
    auto& pr = body[row];
    const Rat inv = Rat(1) / pr[static_cast<std::size_t>(col)];
    for (auto& v : pr) v *= inv;
    for (std::size_t i = 0; i < body.size(); ++i) {
      if (i == row) continue;
      const Rat factor = body[i][static_cast<std::size_t>(col)];
      if (factor == 0) continue;
      for (int j = 0; j < total_cols; ++j)
        body[i][static_cast<std::size_t>(j)] -= factor * pr[static_cast<std::size_t>(j)];
    }
    const Rat zf = zrow[static_cast<std::size_t>(col)];
    if (zf != 0)
      for (int j = 0; j < total_cols; ++j)
        zrow[static_cast<std::size_t>(j)] -= zf * pr[static_cast<std::size_t>(j)];
    basis[row] = col;
  }

  // Runs simplex iterations until optimal/unbounded. `allowed` bounds the
  // entering columns (used to keep artificials out in phase 2).
  // Returns true when optimal, false when unbounded.
  bool iterate(int allowed_cols) {
    constexpr long kStallLimit = 64;
    constexpr long kHardLimit = 500000;
    bool bland = false;
    long since_improvement = 0;
    Rat best = zrow[static_cast<std::size_t>(total_cols - 1)];
    for (long iter = 0; iter < kHardLimit; ++iter) {
      int enter = -1;
      if (bland) {
        for (int j = 0; j < allowed_cols; ++j)
          if (zrow[static_cast<std::size_t>(j)] > 0) {
            enter = j;
            break;
          }
      } else {
        const Rat* best_cost = nullptr;
        for (int j = 0; j < allowed_cols; ++j) {
          const Rat& d = zrow[static_cast<std::size_t>(j)];
          if (d > 0 && (best_cost == nullptr || d > *best_cost)) {
            best_cost = &d;
            enter = j;
          }
        }
      }
      if (enter < 0) return true;

      std::size_t leave = body.size();
      Rat best_ratio;
      for (std::size_t i = 0; i < body.size(); ++i) {
        const Rat& coef = body[i][static_cast<std::size_t>(enter)];
        if (coef <= 0) continue;
        Rat ratio = body[i][static_cast<std::size_t>(total_cols - 1)] / coef;
        const bool better =
            leave == body.size() || ratio < best_ratio ||
            (ratio == best_ratio && basis[i] < basis[leave]);
        if (better) {
          leave = i;
          best_ratio = ratio;
        }
      }
      if (leave == body.size()) return false;
      pivot(leave, enter);

      const Rat& cur = zrow[static_cast<std::size_t>(total_cols - 1)];
      if (bland) continue;
      if (cur < best) {  // objective value stored negated in zrow tail
        best = cur;
        since_improvement = 0;
      } else if (++since_improvement > kStallLimit) {
        bland = true;
      }
    }
    throw std::runtime_error("simplex: iteration limit exceeded");
  }
};

}  // namespace

LpResult solve_lp(const LinearProgram& lp) {
  const int n = lp.num_vars;
  if (n <= 0) throw std::invalid_argument("solve_lp: num_vars must be positive");
  if (lp.rows.size() != lp.rhs.size())
    throw std::invalid_argument("solve_lp: row/rhs count mismatch");
  if (static_cast<int>(lp.objective.size()) != n)
    throw std::invalid_argument("solve_lp: objective size mismatch");
  for (const auto& row : lp.rows)
    if (static_cast<int>(row.size()) != n)
      throw std::invalid_argument("solve_lp: row size mismatch");

  std::vector<std::vector<Rat>> rows = lp.rows;
  std::vector<Rat> rhs = lp.rhs;
  LpResult result;
  if (!reduce_equations(rows, rhs, n)) {
    result.status = LpStatus::Infeasible;
    return result;
  }
  const std::size_t m = rows.size();

  Tableau t;
  t.num_structural = n;
  t.total_cols = n + static_cast<int>(m) + 1;
  t.body.resize(m);
  t.basis.resize(m);
  for (std::size_t i = 0; i < m; ++i) {
    auto& row = t.body[i];
    row.assign(static_cast<std::size_t>(t.total_cols), Rat(0));
    const bool flip = rhs[i] < 0;
    for (int j = 0; j < n; ++j)
      row[static_cast<std::size_t>(j)] = flip ? -rows[i][static_cast<std::size_t>(j)]
                                              : rows[i][static_cast<std::size_t>(j)];
    row[static_cast<std::size_t>(n) + i] = 1;
    row[static_cast<std::size_t>(t.total_cols - 1)] = flip ? -rhs[i] : rhs[i];
  }

  // Phase 1: maximize -(sum of artificials). With the artificial basis the
  // reduced cost of structural column j is the column sum. The zrow tail
  // stores -(objective value) so the uniform pivot update keeps it in sync;
  // here -objective = sum of rhs.
  t.zrow.assign(static_cast<std::size_t>(t.total_cols), Rat(0));
  for (std::size_t i = 0; i < m; ++i) {
    t.basis[i] = n + static_cast<int>(i);
    for (int j = 0; j < n; ++j)
      t.zrow[static_cast<std::size_t>(j)] += t.body[i][static_cast<std::size_t>(j)];
    t.zrow[static_cast<std::size_t>(t.total_cols - 1)] +=
        t.body[i][static_cast<std::size_t>(t.total_cols - 1)];
  }
  if (!t.iterate(n)) throw std::runtime_error("simplex: phase 1 unbounded");
  if (t.zrow[static_cast<std::size_t>(t.total_cols - 1)] != 0) {
    // objective = -tail; a nonzero tail means some artificial is still positive
    result.status = LpStatus::Infeasible;
    return result;
  }

  // Drive any artificial still in the basis out of it (at value zero).
  for (std::size_t i = 0; i < t.rows();) {
    if (t.basis[i] < n) {
      ++i;
      continue;
    }
    int col = -1;
    for (int j = 0; j < n; ++j)
      if (t.body[i][static_cast<std::size_t>(j)] != 0) {
        col = j;
        break;
      }
    if (col >= 0) {
      t.pivot(i, col);
      ++i;
    } else {
      // Fully redundant row (should have been removed by reduce_equations).
      t.body.erase(t.body.begin() + static_cast<std::ptrdiff_t>(i));
      t.basis.erase(t.basis.begin() + static_cast<std::ptrdiff_t>(i));
    }
  }

  // Phase 2: real objective. Reduced costs d_j = c_j - c_B . B^{-1} A_j.
  t.zrow.assign(static_cast<std::size_t>(t.total_cols), Rat(0));
  for (int j = 0; j < n; ++j) t.zrow[static_cast<std::size_t>(j)] = lp.objective[static_cast<std::size_t>(j)];
  for (std::size_t i = 0; i < t.rows(); ++i) {
    const Rat cb = lp.objective[static_cast<std::size_t>(t.basis[i])];
    if (cb == 0) continue;
    for (int j = 0; j < t.total_cols; ++j)
      t.zrow[static_cast<std::size_t>(j)] -= cb * t.body[i][static_cast<std::size_t>(j)];
  }
  if (!t.iterate(n)) {
    result.status = LpStatus::Unbounded;
    return result;
  }

  result.status = LpStatus::Optimal;
  result.solution.assign(static_cast<std::size_t>(n), Rat(0));
  for (std::size_t i = 0; i < t.rows(); ++i)
    if (t.basis[i] < n)
      result.solution[static_cast<std::size_t>(t.basis[i])] =
          t.body[i][static_cast<std::size_t>(t.total_cols - 1)];
  result.value = 0;
  for (int j = 0; j < n; ++j)
    result.value += lp.objective[static_cast<std::size_t>(j)] * result.solution[static_cast<std::size_t>(j)];
  return result;
}

}  // namespace nsbox
