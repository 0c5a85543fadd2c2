// Small dense exact linear algebra: rational elimination, mod-p ranks, and
// Smith normal form with unimodular witnesses.
#pragma once

#include "torvan/arith.hpp"

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <optional>
#include <utility>
#include <vector>

namespace torvan {

using IntMatrix = std::vector<std::vector<std::int64_t>>;
using RatMatrix = std::vector<std::vector<Rational>>;

namespace linalg {

inline std::size_t cols_of(const auto& m) { return m.empty() ? 0 : m.front().size(); }

inline RatMatrix to_rational(const IntMatrix& m) {
  RatMatrix out(m.size());
  for (std::size_t i = 0; i < m.size(); ++i)
    for (auto v : m[i]) out[i].emplace_back(v);
  return out;
}

/// Reduced row echelon form in place; returns pivot columns.
inline std::vector<std::size_t> rref(RatMatrix& a) {
  std::vector<std::size_t> pivots;
  const std::size_t rows = a.size(), cols = cols_of(a);
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t sel = r;
    while (sel < rows && a[sel][c] == 0) ++sel;
    if (sel == rows) continue;
    std::swap(a[r], a[sel]);
    const Rational inv = Rational(1) / a[r][c];
    for (auto& x : a[r]) x *= inv;
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == r || a[i][c] == 0) continue;
      const Rational f = a[i][c];
      for (std::size_t k = c; k < cols; ++k) a[i][k] -= f * a[r][k];
    }
    pivots.push_back(c);
    ++r;
  }
  return pivots;
}

inline std::size_t rank(RatMatrix a) { return rref(a).size(); }
inline std::size_t rank(const IntMatrix& a) { return rank(to_rational(a)); }

/// Basis of {x : A x = 0} over Q. `cols` is needed when A has no rows.
inline RatMatrix kernel(RatMatrix a, std::size_t cols) {
  const auto pivots = rref(a);
  std::vector<bool> is_pivot(cols, false);
  for (auto c : pivots) is_pivot[c] = true;
  RatMatrix basis;
  for (std::size_t free = 0; free < cols; ++free) {
    if (is_pivot[free]) continue;
    std::vector<Rational> v(cols, Rational(0));
    v[free] = 1;
    for (std::size_t r = 0; r < pivots.size(); ++r) v[pivots[r]] = -a[r][free];
    basis.push_back(std::move(v));
  }
  return basis;
}

/// Some solution of A x = b (free variables set to zero), or nullopt.
inline std::optional<std::vector<Rational>> solve(const RatMatrix& a, const std::vector<Rational>& b,
                                                   std::size_t cols) {
  RatMatrix aug = a;
  for (std::size_t i = 0; i < aug.size(); ++i) aug[i].push_back(b[i]);
  const auto pivots = rref(aug);
  if (!pivots.empty() && pivots.back() == cols) return std::nullopt;
  std::vector<Rational> x(cols, Rational(0));
  for (std::size_t r = 0; r < pivots.size(); ++r) x[pivots[r]] = aug[r][cols];
  return x;
}

inline Rational determinant(RatMatrix a) {
  const std::size_t n = a.size();
  Rational det = 1;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t sel = c;
    while (sel < n && a[sel][c] == 0) ++sel;
    if (sel == n) return 0;
    if (sel != c) {
      std::swap(a[sel], a[c]);
      det = -det;
    }
    det *= a[c][c];
    for (std::size_t i = c + 1; i < n; ++i) {
      if (a[i][c] == 0) continue;
      const Rational f = a[i][c] / a[c][c];
      for (std::size_t k = c; k < n; ++k) a[i][k] -= f * a[c][k];
    }
  }
  return det;
}

inline Integer determinant(const IntMatrix& a) {
  const Rational d = determinant(to_rational(a));
  return boost::multiprecision::numerator(d);
}

/// Clears denominators and divides by the content, keeping the sign.
inline std::vector<std::int64_t> primitive_integer(const std::vector<Rational>& v) {
  Integer den = 1;
  for (const auto& x : v) den = lcm(den, boost::multiprecision::denominator(x));
  std::vector<Integer> ints;
  Integer g = 0;
  for (const auto& x : v) {
    ints.push_back(boost::multiprecision::numerator(x) * (den / boost::multiprecision::denominator(x)));
    g = gcd(g, ints.back());
  }
  std::vector<std::int64_t> out;
  for (auto& x : ints) out.push_back(to_int64(g == 0 ? x : x / g));
  return out;
}

/// Rank over F_p of an integer matrix (entries reduced first).
inline std::size_t rank_mod_p(IntMatrix a, std::int64_t p) {
  const std::size_t rows = a.size(), cols = cols_of(a);
  for (auto& row : a)
    for (auto& x : row) x = mod_floor(x, p);
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t sel = r;
    while (sel < rows && a[sel][c] == 0) ++sel;
    if (sel == rows) continue;
    std::swap(a[r], a[sel]);
    const std::int64_t inv = inverse_mod(a[r][c], p);
    for (auto& x : a[r]) x = x * inv % p;
    for (std::size_t i = r + 1; i < rows; ++i) {
      if (a[i][c] == 0) continue;
      const std::int64_t f = a[i][c];
      for (std::size_t k = c; k < cols; ++k) a[i][k] = mod_floor(a[i][k] - f * a[r][k], p);
    }
    ++r;
  }
  return r;
}

inline IntMatrix multiply(const IntMatrix& a, const IntMatrix& b) {
  const std::size_t n = a.size(), m = cols_of(b), inner = cols_of(a);
  IntMatrix c(n, std::vector<std::int64_t>(m, 0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < inner; ++k)
      for (std::size_t j = 0; j < m; ++j) c[i][j] = checked_add(c[i][j], checked_mul(a[i][k], b[k][j]));
  return c;
}

inline IntMatrix identity(std::size_t n) {
  IntMatrix id(n, std::vector<std::int64_t>(n, 0));
  for (std::size_t i = 0; i < n; ++i) id[i][i] = 1;
  return id;
}

inline IntMatrix transpose(const IntMatrix& a) {
  IntMatrix t(cols_of(a), std::vector<std::int64_t>(a.size()));
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < a[i].size(); ++j) t[j][i] = a[i][j];
  return t;
}

}  // namespace linalg

/// U * A * V = D with U, V unimodular and D diagonal, d1 | d2 | ...
struct SmithNormalForm {
  std::vector<std::int64_t> divisors;  // min(rows, cols) nonnegative entries
  IntMatrix left;                      // U
  IntMatrix right;                     // V
  IntMatrix diagonal;                  // D
};

inline SmithNormalForm smith_normal_form(const IntMatrix& input) {
  const std::size_t rows = input.size(), cols = linalg::cols_of(input);
  IntMatrix a = input;
  IntMatrix u = linalg::identity(rows), v = linalg::identity(cols);

  auto swap_rows = [&](std::size_t i, std::size_t j) {
    std::swap(a[i], a[j]);
    std::swap(u[i], u[j]);
  };
  auto swap_cols = [&](std::size_t i, std::size_t j) {
    for (auto& row : a) std::swap(row[i], row[j]);
    for (auto& row : v) std::swap(row[i], row[j]);
  };
  // row_i -= f * row_j
  auto add_row = [&](std::size_t i, std::size_t j, std::int64_t f) {
    for (std::size_t k = 0; k < cols; ++k) a[i][k] = checked_add(a[i][k], -checked_mul(f, a[j][k]));
    for (std::size_t k = 0; k < rows; ++k) u[i][k] = checked_add(u[i][k], -checked_mul(f, u[j][k]));
  };
  auto add_col = [&](std::size_t i, std::size_t j, std::int64_t f) {
    for (std::size_t k = 0; k < rows; ++k) a[k][i] = checked_add(a[k][i], -checked_mul(f, a[k][j]));
    for (std::size_t k = 0; k < cols; ++k) v[k][i] = checked_add(v[k][i], -checked_mul(f, v[k][j]));
  };

  const std::size_t diag = std::min(rows, cols);
  for (std::size_t t = 0; t < diag; ++t) {
    // Pivot: smallest nonzero absolute value in the trailing block.
    for (;;) {
      std::size_t pr = rows, pc = cols;
      for (std::size_t i = t; i < rows; ++i)
        for (std::size_t j = t; j < cols; ++j)
          if (a[i][j] != 0 && (pr == rows || std::llabs(a[i][j]) < std::llabs(a[pr][pc]))) {
            pr = i;
            pc = j;
          }
      if (pr == rows) break;  // trailing block is zero
      swap_rows(t, pr);
      swap_cols(t, pc);
      bool clean = true;
      for (std::size_t i = t + 1; i < rows; ++i) {
        if (a[i][t] == 0) continue;
        add_row(i, t, a[i][t] / a[t][t]);
        if (a[i][t] != 0) clean = false;
      }
      for (std::size_t j = t + 1; j < cols; ++j) {
        if (a[t][j] == 0) continue;
        add_col(j, t, a[t][j] / a[t][t]);
        if (a[t][j] != 0) clean = false;
      }
      if (!clean) continue;
      // Enforce divisibility of the rest of the block by the pivot.
      std::size_t bad_row = rows;
      for (std::size_t i = t + 1; i < rows && bad_row == rows; ++i)
        for (std::size_t j = t + 1; j < cols; ++j)
          if (a[i][j] % a[t][t] != 0) {
            bad_row = i;
            break;
          }
      if (bad_row == rows) break;
      add_row(t, bad_row, -1);
    }
    if (a[t][t] < 0) {
      for (auto& x : a[t]) x = -x;
      for (auto& x : u[t]) x = -x;
    }
  }

  SmithNormalForm out;
  for (std::size_t t = 0; t < diag; ++t) out.divisors.push_back(a[t][t]);
  out.left = std::move(u);
  out.right = std::move(v);
  out.diagonal = std::move(a);
  return out;
}

}  // namespace torvan
