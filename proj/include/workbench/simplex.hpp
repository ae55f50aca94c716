#pragma once

// Exact rational feasibility for {x >= 0 : A x = b}, by phase-one simplex
// with Bland's rule.  Used for small certificate problems only.

#include "integer.hpp"

#include <optional>

namespace workbench {

  using RatVector = std::vector<Rational>;

  inline std::optional<RatVector> nonnegative_solution(IntMatrix const& a, IntVector const& b) {
    std::size_t const m = a.rows(), n = a.cols();
    if (b.size() != m) {
      throw std::invalid_argument("nonnegative_solution: dimension mismatch");
    }
    // Tableau columns: n originals, m artificials, then the right-hand side.
    std::size_t const     width = n + m + 1;
    std::vector<RatVector> t(m, RatVector(width, Rational(0)));
    for (std::size_t i = 0; i < m; ++i) {
      int const s = b[i] < 0 ? -1 : 1;
      for (std::size_t j = 0; j < n; ++j) t[i][j] = Rational(s * a(i, j));
      t[i][n + i]     = 1;
      t[i][width - 1] = Rational(s * b[i]);
    }
    std::vector<std::size_t> basis(m);
    for (std::size_t i = 0; i < m; ++i) basis[i] = n + i;

    // Objective: minimise the sum of artificials; reduced costs row.
    RatVector cost(width, Rational(0));
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t j = 0; j < width; ++j) {
        if (j < n || j == width - 1) cost[j] -= t[i][j];
      }
    }

    while (true) {
      std::optional<std::size_t> enter;
      for (std::size_t j = 0; j < n + m; ++j) {
        if (cost[j] < 0) {
          enter = j;
          break;
        }
      }
      if (!enter) break;
      std::optional<std::size_t> leave;
      Rational                   best;
      for (std::size_t i = 0; i < m; ++i) {
        if (t[i][*enter] <= 0) continue;
        Rational const r = t[i][width - 1] / t[i][*enter];
        if (!leave || r < best || (r == best && basis[i] < basis[*leave])) {
          leave = i;
          best  = r;
        }
      }
      if (!leave) break;  // unbounded direction cannot occur in phase one
      std::size_t const p   = *leave;
      Rational const    piv = t[p][*enter];
      for (auto& x : t[p]) x /= piv;
      for (std::size_t i = 0; i < m; ++i) {
        if (i == p || t[i][*enter] == 0) continue;
        Rational const f = t[i][*enter];
        for (std::size_t j = 0; j < width; ++j) t[i][j] -= f * t[p][j];
      }
      Rational const f = cost[*enter];
      for (std::size_t j = 0; j < width; ++j) cost[j] -= f * t[p][j];
      basis[p] = *enter;
    }
    if (cost[width - 1] != 0) return std::nullopt;
    RatVector x(n, Rational(0));
    for (std::size_t i = 0; i < m; ++i) {
      if (basis[i] < n) x[basis[i]] = t[i][width - 1];
    }
    return x;
  }

  // Integer vector y >= 1 with sum y_i v_i = 0, if one exists.
  inline std::optional<IntVector> positive_relation(std::vector<IntVector> const& v,
                                                    std::size_t                   ambient) {
    if (v.empty()) return IntVector{};
    IntMatrix const a   = IntMatrix::from_columns(v, ambient);
    IntVector       rhs = zero_vector(ambient);
    for (auto const& x : v) rhs -= x;
    auto z = nonnegative_solution(a, rhs);
    if (!z) return std::nullopt;
    Integer den = 1;
    for (auto const& q : *z) {
      Integer const d = denominator(q);
      den             = den / gcd(den, d) * d;
    }
    IntVector y(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
      y[i] = den + numerator(Rational((*z)[i] * den));
    }
    return y;
  }

}  // namespace workbench
