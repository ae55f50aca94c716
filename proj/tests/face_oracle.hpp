#pragma once

// Exhaustive face enumeration over Q and a seeded corpus of random pointed
// monoids, shared by the property tests and the acceptance suite.

#include "workbench/affine.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <random>

namespace oracle {

  using namespace workbench;

  using QVector = std::vector<Rational>;

  // Reduced row echelon form over Q; returns pivot columns.
  inline std::vector<std::size_t> rref(std::vector<QVector>& rows, std::size_t ncols) {
    std::vector<std::size_t> pivots;
    std::size_t              r = 0;
    for (std::size_t c = 0; c < ncols && r < rows.size(); ++c) {
      std::size_t p = r;
      while (p < rows.size() && rows[p][c] == 0) ++p;
      if (p == rows.size()) continue;
      std::swap(rows[p], rows[r]);
      Rational const inv = Rational(1) / rows[r][c];
      for (auto& x : rows[r]) x *= inv;
      for (std::size_t i = 0; i < rows.size(); ++i) {
        if (i == r || rows[i][c] == 0) continue;
        Rational const f = rows[i][c];
        for (std::size_t j = 0; j < ncols; ++j) rows[i][j] -= f * rows[r][j];
      }
      pivots.push_back(c);
      ++r;
    }
    return pivots;
  }

  inline std::size_t rank_q(std::vector<IntVector> const& vs) {
    if (vs.empty()) return 0;
    std::vector<QVector> rows;
    for (auto const& v : vs) rows.emplace_back(v.begin(), v.end());
    return rref(rows, vs.front().size()).size();
  }

  // Kernel of the matrix whose columns are cols.
  inline std::vector<QVector> kernel_q(std::vector<IntVector> const& cols) {
    std::size_t const    m = cols.front().size(), n = cols.size();
    std::vector<QVector> rows(m, QVector(n));
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t i = 0; i < m; ++i) rows[i][j] = Rational(cols[j][i]);
    auto const        piv = rref(rows, n);
    std::vector<bool> is_piv(n, false);
    for (auto c : piv) is_piv[c] = true;
    std::vector<QVector> out;
    for (std::size_t f = 0; f < n; ++f) {
      if (is_piv[f]) continue;
      QVector v(n);
      v[f] = 1;
      for (std::size_t k = 0; k < piv.size(); ++k) v[piv[k]] = -rows[k][f];
      out.push_back(v);
    }
    return out;
  }

  // F is divisor closed iff no positive combination of generators outside F
  // lies in span(F).  Such a combination exists iff some circuit of
  // [g_T | basis of span F] is positive on T, so a scan over subsets T of
  // the complement is exhaustive.
  inline bool is_face(std::vector<IntVector> const& g, GenSet f) {
    std::vector<IntVector> basis;
    for (std::size_t i = 0; i < g.size(); ++i) {
      if (!(f >> i & 1)) continue;
      auto trial = basis;
      trial.push_back(g[i]);
      if (rank_q(trial) == trial.size()) basis = trial;
    }
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < g.size(); ++i)
      if (!(f >> i & 1)) out.push_back(i);
    for (GenSet t = 1; t < (GenSet(1) << out.size()); ++t) {
      std::vector<IntVector> cols;
      std::size_t            nt = 0;
      for (std::size_t k = 0; k < out.size(); ++k) {
        if (t >> k & 1) {
          cols.push_back(g[out[k]]);
          ++nt;
        }
      }
      cols.insert(cols.end(), basis.begin(), basis.end());
      auto const ker = kernel_q(cols);
      if (ker.size() != 1) continue;
      bool pos = true, neg = true;
      for (std::size_t k = 0; k < nt; ++k) {
        pos = pos && ker[0][k] > 0;
        neg = neg && ker[0][k] < 0;
      }
      if (pos || neg) return false;
    }
    return true;
  }

  struct FaceOracle {
    std::vector<GenSet>      faces;  // proper faces and B
    std::vector<std::size_t> rank;
    std::vector<std::size_t> height;  // of the prime B \ <F>, the zero prime at 0
  };

  inline FaceOracle face_oracle(std::vector<IntVector> const& g) {
    FaceOracle   o;
    GenSet const all = (GenSet(1) << g.size()) - 1;
    for (GenSet f = 0; f <= all; ++f) {
      if (!is_face(g, f)) continue;
      o.faces.push_back(f);
      std::vector<IntVector> v;
      for (auto i : members_of(f)) v.push_back(g[i]);
      o.rank.push_back(rank_q(v));
    }
    // Larger faces first, so primes below come first.
    std::vector<std::size_t> order(o.faces.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return __builtin_popcountll(o.faces[a]) > __builtin_popcountll(o.faces[b]);
    });
    o.height.assign(o.faces.size(), 0);
    for (std::size_t a : order) {
      for (std::size_t b : order) {
        bool const below = o.faces[b] != o.faces[a] && (o.faces[b] & o.faces[a]) == o.faces[a];
        if (below) o.height[a] = std::max(o.height[a], o.height[b] + 1);
      }
    }
    return o;
  }

  inline IntMatrix random_unimodular(std::mt19937& rng, std::size_t d) {
    IntMatrix                          u = IntMatrix::identity(d);
    std::uniform_int_distribution<int> pick(0, static_cast<int>(d) - 1), coef(-2, 2);
    for (int s = 0; s < 6 && d > 1; ++s) {
      std::size_t const i = pick(rng), j = pick(rng);
      if (i == j) continue;
      Integer const c = coef(rng);
      for (std::size_t k = 0; k < d; ++k) u(i, k) += c * u(j, k);
    }
    return u;
  }

  // Random pointed monoids: nonnegative generators, then a unimodular change
  // of coordinates so that entries of both signs occur.
  struct Instance {
    AffineMonoid           monoid;
    std::vector<IntVector> positive;  // before the change of basis
    IntMatrix              change;
  };

  inline std::vector<Instance> corpus(std::size_t count, unsigned seed) {
    std::mt19937                       rng(seed);
    std::uniform_int_distribution<int> rank_d(1, 4), gens_d(1, 5), entry(0, 3);
    std::vector<Instance>              out;
    while (out.size() < count) {
      std::size_t const      d = rank_d(rng), n = gens_d(rng);
      std::vector<IntVector> g;
      for (std::size_t i = 0; i < n; ++i) {
        IntVector v(d);
        for (auto& x : v) x = entry(rng);
        if (is_zero(v)) v[0] = 1;
        g.push_back(v);
      }
      IntMatrix const          u = random_unimodular(rng, d);
      std::vector<IntVector>   h;
      std::vector<std::string> names;
      for (std::size_t i = 0; i < n; ++i) {
        h.push_back(u * g[i]);
        names.push_back("g" + std::to_string(i + 1));
      }
      out.push_back({AffineMonoid(d, names, h), g, u});
    }
    return out;
  }

  inline std::vector<Instance> const& instances() {
    static auto const c = corpus(150, 20240611);
    return c;
  }

  // v in <g> for nonnegative nonzero generators: peel off one generator at a
  // time, which terminates since each step lowers the coordinate sum.
  inline bool reachable(std::vector<IntVector> const& g, IntVector const& v,
                 std::map<IntVector, bool>& memo) {
    if (is_zero(v)) return true;
    for (auto const& x : v)
      if (x < 0) return false;
    if (auto it = memo.find(v); it != memo.end()) return it->second;
    bool found = false;
    for (auto const& h : g) {
      if (reachable(g, v - h, memo)) {
        found = true;
        break;
      }
    }
    return memo[v] = found;
  }

}  // namespace oracle
