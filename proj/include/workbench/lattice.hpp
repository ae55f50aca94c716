#pragma once

// Exact integer linear algebra: Hermite and Smith normal forms, integer
// linear systems, kernels and ranks.  Everything is arbitrary precision.
//
// Conventions
// -----------
// * Hermite form is column style: H = M * V with V unimodular.  The nonzero
//   columns of H come first; column j has its pivot (first nonzero entry from
//   the top) strictly below the pivot of column j - 1, pivots are positive,
//   and every entry to the left of a pivot lies in [0, pivot).
// * Smith form satisfies U * M * V = D with U, V unimodular and
//   d_1 | d_2 | ... | d_r, all d_i > 0.

#include "integer.hpp"

#include <optional>
#include <utility>

namespace workbench {

  struct HermiteForm {
    IntMatrix   hermite;
    IntMatrix   transform;  // V with M * V = hermite
    std::size_t rank = 0;
  };

  struct SmithForm {
    IntMatrix   diagonal;  // D
    IntMatrix   left;      // U
    IntMatrix   right;     // V
    std::size_t rank = 0;

    Integer invariant(std::size_t i) const {
      return diagonal(i, i);
    }
  };

  struct CanonicalForms {
    HermiteForm hermite;
    SmithForm   smith;
  };

  // Complete integer solution set {particular + span_Z(homogeneous_basis)}.
  struct AffineSolutionSet {
    std::optional<IntVector> particular;
    std::vector<IntVector>   homogeneous_basis;

    bool feasible() const noexcept {
      return particular.has_value();
    }
  };

  namespace detail {
    // Extended gcd: returns (g, s, t) with s*a + t*b = g >= 0.
    inline std::tuple<Integer, Integer, Integer> xgcd(Integer const& a, Integer const& b) {
      Integer old_r = a, r = b, old_s = 1, s = 0, old_t = 0, t = 1;
      while (r != 0) {
        Integer q   = old_r / r;
        Integer tmp = old_r - q * r;
        old_r       = r;
        r           = tmp;
        tmp         = old_s - q * s;
        old_s       = s;
        s           = tmp;
        tmp         = old_t - q * t;
        old_t       = t;
        t           = tmp;
      }
      if (old_r < 0) {
        old_r = -old_r;
        old_s = -old_s;
        old_t = -old_t;
      }
      return {old_r, old_s, old_t};
    }
  }  // namespace detail

  inline HermiteForm hermite_form(IntMatrix const& m) {
    HermiteForm res{m, IntMatrix::identity(m.cols()), 0};
    IntMatrix&  h = res.hermite;
    IntMatrix&  v = res.transform;
    std::size_t c = 0;
    for (std::size_t i = 0; i < h.rows() && c < h.cols(); ++i) {
      // Combine columns c.. so that only column c is nonzero in row i.
      for (std::size_t j = c + 1; j < h.cols(); ++j) {
        if (h(i, j) == 0) continue;
        Integer a = h(i, c), b = h(i, j);
        auto [g, s, t] = detail::xgcd(a, b);
        // [col_c, col_j] <- [s col_c + t col_j, -(b/g) col_c + (a/g) col_j]
        Integer const p = -(b / g), q = a / g;
        for (IntMatrix* x : {&h, &v}) {
          for (std::size_t r = 0; r < x->rows(); ++r) {
            Integer const xc = (*x)(r, c), xj = (*x)(r, j);
            (*x)(r, c)       = s * xc + t * xj;
            (*x)(r, j)       = p * xc + q * xj;
          }
        }
      }
      if (h(i, c) == 0) continue;
      if (h(i, c) < 0) {
        h.negate_column(c);
        v.negate_column(c);
      }
      for (std::size_t j = 0; j < c; ++j) {
        Integer const f = floor_div(h(i, j), h(i, c));
        h.add_column(j, c, -f);
        v.add_column(j, c, -f);
      }
      ++c;
    }
    res.rank = c;
    return res;
  }

  inline SmithForm smith_form(IntMatrix const& m) {
    std::size_t const rows = m.rows(), cols = m.cols();
    SmithForm         res{m, IntMatrix::identity(rows), IntMatrix::identity(cols), 0};
    IntMatrix&        d = res.diagonal;
    IntMatrix&        u = res.left;
    IntMatrix&        v = res.right;

    std::size_t t = 0;
    for (; t < std::min(rows, cols); ++t) {
      while (true) {
        // Pivot: smallest nonzero absolute value in the trailing block.
        std::optional<std::pair<std::size_t, std::size_t>> piv;
        for (std::size_t i = t; i < rows; ++i) {
          for (std::size_t j = t; j < cols; ++j) {
            if (d(i, j) != 0 && (!piv || abs(d(i, j)) < abs(d(piv->first, piv->second)))) {
              piv = {i, j};
            }
          }
        }
        if (!piv) {
          res.rank = t;
          return res;
        }
        d.swap_rows(t, piv->first);
        u.swap_rows(t, piv->first);
        d.swap_columns(t, piv->second);
        v.swap_columns(t, piv->second);

        bool clean = true;
        for (std::size_t i = t + 1; i < rows; ++i) {
          Integer const q = floor_div(d(i, t), d(t, t));
          d.add_row(i, t, -q);
          u.add_row(i, t, -q);
          clean = clean && d(i, t) == 0;
        }
        for (std::size_t j = t + 1; j < cols; ++j) {
          Integer const q = floor_div(d(t, j), d(t, t));
          d.add_column(j, t, -q);
          v.add_column(j, t, -q);
          clean = clean && d(t, j) == 0;
        }
        if (!clean) continue;

        // Enforce divisibility of the remaining block by the pivot.
        std::optional<std::size_t> bad;
        for (std::size_t i = t + 1; i < rows && !bad; ++i) {
          for (std::size_t j = t + 1; j < cols; ++j) {
            if (d(i, j) % d(t, t) != 0) {
              bad = i;
              break;
            }
          }
        }
        if (bad) {
          d.add_row(t, *bad, 1);
          u.add_row(t, *bad, 1);
          continue;
        }
        if (d(t, t) < 0) {
          d.negate_row(t);
          u.negate_row(t);
        }
        break;
      }
    }
    res.rank = t;
    // Trailing block may still be nonzero only if t == min(rows, cols).
    return res;
  }

  inline CanonicalForms canonical_forms(IntMatrix const& m) {
    return {hermite_form(m), smith_form(m)};
  }

  // Rank over Q by fraction-free row elimination; independent of the
  // Hermite/Smith code paths.
  inline std::size_t rank(IntMatrix m) {
    std::size_t r = 0;
    for (std::size_t c = 0; c < m.cols() && r < m.rows(); ++c) {
      std::size_t p = r;
      while (p < m.rows() && m(p, c) == 0) ++p;
      if (p == m.rows()) continue;
      m.swap_rows(r, p);
      for (std::size_t i = r + 1; i < m.rows(); ++i) {
        if (m(i, c) == 0) continue;
        Integer const a = m(r, c), b = m(i, c);
        for (std::size_t j = c; j < m.cols(); ++j) {
          m(i, j) = a * m(i, j) - b * m(r, j);
        }
        IntVector row = primitive(m.row(i));
        for (std::size_t j = 0; j < m.cols(); ++j) m(i, j) = row[j];
      }
      ++r;
    }
    return r;
  }

  inline std::size_t rank(std::vector<IntVector> const& vectors, std::size_t ambient) {
    return rank(IntMatrix::from_columns(vectors, ambient));
  }

  inline AffineSolutionSet solve_integer(IntMatrix const& a, IntVector const& b) {
    if (a.rows() != b.size()) {
      throw std::invalid_argument("solve_integer: dimension mismatch");
    }
    SmithForm const   s  = smith_form(a);
    IntVector const   ub = s.left * b;
    AffineSolutionSet out;
    IntVector         y = zero_vector(a.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
      if (i < s.rank) {
        if (ub[i] % s.invariant(i) != 0) return out;
        y[i] = ub[i] / s.invariant(i);
      } else if (ub[i] != 0) {
        return out;
      }
    }
    out.particular = s.right * y;
    for (std::size_t j = s.rank; j < a.cols(); ++j) {
      out.homogeneous_basis.push_back(s.right.column(j));
    }
    return out;
  }

  inline std::vector<IntVector> kernel_basis(IntMatrix const& a) {
    return solve_integer(a, zero_vector(a.rows())).homogeneous_basis;
  }

  // Basis of the lattice spanned by the given vectors (Hermite columns).
  inline std::vector<IntVector> lattice_basis(std::vector<IntVector> const& vectors,
                                              std::size_t                   ambient) {
    if (vectors.empty()) return {};
    HermiteForm const      h = hermite_form(IntMatrix::from_columns(vectors, ambient));
    std::vector<IntVector> out;
    for (std::size_t j = 0; j < h.rank; ++j) {
      out.push_back(h.hermite.column(j));
    }
    return out;
  }

  // Coordinates of v with respect to a lattice basis, or nothing when v is not
  // in the lattice.
  inline std::optional<IntVector> lattice_coordinates(std::vector<IntVector> const& basis,
                                                      IntVector const&              v) {
    if (basis.empty()) {
      return is_zero(v) ? std::optional<IntVector>(IntVector{}) : std::nullopt;
    }
    auto sol = solve_integer(IntMatrix::from_columns(basis, v.size()), v);
    return sol.particular;
  }

  inline IntVector from_coordinates(std::vector<IntVector> const& basis,
                                    IntVector const&              coords,
                                    std::size_t                   ambient) {
    IntVector v = zero_vector(ambient);
    for (std::size_t i = 0; i < basis.size(); ++i) {
      v += coords[i] * basis[i];
    }
    return v;
  }

  // Basis of ker(M - sign * I).
  inline std::vector<IntVector> eigen_lattice(IntMatrix const& m, int sign) {
    if (m.rows() != m.cols()) {
      throw std::invalid_argument("eigen_lattice: matrix not square");
    }
    IntMatrix shifted(m);
    for (std::size_t i = 0; i < m.rows(); ++i) {
      shifted(i, i) -= sign;
    }
    return kernel_basis(shifted);
  }

  // Rank of the lattice spanned by the columns of M.
  inline std::size_t image_rank(IntMatrix const& m) {
    return rank(m);
  }

  inline bool is_unimodular(IntMatrix const& m) {
    if (m.rows() != m.cols()) return false;
    Integer const d = determinant(m);
    return d == 1 || d == -1;
  }

  // Inverse of a unimodular matrix, via its Smith form (D = I).
  inline IntMatrix unimodular_inverse(IntMatrix const& m) {
    SmithForm const s = smith_form(m);
    if (s.rank != m.rows() || m.rows() != m.cols()) {
      throw std::invalid_argument("unimodular_inverse: matrix not invertible");
    }
    for (std::size_t i = 0; i < s.rank; ++i) {
      if (s.invariant(i) != 1) {
        throw std::invalid_argument("unimodular_inverse: matrix not unimodular");
      }
    }
    // U M V = I  =>  M^{-1} = V U
    return s.right * s.left;
  }

}  // namespace workbench
