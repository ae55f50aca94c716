#pragma once

// Exact integer vectors and matrices shared by every module.

#include <boost/multiprecision/cpp_int.hpp>

#include <algorithm>
#include <cstddef>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace workbench {

  using Integer  = boost::multiprecision::cpp_int;
  using Rational = boost::multiprecision::cpp_rational;

  using IntVector = std::vector<Integer>;

  inline IntVector zero_vector(std::size_t n) {
    return IntVector(n, Integer(0));
  }

  inline IntVector unit_vector(std::size_t n, std::size_t i) {
    IntVector v = zero_vector(n);
    v[i]        = 1;
    return v;
  }

  inline bool is_zero(IntVector const& v) {
    return std::all_of(v.begin(), v.end(), [](Integer const& x) { return x == 0; });
  }

  inline IntVector operator+(IntVector const& a, IntVector const& b) {
    IntVector r(a);
    for (std::size_t i = 0; i < r.size(); ++i) {
      r[i] += b[i];
    }
    return r;
  }

  inline IntVector operator-(IntVector const& a, IntVector const& b) {
    IntVector r(a);
    for (std::size_t i = 0; i < r.size(); ++i) {
      r[i] -= b[i];
    }
    return r;
  }

  inline IntVector operator-(IntVector const& a) {
    IntVector r(a);
    for (auto& x : r) {
      x = -x;
    }
    return r;
  }

  inline IntVector operator*(Integer const& c, IntVector const& a) {
    IntVector r(a);
    for (auto& x : r) {
      x *= c;
    }
    return r;
  }

  inline IntVector& operator+=(IntVector& a, IntVector const& b) {
    for (std::size_t i = 0; i < a.size(); ++i) {
      a[i] += b[i];
    }
    return a;
  }

  inline IntVector& operator-=(IntVector& a, IntVector const& b) {
    for (std::size_t i = 0; i < a.size(); ++i) {
      a[i] -= b[i];
    }
    return a;
  }

  inline Integer dot(IntVector const& a, IntVector const& b) {
    Integer s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
      s += a[i] * b[i];
    }
    return s;
  }

  inline Integer gcd(Integer a, Integer b) {
    if (a < 0) a = -a;
    if (b < 0) b = -b;
    while (b != 0) {
      Integer t = a % b;
      a         = b;
      b         = t;
    }
    return a;
  }

  inline Integer content(IntVector const& v) {
    Integer g = 0;
    for (auto const& x : v) {
      g = gcd(g, x);
    }
    return g;
  }

  // Divides out the content; the zero vector is returned unchanged.
  inline IntVector primitive(IntVector v) {
    Integer g = content(v);
    if (g > 1) {
      for (auto& x : v) {
        x /= g;
      }
    }
    return v;
  }

  // Floor division for arbitrary signs.
  inline Integer floor_div(Integer const& a, Integer const& b) {
    Integer q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) {
      --q;
    }
    return q;
  }

  inline std::string to_string(IntVector const& v) {
    std::ostringstream os;
    os << '(';
    for (std::size_t i = 0; i < v.size(); ++i) {
      os << (i ? "," : "") << v[i];
    }
    os << ')';
    return os.str();
  }

  inline std::vector<long long> to_ll(IntVector const& v) {
    std::vector<long long> out;
    out.reserve(v.size());
    for (auto const& x : v) {
      out.push_back(x.convert_to<long long>());
    }
    return out;
  }

  inline IntVector from_ll(std::vector<long long> const& v) {
    return IntVector(v.begin(), v.end());
  }

  ////////////////////////////////////////////////////////////////////////
  // IntMatrix
  ////////////////////////////////////////////////////////////////////////

  class IntMatrix {
   public:
    IntMatrix() = default;
    IntMatrix(std::size_t rows, std::size_t cols)
        : _rows(rows), _cols(cols), _data(rows * cols, Integer(0)) {}

    static IntMatrix identity(std::size_t n) {
      IntMatrix m(n, n);
      for (std::size_t i = 0; i < n; ++i) {
        m(i, i) = 1;
      }
      return m;
    }

    static IntMatrix from_rows(std::vector<IntVector> const& rows, std::size_t ncols) {
      IntMatrix m(rows.size(), ncols);
      for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].size() != ncols) {
          throw std::invalid_argument("IntMatrix::from_rows: ragged rows");
        }
        for (std::size_t j = 0; j < ncols; ++j) {
          m(i, j) = rows[i][j];
        }
      }
      return m;
    }

    static IntMatrix from_rows(std::vector<IntVector> const& rows) {
      return from_rows(rows, rows.empty() ? 0 : rows.front().size());
    }

    // Columns are the given vectors, which must share a length.
    static IntMatrix from_columns(std::vector<IntVector> const& cols, std::size_t nrows) {
      IntMatrix m(nrows, cols.size());
      for (std::size_t j = 0; j < cols.size(); ++j) {
        if (cols[j].size() != nrows) {
          throw std::invalid_argument("IntMatrix::from_columns: ragged columns");
        }
        for (std::size_t i = 0; i < nrows; ++i) {
          m(i, j) = cols[j][i];
        }
      }
      return m;
    }

    std::size_t rows() const noexcept {
      return _rows;
    }
    std::size_t cols() const noexcept {
      return _cols;
    }

    Integer& operator()(std::size_t i, std::size_t j) {
      return _data[i * _cols + j];
    }
    Integer const& operator()(std::size_t i, std::size_t j) const {
      return _data[i * _cols + j];
    }

    IntVector row(std::size_t i) const {
      return IntVector(_data.begin() + i * _cols, _data.begin() + (i + 1) * _cols);
    }

    IntVector column(std::size_t j) const {
      IntVector c(_rows);
      for (std::size_t i = 0; i < _rows; ++i) {
        c[i] = (*this)(i, j);
      }
      return c;
    }

    std::vector<IntVector> columns() const {
      std::vector<IntVector> out;
      for (std::size_t j = 0; j < _cols; ++j) {
        out.push_back(column(j));
      }
      return out;
    }

    IntMatrix transpose() const {
      IntMatrix t(_cols, _rows);
      for (std::size_t i = 0; i < _rows; ++i) {
        for (std::size_t j = 0; j < _cols; ++j) {
          t(j, i) = (*this)(i, j);
        }
      }
      return t;
    }

    void swap_rows(std::size_t a, std::size_t b) {
      if (a == b) return;
      for (std::size_t j = 0; j < _cols; ++j) {
        std::swap((*this)(a, j), (*this)(b, j));
      }
    }

    void swap_columns(std::size_t a, std::size_t b) {
      if (a == b) return;
      for (std::size_t i = 0; i < _rows; ++i) {
        std::swap((*this)(i, a), (*this)(i, b));
      }
    }

    // row[dst] += c * row[src]
    void add_row(std::size_t dst, std::size_t src, Integer const& c) {
      if (c == 0) return;
      for (std::size_t j = 0; j < _cols; ++j) {
        (*this)(dst, j) += c * (*this)(src, j);
      }
    }

    // col[dst] += c * col[src]
    void add_column(std::size_t dst, std::size_t src, Integer const& c) {
      if (c == 0) return;
      for (std::size_t i = 0; i < _rows; ++i) {
        (*this)(i, dst) += c * (*this)(i, src);
      }
    }

    void negate_row(std::size_t i) {
      for (std::size_t j = 0; j < _cols; ++j) {
        (*this)(i, j) = -(*this)(i, j);
      }
    }

    void negate_column(std::size_t j) {
      for (std::size_t i = 0; i < _rows; ++i) {
        (*this)(i, j) = -(*this)(i, j);
      }
    }

    bool is_zero() const {
      return std::all_of(_data.begin(), _data.end(), [](Integer const& x) { return x == 0; });
    }

    bool operator==(IntMatrix const& that) const {
      return _rows == that._rows && _cols == that._cols && _data == that._data;
    }
    bool operator!=(IntMatrix const& that) const {
      return !(*this == that);
    }

   private:
    std::size_t          _rows = 0;
    std::size_t          _cols = 0;
    std::vector<Integer> _data;
  };

  inline IntMatrix operator*(IntMatrix const& a, IntMatrix const& b) {
    if (a.cols() != b.rows()) {
      throw std::invalid_argument("IntMatrix product: dimension mismatch");
    }
    IntMatrix r(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
      for (std::size_t k = 0; k < a.cols(); ++k) {
        if (a(i, k) == 0) continue;
        for (std::size_t j = 0; j < b.cols(); ++j) {
          r(i, j) += a(i, k) * b(k, j);
        }
      }
    }
    return r;
  }

  inline IntVector operator*(IntMatrix const& a, IntVector const& v) {
    if (a.cols() != v.size()) {
      throw std::invalid_argument("IntMatrix * IntVector: dimension mismatch");
    }
    IntVector r = zero_vector(a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i) {
      for (std::size_t j = 0; j < a.cols(); ++j) {
        r[i] += a(i, j) * v[j];
      }
    }
    return r;
  }

  inline IntMatrix operator-(IntMatrix const& a, IntMatrix const& b) {
    IntMatrix r(a);
    for (std::size_t i = 0; i < a.rows(); ++i) {
      for (std::size_t j = 0; j < a.cols(); ++j) {
        r(i, j) -= b(i, j);
      }
    }
    return r;
  }

  inline IntMatrix operator+(IntMatrix const& a, IntMatrix const& b) {
    IntMatrix r(a);
    for (std::size_t i = 0; i < a.rows(); ++i) {
      for (std::size_t j = 0; j < a.cols(); ++j) {
        r(i, j) += b(i, j);
      }
    }
    return r;
  }

  inline std::ostream& operator<<(std::ostream& os, IntMatrix const& m) {
    os << '[';
    for (std::size_t i = 0; i < m.rows(); ++i) {
      os << (i ? "," : "") << '[';
      for (std::size_t j = 0; j < m.cols(); ++j) {
        os << (j ? "," : "") << m(i, j);
      }
      os << ']';
    }
    return os << ']';
  }

  // Exact determinant by fraction-free (Bareiss) elimination.
  inline Integer determinant(IntMatrix m) {
    std::size_t const n = m.rows();
    if (n != m.cols()) {
      throw std::invalid_argument("determinant: matrix not square");
    }
    if (n == 0) return 1;
    Integer sign = 1, prev = 1;
    for (std::size_t k = 0; k + 1 < n; ++k) {
      if (m(k, k) == 0) {
        std::size_t p = k + 1;
        while (p < n && m(p, k) == 0) ++p;
        if (p == n) return 0;
        m.swap_rows(k, p);
        sign = -sign;
      }
      for (std::size_t i = k + 1; i < n; ++i) {
        for (std::size_t j = k + 1; j < n; ++j) {
          m(i, j) = (m(i, j) * m(k, k) - m(i, k) * m(k, j)) / prev;
        }
      }
      prev = m(k, k);
    }
    return sign * m(n - 1, n - 1);
  }

}  // namespace workbench
