#pragma once

#include <gmpxx.h>

#include <algorithm>
#include <cstddef>
#include <initializer_list>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace klow {

using BigInt = mpz_class;

/// Dense matrix of arbitrary-precision integers, row-major.
class IntMatrix {
 public:
  IntMatrix() = default;
  IntMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}
  IntMatrix(std::initializer_list<std::initializer_list<long>> init) {
    rows_ = init.size();
    cols_ = rows_ == 0 ? 0 : init.begin()->size();
    data_.reserve(rows_ * cols_);
    for (const auto& row : init) {
      for (long v : row) data_.emplace_back(v);
    }
  }

  static IntMatrix identity(std::size_t n) {
    IntMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
    return m;
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  BigInt& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const BigInt& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  void append_row(const std::vector<BigInt>& row) {
    if (rows_ == 0 && cols_ == 0) cols_ = row.size();
    data_.insert(data_.end(), row.begin(), row.end());
    ++rows_;
  }

  std::vector<BigInt> row(std::size_t r) const {
    return {data_.begin() + static_cast<std::ptrdiff_t>(r * cols_),
            data_.begin() + static_cast<std::ptrdiff_t>((r + 1) * cols_)};
  }
  std::vector<BigInt> col(std::size_t c) const {
    std::vector<BigInt> out(rows_);
    for (std::size_t r = 0; r < rows_; ++r) out[r] = (*this)(r, c);
    return out;
  }

  void swap_rows(std::size_t a, std::size_t b) {
    if (a == b) return;
    for (std::size_t c = 0; c < cols_; ++c) std::swap((*this)(a, c), (*this)(b, c));
  }
  void swap_cols(std::size_t a, std::size_t b) {
    if (a == b) return;
    for (std::size_t r = 0; r < rows_; ++r) std::swap((*this)(r, a), (*this)(r, b));
  }
  /// row[dst] += k * row[src]
  void add_row(std::size_t dst, std::size_t src, const BigInt& k) {
    if (k == 0) return;
    for (std::size_t c = 0; c < cols_; ++c) (*this)(dst, c) += k * (*this)(src, c);
  }
  /// col[dst] += k * col[src]
  void add_col(std::size_t dst, std::size_t src, const BigInt& k) {
    if (k == 0) return;
    for (std::size_t r = 0; r < rows_; ++r) (*this)(r, dst) += k * (*this)(r, src);
  }
  void negate_row(std::size_t r) {
    for (std::size_t c = 0; c < cols_; ++c) (*this)(r, c) = -(*this)(r, c);
  }

  bool operator==(const IntMatrix& o) const {
    return rows_ == o.rows_ && cols_ == o.cols_ && data_ == o.data_;
  }

  std::string str() const {
    std::ostringstream os;
    os << '[';
    for (std::size_t r = 0; r < rows_; ++r) {
      os << (r ? ",[" : "[");
      for (std::size_t c = 0; c < cols_; ++c) os << (c ? "," : "") << (*this)(r, c).get_str();
      os << ']';
    }
    os << ']';
    return os.str();
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<BigInt> data_;
};

inline IntMatrix operator*(const IntMatrix& a, const IntMatrix& b) {
  IntMatrix out(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      if (a(i, k) == 0) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) out(i, j) += a(i, k) * b(k, j);
    }
  return out;
}

/// Determinant by fraction-free (Bareiss) elimination.
inline BigInt determinant(IntMatrix m) {
  const std::size_t n = m.rows();
  if (n == 0) return 1;
  BigInt sign = 1, prev = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (m(k, k) == 0) {
      std::size_t p = k + 1;
      while (p < n && m(p, k) == 0) ++p;
      if (p == n) return 0;
      m.swap_rows(k, p);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i)
      for (std::size_t j = k + 1; j < n; ++j) {
        BigInt v = m(i, j) * m(k, k) - m(i, k) * m(k, j);
        mpz_divexact(v.get_mpz_t(), v.get_mpz_t(), prev.get_mpz_t());
        m(i, j) = v;
      }
    prev = m(k, k);
  }
  return sign * m(n - 1, n - 1);
}

/// Row-reduces `m` to an echelon basis of its row lattice (zero rows dropped).
/// The row lattice is unchanged.
inline IntMatrix row_compress(const IntMatrix& m) {
  IntMatrix a = m;
  std::size_t lead = 0;
  for (std::size_t c = 0; c < a.cols() && lead < a.rows(); ++c) {
    while (true) {
      std::size_t best = a.rows();
      for (std::size_t r = lead; r < a.rows(); ++r) {
        if (a(r, c) == 0) continue;
        if (best == a.rows() || abs(a(r, c)) < abs(a(best, c))) best = r;
      }
      if (best == a.rows()) break;
      a.swap_rows(lead, best);
      bool clean = true;
      for (std::size_t r = lead + 1; r < a.rows(); ++r) {
        if (a(r, c) == 0) continue;
        BigInt q;
        mpz_fdiv_q(q.get_mpz_t(), a(r, c).get_mpz_t(), a(lead, c).get_mpz_t());
        a.add_row(r, lead, -q);
        if (a(r, c) != 0) clean = false;
      }
      if (clean) {
        ++lead;
        break;
      }
    }
  }
  IntMatrix out(0, a.cols());
  for (std::size_t r = 0; r < lead; ++r) out.append_row(a.row(r));
  return out;
}

/// Result of a Smith normal form computation: `left * m * right == diag(diagonal)`.
struct SmithForm {
  std::vector<BigInt> diagonal;  ///< d_1 | d_2 | ..., nonnegative; length min(rows, cols)
  IntMatrix left;                ///< unimodular, rows x rows (empty unless requested)
  IntMatrix right;               ///< unimodular, cols x cols
  IntMatrix right_inverse;       ///< inverse of `right`
  std::size_t rank = 0;
};

/// Smith normal form over the integers with exact unimodular certificates.
/// Computing `left` is optional because presentations only need `right`.
inline SmithForm smith_normal_form(const IntMatrix& m, bool want_left = true) {
  IntMatrix a = m;
  const std::size_t rows = a.rows(), cols = a.cols();
  SmithForm out;
  if (want_left) out.left = IntMatrix::identity(rows);
  out.right = IntMatrix::identity(cols);
  out.right_inverse = IntMatrix::identity(cols);

  auto row_swap = [&](std::size_t x, std::size_t y) {
    a.swap_rows(x, y);
    if (want_left) out.left.swap_rows(x, y);
  };
  auto col_swap = [&](std::size_t x, std::size_t y) {
    a.swap_cols(x, y);
    out.right.swap_cols(x, y);
    out.right_inverse.swap_rows(x, y);
  };
  auto row_add = [&](std::size_t dst, std::size_t src, const BigInt& k) {
    a.add_row(dst, src, k);
    if (want_left) out.left.add_row(dst, src, k);
  };
  // col[dst] += k col[src]; inverse update is row[src] -= k row[dst]
  auto col_add = [&](std::size_t dst, std::size_t src, const BigInt& k) {
    a.add_col(dst, src, k);
    out.right.add_col(dst, src, k);
    out.right_inverse.add_row(src, dst, -k);
  };

  const std::size_t steps = std::min(rows, cols);
  std::size_t t = 0;
  for (; t < steps; ++t) {
    // global pivot: smallest nonzero magnitude in the trailing block
    std::size_t pr = rows, pc = cols;
    for (std::size_t i = t; i < rows; ++i)
      for (std::size_t j = t; j < cols; ++j)
        if (a(i, j) != 0 && (pr == rows || abs(a(i, j)) < abs(a(pr, pc)))) {
          pr = i;
          pc = j;
        }
    if (pr == rows) break;
    row_swap(t, pr);
    col_swap(t, pc);

    while (true) {
      bool dirty = false;
      for (std::size_t i = t + 1; i < rows; ++i) {
        if (a(i, t) == 0) continue;
        BigInt q;
        mpz_fdiv_q(q.get_mpz_t(), a(i, t).get_mpz_t(), a(t, t).get_mpz_t());
        row_add(i, t, -q);
        if (a(i, t) != 0) dirty = true;
      }
      for (std::size_t j = t + 1; j < cols; ++j) {
        if (a(t, j) == 0) continue;
        BigInt q;
        mpz_fdiv_q(q.get_mpz_t(), a(t, j).get_mpz_t(), a(t, t).get_mpz_t());
        col_add(j, t, -q);
        if (a(t, j) != 0) dirty = true;
      }
      if (dirty) {
        // move the smallest remainder in row/column t to the pivot
        std::size_t br = t, bc = t;
        for (std::size_t i = t + 1; i < rows; ++i)
          if (a(i, t) != 0 && abs(a(i, t)) < abs(a(br, bc))) {
            br = i;
            bc = t;
          }
        for (std::size_t j = t + 1; j < cols; ++j)
          if (a(t, j) != 0 && abs(a(t, j)) < abs(a(br, bc))) {
            br = t;
            bc = j;
          }
        row_swap(t, br);
        col_swap(t, bc);
        continue;
      }
      // divisibility of the trailing block
      std::size_t bad = rows;
      for (std::size_t i = t + 1; i < rows && bad == rows; ++i)
        for (std::size_t j = t + 1; j < cols; ++j)
          if (!mpz_divisible_p(a(i, j).get_mpz_t(), a(t, t).get_mpz_t())) {
            bad = i;
            break;
          }
      if (bad == rows) break;
      row_add(t, bad, 1);
    }
    if (a(t, t) < 0) {
      a.negate_row(t);
      if (want_left) out.left.negate_row(t);
    }
  }
  out.rank = t;
  out.diagonal.resize(steps);
  for (std::size_t i = 0; i < steps; ++i) out.diagonal[i] = a(i, i);
  return out;
}

/// Basis (as columns) of the integer kernel {x : m x = 0}.
inline IntMatrix integer_kernel(const IntMatrix& m) {
  IntMatrix c = row_compress(m);
  if (c.rows() == 0) return IntMatrix::identity(m.cols());
  SmithForm s = smith_normal_form(c, false);
  IntMatrix out(m.cols(), m.cols() - s.rank);
  for (std::size_t j = s.rank; j < m.cols(); ++j)
    for (std::size_t i = 0; i < m.cols(); ++i) out(i, j - s.rank) = s.right(i, j);
  return out;
}

/// Solves b * x = w over the integers when possible.
inline std::optional<std::vector<BigInt>> integer_solve(const IntMatrix& b, const std::vector<BigInt>& w) {
  SmithForm s = smith_normal_form(b, true);
  std::vector<BigInt> uw(b.rows());
  for (std::size_t i = 0; i < b.rows(); ++i)
    for (std::size_t k = 0; k < b.rows(); ++k) uw[i] += s.left(i, k) * w[k];
  std::vector<BigInt> y(b.cols());
  for (std::size_t i = 0; i < b.rows(); ++i) {
    if (i < s.rank) {
      if (!mpz_divisible_p(uw[i].get_mpz_t(), s.diagonal[i].get_mpz_t())) return std::nullopt;
      y[i] = uw[i] / s.diagonal[i];
    } else if (uw[i] != 0) {
      return std::nullopt;
    }
  }
  std::vector<BigInt> x(b.cols());
  for (std::size_t i = 0; i < b.cols(); ++i)
    for (std::size_t k = 0; k < b.cols(); ++k) x[i] += s.right(i, k) * y[k];
  return x;
}

}  // namespace klow
