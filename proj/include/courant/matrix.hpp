#pragma once

// Dense matrices of rationals and of polynomials, plus the exact linear
// algebra the checkers need (rank, determinant, inverse, solving with an
// infeasibility certificate).

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "courant/poly.hpp"

namespace courant {

class RationalMatrix {
 public:
  RationalMatrix() = default;
  RationalMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

  static RationalMatrix identity(std::size_t n) {
    RationalMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
    return m;
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  Rational& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const Rational& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  RationalMatrix transpose() const {
    RationalMatrix t(cols_, rows_);
    for (std::size_t r = 0; r < rows_; ++r)
      for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
    return t;
  }

  bool is_symmetric() const { return rows_ == cols_ && *this == transpose(); }

  bool is_zero() const {
    for (const auto& v : data_)
      if (v != 0) return false;
    return true;
  }

  friend RationalMatrix operator*(const RationalMatrix& a, const RationalMatrix& b) {
    if (a.cols_ != b.rows_) throw InputError("matrix product shape mismatch");
    RationalMatrix m(a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t k = 0; k < a.cols_; ++k) {
        if (a(i, k) == 0) continue;
        for (std::size_t j = 0; j < b.cols_; ++j) m(i, j) += a(i, k) * b(k, j);
      }
    return m;
  }

  friend RationalMatrix operator*(const Rational& s, RationalMatrix m) {
    for (auto& v : m.data_) v *= s;
    return m;
  }

  friend RationalMatrix operator+(RationalMatrix a, const RationalMatrix& b) {
    if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw InputError("matrix shape mismatch");
    for (std::size_t i = 0; i < a.data_.size(); ++i) a.data_[i] += b.data_[i];
    return a;
  }

  friend RationalMatrix operator-(RationalMatrix a, const RationalMatrix& b) {
    if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw InputError("matrix shape mismatch");
    for (std::size_t i = 0; i < a.data_.size(); ++i) a.data_[i] -= b.data_[i];
    return a;
  }

  friend bool operator==(const RationalMatrix& a, const RationalMatrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Rational> data_;
};

/// Reduced row echelon form in place; returns the pivot columns.
inline std::vector<std::size_t> row_reduce(RationalMatrix& m, std::size_t col_limit) {
  std::vector<std::size_t> pivots;
  std::size_t row = 0;
  for (std::size_t col = 0; col < col_limit && row < m.rows(); ++col) {
    std::size_t sel = row;
    while (sel < m.rows() && m(sel, col) == 0) ++sel;
    if (sel == m.rows()) continue;
    if (sel != row)
      for (std::size_t c = 0; c < m.cols(); ++c) std::swap(m(sel, c), m(row, c));
    Rational inv = 1 / m(row, col);
    for (std::size_t c = 0; c < m.cols(); ++c) m(row, c) *= inv;
    for (std::size_t r = 0; r < m.rows(); ++r) {
      if (r == row || m(r, col) == 0) continue;
      Rational f = m(r, col);
      for (std::size_t c = 0; c < m.cols(); ++c) m(r, c) -= f * m(row, c);
    }
    pivots.push_back(col);
    ++row;
  }
  return pivots;
}

inline std::size_t rank(RationalMatrix m) { return row_reduce(m, m.cols()).size(); }

inline Rational determinant(RationalMatrix m) {
  if (m.rows() != m.cols()) throw InputError("determinant of a non-square matrix");
  const std::size_t n = m.rows();
  Rational det = 1;
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t sel = col;
    while (sel < n && m(sel, col) == 0) ++sel;
    if (sel == n) return 0;
    if (sel != col) {
      for (std::size_t c = 0; c < n; ++c) std::swap(m(sel, c), m(col, c));
      det = -det;
    }
    det *= m(col, col);
    for (std::size_t r = col + 1; r < n; ++r) {
      if (m(r, col) == 0) continue;
      Rational f = m(r, col) / m(col, col);
      for (std::size_t c = col; c < n; ++c) m(r, c) -= f * m(col, c);
    }
  }
  return det;
}

inline RationalMatrix inverse(const RationalMatrix& m) {
  const std::size_t n = m.rows();
  if (n != m.cols()) throw InputError("inverse of a non-square matrix");
  RationalMatrix aug(n, 2 * n);
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < n; ++c) aug(r, c) = m(r, c);
    aug(r, n + r) = 1;
  }
  if (row_reduce(aug, n).size() != n) throw InputError("matrix is singular");
  RationalMatrix inv(n, n);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c) inv(r, c) = aug(r, n + c);
  return inv;
}

/// Proof that A x = b has no solution: a vector y with yᵀA = 0 and yᵀb ≠ 0.
struct InfeasibilityCertificate {
  std::vector<Rational> multipliers;

  bool verify(const RationalMatrix& a, const std::vector<Rational>& b) const {
    if (multipliers.size() != a.rows() || b.size() != a.rows()) return false;
    for (std::size_t c = 0; c < a.cols(); ++c) {
      Rational s = 0;
      for (std::size_t r = 0; r < a.rows(); ++r) s += multipliers[r] * a(r, c);
      if (s != 0) return false;
    }
    Rational rhs = 0;
    for (std::size_t r = 0; r < a.rows(); ++r) rhs += multipliers[r] * b[r];
    return rhs != 0;
  }
};

/// Solves A x = b exactly. Free variables are set to zero.
inline std::variant<std::vector<Rational>, InfeasibilityCertificate> solve_linear(
    const RationalMatrix& a, const std::vector<Rational>& b) {
  const std::size_t m = a.rows(), n = a.cols();
  if (b.size() != m) throw InputError("right-hand side length mismatch");
  // [A | b | I] tracks which row combination produced each reduced row.
  RationalMatrix aug(m, n + 1 + m);
  for (std::size_t r = 0; r < m; ++r) {
    for (std::size_t c = 0; c < n; ++c) aug(r, c) = a(r, c);
    aug(r, n) = b[r];
    aug(r, n + 1 + r) = 1;
  }
  auto pivots = row_reduce(aug, n);
  for (std::size_t r = pivots.size(); r < m; ++r) {
    if (aug(r, n) != 0) {
      InfeasibilityCertificate cert;
      for (std::size_t c = 0; c < m; ++c) cert.multipliers.push_back(aug(r, n + 1 + c));
      return cert;
    }
  }
  std::vector<Rational> x(n);
  for (std::size_t r = 0; r < pivots.size(); ++r) x[pivots[r]] = aug(r, n);
  return x;
}

class PolyMatrix {
 public:
  PolyMatrix() = default;
  PolyMatrix(std::size_t rows, std::size_t cols, std::size_t num_vars)
      : rows_(rows), cols_(cols), nvars_(num_vars), data_(rows * cols, Polynomial(num_vars)) {}

  static PolyMatrix identity(std::size_t n, std::size_t num_vars) {
    PolyMatrix m(n, n, num_vars);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = Polynomial::constant(num_vars, 1);
    return m;
  }

  static PolyMatrix from_constant(const RationalMatrix& c, std::size_t num_vars) {
    PolyMatrix m(c.rows(), c.cols(), num_vars);
    for (std::size_t r = 0; r < c.rows(); ++r)
      for (std::size_t k = 0; k < c.cols(); ++k) m(r, k) = Polynomial::constant(num_vars, c(r, k));
    return m;
  }

  static PolyMatrix column(const PolyMap& v) {
    PolyMatrix m(v.size(), 1, v.num_inputs());
    for (std::size_t r = 0; r < v.size(); ++r) m(r, 0) = v[r];
    return m;
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t num_vars() const noexcept { return nvars_; }
  Polynomial& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const Polynomial& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  PolyMap column_map(std::size_t c) const {
    std::vector<Polynomial> out;
    for (std::size_t r = 0; r < rows_; ++r) out.push_back((*this)(r, c));
    return PolyMap(nvars_, std::move(out));
  }

  PolyMatrix transpose() const {
    PolyMatrix t(cols_, rows_, nvars_);
    for (std::size_t r = 0; r < rows_; ++r)
      for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
    return t;
  }

  bool is_zero() const {
    for (const auto& p : data_)
      if (!p.is_zero()) return false;
    return true;
  }

  bool is_constant() const {
    for (const auto& p : data_)
      if (!p.is_constant()) return false;
    return true;
  }

  RationalMatrix constant_part() const {
    RationalMatrix m(rows_, cols_);
    for (std::size_t r = 0; r < rows_; ++r)
      for (std::size_t c = 0; c < cols_; ++c) m(r, c) = (*this)(r, c).constant_term();
    return m;
  }

  RationalMatrix eval(std::span<const Rational> point) const {
    RationalMatrix m(rows_, cols_);
    for (std::size_t r = 0; r < rows_; ++r)
      for (std::size_t c = 0; c < cols_; ++c) m(r, c) = (*this)(r, c).eval(point);
    return m;
  }

  /// Entry-wise substitution of the variables by `maps`.
  PolyMatrix compose(const PolyMap& maps) const {
    PolyMatrix m(rows_, cols_, maps.num_inputs());
    for (std::size_t i = 0; i < data_.size(); ++i) m.data_[i] = courant::compose(data_[i], maps);
    return m;
  }

  /// Lifts every entry into a larger variable set (see Polynomial::lift).
  PolyMatrix lift(std::size_t num_vars, std::size_t offset) const {
    PolyMatrix m(rows_, cols_, num_vars);
    for (std::size_t i = 0; i < data_.size(); ++i) m.data_[i] = data_[i].lift(num_vars, offset);
    return m;
  }

  friend PolyMatrix operator*(const PolyMatrix& a, const PolyMatrix& b) {
    if (a.cols_ != b.rows_ || a.nvars_ != b.nvars_) throw InputError("matrix product shape mismatch");
    PolyMatrix m(a.rows_, b.cols_, a.nvars_);
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t k = 0; k < a.cols_; ++k) {
        const Polynomial& aik = a(i, k);
        if (aik.is_zero()) continue;
        for (std::size_t j = 0; j < b.cols_; ++j)
          if (!b(k, j).is_zero()) m(i, j) += aik * b(k, j);
      }
    return m;
  }

  friend PolyMap operator*(const PolyMatrix& a, const PolyMap& v) {
    if (a.cols_ != v.size() || a.nvars_ != v.num_inputs()) throw InputError("matrix-vector shape mismatch");
    PolyMap out(a.nvars_, a.rows_);
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t k = 0; k < a.cols_; ++k)
        if (!a(i, k).is_zero() && !v[k].is_zero()) out[i] += a(i, k) * v[k];
    return out;
  }

  friend PolyMatrix operator+(PolyMatrix a, const PolyMatrix& b) {
    if (a.rows_ != b.rows_ || a.cols_ != b.cols_ || a.nvars_ != b.nvars_)
      throw InputError("matrix shape mismatch");
    for (std::size_t i = 0; i < a.data_.size(); ++i) a.data_[i] += b.data_[i];
    return a;
  }

  friend PolyMatrix operator-(PolyMatrix a, const PolyMatrix& b) {
    if (a.rows_ != b.rows_ || a.cols_ != b.cols_ || a.nvars_ != b.nvars_)
      throw InputError("matrix shape mismatch");
    for (std::size_t i = 0; i < a.data_.size(); ++i) a.data_[i] -= b.data_[i];
    return a;
  }

  friend PolyMatrix operator*(const Rational& s, PolyMatrix m) {
    for (auto& p : m.data_) p *= s;
    return m;
  }

  friend bool operator==(const PolyMatrix& a, const PolyMatrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.nvars_ == b.nvars_ && a.data_ == b.data_;
  }

  std::vector<std::vector<std::string>> to_strings(std::span<const std::string> names = {}) const {
    std::vector<std::vector<std::string>> out(rows_);
    for (std::size_t r = 0; r < rows_; ++r)
      for (std::size_t c = 0; c < cols_; ++c) out[r].push_back((*this)(r, c).to_string(names));
    return out;
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::size_t nvars_ = 0;
  std::vector<Polynomial> data_;
};

/// Entry (i, j) is the derivative of output i with respect to input j.
inline PolyMatrix jacobian(const PolyMap& f) {
  PolyMatrix jac(f.size(), f.num_inputs(), f.num_inputs());
  for (std::size_t i = 0; i < f.size(); ++i)
    for (std::size_t j = 0; j < f.num_inputs(); ++j) jac(i, j) = f[i].diff(j);
  return jac;
}

/// Exact determinant of a square polynomial matrix by cofactor expansion
/// (ranks here stay small).
inline Polynomial determinant(const PolyMatrix& m) {
  const std::size_t n = m.rows();
  if (n != m.cols()) throw InputError("determinant of a non-square matrix");
  if (n == 0) return Polynomial::constant(m.num_vars(), 1);
  if (n == 1) return m(0, 0);
  Polynomial det(m.num_vars());
  for (std::size_t c = 0; c < n; ++c) {
    if (m(0, c).is_zero()) continue;
    PolyMatrix minor(n - 1, n - 1, m.num_vars());
    for (std::size_t r = 1; r < n; ++r)
      for (std::size_t k = 0, kk = 0; k < n; ++k)
        if (k != c) minor(r - 1, kk++) = m(r, k);
    Polynomial term = m(0, c) * determinant(minor);
    if (c % 2 == 0) {
      det += term;
    } else {
      det -= term;
    }
  }
  return det;
}

}  // namespace courant
