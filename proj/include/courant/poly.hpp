#pragma once

// Exact multivariate polynomials over the rationals.
//
// A Polynomial stores its terms in a flat row-major exponent table plus a
// parallel coefficient array. Rows are kept sorted lexicographically and no
// zero coefficient is ever stored, so structural equality is polynomial
// equality.

#include <gmpxx.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "courant/error.hpp"

namespace courant {

using Rational = mpq_class;
using Exponent = std::uint32_t;

inline std::string to_string(const Rational& q) { return q.get_str(); }

/// Parses "a" or "a/b" with integer a and positive integer b.
inline Rational rational_from_string(const std::string& text) {
  Rational q;
  if (text.empty() || q.set_str(text, 10) != 0)
    throw InputError("invalid rational literal '" + text + "'");
  if (q.get_den() == 0) throw InputError("zero denominator in '" + text + "'");
  q.canonicalize();
  return q;
}

class Polynomial {
 public:
  explicit Polynomial(std::size_t num_vars = 0) : nvars_(num_vars) {}

  static Polynomial constant(std::size_t num_vars, const Rational& c) {
    Polynomial p(num_vars);
    if (c != 0) {
      p.exps_.assign(num_vars, 0);
      p.coeffs_.push_back(c);
    }
    return p;
  }

  static Polynomial variable(std::size_t num_vars, std::size_t index) {
    if (index >= num_vars)
      throw InputError("variable index " + std::to_string(index) + " out of range for " +
                       std::to_string(num_vars) + " variables");
    Polynomial p(num_vars);
    p.exps_.assign(num_vars, 0);
    p.exps_[index] = 1;
    p.coeffs_.emplace_back(1);
    return p;
  }

  static Polynomial monomial(std::span<const Exponent> exps, const Rational& c) {
    Polynomial p(exps.size());
    if (c != 0) {
      p.exps_.assign(exps.begin(), exps.end());
      p.coeffs_.push_back(c);
    }
    return p;
  }

  std::size_t num_vars() const noexcept { return nvars_; }
  std::size_t num_terms() const noexcept { return coeffs_.size(); }
  bool is_zero() const noexcept { return coeffs_.empty(); }

  std::span<const Exponent> exponents(std::size_t term) const {
    return {exps_.data() + term * nvars_, nvars_};
  }
  const Rational& coeff(std::size_t term) const { return coeffs_[term]; }

  bool is_constant() const {
    return is_zero() || (num_terms() == 1 && total_degree() == 0);
  }

  Rational constant_term() const {
    if (!is_zero() && degree_of(0) == 0) return coeffs_[0];
    return 0;
  }

  unsigned total_degree() const {
    unsigned d = 0;
    for (std::size_t t = 0; t < num_terms(); ++t) d = std::max(d, degree_of(t));
    return d;
  }

  Polynomial operator-() const {
    Polynomial r = *this;
    for (auto& c : r.coeffs_) c = -c;
    return r;
  }

  Polynomial& operator+=(const Polynomial& q) { return *this = merge(*this, q, false); }
  Polynomial& operator-=(const Polynomial& q) { return *this = merge(*this, q, true); }
  Polynomial& operator*=(const Polynomial& q) { return *this = multiply(*this, q); }

  Polynomial& operator*=(const Rational& s) {
    if (s == 0) {
      exps_.clear();
      coeffs_.clear();
    } else {
      for (auto& c : coeffs_) c *= s;
    }
    return *this;
  }

  friend Polynomial operator+(const Polynomial& p, const Polynomial& q) { return merge(p, q, false); }
  friend Polynomial operator-(const Polynomial& p, const Polynomial& q) { return merge(p, q, true); }
  friend Polynomial operator*(const Polynomial& p, const Polynomial& q) { return multiply(p, q); }
  friend Polynomial operator*(Polynomial p, const Rational& s) { return p *= s; }
  friend Polynomial operator*(const Rational& s, Polynomial p) { return p *= s; }

  friend bool operator==(const Polynomial& p, const Polynomial& q) {
    return p.nvars_ == q.nvars_ && p.exps_ == q.exps_ && p.coeffs_ == q.coeffs_;
  }

  /// Exact partial derivative with respect to variable `var`.
  Polynomial diff(std::size_t var) const {
    if (var >= nvars_)
      throw InputError("derivative index " + std::to_string(var) + " out of range for " +
                       std::to_string(nvars_) + " variables");
    Polynomial r(nvars_);
    for (std::size_t t = 0; t < num_terms(); ++t) {
      auto e = exponents(t);
      if (e[var] == 0) continue;
      r.exps_.insert(r.exps_.end(), e.begin(), e.end());
      r.exps_[r.exps_.size() - nvars_ + var] -= 1;
      r.coeffs_.push_back(coeffs_[t] * e[var]);
    }
    r.sort_and_combine();
    return r;
  }

  Rational eval(std::span<const Rational> point) const {
    if (point.size() != nvars_)
      throw InputError("evaluation point has " + std::to_string(point.size()) +
                       " coordinates, polynomial has " + std::to_string(nvars_) + " variables");
    Rational acc = 0;
    Rational mono;
    for (std::size_t t = 0; t < num_terms(); ++t) {
      mono = coeffs_[t];
      auto e = exponents(t);
      for (std::size_t v = 0; v < nvars_; ++v)
        for (Exponent k = 0; k < e[v]; ++k) mono *= point[v];
      acc += mono;
    }
    return acc;
  }

  /// Exact value at a floating-point point, rounded once at the end.
  double eval_exact(std::span<const double> point) const {
    for (double v : point)
      if (!std::isfinite(v)) throw InputError("cannot evaluate exactly at a non-finite point");
    std::vector<Rational> q(point.begin(), point.end());
    return eval(q).get_d();
  }

  /// Re-embeds the polynomial into `num_vars` variables, placing its own
  /// variable v at position offset + v.
  Polynomial lift(std::size_t num_vars, std::size_t offset) const {
    if (offset + nvars_ > num_vars) throw InputError("lift target too small");
    Polynomial r(num_vars);
    r.coeffs_ = coeffs_;
    r.exps_.assign(num_terms() * num_vars, 0);
    for (std::size_t t = 0; t < num_terms(); ++t) {
      auto e = exponents(t);
      std::copy(e.begin(), e.end(), r.exps_.begin() + t * num_vars + offset);
    }
    r.sort_and_combine();
    return r;
  }

  std::string to_string(std::span<const std::string> names = {}) const;

 private:
  unsigned degree_of(std::size_t t) const {
    auto e = exponents(t);
    return std::accumulate(e.begin(), e.end(), 0u);
  }

  bool row_less(const std::vector<Exponent>& ea, std::size_t a, const std::vector<Exponent>& eb,
                std::size_t b) const {
    return std::lexicographical_compare(ea.begin() + a * nvars_, ea.begin() + (a + 1) * nvars_,
                                        eb.begin() + b * nvars_, eb.begin() + (b + 1) * nvars_);
  }

  static void check_same_arity(const Polynomial& p, const Polynomial& q) {
    if (p.nvars_ != q.nvars_)
      throw InputError("variable-count mismatch: " + std::to_string(p.nvars_) + " vs " +
                       std::to_string(q.nvars_));
  }

  static Polynomial merge(const Polynomial& p, const Polynomial& q, bool subtract) {
    check_same_arity(p, q);
    const std::size_t n = p.nvars_;
    Polynomial r(n);
    r.exps_.reserve(p.exps_.size() + q.exps_.size());
    r.coeffs_.reserve(p.num_terms() + q.num_terms());
    std::size_t i = 0, j = 0;
    auto push = [&](const Polynomial& src, std::size_t t, const Rational& c) {
      r.exps_.insert(r.exps_.end(), src.exps_.begin() + t * n, src.exps_.begin() + (t + 1) * n);
      r.coeffs_.push_back(c);
    };
    while (i < p.num_terms() || j < q.num_terms()) {
      if (j == q.num_terms() || (i < p.num_terms() && p.row_less(p.exps_, i, q.exps_, j))) {
        push(p, i, p.coeffs_[i]);
        ++i;
      } else if (i == p.num_terms() || p.row_less(q.exps_, j, p.exps_, i)) {
        push(q, j, subtract ? Rational(-q.coeffs_[j]) : q.coeffs_[j]);
        ++j;
      } else {
        Rational c = subtract ? Rational(p.coeffs_[i] - q.coeffs_[j])
                              : Rational(p.coeffs_[i] + q.coeffs_[j]);
        if (c != 0) push(p, i, c);
        ++i;
        ++j;
      }
    }
    return r;
  }

  static Polynomial multiply(const Polynomial& p, const Polynomial& q) {
    check_same_arity(p, q);
    const std::size_t n = p.nvars_;
    Polynomial r(n);
    if (p.is_zero() || q.is_zero()) return r;
    r.exps_.resize(p.num_terms() * q.num_terms() * n);
    r.coeffs_.reserve(p.num_terms() * q.num_terms());
    std::size_t row = 0;
    for (std::size_t a = 0; a < p.num_terms(); ++a) {
      for (std::size_t b = 0; b < q.num_terms(); ++b, ++row) {
        for (std::size_t v = 0; v < n; ++v)
          r.exps_[row * n + v] = p.exps_[a * n + v] + q.exps_[b * n + v];
        r.coeffs_.push_back(p.coeffs_[a] * q.coeffs_[b]);
      }
    }
    r.sort_and_combine();
    return r;
  }

  void sort_and_combine() {
    const std::size_t m = coeffs_.size();
    if (m == 0) return;
    const std::size_t n = nvars_;
    std::vector<std::size_t> order(m);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return row_less(exps_, a, exps_, b); });
    std::vector<Exponent> ne;
    std::vector<Rational> nc;
    ne.reserve(exps_.size());
    nc.reserve(m);
    for (std::size_t k = 0; k < m;) {
      std::size_t t = order[k];
      Rational c = coeffs_[t];
      std::size_t l = k + 1;
      while (l < m && std::equal(exps_.begin() + order[l] * n, exps_.begin() + (order[l] + 1) * n,
                                 exps_.begin() + t * n)) {
        c += coeffs_[order[l]];
        ++l;
      }
      if (c != 0) {
        ne.insert(ne.end(), exps_.begin() + t * n, exps_.begin() + (t + 1) * n);
        nc.push_back(std::move(c));
      }
      k = l;
    }
    exps_ = std::move(ne);
    coeffs_ = std::move(nc);
  }

  std::size_t nvars_;
  std::vector<Exponent> exps_;
  std::vector<Rational> coeffs_;
};

enum class ArithOp { add, sub, mul };

inline Polynomial arith(const Polynomial& p, const Polynomial& q, ArithOp op) {
  switch (op) {
    case ArithOp::add: return p + q;
    case ArithOp::sub: return p - q;
    case ArithOp::mul: return p * q;
  }
  return Polynomial(p.num_vars());
}

/// x1, x2, ... used whenever no explicit variable names are supplied.
inline std::vector<std::string> default_variable_names(std::size_t n, const std::string& stem = "x") {
  std::vector<std::string> names;
  names.reserve(n);
  for (std::size_t i = 0; i < n; ++i) names.push_back(stem + std::to_string(i + 1));
  return names;
}

inline std::string Polynomial::to_string(std::span<const std::string> names) const {
  if (is_zero()) return "0";
  std::vector<std::string> fallback;
  if (names.size() < nvars_) {
    fallback = default_variable_names(nvars_);
    names = fallback;
  }
  std::string out;
  // Highest row first reads naturally ("x1^2 + x1 + 1").
  for (std::size_t k = num_terms(); k-- > 0;) {
    Rational c = coeffs_[k];
    const bool negative = c < 0;
    if (negative) c = -c;
    if (out.empty()) {
      if (negative) out += "-";
    } else {
      out += negative ? " - " : " + ";
    }
    std::string mono;
    auto e = exponents(k);
    for (std::size_t v = 0; v < nvars_; ++v) {
      if (e[v] == 0) continue;
      if (!mono.empty()) mono += "*";
      mono += names[v];
      if (e[v] > 1) mono += "^" + std::to_string(e[v]);
    }
    if (mono.empty()) {
      out += c.get_str();
    } else if (c == 1) {
      out += mono;
    } else {
      out += c.get_str() + "*" + mono;
    }
  }
  return out;
}

/// An ordered list of polynomials sharing one set of input variables:
/// sections of trivial bundles and polynomial maps between coordinate spaces.
class PolyMap {
 public:
  PolyMap() = default;
  explicit PolyMap(std::size_t num_inputs, std::size_t num_outputs = 0)
      : num_inputs_(num_inputs), outputs_(num_outputs, Polynomial(num_inputs)) {}

  PolyMap(std::size_t num_inputs, std::vector<Polynomial> outputs)
      : num_inputs_(num_inputs), outputs_(std::move(outputs)) {
    for (const auto& p : outputs_)
      if (p.num_vars() != num_inputs_)
        throw InputError("PolyMap component has " + std::to_string(p.num_vars()) +
                         " variables, expected " + std::to_string(num_inputs_));
  }

  static PolyMap identity(std::size_t n) {
    PolyMap m(n);
    for (std::size_t i = 0; i < n; ++i) m.outputs_.push_back(Polynomial::variable(n, i));
    return m;
  }

  std::size_t num_inputs() const noexcept { return num_inputs_; }
  std::size_t size() const noexcept { return outputs_.size(); }
  const Polynomial& operator[](std::size_t i) const { return outputs_[i]; }
  Polynomial& operator[](std::size_t i) { return outputs_[i]; }
  const std::vector<Polynomial>& outputs() const noexcept { return outputs_; }

  bool is_zero() const {
    return std::all_of(outputs_.begin(), outputs_.end(), [](const auto& p) { return p.is_zero(); });
  }

  bool is_identity() const { return num_inputs_ == size() && *this == identity(num_inputs_); }

  std::vector<Rational> eval(std::span<const Rational> point) const {
    std::vector<Rational> out;
    out.reserve(size());
    for (const auto& p : outputs_) out.push_back(p.eval(point));
    return out;
  }

  PolyMap& operator+=(const PolyMap& o) {
    check_shape(o);
    for (std::size_t i = 0; i < size(); ++i) outputs_[i] += o.outputs_[i];
    return *this;
  }
  PolyMap& operator-=(const PolyMap& o) {
    check_shape(o);
    for (std::size_t i = 0; i < size(); ++i) outputs_[i] -= o.outputs_[i];
    return *this;
  }
  friend PolyMap operator+(PolyMap a, const PolyMap& b) { return a += b; }
  friend PolyMap operator-(PolyMap a, const PolyMap& b) { return a -= b; }

  /// Pointwise scaling by a polynomial function.
  friend PolyMap operator*(const Polynomial& s, const PolyMap& m) {
    PolyMap r(m.num_inputs_);
    for (const auto& p : m.outputs_) r.outputs_.push_back(s * p);
    return r;
  }
  friend PolyMap operator*(const Rational& s, PolyMap m) {
    for (auto& p : m.outputs_) p *= s;
    return m;
  }

  friend bool operator==(const PolyMap& a, const PolyMap& b) {
    return a.num_inputs_ == b.num_inputs_ && a.outputs_ == b.outputs_;
  }

  std::vector<std::string> to_strings(std::span<const std::string> names = {}) const {
    std::vector<std::string> out;
    for (const auto& p : outputs_) out.push_back(p.to_string(names));
    return out;
  }

 private:
  void check_shape(const PolyMap& o) const {
    if (o.num_inputs_ != num_inputs_ || o.size() != size())
      throw InputError("PolyMap shape mismatch");
  }

  std::size_t num_inputs_ = 0;
  std::vector<Polynomial> outputs_;
};

/// Substitutes maps[i] for variable i of p.
inline Polynomial compose(const Polynomial& p, const PolyMap& maps) {
  if (maps.size() != p.num_vars())
    throw InputError("compose: polynomial has " + std::to_string(p.num_vars()) +
                     " variables but the map has " + std::to_string(maps.size()) + " outputs");
  const std::size_t n = maps.num_inputs();
  Polynomial result(n);
  if (p.is_zero()) return result;
  // powers[v][k] = maps[v]^k, grown on demand
  std::vector<std::vector<Polynomial>> powers(p.num_vars());
  for (std::size_t t = 0; t < p.num_terms(); ++t) {
    Polynomial term = Polynomial::constant(n, p.coeff(t));
    auto e = p.exponents(t);
    for (std::size_t v = 0; v < e.size(); ++v) {
      if (e[v] == 0) continue;
      auto& pw = powers[v];
      if (pw.empty()) pw.push_back(Polynomial::constant(n, 1));
      while (pw.size() <= e[v]) pw.push_back(pw.back() * maps[v]);
      term *= pw[e[v]];
    }
    result += term;
  }
  return result;
}

inline PolyMap compose(const PolyMap& outer, const PolyMap& inner) {
  PolyMap r(inner.num_inputs());
  std::vector<Polynomial> outs;
  outs.reserve(outer.size());
  for (const auto& p : outer.outputs()) outs.push_back(compose(p, inner));
  return PolyMap(inner.num_inputs(), std::move(outs));
}

}  // namespace courant
