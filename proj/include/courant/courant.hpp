#pragma once

// Courant algebroid structures on trivial bundles, stored by frame data:
// anchor matrix A(x), constant metric G and structure functions c_ij^h(x)
// with ⟦e_i, e_j⟧ = Σ_h c_ij^h e_h.

#include <string>
#include <tuple>
#include <vector>

#include "courant/bundles.hpp"

namespace courant {

class CourantStructure {
 public:
  /// `structure` is indexed (i * k + j) * k + h and may be empty for c ≡ 0.
  CourantStructure(TrivialBundle bundle, PolyMatrix anchor, RationalMatrix metric,
                   std::vector<Polynomial> structure = {})
      : bundle_(std::move(bundle)),
        anchor_(std::move(anchor)),
        metric_(std::move(metric)),
        structure_(std::move(structure)) {
    const std::size_t n = bundle_.base_dim, k = bundle_.rank;
    if (anchor_.rows() != n || anchor_.cols() != k || anchor_.num_vars() != n)
      throw InputError("anchor must be a " + std::to_string(n) + "x" + std::to_string(k) +
                       " matrix in " + std::to_string(n) + " variables");
    if (metric_.rows() != k || metric_.cols() != k) throw InputError("metric must be square of the bundle rank");
    if (!metric_.is_symmetric()) throw InputError("metric is not symmetric");
    if (determinant(metric_) == 0) throw InputError("degenerate metric (zero determinant)");
    if (structure_.empty()) structure_.assign(k * k * k, Polynomial(n));
    if (structure_.size() != k * k * k) throw InputError("structure function table has the wrong size");
    for (std::size_t idx = 0; idx < structure_.size(); ++idx) {
      if (structure_[idx].num_vars() != n) throw InputError("structure function in the wrong variables");
      if (!structure_[idx].is_zero())
        nonzero_.emplace_back(idx / (k * k), (idx / k) % k, idx % k);
    }
    metric_inv_ = inverse(metric_);
  }

  const TrivialBundle& bundle() const noexcept { return bundle_; }
  std::size_t base_dim() const noexcept { return bundle_.base_dim; }
  std::size_t rank() const noexcept { return bundle_.rank; }
  const PolyMatrix& anchor() const noexcept { return anchor_; }
  const RationalMatrix& metric() const noexcept { return metric_; }
  const RationalMatrix& metric_inverse() const noexcept { return metric_inv_; }
  const std::vector<Polynomial>& structure_functions() const noexcept { return structure_; }
  const Polynomial& c(std::size_t i, std::size_t j, std::size_t h) const {
    return structure_[(i * rank() + j) * rank() + h];
  }
  const std::vector<std::tuple<std::size_t, std::size_t, std::size_t>>& nonzero_structure() const noexcept {
    return nonzero_;
  }

  friend bool operator==(const CourantStructure& a, const CourantStructure& b) {
    return a.bundle_ == b.bundle_ && a.anchor_ == b.anchor_ && a.metric_ == b.metric_ &&
           a.structure_ == b.structure_;
  }

 private:
  TrivialBundle bundle_;
  PolyMatrix anchor_;
  RationalMatrix metric_;
  std::vector<Polynomial> structure_;
  RationalMatrix metric_inv_;
  std::vector<std::tuple<std::size_t, std::size_t, std::size_t>> nonzero_;
};

/// The hyperbolic pairing [[0, I],[I, 0]] of size 2n.
inline RationalMatrix hyperbolic_metric(std::size_t n) {
  RationalMatrix g(2 * n, 2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    g(i, n + i) = 1;
    g(n + i, i) = 1;
  }
  return g;
}

/// Pontryagin bundle TM ⊕ T*M over ℝⁿ: frame (∂_1..∂_n, dx_1..dx_n),
/// anchor (v, p) ↦ v, pairing p(v') + p'(v), all frame brackets zero.
inline CourantStructure standard_structure(std::size_t n) {
  TrivialBundle b{n, 2 * n, "TM+T*M(" + std::to_string(n) + ")"};
  PolyMatrix anchor(n, 2 * n, n);
  for (std::size_t i = 0; i < n; ++i) anchor(i, i) = Polynomial::constant(n, 1);
  return CourantStructure(b, anchor, hyperbolic_metric(n));
}

inline CourantStructure scaled_structure(const CourantStructure& s, const Rational& lambda) {
  if (lambda == 0) throw InputError("metric scale factor must be nonzero");
  return CourantStructure(s.bundle(), s.anchor(), lambda * s.metric(), s.structure_functions());
}

// ---------------------------------------------------------------------------
// Raw operations on coefficient vectors; callers have checked shapes.

namespace detail {

/// ρ(f) as a vector field: Σ_i A_{a,i} f_i.
inline std::vector<Polynomial> anchor_field(const CourantStructure& s, const PolyMap& f) {
  std::vector<Polynomial> x(s.base_dim(), Polynomial(s.base_dim()));
  for (std::size_t a = 0; a < s.base_dim(); ++a)
    for (std::size_t i = 0; i < s.rank(); ++i)
      if (!s.anchor()(a, i).is_zero() && !f[i].is_zero()) x[a] += s.anchor()(a, i) * f[i];
  return x;
}

/// X(λ) = Σ_a X_a ∂_a λ.
inline Polynomial derivation(const std::vector<Polynomial>& field, const Polynomial& lambda) {
  Polynomial out(lambda.num_vars());
  if (lambda.is_zero()) return out;
  for (std::size_t a = 0; a < field.size(); ++a)
    if (!field[a].is_zero()) {
      Polynomial d = lambda.diff(a);
      if (!d.is_zero()) out += field[a] * d;
    }
  return out;
}

/// G⁻¹ Aᵀ w for a covector field w.
inline PolyMap raise_covector(const CourantStructure& s, const std::vector<Polynomial>& w) {
  const std::size_t n = s.base_dim(), k = s.rank();
  std::vector<Polynomial> atw(k, Polynomial(n));
  for (std::size_t l = 0; l < k; ++l)
    for (std::size_t a = 0; a < n; ++a)
      if (!s.anchor()(a, l).is_zero() && !w[a].is_zero()) atw[l] += s.anchor()(a, l) * w[a];
  PolyMap out(n, k);
  const auto& ginv = s.metric_inverse();
  for (std::size_t h = 0; h < k; ++h)
    for (std::size_t l = 0; l < k; ++l)
      if (ginv(h, l) != 0 && !atw[l].is_zero()) out[h] += ginv(h, l) * atw[l];
  return out;
}

inline PolyMap d_rho_raw(const CourantStructure& s, const Polynomial& lambda) {
  std::vector<Polynomial> grad;
  for (std::size_t a = 0; a < s.base_dim(); ++a) grad.push_back(lambda.diff(a));
  return raise_covector(s, grad);
}

inline Polynomial pairing_raw(const CourantStructure& s, const PolyMap& f, const PolyMap& g) {
  Polynomial out(s.base_dim());
  for (std::size_t i = 0; i < s.rank(); ++i) {
    if (f[i].is_zero()) continue;
    for (std::size_t j = 0; j < s.rank(); ++j)
      if (s.metric()(i, j) != 0 && !g[j].is_zero()) out += s.metric()(i, j) * (f[i] * g[j]);
  }
  return out;
}

/// ⟦Σ f_i e_i, Σ g_j e_j⟧ = Σ_ij f_i g_j ⟦e_i,e_j⟧ + f_i ρ(e_i)(g_j) e_j
///                          − g_j ρ(e_j)(f_i) e_i + G_ij g_j D_ρ(f_i).
inline PolyMap bracket_raw(const CourantStructure& s, const PolyMap& f, const PolyMap& g) {
  const std::size_t n = s.base_dim(), k = s.rank();
  PolyMap out(n, k);
  if (f.is_zero() || g.is_zero()) return out;

  for (const auto& [i, j, h] : s.nonzero_structure())
    if (!f[i].is_zero() && !g[j].is_zero()) out[h] += (f[i] * g[j]) * s.c(i, j, h);

  auto xf = anchor_field(s, f);
  auto xg = anchor_field(s, g);
  for (std::size_t j = 0; j < k; ++j) {
    out[j] += derivation(xf, g[j]);
    out[j] -= derivation(xg, f[j]);
  }

  // Σ_i (G g)_i ∇f_i, raised through D_ρ.
  std::vector<Polynomial> w(n, Polynomial(n));
  for (std::size_t i = 0; i < k; ++i) {
    Polynomial gi(n);
    for (std::size_t j = 0; j < k; ++j)
      if (s.metric()(i, j) != 0 && !g[j].is_zero()) gi += s.metric()(i, j) * g[j];
    if (gi.is_zero() || f[i].is_zero()) continue;
    for (std::size_t a = 0; a < n; ++a) {
      Polynomial d = f[i].diff(a);
      if (!d.is_zero()) w[a] += gi * d;
    }
  }
  out += raise_covector(s, w);
  return out;
}

}  // namespace detail

/// fᵀ G g.
inline Polynomial pairing(const CourantStructure& s, const Section& f, const Section& g) {
  require_same_bundle(s.bundle(), f.bundle(), "pairing");
  require_same_bundle(s.bundle(), g.bundle(), "pairing");
  return detail::pairing_raw(s, f.coeffs(), g.coeffs());
}

/// ρ(f)(λ), the anchor vector field of f acting on a function.
inline Polynomial anchor_action(const CourantStructure& s, const Section& f, const Polynomial& lambda) {
  require_same_bundle(s.bundle(), f.bundle(), "anchor_action");
  return detail::derivation(detail::anchor_field(s, f.coeffs()), lambda);
}

/// The section with ⟨D_ρ(λ), s⟩ = ρ(s)(λ): frame coefficients G⁻¹Aᵀ∇λ.
inline Section d_rho(const CourantStructure& s, const Polynomial& lambda) {
  if (lambda.num_vars() != s.base_dim()) throw InputError("d_rho: function in the wrong variables");
  return Section(s.bundle(), detail::d_rho_raw(s, lambda));
}

inline Section bracket(const CourantStructure& s, const Section& f, const Section& g) {
  require_same_bundle(s.bundle(), f.bundle(), "bracket");
  require_same_bundle(s.bundle(), g.bundle(), "bracket");
  return Section(s.bundle(), detail::bracket_raw(s, f.coeffs(), g.coeffs()));
}

/// Product over ℝ^{n1+n2}; with `flip` the second metric enters with a minus
/// sign (the pairing used for graphs of morphisms).
inline CourantStructure product_structure(const CourantStructure& s1, const CourantStructure& s2, bool flip) {
  const std::size_t n1 = s1.base_dim(), n2 = s2.base_dim(), n = n1 + n2;
  const std::size_t k1 = s1.rank(), k2 = s2.rank(), k = k1 + k2;
  TrivialBundle b{n, k, s1.bundle().label + "x" + (flip ? "-" : "") + s2.bundle().label};
  PolyMatrix anchor(n, k, n);
  for (std::size_t a = 0; a < n1; ++a)
    for (std::size_t i = 0; i < k1; ++i) anchor(a, i) = s1.anchor()(a, i).lift(n, 0);
  for (std::size_t a = 0; a < n2; ++a)
    for (std::size_t i = 0; i < k2; ++i) anchor(n1 + a, k1 + i) = s2.anchor()(a, i).lift(n, n1);
  RationalMatrix g(k, k);
  for (std::size_t i = 0; i < k1; ++i)
    for (std::size_t j = 0; j < k1; ++j) g(i, j) = s1.metric()(i, j);
  for (std::size_t i = 0; i < k2; ++i)
    for (std::size_t j = 0; j < k2; ++j) g(k1 + i, k1 + j) = flip ? Rational(-s2.metric()(i, j)) : s2.metric()(i, j);
  std::vector<Polynomial> c(k * k * k, Polynomial(n));
  for (const auto& [i, j, h] : s1.nonzero_structure()) c[(i * k + j) * k + h] = s1.c(i, j, h).lift(n, 0);
  for (const auto& [i, j, h] : s2.nonzero_structure())
    c[((k1 + i) * k + (k1 + j)) * k + (k1 + h)] = s2.c(i, j, h).lift(n, n1);
  return CourantStructure(b, anchor, g, std::move(c));
}

/// True iff `d` is a maximal isotropic subspace of the fiber metric: all
/// pairings of basis vectors vanish and dim d = rank / 2. The metric is
/// constant, so `point` only fixes where the fiber is taken.
inline bool dirac_check(const CourantStructure& s, std::span<const Rational> point, const LinearSubspace& d) {
  if (point.size() != s.base_dim()) throw InputError("dirac_check: point has the wrong dimension");
  if (d.ambient_dim() != s.rank()) throw InputError("dirac_check: subspace lives in the wrong fiber");
  if (s.rank() % 2 != 0) throw InputError("dirac_check: maximal isotropy needs an even rank");
  if (d.dim() != s.rank() / 2) return false;
  for (const auto& u : d.basis())
    for (const auto& v : d.basis()) {
      Rational acc = 0;
      for (std::size_t i = 0; i < s.rank(); ++i)
        for (std::size_t j = 0; j < s.rank(); ++j) acc += u[i] * s.metric()(i, j) * v[j];
      if (acc != 0) return false;
    }
  return true;
}

}  // namespace courant
