#pragma once

// Coordinate Cartan calculus on ℝⁿ for vector fields, one-forms and
// two-forms, and the Courant–Dorfman bracket on TM ⊕ T*M built from it.
// This path shares nothing with the frame-data bracket in courant.hpp and
// serves as its oracle.

#include <vector>

#include "courant/bundles.hpp"

namespace courant::cartan {

using VectorField = std::vector<Polynomial>;
using OneForm = std::vector<Polynomial>;

/// Antisymmetric coefficient matrix ω_{jk} of a two-form.
struct TwoForm {
  std::size_t n = 0;
  std::vector<Polynomial> coeff;  // n*n, row-major
  const Polynomial& operator()(std::size_t j, std::size_t k) const { return coeff[j * n + k]; }
};

inline VectorField lie_bracket(const VectorField& x, const VectorField& y) {
  const std::size_t n = x.size();
  VectorField out(n, Polynomial(n));
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t i = 0; i < n; ++i) out[j] += x[i] * y[j].diff(i) - y[i] * x[j].diff(i);
  return out;
}

inline OneForm exterior_d(const Polynomial& f) {
  OneForm out;
  for (std::size_t k = 0; k < f.num_vars(); ++k) out.push_back(f.diff(k));
  return out;
}

/// (dα)_{jk} = ∂_j α_k − ∂_k α_j.
inline TwoForm exterior_d(const OneForm& alpha) {
  const std::size_t n = alpha.size();
  TwoForm w{n, std::vector<Polynomial>(n * n, Polynomial(n))};
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t k = 0; k < n; ++k) w.coeff[j * n + k] = alpha[k].diff(j) - alpha[j].diff(k);
  return w;
}

inline Polynomial interior(const VectorField& x, const OneForm& alpha) {
  Polynomial out(alpha.empty() ? x.size() : alpha[0].num_vars());
  for (std::size_t i = 0; i < x.size(); ++i) out += x[i] * alpha[i];
  return out;
}

/// (ι_X ω)_k = Σ_j X_j ω_{jk}.
inline OneForm interior(const VectorField& x, const TwoForm& w) {
  OneForm out(w.n, Polynomial(w.n));
  for (std::size_t k = 0; k < w.n; ++k)
    for (std::size_t j = 0; j < w.n; ++j) out[k] += x[j] * w(j, k);
  return out;
}

inline OneForm add(OneForm a, const OneForm& b) {
  for (std::size_t i = 0; i < a.size(); ++i) a[i] += b[i];
  return a;
}

inline OneForm sub(OneForm a, const OneForm& b) {
  for (std::size_t i = 0; i < a.size(); ++i) a[i] -= b[i];
  return a;
}

/// 𝔏_X α = ι_X dα + d(ι_X α).
inline OneForm lie_derivative(const VectorField& x, const OneForm& alpha) {
  return add(interior(x, exterior_d(alpha)), exterior_d(interior(x, alpha)));
}

}  // namespace courant::cartan

namespace courant {

/// ⟦(X,α),(X',α')⟧ = ([X,X'], 𝔏_X α' − ι_{X'} dα) on the rank-2n bundle with
/// the first n coordinates tangent and the last n cotangent.
inline Section dorfman_standard(std::size_t n, const Section& f, const Section& g) {
  TrivialBundle b{n, 2 * n, "TM+T*M(" + std::to_string(n) + ")"};
  require_same_bundle(b, f.bundle(), "dorfman_standard");
  require_same_bundle(b, g.bundle(), "dorfman_standard");
  auto split = [n](const PolyMap& s) {
    cartan::VectorField x(s.outputs().begin(), s.outputs().begin() + n);
    cartan::OneForm a(s.outputs().begin() + n, s.outputs().end());
    return std::pair{x, a};
  };
  auto [x, alpha] = split(f.coeffs());
  auto [y, beta] = split(g.coeffs());
  auto v = cartan::lie_bracket(x, y);
  auto form = cartan::sub(cartan::lie_derivative(x, beta), cartan::interior(y, cartan::exterior_d(alpha)));
  std::vector<Polynomial> out = v;
  out.insert(out.end(), form.begin(), form.end());
  return Section(f.bundle(), PolyMap(n, std::move(out)));
}

}  // namespace courant
