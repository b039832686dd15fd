#pragma once

// Trivial vector bundles ℝⁿ × ℝᵏ → ℝⁿ, their polynomial sections, and vector
// bundle morphisms given by a base map and a fiber matrix.

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "courant/matrix.hpp"

namespace courant {

struct TrivialBundle {
  std::size_t base_dim = 0;
  std::size_t rank = 0;
  std::string label;

  // Labels are display names only.
  friend bool operator==(const TrivialBundle& a, const TrivialBundle& b) {
    return a.base_dim == b.base_dim && a.rank == b.rank;
  }
};

inline TrivialBundle whitney_sum(const TrivialBundle& a, const TrivialBundle& b) {
  if (a.base_dim != b.base_dim)
    throw InputError("Whitney sum over different bases (" + std::to_string(a.base_dim) + " vs " +
                     std::to_string(b.base_dim) + ")");
  return {a.base_dim, a.rank + b.rank, a.label + "+" + b.label};
}

inline void require_same_bundle(const TrivialBundle& expected, const TrivialBundle& got,
                                const char* what) {
  if (!(expected == got))
    throw InputError(std::string(what) + ": bundle mismatch (expected rank " +
                     std::to_string(expected.rank) + " over R^" + std::to_string(expected.base_dim) +
                     ", got rank " + std::to_string(got.rank) + " over R^" +
                     std::to_string(got.base_dim) + ")");
}

/// A global section, stored by its coordinates in the constant frame.
class Section {
 public:
  Section(TrivialBundle bundle, PolyMap coeffs) : bundle_(std::move(bundle)), coeffs_(std::move(coeffs)) {
    if (coeffs_.num_inputs() != bundle_.base_dim || coeffs_.size() != bundle_.rank)
      throw InputError("section shape does not match bundle '" + bundle_.label + "'");
  }

  static Section zero(const TrivialBundle& b) { return Section(b, PolyMap(b.base_dim, b.rank)); }

  /// The constant frame section e_i.
  static Section frame(const TrivialBundle& b, std::size_t i) {
    PolyMap m(b.base_dim, b.rank);
    m[i] = Polynomial::constant(b.base_dim, 1);
    return Section(b, std::move(m));
  }

  const TrivialBundle& bundle() const noexcept { return bundle_; }
  const PolyMap& coeffs() const noexcept { return coeffs_; }

  friend bool operator==(const Section& a, const Section& b) {
    return a.bundle_ == b.bundle_ && a.coeffs_ == b.coeffs_;
  }

 private:
  TrivialBundle bundle_;
  PolyMap coeffs_;
};

class BundleMorphism {
 public:
  /// Throws InputError on shape mismatches or when the retraction is not a
  /// left inverse of the base map.
  BundleMorphism(TrivialBundle source, TrivialBundle target, PolyMap base_map, PolyMatrix fiber_matrix,
                 std::optional<PolyMap> retraction = std::nullopt)
      : source_(std::move(source)),
        target_(std::move(target)),
        base_map_(std::move(base_map)),
        fiber_(std::move(fiber_matrix)),
        retraction_(std::move(retraction)) {
    if (base_map_.num_inputs() != source_.base_dim || base_map_.size() != target_.base_dim)
      throw InputError("base map must send R^" + std::to_string(source_.base_dim) + " to R^" +
                       std::to_string(target_.base_dim));
    if (fiber_.rows() != target_.rank || fiber_.cols() != source_.rank ||
        fiber_.num_vars() != source_.base_dim)
      throw InputError("fiber matrix must be " + std::to_string(target_.rank) + "x" +
                       std::to_string(source_.rank) + " in the source base variables");
    if (retraction_) {
      if (retraction_->num_inputs() != target_.base_dim || retraction_->size() != source_.base_dim)
        throw InputError("retraction must send R^" + std::to_string(target_.base_dim) + " to R^" +
                         std::to_string(source_.base_dim));
      if (!compose(*retraction_, base_map_).is_identity())
        throw InputError("retraction is not a left inverse of the base map");
    }
  }

  static BundleMorphism identity(const TrivialBundle& b) {
    return BundleMorphism(b, b, PolyMap::identity(b.base_dim), PolyMatrix::identity(b.rank, b.base_dim),
                          PolyMap::identity(b.base_dim));
  }

  const TrivialBundle& source() const noexcept { return source_; }
  const TrivialBundle& target() const noexcept { return target_; }
  const PolyMap& base_map() const noexcept { return base_map_; }
  const PolyMatrix& fiber_matrix() const noexcept { return fiber_; }
  const std::optional<PolyMap>& retraction() const noexcept { return retraction_; }

  BundleMorphism with_retraction(std::optional<PolyMap> r) const {
    return BundleMorphism(source_, target_, base_map_, fiber_, std::move(r));
  }

  bool base_is_identity() const { return base_map_.is_identity(); }

  /// Functions y_k - φ₀(r(y))_k; they generate the functions vanishing on
  /// the image of the base map (needs a retraction).
  std::vector<Polynomial> vanishing_generators() const {
    if (!retraction_) throw InputError("vanishing generators need a retraction");
    PolyMap back = compose(base_map_, *retraction_);
    std::vector<Polynomial> gens;
    for (std::size_t k = 0; k < target_.base_dim; ++k) {
      Polynomial v = Polynomial::variable(target_.base_dim, k) - back[k];
      if (!v.is_zero()) gens.push_back(std::move(v));
    }
    return gens;
  }

 private:
  TrivialBundle source_;
  TrivialBundle target_;
  PolyMap base_map_;
  PolyMatrix fiber_;
  std::optional<PolyMap> retraction_;
};

/// second ∘ first.
inline BundleMorphism compose(const BundleMorphism& second, const BundleMorphism& first) {
  require_same_bundle(second.source(), first.target(), "morphism composition");
  PolyMap base = compose(second.base_map(), first.base_map());
  PolyMatrix fiber = second.fiber_matrix().compose(first.base_map()) * first.fiber_matrix();
  std::optional<PolyMap> retraction;
  if (first.retraction() && second.retraction())
    retraction = compose(*first.retraction(), *second.retraction());
  return BundleMorphism(first.source(), second.target(), std::move(base), std::move(fiber),
                        std::move(retraction));
}

/// x ↦ P(x)·f(x): the image of a section, indexed by source base points.
inline PolyMap apply_morphism(const BundleMorphism& phi, const Section& f) {
  require_same_bundle(phi.source(), f.bundle(), "apply_morphism");
  return phi.fiber_matrix() * f.coeffs();
}

inline bool check_related(const BundleMorphism& phi, const Section& f, const Section& g) {
  require_same_bundle(phi.source(), f.bundle(), "check_related (source)");
  require_same_bundle(phi.target(), g.bundle(), "check_related (target)");
  return apply_morphism(phi, f) == compose(g.coeffs(), phi.base_map());
}

/// Monomials in `num_vars` variables of total degree ≤ max_degree, ordered by
/// degree and then lexicographically.
inline std::vector<std::vector<Exponent>> monomials_up_to(std::size_t num_vars, unsigned max_degree) {
  std::vector<std::vector<Exponent>> out;
  std::vector<Exponent> e(num_vars, 0);
  for (unsigned d = 0; d <= max_degree; ++d) {
    // enumerate compositions of d into num_vars parts
    auto rec = [&](auto&& self, std::size_t v, unsigned left) -> void {
      if (v + 1 >= num_vars) {
        if (num_vars == 0) {
          if (left == 0) out.push_back(e);
          return;
        }
        e[v] = left;
        out.push_back(e);
        e[v] = 0;
        return;
      }
      for (unsigned k = left + 1; k-- > 0;) {
        e[v] = k;
        self(self, v + 1, left - k);
      }
      e[v] = 0;
    };
    rec(rec, 0, d);
  }
  return out;
}

/// Bounded-degree attempt to find g with g∘φ₀ = φ∘f when no retraction is
/// available. Holds the per-component coefficient system that failed.
struct NonExistenceCertificate {
  unsigned degree_cap = 0;
  std::size_t component = 0;  // target fiber coordinate whose system is infeasible
  std::vector<std::vector<Exponent>> unknown_monomials;  // target-base monomials
  std::vector<std::vector<Exponent>> equation_monomials;  // source-base monomials
  RationalMatrix system;
  std::vector<Rational> rhs;
  InfeasibilityCertificate proof;

  bool verify() const { return proof.verify(system, rhs); }
};

namespace detail {

inline void collect_rows(const Polynomial& p, std::vector<std::vector<Exponent>>& rows) {
  for (std::size_t t = 0; t < p.num_terms(); ++t) {
    std::vector<Exponent> e(p.exponents(t).begin(), p.exponents(t).end());
    if (std::find(rows.begin(), rows.end(), e) == rows.end()) rows.push_back(std::move(e));
  }
}

inline Rational coefficient_of(const Polynomial& p, const std::vector<Exponent>& e) {
  for (std::size_t t = 0; t < p.num_terms(); ++t)
    if (std::equal(e.begin(), e.end(), p.exponents(t).begin())) return p.coeff(t);
  return 0;
}

}  // namespace detail

/// Solves Σ_β c_β φ₀(x)^β = value(x) for one target component, by matching
/// coefficients of every source monomial.
inline std::variant<Polynomial, NonExistenceCertificate> solve_component(const PolyMap& base_map,
                                                                         const Polynomial& value,
                                                                         unsigned degree_cap,
                                                                         std::size_t component) {
  const std::size_t target_dim = base_map.size();
  auto unknowns = monomials_up_to(target_dim, degree_cap);
  std::vector<Polynomial> columns;
  columns.reserve(unknowns.size());
  std::vector<std::vector<Exponent>> rows;
  for (const auto& u : unknowns) {
    columns.push_back(compose(Polynomial::monomial(u, 1), base_map));
    detail::collect_rows(columns.back(), rows);
  }
  detail::collect_rows(value, rows);
  std::sort(rows.begin(), rows.end());
  RationalMatrix a(rows.size(), unknowns.size());
  std::vector<Rational> b(rows.size());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (std::size_t c = 0; c < unknowns.size(); ++c) a(r, c) = detail::coefficient_of(columns[c], rows[r]);
    b[r] = detail::coefficient_of(value, rows[r]);
  }
  auto sol = solve_linear(a, b);
  if (auto* cert = std::get_if<InfeasibilityCertificate>(&sol)) {
    return NonExistenceCertificate{degree_cap, component, std::move(unknowns), std::move(rows),
                                   std::move(a), std::move(b), std::move(*cert)};
  }
  const auto& x = std::get<std::vector<Rational>>(sol);
  Polynomial g(target_dim);
  for (std::size_t c = 0; c < unknowns.size(); ++c)
    if (x[c] != 0) g += Polynomial::monomial(unknowns[c], x[c]);
  return g;
}

/// A section g of the target with g∘φ₀ = φ∘f. With a retraction r the
/// answer is g = P(r(y))·f(r(y)); otherwise a polynomial g of degree ≤
/// degree_cap is searched for, and its absence is certified.
inline std::variant<Section, NonExistenceCertificate> related_section(const BundleMorphism& phi,
                                                                      const Section& f,
                                                                      unsigned degree_cap = 3) {
  PolyMap image = apply_morphism(phi, f);
  if (phi.retraction()) return Section(phi.target(), compose(image, *phi.retraction()));
  PolyMap g(phi.target().base_dim, phi.target().rank);
  for (std::size_t k = 0; k < phi.target().rank; ++k) {
    auto comp = solve_component(phi.base_map(), image[k], degree_cap, k);
    if (auto* cert = std::get_if<NonExistenceCertificate>(&comp)) return std::move(*cert);
    g[k] = std::get<Polynomial>(comp);
  }
  return Section(phi.target(), std::move(g));
}

/// A finite-dimensional subspace of ℚ^ambient_dim given by a basis.
class LinearSubspace {
 public:
  LinearSubspace(std::size_t ambient_dim, std::vector<std::vector<Rational>> basis)
      : ambient_dim_(ambient_dim), basis_(std::move(basis)) {
    RationalMatrix m(basis_.size(), ambient_dim_);
    for (std::size_t r = 0; r < basis_.size(); ++r) {
      if (basis_[r].size() != ambient_dim_) throw InputError("basis vector has wrong length");
      for (std::size_t c = 0; c < ambient_dim_; ++c) m(r, c) = basis_[r][c];
    }
    if (rank(m) != basis_.size()) throw InputError("basis vectors are linearly dependent");
  }

  std::size_t ambient_dim() const noexcept { return ambient_dim_; }
  std::size_t dim() const noexcept { return basis_.size(); }
  const std::vector<std::vector<Rational>>& basis() const noexcept { return basis_; }

 private:
  std::size_t ambient_dim_;
  std::vector<std::vector<Rational>> basis_;
};

}  // namespace courant
