#pragma once

// Classical Courant algebroid morphisms: vector bundle maps whose graph is an
// isotropic, involutive, anchor-compatible subbundle of E1 × Ē2. Checked over
// an identity base by bracket, metric and anchor conditions on P, and over a
// general base by the same three conditions on φ-related sections.

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "courant/axioms.hpp"

namespace courant {

enum class Condition { bracket, metric, anchor };

inline const char* to_string(Condition c) {
  switch (c) {
    case Condition::bracket: return "bracket";
    case Condition::metric: return "metric";
    case Condition::anchor: return "anchor";
  }
  return "?";
}

struct MorphismFailure {
  Condition condition;
  int equation;                  // 3, 4, 5 over an identity base; 6, 7, 8 otherwise
  std::vector<PolyMap> witness;  // offending sections (source first, then target); empty for matrix identities
  PolyMatrix defect;
};

struct MorphismVerdict {
  bool is_morphism = true;
  std::vector<MorphismFailure> failures;

  bool failed(int equation) const { return find(equation) != nullptr; }
  const MorphismFailure* find(int equation) const {
    for (const auto& f : failures)
      if (f.equation == equation) return &f;
    return nullptr;
  }
  void add(MorphismFailure f) {
    is_morphism = false;
    failures.push_back(std::move(f));
  }
};

struct MorphismOptions {
  unsigned degree_cap = 3;
  std::size_t random_sections = 20;
  unsigned random_degree = 2;
  std::uint64_t seed = 0;
};

namespace detail {

inline std::vector<PolyMap> section_family(const TrivialBundle& b, const MorphismOptions& opt) {
  auto family = monomial_frame_sections(b, opt.degree_cap);
  SectionSampler sampler(opt.seed);
  for (std::size_t r = 0; r < opt.random_sections; ++r)
    family.push_back(sampler.section(b, opt.random_degree).coeffs());
  return family;
}

inline PolyMatrix column_defect(const PolyMap& v) { return PolyMatrix::column(v); }

/// Anchor identity A₂(φ₀(x)) P(x) − dφ₀(x) A₁(x).
inline PolyMatrix anchor_defect(const CourantStructure& s1, const CourantStructure& s2, const BundleMorphism& phi) {
  PolyMatrix lhs = s2.anchor().compose(phi.base_map()) * phi.fiber_matrix();
  PolyMatrix rhs = jacobian(phi.base_map()) * s1.anchor();
  return lhs - rhs;
}

/// Pᵀ(x) G₂ P(x) − G₁.
inline PolyMatrix metric_defect(const CourantStructure& s1, const CourantStructure& s2, const BundleMorphism& phi) {
  const std::size_t n = s1.base_dim();
  const PolyMatrix& p = phi.fiber_matrix();
  return p.transpose() * PolyMatrix::from_constant(s2.metric(), n) * p -
         PolyMatrix::from_constant(s1.metric(), n);
}

inline void check_endpoints(const CourantStructure& s1, const CourantStructure& s2, const BundleMorphism& phi) {
  require_same_bundle(s1.bundle(), phi.source(), "morphism source");
  require_same_bundle(s2.bundle(), phi.target(), "morphism target");
}

}  // namespace detail

/// Criterion for a bundle map over the identity. Failures carry equation ids
/// 3 (bracket) φ∘⟦f,g⟧₁ = ⟦φ∘f, φ∘g⟧₂, 4 (metric) PᵀG₂P = G₁, 5 (anchor) A₂P = A₁.
inline MorphismVerdict check_identity_base(const CourantStructure& s1, const CourantStructure& s2,
                                           const BundleMorphism& phi, const MorphismOptions& opt = {}) {
  detail::check_endpoints(s1, s2, phi);
  if (s1.base_dim() != s2.base_dim()) throw InputError("identity-base check needs equal base dimensions");
  if (!phi.base_is_identity()) throw InputError("identity-base check needs the identity base map");

  MorphismVerdict v;
  if (s1.rank() == 0) return v;
  const PolyMatrix& p = phi.fiber_matrix();

  auto family = detail::section_family(s1.bundle(), opt);
  std::vector<PolyMap> images;
  images.reserve(family.size());
  for (const auto& f : family) images.push_back(p * f);
  for (std::size_t a = 0; a < family.size(); ++a) {
    for (std::size_t b = 0; b < family.size(); ++b) {
      PolyMap defect = p * detail::bracket_raw(s1, family[a], family[b]);
      defect -= detail::bracket_raw(s2, images[a], images[b]);
      if (!defect.is_zero()) {
        v.add({Condition::bracket, 3, {family[a], family[b]}, detail::column_defect(defect)});
        goto bracket_done;
      }
    }
  }
bracket_done:
  if (auto d = detail::metric_defect(s1, s2, phi); !d.is_zero()) v.add({Condition::metric, 4, {}, d});
  if (auto d = detail::anchor_defect(s1, s2, phi); !d.is_zero()) v.add({Condition::anchor, 5, {}, d});
  return v;
}

/// A source section together with a φ-related target section.
struct RelatedPair {
  Section source;
  Section target;
};

/// Related pairs generated from the retraction: for each family member f the
/// extension g = P(r(y)) f(r(y)), plus a second representative perturbed by a
/// term vanishing on the image of the base map.
inline std::vector<RelatedPair> auto_related_pairs(const BundleMorphism& phi, const MorphismOptions& opt) {
  if (!phi.retraction()) throw InputError("automatic related sections need a retraction");
  auto vanishing = phi.vanishing_generators();
  std::vector<RelatedPair> pairs;
  std::size_t t = 0;
  for (auto& f : detail::section_family(phi.source(), opt)) {
    Section fs(phi.source(), std::move(f));
    Section g = std::get<Section>(related_section(phi, fs));
    pairs.push_back({fs, g});
    if (!vanishing.empty() && phi.target().rank > 0) {
      PolyMap bump(phi.target().base_dim, phi.target().rank);
      bump[t % phi.target().rank] = vanishing[t % vanishing.size()];
      ++t;
      pairs.push_back({fs, Section(phi.target(), g.coeffs() + bump)});
    }
  }
  return pairs;
}

/// Characterisation through φ-related sections, with equation ids
/// 6 (bracket) φ∘⟦f₁,f₂⟧₁ = ⟦g₁,g₂⟧₂∘φ₀, 7 (metric) ⟨f₁,f₂⟩₁ = ⟨g₁,g₂⟩₂∘φ₀,
/// 8 (anchor) A₂(φ₀(x)) P(x) = dφ₀(x) A₁(x).
/// Without explicit pairs, they are generated from the retraction.
inline MorphismVerdict check_general_base(const CourantStructure& s1, const CourantStructure& s2,
                                          const BundleMorphism& phi,
                                          const std::optional<std::vector<RelatedPair>>& explicit_pairs = std::nullopt,
                                          const MorphismOptions& opt = {}) {
  detail::check_endpoints(s1, s2, phi);
  std::vector<RelatedPair> pairs;
  if (explicit_pairs) {
    pairs = *explicit_pairs;
    for (std::size_t k = 0; k < pairs.size(); ++k)
      if (!check_related(phi, pairs[k].source, pairs[k].target))
        throw InputError("pair " + std::to_string(k) + " is not phi-related");
  } else {
    pairs = auto_related_pairs(phi, opt);
  }

  MorphismVerdict v;
  if (s1.rank() > 0) {
    const PolyMap& base = phi.base_map();
    const PolyMatrix& p = phi.fiber_matrix();
    bool bracket_ok = true, metric_ok = true;
    for (std::size_t a = 0; a < pairs.size() && (bracket_ok || metric_ok); ++a) {
      for (std::size_t b = 0; b < pairs.size() && (bracket_ok || metric_ok); ++b) {
        const PolyMap& f1 = pairs[a].source.coeffs();
        const PolyMap& f2 = pairs[b].source.coeffs();
        const PolyMap& g1 = pairs[a].target.coeffs();
        const PolyMap& g2 = pairs[b].target.coeffs();
        if (bracket_ok) {
          PolyMap defect = p * detail::bracket_raw(s1, f1, f2);
          defect -= compose(detail::bracket_raw(s2, g1, g2), base);
          if (!defect.is_zero()) {
            v.add({Condition::bracket, 6, {f1, f2, g1, g2}, detail::column_defect(defect)});
            bracket_ok = false;
          }
        }
        if (metric_ok) {
          Polynomial defect = detail::pairing_raw(s1, f1, f2) - compose(detail::pairing_raw(s2, g1, g2), base);
          if (!defect.is_zero()) {
            v.add({Condition::metric, 7, {f1, f2, g1, g2}, detail::column_defect(detail::scalar_map(defect))});
            metric_ok = false;
          }
        }
      }
    }
  }
  if (auto d = detail::anchor_defect(s1, s2, phi); !d.is_zero()) v.add({Condition::anchor, 8, {}, d});
  return v;
}

/// graph φ ⊆ E₁ × E₂ over graph φ₀: base embedding x ↦ (x, φ₀(x)) and fiber
/// spanned by the columns of [I; P(x)].
struct GraphSubbundle {
  PolyMap base_embedding;
  PolyMatrix fiber_basis;
};

inline GraphSubbundle graph_subbundle(const BundleMorphism& phi) {
  const std::size_t n1 = phi.source().base_dim, k1 = phi.source().rank, k2 = phi.target().rank;
  std::vector<Polynomial> emb = PolyMap::identity(n1).outputs();
  for (const auto& p : phi.base_map().outputs()) emb.push_back(p);
  PolyMatrix basis(k1 + k2, k1, n1);
  for (std::size_t i = 0; i < k1; ++i) basis(i, i) = Polynomial::constant(n1, 1);
  for (std::size_t r = 0; r < k2; ++r)
    for (std::size_t c = 0; c < k1; ++c) basis(k1 + r, c) = phi.fiber_matrix()(r, c);
  return {PolyMap(n1, std::move(emb)), std::move(basis)};
}

/// Pairings of the graph frame (e_i, P e_i) in E₁ × Ē₂; zero iff the graph is
/// isotropic.
inline PolyMatrix graph_pairings(const CourantStructure& s1, const CourantStructure& s2, const BundleMorphism& phi) {
  detail::check_endpoints(s1, s2, phi);
  CourantStructure prod = product_structure(s1, s2, /*flip=*/true);
  auto graph = graph_subbundle(phi);
  const std::size_t n1 = s1.base_dim();
  return graph.fiber_basis.transpose() * PolyMatrix::from_constant(prod.metric(), n1) * graph.fiber_basis;
}

}  // namespace courant
