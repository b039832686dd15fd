#pragma once

// Intrinsic structure on TM ⊕ T*M ⊕ E ⊕ E* for a trivial E = ℝⁿ × ℝᵐ: the
// composite χ = Φ ∘ (0_E ⊕ id) into TE ⊕ T*E over the zero section is pulled
// back once, then each arrow of the chain is verified.

#include <random>
#include <string>
#include <utility>
#include <vector>

#include "courant/pullback.hpp"

namespace courant {

/// Constant fiber isomorphism from the slots (v, p, e, ε) of
/// TM ⊕ T*M ⊕ E ⊕ E* to the slots (v, e, p, ε) of TE ⊕ T*E.
struct SplittingIso {
  std::size_t n = 0;
  std::size_t m = 0;
  RationalMatrix matrix;  // (2n+2m) × (2n+2m)

  void validate() const {
    const std::size_t k = 2 * (n + m);
    if (matrix.rows() != k || matrix.cols() != k)
      throw InputError("splitting must be a " + std::to_string(k) + "x" + std::to_string(k) + " matrix");
    if (determinant(matrix) == 0) throw InputError("splitting is not invertible");
  }
};

inline SplittingIso canonical_splitting(std::size_t n, std::size_t m) {
  const std::size_t k = 2 * (n + m);
  RationalMatrix perm(k, k);
  for (std::size_t i = 0; i < n; ++i) {
    perm(i, i) = 1;                  // v  → tangent, base directions
    perm(n + m + i, n + i) = 1;      // p  → cotangent, base directions
  }
  for (std::size_t a = 0; a < m; ++a) {
    perm(n + a, 2 * n + a) = 1;          // e → tangent, fiber directions
    perm(2 * n + m + a, 2 * n + m + a) = 1;  // ε → cotangent, fiber directions
  }
  return {n, m, std::move(perm)};
}

inline TrivialBundle intrinsic_bundle(std::size_t n, std::size_t m) {
  return {n, 2 * (n + m), "TM+T*M+E+E*(" + std::to_string(n) + "," + std::to_string(m) + ")"};
}

/// χ over the zero section x ↦ (x, 0) with retraction (x, z) ↦ x, against the
/// standard structure on TE ⊕ T*E.
inline PullbackProblem intrinsic_problem(const SplittingIso& phi) {
  phi.validate();
  const std::size_t n = phi.n, m = phi.m, total = n + m;
  std::vector<Polynomial> zero_section;
  for (std::size_t i = 0; i < total; ++i)
    zero_section.push_back(i < n ? Polynomial::variable(n, i) : Polynomial(n));
  std::vector<Polynomial> retraction;
  for (std::size_t i = 0; i < n; ++i) retraction.push_back(Polynomial::variable(total, i));
  CourantStructure ambient = standard_structure(total);
  BundleMorphism chi(intrinsic_bundle(n, m), ambient.bundle(), PolyMap(n, std::move(zero_section)),
                     PolyMatrix::from_constant(phi.matrix, n), PolyMap(total, std::move(retraction)));
  return PullbackProblem(std::move(ambient), std::move(chi));
}

/// The inclusion id ⊕ 0 : TM ⊕ T*M → TM ⊕ T*M ⊕ E ⊕ E* over id_M.
inline BundleMorphism pontryagin_inclusion(std::size_t n, std::size_t m) {
  PolyMatrix p(2 * (n + m), 2 * n, n);
  for (std::size_t i = 0; i < n; ++i) {
    p(i, i) = Polynomial::constant(n, 1);
    p(n + i, n + i) = Polynomial::constant(n, 1);
  }
  return BundleMorphism(standard_structure(n).bundle(), intrinsic_bundle(n, m), PolyMap::identity(n), std::move(p),
                        PolyMap::identity(n));
}

struct ChainVerdict {
  std::string arrow;
  MorphismVerdict verdict;
};

struct IntrinsicResult {
  CourantStructure structure;
  std::vector<ChainVerdict> chain;
  bool all_arrows_pass() const {
    for (const auto& c : chain)
      if (!c.verdict.is_morphism) return false;
    return true;
  }
};

/// Throws PullbackError (carrying the hypothesis report) when the composite
/// does not satisfy the pullback hypotheses.
inline IntrinsicResult build_intrinsic(const SplittingIso& phi, const MorphismOptions& opt = {}) {
  PullbackProblem problem = intrinsic_problem(phi);
  CourantStructure structure = construct(problem);
  IntrinsicResult out{structure, {}};
  out.chain.push_back({"inclusion", check_general_base(standard_structure(phi.n), structure,
                                                        pontryagin_inclusion(phi.n, phi.m), std::nullopt, opt)});
  out.chain.push_back({"splitting", check_general_base(structure, problem.ambient(), problem.morphism(),
                                                        std::nullopt, opt)});
  return out;
}

inline IntrinsicResult build_intrinsic(std::size_t n, std::size_t m, const MorphismOptions& opt = {}) {
  return build_intrinsic(canonical_splitting(n, m), opt);
}

struct RejectedCandidate {
  std::string perturbation;
  bool rejected = false;
  std::vector<int> failing_equations;
};

struct UniquenessReport {
  bool unique = true;
  WellDefinedness well_definedness;
  bool constructed_accepted = false;
  std::vector<RejectedCandidate> candidates;
};

namespace detail {

/// Alters one structure function or one symmetric pair of metric entries.
inline std::pair<CourantStructure, std::string> perturb_candidate(const CourantStructure& s, std::mt19937_64& rng) {
  const std::size_t k = s.rank(), n = s.base_dim();
  for (;;) {
    if (rng() % 2 == 0 && k > 0) {
      std::size_t idx = rng() % (k * k * k);
      auto c = s.structure_functions();
      Polynomial bump = Polynomial::constant(n, Rational(static_cast<long>(rng() % 3) + 1));
      if (n > 0 && rng() % 2 == 0) bump *= Polynomial::variable(n, rng() % n);
      c[idx] += bump;
      std::string what = "c[" + std::to_string(idx / (k * k) + 1) + "," + std::to_string((idx / k) % k + 1) + "," +
                         std::to_string(idx % k + 1) + "] += " + bump.to_string(default_variable_names(n));
      return {CourantStructure(s.bundle(), s.anchor(), s.metric(), std::move(c)), what};
    }
    if (k == 0) continue;
    std::size_t a = rng() % k, b = rng() % k;
    RationalMatrix g = s.metric();
    Rational delta(static_cast<long>(rng() % 3) + 1);
    g(a, b) += delta;
    if (a != b) g(b, a) += delta;
    if (determinant(g) == 0) continue;
    std::string what = "G[" + std::to_string(a + 1) + "," + std::to_string(b + 1) + "] += " + to_string(delta);
    return {CourantStructure(s.bundle(), s.anchor(), std::move(g), s.structure_functions()), what};
  }
}

}  // namespace detail

/// Well-definedness under an alternative retraction and perturbed extensions,
/// acceptance of the constructed structure, and rejection of seeded
/// perturbations of c′ and G′.
inline UniquenessReport uniqueness_check(const SplittingIso& phi, std::size_t perturbations = 5,
                                         std::uint64_t seed = 0, const MorphismOptions& opt = {}) {
  PullbackProblem problem = intrinsic_problem(phi);
  CourantStructure structure = construct(problem);
  const std::size_t n = phi.n, total = phi.n + phi.m;

  // r′(x, z) = x + z₁·x, another left inverse of the zero section.
  std::vector<Polynomial> alt;
  for (std::size_t i = 0; i < n; ++i) {
    Polynomial xi = Polynomial::variable(total, i);
    alt.push_back(phi.m > 0 ? xi + Polynomial::variable(total, n) * xi : xi);
  }
  UniquenessReport rep;
  rep.well_definedness = well_definedness_test(problem, PolyMap(total, std::move(alt)), 3, seed);
  rep.constructed_accepted = uniqueness_test(problem, structure, opt).accepted();
  rep.unique = rep.well_definedness.passed && rep.constructed_accepted;

  std::mt19937_64 rng(seed);
  for (std::size_t t = 0; t < perturbations && structure.rank() > 0; ++t) {
    auto [candidate, what] = detail::perturb_candidate(structure, rng);
    auto verdict = uniqueness_test(problem, candidate, opt);
    RejectedCandidate rc{what, !verdict.accepted(), {}};
    for (const auto& f : verdict.morphism.failures) rc.failing_equations.push_back(f.equation);
    if (!rc.rejected || rc.failing_equations.empty()) rep.unique = false;
    rep.candidates.push_back(std::move(rc));
  }
  return rep;
}

inline UniquenessReport uniqueness_check(std::size_t n, std::size_t m, std::size_t perturbations = 5,
                                         std::uint64_t seed = 0) {
  return uniqueness_check(canonical_splitting(n, m), perturbations, seed);
}

}  // namespace courant
