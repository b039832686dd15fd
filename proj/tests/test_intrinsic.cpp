#include <gtest/gtest.h>

#include "courant/intrinsic.hpp"

using namespace courant;

namespace {

const MorphismOptions kFast{.degree_cap = 2, .random_sections = 4, .random_degree = 2, .seed = 0};

}  // namespace

TEST(Splitting, CanonicalExamples) {
  EXPECT_EQ(canonical_splitting(1, 0).matrix, RationalMatrix::identity(2));
  EXPECT_EQ(canonical_splitting(0, 1).matrix, RationalMatrix::identity(2));
  // Slots (v, p, e, ε) go to (v, e, p, ε): source 1,2,3,4 → target 1,3,2,4.
  RationalMatrix perm = canonical_splitting(1, 1).matrix;
  RationalMatrix expected(4, 4);
  expected(0, 0) = expected(2, 1) = expected(1, 2) = expected(3, 3) = 1;
  EXPECT_EQ(perm, expected);
}

TEST(Splitting, ValidateRejectsBadMatrices) {
  SplittingIso wrong_size{1, 1, RationalMatrix::identity(3)};
  EXPECT_THROW(wrong_size.validate(), InputError);
  SplittingIso singular{1, 0, RationalMatrix(2, 2)};
  EXPECT_THROW(singular.validate(), InputError);
}

TEST(Intrinsic, CollapsesToStandardWithoutPorts) {
  for (std::size_t n = 1; n <= 3; ++n) {
    IntrinsicResult r = build_intrinsic(n, 0, kFast);
    EXPECT_EQ(r.structure, standard_structure(n)) << "n=" << n;
    EXPECT_TRUE(r.all_arrows_pass()) << "n=" << n;
    ASSERT_EQ(r.chain.size(), 2u);
    EXPECT_EQ(r.chain[0].arrow, "inclusion");
    EXPECT_EQ(r.chain[1].arrow, "splitting");
  }
}

TEST(Intrinsic, UniqueWithoutPorts) {
  for (std::size_t n = 1; n <= 2; ++n) {
    UniquenessReport rep = uniqueness_check(canonical_splitting(n, 0), 5, 0, kFast);
    EXPECT_TRUE(rep.unique) << "n=" << n;
    EXPECT_TRUE(rep.constructed_accepted);
    EXPECT_TRUE(rep.well_definedness.passed);
    ASSERT_EQ(rep.candidates.size(), 5u);
    for (const auto& c : rep.candidates) {
      EXPECT_TRUE(c.rejected) << c.perturbation;
      EXPECT_FALSE(c.failing_equations.empty()) << c.perturbation;
    }
  }
}

TEST(Intrinsic, IsometricSplittingGivesSameStructure) {
  // A constant B-transform of TE ⊕ T*E preserves anchor, pairing and
  // brackets of constant sections.
  SplittingIso phi = canonical_splitting(2, 0);
  RationalMatrix b = RationalMatrix::identity(4);
  b(2, 1) = 3;
  b(3, 0) = -3;
  SplittingIso twisted{2, 0, b * phi.matrix};
  EXPECT_EQ(build_intrinsic(twisted, kFast).structure, build_intrinsic(phi, kFast).structure);
}

TEST(Intrinsic, PortDirectionsLeaveZeroSection) {
  // With m ≥ 1 the splitting sends e to the vertical vector ∂_z, which the
  // anchor of TE ⊕ T*E maps off the zero section. Tangency fails for every
  // fiberwise isomorphism, so no structure can make the composite a morphism.
  for (auto [n, m] : {std::pair<std::size_t, std::size_t>{1, 1}, {2, 1}, {0, 1}}) {
    PullbackProblem p = intrinsic_problem(canonical_splitting(n, m));
    HypothesisReport rep = check_hypotheses(p);
    EXPECT_FALSE(rep.anchor_tangent.passed) << n << "," << m;
    EXPECT_FALSE(rep.anchor_tangent.defect.is_zero());
    EXPECT_TRUE(rep.pairing_nondegenerate.passed);
    EXPECT_THROW(build_intrinsic(n, m, kFast), PullbackError);
  }
}

TEST(Intrinsic, FormulaDataForOnePortDirection) {
  // The pullback formulas alone give A′ = [1 0 0 0], the block-hyperbolic
  // pairing and c′ = 0; only the tangency hypothesis is violated.
  PullbackProblem p = intrinsic_problem(canonical_splitting(1, 1));
  PolyMatrix anchor = detail::pulled_anchor(p);
  PolyMatrix expected_anchor(1, 4, 1);
  expected_anchor(0, 0) = Polynomial::constant(1, 1);
  EXPECT_EQ(anchor, expected_anchor);

  PolyMatrix g = detail::pulled_metric(p);
  RationalMatrix expected_g(4, 4);
  expected_g(0, 1) = expected_g(1, 0) = expected_g(2, 3) = expected_g(3, 2) = 1;
  EXPECT_EQ(g, PolyMatrix::from_constant(expected_g, 1));

  PolyMatrix g_inv = PolyMatrix::from_constant(inverse(expected_g), 1);
  for (const auto& c : detail::pulled_structure(p, g_inv, detail::frame_extensions(p))) EXPECT_TRUE(c.is_zero());

  // Direct evidence: ρ(χ(e)) = ∂_z is normal to the zero section.
  PolyMatrix image = p.ambient().anchor().compose(p.morphism().base_map()) * p.morphism().fiber_matrix();
  EXPECT_EQ(image(1, 2), Polynomial::constant(1, 1));
}

TEST(Intrinsic, InclusionArrowCarriesStandardBracket) {
  IntrinsicResult r = build_intrinsic(2, 0, kFast);
  BundleMorphism inc = pontryagin_inclusion(2, 0);
  auto v = check_identity_base(standard_structure(2), r.structure, inc, kFast);
  EXPECT_TRUE(v.is_morphism);
}
