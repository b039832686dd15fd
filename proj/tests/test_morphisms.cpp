#include <gtest/gtest.h>

#include "courant/morphisms.hpp"
#include "courant/parse.hpp"

using namespace courant;

namespace {

PolyMatrix matrix_of(const std::vector<std::vector<std::string>>& rows, const std::vector<std::string>& vars) {
  PolyMatrix m(rows.size(), rows.empty() ? 0 : rows[0].size(), vars.size());
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (std::size_t c = 0; c < rows[r].size(); ++c) m(r, c) = parse(rows[r][c], vars);
  return m;
}

BundleMorphism over_identity(const CourantStructure& s1, const CourantStructure& s2, PolyMatrix p) {
  return BundleMorphism(s1.bundle(), s2.bundle(), PolyMap::identity(s1.base_dim()), std::move(p),
                        PolyMap::identity(s1.base_dim()));
}

/// e ↦ e + B(x)·v on TM ⊕ T*M over ℝ²; every skew B is closed in dimension 2.
BundleMorphism b_transform(const std::string& b12) {
  CourantStructure s = standard_structure(2);
  std::vector<std::string> x = {"x1", "x2"};
  std::string minus = "-(" + b12 + ")";
  // (v, p) ↦ (v, p + B v) with B = [[0, b12], [-b12, 0]], so p1 += b12·v2.
  return over_identity(s, s,
                       matrix_of({{"1", "0", "0", "0"},
                                  {"0", "1", "0", "0"},
                                  {"0", b12, "1", "0"},
                                  {minus, "0", "0", "1"}},
                                 x));
}

BundleMorphism line_inclusion(const std::string& retraction) {
  std::vector<std::string> x = {"x1"}, y = {"x1", "x2"};
  return BundleMorphism(standard_structure(1).bundle(), standard_structure(2).bundle(),
                        parse_map(std::vector<std::string>{"x1", "0"}, x),
                        matrix_of({{"1", "0"}, {"0", "0"}, {"0", "1"}, {"0", "0"}}, x),
                        parse_map(std::vector<std::string>{retraction}, y));
}

const MorphismOptions kFast{.degree_cap = 2, .random_sections = 6, .random_degree = 2, .seed = 0};

}  // namespace

TEST(IdentityBase, IdentityIsMorphism) {
  CourantStructure s = standard_structure(2);
  auto v = check_identity_base(s, s, BundleMorphism::identity(s.bundle()), kFast);
  EXPECT_TRUE(v.is_morphism);
  EXPECT_TRUE(v.failures.empty());
}

TEST(IdentityBase, MetricScalingFailsOnlyMetricCondition) {
  CourantStructure s1 = standard_structure(1), s2 = scaled_structure(s1, 2);
  auto v = check_identity_base(s1, s2, over_identity(s1, s2, PolyMatrix::identity(2, 1)), kFast);
  EXPECT_FALSE(v.is_morphism);
  ASSERT_EQ(v.failures.size(), 1u);
  const auto* f = v.find(4);
  ASSERT_NE(f, nullptr);
  EXPECT_EQ(f->condition, Condition::metric);
  // Pᵀ(2G)P − G = G.
  EXPECT_EQ(f->defect, PolyMatrix::from_constant(s1.metric(), 1));
}

TEST(IdentityBase, TangentDoublingKeepsMetricBreaksAnchor) {
  CourantStructure s = standard_structure(1);
  std::vector<std::string> x = {"x1"};
  auto v = check_identity_base(s, s, over_identity(s, s, matrix_of({{"2", "0"}, {"0", "1/2"}}, x)), kFast);
  EXPECT_FALSE(v.is_morphism);
  EXPECT_FALSE(v.failed(4));
  const auto* anchor = v.find(5);
  ASSERT_NE(anchor, nullptr);
  EXPECT_EQ(anchor->condition, Condition::anchor);
  // A₂P − A₁ = [2 0] − [1 0].
  EXPECT_EQ(anchor->defect, matrix_of({{"1", "0"}}, x));
  // The bracket condition fails as well: φ⟦∂, x·∂⟧ = 2∂ but ⟦2∂, 2x·∂⟧ = 4∂.
  const auto* bracket_failure = v.find(3);
  ASSERT_NE(bracket_failure, nullptr);
  EXPECT_FALSE(bracket_failure->defect.is_zero());
  EXPECT_EQ(bracket_failure->witness.size(), 2u);
}

TEST(IdentityBase, RejectsNonIdentityBase) {
  EXPECT_THROW(check_identity_base(standard_structure(1), standard_structure(2), line_inclusion("x1")), InputError);
}

TEST(IdentityBase, BTransformsAreMorphismsAndCompose) {
  CourantStructure s = standard_structure(2);
  BundleMorphism b1 = b_transform("1"), b2 = b_transform("2*x1 + x2^2");
  EXPECT_TRUE(check_identity_base(s, s, b1, kFast).is_morphism);
  EXPECT_TRUE(check_identity_base(s, s, b2, kFast).is_morphism);
  BundleMorphism both = compose(b2, b1);
  EXPECT_TRUE(check_identity_base(s, s, both, kFast).is_morphism);
  EXPECT_EQ(both.fiber_matrix(), b_transform("1 + 2*x1 + x2^2").fiber_matrix());
}

TEST(IdentityBase, PassingMetricConditionMakesGraphIsotropic) {
  CourantStructure s1 = standard_structure(1);
  std::vector<std::string> x = {"x1"};
  std::vector<std::pair<CourantStructure, PolyMatrix>> cases = {
      {s1, matrix_of({{"2", "0"}, {"0", "1/2"}}, x)},
      {s1, PolyMatrix::identity(2, 1)},
      {scaled_structure(s1, 2), PolyMatrix::identity(2, 1)},
      {scaled_structure(s1, -1), matrix_of({{"1", "0"}, {"0", "-1"}}, x)},
  };
  for (const auto& [s2, p] : cases) {
    BundleMorphism phi = over_identity(s1, s2, p);
    auto v = check_identity_base(s1, s2, phi, kFast);
    EXPECT_EQ(!v.failed(4), graph_pairings(s1, s2, phi).is_zero());
  }
}

TEST(GeneralBase, IdentityAgreesWithIdentityBaseCheck) {
  CourantStructure s1 = standard_structure(1), s2 = scaled_structure(s1, 2);
  BundleMorphism id = BundleMorphism::identity(s1.bundle());
  EXPECT_TRUE(check_general_base(s1, s1, id, std::nullopt, kFast).is_morphism);
  auto general = check_general_base(s1, s2, over_identity(s1, s2, PolyMatrix::identity(2, 1)), std::nullopt, kFast);
  auto identity = check_identity_base(s1, s2, over_identity(s1, s2, PolyMatrix::identity(2, 1)), kFast);
  EXPECT_EQ(general.is_morphism, identity.is_morphism);
  EXPECT_TRUE(general.failed(7));
  EXPECT_FALSE(general.failed(6));
  EXPECT_FALSE(general.failed(8));
}

TEST(GeneralBase, LineInclusionVerdict) {
  // Pairings and anchors are preserved along the axis; brackets against
  // sections depending on the transverse coordinate are not.
  auto v = check_general_base(standard_structure(1), standard_structure(2), line_inclusion("x1"), std::nullopt, kFast);
  EXPECT_FALSE(v.is_morphism);
  const auto* bracket_failure = v.find(6);
  ASSERT_NE(bracket_failure, nullptr);
  EXPECT_EQ(bracket_failure->witness.size(), 4u);
  EXPECT_FALSE(bracket_failure->defect.is_zero());
  EXPECT_FALSE(v.failed(7));
  EXPECT_FALSE(v.failed(8));
}

TEST(GeneralBase, VerdictIndependentOfRetraction) {
  CourantStructure s1 = standard_structure(1), s2 = standard_structure(2);
  auto a = check_general_base(s1, s2, line_inclusion("x1"), std::nullopt, kFast);
  auto b = check_general_base(s1, s2, line_inclusion("x1 + x1*x2 - x2^2"), std::nullopt, kFast);
  for (int eq : {6, 7, 8}) EXPECT_EQ(a.failed(eq), b.failed(eq)) << "condition " << eq;
  EXPECT_EQ(a.is_morphism, b.is_morphism);
}

TEST(GeneralBase, ExplicitPairsMustBeRelated) {
  CourantStructure s = standard_structure(1);
  BundleMorphism id = BundleMorphism::identity(s.bundle());
  std::vector<std::string> x = {"x1"};
  Section f(s.bundle(), parse_map(std::vector<std::string>{"x1", "1"}, x));
  Section g(s.bundle(), parse_map(std::vector<std::string>{"x1", "2"}, x));
  EXPECT_THROW(check_general_base(s, s, id, std::vector<RelatedPair>{{f, g}}, kFast), InputError);
  EXPECT_TRUE(check_general_base(s, s, id, std::vector<RelatedPair>{{f, f}, {g, g}}, kFast).is_morphism);
}

TEST(GeneralBase, AutoModeNeedsRetraction) {
  CourantStructure s = standard_structure(1);
  BundleMorphism phi(s.bundle(), s.bundle(), PolyMap::identity(1), PolyMatrix::identity(2, 1));
  EXPECT_THROW(check_general_base(s, s, phi, std::nullopt, kFast), InputError);
}

TEST(GeneralBase, RankZeroSourceIsVacuous) {
  TrivialBundle zero{1, 0, "zero"};
  CourantStructure s0(zero, PolyMatrix(1, 0, 1), RationalMatrix(0, 0));
  CourantStructure s = standard_structure(1);
  BundleMorphism phi(zero, s.bundle(), PolyMap::identity(1), PolyMatrix(2, 0, 1), PolyMap::identity(1));
  auto v = check_general_base(s0, s, phi, std::nullopt, kFast);
  EXPECT_TRUE(v.is_morphism);
}

TEST(Graph, Examples) {
  CourantStructure s = standard_structure(1);
  auto id = graph_subbundle(BundleMorphism::identity(s.bundle()));
  std::vector<std::string> x = {"x1"};
  EXPECT_EQ(id.base_embedding, parse_map(std::vector<std::string>{"x1", "x1"}, x));
  EXPECT_EQ(id.fiber_basis, matrix_of({{"1", "0"}, {"0", "1"}, {"1", "0"}, {"0", "1"}}, x));

  BundleMorphism zero(s.bundle(), s.bundle(), PolyMap::identity(1), PolyMatrix(2, 2, 1), PolyMap::identity(1));
  auto z = graph_subbundle(zero);
  EXPECT_EQ(z.fiber_basis, matrix_of({{"1", "0"}, {"0", "1"}, {"0", "0"}, {"0", "0"}}, x));

  std::vector<std::string> xz = {"x", "z"};
  BundleMorphism cusp(TrivialBundle{2, 1, "src"}, TrivialBundle{3, 1, "tgt"},
                      parse_map(std::vector<std::string>{"x^2", "x^3", "z"}, xz), matrix_of({{"1"}}, xz));
  auto c = graph_subbundle(cusp);
  EXPECT_EQ(c.base_embedding, parse_map(std::vector<std::string>{"x", "z", "x^2", "x^3", "z"}, xz));
}
