#include <gtest/gtest.h>

#include "courant/axioms.hpp"
#include "courant/parse.hpp"

using namespace courant;

namespace {

PolyMap map_of(std::vector<std::string> exprs, const std::vector<std::string>& vars) {
  return parse_map(exprs, vars);
}

PolyMatrix matrix_of(const std::vector<std::vector<std::string>>& rows, const std::vector<std::string>& vars) {
  PolyMatrix m(rows.size(), rows.empty() ? 0 : rows[0].size(), vars.size());
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (std::size_t c = 0; c < rows[r].size(); ++c) m(r, c) = parse(rows[r][c], vars);
  return m;
}

// (x, z) over ℝ² → ℝ³ over (x², x³, z) with fiber identity on rank 1.
BundleMorphism cusp() {
  std::vector<std::string> v = {"x", "z"};
  TrivialBundle src{2, 1, "cusp-src"}, tgt{3, 1, "cusp-tgt"};
  return BundleMorphism(src, tgt, map_of({"x^2", "x^3", "z"}, v), matrix_of({{"1"}}, v));
}

BundleMorphism line_embedding() {
  std::vector<std::string> x = {"x"}, y = {"y1", "y2"};
  TrivialBundle src{1, 2, "L"}, tgt{2, 2, "P"};
  return BundleMorphism(src, tgt, map_of({"x", "0"}, x), matrix_of({{"1", "x"}, {"0", "1"}}, x),
                        map_of({"y1"}, y));
}

}  // namespace

TEST(Bundles, WhitneySumRanks) {
  TrivialBundle tm{2, 2, "TM"}, tsm{2, 2, "T*M"}, zero{2, 0, "0"}, e{2, 1, "E"}, es{2, 1, "E*"};
  EXPECT_EQ(whitney_sum(tm, tsm).rank, 4u);
  EXPECT_EQ(whitney_sum(tm, zero).rank, 2u);
  TrivialBundle big = whitney_sum(whitney_sum(tm, tsm), whitney_sum(e, es));
  EXPECT_EQ(big.rank, 6u);
  EXPECT_EQ(big.base_dim, 2u);
  EXPECT_THROW(whitney_sum(tm, TrivialBundle{3, 1, "bad"}), InputError);
}

TEST(Bundles, SectionShapeChecked) {
  TrivialBundle b{2, 2, "B"};
  EXPECT_THROW(Section(b, PolyMap(2, 3)), InputError);
  EXPECT_THROW(Section(b, PolyMap(1, 2)), InputError);
  EXPECT_NO_THROW(Section::frame(b, 1));
}

TEST(Bundles, ApplyMorphismExamples) {
  TrivialBundle b{2, 2, "B"};
  SectionSampler s(1);
  Section f = s.section(b, 2);
  EXPECT_EQ(apply_morphism(BundleMorphism::identity(b), f), f.coeffs());
  EXPECT_TRUE(apply_morphism(line_embedding(), Section::zero(line_embedding().source())).is_zero());

  std::vector<std::string> v = {"x", "z"};
  Section fc(cusp().source(), map_of({"x"}, v));
  EXPECT_EQ(apply_morphism(cusp(), fc), map_of({"x"}, v));
}

TEST(Bundles, RetractionMustBeLeftInverse) {
  std::vector<std::string> x = {"x"}, y = {"y1", "y2"};
  TrivialBundle src{1, 1, "L"}, tgt{2, 1, "P"};
  EXPECT_THROW(BundleMorphism(src, tgt, map_of({"x", "0"}, x), matrix_of({{"1"}}, x), map_of({"y2"}, y)),
               InputError);
  EXPECT_THROW(BundleMorphism(src, tgt, map_of({"x"}, x), matrix_of({{"1"}}, x)), InputError);
}

TEST(Bundles, RelatedSectionViaRetraction) {
  BundleMorphism phi = line_embedding();
  SectionSampler s(2);
  for (int k = 0; k < 20; ++k) {
    Section f = s.section(phi.source(), 3);
    auto g = related_section(phi, f);
    ASSERT_TRUE(std::holds_alternative<Section>(g));
    const Section& gs = std::get<Section>(g);
    // Independent check: g(y1, y2) = P(y1) f(y1).
    std::vector<std::string> y = {"y1", "y2"};
    PolyMap y1 = map_of({"y1"}, y);
    PolyMap expected = phi.fiber_matrix().compose(y1) * compose(f.coeffs(), y1);
    EXPECT_EQ(gs.coeffs(), expected);
    EXPECT_TRUE(check_related(phi, f, gs));
  }
}

TEST(Bundles, CheckRelatedExamples) {
  TrivialBundle b{1, 2, "B"};
  auto id = BundleMorphism::identity(b);
  std::vector<std::string> x = {"x"};
  Section f(b, map_of({"x^2", "1"}, x));
  EXPECT_TRUE(check_related(id, f, f));
  Section shifted(b, map_of({"x^2 + 1", "1"}, x));
  EXPECT_FALSE(check_related(id, f, shifted));
  auto g = related_section(id, f);
  EXPECT_EQ(std::get<Section>(g), f);
}

TEST(Bundles, CuspHasNoPolynomialRelatedSection) {
  std::vector<std::string> v = {"x", "z"};
  BundleMorphism phi = cusp();
  Section f(phi.source(), map_of({"x"}, v));
  for (unsigned cap = 1; cap <= 8; ++cap) {
    auto g = related_section(phi, f, cap);
    ASSERT_TRUE(std::holds_alternative<NonExistenceCertificate>(g)) << "degree cap " << cap;
    const auto& cert = std::get<NonExistenceCertificate>(g);
    EXPECT_EQ(cert.degree_cap, cap);
    EXPECT_TRUE(cert.verify());
  }
}

TEST(Bundles, SearchFindsSectionWhenOneExists) {
  std::vector<std::string> v = {"x", "z"};
  BundleMorphism phi = cusp();
  Section f(phi.source(), map_of({"x^5 + z"}, v));
  auto g = related_section(phi, f, 3);
  ASSERT_TRUE(std::holds_alternative<Section>(g));
  EXPECT_TRUE(check_related(phi, f, std::get<Section>(g)));
}

TEST(Bundles, ApplyMorphismIsFiberwiseLinear) {
  BundleMorphism phi = line_embedding();
  SectionSampler s(3);
  for (int k = 0; k < 20; ++k) {
    Section f = s.section(phi.source(), 2), g = s.section(phi.source(), 2);
    Rational a = s.coefficient(), b = s.coefficient();
    PolyMap combo = a * f.coeffs() + b * g.coeffs();
    EXPECT_EQ(apply_morphism(phi, Section(phi.source(), combo)),
              a * apply_morphism(phi, f) + b * apply_morphism(phi, g));
  }
}

TEST(Bundles, ApplyMorphismRespectsComposition) {
  std::vector<std::string> y = {"y1", "y2"}, w = {"w1", "w2", "w3"};
  BundleMorphism first = line_embedding();
  TrivialBundle third{3, 2, "Q"};
  BundleMorphism second(first.target(), third, map_of({"y1", "y2", "y1*y2"}, y),
                        matrix_of({{"y2", "1"}, {"1", "0"}}, y), map_of({"w1", "w2"}, w));
  BundleMorphism both = compose(second, first);
  SectionSampler s(4);
  for (int k = 0; k < 10; ++k) {
    Section f = s.section(first.source(), 2);
    PolyMap once = apply_morphism(first, f);
    PolyMap twice = second.fiber_matrix().compose(first.base_map()) * once;
    EXPECT_EQ(apply_morphism(both, f), twice);
  }
}

TEST(Bundles, VanishingGeneratorsVanishOnImage) {
  BundleMorphism phi = line_embedding();
  auto gens = phi.vanishing_generators();
  ASSERT_EQ(gens.size(), 1u);
  EXPECT_TRUE(compose(gens[0], phi.base_map()).is_zero());
}

TEST(Bundles, LinearSubspaceRejectsDependentBasis) {
  EXPECT_THROW(LinearSubspace(2, {{1, 1}, {2, 2}}), InputError);
  EXPECT_THROW(LinearSubspace(2, {{1, 1, 0}}), InputError);
  EXPECT_EQ(LinearSubspace(2, {{1, 0}, {0, 1}}).dim(), 2u);
}
