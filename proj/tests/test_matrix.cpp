#include <gtest/gtest.h>

#include "courant/parse.hpp"
#include "courant/matrix.hpp"

using namespace courant;

namespace {

RationalMatrix M(std::initializer_list<std::initializer_list<long>> rows) {
  RationalMatrix m(rows.size(), rows.begin()->size());
  std::size_t r = 0;
  for (const auto& row : rows) {
    std::size_t c = 0;
    for (long v : row) m(r, c++) = v;
    ++r;
  }
  return m;
}

}  // namespace

TEST(RationalMatrix, DeterminantAndInverse) {
  RationalMatrix a = M({{2, 1}, {1, 1}});
  EXPECT_EQ(determinant(a), 1);
  EXPECT_EQ(a * inverse(a), RationalMatrix::identity(2));
  EXPECT_EQ(determinant(M({{1, 2}, {2, 4}})), 0);
  EXPECT_THROW(inverse(M({{1, 2}, {2, 4}})), InputError);
  EXPECT_EQ(rank(M({{1, 2, 3}, {2, 4, 6}})), 1u);
}

TEST(RationalMatrix, SolveLinearReturnsSolution) {
  RationalMatrix a = M({{1, 1}, {1, -1}});
  auto sol = solve_linear(a, {3, 1});
  ASSERT_TRUE(std::holds_alternative<std::vector<Rational>>(sol));
  EXPECT_EQ(std::get<std::vector<Rational>>(sol), (std::vector<Rational>{2, 1}));
}

TEST(RationalMatrix, SolveLinearCertifiesInfeasibility) {
  RationalMatrix a = M({{1, 1}, {2, 2}});
  std::vector<Rational> b = {1, 3};
  auto sol = solve_linear(a, b);
  ASSERT_TRUE(std::holds_alternative<InfeasibilityCertificate>(sol));
  EXPECT_TRUE(std::get<InfeasibilityCertificate>(sol).verify(a, b));
}

TEST(PolyMatrix, DeterminantOfPolynomialMatrix) {
  std::vector<std::string> x = {"x"};
  PolyMatrix m(2, 2, 1);
  m(0, 0) = parse("x", x);
  m(0, 1) = parse("1", x);
  m(1, 0) = parse("x^2", x);
  m(1, 1) = parse("x", x);
  EXPECT_TRUE(determinant(m).is_zero());
  m(1, 1) = parse("x+1", x);
  EXPECT_EQ(determinant(m), parse("x", x));
}

TEST(PolyMatrix, ProductTransposeAndEval) {
  std::vector<std::string> x = {"x"};
  PolyMatrix a(1, 2, 1);
  a(0, 0) = parse("x", x);
  a(0, 1) = parse("1", x);
  PolyMatrix aat = a * a.transpose();
  EXPECT_EQ(aat(0, 0), parse("x^2 + 1", x));
  std::vector<Rational> pt = {3};
  EXPECT_EQ(aat.eval(pt)(0, 0), 10);
  EXPECT_FALSE(aat.is_constant());
  EXPECT_TRUE(PolyMatrix::from_constant(M({{1, 2}}), 1).is_constant());
}
