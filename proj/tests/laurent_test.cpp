#include <gtest/gtest.h>

#include "torelli/laurent.hpp"

using namespace torelli;

namespace {

LaurentPolynomial<Rational> octahedron_poly() {
  return realize(RandomCoefficients{11, 997, std::nullopt}, polytopes::cross_polytope(3));
}

}  // namespace

TEST(Laurent, RandomRealizationIsSeeded) {
  const auto p = polytopes::cross_polytope(3);
  const auto a = realize(RandomCoefficients{5, 997, std::nullopt}, p);
  const auto b = realize(RandomCoefficients{5, 997, std::nullopt}, p);
  const auto c = realize(RandomCoefficients{6, 997, std::nullopt}, p);
  EXPECT_EQ(a, b);
  EXPECT_NE(a, c);
  EXPECT_EQ(a.size(), 7u);
  for (const auto& [m, x] : a.terms()) {
    EXPECT_NE(x, 0);
    EXPECT_LE(abs(x), 997);
  }
}

TEST(Laurent, NewtonPolytopeEqualsPolytope) {
  const auto p = polytopes::projective_hypersurface(3, 5);
  const auto f = realize(RandomCoefficients{3, 50, std::nullopt}, p);
  EXPECT_EQ(f.newton_polytope(), p);
}

TEST(Laurent, ExplicitOutsideSupportRejected) {
  const auto p = polytopes::cross_polytope(3);
  ExplicitTerms t{{{LatticePoint{1, 1, 0}, Rational(1)}}};
  EXPECT_THROW(realize(t, p), SupportOutsidePolytope);
}

TEST(Laurent, MissingVertexRejected) {
  const auto p = polytopes::cross_polytope(3);
  ExplicitTerms t{{{LatticePoint{1, 0, 0}, Rational(1)}, {LatticePoint{-1, 0, 0}, Rational(1)}}};
  EXPECT_THROW(realize(t, p), NewtonPolytopeMismatch);
}

TEST(Laurent, FacetGeneratorVanishesOnFacet) {
  const auto f = octahedron_poly();
  const auto p = polytopes::cross_polytope(3);
  const auto derivs = log_derivatives(f);
  for (const auto& facet : p.facets()) {
    const auto g = facet_generator(f, facet);
    EXPECT_EQ(g, facet_generator_from_derivatives(derivs, facet));
    for (const auto& [m, c] : g.terms()) EXPECT_GT(facet.eval(m), 0);
    EXPECT_TRUE(restrict_to_face(g, facet).is_zero());
  }
}

TEST(Laurent, LogDerivativesWeightByExponent) {
  const auto f = octahedron_poly();
  const auto d = log_derivatives(f);
  ASSERT_EQ(d.size(), 4u);
  EXPECT_EQ(d[0].x0_degree(), f.x0_degree() + 1);
  for (std::size_t i = 0; i < 3; ++i)
    for (const auto& [m, c] : f.terms()) EXPECT_EQ(d[i + 1].coefficient(m), c * m[i]);
}

TEST(Laurent, ShiftTranslatesSupport) {
  const auto f = octahedron_poly();
  const LatticePoint w{1, -2, 3};
  const auto g = shift(f, w);
  for (const auto& [m, c] : f.terms()) EXPECT_EQ(g.coefficient(m + w), c);
  EXPECT_EQ(shift(g, -w), f);
}

TEST(Laurent, CastToPrimeField) {
  const auto f = octahedron_poly();
  const auto g = f.cast<Fp>();
  EXPECT_EQ(g.size(), f.size());
  for (const auto& [m, c] : f.terms()) EXPECT_EQ(g.coefficient(m), field_cast<Fp>(c));
}
