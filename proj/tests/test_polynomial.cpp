#include <gtest/gtest.h>

#include <random>

#include "garding/polynomial.hpp"

namespace garding {
namespace {

RealPolynomial poly(std::vector<long> c) {
  std::vector<Rational> q(c.begin(), c.end());
  return RealPolynomial(std::move(q));
}

TEST(RealPolynomial, TrimsAndReportsDegree) {
  EXPECT_EQ(poly({1, 2, 0, 0}).degree(), 1);
  EXPECT_TRUE(poly({0, 0}).is_zero());
  EXPECT_EQ(poly({0}).degree(), -1);
}

TEST(RealPolynomial, DivisionReconstructs) {
  const auto num = poly({-1, 0, 0, 2, 5});
  const auto den = poly({3, 1, 1});
  const auto [q, r] = divmod(num, den);
  EXPECT_LT(r.degree(), den.degree());
  EXPECT_EQ(q * den + r, num);
}

TEST(RealPolynomial, GcdOfSharedFactor) {
  const auto shared = poly({2, 1});  // X + 2
  const auto g = gcd(shared * poly({-1, 0, 1}), shared * poly({5, 1}));
  EXPECT_EQ(g, shared);
}

TEST(Sturm, CountsDistinctRealRoots) {
  EXPECT_EQ(count_distinct_real_roots(poly({-1, 0, 1})), 2);
  EXPECT_EQ(count_distinct_real_roots(poly({1, 0, 1})), 0);
  // (X-1)^2 (X+3): two distinct roots
  EXPECT_EQ(count_distinct_real_roots(poly({-1, 1}) * poly({-1, 1}) * poly({3, 1})), 2);
  EXPECT_EQ(count_distinct_real_roots(poly({-1, 0, 1}), Rational(0), Rational(5)), 1);
}

TEST(SquareFree, RecoversMultiplicities) {
  const auto p = poly({1, 1}) * poly({1, 1}) * poly({1, 1}) * poly({-2, 1}) * poly({1, 0, 1});
  const auto parts = square_free_decomposition(p);
  int weighted = 0;
  for (const auto& [f, m] : parts) weighted += f.degree() * m;
  EXPECT_EQ(weighted, p.degree());
  EXPECT_EQ(count_real_roots_with_multiplicity(p), 4);
}

TEST(Isolation, IntervalsSeparateAndRefine) {
  // roots -3, 1/2 (double), 2
  std::vector<Rational> roots{Rational(-3), Rational(1, 2), Rational(1, 2), Rational(2)};
  const auto p = RealPolynomial::from_roots(roots, Rational(7));
  const auto ivs = isolate_real_roots(p);
  ASSERT_EQ(ivs.size(), 3u);
  EXPECT_NEAR(refine_root(p, ivs[0]), -3.0, 1e-15);
  EXPECT_NEAR(refine_root(p, ivs[1]), 0.5, 1e-15);
  EXPECT_EQ(ivs[1].multiplicity, 2);
  EXPECT_NEAR(refine_root(p, ivs[2]), 2.0, 1e-15);
}

TEST(Isolation, RootAtBisectionPoint) {
  // Cauchy bound makes 0 the first midpoint.
  const auto p = poly({0, -1, 0, 1});  // X^3 - X
  const auto ivs = isolate_real_roots(p);
  ASSERT_EQ(ivs.size(), 3u);
  EXPECT_DOUBLE_EQ(refine_root(p, ivs[1]), 0.0);
}

TEST(ComplexRoots, MatchesKnownPair) {
  const auto r = complex_roots(poly({5, -2, 1}));  // 1 +- 2i
  ASSERT_EQ(r.size(), 2u);
  for (auto z : r) {
    EXPECT_NEAR(z.real(), 1.0, 1e-14);
    EXPECT_NEAR(std::abs(z.imag()), 2.0, 1e-14);
  }
}

TEST(Sturm, ExactCountMatchesConstructedRoots) {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> num(-40, 40), den(1, 9), deg(1, 7);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<Rational> roots;
    const int d = deg(rng);
    for (int i = 0; i < d; ++i) roots.emplace_back(num(rng), den(rng));
    for (auto& r : roots) r.canonicalize();
    auto p = RealPolynomial::from_roots(roots, Rational(3, 2));
    std::sort(roots.begin(), roots.end());
    const auto distinct = std::unique(roots.begin(), roots.end()) - roots.begin();
    EXPECT_EQ(count_distinct_real_roots(p), distinct);
    EXPECT_EQ(count_real_roots_with_multiplicity(p), d);
    // an irreducible quadratic factor removes exactly two
    EXPECT_EQ(count_real_roots_with_multiplicity(p * poly({1, 1, 1})), d);
  }
}

}  // namespace
}  // namespace garding
