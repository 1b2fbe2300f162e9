#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "garding/curvature.hpp"
#include "support/sampling.hpp"

namespace garding {
namespace {

double falling(int n, int m) {
  double f = 1;
  for (int i = 0; i < m; ++i) f *= n - i;
  return f;
}

// Bound on the size of any degree-k contraction term sum: (n |R|)^k.
double frobenius_scale(const RiemannTensor& R, int k) {
  double f = 0;
  for (double v : R.components()) f += v * v;
  return std::pow(R.n() * std::sqrt(f), k);
}

TEST(Riemann, ValidatesAntisymmetry) {
  std::vector<double> comp(81, 0.0);
  comp[((0 * 3 + 1) * 3 + 0) * 3 + 1] = 1.0;
  EXPECT_THROW(RiemannTensor(3, comp), DomainError);
  comp[((1 * 3 + 0) * 3 + 0) * 3 + 1] = -1.0;
  comp[((0 * 3 + 1) * 3 + 1) * 3 + 0] = -1.0;
  comp[((1 * 3 + 0) * 3 + 1) * 3 + 0] = 1.0;
  EXPECT_NO_THROW(RiemannTensor(3, comp));
  EXPECT_THROW(RiemannTensor(3, std::vector<double>(80, 0.0)), DomainError);
}

TEST(Riemann, RandomAdmissibleHasCurvatureSymmetries) {
  std::mt19937_64 rng(3);
  const auto R = testing::random_admissible(5, rng);
  EXPECT_TRUE(R.pair_symmetric(1e-12));
  EXPECT_NO_THROW(RiemannTensor(5, R.components()));
  // first Bianchi identity R_{abcd} + R_{acdb} + R_{adbc} = 0
  for (int a = 0; a < 5; ++a)
    for (int b = 0; b < 5; ++b)
      for (int c = 0; c < 5; ++c)
        for (int d = 0; d < 5; ++d) EXPECT_NEAR(R(a, b, c, d) + R(a, c, d, b) + R(a, d, b, c), 0.0, 1e-12);
}

TEST(Lovelock, ConstantCurvature) {
  for (int n = 2; n <= 6; ++n) {
    const double kappa = 0.7;
    const auto R = RiemannTensor::constant_curvature(n, kappa);
    EXPECT_EQ(lovelock_product(R, 0), 1.0);
    EXPECT_NEAR(lovelock_product(R, 1), n * (n - 1) * kappa, 1e-12);
    for (int k = 2; 2 * k <= n; ++k)
      EXPECT_NEAR(lovelock_product(R, k), falling(n, 2 * k) * std::pow(kappa, k), 1e-10) << n << " " << k;
  }
  EXPECT_NEAR(lovelock_product(RiemannTensor::constant_curvature(5, 2.0), 2), 120.0 * 4.0, 1e-10);
  EXPECT_THROW(lovelock_product(RiemannTensor(3), -1), DomainError);
}

TEST(Lovelock, VanishesAboveHalfDimension) {
  std::mt19937_64 rng(5);
  for (int n = 3; n <= 6; ++n) {
    const auto R = testing::random_admissible(n, rng);
    for (int k = n / 2 + 1; k <= lovelock_top_degree(n) + 1; ++k) EXPECT_LT(std::abs(lovelock_product(R, k)), 1e-12);
  }
}

TEST(Lovelock, ClosedFormsMatchContraction) {
  std::mt19937_64 rng(7);
  for (int n = 4; n <= 6; ++n)
    for (int trial = 0; trial < 10; ++trial) {
      const auto R = testing::random_admissible(n, rng);
      for (int k = 1; k <= 3; ++k) {
        const auto c = detail::kronecker_contraction(std::vector<const RiemannTensor*>(static_cast<std::size_t>(k), &R));
        const double closed = lovelock_closed_form(R, k);
        EXPECT_LE(std::abs(c.value - closed), 1e-10 * std::max({1.0, c.magnitude, frobenius_scale(R, k)}))
            << "n=" << n << " k=" << k;
      }
    }
}

TEST(Lovelock, GaussBonnetVanishesInThreeDimensions) {
  std::mt19937_64 rng(11);
  const auto R = testing::random_admissible(3, rng);
  EXPECT_LT(std::abs(lovelock_closed_form(R, 2)), 1e-10 * (1 + std::abs(R.scalar()) * std::abs(R.scalar())));
}

TEST(Schouten, Examples) {
  const auto S = schouten(RiemannTensor::constant_curvature(4, 3.0));
  const auto lam = schouten_eigenvalues(S);
  for (int i = 0; i < 4; ++i) EXPECT_NEAR(lam[i], 1.5, 1e-14);
  const auto zero = schouten_eigenvalues(schouten(RiemannTensor(5)));
  for (int i = 0; i < 5; ++i) EXPECT_EQ(zero[i], 0.0);
  EXPECT_THROW(schouten(RiemannTensor(2)), DomainError);
}

TEST(Schouten, RoundTrip) {
  std::mt19937_64 rng(13);
  for (int n = 3; n <= 7; ++n)
    for (int trial = 0; trial < 20; ++trial) {
      const SchoutenMatrix S(testing::random_symmetric(n, rng));
      const auto back = schouten(riemann_from_schouten(S));
      EXPECT_LE((back.matrix() - S.matrix()).cwiseAbs().maxCoeff(), 1e-12 * std::max(1.0, S.matrix().norm()));
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(S.matrix());
      const auto lam = schouten_eigenvalues(back);
      for (int i = 0; i < n; ++i) EXPECT_NEAR(lam[i], es.eigenvalues()(i), 1e-10);
    }
}

TEST(Schouten, ConstantCurvatureFromScaledIdentity) {
  const int n = 5;
  const double kappa = -1.3;
  const auto R = riemann_from_schouten(SchoutenMatrix(0.5 * kappa * Eigen::MatrixXd::Identity(n, n)));
  const auto C = RiemannTensor::constant_curvature(n, kappa);
  for (std::size_t i = 0; i < R.components().size(); ++i) EXPECT_NEAR(R.components()[i], C.components()[i], 1e-15);
  const auto Z = riemann_from_schouten(SchoutenMatrix(Eigen::MatrixXd::Zero(n, n)));
  for (double v : Z.components()) EXPECT_EQ(v, 0.0);
}

TEST(Schouten, RejectsAsymmetric) {
  Eigen::MatrixXd m = Eigen::MatrixXd::Identity(3, 3);
  m(0, 1) = 1e-6;
  EXPECT_THROW(SchoutenMatrix{m}, DomainError);
}

TEST(LcfIdentity, Examples) {
  const auto S = SchoutenMatrix(0.5 * Eigen::MatrixXd::Identity(5, 5));
  const auto [lhs, rhs] = lcf_identity_check(S, 2);
  EXPECT_NEAR(lhs, 120.0, 1e-10);
  EXPECT_NEAR(rhs, 120.0, 1e-10);
  const auto zero = lcf_identity_check(S, 0);
  EXPECT_EQ(zero.first, 1.0);
  EXPECT_EQ(zero.second, 1.0);
  EXPECT_THROW(lcf_identity_check(S, 4), DomainError);
  // k = 3 = floor(6/2) in n = 5 is admissible but the factor needs n >= 2k.
  EXPECT_THROW(lcf_identity_check(S, 3), DomainError);
}

TEST(LcfIdentity, RandomSchoutenMatrices) {
  std::mt19937_64 rng(17);
  for (int n = 4; n <= 6; ++n)
    for (int trial = 0; trial < 10; ++trial) {
      const SchoutenMatrix S(testing::random_symmetric(n, rng));
      for (int k = 1; 2 * k <= n; ++k) {
        const auto [lhs, rhs] = lcf_identity_check(S, k);
        const double scale = lovelock_sigma_factor(n, k) * std::pow(S.matrix().norm(), k);
        EXPECT_LE(std::abs(lhs - rhs), 1e-10 * scale) << "n=" << n << " k=" << k;
      }
    }
}

TEST(Expansion, ZeroShifts) {
  std::mt19937_64 rng(19);
  const auto R = testing::random_admissible(5, rng);
  for (int p = 0; p <= 2; ++p) {
    const auto e = concircular_expansion_check(R, std::vector<double>(static_cast<std::size_t>(p), 0.0));
    EXPECT_LE(std::abs(e.lhs - e.rhs), 1e-10 * std::max(1.0, e.magnitude));
    // with nu = 0 only R_p survives, times (n-2p)!/(n-2p)! = 1
    EXPECT_NEAR(e.rhs, lovelock_product(R, p), 1e-10 * std::max(1.0, e.magnitude));
  }
}

TEST(Expansion, RandomTensorsAndShifts) {
  std::mt19937_64 rng(23);
  std::normal_distribution<double> g(0, 1);
  for (int n = 3; n <= 6; ++n)
    for (int trial = 0; trial < 5; ++trial) {
      const auto R = testing::random_admissible(n, rng);
      for (int p = 1; p <= std::min(lovelock_top_degree(n), 3); ++p) {
        if (n == 6 && p == 3 && trial > 0) continue;
        std::vector<double> nu;
        for (int i = 0; i < p; ++i) nu.push_back(g(rng));
        const auto e = concircular_expansion_check(R, nu);
        EXPECT_LE(std::abs(e.lhs - e.rhs), 1e-10 * std::max(1.0, e.magnitude)) << "n=" << n << " p=" << p;
      }
    }
}

TEST(Expansion, VanishingFactors) {
  const double kappa = 0.8;
  const auto R = RiemannTensor::constant_curvature(5, kappa);
  const auto e = concircular_expansion_check(R, {-kappa, -kappa});
  EXPECT_NEAR(e.lhs, 0.0, 1e-12);
  EXPECT_NEAR(e.rhs, 0.0, 1e-10);
}

TEST(Expansion, Limits) {
  EXPECT_THROW(concircular_expansion_check(RiemannTensor(7), {1.0}), ResourceError);
  EXPECT_THROW(concircular_expansion_check(RiemannTensor(4), {1.0, 1.0, 1.0}), DomainError);
  EXPECT_THROW(detail::kronecker_contraction(std::vector<const RiemannTensor*>(5, nullptr)), std::exception);
}

TEST(Factorization, ReproducesFaUpToTheProportionalityConstant) {
  std::mt19937_64 rng(29);
  std::uniform_real_distribution<double> u(0.2, 2.0);
  for (int n : {4, 5, 6})
    for (int p = 1; 2 * p <= n && p <= 2; ++p)
      for (int trial = 0; trial < 10; ++trial) {
        // fbar = a_p C(n,p) prod (X + mu_i) with mu_i > 0: real-rooted.
        std::vector<double> mu;
        for (int i = 0; i < p; ++i) mu.push_back(u(rng));
        const double ap = u(rng);
        const auto e = elementary_symmetric<double>(mu, p);
        std::vector<double> a(static_cast<std::size_t>(p + 1));
        for (int k = 0; k <= p; ++k) a[static_cast<std::size_t>(k)] = ap * binomial(n, p) * e[static_cast<std::size_t>(p - k)] / binomial(n, k);
        const CoeffVector coeffs(a);
        const auto fact = concircular_factorize(coeffs, n);
        ASSERT_TRUE(fact.all_real);
        ASSERT_TRUE(fact.scale.has_value());
        std::vector<double> nu;
        for (auto v : fact.nu) nu.push_back(v.real());

        const SchoutenMatrix S(testing::random_symmetric(n, rng, 0.5));
        const auto check = concircular_expansion_check(riemann_from_schouten(S), nu);
        const double want = f_a(coeffs, schouten_eigenvalues(S));
        const double got = *fact.scale * check.lhs;
        EXPECT_LE(std::abs(got - want), 1e-9 * std::max(std::abs(want), *fact.scale * check.magnitude))
            << "n=" << n << " p=" << p;
      }
}

}  // namespace
}  // namespace garding
