#include <gtest/gtest.h>

#include <cmath>
#include <cstdlib>
#include <random>

#include "garding/concavity.hpp"
#include "support/oracles.hpp"
#include "support/sampling.hpp"

namespace garding {
namespace {

/// Central differences of F(f_a) in extended precision.
Eigen::MatrixXd fd_hessian(const Concavifier& F, const CoeffVector& a, const ConePoint& x) {
  const int n = x.n();
  auto f = [&](std::vector<long double> y) {
    const auto s = elementary_symmetric<long double>(y, a.p());
    long double P = 0;
    for (int k = 0; k <= a.p(); ++k) P += a[k] * s[static_cast<std::size_t>(k)];
    return F.value(P);
  };
  Eigen::MatrixXd H(n, n);
  const long double h = 1e-4L;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      auto at = [&](int si, int sj) {
        std::vector<long double> y(x.lambda().begin(), x.lambda().end());
        y[static_cast<std::size_t>(i)] += si * h;
        y[static_cast<std::size_t>(j)] += sj * h;
        return f(y);
      };
      H(i, j) = static_cast<double>((at(1, 1) - at(1, -1) - at(-1, 1) + at(-1, -1)) / (4 * h * h));
    }
  return H;
}

double quad(const Eigen::MatrixXd& H, const Eigen::VectorXd& u) { return u.dot(H * u); }

TEST(Concavifier, DomainFloors) {
  EXPECT_EQ(Concavifier::power(0.5).domain_floor(), 0.0);
  EXPECT_EQ(Concavifier::log().domain_floor(), 0.0);
  EXPECT_DOUBLE_EQ(Concavifier::loglog(2.0).domain_floor(), std::exp(-2.0));
  // ln(ln(ln t)) needs ln t > 1.
  EXPECT_DOUBLE_EQ(Concavifier::iterlog(3, {0, 0, 0}).domain_floor(), std::exp(1.0));
  EXPECT_THROW(Concavifier::power(0.0), DomainError);
  EXPECT_THROW(Concavifier::iterlog(2, {1.0}), DomainError);
  EXPECT_THROW(Concavifier::log().jet(0.0), DomainError);
}

TEST(Concavifier, JetsAgreeWithDifferences) {
  const std::vector<Concavifier> kinds{Concavifier::power(0.3), Concavifier::power(-1.0), Concavifier::power(2.0),
                                       Concavifier::log(), Concavifier::loglog(1.5),
                                       Concavifier::iterlog(3, {2.0, 1.0, 0.5})};
  for (const auto& F : kinds)
    for (double t : {0.7, 1.3, 4.0, 50.0}) {
      const long double h = 1e-5L * t;
      const auto j = F.jet(t);
      const long double d1 = (F.value(t + h) - F.value(t - h)) / (2 * h);
      const long double d2 = (F.value(t + h) - 2 * F.value(t) + F.value(t - h)) / (h * h);
      EXPECT_NEAR(static_cast<double>(j.d1 / d1), 1.0, 1e-8) << F.name() << " t=" << t;
      EXPECT_NEAR(static_cast<double>(j.d2 / d2), 1.0, 1e-4) << F.name() << " t=" << t;
      EXPECT_GT(j.d1, 0) << F.name();
    }
}

TEST(Concavifier, RatioMatchesClosedForms) {
  const auto F = Concavifier::loglog(0.5);
  for (double t : {1.0, 3.0, 100.0}) EXPECT_NEAR(static_cast<double>(-F.curvature_ratio(t)), 1.0 + 1.0 / (0.5 + std::log(t)), 1e-15);
  EXPECT_EQ(Concavifier::power(-1.0).curvature_ratio(3.0), -2.0L);
  EXPECT_EQ(Concavifier::log().curvature_ratio(3.0), -1.0L);
  EXPECT_EQ(Concavifier::power(-1.0).value(4.0), -0.25L);
}

TEST(HessianComposed, IdentityConcavifier) {
  std::mt19937_64 rng(1);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 2 + trial % 6;
    CoeffVector a(testing::random_vector(1 + trial % n, 0.1, 1, rng));
    ConePoint x(testing::random_vector(n, 0.2, 2, rng));
    EXPECT_TRUE(hessian_composed(Concavifier::power(1.0), a, x).isApprox(hessian_f_a(a, x), 1e-15));
  }
}

TEST(HessianComposed, LogOfSigma1) {
  ConePoint x({0.5, 1.0, 2.5, 4.0});
  const double s1 = 8.0;
  const Eigen::MatrixXd want = -Eigen::MatrixXd::Ones(4, 4) / (s1 * s1);
  EXPECT_TRUE(hessian_composed(Concavifier::log(), CoeffVector({0, 1}), x).isApprox(want, 1e-15));
}

TEST(HessianComposed, OutsideDomainThrows) {
  EXPECT_THROW(hessian_composed(Concavifier::loglog(0.0), CoeffVector({0.5, 0.1}), ConePoint({0.1, 0.1})), DomainError);
}

TEST(HessianComposed, MatchesFiniteDifferencesForEveryKind) {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(0, 1);
  for (int trial = 0; trial < 1000; ++trial) {
    const int n = 2 + trial % 7;
    const int p = 1 + static_cast<int>(rng() % static_cast<unsigned>(std::min(n, 4)));
    std::vector<double> a = testing::random_vector(p + 1, 0.1, 1.0, rng);
    a[0] += 1.0;
    const CoeffVector c(a);
    ConePoint x(testing::random_vector(n, 0.3, 2.0, rng));
    Concavifier F = Concavifier::log();
    switch (trial % 4) {
      case 0: F = Concavifier::power(u(rng) < 0.5 ? -0.05 - u(rng) : 0.05 + 1.5 * u(rng)); break;
      case 1: F = Concavifier::log(); break;
      case 2: F = Concavifier::loglog(1.0 + u(rng)); break;
      case 3: F = Concavifier::iterlog(3, {2.0 + u(rng), 1.0 + u(rng), u(rng)}); break;
    }
    const auto H = hessian_composed(F, c, x);
    const auto Hfd = fd_hessian(F, c, x);
    // Both terms of the composition set the scale; their sum may cancel.
    const auto j = F.jet(f_a(c, x));
    const auto D = gradient_f_a(c, x);
    const double scale = std::abs(static_cast<double>(j.d1)) * hessian_f_a(c, x).norm() +
                         std::abs(static_cast<double>(j.d2)) * D.squaredNorm();
    EXPECT_LE((H - Hfd).norm(), 1e-5 * scale) << F.name() << " trial " << trial;
  }
}

TEST(SampleConcavity, SqrtOfSigma1PlusSigma2IsCertified) {
  const auto v = sample_concavity(Concavifier::power(0.5), CoeffVector({0, 1, 1}), 3, 2000, 7);
  EXPECT_EQ(v.status, VerdictStatus::CertifiedConcave);
  ASSERT_TRUE(v.certificate.has_value());
  EXPECT_EQ(*v.certificate, "p2");
  EXPECT_FALSE(v.witness.has_value());
  EXPECT_EQ(v.samples, 2000u);
}

TEST(SampleConcavity, ViolationCarriesARecheckableWitness) {
  const CoeffVector a({1, 1, 1});
  const auto F = Concavifier::power(0.5);
  const auto v = sample_concavity(F, a, 3, 2000, 7);
  ASSERT_EQ(v.status, VerdictStatus::Violated);
  ASSERT_TRUE(v.witness.has_value());
  const auto& w = *v.witness;
  const auto H = hessian_composed(F, a, w.x);
  const double lmax = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(H).eigenvalues().cwiseAbs().maxCoeff();
  EXPECT_GT(quad(H, w.u), 1e-9 * lmax);
  EXPECT_LE(v.samples, w.sample + 1);
}

TEST(SampleConcavity, AffineIsCertified) {
  for (int n = 1; n <= 6; ++n) {
    const auto v = sample_concavity(Concavifier::power(1.0), CoeffVector({1, 1}), n, 500, 3);
    EXPECT_EQ(v.status, VerdictStatus::CertifiedConcave);
    EXPECT_EQ(v.certificate.value_or(""), "affine");
  }
}

TEST(SampleConcavity, SquareOfSigma2IsViolated) {
  const auto v = sample_concavity(Concavifier::power(2.0), CoeffVector({0, 0, 1}), 4, 500, 3);
  EXPECT_EQ(v.status, VerdictStatus::Violated);
  EXPECT_FALSE(v.certificate.has_value());
}

TEST(SampleConcavity, SigmaKRootIsSampledConcaveAndTooLargePowerIsNot) {
  for (int k = 2; k <= 4; ++k) {
    std::vector<double> a(static_cast<std::size_t>(k + 1), 0.0);
    a.back() = 1.0;
    const CoeffVector c(a);
    EXPECT_TRUE(concave_status(sample_concavity(Concavifier::power(1.0 / k), c, 5, 2000, 11).status)) << k;
    EXPECT_EQ(sample_concavity(Concavifier::power(1.0 / k + 0.05), c, 5, 2000, 11).status, VerdictStatus::Violated) << k;
  }
}

TEST(SampleConcavity, AgreesWithP2Criterion) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0, 1);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 3 + trial % 6;
    const double a0 = u(rng), a1 = u(rng), a2 = u(rng);
    const auto v = sample_concavity(Concavifier::power(0.5), CoeffVector({a0, a1, a2}), n, 400, 100 + trial);
    const bool p2 = p2_criterion(a0, a1, a2, n);
    EXPECT_EQ(v.status, p2 ? VerdictStatus::CertifiedConcave : VerdictStatus::Violated)
        << a0 << " " << a1 << " " << a2 << " n=" << n;
  }
}

TEST(SampleConcavity, CertifiedVectorsAreNeverViolated) {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(0.01, 1);
  int kurtz = 0, walsh = 0;
  while (kurtz < 40 || walsh < 40) {
    const int n = 3 + static_cast<int>(rng() % 6);
    const int p = 2 + static_cast<int>(rng() % static_cast<unsigned>(std::min(n, 5) - 1));
    std::vector<double> a;
    for (int k = 0; k <= p; ++k) a.push_back(u(rng));
    const CoeffVector c(a);
    const bool is_kurtz = kurtz_certificate(c), is_walsh = walsh_certificate(c, n);
    if (!(is_kurtz || is_walsh)) continue;
    kurtz += is_kurtz;
    walsh += is_walsh;
    const auto v = sample_concavity(Concavifier::power(1.0 / p), c, n, 500, rng());
    EXPECT_EQ(v.status, VerdictStatus::CertifiedConcave);
  }
}

TEST(SampleConcavity, DeterministicAcrossThreadCounts) {
  const CoeffVector a({1, 1, 1});
  ::setenv("GARDING_THREADS", "1", 1);
  const auto one = sample_concavity(Concavifier::power(0.5), a, 4, 3000, 42);
  ::setenv("GARDING_THREADS", "3", 1);
  const auto three = sample_concavity(Concavifier::power(0.5), a, 4, 3000, 42);
  ::unsetenv("GARDING_THREADS");
  ASSERT_TRUE(one.witness && three.witness);
  EXPECT_EQ(one.witness->sample, three.witness->sample);
  EXPECT_EQ(one.samples, three.samples);
  EXPECT_EQ(one.witness->u, three.witness->u);
}

TEST(ConeSample, PointsLieInThePositiveOrthant) {
  for (std::size_t i = 0; i < 4000; ++i) {
    const auto x = cone_sample(6, 77, i);
    EXPECT_EQ(cone_membership(x), 6);
  }
}

TEST(LogLog, PaperExampleIsCertified) {
  const auto r = loglog_concavifier_check(1, 1, 1, 1, 3, 4000, 1);
  EXPECT_EQ(r.verdict.status, VerdictStatus::CertifiedConcave);
  EXPECT_EQ(r.det_sign_mismatches, 0u);
  EXPECT_EQ(r.phi_nonpositive, 0u);
  EXPECT_EQ(r.samples, 4000u);
}

TEST(LogLog, AffineBranch) {
  const auto r = loglog_concavifier_check(2, 1.5, 0, 0.1, 5, 500, 1);
  EXPECT_EQ(r.verdict.status, VerdictStatus::CertifiedConcave);
  EXPECT_EQ(r.verdict.certificate.value_or(""), "affine");
}

TEST(LogLog, Preconditions) {
  EXPECT_THROW(loglog_concavifier_check(1, 1, 1, 0, 3), DomainError);
  EXPECT_THROW(loglog_concavifier_check(0, 1, 1, 5, 3), DomainError);
  EXPECT_THROW(loglog_concavifier_check(1, -1, 1, 1, 3), DomainError);
}

TEST(LogLog, PhiClosedForms) {
  // phi(a) = (q+1) n b^2 - q (n-1) a c, q = s + ln a.
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> u(0.1, 2);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 2 + trial % 7;
    const double a = u(rng), b = u(rng), c = u(rng), s = -std::log(a) + u(rng);
    const double q = s + std::log(a);
    const double want = (q + 1) * n * b * b - q * (n - 1) * a * c;
    EXPECT_NEAR(loglog_phi(a, a, b, c, s, n), want, 1e-12 * (1 + std::abs(want)));
  }
}

TEST(LogLog, NoConcavifierWithoutLinearTerm) {
  // b = 0: near the origin along I the function is ln(s + ln(a + c n(n-1)/2 z^2)),
  // convex in z.
  const auto r = loglog_concavifier_check(1, 0, 1, 1, 3, 2000, 1);
  EXPECT_LT(r.phi_floor, 0);
  ASSERT_EQ(r.verdict.status, VerdictStatus::Violated);
  const auto& w = *r.verdict.witness;
  const auto H = hessian_composed(Concavifier::loglog(1), CoeffVector({1, 0, 1}), w.x);
  EXPECT_GT(quad(H, w.u), 0);
  EXPECT_GT(r.phi_nonpositive, 0u);
}

TEST(LogLog, VerdictFollowsSignOfPhiAtTheFloor) {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(0, 1);
  int concave = 0, violated = 0;
  for (int trial = 0; trial < 150; ++trial) {
    const int n = 2 + trial % 6;
    const double a = 0.1 + 2 * u(rng), b = u(rng), c = 0.05 + u(rng);
    const double s = -std::log(a) + 0.05 + 3 * u(rng);
    const double phi = loglog_phi(a, a, b, c, s, n);
    // Stay clear of phi(a) = 0, where the positive direction is too shallow to sample.
    if (std::abs(phi) < 0.05 * (n * b * b + n * a * c)) continue;
    const auto r = loglog_concavifier_check(a, b, c, s, n, 1500, trial);
    if (phi > 0) {
      EXPECT_EQ(r.verdict.status, VerdictStatus::CertifiedConcave) << a << " " << b << " " << c << " " << s << " n=" << n;
      EXPECT_EQ(r.det_sign_mismatches, 0u);
      ++concave;
    } else {
      EXPECT_EQ(r.verdict.status, VerdictStatus::Violated) << a << " " << b << " " << c << " " << s << " n=" << n;
      ++violated;
    }
  }
  EXPECT_GT(concave, 10);
  EXPECT_GT(violated, 10);
}

TEST(LogLog, DiagonalLimitIsNegative) {
  std::mt19937_64 rng(19);
  std::uniform_real_distribution<double> u(0, 1);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 2 + trial % 6;
    const double a = 0.1 + u(rng), b = u(rng), c = 0.05 + u(rng), s = -std::log(a) + 0.1 + u(rng);
    const auto F = Concavifier::loglog(s);
    const CoeffVector coeffs({a, b, c});
    const auto z0 = diagonal_negativity_onset(F, coeffs, n);
    ASSERT_TRUE(z0.has_value());
    for (double z : {*z0, 2 * *z0, 1e3 * *z0}) {
      const auto H = hessian_composed(F, coeffs, ConePoint::diagonal(n, z));
      EXPECT_LT(Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(H).eigenvalues()(n - 1), 0);
    }
  }
}

TEST(Guard, Examples) {
  const std::vector<double> grid{0.5, 1, 2, 10, 1e3, 1e6};
  EXPECT_TRUE(bounded_concavifier_guard(Concavifier::power(-1.0), grid));
  EXPECT_FALSE(bounded_concavifier_guard(Concavifier::log(), grid));
  EXPECT_FALSE(bounded_concavifier_guard(Concavifier::loglog(1.0), grid));
  EXPECT_FALSE(bounded_concavifier_guard(Concavifier::power(0.5), grid));
  EXPECT_FALSE(bounded_concavifier_guard(Concavifier::iterlog(3, {2, 1, 0}), grid));
  EXPECT_THROW(bounded_concavifier_guard(Concavifier::loglog(0.0), {0.5}), DomainError);
}

TEST(LiLi, SqrtCaseAllPass) {
  const auto r = lili_hypotheses_report(Concavifier::power(0.5), CoeffVector({0, 1, 1}), 4, 1000, 3);
  EXPECT_TRUE(r.all_pass());
  EXPECT_EQ(r.checks.size(), 5u);
}

TEST(LiLi, LogLogWithUnitShift) {
  // s = 1 - ln a_0 makes F(a_0) = 0.
  const double a0 = 0.5, a1 = 2.0, a2 = 0.5;
  const auto r = lili_hypotheses_report(Concavifier::loglog(1 - std::log(a0)), CoeffVector({a0, a1, a2}), 4, 1000, 3);
  EXPECT_EQ(r["concavity"].outcome, CheckOutcome::Pass);
  EXPECT_EQ(r["boundary_vanishing"].outcome, CheckOutcome::Pass);
  EXPECT_EQ(r["divergence"].outcome, CheckOutcome::Pass);
}

TEST(LiLi, SquareOfSigma2FailsConcavity) {
  for (int n = 2; n <= 5; ++n) {
    const auto r = lili_hypotheses_report(Concavifier::power(2.0), CoeffVector({0, 0, 1}), n, 500, 3);
    EXPECT_EQ(r["concavity"].outcome, CheckOutcome::Fail);
  }
}

TEST(LiLi, BoundedConcavifierFailsDivergence) {
  const auto r = lili_hypotheses_report(Concavifier::power(-1.0), CoeffVector({0, 1}), 3, 200, 3);
  EXPECT_EQ(r["divergence"].outcome, CheckOutcome::Fail);
}

TEST(Conjecture, SingleSigmaK) {
  for (int k = 1; k <= 3; ++k) {
    std::vector<double> a(static_cast<std::size_t>(k + 1), 0.0);
    a.back() = 1.0;
    for (double alpha : {1.0 / k, 1.0 / k + 0.1}) {
      const auto r = conjecture_probe_diagonal(CoeffVector(a), Concavifier::power(alpha), 4, 1000, 5);
      EXPECT_TRUE(r.agree) << "k=" << k << " alpha=" << alpha;
      EXPECT_FALSE(r.counterexample_candidate);
    }
  }
}

TEST(Conjecture, AffineBothConcave) {
  const auto r = conjecture_probe_diagonal(CoeffVector({2, 3}), Concavifier::power(1.0), 5, 500, 5);
  EXPECT_TRUE(concave_status(r.diagonal));
  EXPECT_TRUE(concave_status(r.full));
}

}  // namespace
}  // namespace garding
