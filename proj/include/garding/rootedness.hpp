#pragma once

// Coefficient-level concavity certificates for f_a on the positive cone:
// real-rootedness of the diagonal restriction (Walsh), Kurtz's log-concavity
// test, the exact p = 2 criterion, a conservative real-rooted-tail search,
// the alpha_k <-> a_k rescaling, and the concircular factorisation.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "garding/errors.hpp"
#include "garding/polynomial.hpp"
#include "garding/symmpoly.hpp"

namespace garding {

inline int lovelock_top_degree(int n) { return (n + 1) / 2; }

/// True iff every complex root is real. Exact: sums Sturm counts of the
/// square-free factors weighted by multiplicity and compares with the degree.
inline bool is_real_rooted(const RealPolynomial& q) {
  if (q.is_zero()) throw DomainError("is_real_rooted: zero polynomial");
  return count_real_roots_with_multiplicity(q) == q.degree();
}

/// 4 a_{k-1} a_{k+1} < a_k^2 for 1 <= k <= p-1, in exact arithmetic.
inline bool kurtz_certificate(const CoeffVector& coeffs) {
  coeffs.require_non_negative("kurtz_certificate");
  for (int k = 1; k < coeffs.p(); ++k) {
    const Rational lhs = 4 * to_rational(coeffs[k - 1]) * to_rational(coeffs[k + 1]);
    const Rational ak = to_rational(coeffs[k]);
    if (!(lhs < ak * ak)) return false;
  }
  return true;
}

/// Real-rootedness of sum a_k C(n,k) X^k. The identically zero vector is
/// accepted (f_a = 0 is trivially concave).
inline bool walsh_certificate(const CoeffVector& coeffs, int n) {
  coeffs.require_non_negative("walsh_certificate");
  const RealPolynomial fbar = diagonal_restriction(coeffs, n);
  if (fbar.is_zero()) return true;
  return is_real_rooted(fbar);
}

/// n a1^2 - 2(n-1) a0 a2 >= 0, exact.
inline bool p2_criterion(double a0, double a1, double a2, int n) {
  if (a0 < 0 || a1 < 0 || a2 < 0) throw DomainError("p2_criterion: coefficients must be non-negative");
  if (n < 1) throw DomainError("p2_criterion: n must be positive");
  const Rational q0 = to_rational(a0), q1 = to_rational(a1), q2 = to_rational(a2);
  return n * q1 * q1 - 2 * (n - 1) * q0 * q2 >= 0;
}

struct TailCertificate {
  bool certified = false;
  int padding = 0;                   // m: a_k multiplies X^{m+k}
  RealPolynomial padding_factor;     // D, degree m, with Q D the witness
  std::optional<RealPolynomial> witness;  // real-rooted, top coefficients a_0..a_p
};

namespace detail {

/// Newton's inequalities for the known window w_m..w_{m+p} of a degree-d
/// real-rooted polynomial: (w_j/C(d,j))^2 >= w_{j-1}/C(d,j-1) * w_{j+1}/C(d,j+1).
inline bool padded_newton_inequalities(const std::vector<Rational>& a, int m) {
  const int p = static_cast<int>(a.size()) - 1;
  const int d = m + p;
  for (int k = 1; k < p; ++k) {
    const int j = m + k;
    const Rational mid = a[static_cast<std::size_t>(k)] / binomial_exact(d, j);
    const Rational lo = a[static_cast<std::size_t>(k - 1)] / binomial_exact(d, j - 1);
    const Rational hi = a[static_cast<std::size_t>(k + 1)] / binomial_exact(d, j + 1);
    if (mid * mid < lo * hi) return false;
  }
  return true;
}

/// Q of degree p with Q * D having top coefficients a, for an arbitrary
/// monic padding D of degree m.
inline RealPolynomial tail_cofactor(const std::vector<Rational>& a, const RealPolynomial& pad) {
  const int p = static_cast<int>(a.size()) - 1;
  const int m = pad.degree();
  std::vector<Rational> q(static_cast<std::size_t>(p + 1), Rational(0));
  for (int j = 0; j <= p; ++j) {
    Rational acc = a[static_cast<std::size_t>(p - j)];
    for (int i = 1; i <= std::min(j, m); ++i) acc -= q[static_cast<std::size_t>(p - j + i)] * pad.coeff(m - i);
    q[static_cast<std::size_t>(p - j)] = acc;
  }
  return RealPolynomial(std::move(q));
}

/// Positive r_1..r_d with e_k(r) = b_k for k = 1..p, by minimum-norm Newton
/// steps in log coordinates. Empty on failure.
inline std::vector<double> fit_positive_roots(const std::vector<double>& b, int d, std::uint64_t seed) {
  const int p = static_cast<int>(b.size());
  std::uint64_t state = seed;
  auto uniform = [&state] {
    state += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    z ^= z >> 31;
    return static_cast<double>(z >> 11) * 0x1.0p-53;
  };
  Eigen::VectorXd y(d);
  const double centre = std::log(b[0] / d);
  for (int i = 0; i < d; ++i) y(i) = centre + 2.0 * (uniform() - 0.5);

  auto residual = [&](const Eigen::VectorXd& yy) {
    std::vector<double> r(static_cast<std::size_t>(d));
    for (int i = 0; i < d; ++i) r[static_cast<std::size_t>(i)] = std::exp(yy(i));
    const auto e = elementary_symmetric<double>(r, p);
    Eigen::VectorXd f(p);
    for (int k = 1; k <= p; ++k) f(k - 1) = e[static_cast<std::size_t>(k)] / b[static_cast<std::size_t>(k - 1)] - 1.0;
    return f;
  };

  Eigen::VectorXd f = residual(y);
  for (int it = 0; it < 200 && f.norm() > 1e-14; ++it) {
    std::vector<double> r(static_cast<std::size_t>(d));
    for (int i = 0; i < d; ++i) r[static_cast<std::size_t>(i)] = std::exp(y(i));
    Eigen::MatrixXd J(p, d);
    for (int i = 0; i < d; ++i) {
      const auto ei = elementary_symmetric<double>(r, p - 1, i);
      for (int k = 1; k <= p; ++k)
        J(k - 1, i) = r[static_cast<std::size_t>(i)] * ei[static_cast<std::size_t>(k - 1)] / b[static_cast<std::size_t>(k - 1)];
    }
    const Eigen::VectorXd step = J.completeOrthogonalDecomposition().solve(-f);
    double lambda = 1.0;
    bool moved = false;
    for (int half = 0; half < 30; ++half, lambda /= 2) {
      const Eigen::VectorXd trial = y + lambda * step;
      const Eigen::VectorXd ft = residual(trial);
      if (ft.allFinite() && ft.norm() < f.norm()) {
        y = trial;
        f = ft;
        moved = true;
        break;
      }
    }
    if (!moved) break;
  }
  if (!(f.norm() <= 1e-11)) return {};
  std::vector<double> roots(static_cast<std::size_t>(d));
  for (int i = 0; i < d; ++i) roots[static_cast<std::size_t>(i)] = std::exp(y(i));
  std::sort(roots.begin(), roots.end());
  return roots;
}

}  // namespace detail

/// Searches padding m <= 4p for a real-rooted witness Q(X) D(X) whose top
/// p+1 coefficients are exactly a_0..a_p, D being a product of m linear
/// factors with positive rational roots. Padding is tried first as a single
/// repeated root (X+t)^m, then from a numerical fit of positive roots with
/// the prescribed top coefficients. Sound but incomplete: `certified` is only
/// set with a witness verified by is_real_rooted.
inline TailCertificate real_rooted_tail_search(const CoeffVector& coeffs) {
  coeffs.require_non_negative("real_rooted_tail_certificate");
  if (!(coeffs[coeffs.p()] > 0)) throw DomainError("real_rooted_tail_certificate: a_p must be positive");
  const int p = coeffs.p();
  std::vector<Rational> a;
  for (int k = 0; k <= p; ++k) a.push_back(to_rational(coeffs[k]));
  const RealPolynomial tail(a);

  TailCertificate cert;
  if (tail.degree() < 1 || is_real_rooted(tail)) {
    cert.certified = true;
    cert.witness = tail;
    return cert;
  }
  // Witness roots are negative, so every coefficient below a_p is positive.
  for (int k = 0; k < p; ++k)
    if (!(a[static_cast<std::size_t>(k)] > 0)) return cert;

  auto accept = [&](const RealPolynomial& pad, int m) {
    const RealPolynomial q = detail::tail_cofactor(a, pad);
    if (q.degree() != p) return false;
    for (const auto& c : q.coeffs())
      if (c < 0) return false;
    if (!is_real_rooted(q)) return false;
    RealPolynomial w = q * pad;
    if (!is_real_rooted(w)) return false;
    cert.certified = true;
    cert.padding = m;
    cert.padding_factor = pad;
    cert.witness = std::move(w);
    return true;
  };

  const int max_padding = 4 * p;
  const Rational e1 = a[static_cast<std::size_t>(p - 1)] / a[static_cast<std::size_t>(p)];
  std::vector<double> b;
  for (int k = 1; k <= p; ++k) b.push_back(Rational(a[static_cast<std::size_t>(p - k)] / a[static_cast<std::size_t>(p)]).get_d());

  for (int m = 1; m <= max_padding; ++m) {
    if (!detail::padded_newton_inequalities(a, m)) continue;
    const Rational t_max = e1 / m;
    std::vector<Rational> shifts;
    for (int j = 1; j <= 64; ++j) shifts.push_back(t_max * Rational(j, 64));
    for (int j = 1; j <= 12; ++j) shifts.push_back(t_max / Rational(mpz_class(1) << (6 + j)));
    for (const auto& t : shifts) {
      RealPolynomial pad = RealPolynomial::constant(Rational(1));
      for (int i = 0; i < m; ++i) pad = pad * RealPolynomial({t, Rational(1)});
      if (accept(pad, m)) return cert;
    }

    const int d = m + p;
    for (std::uint64_t restart = 0; restart < 8; ++restart) {
      const auto r = detail::fit_positive_roots(b, d, 0x5eed0000ULL + 131 * static_cast<std::uint64_t>(m) + restart);
      if (r.empty()) continue;
      // Keep p well separated roots for the cofactor and pad with the rest.
      std::vector<bool> in_q(static_cast<std::size_t>(d), false);
      for (int j = 0; j < p; ++j) in_q[static_cast<std::size_t>((j * (d - 1)) / std::max(p - 1, 1))] = true;
      RealPolynomial pad = RealPolynomial::constant(Rational(1));
      for (int i = 0; i < d; ++i)
        if (!in_q[static_cast<std::size_t>(i)]) pad = pad * RealPolynomial({to_rational(r[static_cast<std::size_t>(i)]), Rational(1)});
      if (pad.degree() == m && accept(pad, m)) return cert;
    }
  }
  return cert;
}

inline bool real_rooted_tail_certificate(const CoeffVector& coeffs) { return real_rooted_tail_search(coeffs).certified; }

/// Physical Lovelock couplings alpha_k in dimension n.
class LovelockCoeffs {
 public:
  LovelockCoeffs(int n, std::vector<double> alpha, bool generic = false) : n_(n), alpha_(std::move(alpha)), generic_(generic) {
    if (n_ < 1) throw DomainError("LovelockCoeffs needs n >= 1");
    if (alpha_.empty()) throw DomainError("LovelockCoeffs needs alpha_0");
    if (!generic_ && p() > lovelock_top_degree(n_))
      throw DomainError("LovelockCoeffs: p exceeds floor((n+1)/2); construct with generic=true to relax");
  }

  int n() const { return n_; }
  int p() const { return static_cast<int>(alpha_.size()) - 1; }
  bool generic() const { return generic_; }
  double operator[](int k) const { return alpha_[static_cast<std::size_t>(k)]; }
  std::span<const double> values() const { return alpha_; }

 private:
  int n_;
  std::vector<double> alpha_;
  bool generic_;
};

/// 2^k k! (n-k)! / (n-2k)!, the factor relating alpha_k to a_k (and the
/// Lovelock product R_k to sigma_k of the Schouten eigenvalues).
inline double lovelock_sigma_factor(int n, int k) {
  if (k < 0) throw DomainError("lovelock factor: k must be non-negative");
  if (n - 2 * k < 0)
    throw DomainError("lovelock factor undefined for n - 2k < 0 (n=" + std::to_string(n) + ", k=" + std::to_string(k) + ")");
  double f = 1.0;
  for (int i = 0; i < k; ++i) f *= 2.0 * (i + 1);  // 2^k k!
  for (int i = n - 2 * k + 1; i <= n - k; ++i) f *= i;
  return f;
}

inline CoeffVector alpha_to_a(const LovelockCoeffs& lc) {
  std::vector<double> a;
  for (int k = 0; k <= lc.p(); ++k) a.push_back(lc[k] * lovelock_sigma_factor(lc.n(), k));
  return CoeffVector(std::move(a));
}

inline LovelockCoeffs a_to_alpha(const CoeffVector& coeffs, int n, bool generic = true) {
  std::vector<double> alpha;
  for (int k = 0; k <= coeffs.p(); ++k) alpha.push_back(coeffs[k] / lovelock_sigma_factor(n, k));
  return LovelockCoeffs(n, std::move(alpha), generic);
}

struct ConcircularFactorization {
  std::optional<double> scale;          // a_p (n-2p)! / (2^p p! (n-p)!), defined when 2p <= n
  std::vector<std::complex<double>> nu;  // nu_k = 2 mu_k, where fbar = a_p C(n,p) prod (X + mu_k)
  bool all_real = false;
};

/// Roots of the diagonal restriction, doubled. Real roots come from exact
/// isolation with multiplicity; the remaining complex pairs from the
/// companion matrix.
inline ConcircularFactorization concircular_factorize(const CoeffVector& coeffs, int n) {
  coeffs.require_top_nonzero("concircular_factorize");
  const int p = coeffs.p();
  const RealPolynomial fbar = diagonal_restriction(coeffs, n);
  ConcircularFactorization out;
  out.all_real = is_real_rooted(fbar);

  std::vector<std::complex<double>> roots;
  for (const auto& iv : isolate_real_roots(fbar)) {
    const double r = refine_root(fbar, iv);
    for (int m = 0; m < iv.multiplicity; ++m) roots.emplace_back(r, 0.0);
  }
  if (!out.all_real) {
    auto approx = complex_roots(fbar);
    std::sort(approx.begin(), approx.end(), [](auto x, auto y) { return std::abs(x.imag()) < std::abs(y.imag()); });
    for (std::size_t i = roots.size(); i < approx.size(); ++i) roots.push_back(approx[i]);
  }
  for (const auto& r : roots) out.nu.push_back(-2.0 * r);
  std::sort(out.nu.begin(), out.nu.end(), [](auto x, auto y) {
    if (x.real() != y.real()) return x.real() < y.real();
    return x.imag() < y.imag();
  });

  if (2 * p <= n) {
    double s = coeffs[p];
    for (int i = 1; i <= p; ++i) s /= 2.0 * i;             // 2^p p!
    for (int i = n - 2 * p + 1; i <= n - p; ++i) s /= i;   // (n-p)!/(n-2p)!
    out.scale = s;
  }
  return out;
}

}  // namespace garding
