#pragma once

// Exact univariate polynomials over the rationals, with Sturm-sequence
// real-root counting and isolation. Used to decide real-rootedness of the
// diagonal restriction of f_a without any floating-point root finding in the
// decision path.

#include <gmpxx.h>

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "garding/errors.hpp"

namespace garding {

using Rational = mpq_class;

/// Exact conversion: every finite double is a dyadic rational.
inline Rational to_rational(double x) {
  if (!std::isfinite(x)) throw DomainError("non-finite value cannot be made rational");
  return Rational(x);
}

inline int sign_of(const Rational& q) { return sgn(q); }

class RealPolynomial {
 public:
  RealPolynomial() = default;

  /// Coefficients low degree first; trailing zeros are trimmed.
  explicit RealPolynomial(std::vector<Rational> coeffs) : coeffs_(std::move(coeffs)) { trim(); }

  static RealPolynomial from_doubles(std::span<const double> coeffs) {
    std::vector<Rational> q;
    q.reserve(coeffs.size());
    for (double c : coeffs) q.push_back(to_rational(c));
    return RealPolynomial(std::move(q));
  }

  static RealPolynomial constant(const Rational& c) { return RealPolynomial({c}); }

  /// Product of (X - r) over the given roots, times `lead`.
  static RealPolynomial from_roots(std::span<const Rational> roots, const Rational& lead = 1) {
    RealPolynomial p = constant(lead);
    for (const auto& r : roots) p = p * RealPolynomial({Rational(-r), Rational(1)});
    return p;
  }

  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  bool is_zero() const { return coeffs_.empty(); }
  const std::vector<Rational>& coeffs() const { return coeffs_; }

  Rational coeff(int k) const {
    if (k < 0 || k > degree()) return Rational(0);
    return coeffs_[static_cast<std::size_t>(k)];
  }

  const Rational& leading() const {
    if (is_zero()) throw DomainError("zero polynomial has no leading coefficient");
    return coeffs_.back();
  }

  std::vector<double> to_doubles() const {
    std::vector<double> out;
    out.reserve(coeffs_.size());
    for (const auto& c : coeffs_) out.push_back(c.get_d());
    return out;
  }

  Rational evaluate(const Rational& x) const {
    Rational acc = 0;
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * x + *it;
    return acc;
  }

  double operator()(double x) const {
    long double acc = 0.0L;
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it)
      acc = acc * x + static_cast<long double>(it->get_d());
    return static_cast<double>(acc);
  }

  int sign_at(const Rational& x) const { return sign_of(evaluate(x)); }

  /// Sign as x -> +inf (to_plus) or -inf.
  int sign_at_infinity(bool to_plus) const {
    if (is_zero()) return 0;
    int s = sign_of(leading());
    if (!to_plus && degree() % 2 == 1) s = -s;
    return s;
  }

  RealPolynomial derivative() const {
    if (degree() < 1) return {};
    std::vector<Rational> d(coeffs_.size() - 1);
    for (std::size_t k = 1; k < coeffs_.size(); ++k) d[k - 1] = coeffs_[k] * static_cast<long>(k);
    return RealPolynomial(std::move(d));
  }

  RealPolynomial monic() const {
    if (is_zero()) return {};
    std::vector<Rational> c = coeffs_;
    const Rational lead = c.back();
    for (auto& x : c) x /= lead;
    return RealPolynomial(std::move(c));
  }

  /// Divides by |leading coefficient|; preserves signs everywhere.
  RealPolynomial sign_normalized() const {
    if (is_zero()) return {};
    std::vector<Rational> c = coeffs_;
    const Rational lead = abs(c.back());
    for (auto& x : c) x /= lead;
    return RealPolynomial(std::move(c));
  }

  friend RealPolynomial operator+(const RealPolynomial& a, const RealPolynomial& b) {
    std::vector<Rational> c(std::max(a.coeffs_.size(), b.coeffs_.size()));
    for (std::size_t k = 0; k < c.size(); ++k) c[k] = a.coeff(static_cast<int>(k)) + b.coeff(static_cast<int>(k));
    return RealPolynomial(std::move(c));
  }

  friend RealPolynomial operator-(const RealPolynomial& a, const RealPolynomial& b) {
    std::vector<Rational> c(std::max(a.coeffs_.size(), b.coeffs_.size()));
    for (std::size_t k = 0; k < c.size(); ++k) c[k] = a.coeff(static_cast<int>(k)) - b.coeff(static_cast<int>(k));
    return RealPolynomial(std::move(c));
  }

  friend RealPolynomial operator*(const RealPolynomial& a, const RealPolynomial& b) {
    if (a.is_zero() || b.is_zero()) return {};
    std::vector<Rational> c(a.coeffs_.size() + b.coeffs_.size() - 1, Rational(0));
    for (std::size_t i = 0; i < a.coeffs_.size(); ++i)
      for (std::size_t j = 0; j < b.coeffs_.size(); ++j) c[i + j] += a.coeffs_[i] * b.coeffs_[j];
    return RealPolynomial(std::move(c));
  }

  friend RealPolynomial operator*(const Rational& s, const RealPolynomial& p) {
    std::vector<Rational> c = p.coeffs_;
    for (auto& x : c) x *= s;
    return RealPolynomial(std::move(c));
  }

  friend bool operator==(const RealPolynomial& a, const RealPolynomial& b) { return a.coeffs_ == b.coeffs_; }

  /// Euclidean division: returns (quotient, remainder).
  friend std::pair<RealPolynomial, RealPolynomial> divmod(const RealPolynomial& num, const RealPolynomial& den) {
    if (den.is_zero()) throw DomainError("polynomial division by zero");
    std::vector<Rational> r = num.coeffs_;
    const int dd = den.degree();
    if (num.degree() < dd) return {RealPolynomial{}, num};
    std::vector<Rational> q(static_cast<std::size_t>(num.degree() - dd + 1), Rational(0));
    const Rational& lead = den.coeffs_.back();
    for (int k = num.degree() - dd; k >= 0; --k) {
      const Rational factor = r[static_cast<std::size_t>(k + dd)] / lead;
      q[static_cast<std::size_t>(k)] = factor;
      if (factor == 0) continue;
      for (int j = 0; j <= dd; ++j) r[static_cast<std::size_t>(k + j)] -= factor * den.coeffs_[static_cast<std::size_t>(j)];
    }
    r.resize(static_cast<std::size_t>(dd));
    return {RealPolynomial(std::move(q)), RealPolynomial(std::move(r))};
  }

  std::string to_string() const {
    if (is_zero()) return "0";
    std::string s;
    for (int k = 0; k <= degree(); ++k) {
      const auto& c = coeffs_[static_cast<std::size_t>(k)];
      if (c == 0) continue;
      if (!s.empty()) s += " + ";
      s += c.get_str();
      if (k >= 1) s += "*X";
      if (k >= 2) s += "^" + std::to_string(k);
    }
    return s;
  }

 private:
  void trim() {
    while (!coeffs_.empty() && coeffs_.back() == 0) coeffs_.pop_back();
  }

  std::vector<Rational> coeffs_;
};

/// Monic greatest common divisor.
inline RealPolynomial gcd(RealPolynomial a, RealPolynomial b) {
  while (!b.is_zero()) {
    auto r = divmod(a, b).second;
    a = std::move(b);
    b = r.sign_normalized();
  }
  return a.monic();
}

/// Yun's square-free factorisation: p = lc * prod_j s_j^j with each s_j
/// square-free and pairwise coprime. Returns (s_j, j) for non-constant s_j.
inline std::vector<std::pair<RealPolynomial, int>> square_free_decomposition(const RealPolynomial& p) {
  if (p.is_zero()) throw DomainError("square-free decomposition of the zero polynomial");
  std::vector<std::pair<RealPolynomial, int>> out;
  if (p.degree() < 1) return out;
  const RealPolynomial dp = p.derivative();
  RealPolynomial a = gcd(p, dp);
  RealPolynomial b = divmod(p, a).first;
  RealPolynomial c = divmod(dp, a).first;
  RealPolynomial d = c - b.derivative();
  int j = 1;
  while (b.degree() >= 1) {
    RealPolynomial g = gcd(b, d);
    if (g.degree() >= 1) out.emplace_back(g.monic(), j);
    b = divmod(b, g).first;
    c = divmod(d, g).first;
    d = c - b.derivative();
    ++j;
  }
  return out;
}

/// Canonical Sturm sequence p0 = p, p1 = p', p_{k+1} = -rem(p_{k-1}, p_k).
inline std::vector<RealPolynomial> sturm_sequence(const RealPolynomial& p) {
  if (p.is_zero()) throw DomainError("Sturm sequence of the zero polynomial");
  std::vector<RealPolynomial> seq{p.sign_normalized()};
  RealPolynomial d = p.derivative();
  if (d.is_zero()) return seq;
  seq.push_back(d.sign_normalized());
  while (true) {
    RealPolynomial r = divmod(seq[seq.size() - 2], seq.back()).second;
    if (r.is_zero()) break;
    seq.push_back((Rational(-1) * r).sign_normalized());
  }
  return seq;
}

namespace detail {

inline int count_variations(const std::vector<int>& signs) {
  int variations = 0;
  int last = 0;
  for (int s : signs) {
    if (s == 0) continue;
    if (last != 0 && s != last) ++variations;
    last = s;
  }
  return variations;
}

inline int variations_at(const std::vector<RealPolynomial>& seq, const Rational& x) {
  std::vector<int> signs;
  signs.reserve(seq.size());
  for (const auto& q : seq) signs.push_back(q.sign_at(x));
  return count_variations(signs);
}

inline int variations_at_infinity(const std::vector<RealPolynomial>& seq, bool to_plus) {
  std::vector<int> signs;
  signs.reserve(seq.size());
  for (const auto& q : seq) signs.push_back(q.sign_at_infinity(to_plus));
  return count_variations(signs);
}

/// 1 + max |a_k / a_d|: every root lies in (-B, B).
inline Rational cauchy_bound(const RealPolynomial& p) {
  Rational m = 0;
  const Rational lead = abs(p.leading());
  for (int k = 0; k < p.degree(); ++k) m = std::max(m, Rational(abs(p.coeff(k)) / lead));
  return m + 1;
}

}  // namespace detail

/// Number of distinct real roots.
inline int count_distinct_real_roots(const RealPolynomial& p) {
  const auto seq = sturm_sequence(p);
  return detail::variations_at_infinity(seq, false) - detail::variations_at_infinity(seq, true);
}

/// Number of distinct real roots in (lo, hi]; lo < hi.
inline int count_distinct_real_roots(const RealPolynomial& p, const Rational& lo, const Rational& hi) {
  const auto seq = sturm_sequence(p);
  return detail::variations_at(seq, lo) - detail::variations_at(seq, hi);
}

/// Real roots counted with multiplicity.
inline int count_real_roots_with_multiplicity(const RealPolynomial& p) {
  int total = 0;
  for (const auto& [factor, mult] : square_free_decomposition(p)) total += mult * count_distinct_real_roots(factor);
  return total;
}

struct IsolatingInterval {
  Rational lo;   // exclusive unless lo == hi (exact rational root)
  Rational hi;
  int multiplicity = 1;

  bool exact() const { return lo == hi; }
};

namespace detail {

inline void isolate_square_free(const RealPolynomial& s, const std::vector<RealPolynomial>& seq, Rational lo, Rational hi,
                                int multiplicity, std::vector<IsolatingInterval>& out) {
  const int count = variations_at(seq, lo) - variations_at(seq, hi);
  if (count == 0) return;
  if (count == 1) {
    out.push_back({lo, hi, multiplicity});
    return;
  }
  // Split off-centre when the midpoint is itself a root.
  Rational mid = (lo + hi) / 2;
  for (Rational offset = (hi - lo) / 8; s.sign_at(mid) == 0; offset /= 2) mid = (lo + hi) / 2 + offset;
  isolate_square_free(s, seq, lo, mid, multiplicity, out);
  isolate_square_free(s, seq, mid, hi, multiplicity, out);
}

}  // namespace detail

/// Disjoint isolating intervals for every real root, ascending, each tagged
/// with its multiplicity.
inline std::vector<IsolatingInterval> isolate_real_roots(const RealPolynomial& p) {
  std::vector<IsolatingInterval> out;
  for (const auto& [factor, mult] : square_free_decomposition(p)) {
    const auto seq = sturm_sequence(factor);
    const Rational bound = detail::cauchy_bound(factor);
    detail::isolate_square_free(factor, seq, Rational(-bound), bound, mult, out);
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.hi < b.hi; });
  return out;
}

/// Bisects an isolating interval of a square-free factor down to double
/// resolution. `p` may be the original polynomial: sign changes are tested on
/// its square-free part.
inline double refine_root(const RealPolynomial& p, const IsolatingInterval& iv) {
  if (iv.exact()) return iv.lo.get_d();
  RealPolynomial s = p;
  {
    RealPolynomial g = gcd(p, p.derivative());
    if (g.degree() >= 1) s = divmod(p, g).first;
  }
  Rational lo = iv.lo, hi = iv.hi;
  int s_hi = s.sign_at(hi);
  if (s_hi == 0) return hi.get_d();
  for (int it = 0; it < 200; ++it) {
    const double dlo = lo.get_d(), dhi = hi.get_d();
    if (dlo == dhi || std::nextafter(dlo, dhi) == dhi) break;
    Rational mid = (lo < 0 && hi > 0) ? Rational(0) : Rational((lo + hi) / 2);
    const int sm = s.sign_at(mid);
    if (sm == 0) return mid.get_d();
    if (sm == s_hi) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return Rational((lo + hi) / 2).get_d();
}

/// Floating-point complex roots from the companion matrix, polished by a few
/// Newton steps in extended precision. Cosmetic: never used to decide
/// real-rootedness.
inline std::vector<std::complex<double>> complex_roots(const RealPolynomial& p) {
  if (p.is_zero()) throw DomainError("roots of the zero polynomial");
  const int d = p.degree();
  std::vector<std::complex<double>> roots;
  if (d < 1) return roots;
  const RealPolynomial m = p.monic();
  Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(d, d);
  for (int i = 1; i < d; ++i) companion(i, i - 1) = 1.0;
  for (int i = 0; i < d; ++i) companion(i, d - 1) = -m.coeff(i).get_d();
  Eigen::EigenSolver<Eigen::MatrixXd> es(companion, false);
  const auto c = m.to_doubles();
  for (int i = 0; i < d; ++i) {
    std::complex<long double> z(es.eigenvalues()[i].real(), es.eigenvalues()[i].imag());
    for (int it = 0; it < 8; ++it) {
      std::complex<long double> f = 0, df = 0;
      for (int k = d; k >= 0; --k) {
        df = df * z + f;
        f = f * z + static_cast<long double>(c[static_cast<std::size_t>(k)]);
      }
      if (std::abs(df) == 0.0L) break;
      const auto step = f / df;
      z -= step;
      if (std::abs(step) <= 1e-19L * (1.0L + std::abs(z))) break;
    }
    roots.emplace_back(static_cast<double>(z.real()), static_cast<double>(z.imag()));
  }
  return roots;
}

}  // namespace garding
