#pragma once

// Elementary symmetric polynomials sigma_k on R^n, their linear combinations
// f_a = a_0 + a_1 sigma_1 + ... + a_p sigma_p, exact first and second
// derivatives, and Garding-cone membership.

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <span>
#include <string>
#include <vector>

#include "garding/errors.hpp"
#include "garding/polynomial.hpp"

namespace garding {

/// sigma_0..sigma_max_k of x by the product recurrence for prod(1 + t x_i);
/// O(n * max_k). Entries with k > x.size() are zero. `skip_a`/`skip_b` drop
/// coordinates, which gives the partial derivatives of sigma_k.
template <class T>
std::vector<T> elementary_symmetric(std::span<const T> x, int max_k, int skip_a = -1, int skip_b = -1) {
  std::vector<T> e(static_cast<std::size_t>(std::max(max_k, 0) + 1), T(0));
  e[0] = T(1);
  int used = 0;
  for (int i = 0; i < static_cast<int>(x.size()); ++i) {
    if (i == skip_a || i == skip_b) continue;
    ++used;
    const T& xi = x[static_cast<std::size_t>(i)];
    for (int k = std::min(used, max_k); k >= 1; --k) e[static_cast<std::size_t>(k)] += xi * e[static_cast<std::size_t>(k - 1)];
  }
  return e;
}

inline double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  double b = 1.0;
  for (int i = 1; i <= k; ++i) b = b * (n - k + i) / i;
  return std::round(b);
}

inline Rational binomial_exact(int n, int k) {
  if (k < 0 || k > n) return Rational(0);
  mpz_class b;
  mpz_bin_uiui(b.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
  return Rational(b);
}

/// An eigenvalue list lambda in R^n with its elementary symmetric values.
class ConePoint {
 public:
  explicit ConePoint(std::vector<double> lambda) : lambda_(std::move(lambda)) {
    if (lambda_.empty()) throw DomainError("ConePoint needs n >= 1");
    for (double v : lambda_)
      if (!std::isfinite(v)) throw DomainError("ConePoint entries must be finite");
    sigmas_ = elementary_symmetric<double>(lambda_, n());
  }

  static ConePoint diagonal(int n, double z) { return ConePoint(std::vector<double>(static_cast<std::size_t>(n), z)); }

  int n() const { return static_cast<int>(lambda_.size()); }
  std::span<const double> lambda() const { return lambda_; }
  double operator[](int i) const { return lambda_[static_cast<std::size_t>(i)]; }
  const std::vector<double>& sigmas() const { return sigmas_; }

  double sigma(int k) const {
    if (k < 0 || k > n()) throw DomainError("sigma_k needs 0 <= k <= n (k=" + std::to_string(k) + ")");
    return sigmas_[static_cast<std::size_t>(k)];
  }

  Eigen::VectorXd vector() const { return Eigen::Map<const Eigen::VectorXd>(lambda_.data(), n()); }

 private:
  std::vector<double> lambda_;
  std::vector<double> sigmas_;
};

/// (a_0, ..., a_p). A zero top coefficient is allowed but flagged
/// `degenerate()`; operations dividing by a_p reject it.
class CoeffVector {
 public:
  CoeffVector(std::initializer_list<double> a) : CoeffVector(std::vector<double>(a)) {}
  explicit CoeffVector(std::vector<double> a) : a_(std::move(a)) {
    if (a_.empty()) throw DomainError("CoeffVector needs at least a_0");
    for (double v : a_)
      if (!std::isfinite(v)) throw DomainError("coefficients must be finite");
  }

  int p() const { return static_cast<int>(a_.size()) - 1; }
  double operator[](int k) const { return a_[static_cast<std::size_t>(k)]; }
  std::span<const double> values() const { return a_; }
  bool degenerate() const { return a_.back() == 0.0; }

  bool non_negative() const {
    return std::all_of(a_.begin(), a_.end(), [](double v) { return v >= 0.0; });
  }

  void require_non_negative(const char* op) const {
    if (!non_negative()) throw DomainError(std::string(op) + ": coefficients must be non-negative");
  }

  void require_top_nonzero(const char* op) const {
    if (degenerate()) throw DegenerateDegreeError(std::string(op) + ": top coefficient a_p is zero");
  }

  friend bool operator==(const CoeffVector&, const CoeffVector&) = default;

 private:
  std::vector<double> a_;
};

/// Gamma_k for 1 <= k <= n, or the open diagonal half-axis.
struct ConeLabel {
  int k = 0;
  bool diagonal = false;

  static ConeLabel gamma(int k, int n) {
    if (k < 1 || k > n) throw DomainError("cone label needs 1 <= k <= n");
    return {k, false};
  }
  static ConeLabel diagonal_axis() { return {0, true}; }
};

namespace detail {

inline void require_degree_fits(const CoeffVector& coeffs, int n, const char* op) {
  if (coeffs.p() > n)
    throw DomainError(std::string(op) + ": degree p=" + std::to_string(coeffs.p()) + " exceeds n=" + std::to_string(n));
}

}  // namespace detail

inline double sigma(int k, const ConePoint& x) { return x.sigma(k); }

inline double f_a(const CoeffVector& coeffs, const ConePoint& x) {
  detail::require_degree_fits(coeffs, x.n(), "f_a");
  double acc = 0.0;
  for (int k = 0; k <= coeffs.p(); ++k) acc += coeffs[k] * x.sigma(k);
  return acc;
}

/// f_a(X, ..., X) = sum a_k C(n,k) X^k, exact.
inline RealPolynomial diagonal_restriction(const CoeffVector& coeffs, int n) {
  if (n < 1) throw DomainError("diagonal_restriction needs n >= 1");
  detail::require_degree_fits(coeffs, n, "diagonal_restriction");
  std::vector<Rational> c;
  for (int k = 0; k <= coeffs.p(); ++k) c.push_back(to_rational(coeffs[k]) * binomial_exact(n, k));
  return RealPolynomial(std::move(c));
}

/// Value, gradient and Hessian of f_a in any ordered field T; uses
/// d sigma_k / dx_i = sigma_{k-1}(x without x_i) and the analogous second
/// derivative with two coordinates removed (zero on the diagonal).
template <class T>
struct FaDerivatives {
  T value;
  std::vector<T> gradient;  // n
  std::vector<T> hessian;   // n*n row-major
};

template <class T>
FaDerivatives<T> fa_derivatives(std::span<const T> a, std::span<const T> x, bool want_hessian = true) {
  const int n = static_cast<int>(x.size());
  const int p = static_cast<int>(a.size()) - 1;
  FaDerivatives<T> out{T(0), std::vector<T>(static_cast<std::size_t>(n), T(0)), {}};
  const auto s = elementary_symmetric<T>(x, p);
  for (int k = 0; k <= p; ++k) out.value += a[static_cast<std::size_t>(k)] * s[static_cast<std::size_t>(k)];
  if (p >= 1) {
    for (int i = 0; i < n; ++i) {
      const auto si = elementary_symmetric<T>(x, p - 1, i);
      T g(0);
      for (int k = 1; k <= p; ++k) g += a[static_cast<std::size_t>(k)] * si[static_cast<std::size_t>(k - 1)];
      out.gradient[static_cast<std::size_t>(i)] = g;
    }
  }
  if (want_hessian) {
    out.hessian.assign(static_cast<std::size_t>(n * n), T(0));
    if (p >= 2) {
      for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
          const auto sij = elementary_symmetric<T>(x, p - 2, i, j);
          T h(0);
          for (int k = 2; k <= p; ++k) h += a[static_cast<std::size_t>(k)] * sij[static_cast<std::size_t>(k - 2)];
          out.hessian[static_cast<std::size_t>(i * n + j)] = h;
          out.hessian[static_cast<std::size_t>(j * n + i)] = h;
        }
    }
  }
  return out;
}

inline Eigen::VectorXd gradient_f_a(const CoeffVector& coeffs, const ConePoint& x) {
  detail::require_degree_fits(coeffs, x.n(), "gradient_f_a");
  const auto d = fa_derivatives<double>(coeffs.values(), x.lambda(), false);
  return Eigen::Map<const Eigen::VectorXd>(d.gradient.data(), x.n());
}

inline Eigen::MatrixXd hessian_f_a(const CoeffVector& coeffs, const ConePoint& x) {
  detail::require_degree_fits(coeffs, x.n(), "hessian_f_a");
  const auto d = fa_derivatives<double>(coeffs.values(), x.lambda(), true);
  return Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(d.hessian.data(),
                                                                                                   x.n(), x.n());
}

/// Largest k with sigma_j(x) > tau_cone for all 1 <= j <= k; 0 when
/// sigma_1 <= tau_cone. The cones are open, so the default tau_cone is 0.
inline int cone_membership(const ConePoint& x, double tau_cone = 0.0) {
  int k = 0;
  while (k < x.n() && x.sigma(k + 1) > tau_cone) ++k;
  return k;
}

inline bool in_cone(const ConePoint& x, ConeLabel label, double tau_cone = 0.0) {
  if (label.diagonal) {
    const double z = x[0];
    return z > tau_cone && std::all_of(x.lambda().begin(), x.lambda().end(), [z](double v) { return v == z; });
  }
  return cone_membership(x, tau_cone) >= label.k;
}

}  // namespace garding
