#pragma once

// Algebraic curvature tensors in mixed (2,2) position on an orthonormal
// frame: generalised Kronecker contractions (Lovelock products), the
// Schouten tensor, the locally conformally flat Riemann tensor built from a
// Schouten matrix, and the concircular product expansion.

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "garding/errors.hpp"
#include "garding/rootedness.hpp"
#include "garding/symmpoly.hpp"

namespace garding {

/// R^{ab}_{cd}, stored at ((a n + b) n + c) n + d.
class RiemannTensor {
 public:
  explicit RiemannTensor(int n) : n_(n) {
    if (n < 1) throw DomainError("RiemannTensor needs n >= 1");
    comp_.assign(static_cast<std::size_t>(n) * n * n * n, 0.0);
  }

  /// Validates R^{ab}_{cd} = -R^{ba}_{cd} = -R^{ab}_{dc} to 1e-12 relative.
  RiemannTensor(int n, std::vector<double> comp) : n_(n), comp_(std::move(comp)) {
    if (n < 1) throw DomainError("RiemannTensor needs n >= 1");
    if (comp_.size() != static_cast<std::size_t>(n) * n * n * n) throw DomainError("RiemannTensor needs n^4 components");
    double scale = 0;
    for (double v : comp_) {
      if (!std::isfinite(v)) throw DomainError("RiemannTensor components must be finite");
      scale = std::max(scale, std::abs(v));
    }
    const double tol = 1e-12 * std::max(scale, 1.0);
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        for (int c = 0; c < n; ++c)
          for (int d = 0; d < n; ++d)
            if (std::abs((*this)(a, b, c, d) + (*this)(b, a, c, d)) > tol || std::abs((*this)(a, b, c, d) + (*this)(a, b, d, c)) > tol)
              throw DomainError("RiemannTensor input is not antisymmetric in its index pairs");
  }

  /// delta^{ab}_{cd} = delta^a_c delta^b_d - delta^a_d delta^b_c.
  static RiemannTensor pair_delta(int n) {
    RiemannTensor r(n);
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        if (a != b) {
          r.at(a, b, a, b) = 1.0;
          r.at(a, b, b, a) = -1.0;
        }
    return r;
  }

  /// kappa delta^{ab}_{cd}: constant sectional curvature kappa.
  static RiemannTensor constant_curvature(int n, double kappa) { return kappa * pair_delta(n); }

  /// (h o g)^{ab}_{cd} = h^a_c g^b_d + h^b_d g^a_c - h^a_d g^b_c - h^b_c g^a_d.
  static RiemannTensor kulkarni_nomizu(const Eigen::MatrixXd& h, const Eigen::MatrixXd& g) {
    const int n = static_cast<int>(h.rows());
    if (h.cols() != n || g.rows() != n || g.cols() != n) throw DomainError("Kulkarni-Nomizu product needs two n x n matrices");
    RiemannTensor r(n);
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        for (int c = 0; c < n; ++c)
          for (int d = 0; d < n; ++d)
            r.at(a, b, c, d) = h(a, c) * g(b, d) + h(b, d) * g(a, c) - h(a, d) * g(b, c) - h(b, c) * g(a, d);
    return r;
  }

  int n() const { return n_; }
  double operator()(int a, int b, int c, int d) const { return comp_[index(a, b, c, d)]; }
  double& at(int a, int b, int c, int d) { return comp_[index(a, b, c, d)]; }
  const std::vector<double>& components() const { return comp_; }

  /// R^a_c = R^{ab}_{cb}.
  Eigen::MatrixXd ricci() const {
    Eigen::MatrixXd ric = Eigen::MatrixXd::Zero(n_, n_);
    for (int a = 0; a < n_; ++a)
      for (int c = 0; c < n_; ++c)
        for (int b = 0; b < n_; ++b) ric(a, c) += (*this)(a, b, c, b);
    return ric;
  }

  double scalar() const { return ricci().trace(); }

  /// R_{abcd} = R_{cdab} with the identity metric.
  bool pair_symmetric(double tol = 1e-12) const {
    for (int a = 0; a < n_; ++a)
      for (int b = 0; b < n_; ++b)
        for (int c = 0; c < n_; ++c)
          for (int d = 0; d < n_; ++d)
            if (std::abs((*this)(a, b, c, d) - (*this)(c, d, a, b)) > tol) return false;
    return true;
  }

  friend RiemannTensor operator+(RiemannTensor x, const RiemannTensor& y) {
    if (x.n_ != y.n_) throw DomainError("RiemannTensor dimensions differ");
    for (std::size_t i = 0; i < x.comp_.size(); ++i) x.comp_[i] += y.comp_[i];
    return x;
  }

  friend RiemannTensor operator*(double s, RiemannTensor x) {
    for (auto& v : x.comp_) v *= s;
    return x;
  }

 private:
  std::size_t index(int a, int b, int c, int d) const {
    return static_cast<std::size_t>(((a * n_ + b) * n_ + c) * n_ + d);
  }

  int n_;
  std::vector<double> comp_;
};

/// S^i_j, symmetric to 1e-12 relative.
class SchoutenMatrix {
 public:
  explicit SchoutenMatrix(Eigen::MatrixXd s) : s_(std::move(s)) {
    if (s_.rows() < 1 || s_.rows() != s_.cols()) throw DomainError("SchoutenMatrix must be square");
    if (!s_.allFinite()) throw DomainError("SchoutenMatrix entries must be finite");
    const double tol = 1e-12 * std::max(1.0, s_.cwiseAbs().maxCoeff());
    if ((s_ - s_.transpose()).cwiseAbs().maxCoeff() > tol) throw DomainError("SchoutenMatrix must be symmetric");
  }

  int n() const { return static_cast<int>(s_.rows()); }
  const Eigen::MatrixXd& matrix() const { return s_; }

 private:
  Eigen::MatrixXd s_;
};

namespace detail {

struct SignedPermutations {
  std::vector<std::vector<int>> perms;
  std::vector<int> signs;
};

/// All permutations of 0..m-1 with their signs, computed once per m.
inline const SignedPermutations& signed_permutations(int m) {
  static std::mutex mutex;
  static std::map<int, SignedPermutations> cache;
  std::lock_guard lock(mutex);
  auto it = cache.find(m);
  if (it != cache.end()) return it->second;
  SignedPermutations sp;
  std::vector<int> p(static_cast<std::size_t>(m));
  std::iota(p.begin(), p.end(), 0);
  do {
    int inversions = 0;
    for (int i = 0; i < m; ++i)
      for (int j = i + 1; j < m; ++j) inversions += p[static_cast<std::size_t>(i)] > p[static_cast<std::size_t>(j)];
    sp.perms.push_back(p);
    sp.signs.push_back(inversions % 2 ? -1 : 1);
  } while (std::next_permutation(p.begin(), p.end()));
  return cache.emplace(m, std::move(sp)).first->second;
}

inline constexpr double kContractionTermCap = 5e7;

struct ContractionValue {
  double value = 0.0;
  double magnitude = 0.0;  // sum of |terms|, the scale for comparisons
};

/// (1/2^k) delta^{c_1 d_1 ... c_k d_k}_{a_1 b_1 ... a_k b_k} prod_i T_i^{a_i b_i}_{c_i d_i}
/// as a signed sum over index sets, orderings of the lower indices, and
/// permutations giving the upper ones.
inline ContractionValue kronecker_contraction(const std::vector<const RiemannTensor*>& factors) {
  const int k = static_cast<int>(factors.size());
  if (k == 0) return {1.0, 1.0};
  for (const auto* f : factors)
    if (f == nullptr) throw PreconditionError("contraction factor is null");
  const int n = factors.front()->n();
  for (const auto* f : factors)
    if (f->n() != n) throw DomainError("contraction factors must share a dimension");
  const int m = 2 * k;
  if (m > n) return {0.0, 0.0};
  double terms = 1;
  for (int i = 0; i < m; ++i) terms *= static_cast<double>(n - i) * (m - i);
  if (terms > kContractionTermCap)
    throw ResourceError("generalised Kronecker contraction with n=" + std::to_string(n) + ", k=" + std::to_string(k) +
                        " exceeds the term budget");
  const auto& sp = signed_permutations(m);

  long double total = 0, magnitude = 0;
  std::vector<int> set(static_cast<std::size_t>(m));
  std::vector<bool> choose(static_cast<std::size_t>(n), false);
  std::fill(choose.begin(), choose.begin() + m, true);
  do {
    int j = 0;
    for (int i = 0; i < n; ++i)
      if (choose[static_cast<std::size_t>(i)]) set[static_cast<std::size_t>(j++)] = i;
    for (std::size_t s = 0; s < sp.perms.size(); ++s) {
      const auto& lo = sp.perms[s];
      for (std::size_t t = 0; t < sp.perms.size(); ++t) {
        const auto& up = sp.perms[t];
        long double prod = sp.signs[s] * sp.signs[t];
        for (int i = 0; i < k && prod != 0; ++i) {
          const auto* T = factors[static_cast<std::size_t>(i)];
          prod *= (*T)(set[static_cast<std::size_t>(lo[static_cast<std::size_t>(2 * i)])],
                       set[static_cast<std::size_t>(lo[static_cast<std::size_t>(2 * i + 1)])],
                       set[static_cast<std::size_t>(up[static_cast<std::size_t>(2 * i)])],
                       set[static_cast<std::size_t>(up[static_cast<std::size_t>(2 * i + 1)])]);
        }
        total += prod;
        magnitude += std::fabs(prod);
      }
    }
  } while (std::prev_permutation(choose.begin(), choose.end()));
  const long double norm = std::ldexp(1.0L, -k);
  return {static_cast<double>(total * norm), static_cast<double>(magnitude * norm)};
}

}  // namespace detail

/// The k-th Lovelock product; zero when 2k > n.
inline double lovelock_product(const RiemannTensor& R, int k) {
  if (k < 0) throw DomainError("lovelock_product needs k >= 0");
  return detail::kronecker_contraction(std::vector<const RiemannTensor*>(static_cast<std::size_t>(k), &R)).value;
}

/// Explicit expressions of R_0 .. R_3 in terms of contractions of R, Ricci
/// and scalar curvature.
inline double lovelock_closed_form(const RiemannTensor& T, int k) {
  if (k < 0 || k > 3) throw DomainError("closed forms exist for 0 <= k <= 3");
  const int n = T.n();
  const Eigen::MatrixXd ric = T.ricci();
  const double R = ric.trace();
  if (k == 0) return 1.0;
  if (k == 1) return R;
  // R_{ab}^{cd} R^{ab}_{cd}
  double rr = 0;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        for (int d = 0; d < n; ++d) rr += T(c, d, a, b) * T(a, b, c, d);
  const double ric2 = (ric * ric).trace();
  if (k == 2) return R * R - 4 * ric2 + rr;

  double rrr = 0, twisted = 0, ric_rr = 0, ric_ric_r = 0;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        for (int d = 0; d < n; ++d) {
          ric_ric_r += ric(b, a) * ric(d, c) * T(a, c, b, d);
          for (int e = 0; e < n; ++e) {
            ric_rr += ric(b, a) * T(a, e, c, d) * T(c, d, b, e);
            for (int f = 0; f < n; ++f) {
              rrr += T(c, d, a, b) * T(e, f, c, d) * T(a, b, e, f);
              twisted += T(c, f, a, b) * T(e, b, c, d) * T(a, d, e, f);
            }
          }
        }
  const double ric3 = (ric * ric * ric).trace();
  return R * R * R + 2 * rrr + 3 * R * rr + 8 * twisted - 12 * R * ric2 + 16 * ric3 - 24 * ric_rr + 24 * ric_ric_r;
}

/// S = (Ric - R/(2(n-1)) Id) / (n-2).
inline SchoutenMatrix schouten(const RiemannTensor& R) {
  const int n = R.n();
  if (n <= 2) throw DomainError("the Schouten tensor needs n >= 3");
  Eigen::MatrixXd ric = R.ricci();
  const double scal = ric.trace();
  Eigen::MatrixXd S = (ric - scal / (2.0 * (n - 1)) * Eigen::MatrixXd::Identity(n, n)) / (n - 2);
  S = 0.5 * (S + S.transpose()).eval();
  return SchoutenMatrix(std::move(S));
}

/// Eigenvalues of S, ascending.
inline ConePoint schouten_eigenvalues(const SchoutenMatrix& S) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(S.matrix(), Eigen::EigenvaluesOnly);
  const auto& ev = es.eigenvalues();
  return ConePoint(std::vector<double>(ev.data(), ev.data() + ev.size()));
}

/// R^{ab}_{cd} = S^a_c d^b_d + S^b_d d^a_c - S^a_d d^b_c - S^b_c d^a_d, the
/// Riemann tensor with vanishing Weyl part.
inline RiemannTensor riemann_from_schouten(const SchoutenMatrix& S) {
  const int n = S.n();
  return RiemannTensor::kulkarni_nomizu(S.matrix(), Eigen::MatrixXd::Identity(n, n));
}

/// (R_k from the contraction, 2^k k! (n-k)!/(n-2k)! sigma_k(lambda(S))).
inline std::pair<double, double> lcf_identity_check(const SchoutenMatrix& S, int k) {
  const int n = S.n();
  if (n < 3) throw DomainError("lcf_identity_check needs n >= 3");
  if (k < 0 || k > lovelock_top_degree(n)) throw DomainError("lcf_identity_check needs 0 <= k <= floor((n+1)/2)");
  const double factor = lovelock_sigma_factor(n, k);
  const double lhs = lovelock_product(riemann_from_schouten(S), k);
  return {lhs, factor * schouten_eigenvalues(S).sigma(k)};
}

struct ExpansionCheck {
  double lhs = 0.0;        // (1/2^p) delta prod_k (R + nu_k delta)
  double rhs = 0.0;        // sum_k sigma_{p-k}(nu) (n-2k)!/(n-2p)! R_k
  double magnitude = 0.0;  // scale of the terms on either side
};

/// Both sides of the product expansion, the factor (n-2k)!/(n-2p)! taken as
/// the falling product (n-2k)(n-2k-1)...(n-2p+1), which vanishes when 2p > n.
inline ExpansionCheck concircular_expansion_check(const RiemannTensor& R, const std::vector<double>& nu) {
  const int n = R.n();
  const int p = static_cast<int>(nu.size());
  if (n > 6) throw ResourceError("concircular_expansion_check: exact contraction limited to n <= 6");
  if (p > lovelock_top_degree(n)) throw DomainError("concircular_expansion_check needs p <= floor((n+1)/2)");
  const RiemannTensor delta = RiemannTensor::pair_delta(n);
  std::vector<RiemannTensor> shifted;
  shifted.reserve(static_cast<std::size_t>(p));
  for (double v : nu) shifted.push_back(R + v * delta);
  std::vector<const RiemannTensor*> factors;
  for (const auto& t : shifted) factors.push_back(&t);
  const auto left = detail::kronecker_contraction(factors);

  ExpansionCheck out;
  out.lhs = left.value;
  out.magnitude = left.magnitude;
  const auto e = elementary_symmetric<double>(nu, p);
  long double rhs = 0;
  for (int k = 0; k <= p; ++k) {
    long double falling = 1;
    for (int i = n - 2 * p + 1; i <= n - 2 * k; ++i) falling *= i;
    const auto Rk = detail::kronecker_contraction(std::vector<const RiemannTensor*>(static_cast<std::size_t>(k), &R));
    const long double term = e[static_cast<std::size_t>(p - k)] * falling * Rk.value;
    rhs += term;
    out.magnitude = std::max(out.magnitude, static_cast<double>(std::fabs(e[static_cast<std::size_t>(p - k)] * falling) * Rk.magnitude));
  }
  out.rhs = static_cast<double>(rhs);
  return out;
}

}  // namespace garding
