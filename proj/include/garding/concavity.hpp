#pragma once

// Concavity of F(f_a) on the positive cone: the composed Hessian, sampled
// verdicts upgraded by the coefficient certificates, the ln(s + ln f)
// concavifier for p = 2, the bounded-concavifier guard, the Li-Li hypothesis
// report and a probe of the diagonal conjecture.

#include <Eigen/Dense>
#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <limits>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "garding/errors.hpp"
#include "garding/parallel.hpp"
#include "garding/random.hpp"
#include "garding/rootedness.hpp"
#include "garding/symmpoly.hpp"

namespace garding {

enum class ConcavifierKind { Power, Log, LogLog, IterLog };

/// Strictly increasing F with F' > 0 on (domain_floor, inf).
///   Power(alpha):   sgn(alpha) t^alpha, alpha != 0 (so -1/t is Power(-1))
///   Log:            ln t
///   LogLog(s):      ln(s + ln t)
///   IterLog(k, s):  L_k where L_0 = t, L_j = s_j + ln L_{j-1}
class Concavifier {
 public:
  static Concavifier power(double alpha) {
    if (!std::isfinite(alpha) || alpha == 0.0) throw DomainError("power concavifier needs a finite alpha != 0");
    Concavifier f(ConcavifierKind::Power);
    f.alpha_ = alpha;
    f.floor_ = 0.0;
    return f;
  }

  static Concavifier log() { return chain(ConcavifierKind::Log, {0.0}); }

  static Concavifier loglog(double s) {
    if (!std::isfinite(s)) throw DomainError("loglog shift must be finite");
    return chain(ConcavifierKind::LogLog, {s, 0.0});
  }

  static Concavifier iterlog(int depth, std::vector<double> shifts) {
    if (depth < 1) throw DomainError("iterated logarithm needs depth >= 1");
    if (static_cast<int>(shifts.size()) != depth) throw DomainError("iterated logarithm needs one shift per level");
    for (double s : shifts)
      if (!std::isfinite(s)) throw DomainError("iterated logarithm shifts must be finite");
    return chain(ConcavifierKind::IterLog, std::move(shifts));
  }

  ConcavifierKind kind() const { return kind_; }
  double alpha() const { return alpha_; }
  const std::vector<double>& shifts() const { return shifts_; }
  int depth() const { return static_cast<int>(shifts_.size()); }
  double domain_floor() const { return floor_; }
  bool in_domain(double t) const { return t > floor_; }

  struct Jet {
    long double value, d1, d2;
  };

  Jet jet(long double t) const {
    if (!(t > floor_)) throw DomainError("concavifier evaluated at or below its domain floor");
    if (kind_ == ConcavifierKind::Power) {
      const long double a = alpha_;
      const long double d1 = std::fabs(a) * std::pow(t, a - 1);
      const long double v = (a > 0 ? 1 : -1) * std::pow(t, a);
      return {v, d1, d1 * (a - 1) / t};
    }
    long double level = t, prod = 1;
    for (double s : shifts_) {
      prod *= level;
      level = s + std::log(level);
    }
    const long double d1 = 1 / prod;
    return {level, d1, d1 * curvature_ratio(t) / t};
  }

  long double value(long double t) const { return jet(t).value; }

  /// t F''(t) / F'(t).
  long double curvature_ratio(long double t) const {
    if (!(t > floor_)) throw DomainError("concavifier evaluated at or below its domain floor");
    if (kind_ == ConcavifierKind::Power) return static_cast<long double>(alpha_) - 1;
    // -(1 + 1/L_1 + 1/(L_1 L_2) + ... + 1/(L_1 ... L_{k-1}))
    long double level = t, sum = 1, prod = 1;
    for (int j = 1; j < depth(); ++j) {
      level = shifts_[static_cast<std::size_t>(j - 1)] + std::log(level);
      prod *= level;
      sum += 1 / prod;
    }
    return -sum;
  }

  /// lim_{t -> inf} of -t F''/F'.
  double ratio_limit_at_infinity() const { return kind_ == ConcavifierKind::Power ? 1.0 - alpha_ : 1.0; }

  /// F(t) -> +inf as t -> +inf.
  bool diverges() const { return kind_ != ConcavifierKind::Power || alpha_ > 0; }

  /// F itself concave on its domain.
  bool concave() const { return kind_ != ConcavifierKind::Power || alpha_ <= 1.0; }

  std::string name() const {
    std::ostringstream os;
    os.precision(17);
    switch (kind_) {
      case ConcavifierKind::Power: os << "power(" << alpha_ << ")"; break;
      case ConcavifierKind::Log: os << "log"; break;
      case ConcavifierKind::LogLog: os << "loglog(" << shifts_[0] << ")"; break;
      case ConcavifierKind::IterLog:
        os << "iterlog(" << depth();
        for (double s : shifts_) os << "," << s;
        os << ")";
        break;
    }
    return os.str();
  }

 private:
  explicit Concavifier(ConcavifierKind k) : kind_(k) {}

  static Concavifier chain(ConcavifierKind kind, std::vector<double> shifts) {
    Concavifier f(kind);
    f.shifts_ = std::move(shifts);
    // L_{k-1} > 0 requires L_{j-1} > exp(floor_j - s_j) going down the chain.
    double floor = 0.0;
    for (int j = f.depth() - 1; j >= 1; --j) floor = std::exp(floor - f.shifts_[static_cast<std::size_t>(j - 1)]);
    f.floor_ = floor;
    return f;
  }

  ConcavifierKind kind_;
  double alpha_ = 1.0;
  std::vector<double> shifts_;
  double floor_ = 0.0;
};

inline double composed_value(const Concavifier& F, const CoeffVector& coeffs, const ConePoint& x) {
  return static_cast<double>(F.value(f_a(coeffs, x)));
}

/// H(F o f_a) = F'(P) H(P) + F''(P) D(P) (x) D(P).
inline Eigen::MatrixXd hessian_composed(const Concavifier& F, const CoeffVector& coeffs, const ConePoint& x) {
  detail::require_degree_fits(coeffs, x.n(), "hessian_composed");
  const auto d = fa_derivatives<double>(coeffs.values(), x.lambda(), true);
  if (!F.in_domain(d.value)) throw DomainError("hessian_composed: f_a(x) is outside the concavifier's domain");
  const auto j = F.jet(d.value);
  const int n = x.n();
  const Eigen::Map<const Eigen::VectorXd> D(d.gradient.data(), n);
  const Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> H(d.hessian.data(), n, n);
  return static_cast<double>(j.d1) * H + static_cast<double>(j.d2) * D * D.transpose();
}

enum class VerdictStatus { CertifiedConcave, SampledConcave, Violated, Unknown };

inline std::string to_string(VerdictStatus s) {
  switch (s) {
    case VerdictStatus::CertifiedConcave: return "CERTIFIED_CONCAVE";
    case VerdictStatus::SampledConcave: return "SAMPLED_CONCAVE";
    case VerdictStatus::Violated: return "VIOLATED";
    case VerdictStatus::Unknown: return "UNKNOWN";
  }
  return "UNKNOWN";
}

inline bool concave_status(VerdictStatus s) {
  return s == VerdictStatus::CertifiedConcave || s == VerdictStatus::SampledConcave;
}

/// A point x and unit direction u with u.H(F o f_a)(x).u > 0, confirmed in
/// exact arithmetic. `rayleigh` is u.M.u / |M|_2 for the bracket
/// M = P H(P) + (P F''/F') D (x) D, which has the sign of H.
struct ConcavityWitness {
  ConePoint x;
  Eigen::VectorXd u;
  double rayleigh = 0.0;
  std::size_t sample = 0;
};

struct ConcavityVerdict {
  VerdictStatus status = VerdictStatus::Unknown;
  std::optional<ConcavityWitness> witness;
  std::optional<std::string> certificate;
  std::size_t samples = 0;      // points evaluated
  std::size_t skipped = 0;      // points where f_a fell outside F's domain
  std::size_t unconfirmed = 0;  // float candidates rejected by the exact re-check
};

struct SamplingOptions {
  double tau_psd = 1e-9;
  double scale_lo = 1e-3;
  double scale_hi = 1e3;
};

enum class SampleRegion { Cone, Diagonal };

/// Point i of a run. In the cone: a quarter on the diagonal, an eighth near
/// a face (one coordinate shrunk by 10^-3..10^-9), a quarter with
/// independent log-uniform coordinates, the rest a log-uniform scale times a
/// moderate log-normal shape.
inline ConePoint cone_sample(int n, std::uint64_t seed, std::size_t i, const SamplingOptions& opt = {},
                             SampleRegion region = SampleRegion::Cone) {
  auto rng = SplitMix64::stream(seed, i);
  std::vector<double> x(static_cast<std::size_t>(n));
  const int slot = region == SampleRegion::Diagonal ? 0 : static_cast<int>(i % 8);
  if (slot <= 1) {
    std::fill(x.begin(), x.end(), rng.log_uniform(opt.scale_lo, opt.scale_hi));
  } else if (slot <= 3) {
    for (auto& v : x) v = rng.log_uniform(opt.scale_lo, opt.scale_hi);
    if (slot == 2) x[static_cast<std::size_t>(rng.integer(0, n - 1))] *= std::pow(10.0, -rng.uniform(3.0, 9.0));
  } else {
    const double scale = rng.log_uniform(opt.scale_lo, opt.scale_hi);
    for (auto& v : x) v = scale * std::exp(0.75 * rng.normal());
  }
  return ConePoint(std::move(x));
}

namespace detail {

struct PointCheck {
  bool in_domain = false;
  bool candidate = false;
  double ratio = 0.0;   // lambda_max(M) / |M|_2 when computed
  double norm = 0.0;    // |M|_2 when computed
  Eigen::VectorXd u;
};

/// The bracket M = P H(P) + r D (x) D, r = P F''(P)/F'(P).
inline Eigen::MatrixXd concavity_bracket(const Concavifier& F, const FaDerivatives<double>& d, int n) {
  const double r = static_cast<double>(F.curvature_ratio(d.value));
  const Eigen::Map<const Eigen::VectorXd> D(d.gradient.data(), n);
  const Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> H(d.hessian.data(), n, n);
  return d.value * H + r * D * D.transpose();
}

inline PointCheck check_point(const Concavifier& F, const CoeffVector& coeffs, const ConePoint& x, double tau) {
  PointCheck out;
  const int n = x.n();
  const auto d = fa_derivatives<double>(coeffs.values(), x.lambda(), true);
  if (!F.in_domain(d.value)) return out;
  out.in_domain = true;
  const Eigen::MatrixXd M = concavity_bracket(F, d, n);
  const double fro = M.norm();
  if (fro == 0.0) return out;
  // lambda_max(M) < tau |M|_F / sqrt(n) <= tau |M|_2 when this factorises.
  Eigen::MatrixXd shifted = -M;
  shifted.diagonal().array() += tau * fro / std::sqrt(static_cast<double>(n));
  Eigen::LLT<Eigen::MatrixXd> llt(shifted);
  if (llt.info() == Eigen::Success) return out;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(M);
  const auto& ev = es.eigenvalues();
  const double norm = std::max(std::abs(ev(0)), std::abs(ev(n - 1)));
  out.norm = norm;
  out.ratio = ev(n - 1) / norm;
  if (ev(n - 1) > tau * norm) {
    out.candidate = true;
    out.u = es.eigenvectors().col(n - 1);
  }
  return out;
}

/// u.M.u > threshold |u|^2 with sigma_k, the gradient and the Hessian of f_a
/// evaluated exactly at the binary point x. The factor P F''/F' is exact for
/// Power and Log and rounded once otherwise.
inline bool confirm_exact(const Concavifier& F, const CoeffVector& coeffs, const ConePoint& x, const Eigen::VectorXd& u,
                          double threshold) {
  const int n = x.n();
  std::vector<Rational> a, xq, uq;
  for (double v : coeffs.values()) a.push_back(to_rational(v));
  for (double v : x.lambda()) xq.push_back(to_rational(v));
  for (int i = 0; i < n; ++i) uq.push_back(to_rational(u(i)));
  const auto d = fa_derivatives<Rational>(a, xq, true);
  Rational r;
  switch (F.kind()) {
    case ConcavifierKind::Power: r = to_rational(F.alpha()) - 1; break;
    case ConcavifierKind::Log: r = -1; break;
    default: r = to_rational(static_cast<double>(F.curvature_ratio(d.value.get_d())));
  }
  Rational quad = 0, dot = 0, uu = 0;
  for (int i = 0; i < n; ++i) {
    const auto ui = uq[static_cast<std::size_t>(i)];
    dot += ui * d.gradient[static_cast<std::size_t>(i)];
    uu += ui * ui;
    for (int j = 0; j < n; ++j) quad += ui * d.hessian[static_cast<std::size_t>(i * n + j)] * uq[static_cast<std::size_t>(j)];
  }
  const Rational bracket = d.value * quad + r * dot * dot;
  return bracket > to_rational(threshold) * uu;
}

struct SampleScan {
  std::optional<ConcavityWitness> witness;
  std::size_t samples = 0, skipped = 0, unconfirmed = 0;
};

/// Evaluates the sample points in parallel; the reported witness is the
/// confirmed violation of smallest index, and counts cover indices up to it,
/// so the result does not depend on the thread count.
inline SampleScan scan_samples(const Concavifier& F, const CoeffVector& coeffs, int n, std::size_t samples,
                               std::uint64_t seed, const SamplingOptions& opt, SampleRegion region) {
  enum : unsigned char { Pending, Evaluated, Skipped, Rejected, Confirmed };
  std::vector<unsigned char> state(samples, Pending);
  std::atomic<std::size_t> best{samples};
  std::mutex witness_mutex;
  std::optional<ConcavityWitness> witness;

  parallel_for(samples, [&](std::size_t i) {
    if (i > best.load(std::memory_order_relaxed)) return;
    const ConePoint x = cone_sample(n, seed, i, opt, region);
    const auto c = check_point(F, coeffs, x, opt.tau_psd);
    if (!c.in_domain) {
      state[i] = Skipped;
      return;
    }
    if (!c.candidate) {
      state[i] = Evaluated;
      return;
    }
    if (!confirm_exact(F, coeffs, x, c.u, opt.tau_psd * c.norm)) {
      state[i] = Rejected;
      return;
    }
    state[i] = Confirmed;
    std::lock_guard lock(witness_mutex);
    if (i < best.load()) {
      best.store(i);
      witness = ConcavityWitness{x, c.u, c.ratio, i};
    }
  });

  SampleScan out;
  const std::size_t limit = std::min(samples, best.load() + 1);
  for (std::size_t i = 0; i < limit; ++i) {
    if (state[i] == Skipped) {
      ++out.skipped;
      continue;
    }
    ++out.samples;
    if (state[i] == Rejected) ++out.unconfirmed;
  }
  out.witness = std::move(witness);
  return out;
}

inline CoeffVector trimmed(const CoeffVector& coeffs) {
  std::vector<double> a(coeffs.values().begin(), coeffs.values().end());
  while (a.size() > 1 && a.back() == 0.0) a.pop_back();
  return CoeffVector(std::move(a));
}

}  // namespace detail

/// Name of a coefficient certificate proving F o f_a concave on Gamma_n, if
/// one applies: F concave and f_a affine ("affine"), or f_a^{1/q} concave by
/// the p = 2 criterion, Kurtz, Walsh or the real-rooted tail, with F a
/// concave increasing function of f_a^{1/q} (Power(alpha), alpha <= 1/q, or
/// any logarithmic kind). q is the degree after trimming zero top
/// coefficients.
inline std::optional<std::string> concavity_certificate(const Concavifier& F, const CoeffVector& coeffs, int n) {
  if (!coeffs.non_negative()) return std::nullopt;
  const CoeffVector a = detail::trimmed(coeffs);
  const int q = a.p();
  if (q <= 1) return F.concave() ? std::optional<std::string>("affine") : std::nullopt;
  if (F.kind() == ConcavifierKind::Power && F.alpha() > 1.0 / q) return std::nullopt;
  if (q == 2) return p2_criterion(a[0], a[1], a[2], n) ? std::optional<std::string>("p2") : std::nullopt;
  if (kurtz_certificate(a)) return "kurtz";
  if (walsh_certificate(a, n)) return "walsh";
  if (real_rooted_tail_certificate(a)) return "tail";
  return std::nullopt;
}

/// Probes concavity of F o f_a on Gamma_n (the positive orthant) at
/// `samples` points: at each, the top eigenpair of the bracket M decides,
/// and a violation must survive an exact re-evaluation before it is
/// reported. A certificate upgrades a clean run to CERTIFIED_CONCAVE.
inline ConcavityVerdict sample_concavity(const Concavifier& F, const CoeffVector& coeffs, int n, std::size_t samples,
                                         std::uint64_t seed, const SamplingOptions& opt = {}) {
  if (n < 1) throw DomainError("sample_concavity needs n >= 1");
  if (samples < 1) throw DomainError("sample_concavity needs at least one sample");
  detail::require_degree_fits(coeffs, n, "sample_concavity");
  ConcavityVerdict v;
  v.certificate = concavity_certificate(F, coeffs, n);
  auto scan = detail::scan_samples(F, coeffs, n, samples, seed, opt, SampleRegion::Cone);
  v.samples = scan.samples;
  v.skipped = scan.skipped;
  v.unconfirmed = scan.unconfirmed;
  v.witness = std::move(scan.witness);
  if (v.witness)
    v.status = VerdictStatus::Violated;
  else if (v.samples == 0)
    v.status = VerdictStatus::Unknown;
  else
    v.status = v.certificate ? VerdictStatus::CertifiedConcave : VerdictStatus::SampledConcave;
  return v;
}

/// phi(t) = (n-1) c t (s + 2 + ln t) + (s + 1 + ln t) Delta,
/// Delta = n b^2 - 2(n-1) a c. det H(ln(s + ln g)) has the sign of
/// (-1)^n phi(g).
inline double loglog_phi(double t, double a, double b, double c, double s, int n) {
  const double delta = n * b * b - 2.0 * (n - 1) * a * c;
  const double L = std::log(t);
  return (n - 1) * c * t * (s + 2 + L) + (s + 1 + L) * delta;
}

struct LogLogReport {
  ConcavityVerdict verdict;
  double delta = 0.0;       // n b^2 - 2(n-1) a c
  double phi_floor = 0.0;   // phi(a), the infimum of phi(g) over Gamma_n
  std::size_t samples = 0;
  std::size_t det_sign_mismatches = 0;  // sign det H != (-1)^n
  std::size_t phi_nonpositive = 0;      // phi(g(x)) <= 0
};

/// ln(s + ln(a + b sigma_1 + c sigma_2)) on Gamma_n. phi is increasing on
/// (a, inf), so the determinant keeps the sign (-1)^n on the whole cone
/// exactly when phi(a) >= 0; the verdict is certified under that condition
/// (or c = 0), checked against the sampled determinant signs and phi values.
/// With phi(a) < 0 the Hessian has a positive direction near the origin and
/// the verdict is VIOLATED with an exactly confirmed witness.
inline LogLogReport loglog_concavifier_check(double a, double b, double c, double s, int n, std::size_t samples = 2000,
                                             std::uint64_t seed = 0, const SamplingOptions& opt = {}) {
  if (!(a > 0)) throw DomainError("loglog concavifier needs a > 0");
  if (b < 0 || c < 0) throw DomainError("loglog concavifier needs b, c >= 0");
  if (!(s + std::log(a) > 0)) throw DomainError("loglog concavifier needs s + ln a > 0");
  if (n < 2) throw DomainError("loglog concavifier needs n >= 2");
  const Concavifier F = Concavifier::loglog(s);
  const CoeffVector coeffs({a, b, c});

  LogLogReport rep;
  rep.delta = n * b * b - 2.0 * (n - 1) * a * c;
  rep.phi_floor = loglog_phi(a, a, b, c, s, n);
  rep.verdict = sample_concavity(F, coeffs, n, samples, seed, opt);
  if (c == 0.0) return rep;

  const int expected = n % 2 == 0 ? 1 : -1;
  std::atomic<std::size_t> mismatches{0}, nonpositive{0}, counted{0};
  parallel_for(samples, [&](std::size_t i) {
    const ConePoint x = cone_sample(n, seed, i, opt);
    const auto d = fa_derivatives<double>(coeffs.values(), x.lambda(), true);
    if (!F.in_domain(d.value)) return;
    ++counted;
    const double det = detail::concavity_bracket(F, d, n).determinant();
    if (!(det * expected > 0)) ++mismatches;
    if (!(loglog_phi(d.value, a, b, c, s, n) > 0)) ++nonpositive;
  });
  rep.samples = counted;
  rep.det_sign_mismatches = mismatches;
  rep.phi_nonpositive = nonpositive;

  auto& v = rep.verdict;
  if (v.status == VerdictStatus::Violated) return rep;
  if (rep.phi_floor >= 0.0) {
    if (rep.det_sign_mismatches == 0 && rep.phi_nonpositive == 0) {
      v.status = VerdictStatus::CertifiedConcave;
      if (!v.certificate) v.certificate = "loglog-determinant";
    }
    return rep;
  }
  // phi(a) < 0: along the diagonal direction at z I, z -> 0, the bracket
  // tends to -(n/q) phi(a) > 0 with q = s + ln a.
  const Eigen::VectorXd u = Eigen::VectorXd::Ones(n) / std::sqrt(static_cast<double>(n));
  for (int e = 4; e <= 300; e += 4) {
    const ConePoint x = ConePoint::diagonal(n, std::ldexp(1.0, -e));
    const auto d = fa_derivatives<double>(coeffs.values(), x.lambda(), true);
    const Eigen::MatrixXd M = detail::concavity_bracket(F, d, n);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(M);
    const double norm = std::max(std::abs(es.eigenvalues()(0)), std::abs(es.eigenvalues()(n - 1)));
    const double along = u.dot(M * u);
    if (along > opt.tau_psd * norm && detail::confirm_exact(F, coeffs, x, u, opt.tau_psd * norm)) {
      v.status = VerdictStatus::Violated;
      v.witness = ConcavityWitness{x, u, along / norm, samples};
      return rep;
    }
  }
  return rep;
}

/// Smallest z0 = 2^e on the scan 2^-40..2^40 such that H(F o f_a)(z I) is
/// negative definite at every scanned z >= z0; empty if it fails at 2^40.
inline std::optional<double> diagonal_negativity_onset(const Concavifier& F, const CoeffVector& coeffs, int n) {
  detail::require_degree_fits(coeffs, n, "diagonal_negativity_onset");
  std::optional<double> onset;
  for (int e = 40; e >= -40; --e) {
    const double z = std::ldexp(1.0, e);
    const ConePoint x = ConePoint::diagonal(n, z);
    const auto d = fa_derivatives<double>(coeffs.values(), x.lambda(), true);
    if (!F.in_domain(d.value)) break;
    const Eigen::MatrixXd M = detail::concavity_bracket(F, d, n);
    if (!(Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(M, Eigen::EigenvaluesOnly).eigenvalues()(n - 1) < 0)) break;
    onset = z;
  }
  return onset;
}

/// True when -t F''(t)/F'(t) >= tau > 1 on the whole grid and in the limit
/// t -> inf: F is then bounded above and cannot diverge along rays.
inline bool bounded_concavifier_guard(const Concavifier& F, const std::vector<double>& t_grid) {
  if (t_grid.empty()) throw DomainError("bounded_concavifier_guard needs a non-empty grid");
  constexpr double threshold = 1.0 + 1e-9;
  double tau = F.ratio_limit_at_infinity();
  for (double t : t_grid) {
    if (!F.in_domain(t)) throw DomainError("bounded_concavifier_guard: grid point outside the concavifier's domain");
    tau = std::min(tau, static_cast<double>(-F.curvature_ratio(t)));
  }
  return tau > threshold;
}

enum class CheckOutcome { Pass, Fail, Unknown };

inline std::string to_string(CheckOutcome o) {
  switch (o) {
    case CheckOutcome::Pass: return "pass";
    case CheckOutcome::Fail: return "fail";
    case CheckOutcome::Unknown: return "unknown";
  }
  return "unknown";
}

struct HypothesisCheck {
  std::string name;
  CheckOutcome outcome = CheckOutcome::Unknown;
  std::string detail;
};

struct LiLiReport {
  std::vector<HypothesisCheck> checks;
  ConcavityVerdict concavity;

  bool all_pass() const {
    return std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.outcome == CheckOutcome::Pass; });
  }
  const HypothesisCheck& operator[](const std::string& name) const {
    for (const auto& c : checks)
      if (c.name == name) return c;
    throw DomainError("no hypothesis named " + name);
  }
};

/// Symmetry, monotonicity, concavity, divergence along rays and vanishing
/// at the vertex of Gamma_n for f = F o f_a.
inline LiLiReport lili_hypotheses_report(const Concavifier& F, const CoeffVector& coeffs, int n,
                                         std::size_t samples = 2000, std::uint64_t seed = 0) {
  detail::require_degree_fits(coeffs, n, "lili_hypotheses_report");
  LiLiReport rep;
  auto fmt = [](long double v) {
    std::ostringstream os;
    os.precision(6);
    os << static_cast<double>(v);
    return os.str();
  };
  const CoeffVector a = detail::trimmed(coeffs);
  const int q = a.p();

  rep.checks.push_back({"symmetry", CheckOutcome::Pass, "f_a is a symmetric function of lambda"});

  {
    HypothesisCheck c{"monotonicity", CheckOutcome::Pass, ""};
    bool positive_term = false;
    for (int k = 1; k <= q; ++k) positive_term = positive_term || a[k] > 0;
    if (coeffs.non_negative() && positive_term) {
      c.detail = "non-negative coefficients: every sigma_k, k >= 1, is increasing on Gamma_n";
    } else {
      std::size_t bad = 0;
      for (std::size_t i = 0; i < samples; ++i) {
        const ConePoint x = cone_sample(n, seed, i);
        if (!F.in_domain(f_a(coeffs, x))) continue;
        if ((gradient_f_a(coeffs, x).array() <= 0).any()) ++bad;
      }
      c.outcome = bad == 0 && positive_term ? CheckOutcome::Pass : CheckOutcome::Fail;
      c.detail = std::to_string(bad) + " sampled points with a non-positive partial derivative";
    }
    rep.checks.push_back(c);
  }

  rep.concavity = sample_concavity(F, coeffs, n, samples, seed);
  {
    HypothesisCheck c{"concavity", CheckOutcome::Unknown, to_string(rep.concavity.status)};
    if (concave_status(rep.concavity.status)) c.outcome = CheckOutcome::Pass;
    if (rep.concavity.status == VerdictStatus::Violated) c.outcome = CheckOutcome::Fail;
    if (rep.concavity.certificate) c.detail += " (" + *rep.concavity.certificate + ")";
    rep.checks.push_back(c);
  }

  {
    HypothesisCheck c{"divergence", CheckOutcome::Fail, ""};
    if (!F.diverges()) {
      c.detail = "F is bounded above";
    } else if (q < 1 || !(a[q] > 0)) {
      c.detail = "f_a does not grow along rays";
    } else {
      c.outcome = CheckOutcome::Pass;
      c.detail = "F(f_a(t I)) at t = 1e3, 1e6: ";
      for (double t : {1e3, 1e6}) c.detail += fmt(F.value(f_a(coeffs, ConePoint::diagonal(n, t)))) + " ";
    }
    rep.checks.push_back(c);
  }

  {
    // The infimum of f_a over Gamma_n is approached at the vertex, where
    // f_a -> a_0.
    HypothesisCheck c{"boundary_vanishing", CheckOutcome::Fail, ""};
    const double a0 = coeffs[0];
    if (F.in_domain(a0)) {
      const long double v = F.value(a0);
      c.outcome = std::abs(v) <= 1e-12 ? CheckOutcome::Pass : CheckOutcome::Fail;
      c.detail = "F(a_0) = " + fmt(v);
    } else if (a0 == F.domain_floor() && F.kind() == ConcavifierKind::Power && F.alpha() > 0) {
      c.outcome = CheckOutcome::Pass;
      c.detail = "F(t) -> 0 as t -> a_0 = 0";
    } else if (a0 == F.domain_floor()) {
      c.detail = "F(t) -> -inf as t -> a_0";
    } else {
      c.detail = "f_a takes values below the domain of F near the vertex";
    }
    std::vector<double> face(static_cast<std::size_t>(n), 1.0);
    face[0] = 0.0;
    const double on_face = f_a(coeffs, ConePoint(face));
    if (F.in_domain(on_face)) c.detail += "; on the face lambda_1 = 0, F(f_a(0,1,...,1)) = " + fmt(F.value(on_face));
    rep.checks.push_back(c);
  }
  return rep;
}

struct ConjectureProbe {
  VerdictStatus diagonal = VerdictStatus::Unknown;
  VerdictStatus full = VerdictStatus::Unknown;
  bool agree = false;
  std::optional<ConcavityWitness> diagonal_witness;
  std::optional<ConcavityWitness> full_witness;
  /// Concave at every sampled diagonal point, violated elsewhere.
  bool counterexample_candidate = false;
};

/// Concavity of F o f_a on the diagonal half-axis (full Hessian at z I)
/// against concavity on Gamma_n. Reports only.
inline ConjectureProbe conjecture_probe_diagonal(const CoeffVector& coeffs, const Concavifier& F, int n,
                                                 std::size_t samples, std::uint64_t seed = 0,
                                                 const SamplingOptions& opt = {}) {
  detail::require_degree_fits(coeffs, n, "conjecture_probe_diagonal");
  if (samples < 1) throw DomainError("conjecture_probe_diagonal needs at least one sample");
  ConjectureProbe out;
  auto diag = detail::scan_samples(F, coeffs, n, samples, seed, opt, SampleRegion::Diagonal);
  out.diagonal_witness = diag.witness;
  out.diagonal = diag.witness ? VerdictStatus::Violated
                              : (diag.samples ? VerdictStatus::SampledConcave : VerdictStatus::Unknown);
  const auto full = sample_concavity(F, coeffs, n, samples, seed, opt);
  out.full = full.status;
  out.full_witness = full.witness;
  out.agree = concave_status(out.diagonal) == concave_status(out.full);
  out.counterexample_candidate = concave_status(out.diagonal) && out.full == VerdictStatus::Violated;
  return out;
}

}  // namespace garding
