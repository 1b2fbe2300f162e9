#pragma once

// Conformal Schouten calculus on the flat torus, the operator -Lap + c, and
// the prescription equation f_a(lambda(u^{4/(n-2)} gamma)) = E solved by
// damped Jacobian-free Newton-Krylov with continuation in the coefficients.

#include <Eigen/Dense>
#include <cmath>
#include <functional>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "garding/conformal/grid.hpp"
#include "garding/conformal/spectral.hpp"
#include "garding/errors.hpp"
#include "garding/parallel.hpp"
#include "garding/symmpoly.hpp"

namespace garding {

struct NewtonStep {
  int iteration = 0;
  double residual = 0.0;  // sup norm after the step
  double damping = 0.0;   // accepted step length, 0 for the initial state
  int krylov_iterations = 0;
};

struct SolverConfig {
  double newton_tol = 1e-10;
  int max_newton = 30;
  int continuation_steps = 10;
  double linear_tol = 1e-12;
  double c_floor = 1e-8;
  int max_linear = 500;
  int krylov_restart = 40;
  int krylov_max = 400;
  double krylov_tol = 1e-6;  // floor of the relative Krylov forcing term
  std::function<void(const NewtonStep&)> observer;  // called after every Newton step

  void validate() const {
    if (!(newton_tol > 0) || !(linear_tol > 0) || !(c_floor > 0) || !(krylov_tol > 0))
      throw DomainError("solver tolerances and c_floor must be positive");
    if (max_newton < 0 || continuation_steps < 1 || max_linear < 1 || krylov_restart < 1 || krylov_max < 1)
      throw DomainError("solver iteration limits must be positive");
  }
};

namespace detail {

inline void require_conformal_dimension(const PeriodicGrid& g) {
  if (g.n() < 3) throw DomainError("conformal calculus needs n >= 3");
}

}  // namespace detail

/// Mixed Schouten tensor S^i_j of u^{4/(n-2)} gamma, indices raised with that
/// metric, from spectral derivatives of u on the flat background plus an
/// optional background Schouten field S[gamma]_ij.
inline GridSchoutenField conformal_schouten(const GridField& u, const GridSchoutenField* background = nullptr) {
  const auto& g = u.grid();
  detail::require_conformal_dimension(g);
  u.require_positive("conformal_schouten");
  if (background && !(background->grid() == g)) throw DomainError("background lives on a different grid");
  const int n = g.n();
  const double nm2 = n - 2.0;
  const auto d = derivatives(u);
  GridSchoutenField out(g);
  parallel_for(g.size(), [&](std::size_t p) {
    const double v = u[p];
    double grad2 = 0;
    for (int i = 0; i < n; ++i) grad2 += d.gradient[static_cast<std::size_t>(i)][p] * d.gradient[static_cast<std::size_t>(i)][p];
    const double raise = std::pow(v, -4.0 / nm2);
    auto m = out.at(p);
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) {
        const double gi = d.gradient[static_cast<std::size_t>(i)][p], gj = d.gradient[static_cast<std::size_t>(j)][p];
        double s = -d.hessian[static_cast<std::size_t>(i * n + j)][p] + n / nm2 * gi * gj / v;
        if (i == j) s -= grad2 / (v * nm2);
        s *= 2.0 / (nm2 * v);
        if (background) s += background->at(p)(i, j);
        m(i, j) = m(j, i) = raise * s;
      }
  });
  return out;
}

/// Ascending eigenvalues per point, n values per point.
inline std::vector<double> eigenvalue_field(const GridSchoutenField& S) {
  const int n = S.grid().n();
  std::vector<double> out(S.grid().size() * static_cast<std::size_t>(n));
  parallel_for(S.grid().size(), [&](std::size_t p) {
    Eigen::MatrixXd m = S.at(p);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m, Eigen::EigenvaluesOnly);
    for (int i = 0; i < n; ++i) out[p * static_cast<std::size_t>(n) + static_cast<std::size_t>(i)] = es.eigenvalues()(i);
  });
  return out;
}

/// S[u^{4/(n-2)} gamma] = u^{1-2*} (-(2/(n-2)) Lap u + S[gamma] u), 2* = 2n/(n-2).
inline GridField conformal_scalar(const GridField& u, double background_scalar = 0.0) {
  const auto& g = u.grid();
  detail::require_conformal_dimension(g);
  u.require_positive("conformal_scalar");
  const double nm2 = g.n() - 2.0;
  const double power = -(g.n() + 2.0) / nm2;
  auto lap = laplacian(u);
  GridField out(g);
  for (std::size_t p = 0; p < g.size(); ++p) out[p] = std::pow(u[p], power) * (-2.0 / nm2 * lap[p] + background_scalar * u[p]);
  return out;
}

/// f_a(lambda(conformal_schouten(u))) - E, pointwise.
inline GridField prescription_residual(const GridField& u, const CoeffVector& coeffs, const GridField& E,
                                       const GridSchoutenField* background = nullptr) {
  u.require_same_grid(E);
  const int n = u.grid().n();
  detail::require_degree_fits(coeffs, n, "prescription_residual");
  const auto lambda = eigenvalue_field(conformal_schouten(u, background));
  GridField out(u.grid());
  const int p = coeffs.p();
  parallel_for(u.grid().size(), [&](std::size_t q) {
    const std::span<const double> l(lambda.data() + q * static_cast<std::size_t>(n), static_cast<std::size_t>(n));
    const auto e = elementary_symmetric<double>(l, p);
    double f = 0;
    for (int k = 0; k <= p; ++k) f += coeffs[k] * e[static_cast<std::size_t>(k)];
    out[q] = f - E[q];
  });
  return out;
}

/// -Lap h + c h.
inline GridField apply_linear_operator(const GridField& c, const GridField& h) {
  c.require_same_grid(h);
  auto out = laplacian(h);
  for (std::size_t p = 0; p < out.size(); ++p) out[p] = -out[p] + c[p] * h[p];
  return out;
}

/// h with ||-Lap h + c h - w||_inf <= linear_tol ||w||_inf, by conjugate
/// gradients preconditioned with (-Lap + mean c)^{-1}.
inline GridField linear_solve(const GridField& c, const GridField& w, const SolverConfig& cfg = {}) {
  cfg.validate();
  c.require_same_grid(w);
  if (c.min() < cfg.c_floor)
    throw PreconditionError("linear_solve needs c >= c_floor > 0 (min c = " + std::to_string(c.min()) + ")");
  const double wnorm = w.sup_norm();
  GridField h(w.grid());
  if (wnorm == 0) return h;
  const double cbar = c.mean();
  auto precondition = [&](const GridField& r) {
    return apply_symbol(r, [cbar](const ModeTable& t, std::size_t m) -> std::complex<double> {
      double s = cbar;
      for (double k : t.k[m]) s += k * k;
      return 1.0 / s;
    });
  };
  auto dot = [](const GridField& a, const GridField& b) {
    double s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
  };
  const double target = cfg.linear_tol * wnorm;
  h = precondition(w);
  GridField r = w - apply_linear_operator(c, h);
  GridField z = precondition(r);
  GridField dir = z;
  double rz = dot(r, z);
  for (int it = 0; it < cfg.max_linear; ++it) {
    if (r.sup_norm() <= target) {
      r = w - apply_linear_operator(c, h);
      if (r.sup_norm() <= target) return h;
      z = precondition(r);
      dir = z;
      rz = dot(r, z);
    }
    const GridField Ad = apply_linear_operator(c, dir);
    const double dAd = dot(dir, Ad);
    if (!(dAd > 0)) break;
    const double alpha = rz / dAd;
    for (std::size_t i = 0; i < h.size(); ++i) {
      h[i] += alpha * dir[i];
      r[i] -= alpha * Ad[i];
    }
    z = precondition(r);
    const double rz_next = dot(r, z);
    const double beta = rz_next / rz;
    rz = rz_next;
    for (std::size_t i = 0; i < dir.size(); ++i) dir[i] = z[i] + beta * dir[i];
  }
  const double last = (w - apply_linear_operator(c, h)).sup_norm();
  if (last <= target) return h;
  throw NumericalError("linear_solve: conjugate gradients did not reach the tolerance", last);
}


struct NewtonReport {
  GridField u;
  std::vector<NewtonStep> log;
  double residual = 0.0;
  int iterations = 0;
};

namespace detail {

using LinearMap = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;

/// Right-preconditioned restarted GMRES from x = 0. Returns x and the number
/// of operator applications.
inline std::pair<Eigen::VectorXd, int> gmres(const LinearMap& A, const LinearMap& Minv, const Eigen::VectorXd& b,
                                             double rel_tol, int restart, int max_iter) {
  const Eigen::Index N = b.size();
  Eigen::VectorXd x = Eigen::VectorXd::Zero(N);
  const double bnorm = b.norm();
  if (bnorm == 0) return {x, 0};
  int total = 0;
  Eigen::VectorXd r = b;
  double previous = bnorm;
  while (total < max_iter) {
    const double beta = r.norm();
    if (beta <= rel_tol * bnorm) break;
    if (total > 0 && beta > 0.9 * previous) break;  // stagnated over a whole cycle
    previous = beta;
    std::vector<Eigen::VectorXd> V{r / beta}, Z;
    Eigen::MatrixXd H = Eigen::MatrixXd::Zero(restart + 1, restart);
    std::vector<double> cs, sn;
    Eigen::VectorXd gvec = Eigen::VectorXd::Zero(restart + 1);
    gvec(0) = beta;
    int j = 0;
    for (; j < restart && total < max_iter; ++j, ++total) {
      Z.push_back(Minv(V[static_cast<std::size_t>(j)]));
      Eigen::VectorXd w = A(Z.back());
      for (int i = 0; i <= j; ++i) {
        H(i, j) = w.dot(V[static_cast<std::size_t>(i)]);
        w -= H(i, j) * V[static_cast<std::size_t>(i)];
      }
      H(j + 1, j) = w.norm();
      for (int i = 0; i < j; ++i) {
        const double t = cs[static_cast<std::size_t>(i)] * H(i, j) + sn[static_cast<std::size_t>(i)] * H(i + 1, j);
        H(i + 1, j) = -sn[static_cast<std::size_t>(i)] * H(i, j) + cs[static_cast<std::size_t>(i)] * H(i + 1, j);
        H(i, j) = t;
      }
      const double rho = std::hypot(H(j, j), H(j + 1, j));
      const double c = rho == 0 ? 1.0 : H(j, j) / rho, s = rho == 0 ? 0.0 : H(j + 1, j) / rho;
      cs.push_back(c);
      sn.push_back(s);
      H(j, j) = rho;
      H(j + 1, j) = 0;
      gvec(j + 1) = -s * gvec(j);
      gvec(j) = c * gvec(j);
      const bool breakdown = w.norm() == 0;
      if (!breakdown) V.push_back(w / w.norm());
      if (std::abs(gvec(j + 1)) <= rel_tol * bnorm || breakdown) {
        ++j;
        ++total;
        break;
      }
    }
    const Eigen::VectorXd y = H.topLeftCorner(j, j).triangularView<Eigen::Upper>().solve(gvec.head(j));
    for (int i = 0; i < j; ++i) x += y(i) * Z[static_cast<std::size_t>(i)];
    r = b - A(x);
  }
  return {x, total};
}

inline Eigen::VectorXd as_vector(const GridField& f) { return Eigen::Map<const Eigen::VectorXd>(f.values().data(), static_cast<Eigen::Index>(f.size())); }

inline GridField as_field(const PeriodicGrid& g, const Eigen::VectorXd& v) {
  return GridField(g, std::vector<double>(v.data(), v.data() + v.size()));
}

}  // namespace detail

/// Damped Newton on prescription_residual. Jacobian-vector products are
/// one-sided differences with step 1e-7 (1 + ||u||) / ||v||; the Krylov solve
/// is GMRES preconditioned with alpha |k|^2 + beta fitted to the Jacobian on
/// the constant and the first cosine mode. Steps are halved until u stays
/// positive and the residual 2-norm decreases.
inline NewtonReport newton_solve(const CoeffVector& coeffs, const GridField& E, const GridField& u0, const SolverConfig& cfg = {},
                                 const GridSchoutenField* background = nullptr) {
  cfg.validate();
  u0.require_same_grid(E);
  u0.require_positive("newton_solve");
  const auto& g = u0.grid();
  NewtonReport rep{u0, {}, 0.0, 0};
  auto F = [&](const GridField& u) { return prescription_residual(u, coeffs, E, background); };
  GridField res = F(rep.u);
  rep.residual = res.sup_norm();
  rep.log.push_back({0, rep.residual, 0.0, 0});
  if (cfg.observer) cfg.observer(rep.log.back());

  const double k1 = 2 * std::numbers::pi / g.lengths()[0];
  const GridField ones(g, 1.0);
  const GridField mode = GridField::sample(g, [k1](const std::vector<double>& x) { return std::cos(k1 * x[0]); });

  for (int it = 1; rep.residual > cfg.newton_tol; ++it) {
    if (it > cfg.max_newton)
      throw NumericalError("newton_solve: no convergence in " + std::to_string(cfg.max_newton) + " iterations", rep.residual);
    const GridField& u = rep.u;
    const double unorm = u.sup_norm();
    auto jv = [&](const GridField& v) {
      const double vn = v.sup_norm();
      if (vn == 0) return GridField(g);
      const double eps = 1e-7 * (1 + unorm) / vn;
      GridField shifted = u;
      for (std::size_t i = 0; i < shifted.size(); ++i) shifted[i] += eps * v[i];
      GridField d = F(shifted) - res;
      d *= 1.0 / eps;
      return d;
    };
    const double beta_fit = jv(ones).mean();
    const double q = jv(mode).inner(mode) / mode.inner(mode);
    double alpha_fit = (q - beta_fit) / (k1 * k1);
    if (!(std::abs(alpha_fit) > 1e-12)) alpha_fit = 1.0;
    // On the flat torus J annihilates constants at constant u; the
    // preconditioner then drops the mean so the step has none.
    const bool blind_to_constants = std::abs(beta_fit) <= 1e-6 * std::abs(alpha_fit) * k1 * k1;
    const double shift = blind_to_constants ? 0.0 : std::max(beta_fit / alpha_fit, 1e-3 * k1 * k1);
    const detail::LinearMap A = [&](const Eigen::VectorXd& v) { return detail::as_vector(jv(detail::as_field(g, v))); };
    const detail::LinearMap Minv = [&](const Eigen::VectorXd& v) {
      return detail::as_vector(apply_symbol(detail::as_field(g, v), [&](const ModeTable& t, std::size_t m) -> std::complex<double> {
        double s = shift;
        for (double k : t.k[m]) s += k * k;
        return s == 0 ? 0.0 : 1.0 / (alpha_fit * s);
      }));
    };
    const double forcing = std::max(cfg.krylov_tol, std::min(0.1, rep.residual));
    Eigen::VectorXd rhs = -detail::as_vector(res);
    if (blind_to_constants) rhs.array() -= rhs.mean();
    auto [dx, kit] = detail::gmres(A, Minv, rhs, forcing, cfg.krylov_restart, cfg.krylov_max);
    const GridField du = detail::as_field(g, dx);

    double step = 1.0;
    int halvings = 0;
    while (true) {
      GridField trial = u;
      for (std::size_t i = 0; i < trial.size(); ++i) trial[i] += step * du[i];
      if (trial.min() > 0) {
        GridField r = F(trial);
        const double merit = detail::as_vector(r).norm();
        if (merit < (1 - 1e-4 * step) * detail::as_vector(res).norm()) {
          rep.u = std::move(trial);
          res = std::move(r);
          rep.residual = res.sup_norm();
          break;
        }
        if (halvings >= 30) throw NumericalError("newton_solve: line search stagnated", rep.residual);
      } else if (halvings >= 30) {
        throw PositivityError("newton_solve: step keeps u positive only after more than 30 halvings");
      }
      step *= 0.5;
      ++halvings;
    }
    rep.iterations = it;
    rep.log.push_back({it, rep.residual, step, kit});
    if (cfg.observer) cfg.observer(rep.log.back());
  }
  return rep;
}

struct ContinuationPoint {
  double t = 0.0;
  CoeffVector coeffs;
  NewtonReport report;
};

struct ContinuationReport {
  std::vector<ContinuationPoint> points;
  bool completed = false;
  double reached = 0.0;     // largest t solved
  std::string stop_reason;  // empty when completed
};

/// Solves along coeffs(t) = (1-t) from + t to for t = 1/steps, ..., 1, each
/// Newton solve warm-started from the previous one. Stops at the first
/// failure and reports how far the path was followed.
inline ContinuationReport continuation_solve(const CoeffVector& from, const CoeffVector& to, const GridField& E, const GridField& u0,
                                             const SolverConfig& cfg = {}, const GridSchoutenField* background = nullptr) {
  cfg.validate();
  const int p = std::max(from.p(), to.p());
  auto at = [&](double t) {
    std::vector<double> a(static_cast<std::size_t>(p + 1), 0.0);
    for (int k = 0; k <= p; ++k) {
      const double x = k <= from.p() ? from[k] : 0.0, y = k <= to.p() ? to[k] : 0.0;
      a[static_cast<std::size_t>(k)] = (1 - t) * x + t * y;
    }
    return CoeffVector(a);
  };
  ContinuationReport rep;
  GridField u = u0;
  for (int s = 0; s <= cfg.continuation_steps; ++s) {
    const double t = static_cast<double>(s) / cfg.continuation_steps;
    const auto c = at(t);
    try {
      auto r = newton_solve(c, E, u, cfg, background);
      u = r.u;
      rep.points.push_back({t, c, std::move(r)});
      rep.reached = t;
    } catch (const NumericalError& e) {
      rep.stop_reason = e.what();
      return rep;
    } catch (const PositivityError& e) {
      rep.stop_reason = e.what();
      return rep;
    }
  }
  rep.completed = true;
  return rep;
}

/// Metric scale k > 0 with a0 + a1 S_background / k = 1.
inline double gr_normalization(double a0, double a1, double S_background) {
  if (!(a1 * (a0 - 1) > 0)) throw PreconditionError("gr_normalization needs a1 (a0 - 1) > 0");
  if (!(S_background < 0)) throw PreconditionError("gr_normalization needs a negative background scalar curvature");
  return a1 * S_background / (1 - a0);
}

/// 1 + amplitude cos(x_1) cos(x_2) on a 2 pi periodic grid.
inline GridField manufactured_conformal_factor(const PeriodicGrid& g, double amplitude = 0.05) {
  const double k0 = 2 * std::numbers::pi / g.lengths()[0], k1 = 2 * std::numbers::pi / g.lengths()[1];
  return GridField::sample(g, [=](const std::vector<double>& x) { return 1 + amplitude * std::cos(k0 * x[0]) * std::cos(k1 * x[1]); });
}

}  // namespace garding
