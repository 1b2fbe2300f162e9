#pragma once

// Fourier differentiation on a PeriodicGrid through FFTW real transforms.
// Plans are created once per shape under a lock and executed with the
// new-array interface, which FFTW allows from any thread.

#include <fftw3.h>

#include <complex>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <vector>

#include "garding/conformal/grid.hpp"

namespace garding {

namespace detail {

struct FftPlans {
  fftw_plan forward = nullptr;
  fftw_plan inverse = nullptr;
  ~FftPlans() {
    if (forward) fftw_destroy_plan(forward);
    if (inverse) fftw_destroy_plan(inverse);
  }
};

inline std::size_t spectrum_size(const PeriodicGrid& g) {
  std::size_t s = 1;
  for (int d = 0; d + 1 < g.n(); ++d) s *= static_cast<std::size_t>(g.shape()[static_cast<std::size_t>(d)]);
  return s * static_cast<std::size_t>(g.shape().back() / 2 + 1);
}

inline const FftPlans& fft_plans(const PeriodicGrid& g) {
  static std::mutex mutex;
  static std::map<std::vector<int>, std::unique_ptr<FftPlans>> cache;
  std::lock_guard lock(mutex);
  auto& slot = cache[g.shape()];
  if (!slot) {
    slot = std::make_unique<FftPlans>();
    std::vector<double> real(g.size());
    std::vector<std::complex<double>> spec(spectrum_size(g));
    auto* c = reinterpret_cast<fftw_complex*>(spec.data());
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    slot->forward = fftw_plan_dft_r2c(g.n(), g.shape().data(), real.data(), c, flags);
    slot->inverse = fftw_plan_dft_c2r(g.n(), g.shape().data(), c, real.data(), flags);
    if (!slot->forward || !slot->inverse) throw ResourceError("FFTW could not plan the grid transform");
  }
  return *slot;
}

}  // namespace detail

using Spectrum = std::vector<std::complex<double>>;

inline Spectrum forward_transform(const GridField& f) {
  const auto& plans = detail::fft_plans(f.grid());
  std::vector<double> in = f.values();
  Spectrum out(detail::spectrum_size(f.grid()));
  fftw_execute_dft_r2c(plans.forward, in.data(), reinterpret_cast<fftw_complex*>(out.data()));
  return out;
}

/// Inverse of forward_transform, normalised.
inline GridField inverse_transform(const PeriodicGrid& g, Spectrum spec) {
  const auto& plans = detail::fft_plans(g);
  std::vector<double> out(g.size());
  fftw_execute_dft_c2r(plans.inverse, reinterpret_cast<fftw_complex*>(spec.data()), out.data());
  const double scale = 1.0 / static_cast<double>(g.size());
  for (auto& v : out) v *= scale;
  return GridField(g, std::move(out));
}

/// Wavenumber and Nyquist flag of each spectral coefficient, per axis.
struct ModeTable {
  std::vector<std::vector<double>> k;     // [mode][axis]
  std::vector<std::vector<char>> nyquist;  // [mode][axis]
};

inline ModeTable mode_table(const PeriodicGrid& g) {
  const int n = g.n();
  const std::size_t count = detail::spectrum_size(g);
  ModeTable t{std::vector<std::vector<double>>(count, std::vector<double>(static_cast<std::size_t>(n))),
              std::vector<std::vector<char>>(count, std::vector<char>(static_cast<std::size_t>(n)))};
  std::vector<int> dims = g.shape();
  dims.back() = dims.back() / 2 + 1;
  for (std::size_t m = 0; m < count; ++m) {
    std::size_t rest = m;
    for (int d = n - 1; d >= 0; --d) {
      const auto dd = static_cast<std::size_t>(d);
      const int idx = static_cast<int>(rest % static_cast<std::size_t>(dims[dd]));
      rest /= static_cast<std::size_t>(dims[dd]);
      const int N = g.shape()[dd];
      const int signed_idx = idx <= N / 2 ? idx : idx - N;
      t.k[m][dd] = 2 * std::numbers::pi / g.lengths()[dd] * signed_idx;
      t.nyquist[m][dd] = idx == N / 2;
    }
  }
  return t;
}

/// Multiplies the spectrum of f by symbol(mode) and transforms back.
template <class Symbol>
GridField apply_symbol(const GridField& f, Symbol&& symbol) {
  const auto table = mode_table(f.grid());
  auto spec = forward_transform(f);
  for (std::size_t m = 0; m < spec.size(); ++m) spec[m] *= symbol(table, m);
  return inverse_transform(f.grid(), std::move(spec));
}

/// d/dx_i u; the Nyquist mode of an odd derivative is dropped.
inline GridField partial(const GridField& u, int i) {
  return apply_symbol(u, [i](const ModeTable& t, std::size_t m) -> std::complex<double> {
    const auto a = static_cast<std::size_t>(i);
    return t.nyquist[m][a] ? 0.0 : std::complex<double>(0.0, t.k[m][a]);
  });
}

/// d^2/dx_i dx_j u.
inline GridField second_partial(const GridField& u, int i, int j) {
  return apply_symbol(u, [i, j](const ModeTable& t, std::size_t m) -> std::complex<double> {
    const auto a = static_cast<std::size_t>(i), b = static_cast<std::size_t>(j);
    if (i == j) return -t.k[m][a] * t.k[m][a];
    return (t.nyquist[m][a] || t.nyquist[m][b]) ? 0.0 : -t.k[m][a] * t.k[m][b];
  });
}

inline GridField laplacian(const GridField& u) {
  return apply_symbol(u, [](const ModeTable& t, std::size_t m) -> std::complex<double> {
    double s = 0;
    for (double k : t.k[m]) s -= k * k;
    return s;
  });
}

/// Gradient and Hessian from one forward transform.
struct Derivatives {
  std::vector<GridField> gradient;  // n
  std::vector<GridField> hessian;   // n*n, symmetric
};

inline Derivatives derivatives(const GridField& u) {
  const auto& g = u.grid();
  const int n = g.n();
  const auto table = mode_table(g);
  const auto spec = forward_transform(u);
  Derivatives out;
  for (int i = 0; i < n; ++i) {
    const auto a = static_cast<std::size_t>(i);
    Spectrum s(spec.size());
    for (std::size_t m = 0; m < spec.size(); ++m)
      s[m] = table.nyquist[m][a] ? 0.0 : spec[m] * std::complex<double>(0.0, table.k[m][a]);
    out.gradient.push_back(inverse_transform(g, std::move(s)));
  }
  out.hessian.assign(static_cast<std::size_t>(n * n), GridField(g));
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      const auto a = static_cast<std::size_t>(i), b = static_cast<std::size_t>(j);
      Spectrum s(spec.size());
      for (std::size_t m = 0; m < spec.size(); ++m) {
        const bool drop = i != j && (table.nyquist[m][a] || table.nyquist[m][b]);
        s[m] = drop ? 0.0 : -table.k[m][a] * table.k[m][b] * spec[m];
      }
      auto h = inverse_transform(g, std::move(s));
      out.hessian[static_cast<std::size_t>(j * n + i)] = h;
      out.hessian[static_cast<std::size_t>(i * n + j)] = std::move(h);
    }
  return out;
}

}  // namespace garding
