#pragma once

#include <random>
#include <vector>

#include <Eigen/Dense>

#include "garding/curvature.hpp"
#include "garding/symmpoly.hpp"

namespace garding::testing {

/// Rejection sample of lambda in Gamma_k: a Gaussian cloud around a random
/// point of the diagonal.
inline ConePoint sample_in_gamma(int n, int k, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> centre(0.0, 2.5);
  while (true) {
    const double c = centre(rng);
    std::vector<double> v(static_cast<std::size_t>(n));
    for (auto& x : v) x = c + gauss(rng);
    ConePoint p(v);
    if (cone_membership(p) >= k) return p;
  }
}

inline std::vector<double> random_vector(int n, double lo, double hi, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(lo, hi);
  std::vector<double> v(static_cast<std::size_t>(n));
  for (auto& x : v) x = u(rng);
  return v;
}

inline Eigen::MatrixXd random_symmetric(int n, std::mt19937_64& rng, double spread = 1.0) {
  std::normal_distribution<double> gauss(0.0, spread);
  Eigen::MatrixXd m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j <= i; ++j) m(i, j) = m(j, i) = gauss(rng);
  return m;
}

/// A sum of Kulkarni-Nomizu products of random symmetric matrices: all the
/// algebraic symmetries of a curvature tensor, generic Weyl part.
inline RiemannTensor random_admissible(int n, std::mt19937_64& rng, int terms = 3) {
  RiemannTensor r(n);
  for (int t = 0; t < terms; ++t) r = r + RiemannTensor::kulkarni_nomizu(random_symmetric(n, rng), random_symmetric(n, rng));
  return r;
}

}  // namespace garding::testing
