#pragma once

// Periodic grids on the flat torus and the scalar / symmetric-tensor fields
// living on them. Storage is row-major with the last axis fastest.

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include "garding/errors.hpp"

namespace garding {

class PeriodicGrid {
 public:
  PeriodicGrid(int n, std::vector<int> shape, std::vector<double> lengths = {})
      : n_(n), shape_(std::move(shape)), lengths_(std::move(lengths)) {
    if (n_ != 3 && n_ != 4) throw DomainError("PeriodicGrid supports n = 3 or 4");
    if (static_cast<int>(shape_.size()) != n_) throw DomainError("PeriodicGrid needs one point count per axis");
    if (lengths_.empty()) lengths_.assign(shape_.size(), 2 * std::numbers::pi);
    if (lengths_.size() != shape_.size()) throw DomainError("PeriodicGrid needs one period per axis");
    for (int m : shape_)
      if (m < 8 || m % 2 != 0) throw DomainError("grid point counts must be even and >= 8");
    for (double l : lengths_)
      if (!(l > 0) || !std::isfinite(l)) throw DomainError("grid periods must be positive");
    size_ = 1;
    for (int m : shape_) size_ *= static_cast<std::size_t>(m);
  }

  /// The cube grid with `points` per axis and period 2 pi.
  static PeriodicGrid cube(int n, int points) { return PeriodicGrid(n, std::vector<int>(static_cast<std::size_t>(n), points)); }

  int n() const { return n_; }
  const std::vector<int>& shape() const { return shape_; }
  const std::vector<double>& lengths() const { return lengths_; }
  std::size_t size() const { return size_; }

  double spacing(int axis) const { return lengths_[static_cast<std::size_t>(axis)] / shape_[static_cast<std::size_t>(axis)]; }

  /// Volume of one cell, the quadrature weight of the trapezoid rule.
  double cell_volume() const {
    double v = 1;
    for (int d = 0; d < n_; ++d) v *= spacing(d);
    return v;
  }

  std::vector<int> multi_index(std::size_t flat) const {
    std::vector<int> idx(static_cast<std::size_t>(n_));
    for (int d = n_ - 1; d >= 0; --d) {
      const auto m = static_cast<std::size_t>(shape_[static_cast<std::size_t>(d)]);
      idx[static_cast<std::size_t>(d)] = static_cast<int>(flat % m);
      flat /= m;
    }
    return idx;
  }

  std::vector<double> coordinates(std::size_t flat) const {
    const auto idx = multi_index(flat);
    std::vector<double> x(static_cast<std::size_t>(n_));
    for (int d = 0; d < n_; ++d) x[static_cast<std::size_t>(d)] = spacing(d) * idx[static_cast<std::size_t>(d)];
    return x;
  }

  friend bool operator==(const PeriodicGrid& a, const PeriodicGrid& b) {
    return a.n_ == b.n_ && a.shape_ == b.shape_ && a.lengths_ == b.lengths_;
  }

 private:
  int n_;
  std::vector<int> shape_;
  std::vector<double> lengths_;
  std::size_t size_ = 0;
};

class GridField {
 public:
  explicit GridField(PeriodicGrid grid, double fill = 0.0) : grid_(std::move(grid)), values_(grid_.size(), fill) {}

  GridField(PeriodicGrid grid, std::vector<double> values) : grid_(std::move(grid)), values_(std::move(values)) {
    if (values_.size() != grid_.size()) throw DomainError("GridField value count does not match the grid");
    for (double v : values_)
      if (!std::isfinite(v)) throw DomainError("GridField values must be finite");
  }

  static GridField sample(const PeriodicGrid& grid, const std::function<double(const std::vector<double>&)>& f) {
    std::vector<double> v(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) v[i] = f(grid.coordinates(i));
    return GridField(grid, std::move(v));
  }

  const PeriodicGrid& grid() const { return grid_; }
  std::size_t size() const { return values_.size(); }
  const std::vector<double>& values() const { return values_; }
  std::vector<double>& values() { return values_; }
  double operator[](std::size_t i) const { return values_[i]; }
  double& operator[](std::size_t i) { return values_[i]; }

  double min() const { return *std::min_element(values_.begin(), values_.end()); }
  double max() const { return *std::max_element(values_.begin(), values_.end()); }

  double sup_norm() const {
    double m = 0;
    for (double v : values_) m = std::max(m, std::abs(v));
    return m;
  }

  double mean() const {
    double s = 0;
    for (double v : values_) s += v;
    return s / static_cast<double>(values_.size());
  }

  /// Trapezoid-rule integral against another field; spectrally accurate for
  /// smooth periodic integrands.
  double inner(const GridField& other) const {
    require_same_grid(other);
    double s = 0;
    for (std::size_t i = 0; i < values_.size(); ++i) s += values_[i] * other.values_[i];
    return s * grid_.cell_volume();
  }

  void require_positive(const char* op) const {
    if (!(min() > 0)) throw PositivityError(std::string(op) + ": conformal factor must be positive (min u = " + std::to_string(min()) + ")");
  }

  void require_same_grid(const GridField& other) const {
    if (!(grid_ == other.grid_)) throw DomainError("fields live on different grids");
  }

  GridField& operator+=(const GridField& o) {
    require_same_grid(o);
    for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += o.values_[i];
    return *this;
  }

  GridField& operator-=(const GridField& o) {
    require_same_grid(o);
    for (std::size_t i = 0; i < values_.size(); ++i) values_[i] -= o.values_[i];
    return *this;
  }

  GridField& operator*=(double s) {
    for (auto& v : values_) v *= s;
    return *this;
  }

  friend GridField operator+(GridField a, const GridField& b) { return a += b; }
  friend GridField operator-(GridField a, const GridField& b) { return a -= b; }
  friend GridField operator*(double s, GridField a) { return a *= s; }

 private:
  PeriodicGrid grid_;
  std::vector<double> values_;
};

/// A symmetric n x n matrix per grid point, stored point-major.
class GridSchoutenField {
 public:
  explicit GridSchoutenField(PeriodicGrid grid) : grid_(std::move(grid)), comp_(grid_.size() * block(), 0.0) {}

  GridSchoutenField(PeriodicGrid grid, std::vector<double> comp) : grid_(std::move(grid)), comp_(std::move(comp)) {
    if (comp_.size() != grid_.size() * block()) throw DomainError("GridSchoutenField component count does not match the grid");
    const int n = grid_.n();
    for (std::size_t p = 0; p < grid_.size(); ++p) {
      const auto m = at(p);
      if (!m.allFinite()) throw DomainError("GridSchoutenField entries must be finite");
      const double tol = 1e-12 * std::max(1.0, m.cwiseAbs().maxCoeff());
      for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
          if (std::abs(m(i, j) - m(j, i)) > tol) throw DomainError("GridSchoutenField must be pointwise symmetric");
    }
  }

  /// The same matrix at every point.
  static GridSchoutenField constant(const PeriodicGrid& grid, const Eigen::MatrixXd& s) {
    if (s.rows() != grid.n() || s.cols() != grid.n()) throw DomainError("background matrix must be n x n");
    std::vector<double> comp;
    comp.reserve(grid.size() * s.size());
    for (std::size_t p = 0; p < grid.size(); ++p)
      for (int i = 0; i < s.rows(); ++i)
        for (int j = 0; j < s.cols(); ++j) comp.push_back(s(i, j));
    return GridSchoutenField(grid, std::move(comp));
  }

  const PeriodicGrid& grid() const { return grid_; }
  const std::vector<double>& components() const { return comp_; }

  Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> at(std::size_t point) const {
    return {comp_.data() + point * block(), grid_.n(), grid_.n()};
  }

  Eigen::Map<Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> at(std::size_t point) {
    return {comp_.data() + point * block(), grid_.n(), grid_.n()};
  }

  GridField trace() const {
    GridField t(grid_);
    for (std::size_t p = 0; p < grid_.size(); ++p) t[p] = at(p).trace();
    return t;
  }

 private:
  std::size_t block() const { return static_cast<std::size_t>(grid_.n()) * grid_.n(); }

  PeriodicGrid grid_;
  std::vector<double> comp_;
};

}  // namespace garding
