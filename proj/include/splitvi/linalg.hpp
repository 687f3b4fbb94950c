// Copyright 2026 The splitvi Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <random>
#include <utility>
#include <vector>

#include "splitvi/errors.hpp"

namespace splitvi {

/// Dense real vector with a fixed dimension. Entries are validated to be
/// finite at construction; instances are immutable afterwards, so they can be
/// shared freely across threads.
class Vector {
 public:
  Vector() = default;

  explicit Vector(std::size_t dim) : entries_(dim, 0.0) {}

  Vector(std::initializer_list<double> entries) : entries_(entries) { check_finite(); }

  explicit Vector(std::vector<double> entries) : entries_(std::move(entries)) { check_finite(); }

  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  double operator[](std::size_t i) const { return entries_[i]; }

  const std::vector<double>& entries() const { return entries_; }

  auto begin() const { return entries_.begin(); }
  auto end() const { return entries_.end(); }

  friend bool operator==(const Vector& a, const Vector& b) { return a.entries_ == b.entries_; }

 private:
  void check_finite() const {
    for (double v : entries_) {
      if (!std::isfinite(v)) {
        throw std::invalid_argument("Vector: entries must be finite");
      }
    }
  }

  std::vector<double> entries_;
};

namespace detail {

inline void require_dim(const char* where, std::size_t expected, std::size_t actual) {
  if (expected != actual) throw DimensionError(where, expected, actual);
}

}  // namespace detail

inline Vector operator+(const Vector& a, const Vector& b) {
  detail::require_dim("Vector::operator+", a.size(), b.size());
  std::vector<double> r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
  return Vector(std::move(r));
}

inline Vector operator-(const Vector& a, const Vector& b) {
  detail::require_dim("Vector::operator-", a.size(), b.size());
  std::vector<double> r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
  return Vector(std::move(r));
}

inline Vector operator*(double s, const Vector& v) {
  std::vector<double> r(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) r[i] = s * v[i];
  return Vector(std::move(r));
}

inline Vector operator*(const Vector& v, double s) { return s * v; }

inline Vector operator-(const Vector& v) { return -1.0 * v; }

inline double dot(const Vector& a, const Vector& b) {
  detail::require_dim("dot", a.size(), b.size());
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline double norm(const Vector& v) { return std::sqrt(dot(v, v)); }

inline double distance(const Vector& a, const Vector& b) { return norm(a - b); }

/// Stacks two vectors into one block vector.
inline Vector concat(const Vector& a, const Vector& b) {
  std::vector<double> r;
  r.reserve(a.size() + b.size());
  r.insert(r.end(), a.begin(), a.end());
  r.insert(r.end(), b.begin(), b.end());
  return Vector(std::move(r));
}

/// Extracts the contiguous block [offset, offset + len).
inline Vector segment(const Vector& v, std::size_t offset, std::size_t len) {
  if (offset + len > v.size()) {
    throw DimensionError("segment", offset + len, v.size());
  }
  std::vector<double> r(v.begin() + static_cast<std::ptrdiff_t>(offset),
                        v.begin() + static_cast<std::ptrdiff_t>(offset + len));
  return Vector(std::move(r));
}

/// Stacks `copies` repetitions of v.
inline Vector replicate(const Vector& v, std::size_t copies) {
  std::vector<double> r;
  r.reserve(v.size() * copies);
  for (std::size_t c = 0; c < copies; ++c) r.insert(r.end(), v.begin(), v.end());
  return Vector(std::move(r));
}

/// Dense m-by-n linear map together with its adjoint (transpose) action.
/// Immutable after construction; entries validated finite.
class LinearMap {
 public:
  LinearMap() = default;

  /// Zero map of the given shape.
  LinearMap(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), a_(rows * cols, 0.0) {}

  /// From a row-major list of rows; all rows must have equal length.
  explicit LinearMap(const std::vector<std::vector<double>>& rows) {
    rows_ = rows.size();
    cols_ = rows.empty() ? 0 : rows.front().size();
    a_.reserve(rows_ * cols_);
    for (const auto& row : rows) {
      if (row.size() != cols_) {
        throw DimensionError("LinearMap: ragged rows", cols_, row.size());
      }
      for (double v : row) {
        if (!std::isfinite(v)) throw std::invalid_argument("LinearMap: entries must be finite");
        a_.push_back(v);
      }
    }
  }

  static LinearMap identity(std::size_t n) {
    LinearMap m(n, n);
    for (std::size_t i = 0; i < n; ++i) m.a_[i * n + i] = 1.0;
    return m;
  }

  static LinearMap diagonal(const Vector& d) {
    LinearMap m(d.size(), d.size());
    for (std::size_t i = 0; i < d.size(); ++i) m.a_[i * d.size() + i] = d[i];
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  double operator()(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }

  /// y = A x
  Vector apply(const Vector& x) const {
    detail::require_dim("apply_map", cols_, x.size());
    std::vector<double> y(rows_, 0.0);
    for (std::size_t i = 0; i < rows_; ++i) {
      double s = 0.0;
      const double* row = a_.data() + i * cols_;
      for (std::size_t j = 0; j < cols_; ++j) s += row[j] * x[j];
      y[i] = s;
    }
    return Vector(std::move(y));
  }

  /// x = A^T y  (the adjoint action; exact transpose of apply()).
  Vector apply_adjoint(const Vector& y) const {
    detail::require_dim("apply_adjoint", rows_, y.size());
    std::vector<double> x(cols_, 0.0);
    for (std::size_t i = 0; i < rows_; ++i) {
      const double* row = a_.data() + i * cols_;
      for (std::size_t j = 0; j < cols_; ++j) x[j] += row[j] * y[i];
    }
    return Vector(std::move(x));
  }

  bool is_zero() const {
    for (double v : a_) {
      if (v != 0.0) return false;
    }
    return true;
  }

  friend bool operator==(const LinearMap& a, const LinearMap& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.a_ == b.a_;
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> a_;  // row-major
};

inline Vector apply_map(const LinearMap& a, const Vector& x) { return a.apply(x); }
inline Vector apply_adjoint(const LinearMap& a, const Vector& y) { return a.apply_adjoint(y); }

/// Result of the power-iteration bound below. `value` approximates the
/// largest eigenvalue of A^T A; when `converged` is false callers must widen
/// any safety margin derived from it.
struct SpectralEstimate {
  double value = 0.0;
  bool converged = true;
  std::size_t iterations = 0;
};

inline constexpr double kSpectralTolDefault = 1e-10;
inline constexpr std::size_t kSpectralMaxIterDefault = 10000;
inline constexpr std::uint64_t kSpectralSeedDefault = 0x5eed5eedULL;  // fixed for reproducible runs

/// Largest eigenvalue of A^T A by power iteration with a random start vector.
/// Returns 0 for the zero map. tol is a relative stopping threshold on the
/// Rayleigh quotient.
inline SpectralEstimate estimate_spectral_radius(const LinearMap& a,
                                                 double tol = kSpectralTolDefault,
                                                 std::size_t max_iter = kSpectralMaxIterDefault,
                                                 std::uint64_t seed = kSpectralSeedDefault) {
  if (tol <= 0.0) throw std::invalid_argument("estimate_spectral_radius: tol must be > 0");
  const std::size_t n = a.cols();
  if (n == 0 || a.rows() == 0 || a.is_zero()) return {0.0, true, 0};

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  std::vector<double> v0(n);
  for (auto& e : v0) e = dist(rng);
  Vector v{std::vector<double>(v0)};
  double nv = norm(v);
  if (nv == 0.0) {
    v = Vector(std::vector<double>(n, 1.0));
    nv = norm(v);
  }
  v = (1.0 / nv) * v;

  double lambda_prev = 0.0;
  for (std::size_t it = 1; it <= max_iter; ++it) {
    Vector w = a.apply_adjoint(a.apply(v));
    double lambda = dot(v, w);  // Rayleigh quotient for A^T A
    double nw = norm(w);
    if (nw == 0.0) return {0.0, true, it};  // start vector landed in the kernel
    v = (1.0 / nw) * w;
    if (it > 1 && std::abs(lambda - lambda_prev) <= tol * std::max(std::abs(lambda), 1e-300)) {
      return {lambda, true, it};
    }
    lambda_prev = lambda;
  }
  return {lambda_prev, false, max_iter};
}

namespace detail {

/// Solves M x = r for symmetric positive definite M (row-major, n*n) by an
/// in-place LDL^T factorization. No pivoting; intended for well-conditioned
/// systems such as I + A^T A. Square-root free, so diagonal systems solve
/// exactly.
inline std::vector<double> ldlt_solve(std::vector<double> m, std::size_t n,
                                      std::vector<double> r) {
  std::vector<double> d(n, 0.0);
  // Factor: M = L D L^T, unit lower L stored in the strict lower triangle of m.
  for (std::size_t j = 0; j < n; ++j) {
    double dj = m[j * n + j];
    for (std::size_t k = 0; k < j; ++k) dj -= m[j * n + k] * m[j * n + k] * d[k];
    d[j] = dj;
    if (!(dj > 0.0)) {
      throw std::runtime_error("ldlt_solve: matrix is not positive definite");
    }
    for (std::size_t i = j + 1; i < n; ++i) {
      double lij = m[i * n + j];
      for (std::size_t k = 0; k < j; ++k) lij -= m[i * n + k] * m[j * n + k] * d[k];
      m[i * n + j] = lij / dj;
    }
  }
  // Forward solve L z = r.
  for (std::size_t i = 0; i < n; ++i) {
    double s = r[i];
    for (std::size_t k = 0; k < i; ++k) s -= m[i * n + k] * r[k];
    r[i] = s;
  }
  // Diagonal and backward solve D L^T x = z.
  for (std::size_t i = 0; i < n; ++i) r[i] /= d[i];
  for (std::size_t i = n; i-- > 0;) {
    double s = r[i];
    for (std::size_t k = i + 1; k < n; ++k) s -= m[k * n + i] * r[k];
    r[i] = s;
  }
  return r;
}

/// Builds the n*n matrix I + A^T A (row-major).
inline std::vector<double> regularized_normal_matrix(const LinearMap& a) {
  const std::size_t n = a.cols();
  const std::size_t m = a.rows();
  std::vector<double> g(n * n, 0.0);
  for (std::size_t k = 0; k < m; ++k) {
    for (std::size_t i = 0; i < n; ++i) {
      const double aki = a(k, i);
      if (aki == 0.0) continue;
      for (std::size_t j = 0; j < n; ++j) g[i * n + j] += aki * a(k, j);
    }
  }
  for (std::size_t i = 0; i < n; ++i) g[i * n + i] += 1.0;
  return g;
}

}  // namespace detail

/// Solves (I + A^T A) x = r. The system matrix is symmetric positive definite
/// for any A, so the direct factorization never fails on finite input.
inline Vector solve_regularized_normal(const LinearMap& a, const Vector& r) {
  detail::require_dim("solve_regularized_normal", a.cols(), r.size());
  auto m = detail::regularized_normal_matrix(a);
  auto x = detail::ldlt_solve(std::move(m), a.cols(), std::vector<double>(r.entries()));
  return Vector(std::move(x));
}

}  // namespace splitvi
