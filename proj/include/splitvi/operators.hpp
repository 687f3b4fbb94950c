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
#include <limits>
#include <utility>

#include "splitvi/sets.hpp"

namespace splitvi {

/// Unbounded inverse-strong-monotonicity marker (zero and constant fields
/// admit any modulus).
inline constexpr double kIsmUnbounded = std::numeric_limits<double>::infinity();

/// A vector field h : R^n -> R^n with certified monotonicity metadata:
/// a Lipschitz constant kappa and an inverse-strong-monotonicity (ISM)
/// modulus alpha. alpha = 0 means "not ISM / unknown"; solvers that need
/// nonexpansive forward-backward maps reject such fields.
///
/// Supported shapes: the zero field, the identity, and affine fields
/// x -> M x + q. For symmetric positive semidefinite M the constants
/// kappa = lambda_max(M) and alpha = 1/lambda_max(M) are certified at
/// construction; other matrices are accepted only with a caller-supplied
/// Lipschitz constant and carry alpha = 0.
class VectorField {
 public:
  enum class Kind { zero, identity, affine };

  static VectorField zero(std::size_t dim) {
    if (dim == 0) throw std::invalid_argument("VectorField::zero: dim must be >= 1");
    return VectorField(Kind::zero, dim, LinearMap(), Vector(), 0.0, kIsmUnbounded);
  }

  static VectorField identity(std::size_t dim) {
    if (dim == 0) throw std::invalid_argument("VectorField::identity: dim must be >= 1");
    return VectorField(Kind::identity, dim, LinearMap(), Vector(), 1.0, 1.0);
  }

  /// Affine field x -> M x + q for symmetric positive semidefinite M.
  /// Validates symmetry and semidefiniteness, then certifies
  /// kappa = lambda_max(M) and alpha = 1/kappa (alpha unbounded when M = 0).
  static VectorField affine(const LinearMap& m, Vector q) {
    check_affine_shape(m, q);
    const double kappa = symmetric_psd_norm(m);  // throws if not symmetric PSD
    const double alpha = kappa > 0.0 ? 1.0 / kappa : kIsmUnbounded;
    return VectorField(Kind::affine, q.size(), m, std::move(q), kappa, alpha);
  }

  /// Affine field with a caller-supplied Lipschitz constant for matrices that
  /// are not symmetric PSD. The constant must dominate the spectral norm of
  /// M; the field carries no ISM modulus (alpha = 0).
  static VectorField affine(const LinearMap& m, Vector q, double lipschitz) {
    check_affine_shape(m, q);
    if (!(lipschitz > 0.0) || !std::isfinite(lipschitz)) {
      throw std::invalid_argument("VectorField::affine: caller-supplied kappa must be > 0");
    }
    const double actual = std::sqrt(estimate_spectral_radius(m).value);
    if (lipschitz < actual * (1.0 - 1e-6)) {
      throw std::invalid_argument(
          "VectorField::affine: supplied kappa is below the spectral norm of M");
    }
    return VectorField(Kind::affine, q.size(), m, std::move(q), lipschitz, 0.0);
  }

  /// Affine field with externally certified constants. Used by the product
  /// constructions, where kappa and alpha follow algebraically from the
  /// blocks; not validated here.
  static VectorField affine_with_constants(const LinearMap& m, Vector q, double kappa,
                                           double ism) {
    check_affine_shape(m, q);
    return VectorField(Kind::affine, q.size(), m, std::move(q), kappa, ism);
  }

  Kind kind() const { return kind_; }
  std::size_t dim() const { return dim_; }
  double lipschitz() const { return lipschitz_; }
  double ism() const { return ism_; }
  bool is_ism() const { return ism_ > 0.0; }
  bool is_zero() const { return kind_ == Kind::zero; }

  /// Matrix/offset of an affine field; undefined for other kinds.
  const LinearMap& matrix() const { return m_; }
  const Vector& offset() const { return q_; }

  Vector operator()(const Vector& x) const {
    detail::require_dim("evaluate", dim_, x.size());
    switch (kind_) {
      case Kind::zero:
        return Vector(dim_);
      case Kind::identity:
        return x;
      case Kind::affine:
        return m_.apply(x) + q_;
    }
    return Vector(dim_);  // unreachable
  }

 private:
  VectorField(Kind kind, std::size_t dim, LinearMap m, Vector q, double lipschitz, double ism)
      : kind_(kind), dim_(dim), m_(std::move(m)), q_(std::move(q)), lipschitz_(lipschitz),
        ism_(ism) {}

  static void check_affine_shape(const LinearMap& m, const Vector& q) {
    if (m.rows() != m.cols()) {
      throw DimensionError("VectorField::affine: M must be square", m.rows(), m.cols());
    }
    detail::require_dim("VectorField::affine", m.rows(), q.size());
    if (q.empty()) throw std::invalid_argument("VectorField::affine: dim must be >= 1");
  }

  /// lambda_max of symmetric PSD M; throws for nonsymmetric or indefinite M.
  static double symmetric_psd_norm(const LinearMap& m) {
    const std::size_t n = m.rows();
    double scale = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) scale = std::max(scale, std::abs(m(i, j)));
    }
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        if (std::abs(m(i, j) - m(j, i)) > 1e-12 * std::max(1.0, scale)) {
          throw std::invalid_argument("VectorField::affine: M must be symmetric PSD");
        }
      }
    }
    const double top = std::sqrt(estimate_spectral_radius(m).value);
    // Semidefiniteness: LDL^T of M + eps*I must keep all pivots positive.
    const double eps = 1e-10 * std::max(1.0, top);
    std::vector<double> shifted(n * n);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) shifted[i * n + j] = m(i, j);
      shifted[i * n + i] += eps;
    }
    try {
      detail::ldlt_solve(std::move(shifted), n, std::vector<double>(n, 0.0));
    } catch (const std::runtime_error&) {
      throw std::invalid_argument("VectorField::affine: M must be symmetric PSD");
    }
    return top;
  }

  Kind kind_ = Kind::zero;
  std::size_t dim_ = 0;
  LinearMap m_;
  Vector q_;
  double lipschitz_ = 0.0;
  double ism_ = 0.0;
};

inline Vector evaluate(const VectorField& h, const Vector& x) { return h(x); }

/// The map x -> P_D(x - lambda h(x)). Nonexpansive whenever h is alpha-ISM
/// and lambda <= 2 alpha; that hypothesis is enforced by the owning solver,
/// not here.
class ForwardBackwardMap {
 public:
  ForwardBackwardMap(ProjectableSet set, VectorField field, double lambda)
      : set_(std::move(set)), field_(std::move(field)), lambda_(lambda) {
    detail::require_dim("ForwardBackwardMap", set_.dim(), field_.dim());
    if (!(lambda >= 0.0) || !std::isfinite(lambda)) {
      throw std::invalid_argument("ForwardBackwardMap: lambda must be finite and >= 0");
    }
  }

  const ProjectableSet& set() const { return set_; }
  const VectorField& field() const { return field_; }
  double lambda() const { return lambda_; }

  Vector operator()(const Vector& x) const { return set_.project(x - lambda_ * field_(x)); }

 private:
  ProjectableSet set_;
  VectorField field_;
  double lambda_;
};

inline Vector forward_backward(const ForwardBackwardMap& fb, const Vector& x) { return fb(x); }

/// Fixed-point residual ||x - P_C(x - lambda f(x))||. Vanishes exactly at the
/// solutions of VIP(C, f) for any lambda > 0.
inline double vip_residual(const ProjectableSet& set, const VectorField& field, double lambda,
                           const Vector& x) {
  if (!(lambda > 0.0)) throw std::invalid_argument("vip_residual: lambda must be > 0");
  detail::require_dim("vip_residual", set.dim(), x.size());
  const ForwardBackwardMap fb(set, field, lambda);
  return distance(x, fb(x));
}

}  // namespace splitvi
