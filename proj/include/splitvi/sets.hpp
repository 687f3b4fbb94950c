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

#include <algorithm>
#include <cmath>
#include <utility>
#include <variant>
#include <vector>

#include "splitvi/linalg.hpp"

namespace splitvi {

class ProjectableSet;

/// Projects (x, y) onto the graph {(u, v) : A u = v}. The minimizer of
/// ||u - x||^2 + ||v - y||^2 subject to A u = v satisfies the normal equation
/// (I + A^T A) u = x + A^T y, which is solved directly.
std::pair<Vector, Vector> project_onto_graph(const LinearMap& a, const Vector& x,
                                             const Vector& y);

namespace sets {

struct WholeSpace {
  std::size_t dim = 0;
};

/// Axis-aligned box {x : lower <= x <= upper}.
struct Box {
  Vector lower;
  Vector upper;
};

struct Ball {
  Vector center;
  double radius = 0.0;
};

/// {x : <normal, x> <= offset}, normal != 0.
struct HalfSpace {
  Vector normal;
  double offset = 0.0;
  double normal_sq = 0.0;  // cached ||normal||^2
};

/// {x : <normal, x> = offset}, normal != 0.
struct Hyperplane {
  Vector normal;
  double offset = 0.0;
  double normal_sq = 0.0;
};

/// anchor + span(basis), basis orthonormalized at construction. The basis as
/// originally given is kept alongside so serialization can reproduce the
/// input verbatim.
struct AffineSubspace {
  std::vector<Vector> basis;  // orthonormal; used by project()
  std::vector<Vector> given_basis;
  Vector anchor;
};

/// Cartesian product of sets; projection acts blockwise.
struct BlockProduct {
  std::vector<ProjectableSet> blocks;
  std::size_t dim = 0;
};

/// {(x, y) : A x = y} inside R^{cols + rows}; projection via the regularized
/// normal equations.
struct GraphSubspace {
  LinearMap map;
};

}  // namespace sets

constexpr double kGramSchmidtRankTol = 1e-12;

/// A nonempty closed convex set equipped with an exact metric projection.
/// Construction validates nonemptiness; degenerate descriptions (zero-normal
/// half-spaces) are normalized to the whole space. Immutable and pure, so
/// safe for concurrent use.
class ProjectableSet {
 public:
  using Variant = std::variant<sets::WholeSpace, sets::Box, sets::Ball, sets::HalfSpace,
                               sets::Hyperplane, sets::AffineSubspace, sets::BlockProduct,
                               sets::GraphSubspace>;

  static ProjectableSet whole_space(std::size_t dim) {
    if (dim == 0) throw std::invalid_argument("whole_space: dim must be >= 1");
    return ProjectableSet(sets::WholeSpace{dim});
  }

  static ProjectableSet box(Vector lower, Vector upper) {
    detail::require_dim("box", lower.size(), upper.size());
    if (lower.empty()) throw std::invalid_argument("box: dim must be >= 1");
    for (std::size_t i = 0; i < lower.size(); ++i) {
      if (lower[i] > upper[i]) {
        throw std::invalid_argument("box: requires lower <= upper componentwise");
      }
    }
    return ProjectableSet(sets::Box{std::move(lower), std::move(upper)});
  }

  static ProjectableSet ball(Vector center, double radius) {
    if (center.empty()) throw std::invalid_argument("ball: dim must be >= 1");
    if (!(radius >= 0.0) || !std::isfinite(radius)) {
      throw std::invalid_argument("ball: requires radius >= 0");
    }
    return ProjectableSet(sets::Ball{std::move(center), radius});
  }

  /// {x : <normal, x> <= offset}. A zero normal with offset >= 0 describes the
  /// whole space and is normalized to it; offset < 0 would be empty.
  static ProjectableSet half_space(Vector normal, double offset) {
    if (normal.empty()) throw std::invalid_argument("half_space: dim must be >= 1");
    if (!std::isfinite(offset)) throw std::invalid_argument("half_space: offset must be finite");
    const double nsq = dot(normal, normal);
    if (nsq == 0.0) {
      if (offset >= 0.0) return whole_space(normal.size());
      throw std::invalid_argument("half_space: zero normal with offset < 0 is empty");
    }
    return ProjectableSet(sets::HalfSpace{std::move(normal), offset, nsq});
  }

  /// {x : <normal, x> = offset}. A zero normal is admissible only with
  /// offset = 0 (the whole space); otherwise the set would be empty.
  static ProjectableSet hyperplane(Vector normal, double offset) {
    if (normal.empty()) throw std::invalid_argument("hyperplane: dim must be >= 1");
    if (!std::isfinite(offset)) throw std::invalid_argument("hyperplane: offset must be finite");
    const double nsq = dot(normal, normal);
    if (nsq == 0.0) {
      if (offset == 0.0) return whole_space(normal.size());
      throw std::invalid_argument("hyperplane: zero normal with offset != 0 is empty");
    }
    return ProjectableSet(sets::Hyperplane{std::move(normal), offset, nsq});
  }

  /// anchor + span(basis). The basis is orthonormalized by modified
  /// Gram-Schmidt; directions below the rank tolerance are dropped. An empty
  /// surviving basis leaves the single point {anchor}.
  static ProjectableSet affine_subspace(const std::vector<Vector>& basis, Vector anchor) {
    if (anchor.empty()) throw std::invalid_argument("affine_subspace: dim must be >= 1");
    std::vector<Vector> ortho;
    ortho.reserve(basis.size());
    for (const Vector& v : basis) {
      detail::require_dim("affine_subspace", anchor.size(), v.size());
      const double original = norm(v);
      if (original == 0.0) continue;
      Vector u = v;
      for (int pass = 0; pass < 2; ++pass) {  // re-orthogonalize once
        for (const Vector& q : ortho) u = u - dot(u, q) * q;
      }
      const double residual = norm(u);
      if (residual <= kGramSchmidtRankTol * original) continue;
      ortho.push_back((1.0 / residual) * u);
    }
    return ProjectableSet(sets::AffineSubspace{std::move(ortho), basis, std::move(anchor)});
  }

  static ProjectableSet product(std::vector<ProjectableSet> blocks);

  static ProjectableSet graph(LinearMap a) {
    if (a.rows() == 0 || a.cols() == 0) {
      throw std::invalid_argument("graph: map must have positive dimensions");
    }
    return ProjectableSet(sets::GraphSubspace{std::move(a)});
  }

  std::size_t dim() const;

  /// Nearest point of the set: argmin_{y in S} ||x - y||.
  Vector project(const Vector& x) const;

  /// True iff ||x - project(x)|| <= tol.
  bool contains(const Vector& x, double tol) const { return distance_to(x) <= tol; }

  double distance_to(const Vector& x) const { return distance(x, project(x)); }

  const Variant& data() const { return v_; }

  template <class T>
  bool is() const {
    return std::holds_alternative<T>(v_);
  }

 private:
  explicit ProjectableSet(Variant v) : v_(std::move(v)) {}
  Variant v_;
};

inline ProjectableSet ProjectableSet::product(std::vector<ProjectableSet> blocks) {
  if (blocks.empty()) throw std::invalid_argument("product: needs at least one block");
  std::size_t dim = 0;
  for (const auto& b : blocks) dim += b.dim();
  return ProjectableSet(sets::BlockProduct{std::move(blocks), dim});
}

inline std::size_t ProjectableSet::dim() const {
  return std::visit(
      [](const auto& s) -> std::size_t {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, sets::WholeSpace>) {
          return s.dim;
        } else if constexpr (std::is_same_v<T, sets::Box>) {
          return s.lower.size();
        } else if constexpr (std::is_same_v<T, sets::Ball>) {
          return s.center.size();
        } else if constexpr (std::is_same_v<T, sets::HalfSpace> ||
                             std::is_same_v<T, sets::Hyperplane>) {
          return s.normal.size();
        } else if constexpr (std::is_same_v<T, sets::AffineSubspace>) {
          return s.anchor.size();
        } else if constexpr (std::is_same_v<T, sets::BlockProduct>) {
          return s.dim;
        } else {
          return s.map.cols() + s.map.rows();
        }
      },
      v_);
}

inline std::pair<Vector, Vector> project_onto_graph(const LinearMap& a, const Vector& x,
                                                    const Vector& y) {
  detail::require_dim("project_onto_graph", a.cols(), x.size());
  detail::require_dim("project_onto_graph", a.rows(), y.size());
  Vector u = solve_regularized_normal(a, x + a.apply_adjoint(y));
  Vector v = a.apply(u);
  return {std::move(u), std::move(v)};
}

inline Vector ProjectableSet::project(const Vector& x) const {
  detail::require_dim("project", dim(), x.size());
  return std::visit(
      [&x](const auto& s) -> Vector {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, sets::WholeSpace>) {
          return x;
        } else if constexpr (std::is_same_v<T, sets::Box>) {
          std::vector<double> r(x.size());
          for (std::size_t i = 0; i < x.size(); ++i) {
            r[i] = std::min(std::max(x[i], s.lower[i]), s.upper[i]);
          }
          return Vector(std::move(r));
        } else if constexpr (std::is_same_v<T, sets::Ball>) {
          const Vector d = x - s.center;
          const double dist = norm(d);
          if (dist <= s.radius) return x;
          return s.center + (s.radius / dist) * d;
        } else if constexpr (std::is_same_v<T, sets::HalfSpace>) {
          const double excess = dot(s.normal, x) - s.offset;
          if (excess <= 0.0) return x;
          return x - (excess / s.normal_sq) * s.normal;
        } else if constexpr (std::is_same_v<T, sets::Hyperplane>) {
          const double excess = dot(s.normal, x) - s.offset;
          return x - (excess / s.normal_sq) * s.normal;
        } else if constexpr (std::is_same_v<T, sets::AffineSubspace>) {
          Vector r = s.anchor;
          const Vector d = x - s.anchor;
          for (const Vector& q : s.basis) r = r + dot(d, q) * q;
          return r;
        } else if constexpr (std::is_same_v<T, sets::BlockProduct>) {
          std::vector<double> r;
          r.reserve(x.size());
          std::size_t off = 0;
          for (const auto& b : s.blocks) {
            const Vector p = b.project(segment(x, off, b.dim()));
            r.insert(r.end(), p.begin(), p.end());
            off += b.dim();
          }
          return Vector(std::move(r));
        } else {  // GraphSubspace
          const std::size_t n = s.map.cols();
          const std::size_t m = s.map.rows();
          auto [u, v] = project_onto_graph(s.map, segment(x, 0, n), segment(x, n, m));
          return concat(u, v);
        }
      },
      v_);
}

/// Half-space cut T = {w : <normal, w> <= offset}, or the whole space when the
/// generating displacement vanished. Produced by supporting_halfspace(); the
/// generating projection point lies on the bounding hyperplane.
class HalfSpaceCut {
 public:
  static HalfSpaceCut whole_space(std::size_t dim) { return HalfSpaceCut(Vector(dim), 0.0, true); }

  HalfSpaceCut(Vector normal, double offset)
      : HalfSpaceCut(std::move(normal), offset, false) {}

  bool is_whole_space() const { return whole_; }
  const Vector& normal() const { return normal_; }
  double offset() const { return offset_; }
  std::size_t dim() const { return normal_.size(); }

  Vector project(const Vector& x) const {
    detail::require_dim("HalfSpaceCut::project", normal_.size(), x.size());
    if (whole_) return x;
    const double excess = dot(normal_, x) - offset_;
    if (excess <= 0.0) return x;
    return x - (excess / normal_sq_) * normal_;
  }

  bool contains(const Vector& x, double tol) const {
    if (whole_) return true;
    return dot(normal_, x) - offset_ <= tol * std::sqrt(normal_sq_);
  }

 private:
  HalfSpaceCut(Vector normal, double offset, bool whole)
      : normal_(std::move(normal)), offset_(offset), whole_(whole) {
    normal_sq_ = dot(normal_, normal_);
    if (!whole_ && normal_sq_ == 0.0) {
      throw std::invalid_argument("HalfSpaceCut: zero normal");
    }
  }

  Vector normal_;
  double offset_ = 0.0;
  double normal_sq_ = 0.0;
  bool whole_ = false;
};

constexpr double kCutDegenerateTol = 1e-14;

/// Cut through a precomputed projection: y must equal project(C, z). The
/// bounding hyperplane supports C at y, and C lies inside the cut by the
/// variational characterization of the projection.
inline HalfSpaceCut make_supporting_cut(const Vector& z, const Vector& y) {
  detail::require_dim("make_supporting_cut", z.size(), y.size());
  const Vector d = z - y;
  if (norm(d) <= kCutDegenerateTol) return HalfSpaceCut::whole_space(z.size());
  return HalfSpaceCut(d, dot(d, y));
}

/// Half-space containing C whose boundary supports C at project(C, z).
inline HalfSpaceCut supporting_halfspace(const ProjectableSet& c, const Vector& z) {
  return make_supporting_cut(z, c.project(z));
}

}  // namespace splitvi
