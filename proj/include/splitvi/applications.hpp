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
#include <optional>
#include <utility>
#include <vector>

#include "splitvi/split.hpp"

namespace splitvi {

/// Split feasibility: find x in C with A x in Q.
class SfpProblem {
 public:
  SfpProblem(ProjectableSet c, ProjectableSet q, LinearMap a)
      : c_(std::move(c)), q_(std::move(q)), a_(std::move(a)) {
    detail::require_dim("SfpProblem: C vs A.cols", a_.cols(), c_.dim());
    detail::require_dim("SfpProblem: Q vs A.rows", a_.rows(), q_.dim());
  }

  const ProjectableSet& source_set() const { return c_; }
  const ProjectableSet& target_set() const { return q_; }
  const LinearMap& map() const { return a_; }

  /// The zero-field split problem this is a special case of.
  SvipProblem as_svip() const {
    return SvipProblem(c_, q_, VectorField::zero(c_.dim()), VectorField::zero(q_.dim()), a_);
  }

 private:
  ProjectableSet c_;
  ProjectableSet q_;
  LinearMap a_;
};

/// The CQ iteration x <- P_C(x + gamma A^T (P_Q - I)(A x)). Identical,
/// iterate for iterate, to the direct split solver with zero fields.
/// Terminates when max(||x - P_C(x)||, ||A x - P_Q(A x)||) <= tol.
inline SolveReport solve_sfp_cq(const SfpProblem& p, double gamma, double tol,
                                std::size_t max_iter, const Vector& x0,
                                const std::optional<Vector>& reference = {}) {
  detail::require_dim("solve_sfp_cq", p.map().cols(), x0.size());
  if (!(tol > 0.0)) throw ConfigError("split config rejected: tol <= 0");
  const auto est = estimate_spectral_radius(p.map());
  if (!(gamma > 0.0) || !std::isfinite(gamma)) {
    throw ConfigError("split config rejected: gamma <= 0");
  }
  if (est.value > 0.0 && !(gamma < 1.0 / est.value)) {
    throw ConfigError("split config rejected: gamma >= 1/L");
  }

  SolveReport rep;
  rep.gamma = gamma;
  rep.spectral_bound = est.value;

  Vector x = x0;
  double prev_step = 0.0;
  for (std::size_t k = 0;; ++k) {
    const Vector ax = p.map().apply(x);
    const Vector d = p.target_set().project(ax) - ax;

    TraceRecord rec;
    rec.k = k;
    rec.res_primary = distance(x, p.source_set().project(x));
    rec.res_split = norm(d);
    rec.step_norm = prev_step;
    rec.driving_norm = rec.res_split;
    if (reference) rec.dist_to_ref = distance(x, *reference);
    rec.point = x;
    rep.trace.push_back(std::move(rec));

    const double res = std::max(rep.trace.back().res_primary, rep.trace.back().res_split);
    if (res <= tol) {
      rep.status = SolveStatus::converged;
      rep.iterations = k;
      break;
    }
    if (k == max_iter) {
      rep.status = SolveStatus::max_iter;
      rep.iterations = k;
      rep.message = "iteration limit reached before the residual fell below tol";
      break;
    }
    const Vector u = x + gamma * p.map().apply_adjoint(d);
    Vector next = p.source_set().project(u);
    prev_step = distance(next, x);
    x = std::move(next);
  }
  rep.final_point = std::move(x);
  return rep;
}

/// Minimum-norm split feasibility: the split problem with f = I and g = 0,
/// whose solution is the feasible point closest to the origin.
inline SolveReport solve_sfp_min_norm(const SfpProblem& p, const SplitConfig& cfg,
                                      const Vector& x0) {
  SvipProblem svip(p.source_set(), p.target_set(), VectorField::identity(p.source_set().dim()),
                   VectorField::zero(p.target_set().dim()), p.map());
  return solve_svip_direct(svip, cfg, x0);
}

/// Common-VIP-point problem lifted to a constrained VIP on R^{p*n}:
/// constraint set = product of the C_i, Omega = the diagonal {(a, ..., a)},
/// field = blockwise application of the f_i.
struct CvippProduct {
  CvipProblem problem;
  std::size_t copies;     // p
  std::size_t block_dim;  // n

  Vector pack(const Vector& x) const { return replicate(x, copies); }

  /// Consensus block: the average of the p blocks (they coincide on the
  /// diagonal).
  Vector unpack(const Vector& xs) const {
    std::vector<double> avg(block_dim, 0.0);
    for (std::size_t c = 0; c < copies; ++c) {
      for (std::size_t i = 0; i < block_dim; ++i) avg[i] += xs[c * block_dim + i];
    }
    for (double& v : avg) v /= static_cast<double>(copies);
    return Vector(std::move(avg));
  }
};

inline CvippProduct build_cvipp(const std::vector<VectorField>& fields,
                                const std::vector<ProjectableSet>& sets) {
  if (fields.empty() || fields.size() != sets.size()) {
    throw std::invalid_argument("build_cvipp: needs equally many fields and sets (>= 1)");
  }
  const std::size_t n = sets.front().dim();
  const std::size_t p = sets.size();
  for (std::size_t i = 0; i < p; ++i) {
    detail::require_dim("build_cvipp: set dims", n, sets[i].dim());
    detail::require_dim("build_cvipp: field dims", n, fields[i].dim());
  }

  VectorField block = fields.front();
  for (std::size_t i = 1; i < p; ++i) block = product_field(block, fields[i]);

  // Diagonal subspace: orthonormal basis (e_j, ..., e_j)/sqrt(p); projecting
  // replicates the block average.
  std::vector<Vector> basis;
  basis.reserve(n);
  const double scale = 1.0 / std::sqrt(static_cast<double>(p));
  for (std::size_t j = 0; j < n; ++j) {
    std::vector<double> b(p * n, 0.0);
    for (std::size_t c = 0; c < p; ++c) b[c * n + j] = scale;
    basis.push_back(Vector(std::move(b)));
  }
  ProjectableSet diagonal = ProjectableSet::affine_subspace(basis, Vector(p * n));
  ProjectableSet product = ProjectableSet::product({sets.begin(), sets.end()});

  CvipProblem prob(std::move(product), std::move(diagonal), std::move(block));
  return {std::move(prob), p, n};
}

/// Convenience driver: replicate x0 across the blocks, solve the lifted
/// problem, and report the consensus point.
inline SolveReport solve_cvipp(const CvippProduct& cp, const CvipConfig& cfg, const Vector& x0) {
  detail::require_dim("solve_cvipp", cp.block_dim, x0.size());
  CvipConfig lifted_cfg = cfg;
  if (cfg.reference && cfg.reference->size() == cp.block_dim) {
    lifted_cfg.reference = cp.pack(*cfg.reference);
  }
  SolveReport rep = solve_cvip(cp.problem, lifted_cfg, cp.pack(x0));
  rep.final_point = cp.unpack(rep.final_point);
  return rep;
}

/// Split minimization of the quadratics F(x) = x'M1 x/2 + q1'x over C and
/// G(y) = y'M2 y/2 + q2'y over Q, expressed through the gradient fields.
/// M1, M2 must be symmetric positive semidefinite (rejected otherwise).
inline SvipProblem build_smp(const LinearMap& m1, const Vector& q1, const LinearMap& m2,
                             const Vector& q2, ProjectableSet c, ProjectableSet q, LinearMap a) {
  VectorField grad_f = VectorField::affine(m1, q1);
  VectorField grad_g = VectorField::affine(m2, q2);
  return SvipProblem(std::move(c), std::move(q), std::move(grad_f), std::move(grad_g),
                     std::move(a));
}

/// Split zeros: find x with B1(x) = 0 and B2(A x) = 0. Both operators must
/// carry ISM moduli; solved through the whole-space split problem and
/// verified by check_szp afterwards.
class SzpProblem {
 public:
  SzpProblem(VectorField b1, VectorField b2, LinearMap a)
      : b1_(std::move(b1)), b2_(std::move(b2)), a_(std::move(a)) {
    detail::require_dim("SzpProblem: B1 vs A.cols", a_.cols(), b1_.dim());
    detail::require_dim("SzpProblem: B2 vs A.rows", a_.rows(), b2_.dim());
    if (!b1_.is_ism() || !b2_.is_ism()) {
      throw std::invalid_argument("SzpProblem: B1 and B2 must be ISM operators");
    }
  }

  const VectorField& b1() const { return b1_; }
  const VectorField& b2() const { return b2_; }
  const LinearMap& map() const { return a_; }

  SvipProblem as_svip() const {
    return SvipProblem(ProjectableSet::whole_space(b1_.dim()),
                       ProjectableSet::whole_space(b2_.dim()), b1_, b2_, a_);
  }

 private:
  VectorField b1_;
  VectorField b2_;
  LinearMap a_;
};

struct SzpCheck {
  bool is_solution = false;
  double norm_b1 = 0.0;
  double norm_b2 = 0.0;
};

inline SzpCheck check_szp(const SzpProblem& p, const Vector& x, double tol) {
  detail::require_dim("check_szp", p.b1().dim(), x.size());
  SzpCheck r;
  r.norm_b1 = norm(p.b1()(x));
  r.norm_b2 = norm(p.b2()(p.map().apply(x)));
  r.is_solution = r.norm_b1 <= tol && r.norm_b2 <= tol;
  return r;
}

/// Runs the direct split solver on the whole-space recast and attaches the
/// zero-check norms at the final point as metrics.
inline SolveReport solve_szp(const SzpProblem& p, const SplitConfig& cfg, const Vector& x0) {
  SolveReport rep = solve_svip_direct(p.as_svip(), cfg, x0);
  const SzpCheck check = check_szp(p, rep.final_point, 10.0 * cfg.tol);
  rep.metrics.emplace_back("szp_norm_b1", check.norm_b1);
  rep.metrics.emplace_back("szp_norm_b2", check.norm_b2);
  rep.metrics.emplace_back("szp_is_solution", check.is_solution ? 1.0 : 0.0);
  return rep;
}

}  // namespace splitvi
