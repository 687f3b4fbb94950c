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
#include <functional>
#include <optional>
#include <utility>

#include "splitvi/operators.hpp"
#include "splitvi/report.hpp"

namespace splitvi {

/// Per-iteration parameter rule confined to [lo, hi]. Defaults to the
/// constant midpoint when no functor is given; functor values are clamped
/// into the interval so schedule bugs cannot violate solver hypotheses.
class Schedule {
 public:
  Schedule(double lo, double hi, std::function<double(std::size_t)> fn = {})
      : lo_(lo), hi_(hi), fn_(std::move(fn)) {
    if (!(lo <= hi) || !std::isfinite(lo) || !std::isfinite(hi)) {
      throw std::invalid_argument("Schedule: requires finite lo <= hi");
    }
  }

  static Schedule constant(double v) { return Schedule(v, v); }

  double lo() const { return lo_; }
  double hi() const { return hi_; }
  double midpoint() const { return 0.5 * (lo_ + hi_); }

  double at(std::size_t k) const {
    if (!fn_) return midpoint();
    return std::clamp(fn_(k), lo_, hi_);
  }

 private:
  double lo_;
  double hi_;
  std::function<double(std::size_t)> fn_;
};

/// Constrained VIP: find x* in C intersect Omega with <f(x*), x - x*> >= 0
/// for every x in C. f must be Lipschitz with a known constant kappa > 0.
class CvipProblem {
 public:
  CvipProblem(ProjectableSet c, ProjectableSet omega, VectorField f)
      : c_(std::move(c)), omega_(std::move(omega)), f_(std::move(f)) {
    detail::require_dim("CvipProblem", c_.dim(), omega_.dim());
    detail::require_dim("CvipProblem", c_.dim(), f_.dim());
    if (!(f_.lipschitz() > 0.0)) {
      throw std::invalid_argument("CvipProblem: f must have Lipschitz constant kappa > 0");
    }
  }

  const ProjectableSet& constraint_set() const { return c_; }
  const ProjectableSet& omega() const { return omega_; }
  const VectorField& field() const { return f_; }
  std::size_t dim() const { return c_.dim(); }
  double kappa() const { return f_.lipschitz(); }

 private:
  ProjectableSet c_;
  ProjectableSet omega_;
  VectorField f_;
};

struct CvipConfig {
  Schedule lambda;  // in [a, b] within (0, 1/kappa)
  Schedule alpha;   // in [c, d] within (0, 1)
  double tol = 1e-8;
  std::size_t max_iter = 100000;
  std::optional<Vector> reference;  // known solution; enables dist_to_ref in the trace

  /// Constant schedules satisfying the convergence hypotheses for the given
  /// Lipschitz constant: lambda = 0.45/kappa (midpoint safety), alpha = 0.5.
  static CvipConfig defaults(double kappa) {
    if (!(kappa > 0.0)) throw std::invalid_argument("CvipConfig: kappa must be > 0");
    return CvipConfig{Schedule::constant(0.45 / kappa), Schedule::constant(0.5)};
  }
};

/// Rejects schedule intervals that violate the convergence hypotheses; the
/// message names the violated bound.
inline void validate_config(const CvipProblem& p, const CvipConfig& cfg) {
  const double inv_kappa = 1.0 / p.kappa();
  if (!(cfg.lambda.lo() > 0.0)) throw ConfigError("cvip config rejected: a <= 0 (lambda)");
  if (!(cfg.lambda.hi() < inv_kappa)) {
    throw ConfigError("cvip config rejected: b >= 1/kappa (lambda)");
  }
  if (!(cfg.alpha.lo() > 0.0)) throw ConfigError("cvip config rejected: c <= 0 (alpha)");
  if (!(cfg.alpha.hi() < 1.0)) throw ConfigError("cvip config rejected: d >= 1 (alpha)");
  if (!(cfg.tol > 0.0)) throw ConfigError("cvip config rejected: tol <= 0");
  if (cfg.reference && cfg.reference->size() != p.dim()) {
    throw DimensionError("cvip reference", p.dim(), cfg.reference->size());
  }
}

struct CvipStepResult {
  Vector next;           // x^{k+1}
  Vector extragradient;  // y^k, always a point of C
  HalfSpaceCut cut;      // T_k; supports C at y^k
};

/// One relaxed extragradient step:
///   y      = P_C(x - lambda f(x))
///   T      = half-space supporting C at y
///   x_next = alpha x + (1 - alpha) P_Omega(P_T(x - lambda f(y))).
inline CvipStepResult cvip_step(const CvipProblem& p, const Vector& x, double lambda,
                                double alpha) {
  detail::require_dim("cvip_step", p.dim(), x.size());
  const Vector z = x - lambda * p.field()(x);
  Vector y = p.constraint_set().project(z);
  HalfSpaceCut cut = make_supporting_cut(z, y);
  const Vector w = x - lambda * p.field()(y);
  const Vector corrected = p.omega().project(cut.project(w));
  Vector next = alpha * x + (1.0 - alpha) * corrected;
  return {std::move(next), std::move(y), std::move(cut)};
}

/// Runs the extragradient iteration until
///   max(||x - P_C(x - lambda_ref f(x))||, dist(x, Omega)) <= tol
/// or max_iter steps. lambda_ref is the midpoint of the lambda interval and
/// is used only for the residual metric, never for stepping.
inline SolveReport solve_cvip(const CvipProblem& p, const CvipConfig& cfg, const Vector& x0) {
  validate_config(p, cfg);
  detail::require_dim("solve_cvip", p.dim(), x0.size());
  const double lambda_ref = cfg.lambda.midpoint();

  SolveReport rep;
  rep.lambda = lambda_ref;
  Vector x = x0;
  double prev_step = 0.0;
  for (std::size_t k = 0;; ++k) {
    TraceRecord rec;
    rec.k = k;
    rec.res_primary = vip_residual(p.constraint_set(), p.field(), lambda_ref, x);
    rec.res_split = p.omega().distance_to(x);
    rec.step_norm = prev_step;
    if (cfg.reference) rec.dist_to_ref = distance(x, *cfg.reference);
    rec.point = x;
    rep.trace.push_back(std::move(rec));

    const double res = std::max(rep.trace.back().res_primary, rep.trace.back().res_split);
    if (res <= cfg.tol) {
      rep.status = SolveStatus::converged;
      rep.iterations = k;
      break;
    }
    if (k == cfg.max_iter) {
      rep.status = SolveStatus::max_iter;
      rep.iterations = k;
      rep.message = "iteration limit reached before the residual fell below tol";
      break;
    }
    Vector next = cvip_step(p, x, cfg.lambda.at(k), cfg.alpha.at(k)).next;
    prev_step = distance(next, x);
    x = std::move(next);
  }
  rep.final_point = std::move(x);
  return rep;
}

}  // namespace splitvi
