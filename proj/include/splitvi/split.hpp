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

#include "splitvi/cvip.hpp"
#include "splitvi/operators.hpp"
#include "splitvi/report.hpp"

namespace splitvi {

/// Split VIP: find x* solving VIP(C, f) whose image A x* solves VIP(Q, g).
/// The solution set is Gamma = {z in SOL(C,f) : Az in SOL(Q,g)}; it has no
/// finite representation and appears only through residuals.
class SvipProblem {
 public:
  SvipProblem(ProjectableSet c, ProjectableSet q, VectorField f, VectorField g, LinearMap a)
      : c_(std::move(c)), q_(std::move(q)), f_(std::move(f)), g_(std::move(g)), a_(std::move(a)) {
    detail::require_dim("SvipProblem: C vs A.cols", a_.cols(), c_.dim());
    detail::require_dim("SvipProblem: Q vs A.rows", a_.rows(), q_.dim());
    detail::require_dim("SvipProblem: f vs C", c_.dim(), f_.dim());
    detail::require_dim("SvipProblem: g vs Q", q_.dim(), g_.dim());
  }

  const ProjectableSet& source_set() const { return c_; }
  const ProjectableSet& target_set() const { return q_; }
  const VectorField& source_field() const { return f_; }
  const VectorField& target_field() const { return g_; }
  const LinearMap& map() const { return a_; }
  std::size_t source_dim() const { return c_.dim(); }
  std::size_t target_dim() const { return q_.dim(); }

  /// min{alpha_1, alpha_2}; unbounded when both fields admit any modulus.
  double min_ism() const { return std::min(f_.ism(), g_.ism()); }

 private:
  ProjectableSet c_;
  ProjectableSet q_;
  VectorField f_;
  VectorField g_;
  LinearMap a_;
};

/// Multiple-set split VIP: p set/field pairs in the source space, r in the
/// target space, coupled by A, with positive averaging weights.
class MssvipProblem {
 public:
  MssvipProblem(std::vector<ProjectableSet> c_list, std::vector<VectorField> f_list,
                std::vector<ProjectableSet> q_list, std::vector<VectorField> g_list, LinearMap a,
                std::vector<double> alpha_weights, std::vector<double> beta_weights)
      : c_(std::move(c_list)), f_(std::move(f_list)), q_(std::move(q_list)),
        g_(std::move(g_list)), a_(std::move(a)), alpha_w_(std::move(alpha_weights)),
        beta_w_(std::move(beta_weights)) {
    if (c_.empty()) throw std::invalid_argument("MssvipProblem: needs at least one source set");
    if (c_.size() != f_.size() || c_.size() != alpha_w_.size()) {
      throw std::invalid_argument("MssvipProblem: C_list, f_list, alpha_weights sizes differ");
    }
    if (q_.size() != g_.size() || q_.size() != beta_w_.size()) {
      throw std::invalid_argument("MssvipProblem: Q_list, g_list, beta_weights sizes differ");
    }
    for (std::size_t i = 0; i < c_.size(); ++i) {
      detail::require_dim("MssvipProblem: C_i vs A.cols", a_.cols(), c_[i].dim());
      detail::require_dim("MssvipProblem: f_i vs C_i", c_[i].dim(), f_[i].dim());
    }
    for (std::size_t j = 0; j < q_.size(); ++j) {
      detail::require_dim("MssvipProblem: Q_j vs A.rows", a_.rows(), q_[j].dim());
      detail::require_dim("MssvipProblem: g_j vs Q_j", q_[j].dim(), g_[j].dim());
    }
    for (double w : alpha_w_) {
      if (!(w > 0.0) || !std::isfinite(w)) {
        throw std::invalid_argument("MssvipProblem: alpha weights must be > 0");
      }
    }
    for (double w : beta_w_) {
      if (!(w > 0.0) || !std::isfinite(w)) {
        throw std::invalid_argument("MssvipProblem: beta weights must be > 0");
      }
    }
  }

  std::size_t source_count() const { return c_.size(); }
  std::size_t target_count() const { return q_.size(); }
  const std::vector<ProjectableSet>& source_sets() const { return c_; }
  const std::vector<VectorField>& source_fields() const { return f_; }
  const std::vector<ProjectableSet>& target_sets() const { return q_; }
  const std::vector<VectorField>& target_fields() const { return g_; }
  const LinearMap& map() const { return a_; }
  const std::vector<double>& alpha_weights() const { return alpha_w_; }
  const std::vector<double>& beta_weights() const { return beta_w_; }
  std::size_t source_dim() const { return a_.cols(); }

  double min_ism() const {
    double m = kIsmUnbounded;
    for (const auto& h : f_) m = std::min(m, h.ism());
    for (const auto& h : g_) m = std::min(m, h.ism());
    return m;
  }

 private:
  std::vector<ProjectableSet> c_;
  std::vector<VectorField> f_;
  std::vector<ProjectableSet> q_;
  std::vector<VectorField> g_;
  LinearMap a_;
  std::vector<double> alpha_w_;
  std::vector<double> beta_w_;
};

/// Step-size configuration for the split solvers. Omitted values are resolved
/// per problem: lambda from the ISM moduli, gamma from the estimated spectral
/// bound L deflated by gamma_safety.
struct SplitConfig {
  std::optional<double> lambda;  // in (0, 2*alpha]
  std::optional<double> gamma;   // in (0, 1/L)
  double tol = 1e-8;
  std::size_t max_iter = 100000;
  double gamma_safety = 0.9;  // fraction of 1/L used when gamma is defaulted
  std::optional<Vector> reference;
};

/// Numeric parameters after defaulting and validation.
struct ResolvedSplitConfig {
  double lambda = 0.0;
  double gamma = 0.0;
  double tol = 0.0;
  std::size_t max_iter = 0;
  double spectral_bound = 0.0;  // the L used in the gamma bound
};

namespace detail {

inline double default_lambda(double alpha) {
  if (alpha == kIsmUnbounded) return 1.0;  // zero fields: T, U are plain projections
  return 0.5 * std::min(1.0, 2.0 * alpha);
}

/// Default gamma stays strictly inside (0, 1/L) even under estimation error:
/// the estimate is inflated by its tolerance (and further when the power
/// iteration did not converge) before applying the safety fraction.
inline double default_gamma(const SpectralEstimate& est, double safety) {
  if (est.value <= 0.0) return 1.0;  // zero map: the correction term vanishes
  double inflated = est.value * (1.0 + kSpectralTolDefault);
  if (!est.converged) inflated = est.value * 2.0;
  return safety / inflated;
}

inline void check_split_steps(double lambda, double gamma, double alpha, double spectral_bound) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) {
    throw ConfigError("split config rejected: lambda <= 0");
  }
  if (alpha != kIsmUnbounded && lambda > 2.0 * alpha) {
    throw ConfigError("split config rejected: lambda > 2*alpha");
  }
  if (!(gamma > 0.0) || !std::isfinite(gamma)) {
    throw ConfigError("split config rejected: gamma <= 0");
  }
  if (spectral_bound > 0.0 && !(gamma < 1.0 / spectral_bound)) {
    throw ConfigError("split config rejected: gamma >= 1/L");
  }
}

}  // namespace detail

/// Resolves defaults and validates the hypotheses of the direct split solver:
/// both fields ISM, lambda in (0, 2*alpha], gamma in (0, 1/L) with L the
/// spectral radius of A^T A.
inline ResolvedSplitConfig resolve_config(const SvipProblem& p, const SplitConfig& cfg) {
  if (!p.source_field().is_ism() || !p.target_field().is_ism()) {
    throw ConfigError("split config rejected: fields must be ISM (alpha > 0) for this solver");
  }
  if (!(cfg.tol > 0.0)) throw ConfigError("split config rejected: tol <= 0");
  if (!(cfg.gamma_safety > 0.0 && cfg.gamma_safety < 1.0)) {
    throw ConfigError("split config rejected: gamma_safety outside (0, 1)");
  }
  const auto est = estimate_spectral_radius(p.map());
  const double alpha = p.min_ism();
  ResolvedSplitConfig r;
  r.lambda = cfg.lambda ? *cfg.lambda : detail::default_lambda(alpha);
  r.gamma = cfg.gamma ? *cfg.gamma : detail::default_gamma(est, cfg.gamma_safety);
  r.tol = cfg.tol;
  r.max_iter = cfg.max_iter;
  r.spectral_bound = est.value;
  detail::check_split_steps(r.lambda, r.gamma, alpha, r.spectral_bound);
  if (cfg.reference && cfg.reference->size() != p.source_dim()) {
    throw DimensionError("split reference", p.source_dim(), cfg.reference->size());
  }
  return r;
}

/// One step of the direct method: x <- U(x + gamma A^T (T - I)(A x)) with
/// U = P_C(I - lambda f) and T = P_Q(I - lambda g).
inline Vector svip_direct_step(const SvipProblem& p, const ResolvedSplitConfig& rc,
                               const Vector& x) {
  detail::require_dim("svip_direct_step", p.source_dim(), x.size());
  const ForwardBackwardMap backward_u(p.source_set(), p.source_field(), rc.lambda);
  const ForwardBackwardMap backward_t(p.target_set(), p.target_field(), rc.lambda);
  const Vector ax = p.map().apply(x);
  const Vector d = backward_t(ax) - ax;
  const Vector u = x + rc.gamma * p.map().apply_adjoint(d);
  return backward_u(u);
}

inline Vector svip_direct_step(const SvipProblem& p, const SplitConfig& cfg, const Vector& x) {
  return svip_direct_step(p, resolve_config(p, cfg), x);
}

/// Iterates the direct method until
///   max(||x - U(x)||, ||(T - I)(A x)||) <= tol
/// or max_iter. The trace records the driving norm ||(T - I)(A x^k)|| and,
/// when a reference z is supplied, the distances of both x^k and the
/// intermediate u^k to z (the sequence x^1, u^1, x^2, u^2, ... is
/// Fejer-monotone with respect to the solution set).
inline SolveReport solve_svip_direct(const SvipProblem& p, const SplitConfig& cfg,
                                     const Vector& x0) {
  const ResolvedSplitConfig rc = resolve_config(p, cfg);
  detail::require_dim("solve_svip_direct", p.source_dim(), x0.size());
  const ForwardBackwardMap backward_u(p.source_set(), p.source_field(), rc.lambda);
  const ForwardBackwardMap backward_t(p.target_set(), p.target_field(), rc.lambda);

  SolveReport rep;
  rep.lambda = rc.lambda;
  rep.gamma = rc.gamma;
  rep.spectral_bound = rc.spectral_bound;

  Vector x = x0;
  double prev_step = 0.0;
  for (std::size_t k = 0;; ++k) {
    const Vector ax = p.map().apply(x);
    const Vector d = backward_t(ax) - ax;

    TraceRecord rec;
    rec.k = k;
    rec.res_primary = distance(x, backward_u(x));
    rec.res_split = norm(d);
    rec.step_norm = prev_step;
    rec.driving_norm = rec.res_split;
    if (cfg.reference) rec.dist_to_ref = distance(x, *cfg.reference);
    rec.point = x;
    rep.trace.push_back(std::move(rec));

    const double res = std::max(rep.trace.back().res_primary, rep.trace.back().res_split);
    if (res <= rc.tol) {
      rep.status = SolveStatus::converged;
      rep.iterations = k;
      break;
    }
    if (k == rc.max_iter) {
      rep.status = SolveStatus::max_iter;
      rep.iterations = k;
      rep.message = "iteration limit reached before the residual fell below tol";
      break;
    }
    const Vector u = x + rc.gamma * p.map().apply_adjoint(d);
    if (cfg.reference) rep.trace.back().dist_u_to_ref = distance(u, *cfg.reference);
    Vector next = backward_u(u);
    prev_step = distance(next, x);
    x = std::move(next);
  }
  rep.final_point = std::move(x);
  return rep;
}

/// Combines f and g into the product field h(x, y) = (f(x), g(y)). The
/// Lipschitz constant is max{kappa_1, kappa_2} (the provable bound for the
/// block map) and the ISM modulus is min{alpha_1, alpha_2}.
inline VectorField product_field(const VectorField& f, const VectorField& g) {
  const std::size_t n = f.dim();
  const std::size_t m = g.dim();
  if (f.is_zero() && g.is_zero()) return VectorField::zero(n + m);
  if (f.kind() == VectorField::Kind::identity && g.kind() == VectorField::Kind::identity) {
    return VectorField::identity(n + m);
  }
  std::vector<std::vector<double>> rows(n + m, std::vector<double>(n + m, 0.0));
  std::vector<double> q(n + m, 0.0);
  auto fill_block = [&rows, &q](const VectorField& h, std::size_t off) {
    switch (h.kind()) {
      case VectorField::Kind::zero:
        break;
      case VectorField::Kind::identity:
        for (std::size_t i = 0; i < h.dim(); ++i) rows[off + i][off + i] = 1.0;
        break;
      case VectorField::Kind::affine:
        for (std::size_t i = 0; i < h.dim(); ++i) {
          for (std::size_t j = 0; j < h.dim(); ++j) rows[off + i][off + j] = h.matrix()(i, j);
          q[off + i] = h.offset()[i];
        }
        break;
    }
  };
  fill_block(f, 0);
  fill_block(g, n);
  const double kappa = std::max(f.lipschitz(), g.lipschitz());
  const double ism = std::min(f.ism(), g.ism());
  return VectorField::affine_with_constants(LinearMap(rows), Vector(std::move(q)), kappa, ism);
}

/// A split problem recast as a constrained VIP on the product space:
/// constraint set D = C x Q, constraint Omega = graph of A, field h = (f, g).
struct ProductCvip {
  CvipProblem problem;
  std::size_t source_dim;
  std::size_t target_dim;

  Vector pack(const Vector& x, const Vector& y) const { return concat(x, y); }
  std::pair<Vector, Vector> unpack(const Vector& xy) const {
    return {segment(xy, 0, source_dim), segment(xy, source_dim, target_dim)};
  }
};

inline ProductCvip build_product_cvip(const SvipProblem& p) {
  ProjectableSet d = ProjectableSet::product({p.source_set(), p.target_set()});
  ProjectableSet v = ProjectableSet::graph(p.map());
  CvipProblem prod(std::move(d), std::move(v), product_field(p.source_field(), p.target_field()));
  return {std::move(prod), p.source_dim(), p.target_dim()};
}

/// Solves the split problem through the product-space constrained VIP and
/// unpacks the blocks. The report's final_point is the source-space solution,
/// final_point_secondary the target-space block; metrics carry the split
/// residuals of the original problem at the final point.
inline SolveReport solve_svip_product(const SvipProblem& p, const CvipConfig& cfg,
                                      const Vector& x0, const Vector& y0) {
  detail::require_dim("solve_svip_product: x0", p.source_dim(), x0.size());
  detail::require_dim("solve_svip_product: y0", p.target_dim(), y0.size());
  const ProductCvip pc = build_product_cvip(p);

  CvipConfig product_cfg = cfg;
  if (cfg.reference && cfg.reference->size() == p.source_dim()) {
    product_cfg.reference = concat(*cfg.reference, p.map().apply(*cfg.reference));
  }
  SolveReport rep = solve_cvip(pc.problem, product_cfg, pc.pack(x0, y0));

  auto [x, y] = pc.unpack(rep.final_point);
  const Vector ax = p.map().apply(x);
  const double lambda_ref = cfg.lambda.midpoint();
  rep.metrics.emplace_back("split_res_source",
                           vip_residual(p.source_set(), p.source_field(), lambda_ref, x));
  rep.metrics.emplace_back("split_res_target",
                           vip_residual(p.target_set(), p.target_field(), lambda_ref, ax));
  rep.metrics.emplace_back("coupling_residual", distance(ax, y));
  rep.final_point = std::move(x);
  rep.final_point_secondary = std::move(y);
  return rep;
}

/// Resolves defaults and validates the parallel method's hypotheses:
/// all fields ISM, lambda in (0, 2*alpha], gamma in (0, 1/L) with
/// L = sum(alpha_i) + sum(beta_j) * ||A||^2.
inline ResolvedSplitConfig resolve_config(const MssvipProblem& p, const SplitConfig& cfg) {
  for (const auto& h : p.source_fields()) {
    if (!h.is_ism()) {
      throw ConfigError("split config rejected: fields must be ISM (alpha > 0) for this solver");
    }
  }
  for (const auto& h : p.target_fields()) {
    if (!h.is_ism()) {
      throw ConfigError("split config rejected: fields must be ISM (alpha > 0) for this solver");
    }
  }
  if (!(cfg.tol > 0.0)) throw ConfigError("split config rejected: tol <= 0");
  if (!(cfg.gamma_safety > 0.0 && cfg.gamma_safety < 1.0)) {
    throw ConfigError("split config rejected: gamma_safety outside (0, 1)");
  }
  double weight_sum = 0.0;
  for (double w : p.alpha_weights()) weight_sum += w;
  SpectralEstimate est;  // ||A||^2 enters only through the beta terms
  double bound = weight_sum;
  if (p.target_count() > 0) {
    est = estimate_spectral_radius(p.map());
    double beta_sum = 0.0;
    for (double w : p.beta_weights()) beta_sum += w;
    bound += beta_sum * est.value;
  }
  const double alpha = p.min_ism();
  ResolvedSplitConfig r;
  r.lambda = cfg.lambda ? *cfg.lambda : detail::default_lambda(alpha);
  // The composite bound is always positive, so the inflation mirrors the
  // direct solver's: widen when the norm estimate did not converge.
  double inflated = bound * (1.0 + kSpectralTolDefault);
  if (p.target_count() > 0 && !est.converged) inflated = bound * 2.0;
  r.gamma = cfg.gamma ? *cfg.gamma : cfg.gamma_safety / inflated;
  r.tol = cfg.tol;
  r.max_iter = cfg.max_iter;
  r.spectral_bound = bound;
  detail::check_split_steps(r.lambda, r.gamma, alpha, r.spectral_bound);
  if (cfg.reference && cfg.reference->size() != p.source_dim()) {
    throw DimensionError("split reference", p.source_dim(), cfg.reference->size());
  }
  return r;
}

/// One step of the parallel method:
///   x <- x + gamma (sum_i alpha_i (U_i - I)(x) + sum_j beta_j A^T (T_j - I)(A x)).
/// Component contributions are accumulated in a fixed order, so runs are
/// bit-for-bit reproducible.
inline Vector mssvip_step(const MssvipProblem& p, const ResolvedSplitConfig& rc,
                          const Vector& x) {
  detail::require_dim("mssvip_step", p.source_dim(), x.size());
  Vector sum(x.size());
  for (std::size_t i = 0; i < p.source_count(); ++i) {
    const ForwardBackwardMap u_i(p.source_sets()[i], p.source_fields()[i], rc.lambda);
    sum = sum + p.alpha_weights()[i] * (u_i(x) - x);
  }
  if (p.target_count() > 0) {
    const Vector ax = p.map().apply(x);
    Vector target_sum(ax.size());
    for (std::size_t j = 0; j < p.target_count(); ++j) {
      const ForwardBackwardMap t_j(p.target_sets()[j], p.target_fields()[j], rc.lambda);
      target_sum = target_sum + p.beta_weights()[j] * (t_j(ax) - ax);
    }
    sum = sum + p.map().apply_adjoint(target_sum);
  }
  return x + rc.gamma * sum;
}

inline Vector mssvip_step(const MssvipProblem& p, const SplitConfig& cfg, const Vector& x) {
  return mssvip_step(p, resolve_config(p, cfg), x);
}

/// Iterates the parallel method until every component residual
/// ||x - U_i(x)|| and ||A x - T_j(A x)|| is <= tol, or max_iter.
inline SolveReport solve_mssvip(const MssvipProblem& p, const SplitConfig& cfg,
                                const Vector& x0) {
  const ResolvedSplitConfig rc = resolve_config(p, cfg);
  detail::require_dim("solve_mssvip", p.source_dim(), x0.size());

  std::vector<ForwardBackwardMap> u_maps;
  std::vector<ForwardBackwardMap> t_maps;
  for (std::size_t i = 0; i < p.source_count(); ++i) {
    u_maps.emplace_back(p.source_sets()[i], p.source_fields()[i], rc.lambda);
  }
  for (std::size_t j = 0; j < p.target_count(); ++j) {
    t_maps.emplace_back(p.target_sets()[j], p.target_fields()[j], rc.lambda);
  }

  SolveReport rep;
  rep.lambda = rc.lambda;
  rep.gamma = rc.gamma;
  rep.spectral_bound = rc.spectral_bound;

  Vector x = x0;
  double prev_step = 0.0;
  for (std::size_t k = 0;; ++k) {
    double res_source = 0.0;
    for (const auto& u_i : u_maps) res_source = std::max(res_source, distance(x, u_i(x)));
    double res_target = 0.0;
    if (!t_maps.empty()) {
      const Vector ax = p.map().apply(x);
      for (const auto& t_j : t_maps) res_target = std::max(res_target, distance(ax, t_j(ax)));
    }

    TraceRecord rec;
    rec.k = k;
    rec.res_primary = res_source;
    rec.res_split = res_target;
    rec.step_norm = prev_step;
    if (cfg.reference) rec.dist_to_ref = distance(x, *cfg.reference);
    rec.point = x;
    rep.trace.push_back(std::move(rec));

    if (std::max(res_source, res_target) <= rc.tol) {
      rep.status = SolveStatus::converged;
      rep.iterations = k;
      break;
    }
    if (k == rc.max_iter) {
      rep.status = SolveStatus::max_iter;
      rep.iterations = k;
      rep.message = "iteration limit reached before the residual fell below tol";
      break;
    }
    Vector next = mssvip_step(p, rc, x);
    prev_step = distance(next, x);
    x = std::move(next);
  }
  rep.final_point = std::move(x);
  return rep;
}

}  // namespace splitvi
