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

#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "splitvi/linalg.hpp"

namespace splitvi {

enum class SolveStatus { converged, max_iter, rejected_config };

inline const char* to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::converged:
      return "converged";
    case SolveStatus::max_iter:
      return "max_iter";
    case SolveStatus::rejected_config:
      return "rejected_config";
  }
  return "unknown";
}

/// One row of a convergence trace. res_primary/res_split are the solver's two
/// termination residuals (what they measure depends on the solver; see the
/// solver's documentation). dist_to_ref is filled only when a reference
/// solution was supplied.
struct TraceRecord {
  std::size_t k = 0;
  double res_primary = 0.0;
  double res_split = 0.0;
  double step_norm = 0.0;
  std::optional<double> dist_to_ref;
  /// ||(T - I)(A x^k)|| for the split solvers (the driving term).
  std::optional<double> driving_norm;
  /// ||u^k - z|| for the intermediate point u^k of the direct split step.
  std::optional<double> dist_u_to_ref;
  /// The iterate x^k itself. Kept for reproducibility checks; problems here
  /// are desk-scale by design.
  Vector point;
};

/// Outcome of a solver run: termination status, final iterate(s), the full
/// per-iteration trace (length = iterations + 1), and the resolved step-size
/// parameters actually used.
struct SolveReport {
  SolveStatus status = SolveStatus::max_iter;
  Vector final_point;
  std::optional<Vector> final_point_secondary;  // y-block of product-space runs
  std::size_t iterations = 0;
  std::vector<TraceRecord> trace;

  std::optional<double> lambda;          // resolved forward-backward step
  std::optional<double> gamma;           // resolved relaxation parameter
  std::optional<double> spectral_bound;  // estimated L gating gamma
  std::string message;

  /// Named scalar diagnostics (split residuals of product runs, zero-norms of
  /// split-zero checks, ...). Ordered, for stable serialization.
  std::vector<std::pair<std::string, double>> metrics;

  double final_residual() const {
    if (trace.empty()) return 0.0;
    return std::max(trace.back().res_primary, trace.back().res_split);
  }
};

/// Flat per-iteration table. Columns: k, res_primary, res_split, step_norm,
/// and dist_to_ref when a reference solution was present.
inline void write_trace_csv(std::ostream& os, const std::vector<TraceRecord>& trace) {
  const bool with_ref = !trace.empty() && trace.front().dist_to_ref.has_value();
  os << "k,res_primary,res_split,step_norm";
  if (with_ref) os << ",dist_to_ref";
  os << '\n';
  os.precision(17);
  for (const auto& r : trace) {
    os << r.k << ',' << r.res_primary << ',' << r.res_split << ',' << r.step_norm;
    if (with_ref) os << ',' << (r.dist_to_ref ? *r.dist_to_ref : 0.0);
    os << '\n';
  }
}

}  // namespace splitvi
