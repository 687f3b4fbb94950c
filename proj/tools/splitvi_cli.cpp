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

// Command-line front end: solve / validate / estimate-l over JSON problem
// files. Exit codes: 0 converged (or ok), 2 max_iter, 3 rejected_config,
// 4 parse or validation error.

#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "splitvi/splitvi.hpp"

namespace {

constexpr int kExitParseError = 4;

int run_solve(const std::string& path, std::optional<double> tol,
              std::optional<std::size_t> max_iter, std::optional<double> gamma,
              std::optional<double> lambda, const std::string& trace_out) {
  splitvi::ProblemFile file = splitvi::load_problem(path);
  if (tol) file.config.tol = *tol;
  if (max_iter) file.config.max_iter = *max_iter;
  if (gamma) file.config.gamma = *gamma;
  if (lambda) file.config.lambda = *lambda;

  const splitvi::SolveReport rep = splitvi::run_problem(file);
  std::cout << splitvi::report_to_json(rep).dump(2) << '\n';

  if (!trace_out.empty() && rep.status != splitvi::SolveStatus::rejected_config) {
    std::ofstream out(trace_out);
    if (!out) {
      std::cerr << "error: cannot write trace to " << trace_out << '\n';
      return kExitParseError;
    }
    splitvi::write_trace_csv(out, rep.trace);
  }
  return splitvi::exit_code(rep.status);
}

int run_validate(const std::string& path) {
  const splitvi::ProblemFile file = splitvi::load_problem(path);
  try {
    splitvi::validate_problem(file);
  } catch (const splitvi::ConfigError& e) {
    std::cerr << "rejected: " << e.what() << '\n';
    return splitvi::exit_code(splitvi::SolveStatus::rejected_config);
  }
  std::cout << "ok: " << splitvi::to_string(file.kind) << " problem is valid\n";
  return 0;
}

int run_estimate_l(const std::string& path) {
  const splitvi::ProblemFile file = splitvi::load_problem(path);
  if (!file.coupling) {
    std::cerr << "error: kind '" << splitvi::to_string(file.kind)
              << "' has no linear map to estimate\n";
    return kExitParseError;
  }
  const auto est = splitvi::estimate_spectral_radius(*file.coupling);
  nlohmann::json j;
  j["spectral_radius_AtA"] = est.value;
  j["converged"] = est.converged;
  j["iterations"] = est.iterations;
  if (file.kind == splitvi::ProblemKind::mssvip) {
    double l = 0.0;
    for (double w : file.alpha_weights) l += w;
    double beta_sum = 0.0;
    for (double w : file.beta_weights) beta_sum += w;
    l += beta_sum * est.value;
    j["composite_L"] = l;
  }
  std::cout << j.dump(2) << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"splitvi: projection-based solvers for split variational inequalities"};
  app.require_subcommand(1);

  std::string path;
  std::optional<double> tol, gamma, lambda;
  std::optional<std::size_t> max_iter;
  std::string trace_out;

  auto* solve = app.add_subcommand("solve", "solve a problem file and print a JSON report");
  solve->add_option("path", path, "problem file (JSON)")->required();
  solve->add_option("--tol", tol, "override termination tolerance");
  solve->add_option("--max-iter", max_iter, "override iteration limit");
  solve->add_option("--gamma", gamma, "override relaxation parameter gamma");
  solve->add_option("--lambda", lambda, "override forward-backward step lambda");
  solve->add_option("--trace-out", trace_out, "write the per-iteration table (CSV) here");

  auto* validate = app.add_subcommand("validate", "check a problem file without solving");
  validate->add_option("path", path, "problem file (JSON)")->required();

  auto* estimate = app.add_subcommand("estimate-l", "estimate the spectral bound L for the file");
  estimate->add_option("path", path, "problem file (JSON)")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (solve->parsed()) return run_solve(path, tol, max_iter, gamma, lambda, trace_out);
    if (validate->parsed()) return run_validate(path);
    if (estimate->parsed()) return run_estimate_l(path);
  } catch (const splitvi::ConfigError& e) {
    std::cerr << "rejected: " << e.what() << '\n';
    return splitvi::exit_code(splitvi::SolveStatus::rejected_config);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitParseError;
  }
  return kExitParseError;
}
