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

#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "splitvi/applications.hpp"

namespace splitvi {

using nlohmann::json;

enum class ProblemKind {
  cvip,
  svip_direct,
  svip_product,
  mssvip,
  sfp_cq,
  sfp_min_norm,
  cvipp,
  smp,
  szp,
};

inline const char* to_string(ProblemKind k) {
  switch (k) {
    case ProblemKind::cvip: return "cvip";
    case ProblemKind::svip_direct: return "svip_direct";
    case ProblemKind::svip_product: return "svip_product";
    case ProblemKind::mssvip: return "mssvip";
    case ProblemKind::sfp_cq: return "sfp_cq";
    case ProblemKind::sfp_min_norm: return "sfp_min_norm";
    case ProblemKind::cvipp: return "cvipp";
    case ProblemKind::smp: return "smp";
    case ProblemKind::szp: return "szp";
  }
  return "unknown";
}

inline ProblemKind problem_kind_from_string(const std::string& s) {
  for (ProblemKind k : {ProblemKind::cvip, ProblemKind::svip_direct, ProblemKind::svip_product,
                        ProblemKind::mssvip, ProblemKind::sfp_cq, ProblemKind::sfp_min_norm,
                        ProblemKind::cvipp, ProblemKind::smp, ProblemKind::szp}) {
    if (s == to_string(k)) return k;
  }
  throw ParseError("unknown problem kind '" + s + "'");
}

/// Optional solver parameters as they appeared in the file; anything omitted
/// is resolved to the documented defaults at run time.
struct RunConfig {
  std::optional<double> lambda;
  std::optional<double> gamma;
  std::optional<double> alpha;  // relaxation for the extragradient solvers
  std::optional<std::pair<double, double>> lambda_interval;
  std::optional<std::pair<double, double>> alpha_interval;
  double tol = 1e-8;
  std::size_t max_iter = 100000;
  double gamma_safety = 0.9;
};

/// A parsed, schema-validated problem file. The payload slots are shared
/// across kinds: primary_* live in the source space, secondary_* in the
/// target space (Omega for cvip).
struct ProblemFile {
  ProblemKind kind = ProblemKind::sfp_cq;
  std::vector<ProjectableSet> primary_sets;
  std::vector<ProjectableSet> secondary_sets;
  std::vector<VectorField> primary_fields;
  std::vector<VectorField> secondary_fields;
  std::optional<LinearMap> coupling;  // A
  std::vector<double> alpha_weights;
  std::vector<double> beta_weights;
  Vector x0;
  std::optional<Vector> y0;
  std::optional<Vector> reference;
  RunConfig config;
};

namespace io_detail {

[[noreturn]] inline void fail(const std::string& where, const std::string& what) {
  throw ParseError(where + ": " + what);
}

inline const json& require(const json& j, const char* key, const std::string& where) {
  if (!j.is_object() || !j.contains(key)) fail(where, std::string("missing field '") + key + "'");
  return j.at(key);
}

inline double number(const json& j, const std::string& where) {
  if (!j.is_number()) fail(where, "expected a number");
  return j.get<double>();
}

inline std::vector<double> number_list(const json& j, const std::string& where) {
  if (!j.is_array()) fail(where, "expected an array of numbers");
  std::vector<double> v;
  v.reserve(j.size());
  for (const auto& e : j) v.push_back(number(e, where));
  return v;
}

inline Vector vector(const json& j, const std::string& where) {
  try {
    return Vector(number_list(j, where));
  } catch (const std::invalid_argument& e) {
    fail(where, e.what());
  }
}

inline LinearMap matrix(const json& j, const std::string& where) {
  if (!j.is_array() || j.empty()) fail(where, "expected a non-empty array of rows");
  std::vector<std::vector<double>> rows;
  rows.reserve(j.size());
  for (const auto& r : j) rows.push_back(number_list(r, where));
  try {
    return LinearMap(rows);
  } catch (const std::exception& e) {
    fail(where, e.what());
  }
}

inline json matrix_json(const LinearMap& a) {
  json rows = json::array();
  for (std::size_t i = 0; i < a.rows(); ++i) {
    json row = json::array();
    for (std::size_t j = 0; j < a.cols(); ++j) row.push_back(a(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

inline json vector_json(const Vector& v) {
  json a = json::array();
  for (double e : v) a.push_back(e);
  return a;
}

inline ProjectableSet parse_set(const json& j, const std::string& where) {
  const std::string type = require(j, "type", where).get<std::string>();
  try {
    if (type == "whole_space") {
      return ProjectableSet::whole_space(require(j, "dim", where).get<std::size_t>());
    }
    if (type == "box") {
      return ProjectableSet::box(vector(require(j, "lower", where), where + ".lower"),
                                 vector(require(j, "upper", where), where + ".upper"));
    }
    if (type == "ball") {
      return ProjectableSet::ball(vector(require(j, "center", where), where + ".center"),
                                  number(require(j, "radius", where), where + ".radius"));
    }
    if (type == "half_space") {
      return ProjectableSet::half_space(vector(require(j, "normal", where), where + ".normal"),
                                        number(require(j, "offset", where), where + ".offset"));
    }
    if (type == "hyperplane") {
      return ProjectableSet::hyperplane(vector(require(j, "normal", where), where + ".normal"),
                                        number(require(j, "offset", where), where + ".offset"));
    }
    if (type == "affine_subspace") {
      const json& jb = require(j, "basis", where);
      if (!jb.is_array()) fail(where, "basis: expected an array of vectors");
      std::vector<Vector> basis;
      for (const auto& b : jb) basis.push_back(vector(b, where + ".basis"));
      return ProjectableSet::affine_subspace(basis,
                                             vector(require(j, "anchor", where), where + ".anchor"));
    }
  } catch (const ParseError&) {
    throw;
  } catch (const std::exception& e) {
    fail(where, e.what());
  }
  fail(where, "unknown set type '" + type + "'");
}

inline json set_json(const ProjectableSet& s) {
  return std::visit(
      [](const auto& v) -> json {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, sets::WholeSpace>) {
          return json{{"type", "whole_space"}, {"dim", v.dim}};
        } else if constexpr (std::is_same_v<T, sets::Box>) {
          return json{{"type", "box"}, {"lower", vector_json(v.lower)},
                      {"upper", vector_json(v.upper)}};
        } else if constexpr (std::is_same_v<T, sets::Ball>) {
          return json{{"type", "ball"}, {"center", vector_json(v.center)},
                      {"radius", v.radius}};
        } else if constexpr (std::is_same_v<T, sets::HalfSpace>) {
          return json{{"type", "half_space"}, {"normal", vector_json(v.normal)},
                      {"offset", v.offset}};
        } else if constexpr (std::is_same_v<T, sets::Hyperplane>) {
          return json{{"type", "hyperplane"}, {"normal", vector_json(v.normal)},
                      {"offset", v.offset}};
        } else if constexpr (std::is_same_v<T, sets::AffineSubspace>) {
          json basis = json::array();
          for (const auto& b : v.given_basis) basis.push_back(vector_json(b));
          return json{{"type", "affine_subspace"}, {"basis", std::move(basis)},
                      {"anchor", vector_json(v.anchor)}};
        } else {
          throw ParseError("set kind has no file representation");
        }
      },
      s.data());
}

/// expected_dim = 0 means "no ambient hint"; then the field must carry "dim".
inline VectorField parse_field(const json& j, std::size_t expected_dim,
                               const std::string& where) {
  const std::string type = require(j, "type", where).get<std::string>();
  std::size_t dim = expected_dim;
  if (j.contains("dim")) {
    dim = j.at("dim").get<std::size_t>();
    if (expected_dim != 0 && dim != expected_dim) {
      fail(where, "declared dim " + std::to_string(dim) + " does not match ambient dim " +
                      std::to_string(expected_dim));
    }
  }
  try {
    if (type == "zero") {
      if (dim == 0) fail(where, "zero field needs 'dim'");
      return VectorField::zero(dim);
    }
    if (type == "identity") {
      if (dim == 0) fail(where, "identity field needs 'dim'");
      return VectorField::identity(dim);
    }
    if (type == "affine") {
      LinearMap m = matrix(require(j, "M", where), where + ".M");
      Vector q = vector(require(j, "q", where), where + ".q");
      if (j.contains("lipschitz")) {
        return VectorField::affine(m, std::move(q), number(j.at("lipschitz"), where));
      }
      return VectorField::affine(m, std::move(q));
    }
  } catch (const ParseError&) {
    throw;
  } catch (const std::exception& e) {
    fail(where, e.what());
  }
  fail(where, "unknown field type '" + type + "'");
}

inline json field_json(const VectorField& h) {
  switch (h.kind()) {
    case VectorField::Kind::zero:
      return json{{"type", "zero"}, {"dim", h.dim()}};
    case VectorField::Kind::identity:
      return json{{"type", "identity"}, {"dim", h.dim()}};
    case VectorField::Kind::affine: {
      json out{{"type", "affine"}, {"M", matrix_json(h.matrix())},
               {"q", vector_json(h.offset())}};
      if (!h.is_ism()) out["lipschitz"] = h.lipschitz();  // caller-supplied constant
      return out;
    }
  }
  throw ParseError("field kind has no file representation");
}

inline RunConfig parse_config(const json& j, const std::string& where) {
  RunConfig cfg;
  if (j.is_null()) return cfg;
  if (!j.is_object()) fail(where, "expected an object");
  auto interval = [&where](const json& v) -> std::pair<double, double> {
    const auto list = number_list(v, where);
    if (list.size() != 2) fail(where, "interval needs exactly two numbers");
    return {list[0], list[1]};
  };
  if (j.contains("lambda")) cfg.lambda = number(j.at("lambda"), where + ".lambda");
  if (j.contains("gamma")) cfg.gamma = number(j.at("gamma"), where + ".gamma");
  if (j.contains("alpha")) cfg.alpha = number(j.at("alpha"), where + ".alpha");
  if (j.contains("lambda_interval")) cfg.lambda_interval = interval(j.at("lambda_interval"));
  if (j.contains("alpha_interval")) cfg.alpha_interval = interval(j.at("alpha_interval"));
  if (j.contains("tol")) cfg.tol = number(j.at("tol"), where + ".tol");
  if (j.contains("max_iter")) cfg.max_iter = j.at("max_iter").get<std::size_t>();
  if (j.contains("gamma_safety")) {
    cfg.gamma_safety = number(j.at("gamma_safety"), where + ".gamma_safety");
  }
  return cfg;
}

inline json config_json(const RunConfig& cfg) {
  json j = json::object();
  if (cfg.lambda) j["lambda"] = *cfg.lambda;
  if (cfg.gamma) j["gamma"] = *cfg.gamma;
  if (cfg.alpha) j["alpha"] = *cfg.alpha;
  if (cfg.lambda_interval) {
    j["lambda_interval"] = json::array({cfg.lambda_interval->first, cfg.lambda_interval->second});
  }
  if (cfg.alpha_interval) {
    j["alpha_interval"] = json::array({cfg.alpha_interval->first, cfg.alpha_interval->second});
  }
  j["tol"] = cfg.tol;
  j["max_iter"] = cfg.max_iter;
  j["gamma_safety"] = cfg.gamma_safety;
  return j;
}

}  // namespace io_detail

/// Parses a problem description from JSON text. `name` labels diagnostics
/// (usually the file path). Dimension errors are reported with the offending
/// field; syntax errors with line/column.
inline ProblemFile parse_problem(const std::string& text, const std::string& name = "<input>") {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i < e.byte && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw ParseError(name + ":" + std::to_string(line) + ":" + std::to_string(col) + ": " +
                     e.what());
  }
  if (!j.is_object()) throw ParseError(name + ": top level must be an object");

  using io_detail::parse_field;
  using io_detail::parse_set;
  using io_detail::require;
  using io_detail::vector;

  ProblemFile f;
  f.kind = problem_kind_from_string(require(j, "kind", name).get<std::string>());
  f.config = io_detail::parse_config(j.contains("config") ? j.at("config") : json{},
                                     name + ".config");

  auto set_list = [&](const char* key) {
    std::vector<ProjectableSet> out;
    const json& arr = require(j, key, name);
    if (!arr.is_array() || arr.empty()) io_detail::fail(name, std::string(key) + " must be a non-empty array");
    for (std::size_t i = 0; i < arr.size(); ++i) {
      out.push_back(parse_set(arr[i], name + "." + key + "[" + std::to_string(i) + "]"));
    }
    return out;
  };

  switch (f.kind) {
    case ProblemKind::cvip: {
      f.primary_sets.push_back(parse_set(require(j, "C", name), name + ".C"));
      f.secondary_sets.push_back(parse_set(require(j, "Omega", name), name + ".Omega"));
      f.primary_fields.push_back(
          parse_field(require(j, "f", name), f.primary_sets[0].dim(), name + ".f"));
      break;
    }
    case ProblemKind::svip_direct:
    case ProblemKind::svip_product: {
      f.primary_sets.push_back(parse_set(require(j, "C", name), name + ".C"));
      f.secondary_sets.push_back(parse_set(require(j, "Q", name), name + ".Q"));
      f.coupling = io_detail::matrix(require(j, "A", name), name + ".A");
      f.primary_fields.push_back(
          parse_field(require(j, "f", name), f.primary_sets[0].dim(), name + ".f"));
      f.secondary_fields.push_back(
          parse_field(require(j, "g", name), f.secondary_sets[0].dim(), name + ".g"));
      break;
    }
    case ProblemKind::mssvip: {
      f.primary_sets = set_list("C_list");
      f.coupling = io_detail::matrix(require(j, "A", name), name + ".A");
      const json& jf = require(j, "f_list", name);
      for (std::size_t i = 0; i < jf.size(); ++i) {
        const std::size_t dim = i < f.primary_sets.size() ? f.primary_sets[i].dim() : 0;
        f.primary_fields.push_back(parse_field(jf[i], dim, name + ".f_list[" + std::to_string(i) + "]"));
      }
      if (j.contains("Q_list") && !j.at("Q_list").empty()) {
        f.secondary_sets = set_list("Q_list");
        const json& jg = require(j, "g_list", name);
        for (std::size_t i = 0; i < jg.size(); ++i) {
          const std::size_t dim = i < f.secondary_sets.size() ? f.secondary_sets[i].dim() : 0;
          f.secondary_fields.push_back(
              parse_field(jg[i], dim, name + ".g_list[" + std::to_string(i) + "]"));
        }
      }
      f.alpha_weights = io_detail::number_list(require(j, "alpha_weights", name), name);
      if (j.contains("beta_weights")) {
        f.beta_weights = io_detail::number_list(j.at("beta_weights"), name);
      }
      break;
    }
    case ProblemKind::sfp_cq:
    case ProblemKind::sfp_min_norm: {
      f.primary_sets.push_back(parse_set(require(j, "C", name), name + ".C"));
      f.secondary_sets.push_back(parse_set(require(j, "Q", name), name + ".Q"));
      f.coupling = io_detail::matrix(require(j, "A", name), name + ".A");
      break;
    }
    case ProblemKind::cvipp: {
      f.primary_sets = set_list("sets");
      const json& jf = require(j, "fields", name);
      for (std::size_t i = 0; i < jf.size(); ++i) {
        const std::size_t dim = i < f.primary_sets.size() ? f.primary_sets[i].dim() : 0;
        f.primary_fields.push_back(parse_field(jf[i], dim, name + ".fields[" + std::to_string(i) + "]"));
      }
      break;
    }
    case ProblemKind::smp: {
      f.primary_sets.push_back(parse_set(require(j, "C", name), name + ".C"));
      f.secondary_sets.push_back(parse_set(require(j, "Q", name), name + ".Q"));
      f.coupling = io_detail::matrix(require(j, "A", name), name + ".A");
      const json& jf = require(j, "F", name);
      const json& jg = require(j, "G", name);
      try {
        f.primary_fields.push_back(
            VectorField::affine(io_detail::matrix(require(jf, "M", name + ".F"), name + ".F.M"),
                                vector(require(jf, "q", name + ".F"), name + ".F.q")));
        f.secondary_fields.push_back(
            VectorField::affine(io_detail::matrix(require(jg, "M", name + ".G"), name + ".G.M"),
                                vector(require(jg, "q", name + ".G"), name + ".G.q")));
      } catch (const ParseError&) {
        throw;
      } catch (const std::exception& e) {
        io_detail::fail(name + ".F/G", e.what());
      }
      break;
    }
    case ProblemKind::szp: {
      f.coupling = io_detail::matrix(require(j, "A", name), name + ".A");
      f.primary_fields.push_back(
          parse_field(require(j, "B1", name), f.coupling->cols(), name + ".B1"));
      f.secondary_fields.push_back(
          parse_field(require(j, "B2", name), f.coupling->rows(), name + ".B2"));
      break;
    }
  }

  // Source-space dimension for x0 defaulting.
  std::size_t n = 0;
  if (!f.primary_sets.empty()) n = f.primary_sets.front().dim();
  if (f.kind == ProblemKind::szp) n = f.coupling->cols();
  if (f.kind == ProblemKind::cvipp) n = f.primary_sets.front().dim();

  f.x0 = j.contains("x0") ? vector(j.at("x0"), name + ".x0") : Vector(n);
  if (f.x0.size() != n) throw DimensionError(name + ".x0", n, f.x0.size());
  if (j.contains("y0")) f.y0 = vector(j.at("y0"), name + ".y0");
  if (j.contains("reference")) f.reference = vector(j.at("reference"), name + ".reference");
  return f;
}

inline ProblemFile load_problem(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path + ": cannot open file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_problem(ss.str(), path);
}

/// Canonical JSON for a parsed problem; load(serialize(p)) reproduces p.
inline json problem_to_json(const ProblemFile& f) {
  using io_detail::field_json;
  using io_detail::set_json;
  using io_detail::vector_json;

  json j;
  j["kind"] = to_string(f.kind);
  switch (f.kind) {
    case ProblemKind::cvip:
      j["C"] = set_json(f.primary_sets[0]);
      j["Omega"] = set_json(f.secondary_sets[0]);
      j["f"] = field_json(f.primary_fields[0]);
      break;
    case ProblemKind::svip_direct:
    case ProblemKind::svip_product:
      j["C"] = set_json(f.primary_sets[0]);
      j["Q"] = set_json(f.secondary_sets[0]);
      j["A"] = io_detail::matrix_json(*f.coupling);
      j["f"] = field_json(f.primary_fields[0]);
      j["g"] = field_json(f.secondary_fields[0]);
      break;
    case ProblemKind::mssvip: {
      json cs = json::array(), fs = json::array();
      for (const auto& s : f.primary_sets) cs.push_back(set_json(s));
      for (const auto& h : f.primary_fields) fs.push_back(field_json(h));
      j["C_list"] = std::move(cs);
      j["f_list"] = std::move(fs);
      if (!f.secondary_sets.empty()) {
        json qs = json::array(), gs = json::array();
        for (const auto& s : f.secondary_sets) qs.push_back(set_json(s));
        for (const auto& h : f.secondary_fields) gs.push_back(field_json(h));
        j["Q_list"] = std::move(qs);
        j["g_list"] = std::move(gs);
      }
      j["A"] = io_detail::matrix_json(*f.coupling);
      j["alpha_weights"] = f.alpha_weights;
      if (!f.beta_weights.empty()) j["beta_weights"] = f.beta_weights;
      break;
    }
    case ProblemKind::sfp_cq:
    case ProblemKind::sfp_min_norm:
      j["C"] = set_json(f.primary_sets[0]);
      j["Q"] = set_json(f.secondary_sets[0]);
      j["A"] = io_detail::matrix_json(*f.coupling);
      break;
    case ProblemKind::cvipp: {
      json ss = json::array(), fs = json::array();
      for (const auto& s : f.primary_sets) ss.push_back(set_json(s));
      for (const auto& h : f.primary_fields) fs.push_back(field_json(h));
      j["sets"] = std::move(ss);
      j["fields"] = std::move(fs);
      break;
    }
    case ProblemKind::smp:
      j["C"] = set_json(f.primary_sets[0]);
      j["Q"] = set_json(f.secondary_sets[0]);
      j["A"] = io_detail::matrix_json(*f.coupling);
      j["F"] = json{{"M", io_detail::matrix_json(f.primary_fields[0].matrix())},
                    {"q", vector_json(f.primary_fields[0].offset())}};
      j["G"] = json{{"M", io_detail::matrix_json(f.secondary_fields[0].matrix())},
                    {"q", vector_json(f.secondary_fields[0].offset())}};
      break;
    case ProblemKind::szp:
      j["A"] = io_detail::matrix_json(*f.coupling);
      j["B1"] = field_json(f.primary_fields[0]);
      j["B2"] = field_json(f.secondary_fields[0]);
      break;
  }
  j["x0"] = vector_json(f.x0);
  if (f.y0) j["y0"] = vector_json(*f.y0);
  if (f.reference) j["reference"] = vector_json(*f.reference);
  j["config"] = io_detail::config_json(f.config);
  return j;
}

inline std::string serialize_problem(const ProblemFile& f) { return problem_to_json(f).dump(2); }

namespace io_detail {

inline Schedule schedule_from(const std::optional<double>& constant,
                              const std::optional<std::pair<double, double>>& interval,
                              double fallback) {
  if (interval) return Schedule(interval->first, interval->second);
  if (constant) return Schedule::constant(*constant);
  return Schedule::constant(fallback);
}

inline CvipConfig cvip_config_for(const ProblemFile& f, double kappa) {
  CvipConfig cfg = CvipConfig::defaults(kappa);
  cfg.lambda = schedule_from(f.config.lambda, f.config.lambda_interval, 0.45 / kappa);
  cfg.alpha = schedule_from(f.config.alpha, f.config.alpha_interval, 0.5);
  cfg.tol = f.config.tol;
  cfg.max_iter = f.config.max_iter;
  cfg.reference = f.reference;
  return cfg;
}

inline SplitConfig split_config_for(const ProblemFile& f) {
  SplitConfig cfg;
  cfg.lambda = f.config.lambda;
  cfg.gamma = f.config.gamma;
  cfg.tol = f.config.tol;
  cfg.max_iter = f.config.max_iter;
  cfg.gamma_safety = f.config.gamma_safety;
  cfg.reference = f.reference;
  return cfg;
}

}  // namespace io_detail

/// Builds the solver inputs and runs the matching solver. Step-size
/// violations surface as a rejected_config report rather than an exception;
/// structural errors (dimension mismatches) still throw.
inline SolveReport run_problem(const ProblemFile& f) {
  try {
    switch (f.kind) {
      case ProblemKind::cvip: {
        CvipProblem p(f.primary_sets[0], f.secondary_sets[0], f.primary_fields[0]);
        return solve_cvip(p, io_detail::cvip_config_for(f, p.kappa()), f.x0);
      }
      case ProblemKind::svip_direct: {
        SvipProblem p(f.primary_sets[0], f.secondary_sets[0], f.primary_fields[0],
                      f.secondary_fields[0], *f.coupling);
        return solve_svip_direct(p, io_detail::split_config_for(f), f.x0);
      }
      case ProblemKind::svip_product: {
        SvipProblem p(f.primary_sets[0], f.secondary_sets[0], f.primary_fields[0],
                      f.secondary_fields[0], *f.coupling);
        const VectorField h = product_field(p.source_field(), p.target_field());
        const Vector y0 = f.y0 ? *f.y0 : p.map().apply(f.x0);
        return solve_svip_product(p, io_detail::cvip_config_for(f, h.lipschitz()), f.x0, y0);
      }
      case ProblemKind::mssvip: {
        MssvipProblem p(f.primary_sets, f.primary_fields, f.secondary_sets, f.secondary_fields,
                        *f.coupling, f.alpha_weights, f.beta_weights);
        return solve_mssvip(p, io_detail::split_config_for(f), f.x0);
      }
      case ProblemKind::sfp_cq: {
        SfpProblem p(f.primary_sets[0], f.secondary_sets[0], *f.coupling);
        double gamma;
        if (f.config.gamma) {
          gamma = *f.config.gamma;
        } else {
          gamma = detail::default_gamma(estimate_spectral_radius(p.map()),
                                        f.config.gamma_safety);
        }
        return solve_sfp_cq(p, gamma, f.config.tol, f.config.max_iter, f.x0, f.reference);
      }
      case ProblemKind::sfp_min_norm: {
        SfpProblem p(f.primary_sets[0], f.secondary_sets[0], *f.coupling);
        return solve_sfp_min_norm(p, io_detail::split_config_for(f), f.x0);
      }
      case ProblemKind::cvipp: {
        CvippProduct cp = build_cvipp(f.primary_fields, f.primary_sets);
        return solve_cvipp(cp, io_detail::cvip_config_for(f, cp.problem.kappa()), f.x0);
      }
      case ProblemKind::smp: {
        SvipProblem p = build_smp(f.primary_fields[0].matrix(), f.primary_fields[0].offset(),
                                  f.secondary_fields[0].matrix(), f.secondary_fields[0].offset(),
                                  f.primary_sets[0], f.secondary_sets[0], *f.coupling);
        return solve_svip_direct(p, io_detail::split_config_for(f), f.x0);
      }
      case ProblemKind::szp: {
        SzpProblem p(f.primary_fields[0], f.secondary_fields[0], *f.coupling);
        return solve_szp(p, io_detail::split_config_for(f), f.x0);
      }
    }
  } catch (const ConfigError& e) {
    SolveReport rep;
    rep.status = SolveStatus::rejected_config;
    rep.message = e.what();
    return rep;
  }
  throw ParseError("unhandled problem kind");
}

/// Constructs the solver inputs and resolves all step-size parameters without
/// iterating. Throws ConfigError / DimensionError on violations.
inline void validate_problem(const ProblemFile& f) {
  switch (f.kind) {
    case ProblemKind::cvip: {
      CvipProblem p(f.primary_sets[0], f.secondary_sets[0], f.primary_fields[0]);
      validate_config(p, io_detail::cvip_config_for(f, p.kappa()));
      break;
    }
    case ProblemKind::svip_direct: {
      SvipProblem p(f.primary_sets[0], f.secondary_sets[0], f.primary_fields[0],
                    f.secondary_fields[0], *f.coupling);
      resolve_config(p, io_detail::split_config_for(f));
      break;
    }
    case ProblemKind::svip_product: {
      SvipProblem p(f.primary_sets[0], f.secondary_sets[0], f.primary_fields[0],
                    f.secondary_fields[0], *f.coupling);
      const ProductCvip pc = build_product_cvip(p);
      validate_config(pc.problem, io_detail::cvip_config_for(f, pc.problem.kappa()));
      break;
    }
    case ProblemKind::mssvip: {
      MssvipProblem p(f.primary_sets, f.primary_fields, f.secondary_sets, f.secondary_fields,
                      *f.coupling, f.alpha_weights, f.beta_weights);
      resolve_config(p, io_detail::split_config_for(f));
      break;
    }
    case ProblemKind::sfp_cq: {
      SfpProblem p(f.primary_sets[0], f.secondary_sets[0], *f.coupling);
      if (f.config.gamma) {
        const auto est = estimate_spectral_radius(p.map());
        if (est.value > 0.0 && !(*f.config.gamma < 1.0 / est.value)) {
          throw ConfigError("split config rejected: gamma >= 1/L");
        }
        if (!(*f.config.gamma > 0.0)) throw ConfigError("split config rejected: gamma <= 0");
      }
      break;
    }
    case ProblemKind::sfp_min_norm: {
      SfpProblem p(f.primary_sets[0], f.secondary_sets[0], *f.coupling);
      resolve_config(p.as_svip(), io_detail::split_config_for(f));
      break;
    }
    case ProblemKind::cvipp: {
      CvippProduct cp = build_cvipp(f.primary_fields, f.primary_sets);
      validate_config(cp.problem, io_detail::cvip_config_for(f, cp.problem.kappa()));
      break;
    }
    case ProblemKind::smp: {
      SvipProblem p = build_smp(f.primary_fields[0].matrix(), f.primary_fields[0].offset(),
                                f.secondary_fields[0].matrix(), f.secondary_fields[0].offset(),
                                f.primary_sets[0], f.secondary_sets[0], *f.coupling);
      resolve_config(p, io_detail::split_config_for(f));
      break;
    }
    case ProblemKind::szp: {
      SzpProblem p(f.primary_fields[0], f.secondary_fields[0], *f.coupling);
      resolve_config(p.as_svip(), io_detail::split_config_for(f));
      break;
    }
  }
}

/// Report as structured JSON (without the full trace; that goes to CSV).
inline json report_to_json(const SolveReport& rep) {
  json j;
  j["status"] = to_string(rep.status);
  j["iterations"] = rep.iterations;
  if (!rep.final_point.empty()) j["final_point"] = io_detail::vector_json(rep.final_point);
  if (rep.final_point_secondary) {
    j["final_point_secondary"] = io_detail::vector_json(*rep.final_point_secondary);
  }
  if (rep.lambda) j["lambda"] = *rep.lambda;
  if (rep.gamma) j["gamma"] = *rep.gamma;
  if (rep.spectral_bound) j["spectral_bound"] = *rep.spectral_bound;
  if (!rep.trace.empty()) {
    j["final_residual_primary"] = rep.trace.back().res_primary;
    j["final_residual_split"] = rep.trace.back().res_split;
  }
  if (!rep.message.empty()) j["message"] = rep.message;
  for (const auto& [key, value] : rep.metrics) j[key] = value;
  return j;
}

/// CLI exit code for a solve status: 0 converged, 2 max_iter, 3 rejected_config.
inline int exit_code(SolveStatus s) {
  switch (s) {
    case SolveStatus::converged:
      return 0;
    case SolveStatus::max_iter:
      return 2;
    case SolveStatus::rejected_config:
      return 3;
  }
  return 1;
}

}  // namespace splitvi
