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

#include <catch2/catch_amalgamated.hpp>

#include "oracles.hpp"
#include "splitvi/linalg.hpp"

using namespace splitvi;

TEST_CASE("Vector rejects non-finite entries") {
  CHECK_THROWS_AS(Vector({1.0, std::nan("")}), std::invalid_argument);
  CHECK_THROWS_AS(Vector({std::numeric_limits<double>::infinity()}), std::invalid_argument);
  CHECK_NOTHROW(Vector({0.0, -3.5, 1e300}));
}

TEST_CASE("vector arithmetic dimension checks") {
  const Vector a{1.0, 2.0};
  const Vector b{1.0, 2.0, 3.0};
  CHECK_THROWS_AS(a + b, DimensionError);
  CHECK_THROWS_AS(dot(a, b), DimensionError);
  try {
    a + b;
  } catch (const DimensionError& e) {
    CHECK(e.expected() == 2);
    CHECK(e.actual() == 3);
  }
}

TEST_CASE("apply_map worked examples") {
  const Vector x{3.0, -1.0};
  CHECK(LinearMap::identity(2).apply(x) == x);

  CHECK(LinearMap(2, 2).apply(Vector{5.0, 7.0}) == Vector{0.0, 0.0});

  const LinearMap d({{2.0, 0.0}, {0.0, 3.0}});
  CHECK(d.apply(Vector{1.0, 1.0}) == Vector{2.0, 3.0});

  CHECK_THROWS_AS(d.apply(Vector{1.0, 2.0, 3.0}), DimensionError);
}

TEST_CASE("apply_adjoint worked examples") {
  CHECK(LinearMap::identity(2).apply_adjoint(Vector{1.0, 2.0}) == Vector{1.0, 2.0});

  const LinearMap row({{1.0, 2.0, 3.0}});  // 1x3
  CHECK(row.apply_adjoint(Vector{2.0}) == Vector{2.0, 4.0, 6.0});
  CHECK_THROWS_AS(row.apply_adjoint(Vector{1.0, 1.0}), DimensionError);
}

TEST_CASE("adjoint consistency on random maps") {
  testutil::Rng rng(101);
  for (int t = 0; t < 100; ++t) {
    const std::size_t m = 1 + rng.index(5);
    const std::size_t n = 1 + rng.index(5);
    const LinearMap a = rng.matrix(m, n, -3.0, 3.0);
    const Vector x = rng.vector(n, -4.0, 4.0);
    const Vector y = rng.vector(m, -4.0, 4.0);
    const double lhs = dot(a.apply(x), y);
    const double rhs = dot(x, a.apply_adjoint(y));
    CHECK(std::abs(lhs - rhs) <= 1e-10 * (1.0 + norm(x) * norm(y)));
  }
}

TEST_CASE("spectral radius worked examples") {
  CHECK(estimate_spectral_radius(LinearMap(3, 3)).value == 0.0);

  const auto id = estimate_spectral_radius(LinearMap::identity(3));
  CHECK(id.converged);
  CHECK(id.value == Catch::Approx(1.0).margin(1e-9));

  // A = diag(3, 1): A^T A = diag(9, 1).
  const auto diag = estimate_spectral_radius(LinearMap({{3.0, 0.0}, {0.0, 1.0}}));
  CHECK(diag.converged);
  CHECK(diag.value == Catch::Approx(9.0).epsilon(1e-8));
}

TEST_CASE("spectral radius dominates the quadratic form") {
  testutil::Rng rng(202);
  const double tol = kSpectralTolDefault;
  for (int t = 0; t < 10; ++t) {
    const std::size_t m = 1 + rng.index(4);
    const std::size_t n = 1 + rng.index(4);
    const LinearMap a = rng.matrix(m, n, -2.0, 2.0);
    const auto est = estimate_spectral_radius(a);
    REQUIRE(est.converged);
    for (int s = 0; s < 100; ++s) {
      const Vector x = rng.unit_vector(n);
      const double ax2 = dot(a.apply(x), a.apply(x));
      CHECK(ax2 <= est.value * (1.0 + tol) + 1e-12);
    }
  }
}

TEST_CASE("spectral radius flags non-convergence") {
  const auto est = estimate_spectral_radius(LinearMap::identity(4), 1e-10, 1);
  CHECK_FALSE(est.converged);
  CHECK(est.value > 0.0);
}

TEST_CASE("regularized normal solve worked examples") {
  // Zero map: (I) x = r.
  CHECK(solve_regularized_normal(LinearMap(2, 2), Vector{4.0, 5.0}) == Vector{4.0, 5.0});

  // Identity: (2I) x = r.
  CHECK(solve_regularized_normal(LinearMap::identity(2), Vector{4.0, 6.0}) == Vector{2.0, 3.0});

  // A = diag(2, 0): (I + A^T A) = diag(5, 1).
  const LinearMap a({{2.0, 0.0}, {0.0, 0.0}});
  CHECK(solve_regularized_normal(a, Vector{10.0, 3.0}) == Vector{2.0, 3.0});
}

TEST_CASE("regularized normal solve residual on random systems") {
  testutil::Rng rng(303);
  for (int t = 0; t < 50; ++t) {
    const std::size_t m = 1 + rng.index(5);
    const std::size_t n = 1 + rng.index(5);
    const LinearMap a = rng.matrix(m, n, -3.0, 3.0);
    const Vector r = rng.vector(n, -5.0, 5.0);
    const Vector x = solve_regularized_normal(a, r);
    const Vector residual = x + a.apply_adjoint(a.apply(x)) - r;
    CHECK(norm(residual) <= 1e-10 * std::max(1.0, norm(r)));
  }
}

TEST_CASE("vector block helpers") {
  const Vector a{1.0, 2.0};
  const Vector b{3.0};
  const Vector c = concat(a, b);
  CHECK(c == Vector{1.0, 2.0, 3.0});
  CHECK(segment(c, 0, 2) == a);
  CHECK(segment(c, 2, 1) == b);
  CHECK(replicate(b, 3) == Vector{3.0, 3.0, 3.0});
  CHECK_THROWS_AS(segment(c, 2, 2), DimensionError);
}
