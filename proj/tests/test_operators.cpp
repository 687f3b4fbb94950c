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
#include "splitvi/operators.hpp"

using namespace splitvi;

TEST_CASE("field metadata at construction") {
  const auto zero = VectorField::zero(2);
  CHECK(zero.lipschitz() == 0.0);
  CHECK(zero.ism() == kIsmUnbounded);

  const auto id = VectorField::identity(2);
  CHECK(id.lipschitz() == 1.0);
  CHECK(id.ism() == 1.0);

  const auto aff = VectorField::affine(LinearMap({{2.0, 0.0}, {0.0, 4.0}}), Vector{1.0, 0.0});
  CHECK(aff.lipschitz() == Catch::Approx(4.0).epsilon(1e-8));
  CHECK(aff.ism() == Catch::Approx(0.25).epsilon(1e-8));
}

TEST_CASE("non-PSD matrices need a caller-supplied constant") {
  const LinearMap rotation({{0.0, -1.0}, {1.0, 0.0}});
  CHECK_THROWS_AS(VectorField::affine(rotation, Vector{0.0, 0.0}), std::invalid_argument);

  const auto f = VectorField::affine(rotation, Vector{0.0, 0.0}, 1.0);
  CHECK(f.lipschitz() == 1.0);
  CHECK(f.ism() == 0.0);
  CHECK_FALSE(f.is_ism());

  // A constant below the spectral norm is inconsistent metadata.
  CHECK_THROWS_AS(VectorField::affine(rotation, Vector{0.0, 0.0}, 0.5), std::invalid_argument);

  const LinearMap nonsym({{1.0, 2.0}, {0.0, 1.0}});
  CHECK_THROWS_AS(VectorField::affine(nonsym, Vector{0.0, 0.0}), std::invalid_argument);

  const LinearMap indefinite({{1.0, 0.0}, {0.0, -1.0}});
  CHECK_THROWS_AS(VectorField::affine(indefinite, Vector{0.0, 0.0}), std::invalid_argument);
}

TEST_CASE("evaluate worked examples") {
  CHECK(VectorField::zero(2)(Vector{1.0, 2.0}) == Vector{0.0, 0.0});
  CHECK(VectorField::identity(2)(Vector{1.0, 2.0}) == Vector{1.0, 2.0});

  const auto aff = VectorField::affine(LinearMap({{2.0, 0.0}, {0.0, 4.0}}), Vector{1.0, 0.0});
  CHECK(aff(Vector{1.0, 1.0}) == Vector{3.0, 4.0});

  CHECK_THROWS_AS(aff(Vector{1.0}), DimensionError);
}

TEST_CASE("forward-backward worked examples") {
  const auto box = ProjectableSet::box(Vector{-1.0, -1.0}, Vector{1.0, 1.0});

  // lambda = 0 reduces to the projection for any field.
  const ForwardBackwardMap fb0(box, VectorField::identity(2), 0.0);
  CHECK(fb0(Vector{2.0, 0.0}) == Vector{1.0, 0.0});

  // Zero field: identical to the projection for any lambda.
  const ForwardBackwardMap fbz(box, VectorField::zero(2), 0.7);
  CHECK(fbz(Vector{2.0, 0.0}) == box.project(Vector{2.0, 0.0}));

  // Whole space + identity: (1 - lambda) x.
  const ForwardBackwardMap fbi(ProjectableSet::whole_space(2), VectorField::identity(2), 0.5);
  CHECK(fbi(Vector{4.0, -2.0}) == Vector{2.0, -1.0});

  CHECK_THROWS_AS(ForwardBackwardMap(box, VectorField::identity(2), -0.1), std::invalid_argument);
  CHECK_THROWS_AS(ForwardBackwardMap(box, VectorField::identity(3), 0.5), DimensionError);
}

TEST_CASE("vip residual worked examples") {
  const auto box01 = ProjectableSet::box(Vector{0.0, 0.0}, Vector{1.0, 1.0});
  CHECK(vip_residual(box01, VectorField::identity(2), 1.0, Vector{0.0, 0.0}) == 0.0);

  CHECK(vip_residual(ProjectableSet::whole_space(2), VectorField::zero(2), 0.3,
                     Vector{5.0, -2.0}) == 0.0);

  const auto box12 = ProjectableSet::box(Vector{1.0, 1.0}, Vector{2.0, 2.0});
  CHECK(vip_residual(box12, VectorField::identity(2), 1.0, Vector{0.0, 0.0}) ==
        Catch::Approx(std::sqrt(2.0)).margin(1e-15));

  CHECK_THROWS_AS(vip_residual(box01, VectorField::zero(2), 0.0, Vector{0.0, 0.0}),
                  std::invalid_argument);
}

TEST_CASE("forward-backward maps with lambda in [0, 2 alpha] are nonexpansive") {
  testutil::Rng rng(111);
  const std::vector<ProjectableSet> domains = {
      ProjectableSet::whole_space(3),
      ProjectableSet::box(Vector{-1.0, -1.0, -1.0}, Vector{1.0, 1.0, 1.0}),
      ProjectableSet::ball(Vector{0.0, 0.0, 0.0}, 1.5),
  };
  for (int t = 0; t < 100; ++t) {
    const LinearMap m = rng.psd_matrix(3);
    const auto h = VectorField::affine(m, rng.vector(3, -1.0, 1.0));
    const double alpha = h.ism();
    REQUIRE(alpha > 0.0);
    const double lambda = rng.uniform(0.0, 2.0 * alpha);
    const ForwardBackwardMap fb(domains[t % domains.size()], h, lambda);
    const Vector x = rng.vector(3, -4.0, 4.0);
    const Vector y = rng.vector(3, -4.0, 4.0);
    CHECK(distance(fb(x), fb(y)) <= distance(x, y) + 1e-10);
  }
}

TEST_CASE("PSD affine fields satisfy the certified constants") {
  testutil::Rng rng(222);
  for (int t = 0; t < 20; ++t) {
    const std::size_t n = 2 + rng.index(3);
    const auto h = VectorField::affine(rng.psd_matrix(n), rng.vector(n, -1.0, 1.0));
    const double alpha = h.ism();
    const double kappa = h.lipschitz();
    for (int i = 0; i < 100; ++i) {
      const Vector x = rng.vector(n, -3.0, 3.0);
      const Vector y = rng.vector(n, -3.0, 3.0);
      const Vector dh = h(x) - h(y);
      const double gap = dot(dh, x - y);
      CHECK(gap >= alpha * dot(dh, dh) - 1e-10);  // inverse strong monotonicity
      CHECK(gap >= -1e-10);                       // monotonicity
      CHECK(norm(dh) <= kappa * distance(x, y) + 1e-10);
    }
  }
}

TEST_CASE("zero residual implies the variational inequality") {
  testutil::Rng rng(333);
  struct Case {
    ProjectableSet set;
    VectorField field;
    Vector solution;
  };
  const std::vector<Case> cases = {
      // Interior root of the field.
      {ProjectableSet::box(Vector{-2.0, -2.0}, Vector{2.0, 2.0}),
       VectorField::affine(LinearMap::identity(2), Vector{-1.0, -0.5}), Vector{1.0, 0.5}},
      // Boundary solution with a nonzero field value.
      {ProjectableSet::box(Vector{0.0, 0.0}, Vector{1.0, 1.0}),
       VectorField::affine(LinearMap::identity(2), Vector{1.0, 1.0}), Vector{0.0, 0.0}},
      // Ball with the minimum-norm characterization.
      {ProjectableSet::ball(Vector{3.0, 0.0}, 1.0), VectorField::identity(2), Vector{2.0, 0.0}},
  };
  for (const auto& c : cases) {
    const double res = vip_residual(c.set, c.field, 0.7, c.solution);
    REQUIRE(res <= 1e-12);
    const Vector fx = c.field(c.solution);
    for (int i = 0; i < 100; ++i) {
      const Vector y = testutil::sample_point(c.set, rng);
      CHECK(dot(fx, y - c.solution) >= -1e-8);
    }
  }
}
