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
#include "splitvi/sets.hpp"

using namespace splitvi;

namespace {

/// A mixed bag of sets used by the property tests, in dimensions 1-4.
std::vector<ProjectableSet> property_sets(testutil::Rng& rng) {
  std::vector<ProjectableSet> out;
  out.push_back(ProjectableSet::whole_space(3));
  out.push_back(ProjectableSet::box(Vector{-1.0, -1.0}, Vector{1.0, 1.0}));
  out.push_back(ProjectableSet::box(rng.vector(3, -2.0, 0.0), rng.vector(3, 0.5, 3.0)));
  out.push_back(ProjectableSet::ball(Vector{0.0, 0.0}, 1.0));
  out.push_back(ProjectableSet::ball(rng.vector(4, -1.0, 1.0), rng.uniform(0.5, 2.0)));
  out.push_back(ProjectableSet::half_space(Vector{1.0, 0.0}, 0.0));
  out.push_back(ProjectableSet::half_space(rng.vector(3, -1.0, 1.0) + Vector{2.0, 0.0, 0.0},
                                           rng.uniform(-1.0, 1.0)));
  out.push_back(ProjectableSet::hyperplane(Vector{0.0, 1.0}, 1.0));
  out.push_back(ProjectableSet::hyperplane(Vector{1.0, 2.0, -1.0}, 0.5));
  out.push_back(ProjectableSet::affine_subspace({Vector{1.0, 1.0, 0.0}, Vector{0.0, 0.0, 2.0}},
                                                Vector{1.0, 0.0, 0.0}));
  out.push_back(ProjectableSet::product(
      {ProjectableSet::box(Vector{0.0}, Vector{1.0}), ProjectableSet::ball(Vector{0.0, 0.0}, 2.0)}));
  out.push_back(ProjectableSet::graph(LinearMap({{2.0, 0.0}, {1.0, -1.0}})));
  return out;
}

}  // namespace

TEST_CASE("set construction guards") {
  CHECK_THROWS_AS(ProjectableSet::box(Vector{1.0}, Vector{0.0}), std::invalid_argument);
  CHECK_THROWS_AS(ProjectableSet::ball(Vector{0.0}, -1.0), std::invalid_argument);
  CHECK_THROWS_AS(ProjectableSet::box(Vector{0.0}, Vector{0.0, 1.0}), DimensionError);

  // Degenerate descriptions normalize to the whole space when nonempty.
  CHECK(ProjectableSet::half_space(Vector{0.0, 0.0}, 1.0).is<sets::WholeSpace>());
  CHECK(ProjectableSet::hyperplane(Vector{0.0}, 0.0).is<sets::WholeSpace>());
  CHECK_THROWS_AS(ProjectableSet::half_space(Vector{0.0}, -1.0), std::invalid_argument);
  CHECK_THROWS_AS(ProjectableSet::hyperplane(Vector{0.0}, 2.0), std::invalid_argument);
}

TEST_CASE("projection worked examples") {
  const auto box = ProjectableSet::box(Vector{-1.0, -1.0}, Vector{1.0, 1.0});
  CHECK(box.project(Vector{0.2, -0.3}) == Vector{0.2, -0.3});  // interior point fixed

  const auto hs = ProjectableSet::half_space(Vector{1.0, 0.0}, 0.0);
  CHECK(hs.project(Vector{2.0, 3.0}) == Vector{0.0, 3.0});

  const auto ball = ProjectableSet::ball(Vector{0.0, 0.0}, 1.0);
  const Vector p = ball.project(Vector{3.0, 4.0});
  CHECK(distance(p, Vector{0.6, 0.8}) < 1e-15);

  CHECK_THROWS_AS(box.project(Vector{1.0, 2.0, 3.0}), DimensionError);
}

TEST_CASE("contains worked examples") {
  CHECK(ProjectableSet::whole_space(2).contains(Vector{9.0, -9.0}, 0.0));
  CHECK_FALSE(ProjectableSet::box(Vector{0.0, 0.0}, Vector{1.0, 1.0})
                  .contains(Vector{2.0, 0.0}, 1e-8));
  CHECK(ProjectableSet::hyperplane(Vector{0.0, 1.0}, 1.0).contains(Vector{5.0, 1.0}, 1e-8));
}

TEST_CASE("projection is idempotent and nonexpansive") {
  testutil::Rng rng(404);
  auto sets = property_sets(rng);
  int cases = 0;
  while (cases < 200) {
    const auto& s = sets[cases % sets.size()];
    const Vector x = rng.vector(s.dim(), -6.0, 6.0);
    const Vector y = rng.vector(s.dim(), -6.0, 6.0);
    const Vector px = s.project(x);
    const Vector py = s.project(y);
    CHECK(distance(s.project(px), px) <= 1e-10);        // idempotent
    CHECK(distance(px, py) <= distance(x, y) + 1e-10);  // nonexpansive
    ++cases;
  }
}

TEST_CASE("projection satisfies the variational characterization") {
  testutil::Rng rng(505);
  auto sets = property_sets(rng);
  for (const auto& s : sets) {
    for (int t = 0; t < 10; ++t) {
      const Vector x = rng.vector(s.dim(), -6.0, 6.0);
      const Vector px = s.project(x);
      for (int i = 0; i < 50; ++i) {
        const Vector y = testutil::sample_point(s, rng);
        CHECK(dot(x - px, px - y) >= -1e-10);
      }
    }
  }
}

TEST_CASE("projection satisfies the Pythagorean bound") {
  testutil::Rng rng(606);
  auto sets = property_sets(rng);
  for (const auto& s : sets) {
    for (int t = 0; t < 20; ++t) {
      const Vector x = rng.vector(s.dim(), -6.0, 6.0);
      const Vector y = testutil::sample_point(s, rng);
      const Vector px = s.project(x);
      const double lhs = dot(x - y, x - y);
      const double rhs = dot(x - px, x - px) + dot(y - px, y - px);
      CHECK(lhs >= rhs - 1e-9 * std::max(1.0, lhs));
    }
  }
}

TEST_CASE("supporting halfspace worked examples") {
  // z already in C: degenerate whole-space cut.
  const auto whole = ProjectableSet::whole_space(2);
  CHECK(supporting_halfspace(whole, Vector{3.0, -1.0}).is_whole_space());

  const auto box = ProjectableSet::box(Vector{-1.0, -1.0}, Vector{1.0, 1.0});
  const auto cut = supporting_halfspace(box, Vector{2.0, 0.0});
  REQUIRE_FALSE(cut.is_whole_space());
  CHECK(cut.normal() == Vector{1.0, 0.0});
  CHECK(cut.offset() == Catch::Approx(1.0).margin(1e-14));
  // All box corners lie inside the cut.
  for (double cx : {-1.0, 1.0}) {
    for (double cy : {-1.0, 1.0}) {
      CHECK(dot(cut.normal(), Vector{cx, cy}) <= cut.offset() + 1e-12);
    }
  }

  const auto ball = ProjectableSet::ball(Vector{0.0, 0.0}, 1.0);
  const auto bcut = supporting_halfspace(ball, Vector{0.0, 2.0});
  REQUIRE_FALSE(bcut.is_whole_space());
  CHECK(distance(bcut.normal(), Vector{0.0, 1.0}) < 1e-12);
  CHECK(bcut.offset() == Catch::Approx(1.0).margin(1e-12));
}

TEST_CASE("supporting halfspace contains the set and touches at y") {
  testutil::Rng rng(707);
  auto sets = property_sets(rng);
  for (const auto& s : sets) {
    for (int t = 0; t < 5; ++t) {
      const Vector z = rng.vector(s.dim(), -6.0, 6.0);
      const Vector y = s.project(z);
      const auto cut = make_supporting_cut(z, y);
      if (cut.is_whole_space()) continue;
      // Boundary support at y.
      CHECK(std::abs(dot(cut.normal(), y) - cut.offset()) <= 1e-10 * (1.0 + norm(cut.normal())));
      for (int i = 0; i < 100; ++i) {
        const Vector p = testutil::sample_point(s, rng);
        CHECK(dot(cut.normal(), p) <= cut.offset() + 1e-10);
      }
    }
  }
}

TEST_CASE("projection matches the grid oracle on compact sets") {
  testutil::Rng rng(808);
  // R^2 boxes and balls.
  for (int t = 0; t < 3; ++t) {
    const sets::Box raw{rng.vector(2, -1.5, -0.2), rng.vector(2, 0.2, 1.5)};
    const auto box = ProjectableSet::box(raw.lower, raw.upper);
    const auto oracle = testutil::GridProjectionOracle::for_box(raw);
    const Vector x = rng.vector(2, -3.0, 3.0);
    const Vector brute = oracle.nearest(x, 1e-3);
    CHECK(distance(box.project(x), brute) <= 2e-3);
  }
  for (int t = 0; t < 3; ++t) {
    const sets::Ball raw{rng.vector(2, -0.5, 0.5), rng.uniform(0.4, 1.2)};
    const auto ball = ProjectableSet::ball(raw.center, raw.radius);
    const auto oracle = testutil::GridProjectionOracle::for_ball(raw);
    const Vector x = rng.vector(2, -2.5, 2.5);
    const Vector brute = oracle.nearest(x, 1e-3);
    CHECK(distance(ball.project(x), brute) <= 2e-3);
  }
  // R^3 spot checks.
  {
    const sets::Box raw{Vector{-1.0, -0.5, 0.0}, Vector{0.5, 1.0, 1.5}};
    const auto box = ProjectableSet::box(raw.lower, raw.upper);
    const auto oracle = testutil::GridProjectionOracle::for_box(raw);
    const Vector x{1.4, -1.3, 0.7};
    CHECK(distance(box.project(x), oracle.nearest(x, 1e-3)) <= 2e-3);
  }
  {
    const sets::Ball raw{Vector{0.2, -0.1, 0.3}, 0.8};
    const auto ball = ProjectableSet::ball(raw.center, raw.radius);
    const auto oracle = testutil::GridProjectionOracle::for_ball(raw);
    const Vector x{1.5, 1.1, -0.9};
    CHECK(distance(ball.project(x), oracle.nearest(x, 1e-3)) <= 2e-3);
  }
}

TEST_CASE("affine subspace projection and rank tolerance") {
  // Dependent direction is dropped; the span stays the x-axis.
  const auto line = ProjectableSet::affine_subspace(
      {Vector{1.0, 0.0}, Vector{2.0, 0.0}}, Vector{0.0, 1.0});
  CHECK(distance(line.project(Vector{3.0, 5.0}), Vector{3.0, 1.0}) < 1e-12);

  // Empty basis leaves the anchor point.
  const auto point = ProjectableSet::affine_subspace({}, Vector{2.0, -1.0});
  CHECK(point.project(Vector{10.0, 10.0}) == Vector{2.0, -1.0});
}

TEST_CASE("block product projects blockwise") {
  const auto prod = ProjectableSet::product({ProjectableSet::box(Vector{0.0}, Vector{1.0}),
                                             ProjectableSet::ball(Vector{0.0, 0.0}, 1.0)});
  REQUIRE(prod.dim() == 3);
  const Vector p = prod.project(Vector{2.0, 3.0, 4.0});
  CHECK(p[0] == 1.0);
  CHECK(distance(segment(p, 1, 2), Vector{0.6, 0.8}) < 1e-15);
}

TEST_CASE("graph subspace projection matches the closed form") {
  // A = identity in R^1: minimize (u - 0)^2 + (u - 4)^2 -> u = 2.
  const auto [u, v] = project_onto_graph(LinearMap::identity(1), Vector{0.0}, Vector{4.0});
  CHECK(u == Vector{2.0});
  CHECK(v == Vector{2.0});

  // Zero map: V = {(u, 0)}.
  const auto [uz, vz] = project_onto_graph(LinearMap(2, 2), Vector{1.5, -2.5}, Vector{3.0, 4.0});
  CHECK(uz == Vector{1.5, -2.5});
  CHECK(vz == Vector{0.0, 0.0});

  // (x, Ax) is already on the graph.
  const LinearMap a({{2.0, 0.0}, {1.0, -1.0}});
  const Vector x{0.5, -1.0};
  const auto [ug, vg] = project_onto_graph(a, x, a.apply(x));
  CHECK(distance(ug, x) < 1e-14);
  CHECK(distance(vg, a.apply(x)) < 1e-14);
}

TEST_CASE("graph projection satisfies the subspace variational identity") {
  testutil::Rng rng(909);
  for (int t = 0; t < 10; ++t) {
    const std::size_t n = 1 + rng.index(3);
    const std::size_t m = 1 + rng.index(3);
    const LinearMap a = rng.matrix(m, n, -2.0, 2.0);
    const Vector x = rng.vector(n, -3.0, 3.0);
    const Vector y = rng.vector(m, -3.0, 3.0);
    const auto [u, v] = project_onto_graph(a, x, y);
    CHECK(distance(v, a.apply(u)) <= 1e-12 * (1.0 + norm(u)));
    for (int i = 0; i < 50; ++i) {
      const Vector w = rng.vector(n, -3.0, 3.0);
      // <(x,y) - (u,Au), (w,Aw) - (u,Au)> <= tol for all graph points.
      const double ip = dot(x - u, w - u) + dot(y - v, a.apply(w) - v);
      CHECK(std::abs(ip) <= 1e-10 * (1.0 + norm(x) + norm(y)));
    }
  }
}
