#include <doctest.h>

#include <cmath>
#include <numbers>

#include "lcm/bodies.hpp"
#include "lcm/planar.hpp"
#include "lcm/rng.hpp"

using namespace lcm;
using std::numbers::pi;

namespace {

ConvexBody octagon() {
  const double s = std::sqrt(0.5);
  return ConvexBody::polytope({{1, 0}, {0, 1}, {s, s}, {s, -s}}, {1, 1, 1.2 * s, 1.2 * s});
}

}  // namespace

TEST_CASE("factories validate") {
  CHECK_THROWS(ConvexBody::ball(0));
  CHECK_THROWS(ConvexBody::ball(3, -1));
  CHECK_THROWS(ConvexBody::lp_ball(0.5, {1, 1}));
  CHECK_THROWS(ConvexBody::box({1, 0}));
  CHECK_THROWS(ConvexBody::polytope({{1, 0}}, {1}));  // unbounded
  CHECK_THROWS(ConvexBody::dilate(ConvexBody::ball(2), 0));
  CHECK_NOTHROW(ConvexBody::ball(1));
}

TEST_CASE("closed form volumes") {
  CHECK(volume(ConvexBody::ball(3)) == doctest::Approx(4 * pi / 3).epsilon(1e-14));
  CHECK(volume(ConvexBody::ball(2, 2)) == doctest::Approx(4 * pi).epsilon(1e-14));
  CHECK(volume(ConvexBody::box({1, 2, 3})) == doctest::Approx(48).epsilon(1e-14));
  CHECK(volume(ConvexBody::lp_ball(1, {1, 1, 1})) == doctest::Approx(8.0 / 6.0).epsilon(1e-13));
  CHECK(volume(ConvexBody::lp_ball(2, {1, 1, 1})) == doctest::Approx(4 * pi / 3).epsilon(1e-13));
  CHECK(volume(ConvexBody::dilate(ConvexBody::box({1, 1}), 3)) == doctest::Approx(36).epsilon(1e-14));
  // square with corners cut: 4 - 4 * (1 - (1.2 - 1)) ... corner triangles of leg 0.8
  CHECK(volume(octagon()) == doctest::Approx(4 - 4 * 0.5 * 0.8 * 0.8).epsilon(1e-12));
  CHECK(volume(ConvexBody::polytope({{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}, {1, 2, 0.5})) ==
        doctest::Approx(8).epsilon(1e-12));
}

TEST_CASE("monte carlo volume agrees") {
  // cross-polytope in R^4 as 16 half-spaces (8 symmetric pairs): 2^4 / 4!
  std::vector<Vec> normals;
  for (int m = 0; m < 8; ++m) normals.push_back({1.0, m & 1 ? -1.0 : 1.0, m & 2 ? -1.0 : 1.0, m & 4 ? -1.0 : 1.0});
  const ConvexBody cross = ConvexBody::polytope(normals, Vec(8, 1.0));
  CHECK_FALSE(has_exact_volume(cross));
  const Estimate e = volume_estimate(cross, 1 << 18, 3);
  const double exact = 16.0 / 24.0;
  CHECK(e.abs_log_error > 0.0);
  CHECK(std::abs(e.value() - exact) < 5 * e.abs_log_error * exact);
}

TEST_CASE("norm, support, containment") {
  const ConvexBody box = ConvexBody::box({2, 1});
  const double x[] = {1, 1};
  CHECK(norm(box, x) == doctest::Approx(1.0));
  CHECK(support(box, x) == doctest::Approx(3.0));
  CHECK(contains(box, x));
  const double y[] = {3, 0};
  CHECK_FALSE(contains(box, y));
  CHECK(contains(box, y, 1.5));
  const ConvexBody l1 = ConvexBody::lp_ball(1, {1, 1});
  CHECK(norm(l1, x) == doctest::Approx(2.0));
  CHECK(support(l1, x) == doctest::Approx(1.0));
  const double u[] = {1, 0};
  CHECK(support(octagon(), u) == doctest::Approx(1.0));
  const double d[] = {std::sqrt(0.5), std::sqrt(0.5)};
  CHECK(support(octagon(), d) == doctest::Approx(1.2 * std::sqrt(0.5)));
  CHECK(norm(octagon(), x) == doctest::Approx(1.0 / 0.6));
}

TEST_CASE("inradius and bracket") {
  const ConvexBody ball = ConvexBody::ball(3);
  const ConvexBody cube = ConvexBody::box({0.8, 0.8, 0.8});
  CHECK(inradius(cube, ball).radius == doctest::Approx(0.8));
  CHECK(inradius(ball, cube).radius == doctest::Approx(1.0 / (0.8 * std::sqrt(3.0))));
  const Bracket b = bracket(cube, ball);
  CHECK(b.r_in == doctest::Approx(0.8));
  CHECK(b.r_out == doctest::Approx(0.8 * std::sqrt(3.0)));
  // net route: lp ball against a rotated square
  const ConvexBody l3 = ConvexBody::lp_ball(3, {1, 1});
  const ConvexBody disc = ConvexBody::ball(2);
  CHECK(inradius(l3, disc).radius == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(inradius(disc, l3).radius == doctest::Approx(std::pow(2.0, 1.0 / 3.0 - 0.5)).epsilon(1e-6));
}

TEST_CASE("central sections") {
  const ConvexBody cube = ConvexBody::box({1, 1, 1});
  const double e1[] = {1, 0, 0};
  const double diag[] = {std::sqrt(0.5), std::sqrt(0.5), 0};
  CHECK(central_section_volume(cube, e1) == doctest::Approx(4));
  CHECK(central_section_volume(cube, diag) == doctest::Approx(4 * std::sqrt(2.0)));
  CHECK(central_section_volume(ConvexBody::ball(3), e1) == doctest::Approx(pi));
  const double e2[] = {0, 1};
  CHECK(central_section_volume(ConvexBody::box({3, 1}), e2) == doctest::Approx(6));
}

TEST_CASE("disc rectangle area against sampling") {
  CounterRng rng(11, 0);
  for (int i = 0; i < 20; ++i) {
    const double t = 0.1 + 2 * rng.uniform(), w = 0.2 + rng.uniform(), h = 0.2 + rng.uniform();
    const int n = 200000;
    int hits = 0;
    for (int j = 0; j < n; ++j) {
      const double x = (2 * rng.uniform() - 1) * w, y = (2 * rng.uniform() - 1) * h;
      hits += x * x + y * y <= t * t;
    }
    const double p = static_cast<double>(hits) / n, box = 4 * w * h;
    const double se = box * std::sqrt(p * (1 - p) / n) + 1e-12;
    CHECK(std::abs(disc_rectangle_area(t, w, h) - box * p) < 5 * se);
  }
  CHECK(disc_rectangle_area(0.5, pi / 2, 0.5) == pi * 0.25);
  CHECK(disc_rectangle_area(10, pi / 2, 0.5) == pi);
}

TEST_CASE("exact intersections") {
  const auto v = exact_intersection_volume(ConvexBody::box({1, 2}), ConvexBody::box({2, 0.5}));
  REQUIRE(v);
  CHECK(*v == doctest::Approx(2));
  const auto w = exact_intersection_volume(ConvexBody::ball(3), ConvexBody::dilate(ConvexBody::ball(3), 0.5));
  REQUIRE(w);
  CHECK(*w == doctest::Approx(pi / 6));
  const auto o = exact_intersection_volume(octagon(), ConvexBody::box({0.5, 0.5}));
  REQUIRE(o);
  CHECK(*o == doctest::Approx(1));
}

TEST_CASE("uniform samples stay inside") {
  CounterRng rng(5, 0);
  for (const ConvexBody& b : {ConvexBody::ball(4), ConvexBody::lp_ball(1.5, {1, 2, 3}), ConvexBody::box({1, 3}),
                              octagon(), ConvexBody::dilate(ConvexBody::ball(2), 2)}) {
    std::vector<double> x(static_cast<std::size_t>(b.dim()));
    for (int i = 0; i < 2000; ++i) {
      sample_uniform(b, rng, x);
      CHECK(norm(b, x) <= 1 + 1e-12);
    }
  }
}

TEST_CASE("sphere net") {
  for (int d : {2, 3, 5}) {
    const auto net = sphere_net(d, 100);
    CHECK(net.size() == 100);
    for (const auto& v : net) CHECK(euclidean_norm(v) == doctest::Approx(1.0));
  }
}
