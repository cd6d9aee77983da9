#include <doctest.h>

#include <cmath>
#include <numbers>

#include "lcm/measure.hpp"

using namespace lcm;
using std::numbers::pi;

namespace {

double log_chi3_tail(double r) {
  if (r == 0.0) return 0.0;
  const double c = std::sqrt(2.0 / pi) * r;
  return std::log(c) - r * r / 2 + std::log1p(std::erfc(r / std::sqrt(2.0)) * std::exp(r * r / 2) / c);
}

NormMeasure gaussian3() { return NormMeasure::norm_density(PhiFunction::gaussian(3), ConvexBody::ball(3)); }

}  // namespace

TEST_CASE("normalizers") {
  CHECK(gaussian3().log_normalizer().log_value == doctest::Approx(0.0).scale(1.0).epsilon(1e-14));
  // e^{-|x|^2/2} over the plane: 2 pi
  const NormMeasure p2 = NormMeasure::norm_density(PhiFunction::power(2.0), ConvexBody::ball(2));
  CHECK(normalizer(p2) == doctest::Approx(2 * pi).epsilon(1e-13));
  // e^{-|x|_inf} in R^2: 4 * 2! * |[-1,1]^2| / 4 ... = n! |L| = 2 * 4
  const NormMeasure lin = NormMeasure::norm_density(PhiFunction::linear(1.0), ConvexBody::box({1, 1}));
  CHECK(normalizer(lin) == doctest::Approx(8.0).epsilon(1e-13));
  const NormMeasure u = NormMeasure::uniform_on(ConvexBody::box({1, 1}));
  CHECK(u.is_uniform());
  CHECK_THROWS(u.phi());
}

TEST_CASE("dilate masses against the chi-3 law") {
  const NormMeasure mu = gaussian3();
  for (double a : {0.5, 1.0, 2.0, 4.0, 9.0}) {
    CHECK(log_tail_dilate(mu, a).log_value == doctest::Approx(log_chi3_tail(a)).epsilon(1e-12));
    CHECK(mass_dilate(mu, a) == doctest::Approx(-std::expm1(log_chi3_tail(a))).epsilon(1e-12));
  }
  CHECK(mass_dilate(mu, 0.0) == 0.0);
}

TEST_CASE("density") {
  const NormMeasure mu = gaussian3();
  const double x[] = {1, 2, 2};
  CHECK(log_density(mu, x) == doctest::Approx(-4.5 - 1.5 * std::log(2 * pi)));
}

TEST_CASE("tail bracket of a cube") {
  const NormMeasure mu = gaussian3();
  const ConvexBody cube = ConvexBody::box({0.8, 0.8, 0.8});
  const double p_in = std::erf(0.8 * 2 / std::sqrt(2.0));
  const TailBracket b = tail_log_bracket(mu, cube, 2.0, 1 << 16, 1);
  CHECK(b.r_in == doctest::Approx(0.8));
  CHECK(b.lower.log_value <= b.point.log_value);
  CHECK(b.point.log_value <= b.upper.log_value);
  const double truth = std::log1p(-p_in * p_in * p_in);
  CHECK(std::abs(b.point.log_value - truth) < 5 * b.point.abs_log_error);
  const TailBracket dil = tail_log_bracket(mu, ConvexBody::ball(3, 2.0), 1.5, 1 << 10, 1);
  CHECK(dil.point.deterministic());
  CHECK(dil.point.log_value == doctest::Approx(log_chi3_tail(3.0)).epsilon(1e-12));
}

TEST_CASE("layered mass") {
  const NormMeasure mu = gaussian3();
  for (double a : {0.5, 1.0, 2.0}) {
    const Estimate e = layered_mass(mu, ConvexBody::ball(3, a), 1 << 12, 0);
    CHECK(e.deterministic());
    CHECK(std::exp(e.log_value) == doctest::Approx(mass_dilate(mu, a)).epsilon(1e-8));
  }
  const double p = std::erf(0.8 / std::sqrt(2.0));
  const Estimate cube = layered_mass(mu, ConvexBody::box({0.8, 0.8, 0.8}), 1 << 18, 4);
  CHECK(std::abs(cube.value() - p * p * p) < 5 * cube.abs_log_error * cube.value());
  // polygonal K against polygonal L uses exact layers
  const NormMeasure sq = NormMeasure::norm_density(PhiFunction::linear(1.0), ConvexBody::box({1, 1}));
  const Estimate rect = layered_mass(sq, ConvexBody::box({1, 2}), 1 << 12, 0);
  CHECK(rect.deterministic());
  // ∫_0^1 ∫_0^2 e^{-max(x, y)} dy dx = 2 - 3/e - 1/e^2, times 4 quadrants over Z = 8
  const double inner = 2 - 3 * std::exp(-1.0) - std::exp(-2.0);
  CHECK(rect.value() == doctest::Approx(4 * inner / 8).epsilon(1e-10));
}

TEST_CASE("samples follow the radial law") {
  const NormMeasure mu = gaussian3();
  const auto xs = sample(mu, 100000, 17);
  double s2 = 0;
  for (const auto& x : xs) s2 += x[0] * x[0] + x[1] * x[1] + x[2] * x[2];
  CHECK(s2 / xs.size() == doctest::Approx(3.0).epsilon(0.02));
  CHECK(sample(mu, 10, 17)[3] == xs[3]);
}

TEST_CASE("uniform variant") {
  const NormMeasure u = NormMeasure::uniform_on(ConvexBody::box({1, 1}));
  CHECK(uniform_mass(u, ConvexBody::ball(2), 0.5) == doctest::Approx(pi / 16));
  CHECK(uniform_mass(u, ConvexBody::box({1, 1}), 2.0) == 1.0);
}
