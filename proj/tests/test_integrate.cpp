#include <doctest.h>

#include <cmath>
#include <numbers>

#include "lcm/errors.hpp"
#include "lcm/integrate.hpp"

using namespace lcm;
using std::numbers::pi;

namespace {

// ln P(|X| > r), X standard normal in R^3
double log_chi3_tail(double r) {
  if (r == 0.0) return 0.0;
  const double c = std::sqrt(2.0 / pi) * r;
  return std::log(c) - r * r / 2 + std::log1p(std::erfc(r / std::sqrt(2.0)) * std::exp(r * r / 2) / c);
}

}  // namespace

TEST_CASE("log-domain quadrature") {
  const Estimate e = log_integral([](double x) { return -x; }, 0.0, 1.0);
  CHECK(e.log_value == doctest::Approx(std::log(1 - std::exp(-1.0))).epsilon(1e-14));
  CHECK(e.abs_log_error < 1e-10);
  const Estimate big = log_integral([](double x) { return 1000.0 - x; }, 0.0, 1.0);
  CHECK(big.log_value == doctest::Approx(1000.0 + std::log(1 - std::exp(-1.0))).epsilon(1e-14));
  const Estimate peaked = log_integral([](double x) { return -1e4 * (x - 0.3) * (x - 0.3); }, 0.0, 1.0);
  CHECK(peaked.log_value == doctest::Approx(0.5 * std::log(pi / 1e4)).epsilon(1e-12));
}

TEST_CASE("tail integrals against closed forms") {
  const Estimate g1 = log_tail_integral(PhiFunction::gaussian(1), 0, 3.0, 0.0);
  CHECK(g1.log_value == doctest::Approx(std::log(0.5 * std::erfc(3.0 / std::sqrt(2.0)))).epsilon(1e-13));
  for (double t : {0.0, 1.0, 4.0, 10.0, 30.0}) {
    const Estimate g3 = log_tail_integral(PhiFunction::gaussian(3), 2, t, 0.0);
    const double oracle = log_chi3_tail(t) - std::log(4 * pi);
    CHECK(g3.log_value == doctest::Approx(oracle).epsilon(1e-12));
  }
  const Estimate quartic = log_tail_integral(PhiFunction::power(4.0), 0, 0.0, 0.0);
  CHECK(quartic.log_value == doctest::Approx(std::log(std::tgamma(1.25) * std::pow(4.0, 0.25))).epsilon(1e-13));
  for (int m = 0; m <= 4; ++m) {
    const Estimate f = log_tail_integral(PhiFunction::linear(1.0), m, 10.0, 10.0);
    CHECK(f.log_value == doctest::Approx(std::lgamma(m + 1.0) - 10.0).epsilon(1e-14));
  }
  const Estimate w = log_tail_integral(PhiFunction::power(3.0), 0, 2.0, 0.0, true);
  CHECK(w.log_value == doctest::Approx(-8.0 / 3.0).epsilon(1e-12));
  const Estimate piece = log_interval_integral(PhiFunction::linear(1.0), 1, 0.0, 1.0, 0.0);
  CHECK(piece.log_value == doctest::Approx(std::log(1 - 2 * std::exp(-1.0))).epsilon(1e-13));
}

TEST_CASE("flat profiles diverge") {
  const PhiFunction flat = PhiFunction::piecewise({{1.0, 0.0, 0.0}});
  CHECK_THROWS_AS(log_tail_integral(flat, 0, 0.0, 0.0), DivergenceError);
}

TEST_CASE("log-concave sampler") {
  const LogConcaveSampler half_normal([](double x) { return 0.5 * x * x; }, [](double x) { return x; }, 0.0,
                                      INFINITY);
  CHECK(half_normal.log_envelope_mass() >= std::log(std::sqrt(pi / 2)));
  const LogConcaveSampler shifted_exp([](double x) { return x; }, [](double) { return 1.0; }, 1.0, INFINITY);
  CounterRng rng(8, 0);
  Moments a, b;
  for (int i = 0; i < 100000; ++i) {
    const double x = half_normal.draw(rng);
    CHECK(x >= 0.0);
    a.add(x);
    b.add(shifted_exp.draw(rng));
  }
  CHECK(std::abs(a.mean() - std::sqrt(2 / pi)) < 5 * a.std_error());
  CHECK(std::abs(b.mean() - 2.0) < 5 * b.std_error());
}

TEST_CASE("weight moments") {
  LogMoments lm;
  Moments m;
  for (int i = 0; i < 100; ++i) {
    const double w = 1.0 + (i % 7);
    lm.add(std::log(w));
    m.add(w);
  }
  const Estimate e = lm.estimate();
  CHECK(e.log_value == doctest::Approx(std::log(m.mean())).epsilon(1e-13));
  CHECK(e.abs_log_error == doctest::Approx(m.std_error() / m.mean()).epsilon(1e-9));
  LogMoments empty;
  CHECK(empty.estimate().degenerate);
}

TEST_CASE("log add and subtract") {
  CHECK(log_add(std::log(2.0), std::log(3.0)) == doctest::Approx(std::log(5.0)));
  CHECK(log_add(-INFINITY, 1.0) == 1.0);
  CHECK(log_sub(std::log(5.0), std::log(3.0)) == doctest::Approx(std::log(2.0)));
  CHECK(log_sub(1.0, 1.0) == -INFINITY);
  CHECK(log_add(1000.0, 1000.0) == doctest::Approx(1000.0 + std::log(2.0)));
}
