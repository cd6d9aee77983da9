#include <doctest.h>

#include <cmath>
#include <limits>

#include "lcm/phi.hpp"
#include "lcm/tower.hpp"

using namespace lcm;

namespace {

std::vector<double> uniform_grid(double hi, std::size_t n) {
  std::vector<double> g(n);
  for (std::size_t i = 0; i < n; ++i) g[i] = hi * static_cast<double>(i) / static_cast<double>(n - 1);
  return g;
}

// Smallest e with sqrt(2^e) + b > exp(a + 1/2 + b / sqrt(2^e)).
int doubling_exponent(long double a, long double b) {
  for (int e = 0;; ++e) {
    const long double s = std::sqrt(std::ldexp(1.0L, e));
    if (std::log(s + b) > a + 0.5L + b / s) return e;
  }
}

}  // namespace

TEST_CASE("tower arithmetic") {
  const Tower x = Tower::from_double(5.0);
  CHECK(x.level() == 0);
  CHECK(x.to_double() == 5.0);
  const Tower big = Tower::make(1, 1000.0);  // e^1000
  CHECK(big.level() == 1);
  CHECK(big.ln().to_double() == doctest::Approx(1000.0));
  CHECK(Tower::make(1, 3.0).level() == 0);  // normalized
  CHECK(Tower::make(1, 3.0).to_double() == doctest::Approx(std::exp(3.0)));
  CHECK(x < big);
  CHECK(big.exp() > big);
  CHECK(big.scale(0.5).ln().to_double() == doctest::Approx(1000.0 - std::log(2.0)));
  CHECK(big.add(1.0) == big);
  CHECK(log_ratio(big, Tower::from_double(std::exp(10.0))) == doctest::Approx(990.0));
  CHECK(log_ratio(big.exp(), big) == std::numeric_limits<double>::infinity());
  CHECK(big.str() == "exp^1(1000)");
}

TEST_CASE("profiles evaluate and invert") {
  const PhiFunction g = PhiFunction::gaussian(3);
  CHECK(phi_value(g, 2.0) == doctest::Approx(2.0 + 1.5 * std::log(2 * M_PI)));
  CHECK(phi_eval(g, 2.0).left_derivative == doctest::Approx(2.0));
  const PhiFunction p = PhiFunction::power(3.0, 2.0, 0.5);
  CHECK(phi_value(p, 4.0) == doctest::Approx(8.0 / 3.0 + 0.5));
  CHECK(phi_inverse(p, phi_value(p, 4.0)) == doctest::Approx(4.0));
  const PhiFunction l = PhiFunction::linear(2.0, 1.0);
  CHECK(phi_value(l, 3.0) == 7.0);
  CHECK(as_linear(l));
  CHECK_FALSE(as_linear(g));
  const PhiFunction shifted = l.with_plateau(1.0);
  CHECK(phi_value(shifted, 0.5) == 1.0);
  CHECK(phi_value(shifted, 3.0) == 5.0);
  CHECK(phi_inverse(shifted, 5.0) == doctest::Approx(3.0));
  CHECK_THROWS(PhiFunction::power(0.5));
  CHECK_THROWS(PhiFunction::linear(-1.0));
}

TEST_CASE("pathological profile: doubling rule") {
  const PathologicalPhi p = build_pathological_phi(10);
  REQUIRE(p.knots.size() == 11);
  const int e0 = doubling_exponent(1, 1);
  CHECK(e0 == 5);
  CHECK(p.knots[0].log2_alpha == e0);
  CHECK(p.knots[0].a.to_double() == 1.0);
  // next piece: a + b + alpha/2, b + alpha
  const long double a1 = 1 + 1 + 16, b1 = 1 + 32;
  CHECK(p.knots[1].a.to_double() == a1);
  CHECK(p.knots[1].b.to_double() == b1);
  CHECK(p.knots[1].log2_alpha == doubling_exponent(a1, b1));
  for (const auto& k : p.knots) {
    CHECK(k.margin > 0.0);
    // margins near 0.2 vanish in the rounded towers once phi(t_k) ~ 1e16
    CHECK_FALSE(k.log_dphi_t < k.phi_t);
    CHECK(k.log_sqrt_alpha > Tower::from_double(0.0));  // t_k - k in (0, 1)
  }
  CHECK(p.knots[0].t_k == doctest::Approx(std::pow(32.0, -0.5)));
  CHECK(p.knots[1].t_k > 1.0);
  CHECK(p.knots[1].t_k < 2.0);
  CHECK(p.knots[0].phi_t < p.knots[0].log_dphi_t);
  CHECK(p.knots[1].phi_t < p.knots[1].log_dphi_t);
}

TEST_CASE("pathological profile passes validation") {
  const PathologicalPhi p = build_pathological_phi(10);
  const PhiDiagnostics d = validate_phi(p.phi, uniform_grid(11.0, 10000));
  CHECK(d.pass);
  CHECK(d.convex);
  CHECK(d.saturated > 0);
  CHECK(phi_value(p.phi, 0.0) == 1.0);
  CHECK(phi_eval(p.phi, 0.5).left_derivative == doctest::Approx(17.0));
}

TEST_CASE("validation rejects a concave kink") {
  // slope drops from 5 to 1 at t = 1
  const PhiFunction bad = PhiFunction::piecewise({{0.0, 5.0, 0.0}, {5.0, 1.0, 0.0}});
  const PhiDiagnostics d = validate_phi(bad, uniform_grid(3.0, 301));
  CHECK_FALSE(d.pass);
  CHECK_FALSE(d.convex);
  REQUIRE(d.first_violation);
  CHECK(*d.violation_piece == 1);
  const PhiFunction falling = PhiFunction::piecewise({{1.0, -1.0, 0.0}});
  CHECK_FALSE(validate_phi(falling, uniform_grid(2.0, 50)).nondecreasing);
  CHECK(validate_phi(PhiFunction::gaussian(2), uniform_grid(20.0, 1000)).pass);
}
