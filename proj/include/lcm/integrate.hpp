#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <span>
#include <vector>

#include "lcm/estimate.hpp"
#include "lcm/phi.hpp"
#include "lcm/rng.hpp"

namespace lcm {

/// ln of the integral of exp(log_f) over [a, b] by adaptive Gauss-Kronrod
/// (21 points) in log space. Panels whose contribution drops below
/// `log_floor` are accepted without refinement.
Estimate log_integral(const std::function<double(double)>& log_f, double a, double b,
                      double rel_tol = 1e-12,
                      double log_floor = -std::numeric_limits<double>::infinity());

/// ln ∫_t^∞ (v - shift)^power e^{-phi(v)} dv, times phi'(v) when
/// `derivative_weight` is set.
///
/// Segments start at t with width 1/phi'(t) and double; after each one the
/// convexity bound phi(v) >= phi(T) + phi'(T)(v - T) bounds the rest, and
/// integration stops once that bound is below 1e-13 of the running total.
/// Linear profiles use the closed form. Throws DivergenceError when phi'
/// stays at zero.
Estimate log_tail_integral(const PhiFunction& phi, int power, double t, double shift,
                           bool derivative_weight = false);

/// ln ∫_a^b (v - shift)^power e^{-phi(v)} dv.
Estimate log_interval_integral(const PhiFunction& phi, int power, double a, double b, double shift);

/// Streaming moments of weights given by their logarithms.
struct LogMoments {
  double max = -std::numeric_limits<double>::infinity();
  double s1 = 0.0;  // sum exp(lw - max)
  double s2 = 0.0;  // sum exp(2 (lw - max))
  std::uint64_t n = 0;
  std::uint64_t nonzero = 0;

  void add(double log_weight);
  void merge(const LogMoments& other);
  /// Mean weight with its standard error; degenerate when every weight is zero.
  Estimate estimate() const;
};

/// Plain moments of signed values.
struct Moments {
  double s1 = 0.0;
  double s2 = 0.0;
  std::uint64_t n = 0;

  void add(double x);
  void merge(const Moments& other);
  double mean() const;
  double std_error() const;
};

inline constexpr std::uint64_t kMonteCarloChunk = 4096;

/// Runs `samples` draws in chunks of kMonteCarloChunk; chunk c uses
/// CounterRng(seed, c, stream). Chunks run in parallel and are merged in
/// index order, so the result does not depend on the thread count.
LogMoments mc_log_moments(std::uint64_t samples, std::uint64_t seed,
                          const std::function<double(CounterRng&)>& log_weight, std::uint32_t stream = 0);
Moments mc_moments(std::uint64_t samples, std::uint64_t seed, const std::function<double(CounterRng&)>& value,
                   std::uint32_t stream = 0);

/// Importance proposal: draws a point and reports its log density.
struct Proposal {
  int dim = 0;
  std::function<void(CounterRng&, std::span<double>)> draw;
  std::function<double(std::span<const double>)> log_density;
};

/// Unbiased estimate of ∫_region exp(log_density) by importance sampling.
Estimate mc_region_measure(const std::function<double(std::span<const double>)>& log_density,
                           const std::function<bool(std::span<const double>)>& region, const Proposal& proposal,
                           std::uint64_t samples, std::uint64_t seed);

/// Exact sampler for a density proportional to exp(-psi) on [lo, hi] with psi
/// convex (hi may be infinite). The envelope is the upper hull of tangents at
/// the cell endpoints, plus an exponential cell beyond the last point when hi
/// is infinite.
class LogConcaveSampler {
 public:
  LogConcaveSampler(std::function<double(double)> psi, std::function<double(double)> dpsi, double lo, double hi,
                    int cells = 1024);
  double draw(CounterRng& rng) const;
  /// ln of the envelope mass, an upper bound for ln ∫ exp(-psi).
  double log_envelope_mass() const { return log_mass_; }

 private:
  struct Piece {
    double x0, x1;  // x1 may be +inf
    double c, g;    // envelope -psi >= -(c + g (x - x0))
    double log_mass;
  };
  std::function<double(double)> psi_;
  std::vector<Piece> pieces_;
  std::vector<double> cdf_;
  double log_mass_ = -std::numeric_limits<double>::infinity();
};

/// ln(e^a + e^b)
double log_add(double a, double b);
/// ln(e^a - e^b), a >= b
double log_sub(double a, double b);

}  // namespace lcm
