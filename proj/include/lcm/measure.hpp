#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "lcm/bodies.hpp"
#include "lcm/estimate.hpp"
#include "lcm/phi.hpp"

namespace lcm {

/// Either density e^{-phi(|x|_L)} / Z, or the uniform probability on a body.
class NormMeasure {
 public:
  static NormMeasure norm_density(PhiFunction phi, ConvexBody L);
  static NormMeasure uniform_on(ConvexBody omega);

  bool is_uniform() const { return uniform_; }
  int dim() const { return body_.dim(); }
  /// Throws for the uniform variant.
  const PhiFunction& phi() const;
  /// The norming body L, or Omega for the uniform variant.
  const ConvexBody& body() const { return body_; }

  /// ln Z with Z = n |L| ∫_0^∞ v^{n-1} e^{-phi(v)} dv, computed once.
  const Estimate& log_normalizer() const;
  /// ln ∫_0^∞ v^{n-1} e^{-phi(v)} dv
  const Estimate& log_radial_total() const;

  std::string describe() const;

 private:
  struct Cache;
  NormMeasure(PhiFunction phi, ConvexBody body, bool uniform);
  PhiFunction phi_;
  ConvexBody body_;
  bool uniform_;
  std::shared_ptr<Cache> cache_;
};

double normalizer(const NormMeasure& mu);

/// ln of the normalized density at x.
double log_density(const NormMeasure& mu, std::span<const double> x);

/// ln mu(aL) by the radial reduction.
Estimate log_mass_dilate(const NormMeasure& mu, double a);
double mass_dilate(const NormMeasure& mu, double a);
/// ln mu((aL)^c), computed on the complement directly.
Estimate log_tail_dilate(const NormMeasure& mu, double a);

struct TailBracket {
  Estimate lower;  // ln mu((t R_out L)^c)
  Estimate upper;  // ln mu((t r_in L)^c)
  Estimate point;  // ln mu((tK)^c)
  double r_in = 0.0;
  double r_out = 0.0;
  bool flagged = false;
};

/// Brackets ln mu((tK)^c) between exact dilate tails and refines it by
/// sampling the shell t r_in <= |x|_L < t R_out from the radial law.
/// With q = mu((t R_out L)^c) / mu((t r_in L)^c) and p the shell fraction
/// outside tK, point = upper + ln(q + (1 - q) p), which always lies in
/// [lower, upper].
TailBracket tail_log_bracket(const NormMeasure& mu, const ConvexBody& K, double t, std::uint64_t budget,
                             std::uint64_t seed);

/// ln mu(K) = ln[(1/Z) ∫ e^{-u} |K ∩ phi^{-1}(u) L| du].
/// Exact inner volumes when available (dilates, boxes, discs in rectangles,
/// polytopes in n <= 3); otherwise every inner volume is estimated from one
/// uniform point set in the bounding box, for which the u-integral is
/// (|B|/N) Σ 1_K(x_i) e^{-phi(|x_i|_L)}.
Estimate layered_mass(const NormMeasure& mu, const ConvexBody& K, std::uint64_t budget, std::uint64_t seed);

/// Radius by exact log-concave rejection, direction y/|y|_L with y uniform in L.
std::vector<Vec> sample(const NormMeasure& mu, std::size_t count, std::uint64_t seed);

/// |tK ∩ Omega| / |Omega| for the uniform variant.
double uniform_mass(const NormMeasure& mu, const ConvexBody& K, double t);

nlohmann::json to_json(const TailBracket& b);

}  // namespace lcm
