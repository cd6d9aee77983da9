#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "lcm/measure.hpp"

namespace lcm {

/// ln of the (n-1)-dimensional integral of mu's density over rK ∩ xi^perp.
///
/// Routes: r = 0 gives -inf; K a dilate of L uses the radial form
/// (n-1)|L ∩ xi^perp| ∫_0^{ra} v^{n-2} e^{-phi}; in R^3 a polygonal slice
/// against a Euclidean L is integrated in polar coordinates with the exact
/// angular measure of the polygon on each circle, and against a polygonal
/// L by layers in u; everything else is Monte Carlo on a cube in the plane.
Estimate section_measure(const NormMeasure& mu, const ConvexBody& K, std::span<const double> xi, double r,
                         std::uint64_t budget = 1 << 16, std::uint64_t seed = 0);

enum class Comparison { strict, equal, violation, inconclusive };
std::string to_string(Comparison c);

/// Is a <= b? Overlapping deterministic intervals count as equal, overlapping
/// Monte Carlo intervals (at `sigmas`) as inconclusive.
Comparison compare_le(const Estimate& a, const Estimate& b, double sigmas = kCertifySigmas);

struct SectionPair {
  double r;
  std::size_t xi_index;
  Vec xi;
  Estimate k_section;
  Estimate l_section;
  Comparison outcome;
  double paired_difference = 0.0;  // Monte Carlo pairs only
  double paired_std_error = 0.0;
};

enum class HypothesisVerdict { holds, fails, inconclusive };
std::string to_string(HypothesisVerdict v);

struct DominanceReport {
  std::vector<double> r_grid;
  std::vector<Vec> xi_net;
  std::vector<SectionPair> pairs;
  HypothesisVerdict hypothesis = HypothesisVerdict::inconclusive;
  std::optional<std::size_t> failing_pair;

  // Filled by bp_experiment.
  bool has_conclusion = false;
  Estimate k_mass;
  Estimate l_mass;
  Comparison mass_comparison = Comparison::inconclusive;  // mu(K) <= mu(L)?
  bool counterexample = false;
  // Uniform measures: dilate masses and the inclusion K ⊆ L.
  std::vector<std::pair<double, double>> dilate_masses;
  std::optional<bool> k_inside_l;

  std::string csv() const;
  nlohmann::json json() const;
};

/// Certified comparisons of the section measures of rK and rL over the grid.
DominanceReport dominance_check(const NormMeasure& mu, const ConvexBody& K, const ConvexBody& L,
                                const std::vector<double>& r_grid, const std::vector<Vec>& xi_net,
                                std::uint64_t budget = 1 << 16, std::uint64_t seed = 0);

/// dominance_check then mu(K) vs mu(L). For a uniform measure the
/// hypothesis is the dilate version mu(rK) <= mu(rL) and the conclusion is
/// the inclusion K ⊆ L.
DominanceReport bp_experiment(const NormMeasure& mu, const ConvexBody& K, const ConvexBody& L,
                              const std::vector<double>& r_grid, const std::vector<Vec>& xi_net,
                              std::uint64_t budget = 1 << 16, std::uint64_t seed = 0);

/// |disc(t) ∩ box| for an origin-centred rectangle.
double circle_box_area(double t, const ConvexBody& box);

struct RectangleRow {
  double t;
  double area_ball;   // |tB ∩ Omega|
  double area_omega;  // |tOmega ∩ Omega|
  bool pass;
};

struct RectangleDemo {
  std::vector<RectangleRow> rows;
  double ball_area = 0.0;
  double omega_area = 0.0;
  double omega_support_y = 0.0;  // h_Omega((0,1)) = 1/2 < 1 = h_B((0,1))
  bool non_inclusion = false;
  bool all_pass = false;
  std::string csv() const;
  nlohmann::json json() const;
};

/// Omega = [-pi/2, pi/2] x [-1/2, 1/2].
ConvexBody rectangle_omega();
RectangleDemo rectangle_demo(const std::vector<double>& t_grid);

enum class FactStatus { holds, equal, violated, inconclusive, hypothesis_violated };
std::string to_string(FactStatus s);

struct FactReport {
  FactStatus status = FactStatus::inconclusive;
  double volume_k = 0.0;
  double volume_rl = 0.0;
  Estimate layered;  // ln mu(K)
  Estimate dilate;   // ln mu(RL)
  std::size_t inner_checks = 0;
  std::size_t inner_failures = 0;
  nlohmann::json json() const;
};

/// |K| <= |RL| first, then mu(K) <= mu(RL), plus the layer comparison
/// |K ∩ sL| <= |RL ∩ sL| on a grid of levels when exact volumes exist.
FactReport fact_check(const PhiFunction& phi, const ConvexBody& L, const ConvexBody& K, double R,
                      std::uint64_t budget = 1 << 16, std::uint64_t seed = 0);

}  // namespace lcm
