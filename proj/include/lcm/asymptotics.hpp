#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "lcm/measure.hpp"

namespace lcm {

struct TailRatio {
  double t = 0.0;
  double rho = 0.0;     // point / phi(r t)
  double rho_lo = 0.0;  // bracket lower / phi(r t)
  double rho_hi = 0.0;  // bracket upper / phi(r t)
  double denominator = 0.0;
  TailBracket bracket;
};

/// rho(t) = ln mu((tK)^c) / phi(r(K,L) t). Throws UndefinedError when phi(r t) = 0.
TailRatio tail_ratio(const NormMeasure& mu, const ConvexBody& K, double t, std::uint64_t budget = 1 << 16,
                     std::uint64_t seed = 0);

struct LdpScanRow {
  TailRatio ratio;
  double window_sup = 0.0;  // sup rho over [t, w t]
};

struct LdpScanReport {
  double window = 2.0;
  double delta = 0.15;
  std::vector<LdpScanRow> rows;
  /// |window_sup + 1| strictly decreasing along the grid.
  bool gaps_strictly_decreasing = false;
  bool gaps_nonincreasing = false;
  double final_gap = 0.0;
  bool consistent = false;
  std::string verdict;

  std::string csv() const;
  nlohmann::json json() const;
};

/// Ratios on the grid, window suprema from the grid points in [t, w t] plus
/// four log-spaced interior points. The verdict is "consistent with
/// limsup = -1" when the last window supremum is within delta of -1 and the
/// gaps |sup + 1| never grow.
LdpScanReport ldp_scan(const NormMeasure& mu, const ConvexBody& K, const std::vector<double>& grid,
                       double window = 2.0, double delta = 0.15, std::uint64_t budget = 1 << 16,
                       std::uint64_t seed = 0);

struct InductionRow {
  double t = 0.0;
  std::vector<double> log_f;  // ln F_0 .. ln F_m
  std::vector<double> x;      // X_1 .. X_m (nan where flagged)
  double y = 0.0;             // ln F_0 / phi(t)
  double xy = 0.0;            // (Π X_i) Y
  bool flagged = false;       // some F_i(t) >= 1
  /// -ln F_{m-1} <= -ln(phi'(t)/m) - ln F_m, per m; true where phi'(t) = 0
  std::vector<bool> by_parts_holds;
};

struct InductionTable {
  int m_max = 1;
  std::vector<InductionRow> rows;
  std::string csv() const;
  nlohmann::json json() const;
};

/// F_m(t) = ∫_t^∞ (r - t)^m e^{-phi(r)} dr and the ratios of the induction.
InductionTable induction_diagnostics(const PhiFunction& phi, int m_max, const std::vector<double>& grid);

/// ln of 2 h_L(n) |L ∩ n^perp| ∫_{tR}^∞ e^{-phi(u)} (u - tR)^{n-1} du / Z:
/// the double pyramid over L ∩ n^perp with apexes ±p, h_L(n) = <p, n>,
/// swept through the dilates uL, lies outside the plank of tK.
Estimate plank_tail_lower_log(const NormMeasure& mu, const ConvexBody& K, double t);

enum class WitnessStatus { found, none_found, inconclusive };
std::string to_string(WitnessStatus s);

struct WitnessStep {
  double t;
  double k_tail_lower;    // certified lower bound of ln mu((tK)^c)
  double k_tail_upper;
  double ref_tail_lower;  // ln mu((t R ref)^c)
  double ref_tail_upper;
};

struct WitnessResult {
  WitnessStatus status = WitnessStatus::inconclusive;
  std::optional<double> t_star;
  bool inclusion = false;  // R ref inside K, so no witness can exist
  std::vector<WitnessStep> steps;
  nlohmann::json json() const;
};

/// Doubling search from t0 (and t_max itself) for a t with
/// mu(t R ref) > mu(tK), decided by non-overlapping certified intervals.
WitnessResult witness_search(const NormMeasure& mu, const ConvexBody& K, double R, const ConvexBody& reference,
                             double t0, double t_max, std::uint64_t budget = 1 << 16, std::uint64_t seed = 0);

struct ExceptionalSet {
  double measure = 0.0;
  std::size_t members = 0;
  std::size_t points = 0;
  std::optional<double> first;
  std::optional<double> last;
  nlohmann::json json() const;
};

/// |E ∩ [0, T]| with E = {t : ln ∫_t^∞ e^{-phi} < -alpha phi(t)}, by the
/// indicator on the grid 0, step, 2 step, ... (each member counts step).
ExceptionalSet exceptional_set_measure(const PhiFunction& phi, double alpha, double T, double step);

}  // namespace lcm
