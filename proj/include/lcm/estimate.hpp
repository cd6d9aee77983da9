#pragma once

#include <cstdint>
#include <string>

#include <json.hpp>

namespace lcm {

enum class Method { exact, quadrature, monte_carlo };

std::string to_string(Method method);

/// A positive quantity carried as its natural logarithm.
///
/// For quadrature and exact values `abs_log_error` is a deterministic bound on
/// |ln(true) - log_value|. For Monte Carlo it is the one-sigma relative
/// standard error (delta method), and intervals widen with the sigma count.
struct Estimate {
  double log_value = 0.0;
  double abs_log_error = 0.0;
  Method method = Method::exact;
  std::uint64_t count = 0;  // samples or panels
  bool degenerate = false;

  static Estimate exact(double log_value);
  static Estimate quadrature(double log_value, double abs_log_error, std::uint64_t panels);
  /// From a sample mean and its standard error. Zero mean gives a degenerate estimate.
  static Estimate monte_carlo(double mean, double std_error, std::uint64_t samples);
  static Estimate monte_carlo_log(double log_mean, double relative_std_error, std::uint64_t samples);

  double value() const;
  bool deterministic() const { return method != Method::monte_carlo; }
  /// Lower end of the interval at `sigmas` standard errors (MC) or the bound.
  double lower_log(double sigmas = 3.0) const;
  double upper_log(double sigmas = 3.0) const;
};

/// Sigma count used wherever a Monte Carlo interval backs a verdict.
inline constexpr double kCertifySigmas = 5.0;

nlohmann::json to_json(const Estimate& e);

/// Number or, for non-finite doubles, one of the strings "inf", "-inf", "nan".
nlohmann::json json_number(double x);
double number_from_json(const nlohmann::json& j);

/// "%.17g" rendering used for every CSV cell.
std::string format_double(double x);

}  // namespace lcm
