#include "lcm/estimate.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>

namespace lcm {

std::string to_string(Method method) {
  switch (method) {
    case Method::exact: return "exact";
    case Method::quadrature: return "quadrature";
    case Method::monte_carlo: return "monte-carlo";
  }
  return "unknown";
}

Estimate Estimate::exact(double log_value) {
  return Estimate{log_value, 0.0, Method::exact, 0, false};
}

Estimate Estimate::quadrature(double log_value, double abs_log_error, std::uint64_t panels) {
  return Estimate{log_value, abs_log_error, Method::quadrature, panels, false};
}

Estimate Estimate::monte_carlo(double mean, double std_error, std::uint64_t samples) {
  if (!(mean > 0.0)) {
    return Estimate{-std::numeric_limits<double>::infinity(),
                    std::numeric_limits<double>::infinity(), Method::monte_carlo, samples, true};
  }
  return Estimate{std::log(mean), std_error / mean, Method::monte_carlo, samples, false};
}

Estimate Estimate::monte_carlo_log(double log_mean, double relative_std_error,
                                   std::uint64_t samples) {
  if (log_mean == -std::numeric_limits<double>::infinity() || std::isnan(log_mean)) {
    return Estimate{-std::numeric_limits<double>::infinity(),
                    std::numeric_limits<double>::infinity(), Method::monte_carlo, samples, true};
  }
  return Estimate{log_mean, relative_std_error, Method::monte_carlo, samples, false};
}

double Estimate::value() const { return std::exp(log_value); }

double Estimate::lower_log(double sigmas) const {
  if (degenerate) return -std::numeric_limits<double>::infinity();
  if (method != Method::monte_carlo) return log_value - abs_log_error;
  const double shrink = 1.0 - sigmas * abs_log_error;
  if (shrink <= 0.0) return -std::numeric_limits<double>::infinity();
  return log_value + std::log(shrink);
}

double Estimate::upper_log(double sigmas) const {
  if (degenerate) return std::numeric_limits<double>::infinity();
  if (method != Method::monte_carlo) return log_value + abs_log_error;
  return log_value + std::log1p(sigmas * abs_log_error);
}

nlohmann::json json_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  return x;
}

double number_from_json(const nlohmann::json& j) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
  }
  throw std::invalid_argument("expected a number");
}

nlohmann::json to_json(const Estimate& e) {
  return nlohmann::json{{"log_value", json_number(e.log_value)},
                        {"abs_log_error", json_number(e.abs_log_error)},
                        {"method", to_string(e.method)},
                        {"count", e.count},
                        {"degenerate", e.degenerate}};
}

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace lcm
