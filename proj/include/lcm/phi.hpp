#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "lcm/tower.hpp"

namespace lcm {

/// (t/scale)^p / p + offset
struct PowerPhi {
  double p = 2.0;
  double scale = 1.0;
  double offset = 0.0;
};

/// slope * t + offset
struct LinearPhi {
  double slope = 1.0;
  double offset = 0.0;
};

/// t^2/2 + (n/2) ln(2 pi): the standard Gaussian in R^n has Z = 1.
struct GaussianPhi {
  int n = 1;
};

/// alpha (t-k)^2/2 + b (t-k) + a on [k, k+1]; the last piece continues to infinity.
/// Entries above the double range are stored as +inf.
struct QuadraticPiece {
  double a;
  double b;
  double alpha;
};

struct PiecewiseQuadraticPhi {
  std::vector<QuadraticPiece> pieces;
};

/// Increasing convex profile. With plateau t0 > 0 the profile is the base
/// variant shifted right: phi(t) = base(max(0, t - t0)).
struct PhiFunction {
  using Variant = std::variant<PowerPhi, LinearPhi, GaussianPhi, PiecewiseQuadraticPhi>;
  Variant shape;
  double plateau = 0.0;

  static PhiFunction power(double p, double scale = 1.0, double offset = 0.0);
  static PhiFunction linear(double slope, double offset = 0.0);
  static PhiFunction gaussian(int n);
  /// Hand-built pieces, not checked beyond finiteness of the first piece.
  static PhiFunction piecewise(std::vector<QuadraticPiece> pieces);
  PhiFunction with_plateau(double t0) const;

  std::string describe() const;
};

struct PhiValue {
  double value;
  double left_derivative;
};

PhiValue phi_eval(const PhiFunction& phi, double t);
inline double phi_value(const PhiFunction& phi, double t) { return phi_eval(phi, t).value; }

/// sup{v >= 0 : phi(v) < u}, 0 for u < phi(0) and the plateau t0 at u = phi(0).
double phi_inverse(const PhiFunction& phi, double u);

/// Points where the profile is not smooth (plateau end, knots).
std::vector<double> phi_breakpoints(const PhiFunction& phi);

/// True when phi is linear past the plateau: tails have closed forms.
std::optional<LinearPhi> as_linear(const PhiFunction& phi);

struct KnotReport {
  int k;
  bool exact;          // alpha_k is the doubling-rule power of two
  Tower a;             // phi(k)
  Tower b;             // phi'(k)
  Tower log_alpha;     // ln alpha_k
  double log2_alpha;   // exponent of two when exact, else nan
  std::string log2_alpha_text;  // the same exponent, all digits
  Tower log_sqrt_alpha;
  double t_k;          // k + alpha_k^(-1/2) in double precision
  Tower phi_t;         // phi(t_k)
  Tower log_dphi_t;    // ln phi'(t_k)
  double margin;       // ln phi'(t_k) - phi(t_k)
};

struct PathologicalPhi {
  PhiFunction phi;
  std::vector<KnotReport> knots;
};

/// Convex piecewise quadratic with phi(0) = phi'(0) = 1 whose knots violate
/// phi'(t) <= e^phi(t). Pieces k = 0..k_max.
PathologicalPhi build_pathological_phi(int k_max);

/// ln sqrt(alpha) - (a + 1/2) used once exact arithmetic runs out.
inline constexpr double kPathologicalSlack = 0.17328679513998632;  // ln(2)/4

struct PhiDiagnostics {
  bool pass = true;
  bool nonnegative = true;
  bool nondecreasing = true;
  bool convex = true;
  std::optional<std::size_t> first_violation;   // grid index
  std::optional<int> violation_piece;           // piecewise profiles
  std::string message;
  std::size_t saturated = 0;                    // grid points where phi is +inf
};

PhiDiagnostics validate_phi(const PhiFunction& phi, const std::vector<double>& grid);

nlohmann::json to_json(const KnotReport& knot);
nlohmann::json to_json(const PhiDiagnostics& d);

}  // namespace lcm
