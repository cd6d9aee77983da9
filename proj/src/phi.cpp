#include "lcm/phi.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <cstdio>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include <boost/multiprecision/cpp_bin_float.hpp>

#include "lcm/estimate.hpp"

namespace lcm {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
using Big = boost::multiprecision::cpp_bin_float_100;

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

double gaussian_constant(int n) { return 0.5 * n * std::log(2.0 * std::numbers::pi); }

// Piece index and local coordinate for t > 0; integer t maps to the end of
// the piece on its left.
std::pair<std::size_t, double> locate(const PiecewiseQuadraticPhi& q, double t) {
  const std::size_t last = q.pieces.size() - 1;
  const double c = std::ceil(t) - 1.0;
  const std::size_t k = c >= static_cast<double>(last) ? last : static_cast<std::size_t>(c);
  return {k, t - static_cast<double>(k)};
}

double piece_value(const QuadraticPiece& p, double s) {
  if (s == 0.0) return p.a;
  return 0.5 * p.alpha * s * s + p.b * s + p.a;
}

PhiValue base_eval(const PhiFunction::Variant& shape, double t) {
  return std::visit(
      Overloaded{
          [&](const PowerPhi& f) -> PhiValue {
            const double x = t / f.scale;
            if (f.p == 1.0) return {x + f.offset, 1.0 / f.scale};
            return {std::pow(x, f.p) / f.p + f.offset, std::pow(x, f.p - 1.0) / f.scale};
          },
          [&](const LinearPhi& f) -> PhiValue { return {f.slope * t + f.offset, f.slope}; },
          [&](const GaussianPhi& f) -> PhiValue { return {0.5 * t * t + gaussian_constant(f.n), t}; },
          [&](const PiecewiseQuadraticPhi& q) -> PhiValue {
            if (t == 0.0) return {q.pieces[0].a, q.pieces[0].b};
            const auto [k, s] = locate(q, t);
            const auto& p = q.pieces[k];
            // exact knot: phi(k+1) is a_{k+1} when that piece exists
            const double value = (s == 1.0 && k + 1 < q.pieces.size()) ? q.pieces[k + 1].a : piece_value(p, s);
            const double slope = p.alpha * s + p.b;
            return {value, slope};
          },
      },
      shape);
}

double base_inverse(const PhiFunction::Variant& shape, double u) {
  return std::visit(
      Overloaded{
          [&](const PowerPhi& f) { return f.scale * std::pow(f.p * (u - f.offset), 1.0 / f.p); },
          [&](const LinearPhi& f) { return (u - f.offset) / f.slope; },
          [&](const GaussianPhi& f) { return std::sqrt(2.0 * (u - gaussian_constant(f.n))); },
          [&](const PiecewiseQuadraticPhi& q) {
            std::size_t k = 0;
            while (k + 1 < q.pieces.size() && q.pieces[k + 1].a < u) ++k;
            const auto& p = q.pieces[k];
            const double du = u - p.a;
            double s = 2.0 * du / (p.b + std::sqrt(p.b * p.b + 2.0 * p.alpha * du));
            if (!std::isfinite(s)) s = 0.0;
            if (k + 1 < q.pieces.size()) s = std::min(s, 1.0);
            return static_cast<double>(k) + std::max(0.0, s);
          },
      },
      shape);
}

Tower big_to_tower(const Big& x) { return Tower::from_double(static_cast<double>(x)); }

}  // namespace

// ---------------------------------------------------------------------------

PhiFunction PhiFunction::power(double p, double scale, double offset) {
  if (!(p >= 1.0) || !std::isfinite(p)) throw std::invalid_argument("power phi: p must be >= 1");
  if (!(scale > 0.0) || !std::isfinite(scale)) throw std::invalid_argument("power phi: scale must be positive");
  if (!(offset >= 0.0) || !std::isfinite(offset)) throw std::invalid_argument("power phi: offset must be >= 0");
  return {PowerPhi{p, scale, offset}, 0.0};
}

PhiFunction PhiFunction::linear(double slope, double offset) {
  if (!(slope > 0.0) || !std::isfinite(slope)) throw std::invalid_argument("linear phi: slope must be positive");
  if (!(offset >= 0.0) || !std::isfinite(offset)) throw std::invalid_argument("linear phi: offset must be >= 0");
  return {LinearPhi{slope, offset}, 0.0};
}

PhiFunction PhiFunction::gaussian(int n) {
  if (n < 1) throw std::invalid_argument("gaussian phi: dimension must be >= 1");
  return {GaussianPhi{n}, 0.0};
}

PhiFunction PhiFunction::piecewise(std::vector<QuadraticPiece> pieces) {
  if (pieces.empty()) throw std::invalid_argument("piecewise phi: no pieces");
  if (!std::isfinite(pieces[0].a) || !std::isfinite(pieces[0].b))
    throw std::invalid_argument("piecewise phi: first piece must be finite");
  return {PiecewiseQuadraticPhi{std::move(pieces)}, 0.0};
}

PhiFunction PhiFunction::with_plateau(double t0) const {
  if (!(t0 >= 0.0) || !std::isfinite(t0)) throw std::invalid_argument("phi plateau must be finite and >= 0");
  PhiFunction out = *this;
  out.plateau = t0;
  return out;
}

std::string PhiFunction::describe() const {
  std::ostringstream os;
  std::visit(Overloaded{
                 [&](const PowerPhi& f) { os << "power(p=" << f.p << ", scale=" << f.scale << ", offset=" << f.offset << ")"; },
                 [&](const LinearPhi& f) { os << "linear(slope=" << f.slope << ", offset=" << f.offset << ")"; },
                 [&](const GaussianPhi& f) { os << "gaussian(n=" << f.n << ")"; },
                 [&](const PiecewiseQuadraticPhi& q) { os << "piecewise_quadratic(pieces=" << q.pieces.size() << ")"; },
             },
             shape);
  if (plateau > 0.0) os << " with plateau " << plateau;
  return os.str();
}

PhiValue phi_eval(const PhiFunction& phi, double t) {
  if (!(t >= 0.0)) throw std::domain_error("phi_eval: t must be >= 0");
  if (t <= phi.plateau) {
    const PhiValue at0 = base_eval(phi.shape, 0.0);
    return {at0.value, phi.plateau > 0.0 ? 0.0 : at0.left_derivative};
  }
  return base_eval(phi.shape, t - phi.plateau);
}

double phi_inverse(const PhiFunction& phi, double u) {
  const double floor = base_eval(phi.shape, 0.0).value;
  if (std::isnan(u)) throw std::domain_error("phi_inverse: nan level");
  if (u < floor) return 0.0;
  if (u == floor) return phi.plateau;
  if (std::isinf(u)) return kInf;
  return phi.plateau + base_inverse(phi.shape, u);
}

std::vector<double> phi_breakpoints(const PhiFunction& phi) {
  std::vector<double> out;
  if (phi.plateau > 0.0) out.push_back(phi.plateau);
  if (const auto* q = std::get_if<PiecewiseQuadraticPhi>(&phi.shape))
    for (std::size_t k = 1; k < q->pieces.size(); ++k) out.push_back(phi.plateau + static_cast<double>(k));
  return out;
}

std::optional<LinearPhi> as_linear(const PhiFunction& phi) {
  if (const auto* l = std::get_if<LinearPhi>(&phi.shape)) return *l;
  if (const auto* p = std::get_if<PowerPhi>(&phi.shape); p && p->p == 1.0) return LinearPhi{1.0 / p->scale, p->offset};
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Pathological construction

PathologicalPhi build_pathological_phi(int k_max) {
  if (k_max < 1) throw std::invalid_argument("pathological phi: k_max must be >= 1");
  const Big ln2 = boost::multiprecision::log(Big(2));
  const Big half(0.5);
  PathologicalPhi out;
  std::vector<QuadraticPiece> pieces;

  // Exact phase: a, b integers, alpha = 2^e.
  Big a(1), b(1);
  int k = 0;
  bool exact = true;
  Tower ta, tb;
  for (; k <= k_max && exact; ++k) {
    auto x_of = [&](const Big& e) { return b * boost::multiprecision::exp(-(e / 2) * ln2); };
    auto g = [&](const Big& e) {
      const Big x = x_of(e);
      return (e / 2) * ln2 + boost::multiprecision::log1p(x) - (half + x + a);
    };
    // Smallest e >= 0 with sqrt(2^e) + b > exp(1/2 + b/sqrt(2^e) + a).
    Big e(0);
    if (!(g(e) > 0)) {
      Big hi(1);
      while (!(g(hi) > 0)) hi *= 2;
      Big lo = hi / 2;  // g(lo) <= 0 unless hi == 1
      if (hi == 1) lo = 0;
      while (hi - lo > 1) {
        const Big mid = boost::multiprecision::floor((lo + hi) / 2);
        if (g(mid) > 0)
          hi = mid;
        else
          lo = mid;
      }
      e = hi;
    }
    const Big x = x_of(e);
    KnotReport r;
    r.k = k;
    r.exact = true;
    r.a = big_to_tower(a);
    r.b = big_to_tower(b);
    r.log_alpha = big_to_tower(e * ln2);
    r.log2_alpha = static_cast<double>(e);
    r.log2_alpha_text = e.str(0, std::ios_base::fixed);
    r.log2_alpha_text = r.log2_alpha_text.substr(0, r.log2_alpha_text.find('.'));
    r.log_sqrt_alpha = big_to_tower(e * ln2 / 2);
    r.t_k = k + static_cast<double>(boost::multiprecision::exp(-(e / 2) * ln2));
    r.phi_t = big_to_tower(half + x + a);
    r.log_dphi_t = big_to_tower((e / 2) * ln2 + boost::multiprecision::log1p(x));
    r.margin = static_cast<double>(g(e));
    out.knots.push_back(r);
    const double e_d = static_cast<double>(e);
    pieces.push_back({static_cast<double>(a), static_cast<double>(b), e_d < 1024 ? std::ldexp(1.0, static_cast<int>(e_d)) : kInf});

    if (e <= 300) {
      const Big alpha = boost::multiprecision::ldexp(Big(1), static_cast<int>(e));
      a = alpha / 2 + b + a;
      b = alpha + b;
    } else {
      // 2^e + b no longer fits the mantissa: continue with towers.
      const Tower alpha = Tower::make(1, e_d * std::log(2.0));
      ta = alpha.scale(0.5).add(big_to_tower(b)).add(big_to_tower(a));
      tb = alpha.add(big_to_tower(b));
      exact = false;
    }
  }

  // Symbolic phase: ln sqrt(alpha) = a + 1/2 + slack.
  for (; k <= k_max; ++k) {
    const Tower log_sqrt_alpha = ta.add(0.5 + kPathologicalSlack);
    const Tower sqrt_alpha = log_sqrt_alpha.exp();
    const double x = std::exp(log_ratio(tb, sqrt_alpha));
    KnotReport r;
    r.k = k;
    r.exact = false;
    r.a = ta;
    r.b = tb;
    r.log_alpha = log_sqrt_alpha.scale(2.0);
    r.log2_alpha = std::numeric_limits<double>::quiet_NaN();
    r.log_sqrt_alpha = log_sqrt_alpha;
    r.t_k = k + std::exp(-log_sqrt_alpha.to_double());
    r.phi_t = ta.add(0.5 + x);
    r.log_dphi_t = log_sqrt_alpha.add(std::log1p(x));
    r.margin = kPathologicalSlack + std::log1p(x) - x;
    out.knots.push_back(r);
    pieces.push_back({ta.to_double(), tb.to_double(), r.log_alpha.exp().to_double()});

    const Tower alpha = r.log_alpha.exp();
    const Tower next_a = alpha.scale(0.5).add(tb).add(ta);
    tb = alpha.add(tb);
    ta = next_a;
  }
  out.phi = PhiFunction::piecewise(std::move(pieces));
  return out;
}

// ---------------------------------------------------------------------------

PhiDiagnostics validate_phi(const PhiFunction& phi, const std::vector<double>& grid) {
  PhiDiagnostics d;
  auto fail = [&](std::size_t i, const std::string& what) {
    d.pass = false;
    if (!d.first_violation) {
      d.first_violation = i;
      d.message = what + " at grid index " + std::to_string(i);
    }
  };
  const auto* q = std::get_if<PiecewiseQuadraticPhi>(&phi.shape);
  if (q) {
    for (std::size_t k = 0; k < q->pieces.size(); ++k) {
      const auto& p = q->pieces[k];
      std::optional<std::size_t> bad;
      if (!(p.alpha >= 0.0) || !(p.b >= 0.0)) {
        bad = k;
        if (!(p.alpha >= 0.0)) d.convex = false;
        if (!(p.b >= 0.0)) d.nondecreasing = false;
      }
      if (!bad && k + 1 < q->pieces.size() && std::isfinite(p.alpha) && std::isfinite(q->pieces[k + 1].a)) {
        // the next piece must start where this one ends
        const auto& n = q->pieces[k + 1];
        const double end_value = 0.5 * p.alpha + p.b + p.a;
        const double end_slope = p.alpha + p.b;
        const bool jump = std::abs(end_value - n.a) > 1e-12 * std::max(1.0, std::abs(n.a));
        const bool kink = std::abs(end_slope - n.b) > 1e-12 * std::max(1.0, std::abs(n.b));
        if (jump || kink) bad = k + 1;
        if (kink && n.b < end_slope) d.convex = false;
      }
      if (bad && !d.violation_piece) {
        d.violation_piece = static_cast<int>(*bad);
        d.pass = false;
        if (d.message.empty()) d.message = "piece " + std::to_string(*bad) + " breaks convexity or continuity";
      }
    }
  }
  // inf >= inf counts as nondecreasing: saturated tails of huge profiles.
  auto ge = [](double x, double prev) {
    return x >= prev || (std::isfinite(prev) && x >= prev - 1e-12 * std::abs(prev));
  };
  double prev_v = -kInf, prev_d = -kInf, prev_t = -kInf;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double t = grid[i];
    if (!(t >= 0.0) || t < prev_t) {
      fail(i, "grid not sorted and nonnegative");
      break;
    }
    const PhiValue v = phi_eval(phi, t);
    if (std::isinf(v.value)) ++d.saturated;
    if (!(v.value >= 0.0)) {
      d.nonnegative = false;
      fail(i, "negative value");
    }
    if (!ge(v.value, prev_v)) {
      d.nondecreasing = false;
      fail(i, "decreasing value");
    }
    if (!(v.left_derivative >= 0.0)) {
      d.nondecreasing = false;
      fail(i, "negative derivative");
    }
    if (!ge(v.left_derivative, prev_d)) {
      d.convex = false;
      fail(i, "decreasing derivative");
      if (q && !d.violation_piece) d.violation_piece = static_cast<int>(locate(*q, std::max(t - phi.plateau, 1e-300)).first);
    }
    prev_v = v.value;
    prev_d = v.left_derivative;
    prev_t = t;
  }
  return d;
}

namespace {

std::string alpha_text(const KnotReport& r) {
  if (!r.exact) return r.log_alpha.exp().str();
  if (r.log2_alpha <= 1023.0) {
    char buf[400];
    std::snprintf(buf, sizeof buf, "%.0f", std::ldexp(1.0, static_cast<int>(r.log2_alpha)));
    return buf;
  }
  return "2^" + r.log2_alpha_text;
}

}  // namespace

nlohmann::json to_json(const KnotReport& r) {
  return {{"k", r.k},
          {"mode", r.exact ? "exact" : "symbolic"},
          {"a", r.a.str()},
          {"b", r.b.str()},
          {"ln_alpha", r.log_alpha.str()},
          {"log2_alpha", r.exact ? nlohmann::json(r.log2_alpha_text) : nlohmann::json(nullptr)},
          {"alpha", alpha_text(r)},
          {"t_k", json_number(r.t_k)},
          {"ln_t_k_offset", "-" + r.log_sqrt_alpha.str()},
          {"phi_t_k", r.phi_t.str()},
          {"ln_dphi_t_k", r.log_dphi_t.str()},
          {"margin", json_number(r.margin)},
          {"violates_bound", r.margin > 0.0}};
}

nlohmann::json to_json(const PhiDiagnostics& d) {
  nlohmann::json j{{"pass", d.pass},
                   {"nonnegative", d.nonnegative},
                   {"nondecreasing", d.nondecreasing},
                   {"convex", d.convex},
                   {"saturated_points", d.saturated},
                   {"message", d.message}};
  j["first_violation"] = d.first_violation ? nlohmann::json(*d.first_violation) : nlohmann::json(nullptr);
  j["violation_piece"] = d.violation_piece ? nlohmann::json(*d.violation_piece) : nlohmann::json(nullptr);
  return j;
}

}  // namespace lcm
