#include "lcm/sections.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "lcm/integrate.hpp"
#include "lcm/parallel.hpp"
#include "lcm/planar.hpp"

namespace lcm {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kTwoPi = 2.0 * std::numbers::pi;

struct Line {
  double a0, a1;  // unit normal in plane coordinates
  double b;
};

// rK ∩ plane as unit half-planes, or nullopt when K has no facets.
std::optional<std::vector<Line>> plane_section(const ConvexBody& K, double r, const std::vector<Vec>& basis) {
  auto hs = halfspaces(K);
  if (!hs) return std::nullopt;
  std::vector<Line> out;
  for (const auto& h : *hs) {
    const double a0 = dot(h.normal, basis[0]), a1 = dot(h.normal, basis[1]);
    const double len = std::hypot(a0, a1);
    if (len < 1e-14) continue;
    out.push_back({a0 / len, a1 / len, r * h.offset / len});
  }
  return out;
}

Polygon lines_polygon(const std::vector<Line>& lines, double scale = 1.0) {
  std::vector<HalfSpace> hs;
  for (const auto& l : lines) hs.push_back({{l.a0, l.a1}, scale * l.b});
  return hpolygon(hs);
}

std::optional<double> euclidean_radius(const ConvexBody& body) {
  double factor = 1.0;
  const ConvexBody* cur = &body;
  while (const auto* d = std::get_if<Dilate>(&cur->shape())) {
    factor *= d->factor;
    cur = d->inner.get();
  }
  if (const auto* b = std::get_if<EuclideanBall>(&cur->shape())) return factor * b->radius;
  if (const auto* l = std::get_if<LpBall>(&cur->shape()); l && l->p == 2.0) {
    for (double a : l->semi_axes)
      if (a != l->semi_axes[0]) return std::nullopt;
    return factor * l->semi_axes[0];
  }
  return std::nullopt;
}

// Angular measure of {theta : s theta in P}.
double polygon_angle_on_circle(const std::vector<Line>& lines, double s) {
  std::vector<std::pair<double, double>> arcs;
  for (const auto& l : lines) {
    if (s <= l.b) continue;
    const double beta = std::acos(l.b / s);
    double start = std::atan2(l.a1, l.a0) - beta;
    start = std::fmod(start, kTwoPi);
    if (start < 0) start += kTwoPi;
    const double end = start + 2.0 * beta;
    if (end > kTwoPi) {
      arcs.push_back({start, kTwoPi});
      arcs.push_back({0.0, end - kTwoPi});
    } else {
      arcs.push_back({start, end});
    }
  }
  if (arcs.empty()) return kTwoPi;
  std::sort(arcs.begin(), arcs.end());
  double covered = 0.0, cur_s = arcs[0].first, cur_e = arcs[0].second;
  for (std::size_t i = 1; i < arcs.size(); ++i) {
    if (arcs[i].first <= cur_e) {
      cur_e = std::max(cur_e, arcs[i].second);
    } else {
      covered += cur_e - cur_s;
      cur_s = arcs[i].first;
      cur_e = arcs[i].second;
    }
  }
  covered += cur_e - cur_s;
  return std::max(0.0, kTwoPi - covered);
}

Estimate sum_pieces(const std::vector<Estimate>& parts) {
  double lv = -kInf, err = 0.0;
  std::uint64_t count = 0;
  for (const auto& p : parts) lv = log_add(lv, p.log_value);
  for (const auto& p : parts) {
    if (p.log_value > -kInf) err += p.abs_log_error * std::exp(p.log_value - lv);
    count += p.count;
  }
  return Estimate::quadrature(lv, err, count);
}

Estimate polar_route(const NormMeasure& mu, const std::vector<Line>& lines, double radius) {
  const Polygon poly = lines_polygon(lines);
  double s_max = 0.0;
  for (const auto& v : poly) s_max = std::max(s_max, std::hypot(v[0], v[1]));
  std::vector<double> cuts{0.0, s_max};
  for (const auto& l : lines)
    if (l.b < s_max) cuts.push_back(l.b);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  const PhiFunction& phi = mu.phi();
  auto log_f = [&](double s) {
    if (s <= 0.0) return -kInf;
    const double ang = polygon_angle_on_circle(lines, s);
    if (ang <= 0.0) return -kInf;
    return std::log(ang) + std::log(s) - phi_value(phi, s / radius);
  };
  std::vector<Estimate> parts;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) parts.push_back(log_integral(log_f, cuts[i], cuts[i + 1], 1e-11));
  Estimate out = sum_pieces(parts);
  out.log_value -= mu.log_normalizer().log_value;
  out.abs_log_error += mu.log_normalizer().abs_log_error;
  return out;
}

Estimate layered_polygon_route(const NormMeasure& mu, const std::vector<Line>& p_lines,
                               const std::vector<Line>& q_lines) {
  const Polygon P = lines_polygon(p_lines);
  auto q_norm = [&](double x, double y) {
    double m = 0.0;
    for (const auto& l : q_lines) m = std::max(m, std::abs(l.a0 * x + l.a1 * y) / l.b);
    return m;
  };
  double s_sat = 0.0;
  for (const auto& v : P) s_sat = std::max(s_sat, q_norm(v[0], v[1]));
  const PhiFunction& phi = mu.phi();
  const double u0 = phi_value(phi, 0.0), u_sat = phi_value(phi, s_sat);
  const double area_p = polygon_area(P);
  auto log_f = [&](double u) {
    const double s = phi_inverse(phi, u);
    if (s <= 0.0) return -kInf;
    std::vector<HalfSpace> hs;
    for (const auto& l : p_lines) hs.push_back({{l.a0, l.a1}, l.b});
    for (const auto& l : q_lines) hs.push_back({{l.a0, l.a1}, s * l.b});
    const double a = polygon_area(hpolygon(hs));
    return a > 0.0 ? -u + std::log(a) : -kInf;
  };
  Estimate q = u_sat > u0 ? log_integral(log_f, u0, u_sat, 1e-11) : Estimate::exact(-kInf);
  const double lv = log_add(q.log_value, -u_sat + std::log(area_p));
  const double err = q.log_value == -kInf ? 0.0 : q.abs_log_error * std::exp(q.log_value - lv);
  return Estimate::quadrature(lv - mu.log_normalizer().log_value, err + mu.log_normalizer().abs_log_error, q.count);
}

Estimate plane_monte_carlo(const NormMeasure& mu, const ConvexBody& K, double r, const std::vector<Vec>& basis,
                           std::uint64_t budget, std::uint64_t seed) {
  const int n = mu.dim();
  const double H = r * farthest_point(K).first;
  const LogMoments m = mc_log_moments(budget, seed, [&](CounterRng& rng) {
    thread_local std::vector<double> x;
    x.assign(n, 0.0);
    for (const auto& e : basis) {
      const double s = (2.0 * rng.uniform() - 1.0) * H;
      for (int d = 0; d < n; ++d) x[d] += s * e[d];
    }
    if (norm(K, x) > r) return -kInf;
    return log_density(mu, x);
  });
  Estimate e = m.estimate();
  if (!e.degenerate) e.log_value += (n - 1) * std::log(2.0 * H);
  return e;
}

Vec unit(std::span<const double> xi) {
  const double len = euclidean_norm(xi);
  if (!(len > 0.0)) throw std::invalid_argument("section: zero direction");
  Vec out(xi.begin(), xi.end());
  for (auto& v : out) v /= len;
  return out;
}

}  // namespace

Estimate section_measure(const NormMeasure& mu, const ConvexBody& K, std::span<const double> xi_in, double r,
                         std::uint64_t budget, std::uint64_t seed) {
  const int n = mu.dim();
  if (n < 2) throw std::invalid_argument("section_measure: dimension must be >= 2");
  if (K.dim() != n || static_cast<int>(xi_in.size()) != n) throw std::invalid_argument("section_measure: dimension mismatch");
  if (!(r >= 0.0)) throw std::invalid_argument("section_measure: r must be >= 0");
  const Vec xi = unit(xi_in);
  if (r == 0.0) return Estimate::exact(-kInf);
  const ConvexBody& L = mu.body();

  if (n == 2) {
    const Vec d{-xi[1], xi[0]};
    const double reach = std::isinf(r) ? kInf : r / norm(K, d);
    if (mu.is_uniform()) {
      const double len = 2.0 * std::min(reach, 1.0 / norm(L, d));
      return Estimate::exact(std::log(len) - std::log(volume(L)));
    }
    const double nl = norm(L, d);
    const Estimate inner = log_interval_integral(mu.phi(), 0, 0.0, reach * nl, 0.0);
    return Estimate::quadrature(std::log(2.0 / nl) + inner.log_value - mu.log_normalizer().log_value,
                                inner.abs_log_error + mu.log_normalizer().abs_log_error, inner.count);
  }

  if (!mu.is_uniform()) {
    if (auto a = dilate_ratio(K, L)) {
      const double sec = central_section_volume(L, xi);
      const Estimate inner = log_interval_integral(mu.phi(), n - 2, 0.0, r * *a, 0.0);
      return Estimate::quadrature(std::log((n - 1) * sec) + inner.log_value - mu.log_normalizer().log_value,
                                  inner.abs_log_error + mu.log_normalizer().abs_log_error, inner.count);
    }
  }
  if (std::isinf(r)) throw std::invalid_argument("section_measure: r = inf needs K to be a dilate of L");
  const auto basis = orthonormal_complement(xi);
  if (n == 3 && !mu.is_uniform()) {
    if (auto p = plane_section(K, r, basis)) {
      if (auto radius = euclidean_radius(L)) return polar_route(mu, *p, *radius);
      if (auto q = plane_section(L, 1.0, basis)) return layered_polygon_route(mu, *p, *q);
    }
  }
  return plane_monte_carlo(mu, K, r, basis, budget, seed);
}

std::string to_string(Comparison c) {
  switch (c) {
    case Comparison::strict: return "strict";
    case Comparison::equal: return "equal";
    case Comparison::violation: return "violation";
    case Comparison::inconclusive: return "inconclusive";
  }
  return "unknown";
}

Comparison compare_le(const Estimate& a, const Estimate& b, double sigmas) {
  if (a.degenerate || b.degenerate) return Comparison::inconclusive;
  const double slack = 1e-12;
  if (a.upper_log(sigmas) + slack < b.lower_log(sigmas)) return Comparison::strict;
  if (a.lower_log(sigmas) > b.upper_log(sigmas) + slack) return Comparison::violation;
  return a.deterministic() && b.deterministic() ? Comparison::equal : Comparison::inconclusive;
}

std::string to_string(HypothesisVerdict v) {
  switch (v) {
    case HypothesisVerdict::holds: return "holds";
    case HypothesisVerdict::fails: return "fails";
    case HypothesisVerdict::inconclusive: return "inconclusive";
  }
  return "unknown";
}

DominanceReport dominance_check(const NormMeasure& mu, const ConvexBody& K, const ConvexBody& L,
                                const std::vector<double>& r_grid, const std::vector<Vec>& xi_net,
                                std::uint64_t budget, std::uint64_t seed) {
  if (r_grid.empty() || xi_net.empty()) throw std::invalid_argument("dominance_check: empty grid");
  if (K.dim() != mu.dim() || L.dim() != mu.dim()) throw std::invalid_argument("dominance_check: dimension mismatch");
  DominanceReport rep;
  rep.r_grid = r_grid;
  rep.xi_net = xi_net;
  const std::size_t total = r_grid.size() * xi_net.size();
  rep.pairs.resize(total);
  const int n = mu.dim();
  parallel_for(total, [&](std::size_t idx) {
    const std::size_t ri = idx / xi_net.size(), xj = idx % xi_net.size();
    const double r = r_grid[ri];
    const Vec xi = unit(xi_net[xj]);
    const std::uint64_t s = derive_seed(seed, idx);
    SectionPair pair{r, xj, xi, section_measure(mu, K, xi, r, budget, s), section_measure(mu, L, xi, r, budget, s),
                     Comparison::inconclusive};
    if (pair.k_section.deterministic() && pair.l_section.deterministic()) {
      pair.outcome = compare_le(pair.k_section, pair.l_section);
    } else {
      // Paired estimate of the difference on common points.
      const auto basis = orthonormal_complement(xi);
      const double H = r * std::max(farthest_point(K).first, farthest_point(L).first);
      const double log_cube = (n - 1) * std::log(2.0 * H);
      const Moments m = mc_moments(budget, derive_seed(s, 1), [&](CounterRng& rng) {
        thread_local std::vector<double> x;
        x.assign(n, 0.0);
        for (const auto& e : basis) {
          const double c = (2.0 * rng.uniform() - 1.0) * H;
          for (int d = 0; d < n; ++d) x[d] += c * e[d];
        }
        const double ik = norm(K, x) <= r ? 1.0 : 0.0;
        const double il = norm(L, x) <= r ? 1.0 : 0.0;
        if (ik == il) return 0.0;
        return (ik - il) * std::exp(log_density(mu, x) + log_cube);
      });
      pair.paired_difference = m.mean();
      pair.paired_std_error = m.std_error();
      if (m.s2 == 0.0)
        pair.outcome = Comparison::equal;
      else if (m.mean() + kCertifySigmas * m.std_error() < 0.0)
        pair.outcome = Comparison::strict;
      else if (m.mean() - kCertifySigmas * m.std_error() > 0.0)
        pair.outcome = Comparison::violation;
      else
        pair.outcome = Comparison::inconclusive;
    }
    rep.pairs[idx] = std::move(pair);
  });
  bool any_inconclusive = false;
  for (std::size_t i = 0; i < rep.pairs.size(); ++i) {
    if (rep.pairs[i].outcome == Comparison::violation && !rep.failing_pair) rep.failing_pair = i;
    if (rep.pairs[i].outcome == Comparison::inconclusive) any_inconclusive = true;
  }
  rep.hypothesis = rep.failing_pair ? HypothesisVerdict::fails
                                    : (any_inconclusive ? HypothesisVerdict::inconclusive : HypothesisVerdict::holds);
  return rep;
}

DominanceReport bp_experiment(const NormMeasure& mu, const ConvexBody& K, const ConvexBody& L,
                              const std::vector<double>& r_grid, const std::vector<Vec>& xi_net,
                              std::uint64_t budget, std::uint64_t seed) {
  if (mu.is_uniform()) {
    if (r_grid.empty()) throw std::invalid_argument("bp_experiment: empty grid");
    DominanceReport rep;
    rep.r_grid = r_grid;
    bool fails = false;
    for (std::size_t i = 0; i < r_grid.size(); ++i) {
      const double mk = uniform_mass(mu, K, r_grid[i]);
      const double ml = uniform_mass(mu, L, r_grid[i]);
      rep.dilate_masses.push_back({mk, ml});
      if (mk > ml && !fails) {
        fails = true;
        rep.failing_pair = i;
      }
    }
    rep.hypothesis = fails ? HypothesisVerdict::fails : HypothesisVerdict::holds;
    rep.has_conclusion = true;
    rep.k_inside_l = inradius(L, K).radius >= 1.0;
    rep.counterexample = !fails && !*rep.k_inside_l;
    return rep;
  }
  DominanceReport rep = dominance_check(mu, K, L, r_grid, xi_net, budget, seed);
  rep.has_conclusion = true;
  rep.k_mass = layered_mass(mu, K, budget, derive_seed(seed, 0x6b));
  rep.l_mass = layered_mass(mu, L, budget, derive_seed(seed, 0x6c));
  rep.mass_comparison = compare_le(rep.k_mass, rep.l_mass);
  rep.counterexample = rep.hypothesis == HypothesisVerdict::holds && rep.mass_comparison == Comparison::violation;
  return rep;
}

std::string DominanceReport::csv() const {
  std::ostringstream os;
  if (!dilate_masses.empty()) {
    os << "r,mass_K,mass_L,holds\n";
    for (std::size_t i = 0; i < dilate_masses.size(); ++i)
      os << format_double(r_grid[i]) << ',' << format_double(dilate_masses[i].first) << ','
         << format_double(dilate_masses[i].second) << ',' << (dilate_masses[i].first <= dilate_masses[i].second ? 1 : 0)
         << '\n';
    return os.str();
  }
  os << "r,xi_index,log_K,err_K,log_L,err_L,outcome\n";
  for (const auto& p : pairs)
    os << format_double(p.r) << ',' << p.xi_index << ',' << format_double(p.k_section.log_value) << ','
       << format_double(p.k_section.abs_log_error) << ',' << format_double(p.l_section.log_value) << ','
       << format_double(p.l_section.abs_log_error) << ',' << to_string(p.outcome) << '\n';
  return os.str();
}

nlohmann::json DominanceReport::json() const {
  nlohmann::json j;
  j["r_grid"] = nlohmann::json::array();
  for (double r : r_grid) j["r_grid"].push_back(json_number(r));
  j["xi_net"] = xi_net;
  j["pairs"] = nlohmann::json::array();
  for (const auto& p : pairs)
    j["pairs"].push_back({{"r", json_number(p.r)},
                          {"xi_index", p.xi_index},
                          {"K", to_json(p.k_section)},
                          {"L", to_json(p.l_section)},
                          {"outcome", to_string(p.outcome)},
                          {"paired_difference", json_number(p.paired_difference)},
                          {"paired_std_error", json_number(p.paired_std_error)}});
  j["hypothesis"] = to_string(hypothesis);
  j["failing_pair"] = failing_pair ? nlohmann::json(*failing_pair) : nlohmann::json(nullptr);
  if (has_conclusion) {
    if (!dilate_masses.empty()) {
      j["dilate_masses"] = nlohmann::json::array();
      for (std::size_t i = 0; i < dilate_masses.size(); ++i)
        j["dilate_masses"].push_back({{"r", json_number(r_grid[i])},
                                      {"mass_K", json_number(dilate_masses[i].first)},
                                      {"mass_L", json_number(dilate_masses[i].second)}});
      j["K_inside_L"] = k_inside_l.value_or(false);
    } else {
      j["mass_K"] = to_json(k_mass);
      j["mass_L"] = to_json(l_mass);
      j["mass_comparison"] = to_string(mass_comparison);
    }
    j["counterexample"] = counterexample;
  }
  return j;
}

// ---------------------------------------------------------------------------

double circle_box_area(double t, const ConvexBody& box) {
  if (box.dim() != 2) throw std::invalid_argument("circle_box_area: box must be 2-D");
  const auto* b = std::get_if<Box>(&box.shape());
  if (!b) throw std::invalid_argument("circle_box_area: body must be a box");
  return disc_rectangle_area(t, b->half_widths[0], b->half_widths[1]);
}

ConvexBody rectangle_omega() { return ConvexBody::box({std::numbers::pi / 2.0, 0.5}); }

RectangleDemo rectangle_demo(const std::vector<double>& t_grid) {
  const ConvexBody omega = rectangle_omega();
  const ConvexBody ball = ConvexBody::ball(2, 1.0);
  const auto& hw = std::get<Box>(omega.shape()).half_widths;
  RectangleDemo demo;
  demo.all_pass = true;
  for (double t : t_grid) {
    if (!(t > 0.0)) throw std::invalid_argument("rectangle_demo: t must be positive");
    const double area_ball = circle_box_area(t, omega);
    // tOmega ∩ Omega = min(t, 1) Omega
    const double s = std::min(t, 1.0);
    const double area_omega = (s * s) * (4.0 * hw[0] * hw[1]);
    const bool pass = area_ball <= area_omega;
    demo.all_pass = demo.all_pass && pass;
    demo.rows.push_back({t, area_ball, area_omega, pass});
  }
  demo.ball_area = volume(ball);
  demo.omega_area = volume(omega);
  const Vec up{0.0, 1.0};
  demo.omega_support_y = support(omega, up);
  demo.non_inclusion = support(ball, up) > demo.omega_support_y;
  demo.all_pass = demo.all_pass && demo.non_inclusion;
  return demo;
}

std::string RectangleDemo::csv() const {
  std::string out = "t,area_ball,area_omega,pass\n";
  for (const auto& r : rows)
    out += format_double(r.t) + ',' + format_double(r.area_ball) + ',' + format_double(r.area_omega) + ',' +
           (r.pass ? "1" : "0") + '\n';
  return out;
}

nlohmann::json RectangleDemo::json() const {
  nlohmann::json rows_json = nlohmann::json::array();
  for (const auto& r : rows)
    rows_json.push_back({{"t", json_number(r.t)},
                         {"area_ball", json_number(r.area_ball)},
                         {"area_omega", json_number(r.area_omega)},
                         {"pass", r.pass}});
  return {{"rows", rows_json},
          {"ball_area", json_number(ball_area)},
          {"omega_area", json_number(omega_area)},
          {"omega_support_y", json_number(omega_support_y)},
          {"non_inclusion", non_inclusion},
          {"all_pass", all_pass}};
}

// ---------------------------------------------------------------------------

std::string to_string(FactStatus s) {
  switch (s) {
    case FactStatus::holds: return "holds";
    case FactStatus::equal: return "equal";
    case FactStatus::violated: return "violated";
    case FactStatus::inconclusive: return "inconclusive";
    case FactStatus::hypothesis_violated: return "hypothesis violated";
  }
  return "unknown";
}

FactReport fact_check(const PhiFunction& phi, const ConvexBody& L, const ConvexBody& K, double R,
                      std::uint64_t budget, std::uint64_t seed) {
  if (!(R > 0.0)) throw std::invalid_argument("fact_check: R must be positive");
  const NormMeasure mu = NormMeasure::norm_density(phi, L);
  const ConvexBody rl = ConvexBody::dilate(L, R);
  FactReport rep;
  rep.volume_k = volume(K);
  rep.volume_rl = volume(rl);
  if (rep.volume_k > rep.volume_rl * (1.0 + 1e-12)) {
    rep.status = FactStatus::hypothesis_violated;
    return rep;
  }
  rep.layered = layered_mass(mu, K, budget, seed);
  rep.dilate = log_mass_dilate(mu, R);
  switch (compare_le(rep.layered, rep.dilate)) {
    case Comparison::strict: rep.status = FactStatus::holds; break;
    case Comparison::equal: rep.status = FactStatus::equal; break;
    case Comparison::violation: rep.status = FactStatus::violated; break;
    case Comparison::inconclusive: rep.status = FactStatus::inconclusive; break;
  }
  const double s_sat = std::max(bracket(K, L).r_out, R);
  for (int i = 1; i <= 64; ++i) {
    const double s = s_sat * i / 64.0;
    const ConvexBody layer = ConvexBody::dilate(L, s);
    const auto vk = exact_intersection_volume(K, layer);
    if (!vk) break;
    ++rep.inner_checks;
    const double vr = std::pow(std::min(R, s), K.dim()) * volume(L);
    if (*vk > vr * (1.0 + 1e-9)) ++rep.inner_failures;
  }
  return rep;
}

nlohmann::json FactReport::json() const {
  return {{"status", to_string(status)},
          {"volume_K", json_number(volume_k)},
          {"volume_RL", json_number(volume_rl)},
          {"layered_mass_K", to_json(layered)},
          {"mass_RL", to_json(dilate)},
          {"inner_checks", inner_checks},
          {"inner_failures", inner_failures}};
}

}  // namespace lcm
