#include "lcm/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "lcm/errors.hpp"
#include "lcm/integrate.hpp"

namespace lcm {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
const double kNan = std::numeric_limits<double>::quiet_NaN();

std::string csv_row(std::initializer_list<double> cells) {
  std::string out;
  bool first = true;
  for (double c : cells) {
    if (!first) out += ',';
    out += format_double(c);
    first = false;
  }
  return out + '\n';
}
}  // namespace

TailRatio tail_ratio(const NormMeasure& mu, const ConvexBody& K, double t, std::uint64_t budget, std::uint64_t seed) {
  const double r = inradius(K, mu.body()).radius;
  TailRatio out;
  out.t = t;
  out.denominator = phi_value(mu.phi(), r * t);
  if (!(out.denominator > 0.0)) throw UndefinedError("tail ratio undefined: phi(r t) = 0");
  out.bracket = tail_log_bracket(mu, K, t, budget, seed);
  out.rho = out.bracket.point.log_value / out.denominator;
  out.rho_lo = out.bracket.lower.log_value / out.denominator;
  out.rho_hi = out.bracket.upper.log_value / out.denominator;
  return out;
}

LdpScanReport ldp_scan(const NormMeasure& mu, const ConvexBody& K, const std::vector<double>& grid, double window,
                       double delta, std::uint64_t budget, std::uint64_t seed) {
  if (!(window >= 1.0)) throw std::invalid_argument("ldp_scan: window factor must be >= 1");
  for (std::size_t i = 1; i < grid.size(); ++i)
    if (!(grid[i] > grid[i - 1])) throw std::invalid_argument("ldp_scan: grid must be increasing");
  LdpScanReport rep;
  rep.window = window;
  rep.delta = delta;
  if (grid.empty()) {
    rep.verdict = "empty grid";
    return rep;
  }
  std::vector<TailRatio> at_grid;
  for (std::size_t i = 0; i < grid.size(); ++i) at_grid.push_back(tail_ratio(mu, K, grid[i], budget, derive_seed(seed, i)));
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double t = grid[i];
    double sup = at_grid[i].rho;
    for (std::size_t j = i + 1; j < grid.size() && grid[j] <= window * t; ++j) sup = std::max(sup, at_grid[j].rho);
    if (window > 1.0)
      for (int k = 1; k <= 4; ++k) {
        const double s = t * std::pow(window, k / 5.0);
        sup = std::max(sup, tail_ratio(mu, K, s, budget, derive_seed(seed, 1000003 * (i + 1) + k)).rho);
      }
    rep.rows.push_back({at_grid[i], sup});
  }
  rep.gaps_strictly_decreasing = rep.gaps_nonincreasing = true;
  for (std::size_t i = 1; i < rep.rows.size(); ++i) {
    const double prev = std::abs(rep.rows[i - 1].window_sup + 1.0);
    const double cur = std::abs(rep.rows[i].window_sup + 1.0);
    if (!(cur < prev)) rep.gaps_strictly_decreasing = false;
    if (!(cur <= prev)) rep.gaps_nonincreasing = false;
  }
  rep.final_gap = std::abs(rep.rows.back().window_sup + 1.0);
  rep.consistent = rep.final_gap <= delta && rep.gaps_nonincreasing;
  rep.verdict = rep.consistent ? "consistent with limsup = -1" : "not consistent with limsup = -1 at this range";
  return rep;
}

std::string LdpScanReport::csv() const {
  std::string out = "t,rho,rho_lo,rho_hi,window_sup\n";
  for (const auto& r : rows) out += csv_row({r.ratio.t, r.ratio.rho, r.ratio.rho_lo, r.ratio.rho_hi, r.window_sup});
  return out;
}

nlohmann::json LdpScanReport::json() const {
  nlohmann::json rows_json = nlohmann::json::array();
  for (const auto& r : rows)
    rows_json.push_back({{"t", json_number(r.ratio.t)},
                         {"rho", json_number(r.ratio.rho)},
                         {"rho_lo", json_number(r.ratio.rho_lo)},
                         {"rho_hi", json_number(r.ratio.rho_hi)},
                         {"window_sup", json_number(r.window_sup)},
                         {"denominator", json_number(r.ratio.denominator)},
                         {"bracket", to_json(r.ratio.bracket)}});
  return {{"window", json_number(window)},
          {"delta", json_number(delta)},
          {"rows", rows_json},
          {"gaps_strictly_decreasing", gaps_strictly_decreasing},
          {"gaps_nonincreasing", gaps_nonincreasing},
          {"final_gap", json_number(final_gap)},
          {"consistent", consistent},
          {"verdict", verdict}};
}

// ---------------------------------------------------------------------------

InductionTable induction_diagnostics(const PhiFunction& phi, int m_max, const std::vector<double>& grid) {
  if (m_max < 1) throw std::invalid_argument("induction_diagnostics: m_max must be >= 1");
  InductionTable table;
  table.m_max = m_max;
  for (double t : grid) {
    InductionRow row;
    row.t = t;
    std::vector<Estimate> f;
    for (int m = 0; m <= m_max; ++m) {
      f.push_back(log_tail_integral(phi, m, t, t));
      row.log_f.push_back(f.back().log_value);
      if (f.back().log_value >= 0.0) row.flagged = true;
    }
    const PhiValue pv = phi_eval(phi, t);
    double prod = 1.0;
    for (int m = 1; m <= m_max; ++m) {
      const double xm = row.flagged ? kNan : row.log_f[m] / row.log_f[m - 1];
      row.x.push_back(xm);
      prod *= xm;
      if (pv.left_derivative > 0.0) {
        const double lhs = -row.log_f[m - 1];
        const double rhs = -std::log(pv.left_derivative / m) - row.log_f[m];
        const double slack = f[m - 1].abs_log_error + f[m].abs_log_error + 1e-12 * (1.0 + std::abs(lhs));
        row.by_parts_holds.push_back(lhs <= rhs + slack);
      } else {
        row.by_parts_holds.push_back(true);
      }
    }
    row.y = pv.value > 0.0 ? row.log_f[0] / pv.value : kNan;
    row.xy = row.flagged ? kNan : prod * row.y;
    table.rows.push_back(std::move(row));
  }
  return table;
}

std::string InductionTable::csv() const {
  std::ostringstream os;
  os << "t";
  for (int m = 0; m <= m_max; ++m) os << ",ln_F" << m;
  for (int m = 1; m <= m_max; ++m) os << ",X" << m;
  os << ",Y,XY,flagged";
  for (int m = 1; m <= m_max; ++m) os << ",by_parts_" << m;
  os << '\n';
  for (const auto& r : rows) {
    os << format_double(r.t);
    for (double v : r.log_f) os << ',' << format_double(v);
    for (double v : r.x) os << ',' << format_double(v);
    os << ',' << format_double(r.y) << ',' << format_double(r.xy) << ',' << (r.flagged ? 1 : 0);
    for (bool b : r.by_parts_holds) os << ',' << (b ? 1 : 0);
    os << '\n';
  }
  return os.str();
}

nlohmann::json InductionTable::json() const {
  nlohmann::json rows_json = nlohmann::json::array();
  for (const auto& r : rows) {
    nlohmann::json lf = nlohmann::json::array(), xs = nlohmann::json::array();
    for (double v : r.log_f) lf.push_back(json_number(v));
    for (double v : r.x) xs.push_back(json_number(v));
    rows_json.push_back({{"t", json_number(r.t)},
                         {"ln_F", lf},
                         {"X", xs},
                         {"Y", json_number(r.y)},
                         {"XY", json_number(r.xy)},
                         {"flagged", r.flagged},
                         {"by_parts_holds", r.by_parts_holds}});
  }
  return {{"m_max", m_max}, {"rows", rows_json}};
}

// ---------------------------------------------------------------------------

Estimate plank_tail_lower_log(const NormMeasure& mu, const ConvexBody& K, double t) {
  if (!(t >= 0.0)) throw std::invalid_argument("plank bound: t must be >= 0");
  const ConvexBody& L = mu.body();
  const int n = mu.dim();
  const InradiusCertificate cert = inradius(K, L);
  const double h_l = support(L, cert.normal);
  const double tr = t * support(K, cert.normal) / h_l;
  const double section = central_section_volume(L, cert.normal);
  const Estimate tail = log_tail_integral(mu.phi(), n - 1, tr, tr);
  const Estimate& z = mu.log_normalizer();
  return Estimate::quadrature(std::log(2.0 * h_l * section) + tail.log_value - z.log_value,
                              tail.abs_log_error + z.abs_log_error, tail.count);
}

std::string to_string(WitnessStatus s) {
  switch (s) {
    case WitnessStatus::found: return "found";
    case WitnessStatus::none_found: return "none found";
    case WitnessStatus::inconclusive: return "inconclusive";
  }
  return "unknown";
}

WitnessResult witness_search(const NormMeasure& mu, const ConvexBody& K, double R, const ConvexBody& reference,
                             double t0, double t_max, std::uint64_t budget, std::uint64_t seed) {
  if (!(R > 0.0) || !std::isfinite(R)) throw std::invalid_argument("witness_search: degenerate input, R must be positive");
  if (!(t0 > 0.0) || !(t_max >= t0)) throw std::invalid_argument("witness_search: need 0 < t0 <= t_max");
  const auto f = dilate_ratio(reference, mu.body());
  if (!f) throw std::invalid_argument("witness_search: reference must be a dilate of the measure's body L");
  WitnessResult out;
  if (inradius(K, reference).radius >= R) {
    out.inclusion = true;
    out.status = WitnessStatus::none_found;
    return out;
  }
  std::vector<double> ts;
  for (double t = t0; t <= t_max; t *= 2.0) ts.push_back(t);
  if (ts.back() < t_max) ts.push_back(t_max);
  for (std::size_t i = 0; i < ts.size(); ++i) {
    const double t = ts[i];
    const TailBracket br = tail_log_bracket(mu, K, t, budget, derive_seed(seed, i));
    const Estimate plank = plank_tail_lower_log(mu, K, t);
    const Estimate ref = log_tail_dilate(mu, t * R * *f);
    WitnessStep step{t,
                     std::max({br.lower.lower_log(), plank.lower_log(), br.point.lower_log(kCertifySigmas)}),
                     std::min(br.upper.upper_log(), br.point.upper_log(kCertifySigmas)),
                     ref.lower_log(), ref.upper_log()};
    out.steps.push_back(step);
    if (step.k_tail_lower > step.ref_tail_upper) {
      out.status = WitnessStatus::found;
      out.t_star = t;
      return out;
    }
  }
  const auto& last = out.steps.back();
  out.status = last.k_tail_upper < last.ref_tail_lower ? WitnessStatus::none_found : WitnessStatus::inconclusive;
  return out;
}

nlohmann::json WitnessResult::json() const {
  nlohmann::json steps_json = nlohmann::json::array();
  for (const auto& s : steps)
    steps_json.push_back({{"t", json_number(s.t)},
                          {"k_tail_lower", json_number(s.k_tail_lower)},
                          {"k_tail_upper", json_number(s.k_tail_upper)},
                          {"ref_tail_lower", json_number(s.ref_tail_lower)},
                          {"ref_tail_upper", json_number(s.ref_tail_upper)}});
  return {{"status", to_string(status)},
          {"t_star", t_star ? json_number(*t_star) : nlohmann::json(nullptr)},
          {"inclusion", inclusion},
          {"steps", steps_json}};
}

// ---------------------------------------------------------------------------

ExceptionalSet exceptional_set_measure(const PhiFunction& phi, double alpha, double T, double step) {
  if (!(alpha > 1.0)) throw std::invalid_argument("exceptional set: alpha must be > 1");
  if (!(T >= 0.0) || !(step > 0.0)) throw std::invalid_argument("exceptional set: need T >= 0 and step > 0");
  ExceptionalSet out;
  const auto count = static_cast<std::size_t>(std::floor(T / step + 1e-9)) + 1;
  for (std::size_t i = 0; i < count; ++i) {
    const double t = static_cast<double>(i) * step;
    ++out.points;
    const double lf = log_tail_integral(phi, 0, t, 0.0).log_value;
    if (lf < -alpha * phi_value(phi, t)) {
      ++out.members;
      if (!out.first) out.first = t;
      out.last = t;
    }
  }
  out.measure = static_cast<double>(out.members) * step;
  return out;
}

nlohmann::json ExceptionalSet::json() const {
  return {{"measure", json_number(measure)},
          {"members", members},
          {"points", points},
          {"first", first ? json_number(*first) : nlohmann::json(nullptr)},
          {"last", last ? json_number(*last) : nlohmann::json(nullptr)}};
}

}  // namespace lcm
