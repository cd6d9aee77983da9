#include "lcm/integrate.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "lcm/errors.hpp"
#include "lcm/parallel.hpp"

namespace lcm {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Gauss-Kronrod 21 / Gauss 10 on [-1, 1], expanded to all 21 nodes.
struct Rule {
  std::array<double, 21> x{};
  std::array<double, 21> kronrod{};
  std::array<double, 21> gauss{};
};

const Rule& rule() {
  static const Rule r = [] {
    using GK = boost::math::quadrature::gauss_kronrod<double, 21>;
    using G = boost::math::quadrature::gauss<double, 10>;
    Rule out;
    const auto& xs = GK::abscissa();
    const auto& kw = GK::weights();
    const auto& gw = G::weights();
    out.x[10] = 0.0;
    out.kronrod[10] = kw[0];
    for (std::size_t i = 1; i < xs.size(); ++i) {
      out.x[10 + i] = xs[i];
      out.x[10 - i] = -xs[i];
      out.kronrod[10 + i] = out.kronrod[10 - i] = kw[i];
      if (i % 2 == 1) out.gauss[10 + i] = out.gauss[10 - i] = gw[i / 2];
    }
    return out;
  }();
  return r;
}

struct LogSum {
  double log_total = -kInf;
  double log_error = -kInf;  // ln of the absolute error
  std::uint64_t panels = 0;

  void add(double log_value, double log_err) {
    log_total = log_add(log_total, log_value);
    log_error = log_add(log_error, log_err);
  }
  double relative_error() const {
    if (log_total == -kInf) return 0.0;
    return std::exp(log_error - log_total);
  }
};

void integrate_panels(const std::function<double(double)>& log_f, double a, double b, double rel_tol,
                      double log_floor, LogSum& acc) {
  struct Job {
    double a, b;
    int depth;
  };
  const Rule& r = rule();
  std::vector<Job> stack{{a, b, 0}};
  std::array<double, 21> lf{};
  while (!stack.empty()) {
    const Job job = stack.back();
    stack.pop_back();
    const double half = 0.5 * (job.b - job.a);
    const double mid = 0.5 * (job.a + job.b);
    double m = -kInf;
    for (int i = 0; i < 21; ++i) {
      lf[i] = log_f(mid + half * r.x[i]);
      if (std::isnan(lf[i])) throw std::domain_error("log integrand returned nan");
      m = std::max(m, lf[i]);
    }
    ++acc.panels;
    if (m == -kInf) continue;
    double k = 0.0, g = 0.0;
    for (int i = 0; i < 21; ++i) {
      const double w = std::exp(lf[i] - m);
      k += r.kronrod[i] * w;
      g += r.gauss[i] * w;
    }
    const double log_k = m + std::log(k * half);
    const double diff = std::abs(k - g);
    const double floor = std::max(log_floor, acc.log_total + std::log(rel_tol) - 7.0);
    const bool converged = diff <= rel_tol * k || log_k < floor || job.depth >= 60;
    if (converged) {
      const double err = std::max(diff, 2e-16 * k);
      acc.add(log_k, m + std::log(err * half));
      continue;
    }
    // right half first so the left half is processed next
    stack.push_back({mid, job.b, job.depth + 1});
    stack.push_back({job.a, mid, job.depth + 1});
  }
}

double log_binomial(int n, int k) {
  return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

// ln Σ_k C(p,k) x^{p-k} k! / d^{k+1} = ln ∫_0^∞ (w + x)^p e^{-d w} dw
double log_shifted_moment(int p, double x, double d) {
  double acc = -kInf;
  for (int k = 0; k <= p; ++k) {
    if (p - k > 0 && x == 0.0) continue;
    const double term = log_binomial(p, k) + (p - k > 0 ? (p - k) * std::log(x) : 0.0) + std::lgamma(k + 1.0) -
                        (k + 1) * std::log(d);
    acc = log_add(acc, term);
  }
  return acc;
}

// Bound on ln ∫_T^∞ (v - s)^p e^{-phi(v)} [phi'(v)] dv from phi(v) >= phi(T) + d (v - T).
double log_tail_bound(int p, double T, double s, double phi_T, double d, bool derivative_weight) {
  if (!derivative_weight) return -phi_T + log_shifted_moment(p, T - s, d);
  // by parts: (T-s)^p e^{-phi(T)} + p ∫ (v-s)^{p-1} e^{-phi}
  double out = -phi_T + (p > 0 ? p * std::log(T - s) : 0.0);
  if (p > 0 && T == s) out = -kInf;
  if (p > 0) out = log_add(out, std::log(p) - phi_T + log_shifted_moment(p - 1, T - s, d));
  return out;
}

}  // namespace

double log_add(double a, double b) {
  if (a == -kInf) return b;
  if (b == -kInf) return a;
  if (a < b) std::swap(a, b);
  return a + std::log1p(std::exp(b - a));
}

double log_sub(double a, double b) {
  if (b == -kInf) return a;
  if (b > a) throw std::domain_error("log_sub: negative difference");
  if (a == b) return -kInf;
  return a + std::log(-std::expm1(b - a));
}

Estimate log_integral(const std::function<double(double)>& log_f, double a, double b, double rel_tol,
                      double log_floor) {
  if (!(b >= a) || !std::isfinite(a) || !std::isfinite(b)) throw std::invalid_argument("log_integral: bad interval");
  if (a == b) return Estimate::exact(-kInf);
  LogSum acc;
  integrate_panels(log_f, a, b, rel_tol, log_floor, acc);
  return Estimate::quadrature(acc.log_total, acc.relative_error(), acc.panels);
}

Estimate log_tail_integral(const PhiFunction& phi, int power, double t, double shift, bool derivative_weight) {
  if (power < 0) throw std::invalid_argument("log_tail_integral: power must be >= 0");
  if (!(shift >= 0.0) || !(t >= shift) || !std::isfinite(t))
    throw std::invalid_argument("log_tail_integral: need t >= shift >= 0");

  if (auto lin = as_linear(phi); lin && t >= phi.plateau) {
    double out = -phi_value(phi, t) + log_shifted_moment(power, t - shift, lin->slope);
    if (derivative_weight) out += std::log(lin->slope);
    return Estimate::quadrature(out, 1e-15 * (power + 1), 0);
  }

  auto log_f = [&](double v) {
    const PhiValue pv = phi_eval(phi, v);
    if (std::isinf(pv.value)) return -kInf;
    double out = -pv.value;
    if (power > 0) out += power * std::log(v - shift);
    if (derivative_weight) out += pv.left_derivative > 0.0 ? std::log(pv.left_derivative) : -kInf;
    return out;
  };

  std::vector<double> breaks;
  for (double x : phi_breakpoints(phi))
    if (x > t) breaks.push_back(x);
  std::size_t next_break = 0;

  double d0 = phi_eval(phi, t).left_derivative;
  if (!(d0 > 0.0)) d0 = phi_eval(phi, t + 1.0).left_derivative;
  double h = (d0 > 0.0 && std::isfinite(d0)) ? (power + 1.0) / d0 : 1.0;
  h = std::clamp(h, 1e-12 * (1.0 + t), 1e6);
  if (!std::isfinite(d0)) h = 1e-12 * (1.0 + t);

  LogSum acc;
  double a = t;
  double truncation = 0.0;
  for (int iter = 0;; ++iter) {
    double b = a + h;
    if (next_break < breaks.size() && breaks[next_break] <= b) b = breaks[next_break++];
    integrate_panels(log_f, a, b, 1e-12, -kInf, acc);
    const PhiValue pv = phi_eval(phi, b);
    if (std::isinf(pv.value)) break;
    const double d = pv.left_derivative;
    if (d > 0.0) {
      const double bound = std::isinf(d) ? -kInf : log_tail_bound(power, b, shift, pv.value, d, derivative_weight);
      if (bound == -kInf) break;
      if (acc.log_total > -kInf && bound - acc.log_total < std::log(1e-13)) {
        truncation = std::exp(bound - acc.log_total);
        break;
      }
    }
    a = b;
    h *= 2.0;
    if (iter > 400 || a > 1e12 * (1.0 + t))
      throw DivergenceError("log_tail_integral: tail does not decay (phi' never becomes positive)");
  }
  return Estimate::quadrature(acc.log_total, acc.relative_error() + truncation, acc.panels);
}

Estimate log_interval_integral(const PhiFunction& phi, int power, double a, double b, double shift) {
  if (power < 0) throw std::invalid_argument("log_interval_integral: power must be >= 0");
  if (!(a >= shift) || !(b >= a)) throw std::invalid_argument("log_interval_integral: need b >= a >= shift");
  if (std::isinf(b)) return log_tail_integral(phi, power, a, shift);
  if (a == b) return Estimate::exact(-kInf);
  auto log_f = [&](double v) {
    const double value = phi_value(phi, v);
    if (std::isinf(value)) return -kInf;
    return (power > 0 ? power * std::log(v - shift) : 0.0) - value;
  };
  std::vector<double> cuts{a};
  for (double x : phi_breakpoints(phi))
    if (x > a && x < b) cuts.push_back(x);
  cuts.push_back(b);
  LogSum acc;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) integrate_panels(log_f, cuts[i], cuts[i + 1], 1e-12, -kInf, acc);
  return Estimate::quadrature(acc.log_total, acc.relative_error(), acc.panels);
}

// ---------------------------------------------------------------------------
// Monte Carlo

void LogMoments::add(double log_weight) {
  ++n;
  if (log_weight == -kInf) return;
  if (std::isnan(log_weight)) throw std::domain_error("Monte Carlo weight is nan");
  ++nonzero;
  if (log_weight > max) {
    const double r = std::exp(max - log_weight);
    s1 *= r;
    s2 *= r * r;
    max = log_weight;
  }
  const double w = std::exp(log_weight - max);
  s1 += w;
  s2 += w * w;
}

void LogMoments::merge(const LogMoments& o) {
  n += o.n;
  nonzero += o.nonzero;
  if (o.max == -kInf) return;
  if (o.max > max) {
    const double r = max == -kInf ? 0.0 : std::exp(max - o.max);
    s1 = s1 * r + o.s1;
    s2 = s2 * r * r + o.s2;
    max = o.max;
  } else {
    const double r = std::exp(o.max - max);
    s1 += o.s1 * r;
    s2 += o.s2 * r * r;
  }
}

Estimate LogMoments::estimate() const {
  if (nonzero == 0 || n == 0) return Estimate::monte_carlo_log(-kInf, kInf, n);
  const double dn = static_cast<double>(n);
  const double m1 = s1 / dn;
  if (n < 2) return Estimate::monte_carlo_log(max + std::log(m1), kInf, n);
  const double var = std::max(0.0, s2 / dn - m1 * m1) * dn / (dn - 1.0);
  return Estimate::monte_carlo_log(max + std::log(m1), std::sqrt(var / dn) / m1, n);
}

void Moments::add(double x) {
  s1 += x;
  s2 += x * x;
  ++n;
}

void Moments::merge(const Moments& o) {
  s1 += o.s1;
  s2 += o.s2;
  n += o.n;
}

double Moments::mean() const { return n ? s1 / static_cast<double>(n) : 0.0; }

double Moments::std_error() const {
  if (n < 2) return kInf;
  const double dn = static_cast<double>(n);
  const double m = s1 / dn;
  return std::sqrt(std::max(0.0, s2 / dn - m * m) / (dn - 1.0));
}

namespace {
template <class Acc, class Fn>
Acc run_chunks(std::uint64_t samples, std::uint64_t seed, std::uint32_t stream, const Fn& fn) {
  if (samples == 0) throw std::invalid_argument("Monte Carlo needs at least one sample");
  const std::uint64_t chunks = (samples + kMonteCarloChunk - 1) / kMonteCarloChunk;
  std::vector<Acc> parts(chunks);
  parallel_for(chunks, [&](std::size_t c) {
    CounterRng rng(seed, c, stream);
    const std::uint64_t count = std::min<std::uint64_t>(kMonteCarloChunk, samples - c * kMonteCarloChunk);
    Acc acc;
    for (std::uint64_t i = 0; i < count; ++i) acc.add(fn(rng));
    parts[c] = acc;
  });
  Acc total;
  for (const auto& p : parts) total.merge(p);
  return total;
}
}  // namespace

LogMoments mc_log_moments(std::uint64_t samples, std::uint64_t seed,
                          const std::function<double(CounterRng&)>& log_weight, std::uint32_t stream) {
  return run_chunks<LogMoments>(samples, seed, stream, log_weight);
}

Moments mc_moments(std::uint64_t samples, std::uint64_t seed, const std::function<double(CounterRng&)>& value,
                   std::uint32_t stream) {
  return run_chunks<Moments>(samples, seed, stream, value);
}

Estimate mc_region_measure(const std::function<double(std::span<const double>)>& log_density,
                           const std::function<bool(std::span<const double>)>& region, const Proposal& proposal,
                           std::uint64_t samples, std::uint64_t seed) {
  if (proposal.dim < 1 || !proposal.draw || !proposal.log_density)
    throw std::invalid_argument("mc_region_measure: incomplete proposal");
  const auto moments = mc_log_moments(samples, seed, [&](CounterRng& rng) {
    thread_local std::vector<double> x;
    x.resize(proposal.dim);
    proposal.draw(rng, x);
    if (!region(x)) return -kInf;
    return log_density(x) - proposal.log_density(x);
  });
  return moments.estimate();
}

// ---------------------------------------------------------------------------
// Log-concave sampler

LogConcaveSampler::LogConcaveSampler(std::function<double(double)> psi, std::function<double(double)> dpsi,
                                     double lo, double hi, int cells)
    : psi_(std::move(psi)) {
  if (!(hi > lo) || !std::isfinite(lo)) throw std::invalid_argument("LogConcaveSampler: need lo < hi");
  if (cells < 1) throw std::invalid_argument("LogConcaveSampler: need at least one cell");
  double end = hi;
  if (std::isinf(hi)) {
    double psi_min = kInf;
    double step = 1.0;
    end = lo + step;
    for (int i = 0; i < 200; ++i) {
      const double p = psi_(end);
      psi_min = std::min(psi_min, p);
      if (dpsi(end) > 0.0 && p > psi_min + 40.0) break;
      step *= 2.0;
      end = lo + step;
    }
  }
  auto add_piece = [&](double x0, double x1, double c, double g) {
    if (!(x1 > x0) || !std::isfinite(c) || !std::isfinite(g)) return;
    const double w = x1 - x0;
    double lm;
    if (std::isinf(w))
      lm = g > 0.0 ? -c - std::log(g) : kInf;
    else if (std::abs(g) * w < 1e-12)
      lm = -c + std::log(w);
    else if (g > 0.0)
      lm = -c + std::log(-std::expm1(-g * w)) - std::log(g);
    else
      lm = -c - g * w + std::log(-std::expm1(g * w)) - std::log(-g);
    if (std::isinf(lm) && lm > 0) throw std::invalid_argument("LogConcaveSampler: envelope not integrable");
    pieces_.push_back({x0, x1, c, g, lm});
  };
  for (int i = 0; i < cells; ++i) {
    const double xl = lo + (end - lo) * i / cells;
    const double xr = i + 1 == cells ? end : lo + (end - lo) * (i + 1) / cells;
    const double pl = psi_(xl), pr = psi_(xr);
    const double dl = dpsi(xl), dr = dpsi(xr);
    const bool left_ok = std::isfinite(pl) && std::isfinite(dl);
    const bool right_ok = std::isfinite(pr) && std::isfinite(dr);
    if (left_ok && right_ok && dr > dl) {
      double v = (pr - pl + dl * xl - dr * xr) / (dl - dr);
      v = std::clamp(v, xl, xr);
      add_piece(xl, v, pl, dl);
      add_piece(v, xr, pr + dr * (v - xr), dr);
    } else if (left_ok) {
      add_piece(xl, xr, pl, dl);
    } else if (right_ok) {
      add_piece(xl, xr, pr + dr * (xl - xr), dr);
    }
  }
  if (std::isinf(hi)) {
    const double p = psi_(end), d = dpsi(end);
    if (!(d > 0.0)) throw std::invalid_argument("LogConcaveSampler: density does not decay");
    add_piece(end, kInf, p, d);
  }
  if (pieces_.empty()) throw std::invalid_argument("LogConcaveSampler: zero envelope");
  double m = -kInf;
  for (const auto& p : pieces_) m = std::max(m, p.log_mass);
  double run = 0.0;
  for (const auto& p : pieces_) {
    run += std::exp(p.log_mass - m);
    cdf_.push_back(run);
  }
  log_mass_ = m + std::log(run);
}

double LogConcaveSampler::draw(CounterRng& rng) const {
  for (int attempt = 0; attempt < 10000; ++attempt) {
    const double u = rng.uniform() * cdf_.back();
    const std::size_t i = std::min<std::size_t>(std::upper_bound(cdf_.begin(), cdf_.end(), u) - cdf_.begin(),
                                                pieces_.size() - 1);
    const Piece& p = pieces_[i];
    const double w = p.x1 - p.x0;
    const double v = rng.uniform_open();
    double y;
    if (std::isinf(w))
      y = -std::log(v) / p.g;
    else if (std::abs(p.g) * w < 1e-12)
      y = v * w;
    else if (p.g > 0.0)
      y = -std::log1p(v * std::expm1(-p.g * w)) / p.g;
    else
      y = w + std::log(v + (1.0 - v) * std::exp(p.g * w)) / (-p.g);
    const double x = std::min(p.x0 + std::clamp(y, 0.0, w), p.x1);
    const double log_accept = -psi_(x) + p.c + p.g * (x - p.x0);
    if (std::log(rng.uniform_open()) < log_accept) return x;
  }
  throw InefficiencyError("LogConcaveSampler: acceptance below 1e-4");
}

}  // namespace lcm
