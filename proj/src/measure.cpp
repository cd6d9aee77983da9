#include "lcm/measure.hpp"

#include <cmath>
#include <mutex>
#include <stdexcept>

#include "lcm/integrate.hpp"
#include "lcm/parallel.hpp"

namespace lcm {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_density(const NormMeasure& mu, const char* what) {
  if (mu.is_uniform()) throw std::invalid_argument(std::string(what) + " needs a density measure, not a uniform one");
}

Estimate combine(double log_value, const Estimate& a, const Estimate& b) {
  return Estimate::quadrature(log_value, a.abs_log_error + b.abs_log_error, a.count + b.count);
}

// psi(v) = phi(v) - (n-1) ln v, the negative log of the radial density.
LogConcaveSampler radial_sampler(const NormMeasure& mu, double lo, double hi) {
  const int n = mu.dim();
  const PhiFunction& phi = mu.phi();
  auto psi = [&phi, n](double v) {
    if (n > 1 && v <= 0.0) return kInf;
    return phi_value(phi, v) - (n - 1) * (n > 1 ? std::log(v) : 0.0);
  };
  auto dpsi = [&phi, n](double v) {
    if (n > 1 && v <= 0.0) return -kInf;
    return phi_eval(phi, v).left_derivative - (n - 1) / (n > 1 ? v : 1.0);
  };
  return LogConcaveSampler(psi, dpsi, lo, hi);
}

}  // namespace

struct NormMeasure::Cache {
  std::once_flag once;
  Estimate log_z;
  Estimate log_radial;
};

NormMeasure::NormMeasure(PhiFunction phi, ConvexBody body, bool uniform)
    : phi_(std::move(phi)), body_(std::move(body)), uniform_(uniform), cache_(std::make_shared<Cache>()) {}

NormMeasure NormMeasure::norm_density(PhiFunction phi, ConvexBody L) {
  return NormMeasure(std::move(phi), std::move(L), false);
}

NormMeasure NormMeasure::uniform_on(ConvexBody omega) {
  return NormMeasure(PhiFunction::linear(1.0), std::move(omega), true);
}

const PhiFunction& NormMeasure::phi() const {
  if (uniform_) throw std::invalid_argument("uniform measure has no phi");
  return phi_;
}

const Estimate& NormMeasure::log_normalizer() const {
  if (uniform_) throw std::invalid_argument("uniform measure has no normalizer");
  std::call_once(cache_->once, [this] {
    const int n = dim();
    cache_->log_radial = log_tail_integral(phi_, n - 1, 0.0, 0.0);
    const double log_nl = std::log(static_cast<double>(n)) + std::log(volume(body_));
    cache_->log_z = cache_->log_radial;
    cache_->log_z.log_value += log_nl;
  });
  return cache_->log_z;
}

const Estimate& NormMeasure::log_radial_total() const {
  log_normalizer();
  return cache_->log_radial;
}

std::string NormMeasure::describe() const {
  if (uniform_) return "uniform on " + body_.describe();
  return "exp(-phi(|x|_L)), phi = " + phi_.describe() + ", L = " + body_.describe();
}

double normalizer(const NormMeasure& mu) { return mu.log_normalizer().value(); }

double log_density(const NormMeasure& mu, std::span<const double> x) {
  if (mu.is_uniform()) return contains(mu.body(), x) ? -std::log(volume(mu.body())) : -kInf;
  return -phi_value(mu.phi(), norm(mu.body(), x)) - mu.log_normalizer().log_value;
}

Estimate log_tail_dilate(const NormMeasure& mu, double a) {
  require_density(mu, "log_tail_dilate");
  if (!(a >= 0.0)) throw std::invalid_argument("dilate factor must be >= 0");
  const Estimate& total = mu.log_radial_total();
  if (std::isinf(a)) return Estimate::exact(-kInf);
  if (a == 0.0) return Estimate::exact(0.0);
  const Estimate tail = log_tail_integral(mu.phi(), mu.dim() - 1, a, 0.0);
  return combine(std::min(0.0, tail.log_value - total.log_value), tail, total);
}

Estimate log_mass_dilate(const NormMeasure& mu, double a) {
  require_density(mu, "log_mass_dilate");
  if (!(a >= 0.0)) throw std::invalid_argument("dilate factor must be >= 0");
  if (a == 0.0) return Estimate::exact(-kInf);
  const Estimate& total = mu.log_radial_total();
  if (std::isinf(a)) return Estimate::exact(0.0);
  const Estimate tail = log_tail_dilate(mu, a);
  if (tail.log_value > std::log(0.5)) {
    const Estimate inner = log_interval_integral(mu.phi(), mu.dim() - 1, 0.0, a, 0.0);
    return combine(std::min(0.0, inner.log_value - total.log_value), inner, total);
  }
  // 1 - tail without cancellation; relative error scales by tail/(1-tail)
  const double log_mass = std::log1p(-std::exp(tail.log_value));
  const double ratio = std::exp(tail.log_value) / (1.0 - std::exp(tail.log_value));
  return Estimate::quadrature(log_mass, tail.abs_log_error * ratio + 1e-16, tail.count);
}

double mass_dilate(const NormMeasure& mu, double a) { return std::exp(log_mass_dilate(mu, a).log_value); }

TailBracket tail_log_bracket(const NormMeasure& mu, const ConvexBody& K, double t, std::uint64_t budget,
                             std::uint64_t seed) {
  require_density(mu, "tail_log_bracket");
  if (!(t >= 0.0) || !std::isfinite(t)) throw std::invalid_argument("tail_log_bracket: t must be finite and >= 0");
  const Bracket br = bracket(K, mu.body());
  TailBracket out;
  out.r_in = br.r_in;
  out.r_out = br.r_out;
  out.upper = log_tail_dilate(mu, t * br.r_in);
  out.lower = log_tail_dilate(mu, t * br.r_out);
  if (t == 0.0 || dilate_ratio(K, mu.body()) || br.r_in == br.r_out) {
    out.point = out.upper;
    return out;
  }
  if (out.upper.log_value == -kInf) {
    out.point = out.upper;
    return out;
  }
  const double log_q = std::min(0.0, out.lower.log_value - out.upper.log_value);
  const double q = std::exp(log_q);
  const auto sampler = radial_sampler(mu, t * br.r_in, t * br.r_out);
  const int n = mu.dim();
  const Moments m = mc_moments(budget, seed, [&](CounterRng& rng) {
    thread_local std::vector<double> y;
    y.resize(n);
    const double v = sampler.draw(rng);
    sample_uniform(mu.body(), rng, y);
    const double ny = norm(mu.body(), y);
    if (ny == 0.0) return 0.0;
    for (auto& c : y) c *= v / ny;
    return norm(K, y) > t ? 1.0 : 0.0;
  });
  const double p = m.mean();
  const double se = std::sqrt(p * (1.0 - p) / static_cast<double>(m.n));
  const double frac = q + (1.0 - q) * p;
  if (!(frac > 0.0)) {
    out.point = Estimate::monte_carlo_log(-kInf, kInf, m.n);
    out.flagged = true;
    return out;
  }
  out.point = Estimate::monte_carlo_log(out.upper.log_value + std::log(frac), (1.0 - q) * se / frac, m.n);
  out.flagged = !(out.point.log_value >= out.lower.log_value - 1e-12 && out.point.log_value <= out.upper.log_value + 1e-12);
  return out;
}

Estimate layered_mass(const NormMeasure& mu, const ConvexBody& K, std::uint64_t budget, std::uint64_t seed) {
  require_density(mu, "layered_mass");
  if (K.dim() != mu.dim()) throw std::invalid_argument("layered_mass: dimension mismatch");
  const ConvexBody& L = mu.body();
  const PhiFunction& phi = mu.phi();
  const double log_z = mu.log_normalizer().log_value;

  auto inner = [&](double s) -> std::optional<double> {
    if (s <= 0.0) return 0.0;
    return exact_intersection_volume(K, ConvexBody::dilate(L, s));
  };
  const double s_sat = bracket(K, L).r_out;
  if (inner(0.5 * s_sat) && has_exact_volume(K)) {
    const double u0 = phi_value(phi, 0.0);
    const double u_sat = phi_value(phi, s_sat);
    const double log_k = std::log(volume(K));
    bool degenerate = false;
    auto log_f = [&](double u) {
      const auto v = inner(phi_inverse(phi, u));
      if (!v || !(*v >= 0.0)) {
        degenerate = true;
        return -kInf;
      }
      return -u + std::log(*v);
    };
    Estimate q = u_sat > u0 ? log_integral(log_f, u0, u_sat, 1e-12) : Estimate::exact(-kInf);
    if (degenerate) throw std::runtime_error("layered_mass: inner volume failed");
    const double log_mass = log_add(q.log_value, -u_sat + log_k) - log_z;
    const double rel = q.log_value == -kInf ? 0.0 : q.abs_log_error * std::exp(q.log_value - (log_mass + log_z));
    return Estimate::quadrature(std::min(0.0, log_mass), rel + mu.log_normalizer().abs_log_error, q.count);
  }

  const Vec w = bounding_half_widths(K);
  double log_box = 0.0;
  for (double x : w) log_box += std::log(2.0 * x);
  const int n = K.dim();
  const LogMoments m = mc_log_moments(budget, seed, [&](CounterRng& rng) {
    thread_local std::vector<double> x;
    x.resize(n);
    for (int i = 0; i < n; ++i) x[i] = (2.0 * rng.uniform() - 1.0) * w[i];
    if (!contains(K, x)) return -kInf;
    return -phi_value(phi, norm(L, x));
  });
  Estimate e = m.estimate();
  if (!e.degenerate) e.log_value += log_box - log_z;
  return e;
}

std::vector<Vec> sample(const NormMeasure& mu, std::size_t count, std::uint64_t seed) {
  require_density(mu, "sample");
  const int n = mu.dim();
  const auto sampler = radial_sampler(mu, 0.0, kInf);
  std::vector<Vec> out(count, Vec(n));
  const std::size_t chunks = (count + kMonteCarloChunk - 1) / kMonteCarloChunk;
  parallel_for(chunks, [&](std::size_t c) {
    CounterRng rng(seed, c);
    const std::size_t end = std::min<std::size_t>(count, (c + 1) * kMonteCarloChunk);
    for (std::size_t i = c * kMonteCarloChunk; i < end; ++i) {
      Vec& x = out[i];
      double ny = 0.0;
      while (ny == 0.0) {
        sample_uniform(mu.body(), rng, x);
        ny = norm(mu.body(), x);
      }
      const double v = sampler.draw(rng);
      for (auto& c2 : x) c2 *= v / ny;
    }
  });
  return out;
}

double uniform_mass(const NormMeasure& mu, const ConvexBody& K, double t) {
  if (!mu.is_uniform()) throw std::invalid_argument("uniform_mass needs a uniform measure");
  if (!(t >= 0.0)) throw std::invalid_argument("uniform_mass: t must be >= 0");
  if (t == 0.0) return 0.0;
  const ConvexBody& omega = mu.body();
  const ConvexBody tk = ConvexBody::dilate(K, t);
  if (auto v = exact_intersection_volume(tk, omega)) return std::min(1.0, *v / volume(omega));
  const Moments m = mc_moments(std::uint64_t{1} << 20, 0, [&](CounterRng& rng) {
    thread_local std::vector<double> x;
    x.resize(omega.dim());
    sample_uniform(omega, rng, x);
    return contains(tk, x) ? 1.0 : 0.0;
  });
  return m.mean();
}

nlohmann::json to_json(const TailBracket& b) {
  return {{"lower", to_json(b.lower)}, {"upper", to_json(b.upper)}, {"point", to_json(b.point)},
          {"r_in", json_number(b.r_in)}, {"r_out", json_number(b.r_out)}, {"flagged", b.flagged}};
}

}  // namespace lcm
