#include "lcm/bodies.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include <boost/math/special_functions/erf.hpp>

#include "lcm/errors.hpp"
#include "lcm/planar.hpp"

namespace lcm {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

void require_dim(const ConvexBody& body, std::size_t size) {
  if (static_cast<std::size_t>(body.dim()) != size)
    throw std::invalid_argument("dimension mismatch: body has dimension " +
                                std::to_string(body.dim()) + ", vector has " +
                                std::to_string(size));
}

void require_nonzero(std::span<const double> u) {
  for (double v : u)
    if (v != 0.0) return;
  throw std::invalid_argument("zero direction");
}

// log of the volume of the unit Euclidean ball in R^n.
double log_unit_ball_volume(int n) {
  return 0.5 * n * std::log(std::numbers::pi) - std::lgamma(0.5 * n + 1.0);
}

double lp_norm_scaled(std::span<const double> x, const Vec& axes, double p) {
  double peak = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) peak = std::max(peak, std::abs(x[i] / axes[i]));
  if (peak == 0.0 || std::isinf(p)) return peak;
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += std::pow(std::abs(x[i] / axes[i]) / peak, p);
  return peak * std::pow(s, 1.0 / p);
}

// Unwraps nested dilates.
std::pair<double, const ConvexBody*> unwrap(const ConvexBody& body) {
  double factor = 1.0;
  const ConvexBody* cur = &body;
  while (const auto* d = std::get_if<Dilate>(&cur->shape())) {
    factor *= d->factor;
    cur = d->inner.get();
  }
  return {factor, cur};
}

double polytope_support(const SymmetricPolytope& poly, std::span<const double> u) {
  if (!poly.vertices.empty()) {
    double best = -kInf;
    for (const auto& v : poly.vertices) best = std::max(best, dot(u, v));
    return best;
  }
  std::vector<HalfSpace> hs;
  for (std::size_t i = 0; i < poly.normals.size(); ++i) {
    hs.push_back({poly.normals[i], poly.offsets[i]});
    Vec neg = poly.normals[i];
    for (auto& v : neg) v = -v;
    hs.push_back({neg, poly.offsets[i]});
  }
  return lp_maximize(hs, u);
}

bool proportional(const Vec& a, const Vec& b, double& ratio) {
  if (a.size() != b.size() || a.empty()) return false;
  ratio = a[0] / b[0];
  for (std::size_t i = 1; i < a.size(); ++i)
    if (std::abs(a[i] / b[i] - ratio) > 1e-12 * ratio) return false;
  return true;
}

Vec normalized(std::span<const double> u) {
  const double len = euclidean_norm(u);
  Vec out(u.begin(), u.end());
  for (auto& v : out) v /= len;
  return out;
}

// min of h_K/h_L over the sphere: net, facet normals, then pattern search.
InradiusCertificate inradius_by_net(const ConvexBody& K, const ConvexBody& L) {
  const int n = K.dim();
  std::vector<Vec> candidates = sphere_net(n, std::size_t{4096} * n);
  for (const ConvexBody* b : {&K, &L})
    if (auto f = symmetric_facets(*b))
      for (const auto& h : *f) {
        candidates.push_back(h.normal);
        Vec neg = h.normal;
        for (auto& v : neg) v = -v;
        candidates.push_back(neg);
      }
  auto ratio = [&](const Vec& u) { return support(K, u) / support(L, u); };
  Vec best = candidates.front();
  double best_value = ratio(best);
  for (const auto& u : candidates) {
    const double r = ratio(u);
    if (r < best_value) {
      best_value = r;
      best = u;
    }
  }
  for (double step = 0.05; step > 1e-12; step *= 0.5) {
    bool improved = true;
    while (improved) {
      improved = false;
      for (int i = 0; i < n; ++i)
        for (double sign : {1.0, -1.0}) {
          Vec trial = best;
          trial[i] += sign * step;
          trial = normalized(trial);
          const double r = ratio(trial);
          if (r < best_value) {
            best_value = r;
            best = trial;
            improved = true;
          }
        }
    }
  }
  return {best_value, best};
}

}  // namespace

// ---------------------------------------------------------------------------
// Construction

ConvexBody ConvexBody::ball(int dim, double radius) {
  if (dim < 1) throw std::invalid_argument("ball dimension must be >= 1");
  if (!(radius > 0.0) || !std::isfinite(radius)) throw std::invalid_argument("ball radius must be positive");
  return ConvexBody(EuclideanBall{dim, radius}, dim);
}

ConvexBody ConvexBody::lp_ball(double p, Vec semi_axes) {
  if (!(p >= 1.0)) throw std::invalid_argument("lp-ball exponent must be >= 1");
  if (semi_axes.empty()) throw std::invalid_argument("lp-ball needs at least one semi-axis");
  for (double a : semi_axes)
    if (!(a > 0.0) || !std::isfinite(a)) throw std::invalid_argument("lp-ball semi-axes must be positive");
  const int dim = static_cast<int>(semi_axes.size());
  return ConvexBody(LpBall{p, std::move(semi_axes)}, dim);
}

ConvexBody ConvexBody::box(Vec half_widths) {
  if (half_widths.empty()) throw std::invalid_argument("box needs at least one half-width");
  for (double w : half_widths)
    if (!(w > 0.0) || !std::isfinite(w)) throw std::invalid_argument("box half-widths must be positive");
  const int dim = static_cast<int>(half_widths.size());
  return ConvexBody(Box{std::move(half_widths)}, dim);
}

ConvexBody ConvexBody::polytope(std::vector<Vec> normals, Vec offsets) {
  if (normals.empty() || normals.size() != offsets.size())
    throw std::invalid_argument("polytope needs matching normals and offsets");
  const std::size_t n = normals[0].size();
  if (n == 0) throw std::invalid_argument("polytope normals must be nonempty");
  for (std::size_t i = 0; i < normals.size(); ++i) {
    if (normals[i].size() != n) throw std::invalid_argument("polytope normals differ in dimension");
    const double len = euclidean_norm(normals[i]);
    if (len == 0.0) throw std::invalid_argument("polytope facet " + std::to_string(i) + " has a zero normal");
    if (!(offsets[i] > 0.0) || !std::isfinite(offsets[i]))
      throw std::invalid_argument("polytope facet " + std::to_string(i) + " has a nonpositive offset");
    for (auto& v : normals[i]) v /= len;
    offsets[i] /= len;
  }
  if (vector_rank(normals) < static_cast<int>(n))
    throw std::invalid_argument("polytope facet normals do not span the space (unbounded body)");
  SymmetricPolytope poly{std::move(normals), std::move(offsets), {}};
  if (n == 2 || n == 3) {
    std::vector<HalfSpace> hs;
    for (std::size_t i = 0; i < poly.normals.size(); ++i) {
      hs.push_back({poly.normals[i], poly.offsets[i]});
      Vec neg = poly.normals[i];
      for (auto& v : neg) v = -v;
      hs.push_back({neg, poly.offsets[i]});
    }
    poly.vertices = enumerate_vertices(hs, static_cast<int>(n));
  }
  return ConvexBody(std::move(poly), static_cast<int>(n));
}

ConvexBody ConvexBody::dilate(const ConvexBody& inner, double factor) {
  if (!(factor > 0.0) || !std::isfinite(factor)) throw std::invalid_argument("dilation factor must be positive");
  return ConvexBody(Dilate{std::make_shared<const ConvexBody>(inner), factor}, inner.dim());
}

std::string ConvexBody::describe() const {
  std::ostringstream os;
  std::visit(Overloaded{
                 [&](const EuclideanBall& b) { os << "ball(n=" << b.dim << ", r=" << b.radius << ")"; },
                 [&](const LpBall& b) { os << "lpball(p=" << b.p << ", n=" << b.semi_axes.size() << ")"; },
                 [&](const Box& b) {
                   os << "box(";
                   for (std::size_t i = 0; i < b.half_widths.size(); ++i)
                     os << (i ? "," : "") << b.half_widths[i];
                   os << ")";
                 },
                 [&](const SymmetricPolytope& p) { os << "polytope(n=" << dim_ << ", facets=" << p.normals.size() << ")"; },
                 [&](const Dilate& d) { os << d.factor << "*" << d.inner->describe(); },
             },
             shape_);
  return os.str();
}

// ---------------------------------------------------------------------------
// Norm and support

double norm(const ConvexBody& body, std::span<const double> x) {
  require_dim(body, x.size());
  return std::visit(Overloaded{
                        [&](const EuclideanBall& b) { return euclidean_norm(x) / b.radius; },
                        [&](const LpBall& b) { return lp_norm_scaled(x, b.semi_axes, b.p); },
                        [&](const Box& b) {
                          double m = 0.0;
                          for (std::size_t i = 0; i < x.size(); ++i) m = std::max(m, std::abs(x[i]) / b.half_widths[i]);
                          return m;
                        },
                        [&](const SymmetricPolytope& p) {
                          double m = 0.0;
                          for (std::size_t i = 0; i < p.normals.size(); ++i)
                            m = std::max(m, std::abs(dot(p.normals[i], x)) / p.offsets[i]);
                          return m;
                        },
                        [&](const Dilate& d) { return norm(*d.inner, x) / d.factor; },
                    },
                    body.shape());
}

double support(const ConvexBody& body, std::span<const double> u) {
  require_dim(body, u.size());
  require_nonzero(u);
  return std::visit(Overloaded{
                        [&](const EuclideanBall& b) { return b.radius * euclidean_norm(u); },
                        [&](const LpBall& b) {
                          Vec scaled(u.size());
                          for (std::size_t i = 0; i < u.size(); ++i) scaled[i] = b.semi_axes[i] * u[i];
                          const double q = b.p == 1.0 ? kInf : (std::isinf(b.p) ? 1.0 : b.p / (b.p - 1.0));
                          return lp_norm_scaled(scaled, Vec(u.size(), 1.0), q);
                        },
                        [&](const Box& b) {
                          double s = 0.0;
                          for (std::size_t i = 0; i < u.size(); ++i) s += b.half_widths[i] * std::abs(u[i]);
                          return s;
                        },
                        [&](const SymmetricPolytope& p) { return polytope_support(p, u); },
                        [&](const Dilate& d) { return d.factor * support(*d.inner, u); },
                    },
                    body.shape());
}

bool contains(const ConvexBody& body, std::span<const double> x, double scale) {
  return norm(body, x) <= scale;
}

// ---------------------------------------------------------------------------
// Facets and bounds

std::optional<std::vector<HalfSpace>> symmetric_facets(const ConvexBody& body) {
  const auto [factor, base] = unwrap(body);
  std::vector<HalfSpace> out;
  if (const auto* b = std::get_if<Box>(&base->shape())) {
    for (std::size_t i = 0; i < b->half_widths.size(); ++i) {
      Vec e(b->half_widths.size(), 0.0);
      e[i] = 1.0;
      out.push_back({e, factor * b->half_widths[i]});
    }
    return out;
  }
  if (const auto* p = std::get_if<SymmetricPolytope>(&base->shape())) {
    for (std::size_t i = 0; i < p->normals.size(); ++i) out.push_back({p->normals[i], factor * p->offsets[i]});
    return out;
  }
  if (const auto* l = std::get_if<LpBall>(&base->shape()); l && std::isinf(l->p)) {
    for (std::size_t i = 0; i < l->semi_axes.size(); ++i) {
      Vec e(l->semi_axes.size(), 0.0);
      e[i] = 1.0;
      out.push_back({e, factor * l->semi_axes[i]});
    }
    return out;
  }
  return std::nullopt;
}

std::optional<std::vector<HalfSpace>> halfspaces(const ConvexBody& body) {
  auto facets = symmetric_facets(body);
  if (!facets) return std::nullopt;
  std::vector<HalfSpace> out;
  for (const auto& f : *facets) {
    out.push_back(f);
    Vec neg = f.normal;
    for (auto& v : neg) v = -v;
    out.push_back({neg, f.offset});
  }
  return out;
}

Vec bounding_half_widths(const ConvexBody& body) {
  Vec out(body.dim());
  for (int i = 0; i < body.dim(); ++i) {
    Vec e(body.dim(), 0.0);
    e[i] = 1.0;
    out[i] = support(body, e);
  }
  return out;
}

std::pair<double, Vec> farthest_point(const ConvexBody& body) {
  const auto [factor, base] = unwrap(body);
  const int n = body.dim();
  if (const auto* b = std::get_if<EuclideanBall>(&base->shape())) {
    Vec e(n, 0.0);
    e[0] = 1.0;
    return {factor * b->radius, e};
  }
  const Box* box = std::get_if<Box>(&base->shape());
  const LpBall* lp = std::get_if<LpBall>(&base->shape());
  if (box || (lp && std::isinf(lp->p))) {
    const Vec& w = box ? box->half_widths : lp->semi_axes;
    return {factor * euclidean_norm(w), normalized(w)};
  }
  if (const auto* p = std::get_if<SymmetricPolytope>(&base->shape()); p && !p->vertices.empty()) {
    double best = 0.0;
    Vec arg;
    for (const auto& v : p->vertices) {
      const double r = euclidean_norm(v);
      if (r > best + 1e-14 * best) {
        best = r;
        arg = v;
      }
    }
    return {factor * best, normalized(arg)};
  }
  // max of h over the unit sphere equals the circumradius.
  const auto cert = inradius_by_net(ConvexBody::ball(n, 1.0), *base);
  return {factor / cert.radius, cert.normal};
}

// ---------------------------------------------------------------------------
// Inradius

InradiusCertificate inradius(const ConvexBody& K, const ConvexBody& L) {
  if (K.dim() != L.dim()) throw std::invalid_argument("inradius: bodies differ in dimension");
  const auto [fk, k0] = unwrap(K);
  const auto [fl, l0] = unwrap(L);
  if (fk != 1.0 || fl != 1.0) {
    auto cert = inradius(*k0, *l0);
    cert.radius *= fk / fl;
    return cert;
  }
  if (auto facets = symmetric_facets(K)) {
    double best = kInf;
    std::size_t arg = 0;
    for (std::size_t i = 0; i < facets->size(); ++i) {
      const double r = (*facets)[i].offset / support(L, (*facets)[i].normal);
      if (r < best * (1.0 - 1e-12)) {
        best = r;
        arg = i;
      }
    }
    return {best, (*facets)[arg].normal};
  }
  if (const auto* b = std::get_if<EuclideanBall>(&K.shape())) {
    const auto [far, dir] = farthest_point(L);
    return {b->radius / far, dir};
  }
  return inradius_by_net(K, L);
}

Bracket bracket(const ConvexBody& K, const ConvexBody& L) {
  const double r_in = inradius(K, L).radius;
  const double r_out = 1.0 / inradius(L, K).radius;
  return {r_in, std::max(r_in, r_out)};
}

// ---------------------------------------------------------------------------
// Volumes

bool has_exact_volume(const ConvexBody& body) {
  const auto [factor, base] = unwrap(body);
  (void)factor;
  if (std::holds_alternative<SymmetricPolytope>(base->shape())) return body.dim() <= 3;
  return true;
}

double volume(const ConvexBody& body) {
  const int n = body.dim();
  return std::visit(Overloaded{
                        [&](const EuclideanBall& b) { return std::exp(log_unit_ball_volume(n)) * std::pow(b.radius, n); },
                        [&](const LpBall& b) {
                          double v = 1.0;
                          if (std::isinf(b.p)) {
                            for (double a : b.semi_axes) v *= 2.0 * a;
                            return v;
                          }
                          double log_v = -std::lgamma(1.0 + n / b.p);
                          for (double a : b.semi_axes) log_v += std::log(2.0 * a) + std::lgamma(1.0 + 1.0 / b.p);
                          return std::exp(log_v);
                        },
                        [&](const Box& b) {
                          double v = 1.0;
                          for (double w : b.half_widths) v *= 2.0 * w;
                          return v;
                        },
                        [&](const SymmetricPolytope&) {
                          if (n <= 3) return hpolytope_volume(*halfspaces(body), n);
                          return volume_estimate(body, std::uint64_t{1} << 22, 0).value();
                        },
                        [&](const Dilate& d) { return std::pow(d.factor, n) * volume(*d.inner); },
                    },
                    body.shape());
}

Estimate volume_estimate(const ConvexBody& body, std::uint64_t samples, std::uint64_t seed) {
  if (has_exact_volume(body)) return Estimate::exact(std::log(volume(body)));
  const Vec w = bounding_half_widths(body);
  double box_volume = 1.0;
  for (double v : w) box_volume *= 2.0 * v;
  constexpr std::uint64_t kChunk = 4096;
  const std::uint64_t chunks = (samples + kChunk - 1) / kChunk;
  std::uint64_t hits = 0;
  Vec x(body.dim());
  for (std::uint64_t c = 0; c < chunks; ++c) {
    CounterRng rng(seed, c);
    const std::uint64_t count = std::min(kChunk, samples - c * kChunk);
    for (std::uint64_t i = 0; i < count; ++i) {
      for (int d = 0; d < body.dim(); ++d) x[d] = (2.0 * rng.uniform() - 1.0) * w[d];
      if (contains(body, x)) ++hits;
    }
  }
  const double p = static_cast<double>(hits) / static_cast<double>(samples);
  const double se = std::sqrt(p * (1.0 - p) / static_cast<double>(samples));
  return Estimate::monte_carlo(p * box_volume, se * box_volume, samples);
}

std::optional<Polygon> section_polygon(const ConvexBody& body, const std::vector<Vec>& plane_basis) {
  if (body.dim() != 3 || plane_basis.size() != 2) return std::nullopt;
  auto hs = halfspaces(body);
  if (!hs) return std::nullopt;
  std::vector<HalfSpace> planar;
  for (const auto& h : *hs) {
    Vec a{dot(h.normal, plane_basis[0]), dot(h.normal, plane_basis[1])};
    if (std::abs(a[0]) + std::abs(a[1]) < 1e-14) continue;
    planar.push_back({a, h.offset});
  }
  return hpolygon(planar);
}

double central_section_volume(const ConvexBody& body, std::span<const double> xi) {
  require_dim(body, xi.size());
  require_nonzero(xi);
  const int n = body.dim();
  if (n == 1) return 1.0;
  const auto [factor, base] = unwrap(body);
  if (factor != 1.0) return std::pow(factor, n - 1) * central_section_volume(*base, xi);
  if (const auto* b = std::get_if<EuclideanBall>(&body.shape()))
    return std::exp(log_unit_ball_volume(n - 1)) * std::pow(b->radius, n - 1);
  if (const auto* lp = std::get_if<LpBall>(&body.shape())) {
    bool round = lp->p == 2.0;
    for (double a : lp->semi_axes) round = round && a == lp->semi_axes[0];
    if (round) return std::exp(log_unit_ball_volume(n - 1)) * std::pow(lp->semi_axes[0], n - 1);
  }
  // Axis-aligned section of a box.
  if (const auto* b = std::get_if<Box>(&body.shape())) {
    int nonzero = 0, axis = 0;
    for (int i = 0; i < n; ++i)
      if (xi[i] != 0.0) {
        ++nonzero;
        axis = i;
      }
    if (nonzero == 1) {
      double v = 1.0;
      for (int i = 0; i < n; ++i)
        if (i != axis) v *= 2.0 * b->half_widths[i];
      return v;
    }
  }
  if (n == 2) {
    const Vec d{-xi[1], xi[0]};
    return 2.0 * euclidean_norm(d) / norm(body, d);
  }
  const auto basis = orthonormal_complement(xi);
  if (n == 3)
    if (auto poly = section_polygon(body, basis)) return polygon_area(*poly);

  // Monte Carlo on the slice: uniform points in a cube of the hyperplane.
  const double half = euclidean_norm(bounding_half_widths(body));
  constexpr std::uint64_t kSamples = std::uint64_t{1} << 20;
  constexpr std::uint64_t kChunk = 4096;
  std::uint64_t hits = 0;
  Vec x(n);
  for (std::uint64_t c = 0; c < kSamples / kChunk; ++c) {
    CounterRng rng(0x5ec7u, c);
    for (std::uint64_t i = 0; i < kChunk; ++i) {
      std::fill(x.begin(), x.end(), 0.0);
      for (std::size_t k = 0; k < basis.size(); ++k) {
        const double s = (2.0 * rng.uniform() - 1.0) * half;
        for (int d = 0; d < n; ++d) x[d] += s * basis[k][d];
      }
      if (contains(body, x)) ++hits;
    }
  }
  return static_cast<double>(hits) / static_cast<double>(kSamples) * std::pow(2.0 * half, n - 1);
}

// ---------------------------------------------------------------------------
// Shape comparison and intersections

std::optional<double> dilate_ratio(const ConvexBody& a, const ConvexBody& b) {
  if (a.dim() != b.dim()) return std::nullopt;
  const auto [fa, a0] = unwrap(a);
  const auto [fb, b0] = unwrap(b);
  const double scale = fa / fb;
  double ratio = 0.0;
  if (const auto* x = std::get_if<EuclideanBall>(&a0->shape()))
    if (const auto* y = std::get_if<EuclideanBall>(&b0->shape())) return scale * x->radius / y->radius;
  if (const auto* x = std::get_if<Box>(&a0->shape()))
    if (const auto* y = std::get_if<Box>(&b0->shape()))
      if (proportional(x->half_widths, y->half_widths, ratio)) return scale * ratio;
  if (const auto* x = std::get_if<LpBall>(&a0->shape()))
    if (const auto* y = std::get_if<LpBall>(&b0->shape()))
      if (x->p == y->p && proportional(x->semi_axes, y->semi_axes, ratio)) return scale * ratio;
  if (const auto* x = std::get_if<SymmetricPolytope>(&a0->shape()))
    if (const auto* y = std::get_if<SymmetricPolytope>(&b0->shape())) {
      if (x->normals.size() != y->normals.size()) return std::nullopt;
      for (std::size_t i = 0; i < x->normals.size(); ++i)
        for (std::size_t d = 0; d < x->normals[i].size(); ++d)
          if (std::abs(x->normals[i][d] - y->normals[i][d]) > 1e-12) return std::nullopt;
      if (proportional(x->offsets, y->offsets, ratio)) return scale * ratio;
    }
  return std::nullopt;
}

std::optional<double> exact_intersection_volume(const ConvexBody& a, const ConvexBody& b) {
  if (a.dim() != b.dim()) throw std::invalid_argument("intersection: bodies differ in dimension");
  const int n = a.dim();
  if (auto f = dilate_ratio(a, b)) {
    if (*f >= 1.0) return volume(b);
    return volume(a);
  }
  const auto [fa, a0] = unwrap(a);
  const auto [fb, b0] = unwrap(b);
  const auto* box_a = std::get_if<Box>(&a0->shape());
  const auto* box_b = std::get_if<Box>(&b0->shape());
  if (box_a && box_b) {
    double v = 1.0;
    for (int i = 0; i < n; ++i) v *= 2.0 * std::min(fa * box_a->half_widths[i], fb * box_b->half_widths[i]);
    return v;
  }
  if (n == 2) {
    const auto* ball_a = std::get_if<EuclideanBall>(&a0->shape());
    const auto* ball_b = std::get_if<EuclideanBall>(&b0->shape());
    if (ball_a && box_b)
      return disc_rectangle_area(fa * ball_a->radius, fb * box_b->half_widths[0], fb * box_b->half_widths[1]);
    if (ball_b && box_a)
      return disc_rectangle_area(fb * ball_b->radius, fa * box_a->half_widths[0], fa * box_a->half_widths[1]);
  }
  if (n <= 3) {
    auto ha = halfspaces(a);
    auto hb = halfspaces(b);
    if (ha && hb) {
      ha->insert(ha->end(), hb->begin(), hb->end());
      return hpolytope_volume(*ha, n);
    }
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Sampling

void sample_uniform(const ConvexBody& body, CounterRng& rng, std::span<double> out) {
  const int n = body.dim();
  std::visit(Overloaded{
                 [&](const EuclideanBall& b) {
                   double r2 = 0.0;
                   for (int i = 0; i < n; ++i) {
                     out[i] = rng.normal();
                     r2 += out[i] * out[i];
                   }
                   const double scale = b.radius * std::pow(rng.uniform_open(), 1.0 / n) / std::sqrt(r2);
                   for (int i = 0; i < n; ++i) out[i] *= scale;
                 },
                 [&](const LpBall& b) {
                   if (std::isinf(b.p)) {
                     for (int i = 0; i < n; ++i) out[i] = (2.0 * rng.uniform() - 1.0) * b.semi_axes[i];
                     return;
                   }
                   // Barthe-Guedon-Mendelson-Naor: y_i ~ exp(-|y|^p), z ~ Exp(1).
                   double total = rng.exponential();
                   for (int i = 0; i < n; ++i) {
                     const double g = rng.gamma(1.0 / b.p);
                     const double mag = std::pow(g, 1.0 / b.p);
                     out[i] = rng.uniform() < 0.5 ? -mag : mag;
                     total += g;
                   }
                   const double scale = std::pow(total, -1.0 / b.p);
                   for (int i = 0; i < n; ++i) out[i] *= scale * b.semi_axes[i];
                 },
                 [&](const Box& b) {
                   for (int i = 0; i < n; ++i) out[i] = (2.0 * rng.uniform() - 1.0) * b.half_widths[i];
                 },
                 [&](const SymmetricPolytope&) {
                   const Vec w = bounding_half_widths(body);
                   for (int attempt = 0; attempt < 10000; ++attempt) {
                     for (int i = 0; i < n; ++i) out[i] = (2.0 * rng.uniform() - 1.0) * w[i];
                     if (contains(body, out)) return;
                   }
                   throw InefficiencyError("polytope rejection sampling: acceptance below 1e-4");
                 },
                 [&](const Dilate& d) {
                   sample_uniform(*d.inner, rng, out);
                   for (int i = 0; i < n; ++i) out[i] *= d.factor;
                 },
             },
             body.shape());
}

std::vector<Vec> sphere_net(int dim, std::size_t count) {
  std::vector<Vec> net;
  net.reserve(count);
  if (dim == 1) {
    net.push_back({1.0});
    return net;
  }
  if (dim == 2) {
    for (std::size_t i = 0; i < count; ++i) {
      const double a = 2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(count);
      net.push_back({std::cos(a), std::sin(a)});
    }
    return net;
  }
  if (dim == 3) {
    const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
    for (std::size_t i = 0; i < count; ++i) {
      const double z = 1.0 - (2.0 * static_cast<double>(i) + 1.0) / static_cast<double>(count);
      const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
      const double a = golden * static_cast<double>(i);
      net.push_back({r * std::cos(a), r * std::sin(a), z});
    }
    return net;
  }
  static constexpr int kPrimes[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71};
  if (dim > 20) throw std::invalid_argument("sphere net supports dimension <= 20");
  for (std::size_t i = 1; net.size() < count; ++i) {
    Vec v(dim);
    for (int d = 0; d < dim; ++d) {
      double f = 1.0, h = 0.0;
      for (std::size_t k = i; k > 0; k /= kPrimes[d]) {
        f /= kPrimes[d];
        h += f * static_cast<double>(k % kPrimes[d]);
      }
      v[d] = std::sqrt(2.0) * boost::math::erf_inv(2.0 * h - 1.0);
    }
    const double len = euclidean_norm(v);
    if (len == 0.0 || !std::isfinite(len)) continue;
    for (auto& x : v) x /= len;
    net.push_back(std::move(v));
  }
  return net;
}

}  // namespace lcm

namespace lcm {

double disc_rectangle_area(double t, double half_width, double half_height) {
  if (!(t >= 0.0) || !(half_width > 0.0) || !(half_height > 0.0))
    throw std::invalid_argument("disc_rectangle_area: radius must be >= 0 and half-widths > 0");
  if (t == 0.0) return 0.0;
  if (t <= half_width && t <= half_height) return (t * t) * std::numbers::pi;
  if (t * t >= half_width * half_width + half_height * half_height) return 4.0 * half_width * half_height;
  // Quadrant: integrate min(h, sqrt(t^2 - x^2)) over x in [0, min(w, t)].
  const auto F = [t](double x) { return 0.5 * (x * std::sqrt(std::max(0.0, t * t - x * x)) + t * t * std::asin(std::min(1.0, x / t))); };
  const double x0 = std::sqrt(std::max(0.0, t * t - half_height * half_height));
  const double a = std::min(x0, half_width);
  const double b = std::min(half_width, t);
  return 4.0 * (half_height * a + F(b) - F(a));
}

}  // namespace lcm
