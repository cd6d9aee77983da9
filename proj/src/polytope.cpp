#include "lcm/polytope.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace lcm {

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double euclidean_norm(std::span<const double> a) { return std::sqrt(dot(a, a)); }

namespace {

double scale_of(std::span<const HalfSpace> hs) {
  double s = 0.0;
  for (const auto& h : hs) s = std::max(s, std::abs(h.offset) / euclidean_norm(h.normal));
  return s > 0.0 ? s : 1.0;
}

bool solve_small(std::vector<std::vector<double>> a, Vec b, Vec& x) {
  const std::size_t n = b.size();
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    for (std::size_t r = col + 1; r < n; ++r)
      if (std::abs(a[r][col]) > std::abs(a[pivot][col])) pivot = r;
    if (std::abs(a[pivot][col]) < 1e-12) return false;
    std::swap(a[pivot], a[col]);
    std::swap(b[pivot], b[col]);
    for (std::size_t r = col + 1; r < n; ++r) {
      const double f = a[r][col] / a[col][col];
      for (std::size_t c = col; c < n; ++c) a[r][c] -= f * a[col][c];
      b[r] -= f * b[col];
    }
  }
  x.assign(n, 0.0);
  for (std::size_t i = n; i-- > 0;) {
    double s = b[i];
    for (std::size_t c = i + 1; c < n; ++c) s -= a[i][c] * x[c];
    x[i] = s / a[i][i];
  }
  return true;
}

// Unit normals, offsets rescaled, coplanar duplicates removed.
std::vector<HalfSpace> normalized_unique(std::span<const HalfSpace> hs) {
  std::vector<HalfSpace> out;
  for (const auto& h : hs) {
    const double len = euclidean_norm(h.normal);
    if (len == 0.0) {
      if (h.offset < 0.0) throw std::invalid_argument("infeasible zero half-space");
      continue;
    }
    HalfSpace u{h.normal, h.offset / len};
    for (auto& v : u.normal) v /= len;
    bool duplicate = false;
    for (const auto& o : out) {
      double diff = std::abs(o.offset - u.offset);
      for (std::size_t i = 0; i < u.normal.size(); ++i) diff += std::abs(o.normal[i] - u.normal[i]);
      if (diff < 1e-12 * (1.0 + std::abs(u.offset))) {
        duplicate = true;
        break;
      }
    }
    if (!duplicate) out.push_back(std::move(u));
  }
  return out;
}

Polygon order_ccw(const std::vector<Point2>& pts) {
  Point2 c{0.0, 0.0};
  for (const auto& p : pts) {
    c[0] += p[0];
    c[1] += p[1];
  }
  c[0] /= static_cast<double>(pts.size());
  c[1] /= static_cast<double>(pts.size());
  Polygon out = pts;
  std::sort(out.begin(), out.end(), [&](const Point2& a, const Point2& b) {
    return std::atan2(a[1] - c[1], a[0] - c[0]) < std::atan2(b[1] - c[1], b[0] - c[0]);
  });
  return out;
}

}  // namespace

std::vector<Vec> enumerate_vertices(std::span<const HalfSpace> halfspaces, int dim) {
  if (dim != 2 && dim != 3) throw std::invalid_argument("vertex enumeration needs dim 2 or 3");
  const auto hs = normalized_unique(halfspaces);
  const double scale = scale_of(hs);
  const double feas_tol = 1e-9 * scale;
  const std::size_t m = hs.size();
  std::vector<Vec> vertices;
  auto consider = [&](const Vec& x) {
    for (const auto& h : hs)
      if (dot(h.normal, x) > h.offset + feas_tol) return;
    for (const auto& v : vertices) {
      double d = 0.0;
      for (int i = 0; i < dim; ++i) d = std::max(d, std::abs(v[i] - x[i]));
      if (d < 1e-9 * scale) return;
    }
    vertices.push_back(x);
  };
  Vec x;
  if (dim == 2) {
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = i + 1; j < m; ++j)
        if (solve_small({hs[i].normal, hs[j].normal}, {hs[i].offset, hs[j].offset}, x)) consider(x);
  } else {
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = i + 1; j < m; ++j)
        for (std::size_t k = j + 1; k < m; ++k)
          if (solve_small({hs[i].normal, hs[j].normal, hs[k].normal},
                          {hs[i].offset, hs[j].offset, hs[k].offset}, x))
            consider(x);
  }
  return vertices;
}

Polygon hpolygon(std::span<const HalfSpace> halfspaces) {
  const auto verts = enumerate_vertices(halfspaces, 2);
  std::vector<Point2> pts;
  pts.reserve(verts.size());
  for (const auto& v : verts) pts.push_back({v[0], v[1]});
  if (pts.size() < 3) return {};
  return order_ccw(pts);
}

double polygon_area(const Polygon& polygon) {
  double twice = 0.0;
  const std::size_t n = polygon.size();
  for (std::size_t i = 0; i < n; ++i) {
    const auto& p = polygon[i];
    const auto& q = polygon[(i + 1) % n];
    twice += p[0] * q[1] - p[1] * q[0];
  }
  return std::abs(twice) / 2.0;
}

double hpolytope_volume(std::span<const HalfSpace> halfspaces, int dim) {
  if (dim == 1) {
    double hi = std::numeric_limits<double>::infinity();
    double lo = -hi;
    for (const auto& h : halfspaces) {
      if (h.normal[0] > 0) hi = std::min(hi, h.offset / h.normal[0]);
      if (h.normal[0] < 0) lo = std::max(lo, h.offset / h.normal[0]);
    }
    return std::max(0.0, hi - lo);
  }
  if (dim == 2) return polygon_area(hpolygon(halfspaces));
  if (dim != 3) throw std::invalid_argument("exact polytope volume needs dim <= 3");

  const auto hs = normalized_unique(halfspaces);
  const auto vertices = enumerate_vertices(hs, 3);
  const double tol = 1e-9 * scale_of(hs);
  double volume = 0.0;
  for (const auto& h : hs) {
    std::vector<Vec> on_facet;
    for (const auto& v : vertices)
      if (std::abs(dot(h.normal, v) - h.offset) <= tol) on_facet.push_back(v);
    if (on_facet.size() < 3) continue;
    const auto basis = orthonormal_complement(h.normal);
    std::vector<Point2> pts;
    for (const auto& v : on_facet) pts.push_back({dot(basis[0], v), dot(basis[1], v)});
    volume += h.offset * polygon_area(order_ccw(pts)) / 3.0;
  }
  return volume;
}

double lp_maximize(std::span<const HalfSpace> halfspaces, std::span<const double> objective) {
  const std::size_t m = halfspaces.size();
  const std::size_t n = objective.size();
  const std::size_t cols = 2 * n + m;
  // Tableau rows: constraints then objective (reduced costs).
  std::vector<std::vector<double>> t(m + 1, std::vector<double>(cols + 1, 0.0));
  for (std::size_t i = 0; i < m; ++i) {
    if (halfspaces[i].offset < 0.0) throw std::invalid_argument("origin must be feasible");
    for (std::size_t j = 0; j < n; ++j) {
      t[i][j] = halfspaces[i].normal[j];
      t[i][n + j] = -halfspaces[i].normal[j];
    }
    t[i][2 * n + i] = 1.0;
    t[i][cols] = halfspaces[i].offset;
  }
  for (std::size_t j = 0; j < n; ++j) {
    t[m][j] = -objective[j];
    t[m][n + j] = objective[j];
  }
  std::vector<std::size_t> basis(m);
  std::iota(basis.begin(), basis.end(), 2 * n);
  constexpr double eps = 1e-12;
  for (int iter = 0; iter < 100000; ++iter) {
    std::size_t enter = cols;
    for (std::size_t j = 0; j < cols; ++j)
      if (t[m][j] < -eps) {
        enter = j;
        break;
      }
    if (enter == cols) return t[m][cols];
    std::size_t leave = m;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < m; ++i) {
      if (t[i][enter] > eps) {
        const double ratio = t[i][cols] / t[i][enter];
        if (ratio < best - eps || (std::abs(ratio - best) <= eps && leave < m && basis[i] < basis[leave])) {
          best = ratio;
          leave = i;
        }
      }
    }
    if (leave == m) throw std::domain_error("linear program is unbounded");
    const double p = t[leave][enter];
    for (auto& v : t[leave]) v /= p;
    for (std::size_t i = 0; i <= m; ++i) {
      if (i == leave || t[i][enter] == 0.0) continue;
      const double f = t[i][enter];
      for (std::size_t j = 0; j <= cols; ++j) t[i][j] -= f * t[leave][j];
    }
    basis[leave] = enter;
  }
  throw std::runtime_error("simplex iteration limit");
}

std::vector<Vec> orthonormal_complement(std::span<const double> normal) {
  const std::size_t n = normal.size();
  const double len = euclidean_norm(normal);
  if (len == 0.0) throw std::invalid_argument("zero direction");
  Vec u(normal.begin(), normal.end());
  for (auto& v : u) v /= len;
  std::vector<Vec> basis;
  // Gram-Schmidt over the standard basis, skipping the most aligned axis.
  std::size_t skip = 0;
  for (std::size_t i = 1; i < n; ++i)
    if (std::abs(u[i]) > std::abs(u[skip])) skip = i;
  std::vector<Vec> done{u};
  for (std::size_t i = 0; i < n; ++i) {
    if (i == skip) continue;
    Vec e(n, 0.0);
    e[i] = 1.0;
    for (int pass = 0; pass < 2; ++pass)
      for (const auto& d : done) {
        const double c = dot(e, d);
        for (std::size_t k = 0; k < n; ++k) e[k] -= c * d[k];
      }
    const double el = euclidean_norm(e);
    for (auto& v : e) v /= el;
    done.push_back(e);
    basis.push_back(e);
  }
  return basis;
}

int vector_rank(std::span<const Vec> vectors, double tolerance) {
  if (vectors.empty()) return 0;
  std::vector<Vec> a(vectors.begin(), vectors.end());
  const std::size_t cols = a[0].size();
  int rank = 0;
  std::size_t row = 0;
  for (std::size_t col = 0; col < cols && row < a.size(); ++col) {
    std::size_t pivot = row;
    for (std::size_t r = row; r < a.size(); ++r)
      if (std::abs(a[r][col]) > std::abs(a[pivot][col])) pivot = r;
    if (std::abs(a[pivot][col]) <= tolerance) continue;
    std::swap(a[pivot], a[row]);
    for (std::size_t r = row + 1; r < a.size(); ++r) {
      const double f = a[r][col] / a[row][col];
      for (std::size_t c = col; c < cols; ++c) a[r][c] -= f * a[row][c];
    }
    ++row;
    ++rank;
  }
  return rank;
}

}  // namespace lcm
