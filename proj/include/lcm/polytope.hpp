#pragma once

#include <array>
#include <span>
#include <vector>

namespace lcm {

using Vec = std::vector<double>;

/// {x : <normal, x> <= offset}
struct HalfSpace {
  Vec normal;
  double offset;
};

using Point2 = std::array<double, 2>;
/// Convex polygon, vertices counter-clockwise.
using Polygon = std::vector<Point2>;

double dot(std::span<const double> a, std::span<const double> b);
double euclidean_norm(std::span<const double> a);

/// Vertices of a bounded H-polytope in dimension 2 or 3 that contains the origin.
std::vector<Vec> enumerate_vertices(std::span<const HalfSpace> halfspaces, int dim);

/// Exact volume of a bounded H-polytope containing the origin, dim in {1, 2, 3}.
/// Uses a fan from the origin over the facets.
double hpolytope_volume(std::span<const HalfSpace> halfspaces, int dim);

/// Vertices of a bounded 2-D H-polygon containing the origin, counter-clockwise.
Polygon hpolygon(std::span<const HalfSpace> halfspaces);

double polygon_area(const Polygon& polygon);

/// max <objective, x> subject to the half-spaces; every offset must be
/// nonnegative so the origin is feasible. Dense simplex with Bland's rule.
double lp_maximize(std::span<const HalfSpace> halfspaces, std::span<const double> objective);

/// Orthonormal basis of the hyperplane orthogonal to a nonzero vector.
std::vector<Vec> orthonormal_complement(std::span<const double> normal);

/// Rank of a set of vectors by Gaussian elimination with partial pivoting.
int vector_rank(std::span<const Vec> vectors, double tolerance = 1e-10);

}  // namespace lcm
