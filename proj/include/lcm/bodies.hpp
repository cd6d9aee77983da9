#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "lcm/estimate.hpp"
#include "lcm/polytope.hpp"
#include "lcm/rng.hpp"

namespace lcm {

struct EuclideanBall {
  int dim;
  double radius;
};

/// {x : sum |x_i / a_i|^p <= 1}; p = infinity is a box.
struct LpBall {
  double p;
  Vec semi_axes;
};

struct Box {
  Vec half_widths;
};

/// {x : |<a_i, x>| <= b_i for all i}. Normals are stored unit-length.
struct SymmetricPolytope {
  std::vector<Vec> normals;
  Vec offsets;
  std::vector<Vec> vertices;  // cached for dim <= 3
};

class ConvexBody;

struct Dilate {
  std::shared_ptr<const ConvexBody> inner;
  double factor;
};

/// An origin-symmetric convex body with the origin in its interior.
/// Immutable after construction.
class ConvexBody {
 public:
  using Shape = std::variant<EuclideanBall, LpBall, Box, SymmetricPolytope, Dilate>;

  static ConvexBody ball(int dim, double radius = 1.0);
  static ConvexBody lp_ball(double p, Vec semi_axes);
  static ConvexBody box(Vec half_widths);
  /// Throws if a normal is zero, an offset is not positive, or the normals
  /// do not span the space.
  static ConvexBody polytope(std::vector<Vec> normals, Vec offsets);
  static ConvexBody dilate(const ConvexBody& inner, double factor);

  int dim() const { return dim_; }
  const Shape& shape() const { return shape_; }
  std::string describe() const;

 private:
  ConvexBody(Shape shape, int dim) : shape_(std::move(shape)), dim_(dim) {}
  Shape shape_;
  int dim_;
};

/// r(K, L) together with the unit normal of the tangency used for planks.
struct InradiusCertificate {
  double radius;
  Vec normal;
};

struct Bracket {
  double r_in;
  double r_out;
};

/// Minkowski functional of the body.
double norm(const ConvexBody& body, std::span<const double> x);
/// Support function h(u) = sup{<u, y> : y in body}.
double support(const ConvexBody& body, std::span<const double> u);
bool contains(const ConvexBody& body, std::span<const double> x, double scale = 1.0);

/// Largest R with R*L inside K.
///
/// Exact from facet data when K is a box or polytope (the minimizing facet,
/// lowest index on ties); exact for a ball K against bodies with known
/// farthest points; otherwise the minimum of h_K/h_L over the signed facet
/// normals of both bodies plus a 4096*n point sphere net, refined by a
/// shrinking pattern search around the best net point.
InradiusCertificate inradius(const ConvexBody& K, const ConvexBody& L);
/// r_in * L inside K inside r_out * L.
Bracket bracket(const ConvexBody& K, const ConvexBody& L);

/// Closed form for balls, lp-balls and boxes, fan decomposition for polytopes
/// with n <= 3, and a seeded Monte Carlo estimate otherwise.
double volume(const ConvexBody& body);
bool has_exact_volume(const ConvexBody& body);
Estimate volume_estimate(const ConvexBody& body, std::uint64_t samples, std::uint64_t seed);

/// (n-1)-volume of body ∩ xi^perp.
double central_section_volume(const ConvexBody& body, std::span<const double> xi);

/// Both signed half-spaces of every facet, for boxes, polytopes and their dilates.
std::optional<std::vector<HalfSpace>> halfspaces(const ConvexBody& body);
/// One (unit normal, offset) per facet pair, in facet order.
std::optional<std::vector<HalfSpace>> symmetric_facets(const ConvexBody& body);

/// h(e_i) per coordinate: the smallest enclosing axis box.
Vec bounding_half_widths(const ConvexBody& body);
/// max |x| over the body, with a unit direction attaining it.
std::pair<double, Vec> farthest_point(const ConvexBody& body);

/// f with a = f * b when both are dilates of one shape.
std::optional<double> dilate_ratio(const ConvexBody& a, const ConvexBody& b);
/// |a ∩ b| when an exact route exists.
std::optional<double> exact_intersection_volume(const ConvexBody& a, const ConvexBody& b);

/// Polygon (in the given orthonormal basis of xi^perp) of a 3-D box or polytope section.
std::optional<Polygon> section_polygon(const ConvexBody& body, const std::vector<Vec>& plane_basis);

/// Uniform point in the body. Polytopes use rejection from the bounding box.
void sample_uniform(const ConvexBody& body, CounterRng& rng, std::span<double> out);

/// Deterministic low-discrepancy unit vectors: uniform angles in 2-D, a
/// Fibonacci spiral in 3-D, Halton points pushed through the normal
/// quantile and normalized above that.
std::vector<Vec> sphere_net(int dim, std::size_t count);

}  // namespace lcm
