#pragma once

#include <vector>

#include "sweepdescent/convex_set.hpp"

namespace sweepdescent {

/// Points on the boundary of a set, with their target spacing.
///
/// When `set` is present, distances to the sample use the set oracle
/// (distance to the solid set); otherwise they are nearest-sample distances,
/// i.e. distances between the sampled boundaries.
struct BoundarySample {
  std::vector<Point> points;
  double resolution = 0.0;
  SetPtr set;

  double distance_to(const Point& x) const;
};

/// Largest t >= 0 with origin + t*direction inside, for origin inside the set.
/// Bisection on membership to relative precision 1e-14. Returns +inf if the
/// ray never leaves the set.
double ray_exit(const Membership& inside, const Point& origin, const Point& direction,
                double scale_hint = 1.0);
double ray_exit(const ConvexSet& set, const Point& origin, const Point& direction);

/// Outward normal at boundary point b estimated from membership alone: the
/// boundary is located along rays through b +- h*t for tangent directions t
/// and the normal is the direction orthogonal to the central differences.
Point fd_boundary_normal(const Membership& inside, const Point& interior, const Point& b,
                         double h = 1e-5);

/// Boundary sample with spacing at most `resolution`.
/// d = 2: deterministic angular sweep from the interior point, subdivided
/// until consecutive points are closer than the resolution.
/// d >= 3: seeded directions, count chosen from the bounding radius.
/// Points closer than resolution/2 to an accepted point are rejected.
BoundarySample sample_boundary(SetPtr set, double resolution, std::uint64_t seed = 0);

/// Hausdorff distance max(sup_a d(a, B), sup_b d(b, A)) over the samples.
/// Throws EmptySample if either sample is empty.
double hausdorff_distance(const BoundarySample& a, const BoundarySample& b);

/// Unit outward normal at a boundary point.
///
/// Seeded by fd_boundary_normal, then refined with the exterior probe
/// x = b + h*n0 as (x - proj(x))/|x - proj(x)|. Tilted probes around the seed
/// must agree, otherwise b is a corner and DegenerateNormal is thrown. Throws
/// DomainError when b is not within the boundary tolerance.
Point outward_normal(const ConvexSet& set, const Point& b,
                     const Tolerances& tol = default_tolerances());

/// |signed distance| to the boundary: distance outside, depth inside.
double boundary_distance(const ConvexSet& set, const Point& x);

/// Orthonormal basis of the complement of span{v} (v nonzero), as columns.
Eigen::MatrixXd orthogonal_complement(const Point& v);

}  // namespace sweepdescent
