#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>

#include "sweepdescent/types.hpp"

namespace sweepdescent {

enum class SetKind { analytic, generic_cutting_plane, dilated, intersection };

std::string to_string(SetKind kind);

/// Closed convex set with nonempty interior, queried through an oracle.
///
/// Implementations are immutable after construction and safe to share
/// between threads. `project` returns the metric projection; points of the
/// set are returned unchanged.
class ConvexSet {
 public:
  virtual ~ConvexSet() = default;

  virtual int dim() const = 0;
  virtual SetKind kind() const = 0;

  /// Exact membership test of the closed set.
  virtual bool contains(const Point& x) const = 0;
  virtual Point project(const Point& x) const = 0;
  virtual double distance(const Point& x) const { return (x - project(x)).norm(); }

  /// A Slater point: some point of the interior.
  virtual Point interior_point() const = 0;

  /// Nearest point of the closure of the complement, for x in the set.
  /// For x outside, this is project(x). The default implementation searches
  /// along rays and is only accurate for points close to the boundary.
  virtual Point nearest_boundary_point(const Point& x) const;

  /// Distance from x to the complement of the interior (0 outside).
  double depth(const Point& x) const;

  /// Radius of a ball around interior_point() containing the set, or +inf.
  virtual double bounding_radius() const = 0;

  bool bounded() const { return std::isfinite(bounding_radius()); }
};

using SetPtr = std::shared_ptr<const ConvexSet>;

/// Closed ball B(center, radius); radius 0 gives a singleton.
SetPtr make_ball(Point center, double radius);

/// The whole space R^d.
SetPtr make_whole_space(int dim);

/// Convex hull of two closed balls. Degenerates to the larger ball when one
/// contains the other.
SetPtr make_two_ball_hull(Point c1, double r1, Point c2, double r2);

/// S + eps B: exact projection z + eps (x - z)/|x - z| with z = proj_S(x).
SetPtr make_dilation(SetPtr base, double eps);

/// A ∩ B(center, radius). The projection solves the one-multiplier
/// Lagrangian problem proj_A((x + lambda c)/(1 + lambda)) by bisection on
/// lambda, so it is exact up to tolerance rather than alternating.
SetPtr make_ball_intersection(SetPtr set, Point center, double radius,
                              const Tolerances& tol = default_tolerances());

using Membership = std::function<bool(const Point&)>;

/// Set given only by a membership predicate and a Slater point. Projections
/// are computed with outer cutting planes.
SetPtr make_generic_set(Membership membership, Point slater,
                        const Tolerances& tol = default_tolerances());

/// Metric projection through the oracle (delegates to S.project).
Point project_convex(const ConvexSet& set, const Point& x);

/// Stand-alone cutting-plane projection onto {membership} with Slater point.
///
/// Each iteration (a) bisects [slater, p] to a boundary point, (b) adds the
/// supporting halfspace from a finite-difference normal there, and
/// (c) projects x onto the polyhedron of accumulated cuts. Throws
/// NonConvergence after tol.max_iter cuts.
Point generic_projection_cutting_plane(const Membership& membership, const Point& slater,
                                       const Point& x,
                                       const Tolerances& tol = default_tolerances());

/// Dilation of S by eps. Same as make_dilation; named after the operation.
SetPtr dilate(SetPtr set, double eps);

}  // namespace sweepdescent
