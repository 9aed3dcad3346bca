#pragma once

// Brute-force reference computations. They only use membership tests and
// function values, never the projection or root-finding code under test.

#include <cmath>
#include <functional>
#include <numbers>
#include <vector>

#include "sweepdescent/convex_set.hpp"
#include "sweepdescent/function.hpp"

namespace oracle {

using sweepdescent::Point;

// Boundary point on the ray center + t*dir, by plain bisection on membership.
inline Point ray_boundary(const std::function<bool(const Point&)>& inside, const Point& center,
                          const Point& dir, double t_max) {
  double lo = 0.0, hi = t_max;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (inside(center + mid * dir)) lo = mid; else hi = mid;
  }
  return center + lo * dir;
}

// Dense angular sample of the boundary of a planar convex body.
inline std::vector<Point> planar_boundary(const std::function<bool(const Point&)>& inside,
                                          const Point& center, double t_max, int n) {
  std::vector<Point> out;
  out.reserve(n);
  for (int i = 0; i < n; ++i) {
    const double a = 2.0 * std::numbers::pi * i / n;
    Point dir(2);
    dir << std::cos(a), std::sin(a);
    out.push_back(ray_boundary(inside, center, dir, t_max));
  }
  return out;
}

inline Point nearest(const std::vector<Point>& pts, const Point& x) {
  Point best = pts.front();
  for (const auto& p : pts)
    if ((p - x).norm() < (best - x).norm()) best = p;
  return best;
}

// Nearest boundary sample for a point outside a planar convex body.
inline Point planar_projection(const sweepdescent::ConvexSet& s, const Point& x,
                               const Point& center, double t_max, int n = 20000) {
  if (s.contains(x)) return x;
  const auto pts = planar_boundary([&](const Point& p) { return s.contains(p); }, center,
                                   t_max, n);
  return nearest(pts, x);
}

// min f(x - w) over |w| <= eps: an n x n grid over the disk, then zoom
// twice around the best grid point.
inline double grid_min_ball(const sweepdescent::QuasiconvexFunction& f, const Point& x,
                            double eps, int n = 41) {
  double best = f.eval(x);
  Point best_w = Point::Zero(2);
  auto scan = [&](const Point& mid, double half) {
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        Point w(2);
        w << mid[0] - half + 2.0 * half * i / (n - 1), mid[1] - half + 2.0 * half * j / (n - 1);
        if (w.norm() > eps) w *= eps / w.norm();
        const double v = f.eval(x - w);
        if (v < best) { best = v; best_w = w; }
      }
  };
  scan(Point::Zero(2), eps);
  double half = eps;
  for (int zoom = 0; zoom < 4; ++zoom) {
    half *= 4.0 / (n - 1);
    scan(best_w, half);
  }
  return best;
}

// Largest forward difference quotient over a fine direction sweep at radius h.
inline double planar_slope(const sweepdescent::QuasiconvexFunction& f, const Point& x,
                           double h = 1e-6, int n = 3600) {
  const double fx = f.eval(x);
  double best = 0.0;
  for (int i = 0; i < n; ++i) {
    const double a = 2.0 * std::numbers::pi * i / n;
    Point y(2);
    y << x[0] + h * std::cos(a), x[1] + h * std::sin(a);
    best = std::max(best, (fx - f.eval(y)) / h);
  }
  return best;
}

// Forward flow of the norm from x0 (|x0| = alpha2 on the boundary) after
// level drop t: radial, x0 * (alpha2 - t) / alpha2.
inline Point radial_flow(const Point& x0, double t) {
  return x0 * (x0.norm() - t) / x0.norm();
}

// Flow of the tube sublevels co(B, (a,0)+B) for a point on the right unit
// cap centred at (a,0), written in the cap angle phi in (-pi/2, pi/2): the cap
// centre moves left at unit speed and the point follows the normal cone,
// which gives tan(phi/2) = tan(phi0/2) * exp(-t) (unit radius).
inline double tube_cap_angle(double phi0, double t, double radius = 1.0) {
  return 2.0 * std::atan(std::tan(0.5 * phi0) * std::exp(-t / radius));
}

}  // namespace oracle
