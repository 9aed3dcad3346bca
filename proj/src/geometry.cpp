#include "sweepdescent/geometry.hpp"

#include <algorithm>
#include <cmath>

#include "sweepdescent/errors.hpp"

namespace sweepdescent {

double BoundarySample::distance_to(const Point& x) const {
  if (set) return set->distance(x);
  double best = kInf;
  for (const Point& p : points) best = std::min(best, (x - p).norm());
  return best;
}

Eigen::MatrixXd orthogonal_complement(const Point& v) {
  const Eigen::Index d = v.size();
  Eigen::HouseholderQR<Eigen::MatrixXd> qr{Eigen::MatrixXd(v)};
  const Eigen::MatrixXd Q = qr.householderQ() * Eigen::MatrixXd::Identity(d, d);
  return Q.rightCols(d - 1);
}

double ray_exit(const Membership& inside, const Point& origin, const Point& direction,
                double scale_hint) {
  double lo = 0.0;
  double hi = std::max(scale_hint, 1e-6);
  int doublings = 0;
  while (inside(origin + hi * direction)) {
    lo = hi;
    hi *= 2.0;
    if (++doublings > 80) return kInf;
  }
  for (int it = 0; it < 200 && hi - lo > 1e-15 * std::max(hi, 1e-3); ++it) {
    const double mid = 0.5 * (lo + hi);
    if (inside(origin + mid * direction)) lo = mid; else hi = mid;
  }
  return lo;
}

double ray_exit(const ConvexSet& set, const Point& origin, const Point& direction) {
  const double r = set.bounding_radius();
  const double hint = std::isfinite(r) ? std::max(r, 1e-6) : 1.0;
  return ray_exit([&set](const Point& p) { return set.contains(p); }, origin, direction, hint);
}

Point fd_boundary_normal(const Membership& inside, const Point& interior, const Point& b,
                         double h) {
  const int d = static_cast<int>(b.size());
  const Point radial = b - interior;
  const double rn = radial.norm();
  if (rn < 1e-14) throw DegenerateNormal("boundary point coincides with the interior point");
  const Eigen::MatrixXd tangents = orthogonal_complement(radial / rn);

  auto boundary_through = [&](const Point& target) {
    Point dir = target - interior;
    const double len = dir.norm();
    dir /= len;
    return Point(interior + ray_exit(inside, interior, dir, len) * dir);
  };

  Eigen::MatrixXd diffs(d - 1, d);
  for (int i = 0; i < d - 1; ++i) {
    const Point t = tangents.col(i);
    diffs.row(i) = (boundary_through(b + h * t) - boundary_through(b - h * t)).transpose();
  }
  Point n;
  if (d == 1) {
    n = radial / rn;
  } else if (d == 2) {
    n = make_point({diffs(0, 1), -diffs(0, 0)});
  } else {
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(diffs, Eigen::ComputeFullV);
    n = svd.matrixV().col(d - 1);
  }
  const double nn = n.norm();
  if (!(nn > 0.0)) throw DegenerateNormal("finite-difference normal vanished");
  n /= nn;
  if (n.dot(radial) < 0.0) n = -n;
  return n;
}

BoundarySample sample_boundary(SetPtr set, double resolution, std::uint64_t seed) {
  if (!set->bounded()) throw UnboundedSet("cannot sample the boundary of an unbounded set");
  if (!(resolution > 0.0)) throw DomainError("boundary resolution must be positive");
  const int d = set->dim();
  const Point c = set->interior_point();
  auto on_ray = [&](const Point& v) { return Point(c + ray_exit(*set, c, v) * v); };

  std::vector<Point> raw;
  if (d == 2) {
    auto dir = [](double th) { return make_point({std::cos(th), std::sin(th)}); };
    const int n0 = 64;
    std::vector<std::pair<double, Point>> pts;
    for (int i = 0; i <= n0; ++i) {
      const double th = 2.0 * std::numbers::pi * i / n0;
      pts.emplace_back(th, on_ray(dir(th)));
    }
    // Subdivide until consecutive boundary points are within the resolution.
    for (int pass = 0; pass < 40; ++pass) {
      std::vector<std::pair<double, Point>> next;
      bool refined = false;
      for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
        next.push_back(pts[i]);
        if ((pts[i].second - pts[i + 1].second).norm() > resolution &&
            pts[i + 1].first - pts[i].first > 1e-12) {
          const double th = 0.5 * (pts[i].first + pts[i + 1].first);
          next.emplace_back(th, on_ray(dir(th)));
          refined = true;
        }
      }
      next.push_back(pts.back());
      pts.swap(next);
      if (!refined) break;
    }
    pts.pop_back();  // angle 2*pi duplicates angle 0
    for (auto& [th, p] : pts) raw.push_back(std::move(p));
  } else {
    const double r = set->bounding_radius();
    const double ratio = std::max(1.0, r / resolution);
    const double count = std::clamp(4.0 * std::pow(ratio, d - 1), 256.0, 200000.0);
    Rng rng(seed, 0xb0bULL);
    for (int i = 0; i < static_cast<int>(count); ++i) raw.push_back(on_ray(rng.unit_vector(d)));
  }

  BoundarySample out;
  out.resolution = resolution;
  out.set = set;
  const double min_gap = 0.5 * resolution;
  for (Point& p : raw) {
    bool duplicate = false;
    if (d == 2) {
      duplicate = !out.points.empty() && (out.points.back() - p).norm() < min_gap;
    } else {
      for (const Point& q : out.points)
        if ((q - p).norm() < min_gap) { duplicate = true; break; }
    }
    if (!duplicate) out.points.push_back(std::move(p));
  }
  if (d == 2 && out.points.size() > 2 &&
      (out.points.front() - out.points.back()).norm() < min_gap)
    out.points.pop_back();
  return out;
}

double hausdorff_distance(const BoundarySample& a, const BoundarySample& b) {
  if (a.points.empty() || b.points.empty()) throw EmptySample("Hausdorff distance of an empty sample");
  double ab = 0.0, ba = 0.0;
  for (const Point& p : a.points) ab = std::max(ab, b.distance_to(p));
  for (const Point& p : b.points) ba = std::max(ba, a.distance_to(p));
  return std::max(ab, ba);
}

Point outward_normal(const ConvexSet& set, const Point& b, const Tolerances& tol) {
  if (set.distance(b) > tol.boundary || set.depth(b) > tol.boundary)
    throw DomainError("outward_normal: point is not on the boundary");
  const Membership inside = [&set](const Point& p) { return set.contains(p); };
  const double h = tol.fd_step;
  const Point n0 = fd_boundary_normal(inside, set.interior_point(), b, h);

  auto probe_normal = [&](const Point& dir) {
    const Point x = b + h * dir;
    const Point v = x - set.project(x);
    const double len = v.norm();
    if (len < 1e-3 * h) throw DegenerateNormal("exterior probe projected onto itself");
    return Point(v / len);
  };
  const Point n1 = probe_normal(n0);

  // Tilted probes: on a smooth boundary their normals stay within ~h/R of n1,
  // at a corner they follow the tilt.
  const double tilt = 0.5;
  const int d = static_cast<int>(b.size());
  if (d > 1) {
    const Eigen::MatrixXd tangents = orthogonal_complement(n0);
    for (int i = 0; i < d - 1; ++i) {
      for (double sgn : {-1.0, 1.0}) {
        const Point dir = (n0 + sgn * tilt * tangents.col(i)).normalized();
        const Point ni = probe_normal(dir);
        const double angle = std::acos(std::clamp(ni.dot(n1), -1.0, 1.0));
        if (angle > 0.5 * tilt)
          throw DegenerateNormal("normal cone is not a ray (corner point)");
      }
    }
  }
  return n1;
}

double boundary_distance(const ConvexSet& set, const Point& x) {
  if (!set.contains(x)) return set.distance(x);
  return set.depth(x);
}

}  // namespace sweepdescent
