#include "sweepdescent/convex_set.hpp"

#include <algorithm>
#include <utility>
#include <vector>

#include <boost/math/tools/toms748_solve.hpp>

#include "polyhedral_projection.hpp"
#include "sweepdescent/errors.hpp"
#include "sweepdescent/geometry.hpp"

namespace sweepdescent {

std::string to_string(SetKind kind) {
  switch (kind) {
    case SetKind::analytic: return "analytic";
    case SetKind::generic_cutting_plane: return "generic-cutting-plane";
    case SetKind::dilated: return "dilated";
    case SetKind::intersection: return "intersection";
  }
  return "unknown";
}

namespace {

Point unit_axis(int d, int i = 0) {
  Point e = Point::Zero(d);
  e[i] = 1.0;
  return e;
}

// Golden-section maximization of a unimodal function on [a, b].
template <typename F>
double golden_max(F&& f, double a, double b, int iters) {
  const double g = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - g * (b - a), d = a + g * (b - a);
  double fc = f(c), fd = f(d);
  for (int i = 0; i < iters; ++i) {
    if (fc > fd) {
      b = d; d = c; fd = fc;
      c = b - g * (b - a); fc = f(c);
    } else {
      a = c; c = d; fc = fd;
      d = a + g * (b - a); fd = f(d);
    }
  }
  return fc > fd ? c : d;
}

}  // namespace

Point ConvexSet::nearest_boundary_point(const Point& x) const {
  if (!contains(x)) return project(x);
  const int d = dim();
  Point radial = x - interior_point();
  if (radial.norm() < 1e-14) radial = unit_axis(d);
  radial.normalize();
  const double t0 = ray_exit(*this, x, radial);
  if (t0 <= 1e-9) return x + t0 * radial;

  auto exit_along = [&](const Point& v) { return ray_exit(*this, x, v); };
  Point best_dir = radial;
  double best = t0;
  if (d == 2) {
    const int n = 360;
    int best_i = 0;
    for (int i = 0; i < n; ++i) {
      const double th = 2.0 * std::numbers::pi * i / n;
      const Point v = make_point({std::cos(th), std::sin(th)});
      const double t = exit_along(v);
      if (t < best) { best = t; best_dir = v; best_i = i; }
    }
    const double th0 = 2.0 * std::numbers::pi * best_i / n;
    const double step = 2.0 * std::numbers::pi / n;
    const double th = golden_max(
        [&](double a) { return -exit_along(make_point({std::cos(a), std::sin(a)})); },
        th0 - step, th0 + step, 60);
    const Point v = make_point({std::cos(th), std::sin(th)});
    const double t = exit_along(v);
    if (t < best) { best = t; best_dir = v; }
  } else {
    Rng rng(0x5eedULL, static_cast<std::uint64_t>(d));
    for (int i = 0; i < 64 * d; ++i) {
      const Point v = rng.unit_vector(d);
      const double t = exit_along(v);
      if (t < best) { best = t; best_dir = v; }
    }
    double sigma = 0.2;
    for (int it = 0; it < 200 && sigma > 1e-9; ++it) {
      Point v = best_dir + sigma * rng.unit_vector(d);
      v.normalize();
      const double t = exit_along(v);
      if (t < best) { best = t; best_dir = v; } else { sigma *= 0.8; }
    }
  }
  return x + best * best_dir;
}

double ConvexSet::depth(const Point& x) const {
  if (!contains(x)) return 0.0;
  if (!bounded()) {
    // Unbounded sets may have no boundary at all; the ray search decides.
    Point radial = x - interior_point();
    if (radial.norm() < 1e-14) radial = unit_axis(dim());
    if (!std::isfinite(ray_exit(*this, x, radial.normalized()))) return kInf;
  }
  return (x - nearest_boundary_point(x)).norm();
}

namespace {

class Ball final : public ConvexSet {
 public:
  Ball(Point c, double r) : c_(std::move(c)), r_(r) {}

  int dim() const override { return static_cast<int>(c_.size()); }
  SetKind kind() const override { return SetKind::analytic; }
  bool contains(const Point& x) const override { return (x - c_).norm() <= r_; }
  Point project(const Point& x) const override {
    const Point v = x - c_;
    const double n = v.norm();
    if (n <= r_) return x;
    return c_ + (r_ / n) * v;
  }
  double distance(const Point& x) const override {
    return std::max((x - c_).norm() - r_, 0.0);
  }
  Point interior_point() const override { return c_; }
  Point nearest_boundary_point(const Point& x) const override {
    const Point v = x - c_;
    const double n = v.norm();
    if (n > r_) return project(x);
    if (n < 1e-300) return c_ + r_ * unit_axis(dim());
    return c_ + (r_ / n) * v;
  }
  double bounding_radius() const override { return r_; }

 private:
  Point c_;
  double r_;
};

class WholeSpace final : public ConvexSet {
 public:
  explicit WholeSpace(int d) : d_(d) {}
  int dim() const override { return d_; }
  SetKind kind() const override { return SetKind::analytic; }
  bool contains(const Point&) const override { return true; }
  Point project(const Point& x) const override { return x; }
  double distance(const Point&) const override { return 0.0; }
  Point interior_point() const override { return Point::Zero(d_); }
  Point nearest_boundary_point(const Point&) const override {
    throw Unsupported("the whole space has no boundary");
  }
  double bounding_radius() const override { return kInf; }

 private:
  int d_;
};

// Convex hull of B(c1, r1) and B(c2, r2), i.e. the union over t in [0, 1] of
// B(c(t), r(t)) with c, r affine in t. Everything reduces to the half-plane
// spanned by the axis and the radial direction of the query point.
class TwoBallHull final : public ConvexSet {
 public:
  TwoBallHull(Point c1, double r1, Point c2, double r2)
      : c1_(std::move(c1)), c2_(std::move(c2)), r1_(r1), r2_(r2) {
    const Point axis = c2_ - c1_;
    len_ = axis.norm();
    degenerate_ = len_ <= std::abs(r1_ - r2_) || len_ < 1e-15;
    if (!degenerate_) {
      e_ = axis / len_;
      kappa_ = (r1_ - r2_) / len_;
      // Tangent normal of the conical band in (axial, radial) coordinates.
      na_ = kappa_;
      nr_ = std::sqrt(std::max(0.0, 1.0 - kappa_ * kappa_));
    }
    const bool first_big = r1_ >= r2_;
    big_c_ = first_big ? c1_ : c2_;
    big_r_ = first_big ? r1_ : r2_;
  }

  int dim() const override { return static_cast<int>(c1_.size()); }
  SetKind kind() const override { return SetKind::analytic; }

  bool contains(const Point& x) const override { return signed_gap(x) <= 0.0; }

  Point project(const Point& x) const override {
    if (degenerate_) return ball_project(big_c_, big_r_, x);
    const double t = optimal_t(x);
    const Point c = c1_ + t * len_ * e_;
    const double r = r1_ + t * (r2_ - r1_);
    return ball_project(c, r, x);
  }

  double distance(const Point& x) const override { return std::max(signed_gap(x), 0.0); }

  Point interior_point() const override { return big_c_; }

  double bounding_radius() const override {
    if (degenerate_) return big_r_;
    const bool first_big = r1_ >= r2_;
    const double small_r = first_big ? r2_ : r1_;
    return std::max(big_r_, len_ + small_r);
  }

  Point nearest_boundary_point(const Point& x) const override {
    if (!contains(x)) return project(x);
    if (degenerate_) {
      const Point v = x - big_c_;
      const double n = v.norm();
      if (n < 1e-300) return big_c_ + big_r_ * unit_axis(dim());
      return big_c_ + (big_r_ / n) * v;
    }
    const Point v = x - c1_;
    const double a = v.dot(e_);
    Point w = v - a * e_;
    double rho = w.norm();
    Point rho_dir;
    if (rho > 1e-14 * std::max(1.0, len_)) {
      rho_dir = w / rho;
    } else {
      rho = 0.0;
      rho_dir = orthogonal_complement(e_).col(0);
    }

    // Boundary profile in the (a, rho) half-plane: arc of circle 1 for angles
    // in [psi_n, pi], the tangent segment, arc of circle 2 for [0, psi_n].
    const double psi_n = std::atan2(nr_, na_);
    struct Cand { double a, r, dist; };
    Cand best{0.0, 0.0, kInf};
    auto consider = [&](double qa, double qr) {
      const double dist = std::hypot(qa - a, qr - rho);
      if (dist < best.dist) best = {qa, qr, dist};
    };
    auto arc = [&](double ca, double r, double lo, double hi) {
      const double da = a - ca, dr = rho;
      const double n = std::hypot(da, dr);
      if (n > 1e-300) {
        const double psi = std::atan2(dr, da);
        if (psi >= lo && psi <= hi) consider(ca + r * da / n, r * dr / n);
      }
      consider(ca + r * std::cos(lo), r * std::sin(lo));
      consider(ca + r * std::cos(hi), r * std::sin(hi));
    };
    arc(0.0, r1_, psi_n, std::numbers::pi);
    arc(len_, r2_, 0.0, psi_n);
    {
      const double pa = r1_ * na_, pr = r1_ * nr_;
      const double qa = len_ + r2_ * na_, qr = r2_ * nr_;
      const double sa = qa - pa, sr = qr - pr;
      const double ss = sa * sa + sr * sr;
      double s = ss > 0.0 ? ((a - pa) * sa + (rho - pr) * sr) / ss : 0.0;
      s = std::clamp(s, 0.0, 1.0);
      consider(pa + s * sa, pr + s * sr);
    }
    return c1_ + best.a * e_ + best.r * rho_dir;
  }

 private:
  static Point ball_project(const Point& c, double r, const Point& x) {
    const Point v = x - c;
    const double n = v.norm();
    if (n <= r) return x;
    return c + (r / n) * v;
  }

  // Minimizer over [0, 1] of |x - c(t)| - r(t), which is convex in t.
  double optimal_t(const Point& x) const {
    const Point v = x - c1_;
    const double a = v.dot(e_);
    const double rho = (v - a * e_).norm();
    const double u = kappa_ * rho / std::sqrt(std::max(1e-300, 1.0 - kappa_ * kappa_));
    return std::clamp((a - u) / len_, 0.0, 1.0);
  }

  double signed_gap(const Point& x) const {
    if (degenerate_) return (x - big_c_).norm() - big_r_;
    const double t = optimal_t(x);
    const Point c = c1_ + t * len_ * e_;
    const double r = r1_ + t * (r2_ - r1_);
    return (x - c).norm() - r;
  }

  Point c1_, c2_;
  double r1_, r2_;
  double len_ = 0.0;
  bool degenerate_ = true;
  Point e_;
  double kappa_ = 0.0, na_ = 0.0, nr_ = 1.0;
  Point big_c_;
  double big_r_ = 0.0;
};

class Dilation final : public ConvexSet {
 public:
  Dilation(SetPtr base, double eps) : base_(std::move(base)), eps_(eps) {}

  int dim() const override { return base_->dim(); }
  SetKind kind() const override { return SetKind::dilated; }
  bool contains(const Point& x) const override { return base_->distance(x) <= eps_; }
  Point project(const Point& x) const override {
    const Point z = base_->project(x);
    const double d = (x - z).norm();
    if (d <= eps_) return x;
    return z + (eps_ / d) * (x - z);
  }
  double distance(const Point& x) const override {
    return std::max(base_->distance(x) - eps_, 0.0);
  }
  Point interior_point() const override { return base_->interior_point(); }
  double bounding_radius() const override { return base_->bounding_radius() + eps_; }

  Point nearest_boundary_point(const Point& x) const override {
    const Point z = base_->project(x);
    const double d = (x - z).norm();
    if (d > eps_) return z + (eps_ / d) * (x - z);
    if (d > 0.0) return z + (eps_ / d) * (x - z);
    // x in the base set: push the base's nearest boundary point outwards.
    const Point b = base_->nearest_boundary_point(x);
    Point dir = b - x;
    if (dir.norm() > 1e-12) return b + (eps_ / dir.norm()) * dir;
    try {
      dir = outward_normal(*base_, b);
    } catch (const Error&) {
      dir = unit_axis(dim());
    }
    return b + eps_ * dir;
  }

  const SetPtr& base() const { return base_; }
  double eps() const { return eps_; }

 private:
  SetPtr base_;
  double eps_;
};

class BallIntersection final : public ConvexSet {
 public:
  BallIntersection(SetPtr set, Point c, double r, const Tolerances& tol)
      : set_(std::move(set)), ball_(std::make_shared<Ball>(c, r)), c_(std::move(c)), r_(r),
        tol_(tol) {
    const Point pc = set_->project(c_);
    const double gap = (pc - c_).norm();
    if (gap > r_) throw EmptySublevel("intersection with the ball is empty");
    // Slater point: walk from proj_A(c) towards A's interior point while
    // staying well inside the ball.
    const Point q = set_->interior_point();
    const double target = r_ - 0.5 * (r_ - gap);
    interior_ = pc;
    for (double t = 1.0; t > 1e-12; t *= 0.5) {
      const Point p = pc + t * (q - pc);
      if ((p - c_).norm() <= target) {
        interior_ = p;
        break;
      }
    }
  }

  int dim() const override { return static_cast<int>(c_.size()); }
  SetKind kind() const override { return SetKind::intersection; }
  bool contains(const Point& x) const override {
    return (x - c_).norm() <= r_ && set_->contains(x);
  }

  Point project(const Point& x) const override {
    const Point p = set_->project(x);
    if ((p - c_).norm() <= r_) return p;
    const Point q = ball_->project(x);
    if (set_->contains(q)) return q;
    // The ball constraint is active: p(mu) = proj_A((1 - mu) x + mu c) with
    // |p(mu) - c| nonincreasing in mu. Solve |p(mu) - c| = r.
    auto gap = [&](double mu) {
      const Point y = (1.0 - mu) * x + mu * c_;
      const Point pm = set_->project(y);
      return std::pair{pm, (pm - c_).norm() - r_};
    };
    const double g_lo = gap(0.0).second;
    auto [p_hi, g_hi] = gap(1.0);
    if (g_hi > 0.0) throw EmptySublevel("intersection with the ball is empty");
    if (g_hi < 0.0 && g_lo > 0.0) {
      auto done = [](double a, double b) { return b - a <= 1e-16; };
      std::uintmax_t iters = 100;
      const auto bracket = boost::math::tools::toms748_solve(
          [&](double mu) { return gap(mu).second; }, 0.0, 1.0, g_lo, g_hi, done, iters);
      // Keep the feasible end of the bracket.
      for (double mu : {bracket.second, bracket.first}) {
        auto [pm, gm] = gap(mu);
        if (gm <= 0.0) {
          p_hi = pm;
          break;
        }
      }
    }
    return p_hi;
  }

  Point interior_point() const override { return interior_; }
  double bounding_radius() const override { return r_ + (interior_ - c_).norm(); }

  Point nearest_boundary_point(const Point& x) const override {
    if (!contains(x)) return project(x);
    const Point a = set_->nearest_boundary_point(x);
    const Point b = ball_->nearest_boundary_point(x);
    return (a - x).norm() <= (b - x).norm() ? a : b;
  }

 private:
  SetPtr set_;
  std::shared_ptr<const Ball> ball_;
  Point c_;
  double r_;
  Tolerances tol_;
  Point interior_;
};

class GenericSet final : public ConvexSet {
 public:
  GenericSet(Membership membership, Point slater, const Tolerances& tol)
      : inside_(std::move(membership)), slater_(std::move(slater)), tol_(tol) {
    if (!inside_(slater_)) throw DomainError("generic set: Slater point is not a member");
    // Radius estimate from ray exits along coordinate and diagonal directions.
    const int d = dim();
    double r = 0.0;
    Rng rng(0xb0b0ULL, static_cast<std::uint64_t>(d));
    for (int i = 0; i < 2 * d + 16; ++i) {
      Point v = i < 2 * d ? Point((i % 2 ? -1.0 : 1.0) * unit_axis(d, i / 2))
                          : rng.unit_vector(d);
      r = std::max(r, ray_exit(inside_, slater_, v));
    }
    radius_ = r;
  }

  int dim() const override { return static_cast<int>(slater_.size()); }
  SetKind kind() const override { return SetKind::generic_cutting_plane; }
  bool contains(const Point& x) const override { return inside_(x); }
  Point project(const Point& x) const override {
    return generic_projection_cutting_plane(inside_, slater_, x, tol_);
  }
  Point interior_point() const override { return slater_; }
  double bounding_radius() const override { return radius_; }

 private:
  Membership inside_;
  Point slater_;
  Tolerances tol_;
  double radius_ = kInf;
};

// Boundary point on [inner, outer] with inner inside and outer outside.
Point segment_boundary(const Membership& inside, const Point& inner, const Point& outer) {
  double lo = 0.0, hi = 1.0;
  for (int it = 0; it < 200 && hi - lo > 1e-16; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (inside(inner + mid * (outer - inner))) lo = mid; else hi = mid;
  }
  return inner + lo * (outer - inner);
}

}  // namespace

SetPtr make_ball(Point center, double radius) {
  if (!(radius >= 0.0)) throw DomainError("ball radius must be nonnegative");
  return std::make_shared<Ball>(std::move(center), radius);
}

SetPtr make_whole_space(int dim) { return std::make_shared<WholeSpace>(dim); }

SetPtr make_two_ball_hull(Point c1, double r1, Point c2, double r2) {
  if (c1.size() != c2.size()) throw DomainError("two-ball hull: dimension mismatch");
  return std::make_shared<TwoBallHull>(std::move(c1), r1, std::move(c2), r2);
}

SetPtr make_dilation(SetPtr base, double eps) {
  if (!(eps > 0.0)) throw DomainError("dilation radius must be positive");
  return std::make_shared<Dilation>(std::move(base), eps);
}

SetPtr dilate(SetPtr set, double eps) { return make_dilation(std::move(set), eps); }

SetPtr make_ball_intersection(SetPtr set, Point center, double radius, const Tolerances& tol) {
  return std::make_shared<BallIntersection>(std::move(set), std::move(center), radius, tol);
}

SetPtr make_generic_set(Membership membership, Point slater, const Tolerances& tol) {
  return std::make_shared<GenericSet>(std::move(membership), std::move(slater), tol);
}

Point project_convex(const ConvexSet& set, const Point& x) { return set.project(x); }

Point generic_projection_cutting_plane(const Membership& inside, const Point& slater,
                                       const Point& x, const Tolerances& tol) {
  if (inside(x)) return x;
  if (!inside(slater)) throw DomainError("cutting plane: Slater point is not a member");
  const int d = static_cast<int>(x.size());
  Eigen::MatrixXd A(0, d);
  Eigen::VectorXd b(0);
  Point p = x;
  for (int it = 0; it < tol.max_iter; ++it) {
    const Point q = segment_boundary(inside, slater, p);
    const Point n = fd_boundary_normal(inside, slater, q, tol.fd_step);
    A.conservativeResize(A.rows() + 1, Eigen::NoChange);
    b.conservativeResize(b.size() + 1);
    A.row(A.rows() - 1) = n.transpose();
    b[b.size() - 1] = n.dot(q);

    const Point next = detail::project_onto_polyhedron(A, b, x);
    if (inside(next)) return next;
    if ((next - p).norm() < tol.projection) return segment_boundary(inside, slater, next);
    p = next;
  }
  throw NonConvergence("cutting-plane projection did not reach tolerance within " +
                       std::to_string(tol.max_iter) + " cuts");
}

}  // namespace sweepdescent
