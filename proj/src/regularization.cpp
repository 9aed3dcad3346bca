#include "sweepdescent/regularization.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <boost/math/tools/toms748_solve.hpp>

#include "sweepdescent/errors.hpp"
#include "sweepdescent/geometry.hpp"
#include "sweepdescent/parallel.hpp"

namespace sweepdescent {

RegularizedFunction::RegularizedFunction(FunctionPtr base, double eps, const Tolerances& tol)
    : base_(std::move(base)), eps_(eps), tol_(tol) {
  if (!(eps_ > 0.0)) throw DomainError("regularize: epsilon must be positive");
  domain_ = make_dilation(base_->domain(), eps_);
}

std::string RegularizedFunction::name() const {
  std::ostringstream os;
  os << base_->name() << "@eps=" << eps_;
  return os.str();
}

double RegularizedFunction::eval(const Point& x) const { return eval_regularized(*this, x); }

SetPtr RegularizedFunction::sublevel(double alpha) const {
  return make_dilation(base_->sublevel(alpha), eps_);
}

RegularizedPtr regularize(FunctionPtr f, double eps) {
  return std::make_shared<RegularizedFunction>(std::move(f), eps);
}

namespace {

// Finite value of f at a point of dom f within eps of x, or +inf.
double upper_level(const QuasiconvexFunction& f, const Point& x, double eps) {
  const double fx = f.eval(x);
  if (std::isfinite(fx)) return fx;
  const SetPtr dom = f.domain();
  Point p = dom->project(x);
  if ((x - p).norm() > eps + kDomainSlack) return kInf;
  // Rounding can leave the projection a hair outside; nudge it inwards.
  const Point c = dom->interior_point();
  for (double t = 1e-14; t < 1e-3; t *= 4.0) {
    const double fp = f.eval(p);
    if (std::isfinite(fp)) return fp;
    p = p + t * (c - p);
  }
  return kInf;
}

}  // namespace

double eval_regularized(const RegularizedFunction& fe, const Point& x) {
  const QuasiconvexFunction& f = *fe.base();
  const double eps = fe.epsilon();
  double hi = upper_level(f, x, eps);
  if (!std::isfinite(hi)) return kInf;

  // g(alpha) = d(x, [f <= alpha]) - eps is nonincreasing in alpha.
  auto g = [&](double alpha) {
    try {
      return f.sublevel(alpha)->distance(x) - eps;
    } catch (const EmptySublevel&) {
      return kInf;
    }
  };

  double lo = f.inf_value();
  if (!std::isfinite(lo)) {
    double step = 1.0;
    lo = hi - step;
    while (g(lo) <= 0.0) {
      step *= 2.0;
      lo = hi - step;
      if (step > 1e12) throw BisectionFailure("regularized eval: no lower bracket found");
    }
  }
  if (lo >= hi) return hi;
  const double g_lo = g(lo);
  if (g_lo <= 0.0) return lo;
  const double g_hi = g(hi);
  if (g_hi > fe.tolerances().boundary)
    throw BisectionFailure("regularized eval: distance map is not monotone in the level");
  if (g_hi > 0.0) return hi;

  double root = hi;
  if (g_hi < 0.0) {
    const double tol = 1e-13 * std::max(1.0, std::abs(hi));
    auto done = [tol](double a, double b) { return b - a <= tol; };
    // g may be +inf just below the infimum; clamp so the solver sees finite values.
    auto gf = [&](double alpha) { return std::min(g(alpha), 1e300); };
    std::uintmax_t iters = 200;
    const auto bracket = boost::math::tools::toms748_solve(gf, lo, hi, std::min(g_lo, 1e300), g_hi,
                                                           done, iters);
    root = bracket.second;
    if (g(root) > 0.0) root = hi;  // keep the end with d <= eps
    if (g(bracket.first) < -fe.tolerances().boundary)
      throw BisectionFailure("regularized eval: inconsistent bracket signs");
  }
  // Flat stretches of the distance map (nearest points on faces where f stays
  // below the level) leave the root ambiguous; f at the nearest point is a
  // valid upper bound there and pins the smallest level.
  const Point z = f.sublevel(root)->project(x);
  const double fz = f.eval(z);
  if (std::isfinite(fz) && fz < root && fz >= lo) root = fz;
  return root;
}

Point base_point(const RegularizedFunction& fe, const Point& x) {
  const double level = fe.eval(x);
  if (!std::isfinite(level)) throw DomainError("base_point: x is outside dom f_eps");
  return fe.base()->sublevel(level)->project(x);
}

ValueComparison semigroup_check(FunctionPtr f, double e1, double e2, const Point& x,
                                double tol) {
  const auto once = regularize(f, e1 + e2);
  const auto twice = regularize(regularize(f, e1), e2);
  ValueComparison out;
  out.lhs = once->eval(x);
  out.rhs = twice->eval(x);
  out.pass = (std::isinf(out.lhs) && std::isinf(out.rhs)) || std::abs(out.lhs - out.rhs) <= tol;
  return out;
}

ValueComparison slope_inequality_check(FunctionPtr f, double eps, const Point& x, double tol,
                                       const SlopeOptions& opts) {
  const auto fe = regularize(f, eps);
  const double level = fe->eval(x);
  if (!(level > f->inf_value()))
    throw DomainError("slope_inequality_check: f_eps(x) must exceed inf f");
  const Point z = base_point(*fe, x);
  ValueComparison out;
  out.lhs = slope(*fe, x, opts).value;
  out.rhs = slope(*f, z, opts).value;
  out.pass = out.lhs >= out.rhs - tol;
  return out;
}

Point complement_projection(const RegularizedFunction& fe, double alpha, const Point& x) {
  const double eps = fe.epsilon();
  const SetPtr base = fe.base()->sublevel(alpha);
  if (base->contains(x))
    throw OutOfReach("complement projection: point lies in the base sublevel set");
  const Point z = base->project(x);
  const double d = (x - z).norm();
  if (d >= eps) return x;
  if (d < fe.tolerances().projection)
    throw DegenerateDirection("complement projection: point too close to the base set");
  return z + (eps / d) * (x - z);
}

namespace {

// Smallest secant/normal ratio and the pair attaining it.
std::pair<double, std::pair<std::size_t, std::size_t>> pairwise_radius(
    const std::vector<Point>& pts, const std::vector<Point>& normals) {
  const std::size_t n = pts.size();
  std::vector<double> best(n, kInf);
  std::vector<std::size_t> partner(n, 0);
  parallel_for(n, [&](std::size_t i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      const Point diff = pts[i] - pts[j];
      const double num = diff.squaredNorm();
      const double den = 2.0 * normals[i].dot(diff);
      if (den > 0.0 && num > 0.0 && num / den < best[i]) {
        best[i] = num / den;
        partner[i] = j;
      }
    }
  });
  const auto it = std::min_element(best.begin(), best.end());
  const auto i = static_cast<std::size_t>(it - best.begin());
  return {*it, {i, partner[i]}};
}

ProxRadiusEstimate estimate_at(const SetPtr& set, double spacing, std::uint64_t seed) {
  const BoundarySample sample = sample_boundary(set, spacing, seed);
  std::vector<Point> pts, normals;
  ProxRadiusEstimate out;
  out.spacing = spacing;
  for (const Point& b : sample.points) {
    try {
      normals.push_back(outward_normal(*set, b));
      pts.push_back(b);
    } catch (const DegenerateNormal&) {
      ++out.corners;
    } catch (const DomainError&) {
      ++out.corners;
    }
  }
  out.sample_count = static_cast<int>(pts.size());
  if (pts.size() < 3) throw EmptySample("prox radius: too few boundary samples with normals");
  const auto [r, pair] = pairwise_radius(pts, normals);
  out.r_hat = r;
  out.witness = {pts[pair.first], pts[pair.second]};
  return out;
}

}  // namespace

ProxRadiusEstimate prox_radius_estimate(SetPtr set, int n_samples, std::uint64_t seed) {
  if (n_samples < 8) throw DomainError("prox radius: need at least 8 samples");
  const double R = set->bounding_radius();
  if (!std::isfinite(R)) throw UnboundedSet("prox radius: set is unbounded");
  const double coarse = 2.0 * std::numbers::pi * R / n_samples;
  ProxRadiusEstimate est = estimate_at(set, coarse, seed);
  const double fine = std::max(est.r_hat / 20.0, 1e-3 * R);
  if (fine < coarse) {
    const int corners = est.corners;
    est = estimate_at(set, fine, seed);
    est.corners = std::max(est.corners, corners);
  }
  return est;
}

ProxRadiusEstimate prox_radius_estimate(const QuasiconvexFunction& f, double alpha,
                                        int n_samples, std::uint64_t seed) {
  ProxRadiusEstimate est = prox_radius_estimate(f.sublevel(alpha), n_samples, seed);
  est.level = alpha;
  return est;
}

}  // namespace sweepdescent
