#include "sweepdescent/slope.hpp"

#include <algorithm>
#include <cmath>

#include "sweepdescent/errors.hpp"
#include "sweepdescent/geometry.hpp"
#include "sweepdescent/parallel.hpp"

namespace sweepdescent {

namespace {

struct Probe {
  const QuasiconvexFunction& f;
  const Point& x;
  double fx;
  double rho;

  double operator()(const Point& v) const {
    const double fy = f.eval(x + rho * v);
    if (!std::isfinite(fy)) return 0.0;
    return std::max(0.0, fx - fy) / rho;
  }
};

Point angle_dir(double th) { return make_point({std::cos(th), std::sin(th)}); }

// Golden-section maximization of q(angle) on [lo, hi].
double golden_angle(const Probe& q, double lo, double hi, double best) {
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  double a = lo, b = hi;
  double c = b - g * (b - a), d = a + g * (b - a);
  double qc = q(angle_dir(c)), qd = q(angle_dir(d));
  for (int it = 0; it < 60 && b - a > 1e-12; ++it) {
    if (qc >= qd) {
      b = d; d = c; qd = qc;
      c = b - g * (b - a); qc = q(angle_dir(c));
    } else {
      a = c; c = d; qc = qd;
      d = a + g * (b - a); qd = q(angle_dir(d));
    }
  }
  return std::max({best, qc, qd});
}

// Compass search on the sphere around v.
double pattern_search(const Probe& q, Point v, double best) {
  const int d = static_cast<int>(v.size());
  double step = 0.25;
  int evals = 0;
  while (step > 1e-7 && evals < 4000) {
    bool improved = false;
    const Eigen::MatrixXd tangents = orthogonal_complement(v);
    for (int i = 0; i < d - 1 && !improved; ++i) {
      for (double sgn : {1.0, -1.0}) {
        const Point w = (v + sgn * step * tangents.col(i)).normalized();
        const double val = q(w);
        ++evals;
        if (val > best) {
          best = val;
          v = w;
          improved = true;
          break;
        }
      }
    }
    if (!improved) step *= 0.5;
  }
  return best;
}

}  // namespace

SlopeEstimate slope(const QuasiconvexFunction& f, const Point& x, const SlopeOptions& opts) {
  SlopeEstimate out;
  const int d = static_cast<int>(x.size());
  const int n = opts.directions > 0 ? opts.directions : (d == 2 ? 64 : 32 * d);
  out.directions_per_radius = n;
  out.radii_used = opts.radii;
  const double fx = f.eval(x);
  if (!std::isfinite(fx)) {
    out.outside_domain = true;
    out.value = kInf;
    return out;
  }
  const std::size_t nr = opts.radii.size();
  for (std::size_t r = 0; r < nr; ++r) {
    const Probe q{f, x, fx, opts.radii[r]};
    Rng rng(opts.seed, 0x51097e00ULL + r);
    double best = 0.0;
    Point best_v;
    double best_th = 0.0;
    if (d == 2) {
      const double offset = rng.uniform() * 2.0 * std::numbers::pi / n;
      for (int i = 0; i < n; ++i) {
        const double th = offset + 2.0 * std::numbers::pi * i / n;
        const double val = q(angle_dir(th));
        if (val > best || i == 0) { best = val; best_th = th; }
      }
    } else {
      for (int i = 0; i < n; ++i) {
        const Point v = rng.unit_vector(d);
        const double val = q(v);
        if (val > best || i == 0) { best = val; best_v = v; }
      }
    }
    if (opts.refine && r + 2 >= nr && best > 0.0) {
      if (d == 2) {
        const double w = 2.0 * std::numbers::pi / n;
        best = golden_angle(q, best_th - w, best_th + w, best);
      } else if (d > 2) {
        best = pattern_search(q, best_v, best);
      }
    }
    out.per_radius.push_back(best);
  }
  const double a = out.per_radius[nr - 1];
  const double b = nr >= 2 ? out.per_radius[nr - 2] : a;
  out.value = std::max(a, b);
  out.scale_disagreement = std::abs(a - b) > opts.disagreement * out.value && out.value > 0.0;
  return out;
}

double limiting_slope(const QuasiconvexFunction& f, const Point& x,
                      const LimitingSlopeOptions& opts) {
  const double fx = f.eval(x);
  if (!std::isfinite(fx)) return kInf;
  SlopeOptions so = opts.slope;
  double best = slope(f, x, so).value;
  Rng rng(opts.seed, 0x11a17ULL);
  const int d = static_cast<int>(x.size());
  int accepted = 0;
  for (int attempt = 0; accepted < opts.samples && attempt < 50 * opts.samples; ++attempt) {
    // Uniform in the ball: radius ~ u^(1/d).
    const Point y =
        x + opts.outer_radius * std::pow(rng.uniform(), 1.0 / d) * rng.unit_vector(d);
    const double fy = f.eval(y);
    if (!std::isfinite(fy) || std::abs(fy - fx) > opts.value_window) continue;
    ++accepted;
    so.seed = derive_seed(opts.slope.seed, static_cast<std::uint64_t>(accepted));
    best = std::min(best, slope(f, y, so).value);
  }
  return best;
}

bool is_critical(const QuasiconvexFunction& f, const Point& x, double tol,
                 const LimitingSlopeOptions& opts) {
  return limiting_slope(f, x, opts) <= tol;
}

SlopeBound check_h2_region(const QuasiconvexFunction& f, const Box& region, int grid,
                           const SlopeOptions& opts, double min_slope) {
  const int d = region.dim();
  if (grid < 2) throw DomainError("check_h2_region: grid needs at least 2 points per axis");
  std::size_t total = 1;
  for (int i = 0; i < d; ++i) total *= static_cast<std::size_t>(grid);
  auto point_of = [&](std::size_t idx) {
    Point p(d);
    for (int i = 0; i < d; ++i) {
      const auto k = static_cast<double>(idx % static_cast<std::size_t>(grid));
      idx /= static_cast<std::size_t>(grid);
      p[i] = region.lo[i] + (region.hi[i] - region.lo[i]) * k / (grid - 1);
    }
    return p;
  };
  std::vector<double> values(total);
  parallel_for(total, [&](std::size_t i) { values[i] = slope(f, point_of(i), opts).value; });

  SlopeBound out;
  out.ell_hat = kInf;
  for (std::size_t i = 0; i < total; ++i) {
    if (!std::isfinite(values[i])) {
      ++out.skipped;
      continue;
    }
    ++out.points;
    out.max_slope = std::max(out.max_slope, values[i]);
    if (values[i] < out.ell_hat) {
      out.ell_hat = values[i];
      out.witness = point_of(i);
    }
    // Neighbour along each axis (stride grid^axis).
    std::size_t stride = 1;
    for (int ax = 0; ax < d; ++ax) {
      const std::size_t coord = (i / stride) % static_cast<std::size_t>(grid);
      if (coord + 1 < static_cast<std::size_t>(grid)) {
        const double a = values[i], b = values[i + stride];
        if (std::isfinite(b) && std::abs(a - b) > 0.5 * std::max(a, b)) out.grid_too_coarse = true;
      }
      stride *= static_cast<std::size_t>(grid);
    }
  }
  if (out.points == 0) throw EmptySample("check_h2_region: no grid point inside dom f");
  out.pass = out.ell_hat > min_slope;
  return out;
}

SlopeBound annulus_slope_bound(const QuasiconvexFunction& f, double alpha1, double alpha2,
                               int n_levels, double resolution, const SlopeOptions& opts,
                               double min_slope) {
  if (!(alpha2 > alpha1) || n_levels < 1) throw DomainError("annulus_slope_bound: empty window");
  std::vector<Point> pts;
  for (int i = 0; i < n_levels; ++i) {
    const double beta =
        n_levels == 1 ? alpha2 : alpha1 + (alpha2 - alpha1) * i / (n_levels - 1);
    const BoundarySample s = sample_boundary(f.sublevel(beta), resolution, opts.seed);
    for (const Point& b : s.points) {
      const double fb = f.eval(b);
      if (fb >= alpha1 - 1e-9 && fb <= alpha2 + 1e-9) pts.push_back(b);
    }
  }
  std::vector<double> values(pts.size());
  parallel_for(pts.size(), [&](std::size_t i) { values[i] = slope(f, pts[i], opts).value; });

  SlopeBound out;
  out.ell_hat = kInf;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (!std::isfinite(values[i])) {
      ++out.skipped;
      continue;
    }
    ++out.points;
    out.max_slope = std::max(out.max_slope, values[i]);
    if (values[i] < out.ell_hat) {
      out.ell_hat = values[i];
      out.witness = pts[i];
    }
    if (i > 0 && std::isfinite(values[i - 1]) && (pts[i] - pts[i - 1]).norm() <= 2.0 * resolution &&
        std::abs(values[i] - values[i - 1]) > 0.5 * std::max(values[i], values[i - 1]))
      out.grid_too_coarse = true;
  }
  if (out.points == 0) throw EmptySample("annulus_slope_bound: no sample in the annulus");
  out.pass = out.ell_hat > min_slope;
  return out;
}

PointCheck aze_corvellec_check(const QuasiconvexFunction& f, const Box& region, double alpha,
                               double ell_hat, int samples, std::uint64_t seed, double tol,
                               double f_max) {
  if (!(ell_hat > 0.0)) throw DomainError("aze_corvellec_check: slope bound must be positive");
  const SetPtr target = f.sublevel(alpha);
  PointCheck out;
  Rng rng(seed, 0xa2eULL);
  for (int i = 0; i < samples; ++i) {
    const Point x = region.sample(rng);
    const double fx = f.eval(x);
    if (!std::isfinite(fx) || fx > f_max) continue;
    ++out.samples;
    const double margin = std::max(0.0, fx - alpha) / ell_hat + tol - target->distance(x);
    if (margin < out.worst_margin) out.worst_margin = margin;
    if (margin < 0.0 && out.pass) {
      out.pass = false;
      out.witness = x;
    }
  }
  return out;
}

}  // namespace sweepdescent
