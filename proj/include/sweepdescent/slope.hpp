#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "sweepdescent/function.hpp"

namespace sweepdescent {

struct SlopeOptions {
  /// Probe radii, strictly decreasing.
  std::vector<double> radii{1e-2, 1e-3, 1e-4, 1e-5};
  /// Directions per radius; 0 selects 64 in d = 2 and 32*d otherwise.
  int directions = 0;
  std::uint64_t seed = 0;
  /// Refine the best sampled direction at the two smallest radii.
  bool refine = true;
  /// Relative disagreement between the two smallest radii that raises
  /// SlopeEstimate::scale_disagreement.
  double disagreement = 0.2;
};

struct SlopeEstimate {
  double value = 0.0;
  std::vector<double> radii_used;
  int directions_per_radius = 0;
  /// Best difference quotient found at each radius.
  std::vector<double> per_radius;
  /// x is outside dom f; value is +inf by convention.
  bool outside_domain = false;
  bool scale_disagreement = false;
};

/// Metric slope limsup_{y->x} (f(x) - f(y))^+ / |x - y|, estimated by
/// maximizing the difference quotient over sampled directions at each radius
/// and taking the max over the two smallest radii.
SlopeEstimate slope(const QuasiconvexFunction& f, const Point& x,
                    const SlopeOptions& opts = {});

struct LimitingSlopeOptions {
  double outer_radius = 1e-2;
  /// Only neighbours with |f(y) - f(x)| <= value_window are used.
  double value_window = 1e-2;
  int samples = 128;
  std::uint64_t seed = 0;
  SlopeOptions slope{.refine = false};
};

/// Limiting slope: min of the slope over x and seeded neighbours y with
/// |y - x| <= outer_radius and f(y) close to f(x). +inf outside dom f.
double limiting_slope(const QuasiconvexFunction& f, const Point& x,
                      const LimitingSlopeOptions& opts = {});

/// limiting_slope(f, x) <= tol.
bool is_critical(const QuasiconvexFunction& f, const Point& x, double tol = 1e-2,
                 const LimitingSlopeOptions& opts = {});

struct SlopeBound {
  bool pass = false;
  double ell_hat = 0.0;
  /// Largest slope seen; a local Lipschitz estimate for f.
  double max_slope = 0.0;
  /// Adjacent estimates differ by more than 50%.
  bool grid_too_coarse = false;
  /// Point attaining ell_hat.
  Point witness;
  int points = 0;
  /// Grid points outside dom f (ignored).
  int skipped = 0;
};

/// Slope lower bound over a regular grid of `grid` points per axis.
/// Passes iff ell_hat > min_slope.
SlopeBound check_h2_region(const QuasiconvexFunction& f, const Box& region, int grid,
                           const SlopeOptions& opts = {}, double min_slope = 1e-2);

/// Slope lower bound on the annulus [alpha1 <= f <= alpha2], sampled on the
/// boundaries of n_levels sublevel sets spread over the window.
SlopeBound annulus_slope_bound(const QuasiconvexFunction& f, double alpha1, double alpha2,
                               int n_levels, double resolution,
                               const SlopeOptions& opts = {}, double min_slope = 1e-2);

struct PointCheck {
  bool pass = true;
  /// Smallest value of (bound - measured) over the sample.
  double worst_margin = kInf;
  std::optional<Point> witness;
  int samples = 0;
};

/// Error bound d(x, [f <= alpha]) <= (f(x) - alpha)^+ / ell_hat + tol on
/// seeded points of the region. Points outside dom f, and points with
/// f(x) > f_max (where ell_hat was not validated), are skipped.
PointCheck aze_corvellec_check(const QuasiconvexFunction& f, const Box& region, double alpha,
                               double ell_hat, int samples = 200, std::uint64_t seed = 0,
                               double tol = 1e-6, double f_max = kInf);

}  // namespace sweepdescent
