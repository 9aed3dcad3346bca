#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sweepdescent/sweeping.hpp"

namespace sweepdescent {

enum class CheckStatus { pass, fail, skipped };

std::string to_string(CheckStatus s);

/// One named property check. Failed checks carry a witness.
struct CheckRecord {
  std::string name;
  /// The property being checked, in words.
  std::string anchor;
  CheckStatus status = CheckStatus::skipped;
  std::vector<Point> witness;
  /// Signed slack of the checked inequality (negative on failure).
  double margin = 0.0;
  std::string detail;

  bool passed() const { return status == CheckStatus::pass; }
  bool failed() const { return status == CheckStatus::fail; }
};

struct Constants {
  std::optional<double> ell_hat;  // slope lower bound on the annulus
  std::optional<double> K_hat;    // moving-map Lipschitz constant
  std::optional<double> r_hat;    // prox-regularity radius
  std::optional<double> L_hat;    // local Lipschitz constant of f
};

struct DiagnosticsReport {
  Constants constants;
  /// Sorted by name once the suite finishes.
  std::vector<CheckRecord> checks;
  std::vector<std::string> notes;

  bool any_failed() const;
  const CheckRecord* find(const std::string& name) const;
};

/// Evenly spaced levels alpha1, ..., alpha2 (n >= 2) or {alpha2} (n = 1).
std::vector<double> level_grid(double alpha1, double alpha2, int n);

struct MovingMapResult {
  CheckRecord check;
  /// Largest sampled d_H / |t - s| over level pairs.
  double K_direct = 0.0;
};

/// Sampled d_H(S(t), S(s)) <= |t - s| / ell_hat + 2 * resolution for the
/// sublevel sets at n_levels levels of the window, and the same for their
/// complements (distances from the smaller boundary into the larger set).
/// Skipped when ell_hat <= 0.
MovingMapResult verify_moving_map_lipschitz(const QuasiconvexFunction& f, double alpha1,
                                            double alpha2, int n_levels, double ell_hat,
                                            double resolution = 0.01, std::uint64_t seed = 0);

struct HypothesisOptions {
  int n_levels = 5;
  double resolution = 0.02;
  /// Samples per boundary for the prox-radius estimate.
  int prox_samples = 128;
  /// Required slope lower bound and prox radius.
  double min_slope = 1e-2;
  double min_radius = 0.1;
  std::uint64_t seed = 0;
  SlopeOptions slope;
};

struct HypothesesResult {
  CheckRecord coercive;       // bounded sublevel sets with interior points
  CheckRecord slope_bound;    // slope bounded away from zero on the annulus
  CheckRecord prox_regular;   // complements prox-regular with radius >= min_radius
  double ell_hat = 0.0;
  double max_slope = 0.0;
  double r_hat = 0.0;
};

HypothesesResult verify_hypotheses(const QuasiconvexFunction& f, double alpha1, double alpha2,
                                   const HypothesisOptions& opts = {});

/// limiting_slope(f, base_point(f_eps, x)) > tol.
bool membership_U_epsilon(FunctionPtr f, double eps, const Point& x, double tol = 1e-2);

/// Seeded points of the region with f_eps finite, at least `margin` inside
/// dom f_eps, with f_eps in [lo, hi] and in U_eps.
std::vector<Point> sample_U_epsilon(const RegularizedFunction& fe, const Box& region, int n,
                                    double lo, double hi, std::uint64_t seed,
                                    double margin = 0.05, double crit_tol = 1e-2);

struct SteepestDescentOptions {
  int k = 200;
  /// Evenly spaced steps per start at which speed * slope is tested.
  int probe_steps = 50;
  /// Level drop per start, capped so the run stays above inf f.
  double T = 0.5;
  double product_tol = 5e-2;
  double step_fraction = 0.95;
  double pass_fraction = 0.9;
  SlopeOptions slope;
};

struct SteepestDescentResult {
  CheckRecord check;
  std::vector<double> start_fractions;  // fraction of good steps per start
  double pass_fraction = 0.0;
};

/// For each start x0 runs forward catching-up from alpha2 = f_eps(x0) and
/// tests | speed * slope - 1 | <= product_tol at probe_steps evenly spaced
/// steps. A start passes when at least step_fraction of those steps do; the
/// check passes when at least pass_fraction of the starts do. An empirical
/// probe only.
SteepestDescentResult probe_steepest_descent(const RegularizedFunction& fe,
                                             const std::vector<Point>& starts,
                                             const SteepestDescentOptions& opts = {});

/// d(z, [h <= beta]) <= (delta + d(c, [f <= beta])) / (delta - d(c, [f <= beta]))
///   * d(z, [f <= beta]) + tol,  h = f + indicator of B(c, delta).
/// Skipped when beta is not in (min h, h(z)) or the denominator is <= 0.
CheckRecord hoffmann_localization_check(FunctionPtr f, const Point& center, double delta,
                                        const Point& z, double beta, double tol = 1e-8);

/// Largest |f(a) - f(b)| / |a - b| over seeded pairs of the box with
/// |a - b| <= max_gap and both values finite.
double empirical_lipschitz(const QuasiconvexFunction& f, const Box& box, int pairs,
                           double max_gap, std::uint64_t seed);

struct SuiteConfig {
  FunctionPtr f;
  double alpha1 = 0.5;
  double alpha2 = 1.5;
  std::uint64_t seed = 0;
  HypothesisOptions hypotheses;
  /// Partition size for the flow checks.
  int k = 400;
  int flow_grid = 16;
  int flow_pairs = 50;
  int descent_starts = 20;
  SteepestDescentOptions descent;
  double flow_slack = 0.05;
};

/// Runs every applicable check. Consumers are gated on their prerequisites
/// (a failed or skipped prerequisite turns the consumer into "skipped").
/// Checks run concurrently; the report is sorted by check name.
DiagnosticsReport run_suite(const SuiteConfig& cfg);

}  // namespace sweepdescent
