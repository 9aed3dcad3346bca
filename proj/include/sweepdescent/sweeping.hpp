#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sweepdescent/regularization.hpp"

namespace sweepdescent {

/// Level window and partition of a catching-up run.
///
/// The forward process sweeps S(t) = [f <= alpha2 - t] for t in [0, T] on the
/// uniform partition s_j = j T / k.
struct SweepingConfig {
  double alpha2 = 0.0;
  double T = 1.0;
  int k = 1000;
  /// Lipschitz constant of the moving sets (defaults to 1/ell_hat upstream).
  std::optional<double> K_hat;
  /// Prox-regularity radius for reverse runs.
  std::optional<double> r_hat;
  std::uint64_t seed = 0;
  Tolerances tol = default_tolerances();

  double step() const { return T / k; }
};

enum class Direction { forward, reverse };

std::string to_string(Direction d);

struct TrajectorySample {
  double t = 0.0;      // forward: level drop s_j in [0, T]; reverse: s_j in [-tbar, 0]
  double level = 0.0;  // level of the moving set at this sample
  Point x;
  double f = 0.0;
  /// |signed distance| of x to the boundary of the moving set.
  double dist_to_boundary = 0.0;
};

struct Trajectory {
  std::vector<TrajectorySample> samples;
  Direction direction = Direction::forward;
  SweepingConfig config;
  /// Number of steps (after the initial sample) spent in the waiting phase.
  int waiting_steps = 0;

  const Point& end() const { return samples.back().x; }
  /// Linear interpolation in t.
  Point at(double t) const;
};

/// Catching-up scheme u_j = proj(u_{j-1}; [f <= alpha2 - s_j]) from x0, with
/// u_j = x0 while alpha2 - s_j >= f(x0).
///
/// Throws DomainError if f(x0) > alpha2, LevelUnderflow if alpha2 - T <= inf f,
/// StepFailure (carrying the step index) for failures inside the loop.
Trajectory forward_catching_up(const QuasiconvexFunction& f, const Point& x0,
                               const SweepingConfig& cfg);

/// Reverse catching-up v_j = nearest point of R^d minus int [f <= alpha2 + s_j]
/// from v(-tbar) = ubar on the partition of [-tbar, 0] into k steps.
///
/// Accepted for regularized functions (r_hat defaults to eps) and for other
/// functions only when cfg.r_hat is supplied; Unsupported otherwise.
/// Requires cfg.K_hat (MissingConstants) and theta = K_hat (tbar/k) / r_hat < 1
/// (ThetaGuard).
Trajectory reverse_catching_up(const QuasiconvexFunction& f, const Point& ubar, double tbar,
                               const SweepingConfig& cfg);

/// theta = K_hat * step / r_hat.
double theta(double K_hat, double step, double r_hat);

struct FlowMap {
  std::vector<Point> grid;
  /// One trajectory per grid point; empty when that run failed.
  std::vector<std::optional<Trajectory>> trajectories;
  std::vector<std::string> errors;
};

/// Forward trajectories from every grid point of M = boundary of [f <= alpha2],
/// run concurrently. Per-trajectory failures are recorded, not thrown.
FlowMap flow_map(const QuasiconvexFunction& f, const std::vector<Point>& grid,
                 const SweepingConfig& cfg);

/// Constants of the bi-Lipschitz bound.
struct FlowConstants {
  std::optional<double> L_hat;
  std::optional<double> K_hat;
  std::optional<double> r_hat;
};

struct FlowInversionRecord {
  double D_in = 0.0;      // |t1 - t2| + |m1 - m2|
  double dist_out = 0.0;  // |u(t1, m1) - u(t2, m2)|
  double bound = 0.0;     // (L + e^{K T / r}) * dist_out * (1 + slack)
  bool bilipschitz_ok = false;
  /// max_t |u(t, m1) - u(t, m2)| - |m1 - m2| over the partition.
  double max_growth = 0.0;
  bool nonexpansive_ok = false;
  bool pass() const { return bilipschitz_ok && nonexpansive_ok; }
};

/// Compares the flow distance against D = |t1 - t2| + |m1 - m2|. Throws
/// MissingConstants unless L_hat, K_hat and r_hat are present.
FlowInversionRecord invert_flow_check(const QuasiconvexFunction& f, const Point& m1,
                                      const Point& m2, double t1, double t2,
                                      const SweepingConfig& cfg, const FlowConstants& c,
                                      double slack = 0.05, double tol = 1e-8);

/// Same, reusing precomputed forward trajectories from m1 and m2.
FlowInversionRecord invert_flow_check(const Trajectory& a, const Trajectory& b, double t1,
                                      double t2, const FlowConstants& c, double slack = 0.05,
                                      double tol = 1e-8);

}  // namespace sweepdescent
