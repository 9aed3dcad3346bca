#include "sweepdescent/sweeping.hpp"

#include <algorithm>
#include <cmath>

#include "sweepdescent/errors.hpp"
#include "sweepdescent/geometry.hpp"
#include "sweepdescent/parallel.hpp"

namespace sweepdescent {

std::string to_string(Direction d) { return d == Direction::forward ? "forward" : "reverse"; }

Point Trajectory::at(double t) const {
  if (samples.size() == 1 || t <= samples.front().t) return samples.front().x;
  if (t >= samples.back().t) return samples.back().x;
  const auto it = std::lower_bound(samples.begin(), samples.end(), t,
                                   [](const TrajectorySample& s, double v) { return s.t < v; });
  const auto& b = *it;
  const auto& a = *(it - 1);
  const double w = (t - a.t) / (b.t - a.t);
  return (1.0 - w) * a.x + w * b.x;
}

double theta(double K_hat, double step, double r_hat) { return K_hat * step / r_hat; }

namespace {

void validate(const SweepingConfig& cfg) {
  if (!(cfg.T >= 0.0) || !std::isfinite(cfg.T)) throw DomainError("horizon T must be >= 0");
  if (cfg.k < 1) throw DomainError("partition size k must be >= 1");
}

TrajectorySample make_sample(const QuasiconvexFunction& f, double t, double level,
                             const Point& x) {
  TrajectorySample s;
  s.t = t;
  s.level = level;
  s.x = x;
  s.f = f.eval(x);
  try {
    s.dist_to_boundary = boundary_distance(*f.sublevel(level), x);
  } catch (const EmptySublevel&) {
    s.dist_to_boundary = kInf;
  }
  return s;
}

}  // namespace

Trajectory forward_catching_up(const QuasiconvexFunction& f, const Point& x0,
                               const SweepingConfig& cfg) {
  validate(cfg);
  if (x0.size() != f.dim()) throw DomainError("x0 has the wrong dimension");
  const double f0 = f.eval(x0);
  if (!(f0 <= cfg.alpha2 + 1e-9 * std::max(1.0, std::abs(cfg.alpha2))))
    throw DomainError("x0 is not in [f <= alpha2]");
  if (cfg.T > 0.0 && !(cfg.alpha2 - cfg.T > f.inf_value()))
    throw LevelUnderflow("alpha2 - T must exceed inf f");

  Trajectory traj;
  traj.direction = Direction::forward;
  traj.config = cfg;
  traj.samples.push_back(make_sample(f, 0.0, cfg.alpha2, x0));
  if (cfg.T == 0.0) return traj;

  Point u = x0;
  bool waiting = true;
  for (int j = 1; j <= cfg.k; ++j) {
    const double s = cfg.T * j / cfg.k;
    const double level = cfg.alpha2 - s;
    try {
      if (waiting && level >= f0 - 1e-12 * std::max(1.0, std::abs(level))) {
        ++traj.waiting_steps;
      } else {
        waiting = false;
        u = f.sublevel(level)->project(u);
      }
      traj.samples.push_back(make_sample(f, s, level, u));
    } catch (const Error& e) {
      throw StepFailure(j, e.what());
    }
  }
  return traj;
}

Trajectory reverse_catching_up(const QuasiconvexFunction& f, const Point& ubar, double tbar,
                               const SweepingConfig& cfg) {
  validate(cfg);
  if (!(tbar >= 0.0)) throw DomainError("reverse horizon must be >= 0");
  const auto* fe = dynamic_cast<const RegularizedFunction*>(&f);
  double r;
  if (cfg.r_hat) {
    r = *cfg.r_hat;
  } else if (fe) {
    r = fe->epsilon();
  } else {
    throw Unsupported(
        "reverse sweeping needs the complement of every sublevel set to be prox-regular; "
        "regularize the function (--epsilon) or supply a validated radius (--r-hat)");
  }
  if (!(r > 0.0)) throw DomainError("prox-regularity radius must be positive");
  if (!cfg.K_hat) throw MissingConstants("reverse sweeping needs the moving-map constant K_hat");
  const double step = tbar / cfg.k;
  const double th = theta(*cfg.K_hat, step, r);
  if (!(th < 1.0))
    throw ThetaGuard("step guard violated: theta = K_hat * step / r_hat = " +
                     std::to_string(th) + " >= 1; increase k");

  const double start_level = cfg.alpha2 - tbar;
  const SetPtr start_set = f.sublevel(start_level);
  if (boundary_distance(*start_set, ubar) > 1e-6)
    throw DomainError("reverse start is not on the boundary of [f <= alpha2 - tbar]");

  Trajectory traj;
  traj.direction = Direction::reverse;
  traj.config = cfg;
  traj.samples.push_back(make_sample(f, -tbar, start_level, ubar));
  if (tbar == 0.0) return traj;

  Point v = ubar;
  for (int j = 1; j <= cfg.k; ++j) {
    const double s = -tbar + tbar * j / cfg.k;
    const double level = cfg.alpha2 + s;
    try {
      if (fe) {
        v = complement_projection(*fe, level, v);
      } else {
        v = f.sublevel(level)->nearest_boundary_point(v);
      }
      traj.samples.push_back(make_sample(f, s, level, v));
    } catch (const Error& e) {
      throw StepFailure(j, e.what());
    }
  }
  return traj;
}

FlowMap flow_map(const QuasiconvexFunction& f, const std::vector<Point>& grid,
                 const SweepingConfig& cfg) {
  FlowMap out;
  out.grid = grid;
  out.trajectories.resize(grid.size());
  out.errors.resize(grid.size());
  const SetPtr M = f.sublevel(cfg.alpha2);
  parallel_for(grid.size(), [&](std::size_t i) {
    try {
      if (boundary_distance(*M, grid[i]) > 1e-6)
        throw DomainError("grid point is not on the boundary of [f <= alpha2]");
      out.trajectories[i] = forward_catching_up(f, grid[i], cfg);
    } catch (const std::exception& e) {
      out.errors[i] = e.what();
    }
  });
  return out;
}

FlowInversionRecord invert_flow_check(const Trajectory& a, const Trajectory& b, double t1,
                                      double t2, const FlowConstants& c, double slack,
                                      double tol) {
  if (!c.L_hat || !c.K_hat || !c.r_hat)
    throw MissingConstants("flow inversion check needs L_hat, K_hat and r_hat");
  const Point& m1 = a.samples.front().x;
  const Point& m2 = b.samples.front().x;
  FlowInversionRecord rec;
  const double dm = (m1 - m2).norm();
  rec.D_in = std::abs(t1 - t2) + dm;
  rec.dist_out = (a.at(t1) - b.at(t2)).norm();
  const double T = a.config.T;
  rec.bound = (*c.L_hat + std::exp(*c.K_hat * T / *c.r_hat)) * rec.dist_out * (1.0 + slack);
  rec.bilipschitz_ok = rec.D_in <= rec.bound + tol;
  rec.max_growth = -kInf;
  const std::size_t n = std::min(a.samples.size(), b.samples.size());
  for (std::size_t j = 0; j < n; ++j)
    rec.max_growth = std::max(rec.max_growth, (a.samples[j].x - b.samples[j].x).norm() - dm);
  rec.nonexpansive_ok = rec.max_growth <= tol;
  return rec;
}

FlowInversionRecord invert_flow_check(const QuasiconvexFunction& f, const Point& m1,
                                      const Point& m2, double t1, double t2,
                                      const SweepingConfig& cfg, const FlowConstants& c,
                                      double slack, double tol) {
  if (!c.L_hat || !c.K_hat || !c.r_hat)
    throw MissingConstants("flow inversion check needs L_hat, K_hat and r_hat");
  if (t1 > t2 || t1 < 0.0 || t2 > cfg.T) throw DomainError("need 0 <= t1 <= t2 <= T");
  const Trajectory a = forward_catching_up(f, m1, cfg);
  const Trajectory b = forward_catching_up(f, m2, cfg);
  return invert_flow_check(a, b, t1, t2, c, slack, tol);
}

}  // namespace sweepdescent
