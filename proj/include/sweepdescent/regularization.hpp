#pragma once

#include <cstdint>
#include <vector>

#include "sweepdescent/function.hpp"
#include "sweepdescent/slope.hpp"

namespace sweepdescent {

/// Max-convolution f_eps of f with the indicator of eps*B: the function whose
/// sublevel sets are [f <= alpha] + eps*B. Equivalently
/// f_eps(x) = inf_{|w| <= eps} f(x - w).
class RegularizedFunction final : public QuasiconvexFunction {
 public:
  RegularizedFunction(FunctionPtr base, double eps,
                      const Tolerances& tol = default_tolerances());

  int dim() const override { return base_->dim(); }
  std::string name() const override;
  double eval(const Point& x) const override;
  SetPtr sublevel(double alpha) const override;
  SetPtr domain() const override { return domain_; }
  double inf_value() const override { return base_->inf_value(); }

  const FunctionPtr& base() const { return base_; }
  double epsilon() const { return eps_; }
  const Tolerances& tolerances() const { return tol_; }

 private:
  FunctionPtr base_;
  double eps_;
  Tolerances tol_;
  SetPtr domain_;
};

using RegularizedPtr = std::shared_ptr<const RegularizedFunction>;

/// Throws DomainError unless eps > 0.
RegularizedPtr regularize(FunctionPtr f, double eps);

/// Smallest alpha with d(x, [f <= alpha]) <= eps, found by bracketing on
/// [inf f, f(x)]. +inf when x is farther than eps from dom f. Throws
/// BisectionFailure if the distance map contradicts monotonicity.
double eval_regularized(const RegularizedFunction& fe, const Point& x);

/// z = proj(x; [f <= f_eps(x)]).
Point base_point(const RegularizedFunction& fe, const Point& x);

struct ValueComparison {
  double lhs = 0.0;
  double rhs = 0.0;
  bool pass = false;
};

/// f_{e1+e2}(x) against (f_{e1})_{e2}(x).
ValueComparison semigroup_check(FunctionPtr f, double e1, double e2, const Point& x,
                                double tol = 1e-6);

/// slope(f_eps, x) >= slope(f, base_point(x)) - tol. lhs is the slope of
/// f_eps, rhs the slope of f at the base point.
ValueComparison slope_inequality_check(FunctionPtr f, double eps, const Point& x,
                                       double tol = 1e-3, const SlopeOptions& opts = {});

/// Nearest point of U = R^d minus int [f_eps <= alpha] for x in
/// [f_eps <= alpha]: z + eps (x - z)/|x - z| with z = proj(x; [f <= alpha]).
/// Returns x when x is already in U. Throws OutOfReach when x lies in
/// [f <= alpha] and DegenerateDirection when |x - z| is below tolerance.
Point complement_projection(const RegularizedFunction& fe, double alpha, const Point& x);

struct ProxRadiusEstimate {
  double level = 0.0;
  /// Estimated radius r such that the complement of the interior is
  /// r-prox-regular (the minimal inner curvature radius of the boundary).
  double r_hat = 0.0;
  int sample_count = 0;
  /// Boundary samples skipped because their normal is not unique.
  int corners = 0;
  double spacing = 0.0;
  /// Boundary pair attaining r_hat.
  std::vector<Point> witness;
};

/// r_hat = min over boundary pairs (b, b') of |b - b'|^2 / (2 <n(b), b - b'>^+).
/// The boundary is sampled at `n_samples` points, then once more at spacing
/// r_hat/20. Exact for circles.
ProxRadiusEstimate prox_radius_estimate(SetPtr set, int n_samples = 128,
                                        std::uint64_t seed = 0);
ProxRadiusEstimate prox_radius_estimate(const QuasiconvexFunction& f, double alpha,
                                        int n_samples = 128, std::uint64_t seed = 0);

}  // namespace sweepdescent
