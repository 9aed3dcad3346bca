#pragma once

#include <memory>
#include <string>
#include <vector>

#include "sweepdescent/convex_set.hpp"

namespace sweepdescent {

/// Lower semicontinuous quasiconvex function f : R^d -> R ∪ {+inf}.
///
/// Besides pointwise evaluation, every function hands out oracles for its
/// sublevel sets [f <= alpha]; `sublevel` throws EmptySublevel below the
/// infimum.
class QuasiconvexFunction {
 public:
  virtual ~QuasiconvexFunction() = default;

  virtual int dim() const = 0;
  virtual std::string name() const = 0;
  virtual double eval(const Point& x) const = 0;
  virtual SetPtr sublevel(double alpha) const = 0;
  virtual SetPtr domain() const = 0;
  /// Greatest lower bound of f (may be -inf).
  virtual double inf_value() const = 0;

  double operator()(const Point& x) const { return eval(x); }
};

using FunctionPtr = std::shared_ptr<const QuasiconvexFunction>;

/// Euclidean norm on R^d.
FunctionPtr make_norm(int dim = 2);

/// Constant function (every point critical).
FunctionPtr make_constant(int dim, double value);

/// Tube function on D = co(B ∪ ((3,0) + B)):
///   f(x, y) = max(0, x - sqrt(1 - y^2)) on D, +inf outside,
/// with [f <= t] = co(B ∪ ((t,0) + B)) for t in [0, 3].
FunctionPtr make_tube();

/// Moving-disks gauge f(x) = inf{s : x ∈ S(s)} with
///   S(s) = B(0, s)                               for s in [0, 1),
///   S(s) = co(B(0, s) ∪ B((0, 2s - 1), s - 1))   for s in [1, 2],
/// and +inf outside S(2). Evaluated by bisection on s.
FunctionPtr make_gauge();

/// h = f + indicator of the closed ball B(center, delta).
/// Requires the ball to lie in dom f.
FunctionPtr localize(FunctionPtr f, Point center, double delta);

/// Gallery lookup: "norm", "tube", "gauge", "constant[:c]",
/// "localized:<name>:<c1>,<c2>,...:<delta>". `dim` applies to norm and
/// constant. Throws ConfigError on unknown names.
FunctionPtr make_function(const std::string& spec, int dim = 2);

struct GalleryEntry {
  std::string name;
  std::string parameters;
  std::string description;
};

std::vector<GalleryEntry> gallery();

}  // namespace sweepdescent
