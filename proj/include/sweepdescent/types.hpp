#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>

#include <Eigen/Dense>

namespace sweepdescent {

/// A point of R^d. The dimension is fixed per experiment.
using Point = Eigen::VectorXd;

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Points this close to dom f count as inside it, so that projections onto
/// flat pieces of the domain boundary are not lost to rounding.
inline constexpr double kDomainSlack = 1e-12;

/// Numerical tolerances shared by every module. The defaults are the ones
/// the library is tested against; callers may override individual fields.
struct Tolerances {
  double projection = 1e-9;  // stopping tolerance of iterative projections
  double boundary = 1e-7;    // |signed distance| accepted as "on the boundary"
  int max_iter = 10000;      // cutting-plane iteration cap
  double fd_step = 1e-5;     // finite-difference probe length
  double level = 1e-10;      // root-finding tolerance on function levels
};

inline const Tolerances& default_tolerances() {
  static const Tolerances tol{};
  return tol;
}

/// Counter-based seed splitting: every consumer derives its own stream from
/// (seed, stream id), so results do not depend on execution order.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  return splitmix64(splitmix64(seed) ^ splitmix64(stream + 0x632be59bd9b4e019ULL));
}

/// Small portable generator. std:: distributions are implementation defined,
/// so uniform and normal deviates are produced here to keep outputs
/// byte-identical across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}
  Rng(std::uint64_t seed, std::uint64_t stream) : state_(derive_seed(seed, stream)) {}

  std::uint64_t next() {
    state_ += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  /// Uniform in [0, 1).
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  double normal() {
    // Box-Muller; 1 - u keeps the log argument in (0, 1].
    const double u = 1.0 - uniform();
    const double v = uniform();
    return std::sqrt(-2.0 * std::log(u)) * std::cos(2.0 * std::numbers::pi * v);
  }

  /// Uniformly distributed unit vector of R^d.
  Point unit_vector(int d) {
    Point v(d);
    do {
      for (int i = 0; i < d; ++i) v[i] = normal();
    } while (v.norm() < 1e-12);
    return v / v.norm();
  }

 private:
  std::uint64_t state_;
};

/// Axis-aligned box, used for sampling regions.
struct Box {
  Point lo;
  Point hi;

  int dim() const { return static_cast<int>(lo.size()); }
  bool contains(const Point& x) const {
    return ((x - lo).array() >= 0.0).all() && ((hi - x).array() >= 0.0).all();
  }
  Point sample(Rng& rng) const {
    Point x(dim());
    for (int i = 0; i < dim(); ++i) x[i] = rng.uniform(lo[i], hi[i]);
    return x;
  }
};

inline Point make_point(std::initializer_list<double> coords) {
  Point p(static_cast<Eigen::Index>(coords.size()));
  Eigen::Index i = 0;
  for (double c : coords) p[i++] = c;
  return p;
}

}  // namespace sweepdescent
