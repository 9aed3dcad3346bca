#include "sweepdescent/function.hpp"

#include <algorithm>
#include <sstream>
#include <utility>

#include "sweepdescent/errors.hpp"

namespace sweepdescent {

namespace {

class Norm final : public QuasiconvexFunction {
 public:
  explicit Norm(int d) : d_(d) {}
  int dim() const override { return d_; }
  std::string name() const override { return "norm"; }
  double eval(const Point& x) const override { return x.norm(); }
  SetPtr sublevel(double alpha) const override {
    if (alpha < 0.0) throw EmptySublevel("norm: level below 0");
    return make_ball(Point::Zero(d_), alpha);
  }
  SetPtr domain() const override { return make_whole_space(d_); }
  double inf_value() const override { return 0.0; }

 private:
  int d_;
};

class Constant final : public QuasiconvexFunction {
 public:
  Constant(int d, double c) : d_(d), c_(c) {}
  int dim() const override { return d_; }
  std::string name() const override { return "constant"; }
  double eval(const Point&) const override { return c_; }
  SetPtr sublevel(double alpha) const override {
    if (alpha < c_) throw EmptySublevel("constant: level below the value");
    return make_whole_space(d_);
  }
  SetPtr domain() const override { return make_whole_space(d_); }
  double inf_value() const override { return c_; }

 private:
  int d_;
  double c_;
};

class Tube final : public QuasiconvexFunction {
 public:
  static constexpr double kLength = 3.0;

  Tube() : domain_(make_two_ball_hull(origin(), 1.0, make_point({kLength, 0.0}), 1.0)) {}

  int dim() const override { return 2; }
  std::string name() const override { return "tube"; }
  double eval(const Point& x) const override {
    if (!domain_->contains(x) && domain_->distance(x) > kDomainSlack) return kInf;
    const double y2 = std::min(1.0, x[1] * x[1]);
    return std::max(0.0, x[0] - std::sqrt(1.0 - y2));
  }
  SetPtr sublevel(double alpha) const override {
    if (alpha < 0.0) throw EmptySublevel("tube: level below 0");
    if (alpha >= kLength) return domain_;
    return make_two_ball_hull(origin(), 1.0, make_point({alpha, 0.0}), 1.0);
  }
  SetPtr domain() const override { return domain_; }
  double inf_value() const override { return 0.0; }

 private:
  static Point origin() { return Point::Zero(2); }
  SetPtr domain_;
};

// Membership gap of S(s) for the moving-disks gauge (negative inside).
double gauge_gap(const Point& x, double s) {
  if (s < 1.0) return x.norm() - s;
  const double len = 2.0 * s - 1.0;  // distance between the centers
  const double small = s - 1.0;
  if (len <= s - small) return x.norm() - s;  // s == 1: the small disk is a point inside
  const double kappa = (s - small) / len;
  const double a = x[1], rho = std::abs(x[0]);
  const double u = kappa * rho / std::sqrt(1.0 - kappa * kappa);
  const double t = std::clamp((a - u) / len, 0.0, 1.0);
  return std::hypot(rho, a - t * len) - (s + t * (small - s));
}

class Gauge final : public QuasiconvexFunction {
 public:
  Gauge() : domain_(disks(2.0)) {}

  int dim() const override { return 2; }
  std::string name() const override { return "gauge"; }
  double eval(const Point& x) const override {
    if (gauge_gap(x, 2.0) > kDomainSlack) return kInf;
    double lo = 0.0, hi = 2.0;
    if (gauge_gap(x, 0.0) <= 0.0) return 0.0;
    while (hi - lo > 1e-10) {
      const double mid = 0.5 * (lo + hi);
      if (gauge_gap(x, mid) <= 0.0) hi = mid; else lo = mid;
    }
    return hi;
  }
  SetPtr sublevel(double alpha) const override {
    if (alpha < 0.0) throw EmptySublevel("gauge: level below 0");
    if (alpha >= 2.0) return domain_;
    return disks(alpha);
  }
  SetPtr domain() const override { return domain_; }
  double inf_value() const override { return 0.0; }

 private:
  static SetPtr disks(double s) {
    if (s < 1.0) return make_ball(Point::Zero(2), s);
    return make_two_ball_hull(Point::Zero(2), s, make_point({0.0, 2.0 * s - 1.0}), s - 1.0);
  }
  SetPtr domain_;
};

class Localized final : public QuasiconvexFunction {
 public:
  Localized(FunctionPtr f, Point c, double delta)
      : f_(std::move(f)), c_(std::move(c)), delta_(delta) {
    if (!(delta_ > 0.0)) throw DomainError("localize: radius must be positive");
    if (f_->domain()->depth(c_) < delta_ * (1.0 - 1e-12))
      throw DomainError("localize: the ball is not contained in dom f");
    domain_ = make_ball_intersection(f_->domain(), c_, delta_);

    // min h = smallest alpha with d(c, [f <= alpha]) <= delta.
    double hi = f_->eval(c_);
    double lo = f_->inf_value();
    if (!std::isfinite(lo)) {
      double step = 1.0;
      lo = hi - step;
      while (reaches(lo)) { step *= 2.0; lo = hi - step; }
    }
    if (reaches(lo)) {
      min_ = lo;
    } else {
      for (int it = 0; it < 200 && hi - lo > 1e-13 * std::max(1.0, std::abs(hi)); ++it) {
        const double mid = 0.5 * (lo + hi);
        if (reaches(mid)) hi = mid; else lo = mid;
      }
      min_ = hi;
    }
  }

  int dim() const override { return f_->dim(); }
  std::string name() const override {
    std::ostringstream os;
    os << "localized:" << f_->name() << ':';
    for (Eigen::Index i = 0; i < c_.size(); ++i) os << (i ? "," : "") << c_[i];
    os << ':' << delta_;
    return os.str();
  }
  double eval(const Point& x) const override {
    if ((x - c_).norm() > delta_ + kDomainSlack) return kInf;
    return f_->eval(x);
  }
  SetPtr sublevel(double alpha) const override {
    if (alpha < min_) throw EmptySublevel("localized: level below the minimum");
    return make_ball_intersection(f_->sublevel(alpha), c_, delta_);
  }
  SetPtr domain() const override { return domain_; }
  double inf_value() const override { return min_; }

 private:
  bool reaches(double alpha) const {
    try {
      return f_->sublevel(alpha)->distance(c_) <= delta_;
    } catch (const EmptySublevel&) {
      return false;
    }
  }

  FunctionPtr f_;
  Point c_;
  double delta_;
  SetPtr domain_;
  double min_ = 0.0;
};

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream is(s);
  while (std::getline(is, cur, sep)) out.push_back(cur);
  return out;
}

double parse_double(const std::string& s, const std::string& what) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("cannot parse " + what + " from '" + s + "'");
  }
}

}  // namespace

FunctionPtr make_norm(int dim) {
  if (dim < 1) throw ConfigError("dimension must be at least 1");
  return std::make_shared<Norm>(dim);
}
FunctionPtr make_constant(int dim, double value) {
  if (dim < 1) throw ConfigError("dimension must be at least 1");
  return std::make_shared<Constant>(dim, value);
}
FunctionPtr make_tube() { return std::make_shared<Tube>(); }
FunctionPtr make_gauge() { return std::make_shared<Gauge>(); }
FunctionPtr localize(FunctionPtr f, Point center, double delta) {
  if (center.size() != f->dim()) throw ConfigError("localize: center dimension mismatch");
  return std::make_shared<Localized>(std::move(f), std::move(center), delta);
}

FunctionPtr make_function(const std::string& spec, int dim) {
  if (spec == "norm") return make_norm(dim);
  if (spec == "tube") return make_tube();
  if (spec == "gauge") return make_gauge();
  if (spec == "constant") return make_constant(dim, 0.0);
  if (spec.rfind("constant:", 0) == 0)
    return make_constant(dim, parse_double(spec.substr(9), "constant value"));
  if (spec.rfind("localized:", 0) == 0) {
    const auto parts = split(spec, ':');
    if (parts.size() != 4)
      throw ConfigError("expected localized:<name>:<c1>,<c2>,...:<delta>, got '" + spec + "'");
    FunctionPtr base = make_function(parts[1], dim);
    const auto coords = split(parts[2], ',');
    Point c(static_cast<Eigen::Index>(coords.size()));
    for (std::size_t i = 0; i < coords.size(); ++i)
      c[static_cast<Eigen::Index>(i)] = parse_double(coords[i], "center coordinate");
    const double delta = parse_double(parts[3], "radius");
    try {
      return localize(std::move(base), std::move(c), delta);
    } catch (const DomainError& e) {
      throw ConfigError(e.what());
    }
  }
  throw ConfigError("unknown function '" + spec + "'");
}

std::vector<GalleryEntry> gallery() {
  return {
      {"norm", "--dim d (default 2)", "Euclidean norm; sublevels are centered balls"},
      {"tube", "none (d = 2)",
       "max(0, x - sqrt(1 - y^2)) on co(B ∪ ((3,0)+B)); sublevels co(B ∪ ((t,0)+B))"},
      {"gauge", "none (d = 2)",
       "inf{s : x ∈ S(s)}, S(s) = B(0,s) for s < 1, co(B(0,s) ∪ B((0,2s-1), s-1)) for s in [1,2]"},
      {"constant[:c]", "--dim d, value c (default 0)", "constant function; every point is critical"},
      {"localized:<name>:<c1>,...:<delta>", "base name, ball center, radius",
       "base function plus the indicator of the closed ball B(center, delta)"},
  };
}

}  // namespace sweepdescent
