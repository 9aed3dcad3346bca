#include <doctest.h>

#include <numbers>
#include <tuple>

#include "oracles.hpp"
#include "sweepdescent/errors.hpp"
#include "sweepdescent/geometry.hpp"
#include "sweepdescent/sweeping.hpp"

using namespace sweepdescent;

namespace {

SweepingConfig cfg(double alpha2, double T, int k) {
  SweepingConfig c;
  c.alpha2 = alpha2;
  c.T = T;
  c.k = k;
  return c;
}

}  // namespace

TEST_CASE("radial forward run") {
  const auto tr = forward_catching_up(*make_norm(2), make_point({2.0, 0.0}), cfg(2.0, 1.0, 1000));
  CHECK((tr.end() - make_point({1.0, 0.0})).norm() <= 5e-3);
  CHECK(tr.samples.size() == 1001);
  for (std::size_t j = 1; j < tr.samples.size(); ++j) {
    CHECK(tr.samples[j].t > tr.samples[j - 1].t);
    CHECK((tr.samples[j].x - tr.samples[j - 1].x).norm() <= 1.1 * 1e-3);
    CHECK((tr.samples[j].x - oracle::radial_flow(make_point({2.0, 0.0}), tr.samples[j].t)).norm() < 1e-9);
  }
}

TEST_CASE("waiting phase") {
  const Point x0 = make_point({1.5, 0.0});
  const auto tr = forward_catching_up(*make_norm(2), x0, cfg(2.0, 1.0, 100));
  CHECK(tr.waiting_steps == 50);
  for (const auto& s : tr.samples)
    if (s.t <= 0.5) CHECK(s.x == x0);
  CHECK(tr.end().norm() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("zero horizon and argument errors") {
  const auto tr = forward_catching_up(*make_norm(2), make_point({2.0, 0.0}), cfg(2.0, 0.0, 10));
  CHECK(tr.samples.size() == 1);
  CHECK_THROWS_AS(forward_catching_up(*make_norm(2), make_point({3.0, 0.0}), cfg(2.0, 1.0, 10)), DomainError);
  CHECK_THROWS_AS(forward_catching_up(*make_norm(2), make_point({2.0, 0.0}), cfg(2.0, 2.0, 10)), LevelUnderflow);
  CHECK_THROWS_AS(forward_catching_up(*make_norm(2), make_point({2.0, 0.0}), cfg(2.0, 1.0, 0)), DomainError);
}

TEST_CASE("failures inside the loop carry the step index") {
  class Broken final : public QuasiconvexFunction {
   public:
    int dim() const override { return 2; }
    std::string name() const override { return "broken"; }
    double eval(const Point& x) const override { return x.norm(); }
    SetPtr sublevel(double a) const override {
      if (a < 1.5) throw NonConvergence("oracle gave up");
      return make_ball(Point::Zero(2), a);
    }
    SetPtr domain() const override { return make_whole_space(2); }
    double inf_value() const override { return 0.0; }
  };
  try {
    forward_catching_up(Broken{}, make_point({2.0, 0.0}), cfg(2.0, 1.0, 10));
    FAIL("expected a step failure");
  } catch (const StepFailure& e) {
    CHECK(e.step() == 6);
  }
}

TEST_CASE("value decay and boundary riding") {
  for (const auto& [f, x0, a2] : std::vector<std::tuple<FunctionPtr, Point, double>>{
           {make_norm(2), make_point({1.2, 1.6}), 2.0},
           {make_tube(), make_point({2.5, 0.3}), 0.0},
           {regularize(make_tube(), 0.25), make_point({2.5, 0.9}), 0.0}}) {
    const double alpha2 = a2 > 0 ? a2 : f->eval(x0);
    const auto tr = forward_catching_up(*f, x0, cfg(alpha2, 0.5, 200));
    for (const auto& s : tr.samples) {
      CHECK(std::abs(s.f - s.level) <= 2e-9);
      CHECK(s.dist_to_boundary <= 1e-7);
    }
  }
}

TEST_CASE("regularized tube axial run") {
  const auto fe = regularize(make_tube(), 0.25);
  const auto tr = forward_catching_up(*fe, make_point({3.25, 0.0}), cfg(2.0, 1.0, 1000));
  CHECK((tr.end() - make_point({2.25, 0.0})).norm() <= 1e-2);
}

TEST_CASE("tube cap flow follows the analytic angle") {
  // Right cap of [f_eps <= a] is the circle of radius 1 + eps around (a, 0).
  const double eps = 0.25, R = 1.0 + eps, a2 = 2.0, phi0 = 0.9;
  const auto fe = regularize(make_tube(), eps);
  const Point x0 = make_point({a2 + R * std::cos(phi0), R * std::sin(phi0)});
  const auto tr = forward_catching_up(*fe, x0, cfg(a2, 1.0, 4000));
  const double phi = oracle::tube_cap_angle(phi0, 1.0, R);
  const Point ref = make_point({a2 - 1.0 + R * std::cos(phi), R * std::sin(phi)});
  CHECK((tr.end() - ref).norm() <= 2e-3);
}

TEST_CASE("reverse runs") {
  const auto n = regularize(make_norm(2), 0.5);
  auto c = cfg(1.5, 1.0, 2000);
  c.K_hat = 1.0;
  const auto tr = reverse_catching_up(*n, make_point({1.0, 0.0}), 1.0, c);
  CHECK((tr.end() - make_point({2.0, 0.0})).norm() <= 1e-2);
  CHECK(tr.samples.front().t == -1.0);
  CHECK(tr.samples.back().t == 0.0);

  const auto single = reverse_catching_up(*n, make_point({2.0, 0.0}), 0.0, c);
  CHECK(single.samples.size() == 1);

  const auto t = regularize(make_tube(), 0.25);
  const auto tt = reverse_catching_up(*t, make_point({2.25, 0.0}), 0.5, c);
  CHECK((tt.end() - make_point({2.75, 0.0})).norm() <= 1e-2);
}

TEST_CASE("reverse run guards") {
  const auto n = regularize(make_norm(2), 0.5);
  auto c = cfg(1.5, 1.0, 4);
  CHECK_THROWS_AS(reverse_catching_up(*n, make_point({1.0, 0.0}), 1.0, c), MissingConstants);
  c.K_hat = 1.0;
  c.k = 1;
  CHECK_THROWS_AS(reverse_catching_up(*n, make_point({1.0, 0.0}), 1.0, c), ThetaGuard);
  c.k = 4;
  CHECK_NOTHROW(reverse_catching_up(*n, make_point({1.0, 0.0}), 1.0, c));
  CHECK(theta(1.0, 0.25, 0.5) == 0.5);
  CHECK_THROWS_AS(reverse_catching_up(*n, make_point({0.7, 0.0}), 1.0, c), DomainError);
  CHECK_THROWS_AS(reverse_catching_up(*make_norm(2), make_point({1.0, 0.0}), 1.0, c), Unsupported);
  c.r_hat = 1.0;
  CHECK_NOTHROW(reverse_catching_up(*make_norm(2), make_point({1.0, 0.0}), 0.5, c));
}

TEST_CASE("reverse step expansion is bounded by 1/(1 - theta)") {
  const auto fe = regularize(make_tube(), 0.25);
  auto c = cfg(1.5, 1.0, 500);
  c.K_hat = 1.0;
  const double th = theta(1.0, 0.5 / 500, 0.25);
  const auto start = fe->sublevel(1.0);
  const Point a = start->project(make_point({2.5, 0.6}));
  const Point b = start->project(make_point({2.5, 0.7}));
  const auto ta = reverse_catching_up(*fe, a, 0.5, c);
  const auto tb = reverse_catching_up(*fe, b, 0.5, c);
  for (std::size_t j = 1; j < ta.samples.size(); ++j) {
    const double prev = (ta.samples[j - 1].x - tb.samples[j - 1].x).norm();
    const double cur = (ta.samples[j].x - tb.samples[j].x).norm();
    CHECK(cur <= prev / (1.0 - th) + 1e-9);
  }
}

TEST_CASE("flow map") {
  const auto n = regularize(make_norm(2), 0.5);
  std::vector<Point> grid;
  for (int i = 0; i < 8; ++i) {
    const double a = 2.0 * std::numbers::pi * i / 8;
    grid.push_back(make_point({2.0 * std::cos(a), 2.0 * std::sin(a)}));
  }
  grid.push_back(make_point({0.5, 0.0}));
  const auto fm = flow_map(*n, grid, cfg(1.5, 1.0, 200));
  for (int i = 0; i < 8; ++i) {
    REQUIRE(fm.trajectories[i]);
    CHECK((fm.trajectories[i]->end() - grid[i] * 0.5).norm() < 1e-9);
    CHECK(fm.errors[i].empty());
  }
  CHECK_FALSE(fm.trajectories[8]);
  CHECK_FALSE(fm.errors[8].empty());

  const auto id = flow_map(*n, {grid[0]}, cfg(1.5, 0.0, 10));
  CHECK(id.trajectories[0]->end() == grid[0]);
}

TEST_CASE("flow inversion records") {
  const auto n = regularize(make_norm(2), 0.5);
  const auto c = cfg(1.5, 1.0, 200);
  const FlowConstants k{1.0, 1.0, 0.5};
  const auto same = invert_flow_check(*n, make_point({2.0, 0.0}), make_point({2.0, 0.0}), 0.5, 0.5, c, k);
  CHECK(same.D_in == 0.0);
  CHECK(same.pass());
  const auto r = invert_flow_check(*n, make_point({2.0, 0.0}), make_point({0.0, 2.0}), 0.5, 0.5, c, k);
  CHECK(r.dist_out == doctest::Approx(1.5 * std::sqrt(2.0)).epsilon(1e-9));
  CHECK(r.pass());
  CHECK_THROWS_AS(invert_flow_check(*n, make_point({2.0, 0.0}), make_point({2.0, 0.0}), 0.5, 0.5, c, FlowConstants{}),
                  MissingConstants);
}

TEST_CASE("trajectory interpolation") {
  const auto tr = forward_catching_up(*make_norm(2), make_point({2.0, 0.0}), cfg(2.0, 1.0, 4));
  CHECK((tr.at(0.125) - make_point({1.875, 0.0})).norm() < 1e-12);
  CHECK(tr.at(-1.0) == tr.samples.front().x);
  CHECK(tr.at(2.0) == tr.end());
}

TEST_CASE("forward runs are nonexpansive") {
  const auto fe = regularize(make_tube(), 0.25);
  const auto M = fe->sublevel(1.5);
  Rng rng(13);
  for (int i = 0; i < 10; ++i) {
    const Point a = M->project(make_point({0.75, 0.0}) + 4.0 * rng.unit_vector(2));
    const Point b = M->project(make_point({0.75, 0.0}) + 4.0 * rng.unit_vector(2));
    const auto ta = forward_catching_up(*fe, a, cfg(1.5, 1.0, 200));
    const auto tb = forward_catching_up(*fe, b, cfg(1.5, 1.0, 200));
    for (std::size_t j = 1; j < ta.samples.size(); ++j)
      CHECK((ta.samples[j].x - tb.samples[j].x).norm() <=
            (ta.samples[j - 1].x - tb.samples[j - 1].x).norm() + 1e-8);
  }
}
