#include <doctest.h>

#include "oracles.hpp"
#include "sweepdescent/errors.hpp"
#include "sweepdescent/geometry.hpp"

using namespace sweepdescent;

namespace {

SetPtr unit_disk() { return make_ball(Point::Zero(2), 1.0); }

std::vector<SetPtr> gallery_sets() {
  return {
      unit_disk(),
      make_ball(make_point({0.5, -1.0, 2.0}), 1.5),
      make_two_ball_hull(Point::Zero(2), 1.0, make_point({0.5, 0.0}), 1.0),
      make_two_ball_hull(Point::Zero(2), 1.5, make_point({0.0, 2.0}), 0.5),
      make_dilation(make_two_ball_hull(Point::Zero(2), 1.0, make_point({1.0, 0.0}), 1.0), 0.3),
      make_ball_intersection(make_ball(Point::Zero(2), 1.8), make_point({2.0, 0.0}), 0.5),
      make_generic_set([](const Point& x) { return x.norm() <= 1.0; }, Point::Zero(2)),
  };
}

}  // namespace

TEST_CASE("ball projection") {
  const auto s = unit_disk();
  CHECK((project_convex(*s, make_point({2.0, 0.0})) - make_point({1.0, 0.0})).norm() < 1e-12);
  CHECK((project_convex(*s, make_point({0.3, 0.1})) - make_point({0.3, 0.1})).norm() == 0.0);
}

TEST_CASE("tube sublevel projection matches the boundary sample") {
  const auto s = make_two_ball_hull(Point::Zero(2), 1.0, make_point({0.5, 0.0}), 1.0);
  const Point x = make_point({2.0, 0.0});
  CHECK((s->project(x) - make_point({1.5, 0.0})).norm() < 1e-9);
  const Point y = make_point({1.2, 1.7});
  const Point ref = oracle::planar_projection(*s, y, make_point({0.25, 0.0}), 3.0);
  CHECK((s->project(y) - ref).norm() < 1e-3);
}

TEST_CASE("dilation") {
  CHECK(make_dilation(unit_disk(), 1.0)->contains(make_point({0.0, 1.9})));
  const auto d = dilate(unit_disk(), 0.5);
  CHECK((d->project(make_point({3.0, 0.0})) - make_point({1.5, 0.0})).norm() < 1e-12);
  const auto pt = dilate(make_ball(Point::Zero(2), 0.0), 2.0);
  CHECK(pt->distance(make_point({3.0, 0.0})) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(to_string(d->kind()) == "dilated");
}

TEST_CASE("dilation distance is the shifted base distance") {
  const auto base = make_two_ball_hull(Point::Zero(2), 1.0, make_point({1.0, 0.0}), 1.0);
  const auto d = make_dilation(base, 0.3);
  Rng rng(7);
  for (int i = 0; i < 200; ++i) {
    const Point x = Box{make_point({-3, -3}), make_point({4, 3})}.sample(rng);
    CHECK(d->distance(x) == doctest::Approx(std::max(base->distance(x) - 0.3, 0.0)).epsilon(1e-8));
  }
}

TEST_CASE("projection properties on every set") {
  for (const auto& s : gallery_sets()) {
    const int d = s->dim();
    Rng rng(11, static_cast<std::uint64_t>(d));
    const Point c = s->interior_point();
    for (int i = 0; i < 100; ++i) {
      const Point x = c + 4.0 * rng.unit_vector(d) * rng.uniform();
      const Point y = c + 4.0 * rng.unit_vector(d) * rng.uniform();
      const Point px = s->project(x), py = s->project(y);
      CHECK((s->project(px) - px).norm() <= 1e-6);
      CHECK((px - py).norm() <= (x - y).norm() + 1e-8);
      CHECK(std::abs(s->distance(x) - (x - px).norm()) <= 1e-9);
      if (!s->contains(x)) CHECK(boundary_distance(*s, px) <= 1e-6);
    }
  }
}

TEST_CASE("ball intersection projection matches the boundary sample") {
  const auto s = make_ball_intersection(make_ball(Point::Zero(2), 1.8), make_point({2.0, 0.0}), 0.5);
  CHECK((s->project(make_point({3.0, 0.0})) - make_point({1.8, 0.0})).norm() < 1e-8);
  const Point x = make_point({2.2, 1.0});
  const Point ref = oracle::planar_projection(*s, x, make_point({1.65, 0.0}), 1.0);
  CHECK((s->project(x) - ref).norm() < 1e-3);
}

TEST_CASE("generic cutting-plane projection") {
  const Membership disk = [](const Point& x) { return x.norm() <= 1.0; };
  CHECK((generic_projection_cutting_plane(disk, Point::Zero(2), make_point({2.0, 0.0})) -
         make_point({1.0, 0.0})).norm() < 1e-6);
  const Point inside = make_point({0.2, -0.3});
  CHECK((generic_projection_cutting_plane(disk, Point::Zero(2), inside) - inside).norm() == 0.0);

  // [gauge <= 1.5] through membership only.
  const auto g = make_function("gauge");
  const Membership m = [&](const Point& x) { return g->eval(x) <= 1.5; };
  const Point x = make_point({0.0, 3.0});
  const Point p = generic_projection_cutting_plane(m, make_point({0.0, 0.5}), x);
  const auto pts = oracle::planar_boundary(m, make_point({0.0, 0.5}), 4.0, 20000);
  CHECK((p - oracle::nearest(pts, x)).norm() < 1e-4);
}

TEST_CASE("generic projection gives up after the iteration cap") {
  Tolerances tol;
  tol.max_iter = 2;
  tol.projection = 1e-14;
  const Membership disk = [](const Point& x) { return x.norm() <= 1.0; };
  CHECK_THROWS_AS(generic_projection_cutting_plane(disk, make_point({0.5, 0.0}), make_point({0.0, 3.0}), tol),
                  NonConvergence);
}

TEST_CASE("hausdorff distance") {
  const auto a = sample_boundary(unit_disk(), 0.01);
  const auto b = sample_boundary(make_ball(Point::Zero(2), 2.0), 0.01);
  CHECK(hausdorff_distance(a, b) == doctest::Approx(1.0).epsilon(1e-3));
  CHECK(hausdorff_distance(a, a) == 0.0);
  CHECK(hausdorff_distance(a, b) == doctest::Approx(hausdorff_distance(b, a)).epsilon(1e-3));

  const auto t0 = sample_boundary(make_function("tube")->sublevel(0.0), 0.01);
  const auto t1 = sample_boundary(make_function("tube")->sublevel(1.0), 0.01);
  CHECK(std::abs(hausdorff_distance(t0, t1) - 1.0) <= 0.02);

  const auto c = sample_boundary(make_ball(make_point({0.3, 0.0}), 1.5), 0.01);
  CHECK(hausdorff_distance(a, b) <= hausdorff_distance(a, c) + hausdorff_distance(c, b) + 0.02);
  CHECK_THROWS_AS(hausdorff_distance(a, BoundarySample{}), EmptySample);
}

TEST_CASE("sample_boundary in three dimensions") {
  const auto s = sample_boundary(make_ball(Point::Zero(3), 1.0), 0.2, 3);
  CHECK(s.points.size() > 50);
  for (const auto& p : s.points) CHECK(std::abs(p.norm() - 1.0) < 1e-9);
}

TEST_CASE("outward normal") {
  const auto s = unit_disk();
  CHECK((outward_normal(*s, make_point({0.0, 1.0})) - make_point({0.0, 1.0})).norm() < 1e-6);
  CHECK((outward_normal(*s, make_point({1.0, 0.0})) - make_point({1.0, 0.0})).norm() < 1e-6);
  const auto tube1 = make_function("tube")->sublevel(1.0);
  CHECK((outward_normal(*tube1, make_point({2.0, 0.0})) - make_point({1.0, 0.0})).norm() < 1e-6);
  CHECK_THROWS_AS(outward_normal(*s, make_point({0.5, 0.0})), DomainError);

  Rng rng(5);
  for (int i = 0; i < 50; ++i) {
    const Point b = rng.unit_vector(2);
    const Point n = outward_normal(*tube1, tube1->project(2.0 * b + make_point({0.5, 0.0})));
    CHECK(std::abs(n.norm() - 1.0) < 1e-9);
    const Point x = 2.0 * b + make_point({0.5, 0.0});
    CHECK(n.dot(x - tube1->project(x)) > 0.0);
  }
}

TEST_CASE("corner points have no unique normal") {
  const auto lens = make_ball_intersection(make_ball(Point::Zero(2), 1.0), make_point({1.0, 0.0}), 1.0);
  const Point corner = make_point({0.5, std::sqrt(0.75)});
  CHECK_THROWS_AS(outward_normal(*lens, corner), DegenerateNormal);
}

TEST_CASE("ray exit and orthogonal complement") {
  CHECK(ray_exit(*unit_disk(), Point::Zero(2), make_point({0.0, 1.0})) ==
        doctest::Approx(1.0).epsilon(1e-12));
  CHECK(std::isinf(ray_exit(*make_whole_space(2), Point::Zero(2), make_point({1.0, 0.0}))));
  const auto q = orthogonal_complement(make_point({1.0, 2.0, 2.0}));
  CHECK(q.cols() == 2);
  CHECK((q.transpose() * make_point({1.0, 2.0, 2.0})).norm() < 1e-12);
}
