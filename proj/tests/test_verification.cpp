#include <doctest.h>

#include "sweepdescent/io.hpp"
#include "sweepdescent/verification.hpp"

using namespace sweepdescent;

TEST_CASE("level grid") {
  CHECK(level_grid(1.0, 1.5, 3) == std::vector<double>{1.0, 1.25, 1.5});
  CHECK(level_grid(1.0, 1.5, 1) == std::vector<double>{1.5});
}

TEST_CASE("moving map Lipschitz") {
  const auto n = verify_moving_map_lipschitz(*make_norm(2), 1.0, 1.5, 3, 1.0);
  CHECK(n.check.passed());
  CHECK(n.K_direct == doctest::Approx(1.0).epsilon(0.02));
  const auto t = verify_moving_map_lipschitz(*make_tube(), 0.5, 1.5, 3, 0.99);
  CHECK(t.check.passed());
  CHECK(t.K_direct <= 1.0 / 0.99 + 0.05);
  const auto c = verify_moving_map_lipschitz(*make_constant(2, 1.0), 0.5, 1.5, 3, 0.0);
  CHECK(c.check.status == CheckStatus::skipped);
  // An overstated slope bound is caught with a witness pair.
  const auto bad = verify_moving_map_lipschitz(*make_norm(2), 1.0, 1.5, 3, 4.0);
  CHECK(bad.check.failed());
  CHECK_FALSE(bad.check.witness.empty());
}

TEST_CASE("hypotheses") {
  const auto n = verify_hypotheses(*make_norm(2), 0.5, 1.5);
  CHECK(n.coercive.passed());
  CHECK(n.slope_bound.passed());
  CHECK(n.prox_regular.passed());
  CHECK(n.r_hat == doctest::Approx(0.5).epsilon(0.05));

  HypothesisOptions fast;
  fast.n_levels = 3;
  const auto g = verify_hypotheses(*make_gauge(), 0.9, 1.1);
  CHECK(g.prox_regular.failed());
  CHECK(g.r_hat < 0.15);
  CHECK_FALSE(g.prox_regular.witness.empty());

  const auto c = verify_hypotheses(*make_constant(2, 0.0), 0.5, 1.5, fast);
  CHECK_FALSE(c.coercive.passed());
}

TEST_CASE("localized regularization satisfies the hypotheses") {
  const auto h = regularize(make_function("localized:tube:1.5,0:0.4"), 0.2);
  HypothesisOptions o;
  o.n_levels = 3;
  const auto r = verify_hypotheses(*h, 0.3, 0.7, o);
  CHECK(r.coercive.passed());
  CHECK(r.slope_bound.passed());
  CHECK(r.prox_regular.passed());
  CHECK(r.r_hat >= 0.18);
}

TEST_CASE("U_eps membership") {
  CHECK(membership_U_epsilon(make_norm(2), 0.5, make_point({2.0, 0.0})));
  CHECK_FALSE(membership_U_epsilon(make_norm(2), 0.5, make_point({0.1, 0.0})));
  CHECK(membership_U_epsilon(make_tube(), 0.25, make_point({2.5, 0.0})));
}

TEST_CASE("steepest descent probe") {
  const auto fe = regularize(make_norm(2), 0.25);
  const auto starts = sample_U_epsilon(*fe, {make_point({-2, -2}), make_point({2, 2})}, 10, 0.8, 1.6, 3);
  CHECK(starts.size() == 10);
  for (const auto& s : starts) CHECK(membership_U_epsilon(make_norm(2), 0.25, s));
  const auto r = probe_steepest_descent(*fe, starts);
  CHECK(r.check.passed());
  CHECK(r.pass_fraction >= 0.95);
}

TEST_CASE("localization distance bound") {
  CHECK(hoffmann_localization_check(make_norm(2), make_point({0.5, 0.0}), 1.0, make_point({1.2, 0.0}), 0.8).passed());
  CHECK(hoffmann_localization_check(make_norm(2), make_point({0.5, 0.0}), 1.0, make_point({1.4, 0.3}), 0.6).passed());
  CHECK(hoffmann_localization_check(make_tube(), make_point({1.5, 0.0}), 0.4, make_point({1.8, 0.0}), 0.6).passed());
  // beta outside (min h, h(z)).
  CHECK(hoffmann_localization_check(make_norm(2), make_point({0.5, 0.0}), 1.0, make_point({1.2, 0.0}), 1.5).status ==
        CheckStatus::skipped);
}

TEST_CASE("suite on the norm") {
  SuiteConfig cfg;
  cfg.f = make_norm(2);
  cfg.descent_starts = 0;
  const auto r = run_suite(cfg);
  CHECK_FALSE(r.any_failed());
  REQUIRE(r.constants.ell_hat);
  CHECK(*r.constants.ell_hat == doctest::Approx(1.0).epsilon(1e-2));
  CHECK(*r.constants.K_hat == doctest::Approx(1.0).epsilon(1e-2));
  CHECK(r.find("null_set_avoidance")->status == CheckStatus::skipped);
  for (std::size_t i = 1; i < r.checks.size(); ++i) CHECK(r.checks[i - 1].name < r.checks[i].name);
  for (const auto& c : r.checks) CHECK_FALSE(c.anchor.empty());
}

TEST_CASE("failed prerequisites skip their consumers") {
  SuiteConfig cfg;
  cfg.f = make_gauge();
  cfg.alpha1 = 0.9;
  cfg.alpha2 = 1.1;
  const auto r = run_suite(cfg);
  CHECK(r.find("hypothesis_prox_regular")->failed());
  CHECK(r.find("flow_bilipschitz")->status == CheckStatus::skipped);
  CHECK(r.find("reverse_recovery")->status == CheckStatus::skipped);
  for (const auto& c : r.checks)
    if (c.failed()) CHECK_FALSE(c.witness.empty());
}

TEST_CASE("suite reports are deterministic") {
  SuiteConfig cfg;
  cfg.f = regularize(make_norm(2), 0.5);
  cfg.descent_starts = 4;
  cfg.seed = 17;
  const auto a = report_to_json(run_suite(cfg), {}, 0, 17).dump();
  const auto b = report_to_json(run_suite(cfg), {}, 0, 17).dump();
  CHECK(a == b);
}
