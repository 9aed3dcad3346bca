#include <doctest.h>

#include <sstream>

#include "sweepdescent/io.hpp"

using namespace sweepdescent;

TEST_CASE("fnv1a and header") {
  CHECK(fnv1a("") == 0xcbf29ce484222325ULL);
  CHECK(fnv1a("a") == 0xaf63dc4c8601ec8cULL);
  CHECK(header_comment(0xabcULL, 7) == "# sweepdescent 0.1.0 config=0000000000000abc seed=7");
}

TEST_CASE("double formatting round-trips") {
  CHECK(format_double(0.1) == "0.1");
  CHECK(format_double(kInf) == "inf");
  CHECK(format_double(-kInf) == "-inf");
  Rng rng(1);
  for (int i = 0; i < 100; ++i) {
    const double v = rng.normal() * 1e3;
    CHECK(std::stod(format_double(v)) == v);
  }
}

TEST_CASE("trajectory csv") {
  SweepingConfig cfg;
  cfg.alpha2 = 2.0;
  cfg.T = 1.0;
  cfg.k = 4;
  const auto tr = forward_catching_up(*make_norm(2), make_point({2.0, 0.0}), cfg);
  std::ostringstream os;
  write_trajectory_csv(os, tr, "# c");
  std::istringstream is(os.str());
  std::string line;
  std::getline(is, line);
  CHECK(line == "# c");
  std::getline(is, line);
  CHECK(line == "step,t,level,x0,x1,f,speed,dist_to_boundary");
  std::getline(is, line);
  CHECK(line == "0,0,2,2,0,2,0,0");
  std::getline(is, line);
  CHECK(line == "1,0.25,1.75,1.75,0,1.75,1,0");
}

TEST_CASE("report json layout") {
  DiagnosticsReport r;
  r.constants.ell_hat = 1.0;
  CheckRecord c;
  c.name = "x";
  c.status = CheckStatus::fail;
  c.witness = {make_point({1.0, 2.0})};
  r.checks.push_back(c);
  const auto j = report_to_json(r, {{"a", 1}}, 5, 9);
  CHECK(j["seed"] == 9);
  CHECK(j["passed"] == false);
  CHECK(j["checks"][0]["status"] == "fail");
  CHECK(j["checks"][0]["witness"][0][1] == 2.0);
  CHECK(j["constants"]["ell_hat"] == 1.0);
  CHECK(j["constants"]["K_hat"].is_null());
  CHECK(j.begin().key() == "_header");
}
