// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <random>
#include <vector>

#include "ricsim/e2model.hpp"
#include "ricsim/power.hpp"

using namespace ricsim;
using namespace ricsim::power;

TEST_CASE("predict anchors") {
  const PowerModel m;
  CHECK(predict(m, 0) == doctest::Approx(34.5));
  CHECK(predict(m, 20'000) == doctest::Approx(43.8).epsilon(0.2 / 43.8));
  CHECK(predict(m, 500'000) == doctest::Approx(268.2).epsilon(1e-9));
  CHECK_THROWS_AS(predict(m, -1), InvalidArgument);
}

TEST_CASE("calibrate") {
  SUBCASE("two anchors give the default slope") {
    const std::vector<MeasurementPoint> pts{{0, 34.5}, {500'000, 268.2}};
    const auto m = calibrate(pts);
    CHECK(m.watts_per_sample_rate == doctest::Approx(4.674e-4).epsilon(1e-9));
    CHECK(m.ric_static_watts == doctest::Approx(34.5));
    CHECK(m.cpu_static_watts == doctest::Approx(28.0));
  }
  SUBCASE("one point is rejected") {
    const std::vector<MeasurementPoint> pts{{0, 34.5}};
    CHECK_THROWS_AS(calibrate(pts), InvalidArgument);
  }
  SUBCASE("identical rates are rejected") {
    const std::vector<MeasurementPoint> pts{{10, 34.5}, {10, 40}};
    CHECK_THROWS_AS(calibrate(pts), InvalidArgument);
  }
  SUBCASE("exact linear points are recovered") {
    std::mt19937_64 rng(3);
    for (int iter = 0; iter < 50; ++iter) {
      const double slope = 1e-5 + static_cast<double>(rng() % 1000) * 1e-6;
      const double icpt = 30 + static_cast<double>(rng() % 100) / 10.0;
      std::vector<MeasurementPoint> pts;
      for (int i = 0; i < 8; ++i) {
        const double x = static_cast<double>(rng() % 1'000'000);
        pts.push_back({x, icpt + slope * x});
      }
      pts.push_back({0, icpt});
      pts.push_back({1'000'000, icpt + slope * 1e6});
      const auto m = calibrate(pts);
      REQUIRE(std::abs(m.watts_per_sample_rate - slope) / slope < 1e-9);
      REQUIRE(m.ric_static_watts == doctest::Approx(icpt).epsilon(1e-9));
    }
  }
  SUBCASE("low intercept pulls the CPU figure down") {
    const std::vector<MeasurementPoint> pts{{0, 10}, {1000, 11}};
    const auto m = calibrate(pts);
    CHECK(m.cpu_static_watts == doctest::Approx(10));
  }
}

TEST_CASE("savings examples") {
  const PowerModel m;
  const auto small = savings(m, 20'000, 0.9);
  CHECK(small.saved_watts == doctest::Approx(8.4).epsilon(0.2 / 8.4));
  CHECK(small.saved_percent == doctest::Approx(19.2).epsilon(1.0 / 19.2));
  const auto medium = savings(m, 500'000, 0.1);
  CHECK(medium.saved_watts == doctest::Approx(23.4).epsilon(0.5 / 23.4));
  CHECK(medium.saved_percent == doctest::Approx(8.7).epsilon(0.1 / 8.7));
  CHECK(savings(m, 3'000'000, 0.1).saved_watts == doctest::Approx(140.2).epsilon(0.1 / 140.2));
  CHECK(savings(m, 500'000, 0.9).saved_watts == doctest::Approx(210.3).epsilon(0.02));
  const auto large = savings(m, 3'000'000, 0.9);
  CHECK(large.saved_watts == doctest::Approx(1262).epsilon(0.02));
  CHECK(large.saved_percent == doctest::Approx(88.0).epsilon(0.02));
  CHECK_THROWS_AS(savings(m, 100, 1.5), InvalidArgument);
}

TEST_CASE("project_nodes") {
  const PowerModel m;
  CHECK(project_nodes(m, 7, 10, 60) == doctest::Approx(54.1).epsilon(0.1 / 54.1));
  CHECK(project_nodes(m, 80, 10, 4) == doctest::Approx(49.5).epsilon(0.1 / 49.5));
  CHECK(project_nodes(m, 7, 10, 0) == doctest::Approx(34.5));
  CHECK_THROWS_AS(project_nodes(m, 0, 10, 1), InvalidArgument);
}

TEST_CASE("affine and linear properties") {
  const PowerModel m;
  std::mt19937_64 rng(8);
  for (int iter = 0; iter < 500; ++iter) {
    const double a = static_cast<double>(rng() % 3'000'000);
    const double b = static_cast<double>(rng() % 3'000'000);
    REQUIRE(predict(m, a) + predict(m, b) - m.ric_static_watts == doctest::Approx(predict(m, a + b)));
    const double r1 = static_cast<double>(rng() % 1000) / 1000.0;
    const double r2 = static_cast<double>(rng() % 1000) / 1000.0;
    const auto s1 = savings(m, a, r1), s2 = savings(m, a, r2);
    if (r1 <= r2) REQUIRE(s1.saved_watts <= s2.saved_watts);
    REQUIRE(savings(m, a, 0).saved_watts == 0);
    REQUIRE(savings(m, a, 1).saved_watts == doctest::Approx(predict(m, a) - m.ric_static_watts));
    if (r1 > 0) REQUIRE(s1.saved_watts / r1 == doctest::Approx(savings(m, a, 1).saved_watts));
  }
}

TEST_CASE("model validation") {
  PowerModel m;
  CHECK_NOTHROW(m.validate());
  m.cpu_static_watts = 40;
  CHECK_THROWS_AS(m.validate(), InvalidArgument);
  m = {};
  m.watts_per_sample_rate = -1;
  CHECK_THROWS_AS(m.validate(), InvalidArgument);
}
