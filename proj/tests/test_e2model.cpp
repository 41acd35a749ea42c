// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <map>
#include <random>

#include "ricsim/e2model.hpp"

using namespace ricsim;

namespace {

RequestItem item(const char* kpi, std::int64_t period, std::optional<std::int64_t> sens = std::nullopt) {
  return {KpiId{kpi}, ReportPeriod{period}, sens ? TemporalSensitivity{*sens} : TemporalSensitivity{}};
}

SubscriptionRequest random_request(std::mt19937_64& rng) {
  static const char* names[] = {"DRB.UEThpDl", "DRB.UEThpUl", "RRU.PrbUsedDl", "a", "b"};
  SubscriptionRequest r{XAppId{rng() % 3}, E2NodeId{rng() % 2}, {}};
  std::vector<int> idx{0, 1, 2, 3, 4};
  std::shuffle(idx.begin(), idx.end(), rng);
  const int n = 1 + static_cast<int>(rng() % 3);
  for (int i = 0; i < n; ++i) {
    const std::int64_t period = (rng() % 2) ? 10 : 20;
    std::optional<std::int64_t> sens;
    if (rng() % 3 == 0) sens = 5;
    r.items.push_back(item(names[idx[static_cast<std::size_t>(i)]], period, sens));
  }
  return r;
}

}  // namespace

TEST_CASE("domain values reject out-of-range input") {
  CHECK_THROWS_AS(KpiId{""}, InvalidArgument);
  CHECK_THROWS_AS(ReportPeriod{0}, InvalidArgument);
  CHECK_THROWS_AS(ReportPeriod{3'600'001}, InvalidArgument);
  CHECK_NOTHROW(ReportPeriod{3'600'000});
  CHECK_THROWS_AS(TemporalSensitivity{0}, InvalidArgument);
  CHECK_FALSE(TemporalSensitivity{}.present());
}

TEST_CASE("decompose copies items in order") {
  SUBCASE("single item") {
    const auto d = decompose({XAppId{1}, E2NodeId{1}, {item("a", 10)}});
    REQUIRE(d.size() == 1);
    CHECK(d[0] == KpiDemand{XAppId{1}, E2NodeId{1}, KpiId{"a"}, ReportPeriod{10}, {}});
  }
  SUBCASE("two items keep order and sensitivity") {
    const auto d = decompose({XAppId{1}, E2NodeId{1}, {item("a", 10), item("b", 20, 5)}});
    REQUIRE(d.size() == 2);
    CHECK(d[0].kpi.name() == "a");
    CHECK(d[1].kpi.name() == "b");
    CHECK(d[1].period.millis() == 20);
    CHECK(d[1].sensitivity.delta_millis() == 5);
  }
  SUBCASE("duplicate KPI is rejected with the offending id") {
    try {
      decompose({XAppId{1}, E2NodeId{1}, {item("a", 10), item("a", 20)}});
      FAIL("expected DuplicateKpiError");
    } catch (const DuplicateKpiError& e) {
      CHECK(e.kpi().name() == "a");
    }
  }
  SUBCASE("empty request") { CHECK_THROWS_AS(decompose({XAppId{1}, E2NodeId{1}, {}}), InvalidArgument); }
}

TEST_CASE("decompose is lossless") {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 500; ++i) {
    const auto req = random_request(rng);
    const auto demands = decompose(req);
    SubscriptionRequest rebuilt{demands.front().xapp, demands.front().node, {}};
    for (const auto& d : demands) {
      CHECK(d.xapp == req.xapp);
      CHECK(d.node == req.node);
      rebuilt.items.push_back({d.kpi, d.period, d.sensitivity});
    }
    CHECK(rebuilt == req);
  }
}

TEST_CASE("canonical bytes follow the documented layout") {
  const SubscriptionRequest r{XAppId{9}, E2NodeId{2}, {item("ab", 10), item("c", 20, 5)}};
  const std::vector<std::uint8_t> expected{
      0, 0, 0, 0, 0, 0, 0, 2,           // node
      0, 0, 0, 2, 'a', 'b',             // name
      0, 0, 0, 0, 0, 0, 0, 10,          // period
      0,                                // no sensitivity
      0, 0, 0, 1, 'c',                  //
      0, 0, 0, 0, 0, 0, 0, 20,          //
      1, 0, 0, 0, 0, 0, 0, 0, 5,        // sensitivity 5 ms
  };
  CHECK(canonical_bytes(r) == expected);
}

TEST_CASE("request fingerprint") {
  const SubscriptionRequest base{XAppId{1}, E2NodeId{1}, {item("a", 10), item("b", 10)}};
  SUBCASE("identical content from two xApps collides") {
    auto other = base;
    other.xapp = XAppId{2};
    CHECK(request_fingerprint(base) == request_fingerprint(other));
  }
  SUBCASE("different period differs") {
    auto other = base;
    other.items[0].period = ReportPeriod{20};
    CHECK(request_fingerprint(base) != request_fingerprint(other));
  }
  SUBCASE("reordered items differ") {
    auto other = base;
    std::swap(other.items[0], other.items[1]);
    CHECK(request_fingerprint(base) != request_fingerprint(other));
  }
  SUBCASE("different node differs") {
    auto other = base;
    other.node = E2NodeId{2};
    CHECK(request_fingerprint(base) != request_fingerprint(other));
  }
}

TEST_CASE("fingerprint equality matches canonical byte equality") {
  std::mt19937_64 rng(5);
  std::vector<SubscriptionRequest> pool;
  for (int i = 0; i < 300; ++i) pool.push_back(random_request(rng));
  for (const auto& a : pool)
    for (const auto& b : pool) {
      const bool same_bytes = canonical_bytes(a) == canonical_bytes(b);
      CHECK((request_fingerprint(a) == request_fingerprint(b)) == same_bytes);
    }
}

TEST_CASE("indication validation") {
  CHECK_THROWS_AS(validate(IndicationMessage{E2NodeId{1}, 10, {}}), InvalidArgument);
  CHECK_THROWS_AS(validate(IndicationMessage{E2NodeId{1}, 10, {{KpiId{"a"}, 11}}}), InvalidArgument);
  CHECK_NOTHROW(validate(IndicationMessage{E2NodeId{1}, 10, {{KpiId{"a"}, 10}}}));
}
