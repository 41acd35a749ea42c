// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>
#include <map>
#include <set>

#include "ricsim/scenario.hpp"

using namespace ricsim;
using namespace ricsim::scenario;

namespace {

std::size_t demand_count(const std::vector<SubscriptionRequest>& reqs) {
  std::size_t n = 0;
  for (const auto& r : reqs) n += r.items.size();
  return n;
}

ScenarioSpec spec_of(int nodes, int kpis, double r) {
  ScenarioSpec s;
  s.nodes = nodes;
  s.kpis_per_node = kpis;
  s.redundancy = r;
  return s;
}

sim::SimConfig short_run() {
  sim::SimConfig c;
  c.horizon_ms = 20;
  return c;
}

}  // namespace

TEST_CASE("build with additional redundancy") {
  auto s = spec_of(10, 20, 0.0);
  s.basis = RedundancyBasis::Additional;
  CHECK(demand_count(build(s)) == 200);
  s.redundancy = 0.5;
  const auto reqs = build(s);
  CHECK(demand_count(reqs) == 300);
  std::size_t primary = 0;
  for (const auto& r : reqs)
    if (r.xapp == XAppId{0}) primary += r.items.size();
  CHECK(primary == 200);
}

TEST_CASE("build with transmitted redundancy") {
  auto s = spec_of(10, 20, 0.5);
  const auto reqs = build(s);
  CHECK(demand_count(reqs) == 200);
  std::set<std::pair<std::uint64_t, std::string>> unique;
  for (const auto& r : reqs)
    for (const auto& i : r.items) unique.emplace(r.node.value, i.kpi.name());
  CHECK(unique.size() == 100);
  s.redundancy = 1.0;
  CHECK(demand_count(build(s)) == 200);
}

TEST_CASE("build is deterministic per seed") {
  auto s = spec_of(4, 9, 0.4);
  s.period_mix = {{10, 0.5}, {15, 0.3}, {20, 0.2}};
  CHECK(build(s) == build(s));
  auto t = s;
  t.seed = 2;
  CHECK(build(t) != build(s));
}

TEST_CASE("duplicates hide inside requests that differ") {
  auto s = spec_of(3, 6, 0.5);
  for (const auto& r : build(s)) {
    if (r.xapp == XAppId{0}) {
      CHECK(r.items.size() == 3);
    } else {
      CHECK(r.items.size() < 3);
    }
  }
}

TEST_CASE("exact-duplicate redundancy removes exactly the duplicates") {
  const power::PowerModel m;
  // Past d = u * (u - 1) duplicates per node (u unique KPIs) some
  // duplicate-carrying requests repeat each other and hashing catches them.
  for (double r : {0.0, 0.1, 0.3, 0.5}) {
    auto s = spec_of(5, 10, r);
    const auto rep = compare(s, m, short_run());
    const auto& base = rep.at(Mode::NoDedup);
    const auto& merged = rep.at(Mode::PerKpiMerge);
    const int dups = static_cast<int>(std::lround(r * 10));
    CHECK(merged.streams == static_cast<std::size_t>(5 * (10 - dups)));
    CHECK(merged.saved_watts == doctest::Approx(r * m.watts_per_sample_rate * base.sample_rate));
    CHECK(rep.at(Mode::WholeRequestDedup).saved_watts == 0.0);
    CHECK(merged.sample_rate <= rep.at(Mode::WholeRequestDedup).sample_rate);
    CHECK(rep.at(Mode::WholeRequestDedup).sample_rate <= base.sample_rate);
  }
}

TEST_CASE("dense redundancy repeats duplicate-carrying requests") {
  // 3 unique KPIs, 27 duplicates: more requests than distinct proper subsets.
  const auto rep = compare(spec_of(1, 30, 0.9), power::PowerModel{}, short_run());
  CHECK(rep.at(Mode::WholeRequestDedup).saved_watts > 0);
  CHECK(rep.at(Mode::WholeRequestDedup).saved_watts < rep.at(Mode::PerKpiMerge).saved_watts);
}

TEST_CASE("whole-request dedup catches verbatim copies") {
  auto s = spec_of(2, 4, 1.0);
  s.basis = RedundancyBasis::Additional;
  s.overlap = Overlap::Full;
  const auto rep = compare(s, power::PowerModel{}, short_run());
  CHECK(rep.at(Mode::WholeRequestDedup).streams == 8);
  CHECK(rep.at(Mode::PerKpiMerge).streams == 8);
  CHECK(rep.at(Mode::NoDedup).streams == 16);
  CHECK(rep.at(Mode::WholeRequestDedup).saved_watts > 0);
}

TEST_CASE("compare examples at the reference scales") {
  const power::PowerModel m;
  sim::SimConfig c;
  c.horizon_ms = 10;
  const auto small = compare(spec_of(10, 20, 0.9), m, c).at(Mode::PerKpiMerge);
  CHECK(small.saved_watts == doctest::Approx(8.4).epsilon(0.2 / 8.4));
  const auto medium = compare(spec_of(100, 50, 0.1), m, c).at(Mode::PerKpiMerge);
  CHECK(medium.saved_watts == doctest::Approx(23.4).epsilon(0.5 / 23.4));
  CHECK(medium.saved_percent == doctest::Approx(8.7).epsilon(0.1 / 8.7));
}

TEST_CASE("heterogeneous periods keep the ordering invariant") {
  const power::PowerModel m;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    auto s = spec_of(3, 8, 0.5);
    s.seed = seed;
    s.period_mix = {{10, 0.4}, {15, 0.3}, {20, 0.3}};
    s.sensitivity.kind = SensitivityPolicy::Kind::PerXApp;
    s.sensitivity.per_xapp = {std::nullopt, 6, 3};
    sim::SimConfig c;
    c.horizon_ms = 60;
    const auto rep = compare(s, m, c);
    CHECK(rep.at(Mode::PerKpiMerge).sample_rate <= rep.at(Mode::WholeRequestDedup).sample_rate + 1e-9);
    CHECK(rep.at(Mode::WholeRequestDedup).sample_rate <= rep.at(Mode::NoDedup).sample_rate + 1e-9);
  }
}

TEST_CASE("deploy no-dedup transmits every demand") {
  auto s = spec_of(2, 5, 0.4);
  const auto reqs = build(s);
  const auto dep = deploy(reqs, Mode::NoDedup);
  CHECK(dep.stream_count() == dep.demands.size());
}

TEST_CASE("sweep and CSV") {
  const power::PowerModel m;
  auto s = spec_of(1, 7, 0.0);
  s.mode = Mode::NoDedup;
  std::vector<double> nodes;
  for (int n = 1; n <= 60; ++n) nodes.push_back(n);
  sim::SimConfig c;
  c.horizon_ms = 10;
  const auto rows = sweep(s, Axis::Nodes, nodes, m, c);
  REQUIRE(rows.size() == 60);
  for (std::size_t i = 1; i < rows.size(); ++i)
    CHECK(rows[i].report.at(Mode::NoDedup).gross_watts > rows[i - 1].report.at(Mode::NoDedup).gross_watts);
  CHECK(rows.back().report.at(Mode::NoDedup).gross_watts == doctest::Approx(54.1).epsilon(0.1 / 54.1));

  const std::vector<Mode> modes{Mode::NoDedup};
  const auto csv = to_csv(std::span(rows).first(2), modes);
  CHECK(csv == std::string(kCsvHeader) +
                   "\n1,no_dedup,7,700.000,700000.0,34.8272,0.0000,0.0000\n"
                   "2,no_dedup,14,1400.000,1400000.0,35.1544,0.0000,0.0000\n");
  const auto again = sweep(s, Axis::Nodes, nodes, m, c);
  CHECK(csv == to_csv(std::span(again).first(2), modes));
  CHECK_THROWS_AS(sweep(s, Axis::Nodes, std::span<const double>{}, m, c), InvalidArgument);
}

TEST_CASE("spec validation and names") {
  auto s = spec_of(0, 5, 0.1);
  CHECK_THROWS_AS(build(s), InvalidArgument);
  s = spec_of(1, 5, 1.5);
  CHECK_THROWS_AS(build(s), InvalidArgument);
  s = spec_of(1, 5, 0.1);
  s.period_mix = {{10, 0.5}, {20, 0.4}};
  CHECK_THROWS_AS(build(s), InvalidArgument);
  for (Mode mode : kAllModes) CHECK(mode_from_string(to_string(mode)) == mode);
  CHECK_THROWS_AS(mode_from_string("fastest"), InvalidArgument);
  CHECK(axis_from_string("kpis") == Axis::Kpis);
}
