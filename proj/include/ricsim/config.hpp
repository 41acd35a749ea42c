// SPDX-License-Identifier: Apache-2.0
//
// key = value config files with [section] headers, shared by scenario runs,
// the broker and xApp subscription files.
//
//   # comment
//   [scenario]   nodes, kpis_per_node, period_ms, redundancy, seed,
//                period_mix = 10:0.5, 15:0.5
//                sensitivity = none | fixed:<ms> | per_xapp:<ms|->,...
//                mode = no_dedup | whole_request_dedup | per_kpi_merge | all
//                overlap = partial | full
//                redundancy_basis = transmitted | additional
//   [power]      ric_static_watts, cpu_static_watts, watts_per_sample_rate
//   [sim]        horizon_ms, header_bytes, bytes_per_sample,
//                batching = per_node_period | per_stream
//   [sweep]      axis = redundancy | nodes | kpis
//                range = start:stop[:step]   (inclusive)  or  values = a,b,...
//   [broker]     stats_interval_ms
//   [subscription]  (repeatable) xapp, node, items = kpi:period[:sensitivity], ...
#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "ricsim/power.hpp"
#include "ricsim/scenario.hpp"
#include "ricsim/sim.hpp"

namespace ricsim::config {

class ConfigError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

struct SweepSpec {
  scenario::Axis axis = scenario::Axis::Redundancy;
  std::vector<double> values;
};

struct RunConfig {
  scenario::ScenarioSpec scenario;
  std::vector<scenario::Mode> output_modes{scenario::Mode::PerKpiMerge};
  power::PowerModel power;
  sim::SimConfig sim;
  std::optional<SweepSpec> sweep;
  std::int64_t stats_interval_ms = 1000;
  std::vector<SubscriptionRequest> subscriptions;
};

/// Throws ConfigError with "<origin>:<line>: message" on bad input.
RunConfig parse(const std::string& text, const std::string& origin = "<config>");

/// Throws ConfigError("cannot read <path>") when the file is unreadable.
RunConfig load(const std::filesystem::path& path);

/// "start:stop[:step]" inclusive; step defaults to 1.
std::vector<double> parse_range(const std::string& text);

}  // namespace ricsim::config
