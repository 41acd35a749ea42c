// SPDX-License-Identifier: Apache-2.0
//
// Synthetic deployments with controlled redundancy, run through the three
// subscription handling modes and priced with the power model.
#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ricsim/e2model.hpp"
#include "ricsim/merge.hpp"
#include "ricsim/power.hpp"
#include "ricsim/sim.hpp"

namespace ricsim::scenario {

enum class Mode { NoDedup, WholeRequestDedup, PerKpiMerge };

inline constexpr std::array<Mode, 3> kAllModes{Mode::NoDedup, Mode::WholeRequestDedup, Mode::PerKpiMerge};

const char* to_string(Mode m);
Mode mode_from_string(const std::string& s);

/// How duplicate demands are packed into requests.
enum class Overlap {
  Partial,  // strict subsets of the primary request, pairwise distinct up to u * (u - 1) duplicates
  Full,     // verbatim copies of the primary request where possible
};

/// What the redundancy fraction is a fraction of.
enum class RedundancyBasis {
  Transmitted,  // kpis_per_node slots per node, round(r * k) of them duplicates
  Additional,   // kpis_per_node unique streams plus round(r * k) duplicates
};

struct PeriodWeight {
  std::int64_t period_ms = 10;
  double weight = 1.0;
};

struct SensitivityPolicy {
  enum class Kind { None, Fixed, PerXApp } kind = Kind::None;
  std::int64_t fixed_ms = 0;
  std::vector<std::optional<std::int64_t>> per_xapp;  // indexed by xApp id, cycled

  [[nodiscard]] TemporalSensitivity for_xapp(XAppId xapp) const;
};

struct ScenarioSpec {
  int nodes = 1;
  int kpis_per_node = 1;
  std::int64_t period_ms = 10;
  double redundancy = 0.0;
  std::vector<PeriodWeight> period_mix;  // empty: all streams at period_ms
  SensitivityPolicy sensitivity;
  Mode mode = Mode::PerKpiMerge;
  Overlap overlap = Overlap::Partial;
  RedundancyBasis basis = RedundancyBasis::Transmitted;
  std::uint64_t seed = 1;

  void validate() const;
};

/// Requests, node-major. xApp 0 asks each node for its unique KPIs
/// ("kpi.0", "kpi.1", ...); xApps 1.. carry the duplicates.
std::vector<SubscriptionRequest> build(const ScenarioSpec& spec);

/// Plans and demands for the sim under one handling mode.
struct Deployment {
  std::vector<TransmissionPlan> plans;
  std::vector<KpiDemand> demands;

  [[nodiscard]] std::size_t stream_count() const;
};

Deployment deploy(std::span<const SubscriptionRequest> requests, Mode mode);

struct ModeResult {
  Mode mode = Mode::NoDedup;
  std::size_t streams = 0;
  double sample_rate = 0;
  double bytes_per_sec = 0;
  double gross_watts = 0;
  double saved_watts = 0;    // vs NoDedup
  double saved_percent = 0;  // of NoDedup gross
};

struct ComparisonReport {
  std::size_t demands = 0;
  std::array<ModeResult, 3> modes;  // NoDedup, WholeRequestDedup, PerKpiMerge

  [[nodiscard]] const ModeResult& at(Mode m) const { return modes[static_cast<std::size_t>(m)]; }
};

ComparisonReport compare(const ScenarioSpec& spec, const power::PowerModel& model, const sim::SimConfig& cfg);

enum class Axis { Redundancy, Nodes, Kpis };

const char* to_string(Axis a);
Axis axis_from_string(const std::string& s);

struct SweepRow {
  double value = 0;
  ComparisonReport report;
};

/// One comparison per value, in the given order. Throws on an empty list.
std::vector<SweepRow> sweep(const ScenarioSpec& base, Axis axis, std::span<const double> values,
                            const power::PowerModel& model, const sim::SimConfig& cfg);

inline constexpr const char* kCsvHeader =
    "sweep_value,mode,streams,sample_rate,bytes_per_sec,gross_watts,saved_watts,saved_pct";

std::string to_csv(std::span<const SweepRow> rows, std::span<const Mode> modes);
std::string to_json(std::span<const SweepRow> rows, std::span<const Mode> modes);

}  // namespace ricsim::scenario
