// SPDX-License-Identifier: Apache-2.0
//
// Linear RIC host power model driven by the aggregate KPI sample rate.
#pragma once

#include <span>

namespace ricsim::power {

/// Slope from the two anchors (0 samples/s -> 34.5 W, 500000 -> 268.2 W).
inline constexpr double kDefaultWattsPerSampleRate = (268.2 - 34.5) / 500'000.0;

struct PowerModel {
  double cpu_static_watts = 28.0;  // server idle, no RIC; informational
  double ric_static_watts = 34.5;  // RIC running, no E2 traffic
  double watts_per_sample_rate = kDefaultWattsPerSampleRate;

  /// Throws InvalidArgument unless ric >= cpu >= 0 and slope >= 0.
  void validate() const;
};

struct MeasurementPoint {
  double sample_rate = 0;  // samples/s
  double watts = 0;
};

struct Savings {
  double gross_watts = 0;
  double saved_watts = 0;
  double saved_percent = 0;
};

double predict(const PowerModel& model, double sample_rate);

/// Ordinary least squares line through the points. Needs at least two
/// distinct rates. The fitted intercept becomes ric_static_watts; the CPU
/// static figure is kept at the default unless the intercept is lower.
PowerModel calibrate(std::span<const MeasurementPoint> points);

/// A fraction `redundancy` of the transmitted rate is duplicate traffic the
/// merge removes.
Savings savings(const PowerModel& model, double total_sample_rate, double redundancy);

/// predict() for `nodes` nodes each reporting `kpis_per_node` KPIs every
/// `period_ms`.
double project_nodes(const PowerModel& model, int kpis_per_node, int period_ms, int nodes);

}  // namespace ricsim::power
