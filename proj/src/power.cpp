// SPDX-License-Identifier: Apache-2.0
#include "ricsim/power.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ricsim/e2model.hpp"

namespace ricsim::power {

void PowerModel::validate() const {
  if (!(cpu_static_watts >= 0) || !(ric_static_watts >= cpu_static_watts))
    throw InvalidArgument("power model needs ric_static >= cpu_static >= 0");
  if (!(watts_per_sample_rate >= 0)) throw InvalidArgument("watts_per_sample_rate must be >= 0");
}

double predict(const PowerModel& model, double sample_rate) {
  if (!(sample_rate >= 0)) throw InvalidArgument("sample rate must be >= 0");
  return model.ric_static_watts + model.watts_per_sample_rate * sample_rate;
}

PowerModel calibrate(std::span<const MeasurementPoint> points) {
  if (points.size() < 2) throw InvalidArgument("calibration needs at least two points");
  double mean_x = 0, mean_y = 0;
  for (const auto& p : points) {
    if (!(p.sample_rate >= 0) || !(p.watts >= 0)) throw InvalidArgument("measurement values must be >= 0");
    mean_x += p.sample_rate;
    mean_y += p.watts;
  }
  const double n = static_cast<double>(points.size());
  mean_x /= n;
  mean_y /= n;
  double sxx = 0, sxy = 0;
  for (const auto& p : points) {
    sxx += (p.sample_rate - mean_x) * (p.sample_rate - mean_x);
    sxy += (p.sample_rate - mean_x) * (p.watts - mean_y);
  }
  if (sxx == 0) throw InvalidArgument("calibration points all share one sample rate");

  PowerModel m;
  m.watts_per_sample_rate = sxy / sxx;
  m.ric_static_watts = mean_y - m.watts_per_sample_rate * mean_x;
  m.cpu_static_watts = std::min(m.cpu_static_watts, std::max(0.0, m.ric_static_watts));
  m.validate();
  return m;
}

Savings savings(const PowerModel& model, double total_sample_rate, double redundancy) {
  if (!(redundancy >= 0 && redundancy <= 1)) throw InvalidArgument("redundancy fraction must be in [0, 1]");
  Savings s;
  s.gross_watts = predict(model, total_sample_rate);
  s.saved_watts = model.watts_per_sample_rate * redundancy * total_sample_rate;
  s.saved_percent = s.gross_watts > 0 ? s.saved_watts / s.gross_watts * 100.0 : 0.0;
  return s;
}

double project_nodes(const PowerModel& model, int kpis_per_node, int period_ms, int nodes) {
  if (kpis_per_node < 1 || period_ms < 1 || nodes < 0)
    throw InvalidArgument("project_nodes: kpis and period must be positive, nodes non-negative");
  return predict(model, static_cast<double>(nodes) * kpis_per_node * 1000.0 / period_ms);
}

}  // namespace ricsim::power
