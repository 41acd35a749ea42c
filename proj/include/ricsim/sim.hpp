// SPDX-License-Identifier: Apache-2.0
//
// Discrete-event replay of transmission plans: nodes emit on their stream
// periods from t = 0, xApps consume on their own periods, and the run counts
// messages, samples, bytes and the worst staleness each xApp saw.
#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>

#include "ricsim/merge.hpp"

namespace ricsim::sim {

enum class Batching {
  PerNodePeriod,  // one message per node per emission instant
  PerStream,      // one message per stream emission
};

const char* to_string(Batching b);
Batching batching_from_string(const std::string& s);

struct SimConfig {
  std::int64_t horizon_ms = 1000;
  std::int64_t header_bytes = 0;
  std::int64_t bytes_per_sample = 1000;
  Batching batching = Batching::PerNodePeriod;
};

struct SimReport {
  std::int64_t horizon_ms = 0;
  std::int64_t messages_sent = 0;
  std::int64_t samples_sent = 0;
  std::int64_t bytes_sent = 0;
  std::map<XAppId, std::int64_t> per_xapp_max_staleness;
  // Plans built outside the merge engine may repeat a spec; counts add up.
  std::map<StreamSpec, std::int64_t> per_stream_sample_counts;

  [[nodiscard]] double bytes_per_sec() const;
  bool operator==(const SimReport&) const = default;
};

/// Replays `plans` over [0, horizon). Every demand must be served by the plan
/// of its (node, KPI). Throws InvalidArgument on inconsistent input or a
/// horizon shorter than some period.
SimReport run(std::span<const TransmissionPlan> plans, std::span<const KpiDemand> demands,
              const SimConfig& cfg);

/// Brute force: sampling every `sample_period` and reading every
/// `consume_period`, both from t = 0, the largest (tick - latest sample)
/// over one LCM window.
std::int64_t staleness_oracle(std::int64_t sample_period, std::int64_t consume_period);

/// JSON with sorted keys:
/// {"bytes_sent","horizon_ms","messages_sent","samples_sent",
///  "per_stream_sample_counts":[{"kpi","node","period_ms","samples"}...],
///  "per_xapp_max_staleness":[{"max_staleness_ms","xapp"}...]}
/// Arrays follow ascending (node, kpi, period) and xApp id.
std::string to_json(const SimReport& report);

}  // namespace ricsim::sim
