// SPDX-License-Identifier: Apache-2.0
#include "ricsim/sim.hpp"

#include <algorithm>
#include <numeric>
#include <queue>
#include <tuple>
#include <vector>

#include <nlohmann/json.hpp>

namespace ricsim::sim {

const char* to_string(Batching b) {
  return b == Batching::PerNodePeriod ? "per_node_period" : "per_stream";
}

Batching batching_from_string(const std::string& s) {
  if (s == "per_node_period") return Batching::PerNodePeriod;
  if (s == "per_stream") return Batching::PerStream;
  throw InvalidArgument("unknown batching mode: " + s);
}

double SimReport::bytes_per_sec() const {
  return horizon_ms > 0 ? static_cast<double>(bytes_sent) * 1000.0 / static_cast<double>(horizon_ms) : 0.0;
}

namespace {

enum class Phase : int { Emit = 0, Consume = 1 };

// Ordered by (time, phase, node, period, index); emissions at an instant
// land before reads at the same instant.
struct Event {
  std::int64_t time;
  Phase phase;
  std::uint64_t node;
  std::int64_t period;
  std::size_t index;

  auto key() const { return std::tie(time, phase, node, period, index); }
  bool operator>(const Event& o) const { return key() > o.key(); }
};

struct Stream {
  StreamSpec spec;
  std::int64_t last_emit = -1;
  std::int64_t emitted = 0;
};

struct Consumer {
  XAppId xapp;
  std::uint64_t node;
  std::int64_t period;
  std::size_t stream;
};

}  // namespace

SimReport run(std::span<const TransmissionPlan> plans, std::span<const KpiDemand> demands,
              const SimConfig& cfg) {
  if (cfg.horizon_ms < 1) throw InvalidArgument("horizon must be positive");
  if (cfg.header_bytes < 0 || cfg.bytes_per_sample < 1)
    throw InvalidArgument("header_bytes must be >= 0 and bytes_per_sample >= 1");

  std::vector<Stream> streams;
  std::map<PairKey, std::pair<const TransmissionPlan*, std::size_t>> by_pair;  // plan, first stream index
  for (const auto& plan : plans) {
    if (plan.streams.empty()) throw InvalidArgument("plan without streams");
    PairKey key{plan.streams.front().node, plan.streams.front().kpi};
    if (!by_pair.emplace(key, std::make_pair(&plan, streams.size())).second)
      throw InvalidArgument("two plans for node " + std::to_string(key.node.value) + " kpi " + key.kpi.name());
    for (const auto& s : plan.streams) {
      if (s.period.millis() > cfg.horizon_ms)
        throw InvalidArgument("horizon " + std::to_string(cfg.horizon_ms) + " ms shorter than stream period " +
                              std::to_string(s.period.millis()) + " ms");
      streams.push_back({s});
    }
  }

  std::vector<Consumer> consumers;
  consumers.reserve(demands.size());
  for (const auto& d : demands) {
    auto it = by_pair.find(PairKey{d.node, d.kpi});
    if (it == by_pair.end()) throw InvalidArgument("demand on kpi " + d.kpi.name() + " has no plan");
    const auto& [plan, base] = it->second;
    auto f = plan->fanout.find(d.xapp);
    if (f == plan->fanout.end() || f->second >= plan->streams.size())
      throw InvalidArgument("xapp " + std::to_string(d.xapp.value) + " not in fanout for kpi " + d.kpi.name());
    if (d.period.millis() > cfg.horizon_ms)
      throw InvalidArgument("horizon shorter than requested period " + std::to_string(d.period.millis()) + " ms");
    consumers.push_back({d.xapp, d.node.value, d.period.millis(), base + f->second});
  }

  std::priority_queue<Event, std::vector<Event>, std::greater<>> queue;
  for (std::size_t i = 0; i < streams.size(); ++i)
    queue.push({0, Phase::Emit, streams[i].spec.node.value, streams[i].spec.period.millis(), i});
  for (std::size_t i = 0; i < consumers.size(); ++i)
    queue.push({0, Phase::Consume, consumers[i].node, consumers[i].period, i});

  SimReport report;
  report.horizon_ms = cfg.horizon_ms;
  for (const auto& c : consumers) report.per_xapp_max_staleness.emplace(c.xapp, 0);

  bool batch_open = false;
  std::int64_t batch_time = 0;
  std::uint64_t batch_node = 0;
  std::int64_t batch_samples = 0;
  const auto flush = [&] {
    if (!batch_open) return;
    report.messages_sent += 1;
    report.bytes_sent += cfg.header_bytes + batch_samples * cfg.bytes_per_sample;
    batch_open = false;
    batch_samples = 0;
  };

  while (!queue.empty()) {
    const Event ev = queue.top();
    queue.pop();
    if (ev.phase == Phase::Emit) {
      Stream& s = streams[ev.index];
      s.last_emit = ev.time;
      s.emitted += 1;
      report.samples_sent += 1;
      if (cfg.batching == Batching::PerStream) {
        report.messages_sent += 1;
        report.bytes_sent += cfg.header_bytes + cfg.bytes_per_sample;
      } else {
        if (batch_open && (batch_time != ev.time || batch_node != ev.node)) flush();
        if (!batch_open) {
          batch_open = true;
          batch_time = ev.time;
          batch_node = ev.node;
        }
        batch_samples += 1;
      }
    } else {
      flush();
      const Consumer& c = consumers[ev.index];
      const std::int64_t staleness = ev.time - streams[c.stream].last_emit;
      auto& worst = report.per_xapp_max_staleness[c.xapp];
      worst = std::max(worst, staleness);
    }
    const std::int64_t next = ev.time + ev.period;
    if (next < cfg.horizon_ms) queue.push({next, ev.phase, ev.node, ev.period, ev.index});
  }
  flush();

  for (const auto& s : streams) report.per_stream_sample_counts[s.spec] += s.emitted;
  return report;
}

std::int64_t staleness_oracle(std::int64_t sample_period, std::int64_t consume_period) {
  if (sample_period < 1 || consume_period < 1) throw InvalidArgument("periods must be >= 1");
  const std::int64_t window = std::lcm(sample_period, consume_period);
  std::int64_t worst = 0;
  std::int64_t latest = 0;
  std::int64_t next_sample = 0;
  for (std::int64_t tick = 0; tick < window; tick += consume_period) {
    while (next_sample <= tick) {
      latest = next_sample;
      next_sample += sample_period;
    }
    worst = std::max(worst, tick - latest);
  }
  return worst;
}

std::string to_json(const SimReport& report) {
  nlohmann::json j;
  j["horizon_ms"] = report.horizon_ms;
  j["messages_sent"] = report.messages_sent;
  j["samples_sent"] = report.samples_sent;
  j["bytes_sent"] = report.bytes_sent;
  auto& streams = j["per_stream_sample_counts"] = nlohmann::json::array();
  for (const auto& [spec, count] : report.per_stream_sample_counts)
    streams.push_back({{"node", spec.node.value}, {"kpi", spec.kpi.name()},
                       {"period_ms", spec.period.millis()}, {"samples", count}});
  auto& xapps = j["per_xapp_max_staleness"] = nlohmann::json::array();
  for (const auto& [xapp, worst] : report.per_xapp_max_staleness)
    xapps.push_back({{"xapp", xapp.value}, {"max_staleness_ms", worst}});
  return j.dump(2);
}

}  // namespace ricsim::sim
