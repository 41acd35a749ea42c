// SPDX-License-Identifier: Apache-2.0
#include "ricsim/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

namespace ricsim::scenario {

const char* to_string(Mode m) {
  switch (m) {
    case Mode::NoDedup: return "no_dedup";
    case Mode::WholeRequestDedup: return "whole_request_dedup";
    case Mode::PerKpiMerge: return "per_kpi_merge";
  }
  return "?";
}

Mode mode_from_string(const std::string& s) {
  for (Mode m : kAllModes)
    if (s == to_string(m)) return m;
  throw InvalidArgument("unknown mode: " + s);
}

const char* to_string(Axis a) {
  switch (a) {
    case Axis::Redundancy: return "redundancy";
    case Axis::Nodes: return "nodes";
    case Axis::Kpis: return "kpis";
  }
  return "?";
}

Axis axis_from_string(const std::string& s) {
  for (Axis a : {Axis::Redundancy, Axis::Nodes, Axis::Kpis})
    if (s == to_string(a)) return a;
  throw InvalidArgument("unknown sweep axis: " + s);
}

TemporalSensitivity SensitivityPolicy::for_xapp(XAppId xapp) const {
  switch (kind) {
    case Kind::None: return {};
    case Kind::Fixed: return TemporalSensitivity{fixed_ms};
    case Kind::PerXApp: {
      if (per_xapp.empty()) return {};
      const auto& v = per_xapp[xapp.value % per_xapp.size()];
      return v ? TemporalSensitivity{*v} : TemporalSensitivity{};
    }
  }
  return {};
}

void ScenarioSpec::validate() const {
  if (nodes < 1 || kpis_per_node < 1) throw InvalidArgument("nodes and kpis_per_node must be >= 1");
  ReportPeriod{period_ms};
  if (!(redundancy >= 0 && redundancy <= 1)) throw InvalidArgument("redundancy must be in [0, 1]");
  if (!period_mix.empty()) {
    double sum = 0;
    for (const auto& pw : period_mix) {
      ReportPeriod{pw.period_ms};
      if (!(pw.weight > 0)) throw InvalidArgument("period_mix weights must be positive");
      sum += pw.weight;
    }
    if (std::abs(sum - 1.0) > 1e-9) throw InvalidArgument("period_mix weights must sum to 1");
  }
  if (sensitivity.kind == SensitivityPolicy::Kind::Fixed) TemporalSensitivity{sensitivity.fixed_ms};
  for (const auto& v : sensitivity.per_xapp)
    if (v) TemporalSensitivity{*v};
}

namespace {

// Weighted pick from the raw engine output so results do not depend on the
// standard library's distribution implementation.
std::int64_t draw_period(const ScenarioSpec& spec, std::mt19937_64& rng) {
  if (spec.period_mix.empty()) return spec.period_ms;
  const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
  double acc = 0;
  for (const auto& pw : spec.period_mix) {
    acc += pw.weight;
    if (u < acc) return pw.period_ms;
  }
  return spec.period_mix.back().period_ms;
}

}  // namespace

std::vector<SubscriptionRequest> build(const ScenarioSpec& spec) {
  spec.validate();
  std::mt19937_64 rng(spec.seed);
  const int k = spec.kpis_per_node;
  const int wanted = static_cast<int>(std::lround(spec.redundancy * k));
  int dups = 0;
  int unique = k;
  if (spec.basis == RedundancyBasis::Transmitted) {
    dups = std::min(wanted, k - 1);
    unique = k - dups;
  } else {
    dups = wanted;
  }
  const int chunk = spec.overlap == Overlap::Full ? unique : std::max(1, unique - 1);

  std::vector<SubscriptionRequest> out;
  for (int n = 0; n < spec.nodes; ++n) {
    const E2NodeId node{static_cast<std::uint64_t>(n + 1)};
    SubscriptionRequest primary{XAppId{0}, node, {}};
    for (int j = 0; j < unique; ++j)
      primary.items.push_back({KpiId{fmt::format("kpi.{}", j)}, ReportPeriod{draw_period(spec, rng)},
                               spec.sensitivity.for_xapp(XAppId{0})});
    std::vector<SubscriptionRequest> extra;
    for (int i = 0; i < dups; ++i) {
      const XAppId xapp{static_cast<std::uint64_t>(1 + i / chunk)};
      if (extra.empty() || extra.back().xapp != xapp) extra.push_back({xapp, node, {}});
      const auto& source = primary.items[static_cast<std::size_t>(i % unique)];
      const ReportPeriod period = spec.period_mix.empty() ? source.period : ReportPeriod{draw_period(spec, rng)};
      extra.back().items.push_back({source.kpi, period, spec.sensitivity.for_xapp(xapp)});
    }
    out.push_back(std::move(primary));
    for (auto& r : extra) out.push_back(std::move(r));
  }
  return out;
}

std::size_t Deployment::stream_count() const {
  std::size_t n = 0;
  for (const auto& p : plans) n += p.streams.size();
  return n;
}

namespace {

// Per (node, KPI): one stream per entry, each read by a set of xApps.
struct Baseline {
  struct Entry {
    ReportPeriod period;
    std::vector<XAppId> readers;
  };
  std::map<PairKey, std::vector<Entry>> pairs;

  std::vector<TransmissionPlan> plans() const {
    std::vector<TransmissionPlan> out;
    for (const auto& [key, entries] : pairs) {
      std::vector<const Entry*> order;
      for (const auto& e : entries) order.push_back(&e);
      std::stable_sort(order.begin(), order.end(),
                       [](const Entry* a, const Entry* b) { return a->period < b->period; });
      TransmissionPlan plan;
      for (std::size_t i = 0; i < order.size(); ++i) {
        plan.streams.push_back({key.node, key.kpi, order[i]->period});
        for (XAppId x : order[i]->readers) plan.fanout[x] = i;
      }
      out.push_back(std::move(plan));
    }
    return out;
  }
};

}  // namespace

Deployment deploy(std::span<const SubscriptionRequest> requests, Mode mode) {
  Deployment dep;
  for (const auto& r : requests) {
    auto d = decompose(r);
    dep.demands.insert(dep.demands.end(), d.begin(), d.end());
  }

  switch (mode) {
    case Mode::NoDedup: {
      Baseline b;
      for (const auto& d : dep.demands) b.pairs[PairKey{d.node, d.kpi}].push_back({d.period, {d.xapp}});
      dep.plans = b.plans();
      break;
    }
    case Mode::WholeRequestDedup: {
      // Representative request per fingerprint, plus the xApps riding on it.
      std::map<Fingerprint, std::pair<const SubscriptionRequest*, std::vector<XAppId>>> groups;
      std::vector<Fingerprint> order;
      for (const auto& r : requests) {
        const Fingerprint fp = request_fingerprint(r);
        auto [it, fresh] = groups.try_emplace(fp, &r, std::vector<XAppId>{});
        if (fresh) order.push_back(fp);
        it->second.second.push_back(r.xapp);
      }
      Baseline b;
      for (const auto& fp : order) {
        const auto& [rep, readers] = groups.at(fp);
        for (const auto& item : rep->items) b.pairs[PairKey{rep->node, item.kpi}].push_back({item.period, readers});
      }
      dep.plans = b.plans();
      break;
    }
    case Mode::PerKpiMerge: {
      MergeState state;
      for (const auto& d : dep.demands) state.add_demand(d);
      for (const auto& [key, plan] : state.plans()) dep.plans.push_back(plan);
      break;
    }
  }
  return dep;
}

ComparisonReport compare(const ScenarioSpec& spec, const power::PowerModel& model, const sim::SimConfig& cfg) {
  model.validate();
  const auto requests = build(spec);
  ComparisonReport report;
  for (Mode m : kAllModes) {
    const Deployment dep = deploy(requests, m);
    const sim::SimReport run = sim::run(dep.plans, dep.demands, cfg);
    ModeResult& r = report.modes[static_cast<std::size_t>(m)];
    r.mode = m;
    r.streams = dep.stream_count();
    r.sample_rate = total_sample_rate(dep.plans).value();
    r.bytes_per_sec = run.bytes_per_sec();
    r.gross_watts = power::predict(model, r.sample_rate);
    report.demands = dep.demands.size();
  }
  const double baseline = report.at(Mode::NoDedup).gross_watts;
  for (auto& r : report.modes) {
    r.saved_watts = baseline - r.gross_watts;
    r.saved_percent = baseline > 0 ? r.saved_watts / baseline * 100.0 : 0.0;
  }
  return report;
}

std::vector<SweepRow> sweep(const ScenarioSpec& base, Axis axis, std::span<const double> values,
                            const power::PowerModel& model, const sim::SimConfig& cfg) {
  if (values.empty()) throw InvalidArgument("sweep needs at least one value");
  std::vector<SweepRow> rows;
  rows.reserve(values.size());
  for (double v : values) {
    ScenarioSpec spec = base;
    switch (axis) {
      case Axis::Redundancy: spec.redundancy = v; break;
      case Axis::Nodes: spec.nodes = static_cast<int>(std::lround(v)); break;
      case Axis::Kpis: spec.kpis_per_node = static_cast<int>(std::lround(v)); break;
    }
    rows.push_back({v, compare(spec, model, cfg)});
  }
  return rows;
}

std::string to_csv(std::span<const SweepRow> rows, std::span<const Mode> modes) {
  std::string out = kCsvHeader;
  out += '\n';
  for (const auto& row : rows)
    for (Mode m : modes) {
      const ModeResult& r = row.report.at(m);
      out += fmt::format("{:g},{},{},{:.3f},{:.1f},{:.4f},{:.4f},{:.4f}\n", row.value, to_string(m), r.streams,
                         r.sample_rate, r.bytes_per_sec, r.gross_watts, r.saved_watts, r.saved_percent);
    }
  return out;
}

std::string to_json(std::span<const SweepRow> rows, std::span<const Mode> modes) {
  auto arr = nlohmann::json::array();
  for (const auto& row : rows)
    for (Mode m : modes) {
      const ModeResult& r = row.report.at(m);
      arr.push_back({{"sweep_value", row.value},
                     {"mode", to_string(m)},
                     {"streams", r.streams},
                     {"sample_rate", r.sample_rate},
                     {"bytes_per_sec", r.bytes_per_sec},
                     {"gross_watts", r.gross_watts},
                     {"saved_watts", r.saved_watts},
                     {"saved_pct", r.saved_percent}});
    }
  return arr.dump(2) + "\n";
}

}  // namespace ricsim::scenario
