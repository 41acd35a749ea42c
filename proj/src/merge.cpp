// SPDX-License-Identifier: Apache-2.0
#include "ricsim/merge.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <stdexcept>

namespace ricsim {

const char* to_string(MergeKind kind) {
  switch (kind) {
    case MergeKind::Dedup: return "dedup";
    case MergeKind::MinPeriod: return "min_period";
    case MergeKind::GcdMerge: return "gcd_merge";
    case MergeKind::Duplicate: return "duplicate";
  }
  return "?";
}

const char* to_string(ChangeAction action) {
  switch (action) {
    case ChangeAction::Add: return "add";
    case ChangeAction::Remove: return "remove";
    case ChangeAction::Retime: return "retime";
  }
  return "?";
}

std::int64_t gcd_ms(ReportPeriod a, ReportPeriod b) { return std::gcd(a.millis(), b.millis()); }

std::int64_t lcm_ms(std::int64_t a, std::int64_t b) {
  const std::int64_t g = std::gcd(a, b);
  std::int64_t out = 0;
  if (__builtin_mul_overflow(a / g, b, &out)) throw std::overflow_error("LCM exceeds int64");
  return out;
}

std::int64_t delta_t_max(ReportPeriod ti, ReportPeriod tj) {
  return std::min(ti.millis(), tj.millis()) - gcd_ms(ti, tj);
}

SampleCounts sample_counts(ReportPeriod ti, ReportPeriod tj) {
  const std::int64_t g = gcd_ms(ti, tj);
  const std::int64_t l = lcm_ms(ti.millis(), tj.millis());
  return {l / g, l / ti.millis(), l / tj.millis()};
}

MergeDecision decide_pair(const TimedDemand& existing, const TimedDemand& incoming) {
  const std::int64_t a = existing.period.millis();
  const std::int64_t b = incoming.period.millis();
  MergeDecision d;
  if (a == b) {
    d.kind = MergeKind::Dedup;
    d.chosen_period = existing.period;
    return d;
  }
  const ReportPeriod fast{std::min(a, b)};
  if (a % b == 0 || b % a == 0) {
    d.kind = MergeKind::MinPeriod;
    d.chosen_period = fast;
    return d;
  }

  d.delta_t_max = delta_t_max(existing.period, incoming.period);
  const TemporalSensitivity& slow = a > b ? existing.sensitivity : incoming.sensitivity;
  if (slow.present() && *d.delta_t_max < *slow.delta_millis()) {
    d.kind = MergeKind::MinPeriod;
    d.chosen_period = fast;
    return d;
  }

  d.sample_counts = sample_counts(existing.period, incoming.period);
  if (d.sample_counts->at_gcd < d.sample_counts->at_first + d.sample_counts->at_second) {
    d.kind = MergeKind::GcdMerge;
    d.chosen_period = ReportPeriod{gcd_ms(existing.period, incoming.period)};
  } else {
    d.kind = MergeKind::Duplicate;
  }
  return d;
}

namespace {

struct Group {
  std::int64_t period;
  std::vector<const KpiDemand*> members;
};

// Tightest tolerance among members slower than `period`; absent when one of
// them gave none (or no member is slower).
TemporalSensitivity effective_sensitivity(const Group& g, std::int64_t period) {
  std::optional<std::int64_t> tightest;
  for (const KpiDemand* m : g.members) {
    if (m->period.millis() <= period) continue;
    if (!m->sensitivity.present()) return {};
    tightest = std::min(tightest.value_or(INT64_MAX), *m->sensitivity.delta_millis());
  }
  return tightest ? TemporalSensitivity{*tightest} : TemporalSensitivity{};
}

bool group_less(const Group& a, const Group& b) {
  if (a.period != b.period) return a.period < b.period;
  return a.members.front()->xapp < b.members.front()->xapp;
}

// Sort by period and fold equal periods into one stream.
void normalize(std::vector<Group>& groups) {
  std::sort(groups.begin(), groups.end(), group_less);
  std::vector<Group> out;
  for (auto& g : groups) {
    if (!out.empty() && out.back().period == g.period) {
      auto& dst = out.back().members;
      dst.insert(dst.end(), g.members.begin(), g.members.end());
    } else {
      out.push_back(std::move(g));
    }
  }
  groups = std::move(out);
}

// Merging at G = gcd(pa, pb) sends L/G samples per hyperperiod L against
// sum(L/T_m) for the member requests sent separately; equivalently
// sum(G/T_m) > 1.
bool gcd_merge_pays(const Group& a, const Group& b) {
  const std::int64_t g = std::gcd(a.period, b.period);
  const Rational one{1};
  Rational total{0};
  for (const Group* grp : {&a, &b})
    for (const KpiDemand* m : grp->members) {
      total += Rational{g, m->period.millis()};
      if (total > one) return true;
    }
  return false;
}

}  // namespace

std::optional<TransmissionPlan> compute_plan(std::span<const KpiDemand> demands) {
  if (demands.empty()) return std::nullopt;

  std::vector<const KpiDemand*> sorted;
  sorted.reserve(demands.size());
  std::set<XAppId> xapps;
  for (const auto& d : demands) {
    if (d.node != demands.front().node || d.kpi != demands.front().kpi)
      throw InvalidArgument("compute_plan: demands span several (node, KPI) pairs");
    if (!xapps.insert(d.xapp).second)
      throw InvalidArgument("compute_plan: xApp " + std::to_string(d.xapp.value) + " listed twice");
    sorted.push_back(&d);
  }
  std::sort(sorted.begin(), sorted.end(), [](const KpiDemand* a, const KpiDemand* b) {
    if (a->period != b->period) return a->period < b->period;
    return a->xapp < b->xapp;
  });

  std::vector<Group> groups;
  for (const KpiDemand* d : sorted) {
    bool joined = false;
    for (auto& g : groups) {
      const MergeDecision dec = decide_pair({ReportPeriod{g.period}, effective_sensitivity(g, g.period)},
                                            {d->period, d->sensitivity});
      if (dec.kind == MergeKind::Duplicate) continue;
      g.period = dec.chosen_period->millis();
      g.members.push_back(d);
      joined = true;
      break;
    }
    if (!joined) groups.push_back({d->period.millis(), {d}});
    normalize(groups);
  }

  for (bool changed = true; changed;) {
    changed = false;
    for (std::size_t i = 0; i < groups.size() && !changed; ++i)
      for (std::size_t j = i + 1; j < groups.size() && !changed; ++j) {
        if (!gcd_merge_pays(groups[i], groups[j])) continue;
        groups[i].period = std::gcd(groups[i].period, groups[j].period);
        auto& dst = groups[i].members;
        dst.insert(dst.end(), groups[j].members.begin(), groups[j].members.end());
        groups.erase(groups.begin() + static_cast<std::ptrdiff_t>(j));
        normalize(groups);
        changed = true;
      }
  }

  TransmissionPlan plan;
  for (std::size_t i = 0; i < groups.size(); ++i) {
    plan.streams.push_back({demands.front().node, demands.front().kpi, ReportPeriod{groups[i].period}});
    for (const KpiDemand* m : groups[i].members) plan.fanout[m->xapp] = i;
  }
  return plan;
}

PlanDelta diff_plans(const std::optional<TransmissionPlan>& before,
                     const std::optional<TransmissionPlan>& after) {
  std::vector<StreamSpec> removed;
  std::vector<StreamSpec> added;
  const auto periods = [](const std::optional<TransmissionPlan>& p) {
    std::set<StreamSpec> s;
    if (p) s.insert(p->streams.begin(), p->streams.end());
    return s;
  };
  const auto old_set = periods(before);
  const auto new_set = periods(after);
  std::set_difference(old_set.begin(), old_set.end(), new_set.begin(), new_set.end(),
                      std::back_inserter(removed));
  std::set_difference(new_set.begin(), new_set.end(), old_set.begin(), old_set.end(),
                      std::back_inserter(added));

  PlanDelta delta;
  const std::size_t retimed = std::min(removed.size(), added.size());
  for (std::size_t i = retimed; i < removed.size(); ++i)
    delta.push_back({ChangeAction::Remove, removed[i], std::nullopt});
  for (std::size_t i = 0; i < retimed; ++i)
    delta.push_back({ChangeAction::Retime, added[i], removed[i].period});
  for (std::size_t i = retimed; i < added.size(); ++i)
    delta.push_back({ChangeAction::Add, added[i], std::nullopt});
  return delta;
}

PlanDelta MergeState::recompute(const PairKey& key) {
  std::optional<TransmissionPlan> before;
  if (auto it = plans_.find(key); it != plans_.end()) before = it->second;

  std::optional<TransmissionPlan> after;
  if (auto it = demands_.find(key); it != demands_.end()) {
    if (it->second.empty())
      demands_.erase(it);
    else
      after = compute_plan(it->second);
  }
  if (after)
    plans_[key] = *after;
  else
    plans_.erase(key);
  return diff_plans(before, after);
}

PlanDelta MergeState::add_demand(const KpiDemand& demand) {
  PairKey key{demand.node, demand.kpi};
  auto& list = demands_[key];
  for (const auto& d : list)
    if (d.xapp == demand.xapp) {
      throw InvalidArgument("demand already active: xapp " + std::to_string(demand.xapp.value) + " node " +
                            std::to_string(demand.node.value) + " kpi " + demand.kpi.name());
    }
  auto pos = std::lower_bound(list.begin(), list.end(), demand.xapp,
                              [](const KpiDemand& d, XAppId x) { return d.xapp < x; });
  list.insert(pos, demand);
  return recompute(key);
}

PlanDelta MergeState::remove_demand(XAppId xapp, E2NodeId node, const KpiId& kpi) {
  PairKey key{node, kpi};
  auto it = demands_.find(key);
  if (it != demands_.end()) {
    auto& list = it->second;
    auto pos = std::find_if(list.begin(), list.end(), [&](const KpiDemand& d) { return d.xapp == xapp; });
    if (pos != list.end()) {
      list.erase(pos);
      return recompute(key);
    }
  }
  throw InvalidArgument("unknown demand: xapp " + std::to_string(xapp.value) + " node " +
                        std::to_string(node.value) + " kpi " + kpi.name());
}

PlanDelta MergeState::submit(const SubscriptionRequest& request) {
  std::vector<KpiDemand> fresh;
  for (auto& d : decompose(request)) {
    if (auto active = find(d.xapp, d.node, d.kpi)) {
      if (*active == d) continue;
      throw InvalidArgument("conflicting resubscription for kpi " + d.kpi.name());
    }
    fresh.push_back(std::move(d));
  }
  PlanDelta delta;
  for (const auto& d : fresh) {
    auto part = add_demand(d);
    delta.insert(delta.end(), part.begin(), part.end());
  }
  return delta;
}

PlanDelta MergeState::withdraw(XAppId xapp, E2NodeId node) {
  std::vector<KpiId> kpis;
  for (const auto& [key, list] : demands_)
    if (key.node == node)
      for (const auto& d : list)
        if (d.xapp == xapp) kpis.push_back(d.kpi);
  PlanDelta delta;
  for (const auto& k : kpis) {
    auto part = remove_demand(xapp, node, k);
    delta.insert(delta.end(), part.begin(), part.end());
  }
  return delta;
}

const TransmissionPlan* MergeState::plan(E2NodeId node, const KpiId& kpi) const {
  auto it = plans_.find(PairKey{node, kpi});
  return it == plans_.end() ? nullptr : &it->second;
}

std::vector<KpiDemand> MergeState::demands() const {
  std::vector<KpiDemand> out;
  for (const auto& [key, list] : demands_) out.insert(out.end(), list.begin(), list.end());
  return out;
}

std::optional<KpiDemand> MergeState::find(XAppId xapp, E2NodeId node, const KpiId& kpi) const {
  auto it = demands_.find(PairKey{node, kpi});
  if (it == demands_.end()) return std::nullopt;
  for (const auto& d : it->second)
    if (d.xapp == xapp) return d;
  return std::nullopt;
}

std::size_t MergeState::stream_count() const {
  std::size_t n = 0;
  for (const auto& [key, plan] : plans_) n += plan.streams.size();
  return n;
}

Rational MergeState::total_sample_rate() const {
  Rational total{0};
  for (const auto& [key, plan] : plans_)
    for (const auto& s : plan.streams) total += Rational{1000, s.period.millis()};
  return total;
}

Rational total_sample_rate(std::span<const TransmissionPlan> plans) {
  Rational total{0};
  for (const auto& plan : plans)
    for (const auto& s : plan.streams) total += Rational{1000, s.period.millis()};
  return total;
}

}  // namespace ricsim
