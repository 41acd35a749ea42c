// SPDX-License-Identifier: Apache-2.0
//
// Per-KPI subscription merging. Every (E2 node, KPI) pair keeps the set of
// active xApp demands and a transmission plan: the physical streams the node
// sends and which stream each xApp reads.
#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "ricsim/e2model.hpp"
#include "ricsim/rational.hpp"

namespace ricsim {

struct StreamSpec {
  E2NodeId node;
  KpiId kpi;
  ReportPeriod period;

  auto operator<=>(const StreamSpec&) const = default;
};

struct TransmissionPlan {
  std::vector<StreamSpec> streams;           // ascending period
  std::map<XAppId, std::size_t> fanout;      // xApp -> index into streams

  bool operator==(const TransmissionPlan&) const = default;
};

enum class MergeKind { Dedup, MinPeriod, GcdMerge, Duplicate };

const char* to_string(MergeKind kind);

/// Samples per hyperperiod LCM(ti, tj): at GCD, at ti, at tj.
struct SampleCounts {
  std::int64_t at_gcd = 0;
  std::int64_t at_first = 0;
  std::int64_t at_second = 0;

  bool operator==(const SampleCounts&) const = default;
};

struct MergeDecision {
  MergeKind kind = MergeKind::Duplicate;
  std::optional<ReportPeriod> chosen_period;  // absent for Duplicate
  std::optional<std::int64_t> delta_t_max;    // set once the non-divisible branch is reached
  std::optional<SampleCounts> sample_counts;  // set once the sample-count comparison is reached
};

/// A period together with the tolerance of whoever reads it.
struct TimedDemand {
  ReportPeriod period;
  TemporalSensitivity sensitivity;
};

std::int64_t gcd_ms(ReportPeriod a, ReportPeriod b);
/// Throws std::overflow_error if the LCM does not fit in int64.
std::int64_t lcm_ms(std::int64_t a, std::int64_t b);

/// Worst staleness seen by the slower reader when sampling at the faster
/// period: min(ti, tj) - gcd(ti, tj).
std::int64_t delta_t_max(ReportPeriod ti, ReportPeriod tj);

SampleCounts sample_counts(ReportPeriod ti, ReportPeriod tj);

/// Two-demand merge rule: equal periods dedup, divisible periods take the
/// minimum, otherwise the slower demand's tolerance may allow the minimum,
/// otherwise merge at the GCD only when it sends fewer samples than both
/// streams together.
MergeDecision decide_pair(const TimedDemand& existing, const TimedDemand& incoming);

/// Plan for one (node, KPI) from its full demand set. Deterministic and
/// independent of the order of `demands`. An empty set yields no plan.
///
/// Demands are sorted by (period, xApp id) and folded: each joins the first
/// stream, in ascending period order, for which decide_pair does not return
/// Duplicate. A consolidation pass then merges two streams at the GCD of
/// their periods while that sends fewer samples per hyperperiod than all
/// member demands would as separate requests; equal-period streams are
/// folded together.
std::optional<TransmissionPlan> compute_plan(std::span<const KpiDemand> demands);

enum class ChangeAction { Add, Remove, Retime };

const char* to_string(ChangeAction action);

struct PlanChange {
  ChangeAction action = ChangeAction::Add;
  StreamSpec stream;                       // new spec (old spec for Remove)
  std::optional<ReportPeriod> previous;    // Retime only

  bool operator==(const PlanChange&) const = default;
};

using PlanDelta = std::vector<PlanChange>;

/// Streams removed, retimed or added when moving from `before` to `after`
/// (either may be absent). Removed/added periods are paired as retimes in
/// ascending order.
PlanDelta diff_plans(const std::optional<TransmissionPlan>& before,
                     const std::optional<TransmissionPlan>& after);

struct PairKey {
  E2NodeId node;
  KpiId kpi;

  auto operator<=>(const PairKey&) const = default;
};

/// All active demands and their plans. Single owner; callers serialise
/// mutations.
class MergeState {
public:
  /// Throws InvalidArgument if (xapp, node, kpi) is already active.
  PlanDelta add_demand(const KpiDemand& demand);

  /// Throws InvalidArgument if the demand is not active.
  PlanDelta remove_demand(XAppId xapp, E2NodeId node, const KpiId& kpi);

  /// Adds every item of the request. Re-submitting items that are already
  /// active with identical period and sensitivity is a no-op; an item that
  /// conflicts with an active demand rejects the whole request unchanged.
  PlanDelta submit(const SubscriptionRequest& request);

  /// Removes every active demand of the xApp on that node.
  PlanDelta withdraw(XAppId xapp, E2NodeId node);

  [[nodiscard]] const TransmissionPlan* plan(E2NodeId node, const KpiId& kpi) const;
  [[nodiscard]] const std::map<PairKey, TransmissionPlan>& plans() const { return plans_; }
  [[nodiscard]] std::vector<KpiDemand> demands() const;
  [[nodiscard]] std::optional<KpiDemand> find(XAppId xapp, E2NodeId node, const KpiId& kpi) const;

  [[nodiscard]] std::size_t stream_count() const;

  /// Sum over all streams of 1000 / period_ms, in samples per second.
  [[nodiscard]] Rational total_sample_rate() const;

  bool operator==(const MergeState&) const = default;

private:
  PlanDelta recompute(const PairKey& key);

  std::map<PairKey, std::vector<KpiDemand>> demands_;
  std::map<PairKey, TransmissionPlan> plans_;
};

/// Sum of 1000 / period over the streams of the given plans.
Rational total_sample_rate(std::span<const TransmissionPlan> plans);

}  // namespace ricsim
