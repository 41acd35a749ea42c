// SPDX-License-Identifier: Apache-2.0
#include "ricsim/e2model.hpp"

#include <set>

#include "ricsim/bytes.hpp"

namespace ricsim {

KpiId::KpiId(std::string name) : name_(std::move(name)) {
  if (name_.empty()) throw InvalidArgument("KPI name must not be empty");
}

ReportPeriod::ReportPeriod(std::int64_t millis) : millis_(millis) {
  if (millis < 1 || millis > kMaxMillis)
    throw InvalidArgument("report period out of range [1, 3600000] ms: " + std::to_string(millis));
}

TemporalSensitivity::TemporalSensitivity(std::int64_t delta_millis) : delta_(delta_millis) {
  if (delta_millis < 1)
    throw InvalidArgument("temporal sensitivity must be >= 1 ms: " + std::to_string(delta_millis));
}

DuplicateKpiError::DuplicateKpiError(KpiId kpi)
    : InvalidArgument("duplicate KPI in request: " + kpi.name()), kpi_(std::move(kpi)) {}

void validate(const SubscriptionRequest& request) {
  if (request.items.empty()) throw InvalidArgument("subscription request has no items");
  std::set<std::string> seen;
  for (const auto& item : request.items)
    if (!seen.insert(item.kpi.name()).second) throw DuplicateKpiError(item.kpi);
}

void validate(const IndicationMessage& message) {
  if (message.samples.empty()) throw InvalidArgument("indication carries no samples");
  for (const auto& s : message.samples)
    if (s.sample_time > message.emit_time)
      throw InvalidArgument("sample time after emit time for " + s.kpi.name());
}

std::vector<KpiDemand> decompose(const SubscriptionRequest& request) {
  validate(request);
  std::vector<KpiDemand> out;
  out.reserve(request.items.size());
  for (const auto& item : request.items)
    out.push_back({request.xapp, request.node, item.kpi, item.period, item.sensitivity});
  return out;
}

std::vector<std::uint8_t> canonical_bytes(const SubscriptionRequest& request) {
  ByteWriter w;
  w.u64(request.node.value);
  for (const auto& item : request.items) {
    w.str(item.kpi.name());
    w.i64(item.period.millis());
    if (const auto& d = item.sensitivity.delta_millis()) {
      w.u8(1);
      w.i64(*d);
    } else {
      w.u8(0);
    }
  }
  return std::move(w).take();
}

Fingerprint request_fingerprint(const SubscriptionRequest& request) {
  using u128 = unsigned __int128;
  // FNV-1a 128-bit parameters.
  const u128 prime = (u128{0x0000000001000000ULL} << 64) | 0x000000000000013BULL;
  u128 hash = (u128{0x6C62272E07BB0142ULL} << 64) | 0x62B821756295C58DULL;
  for (std::uint8_t b : canonical_bytes(request)) {
    hash ^= b;
    hash *= prime;
  }
  Fingerprint out{};
  for (int i = 15; i >= 0; --i) {
    out[static_cast<std::size_t>(i)] = static_cast<std::uint8_t>(hash);
    hash >>= 8;
  }
  return out;
}

}  // namespace ricsim
