// SPDX-License-Identifier: Apache-2.0
//
// Domain values for the RIC <-> E2 node monitoring model: identifiers, report
// periods, per-xApp temporal sensitivity, subscription requests and the
// per-KPI demands they decompose into.
#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace ricsim {

/// Invalid domain value or violated operation precondition.
class InvalidArgument : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

class KpiId {
public:
  explicit KpiId(std::string name);

  [[nodiscard]] const std::string& name() const { return name_; }
  auto operator<=>(const KpiId&) const = default;

private:
  std::string name_;
};

struct E2NodeId {
  std::uint64_t value = 0;
  auto operator<=>(const E2NodeId&) const = default;
};

struct XAppId {
  std::uint64_t value = 0;
  auto operator<=>(const XAppId&) const = default;
};

/// Report period in whole milliseconds, 1 ms .. 1 h.
class ReportPeriod {
public:
  static constexpr std::int64_t kMaxMillis = 3'600'000;

  explicit ReportPeriod(std::int64_t millis);

  [[nodiscard]] constexpr std::int64_t millis() const { return millis_; }
  auto operator<=>(const ReportPeriod&) const = default;

private:
  std::int64_t millis_;
};

/// Tolerance for receiving samples older than the requested cadence.
/// Absent means the xApp gave no tolerance.
class TemporalSensitivity {
public:
  TemporalSensitivity() = default;
  explicit TemporalSensitivity(std::int64_t delta_millis);

  static TemporalSensitivity none() { return {}; }

  [[nodiscard]] bool present() const { return delta_.has_value(); }
  [[nodiscard]] const std::optional<std::int64_t>& delta_millis() const { return delta_; }
  auto operator<=>(const TemporalSensitivity&) const = default;

private:
  std::optional<std::int64_t> delta_;
};

struct RequestItem {
  KpiId kpi;
  ReportPeriod period;
  TemporalSensitivity sensitivity;

  bool operator==(const RequestItem&) const = default;
};

struct SubscriptionRequest {
  XAppId xapp;
  E2NodeId node;
  std::vector<RequestItem> items;

  bool operator==(const SubscriptionRequest&) const = default;
};

struct KpiDemand {
  XAppId xapp;
  E2NodeId node;
  KpiId kpi;
  ReportPeriod period;
  TemporalSensitivity sensitivity;

  bool operator==(const KpiDemand&) const = default;
};

struct KpiSample {
  KpiId kpi;
  std::int64_t sample_time = 0;

  bool operator==(const KpiSample&) const = default;
};

struct IndicationMessage {
  E2NodeId node;
  std::int64_t emit_time = 0;
  std::vector<KpiSample> samples;

  bool operator==(const IndicationMessage&) const = default;
};

/// A request listed the same KPI twice.
class DuplicateKpiError : public InvalidArgument {
public:
  explicit DuplicateKpiError(KpiId kpi);
  [[nodiscard]] const KpiId& kpi() const { return kpi_; }

private:
  KpiId kpi_;
};

/// Throws InvalidArgument (or DuplicateKpiError) when the request is not
/// well formed.
void validate(const SubscriptionRequest& request);
void validate(const IndicationMessage& message);

/// One demand per item, in request order.
std::vector<KpiDemand> decompose(const SubscriptionRequest& request);

/// Canonical bytes hashed by request_fingerprint. Layout, all integers
/// big-endian:
///   u64 node id
///   per item, in request order:
///     u32 name length, name bytes (UTF-8)
///     u64 period millis
///     u8  sensitivity flag (0 absent, 1 present)
///     u64 sensitivity millis            (only when flag = 1)
/// The xApp id is deliberately not part of the layout.
std::vector<std::uint8_t> canonical_bytes(const SubscriptionRequest& request);

using Fingerprint = std::array<std::uint8_t, 16>;

/// 128-bit FNV-1a of canonical_bytes(). Order sensitive, like hashing the
/// whole encoded request.
Fingerprint request_fingerprint(const SubscriptionRequest& request);

}  // namespace ricsim
