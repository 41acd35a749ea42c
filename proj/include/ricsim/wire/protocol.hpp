// SPDX-License-Identifier: Apache-2.0
//
// Simplified E2AP-like framing. Not interoperable with O-RAN stacks.
//
// Frame:  u32 length (bytes after the prefix) | u8 kind | body
// All integers big-endian; strings are u32 length + UTF-8; lists are u32
// count + elements.
//
//   1 E2SetupRequest       u8 version, u64 node
//   2 E2SetupResponse      u64 node, u8 accepted
//   3 SubscriptionRequest  u64 request_id, u64 xapp, u64 node, list of
//                          { str kpi, u64 period_ms, u8 has_sensitivity,
//                            [u64 sensitivity_ms] }
//   4 SubscriptionResponse u64 request_id, u8 success, str reason
//   5 SubscriptionDelete   u64 request_id, u64 xapp, u64 node, list of
//                          { str kpi, u64 period_ms }
//   6 Indication           u64 node, u64 emit_time_ms, list of
//                          { str kpi, u64 sample_time_ms }
//
// Example: E2SetupRequest{version 1, node 1} encodes to 14 bytes
//   00 00 00 0a  01  01  00 00 00 00 00 00 00 01
#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "ricsim/bytes.hpp"
#include "ricsim/e2model.hpp"

namespace ricsim::wire {

inline constexpr std::uint8_t kProtocolVersion = 1;
inline constexpr std::size_t kMaxFrameBytes = 16u << 20;

/// xApp id the broker uses when pushing plan streams to a node.
inline constexpr XAppId kBrokerXApp{UINT64_MAX};

enum class Kind : std::uint8_t {
  E2SetupRequest = 1,
  E2SetupResponse = 2,
  SubscriptionRequest = 3,
  SubscriptionResponse = 4,
  SubscriptionDelete = 5,
  Indication = 6,
};

struct E2SetupRequest {
  std::uint8_t version = kProtocolVersion;
  E2NodeId node;
  bool operator==(const E2SetupRequest&) const = default;
};

struct E2SetupResponse {
  E2NodeId node;
  bool accepted = true;
  bool operator==(const E2SetupResponse&) const = default;
};

struct SubscriptionRequestMsg {
  std::uint64_t request_id = 0;
  SubscriptionRequest request;
  bool operator==(const SubscriptionRequestMsg&) const = default;
};

struct SubscriptionResponse {
  std::uint64_t request_id = 0;
  bool success = true;
  std::string reason;
  bool operator==(const SubscriptionResponse&) const = default;
};

struct DeleteItem {
  KpiId kpi;
  std::int64_t period_ms = 0;  // 0 when the sender does not care
  bool operator==(const DeleteItem&) const = default;
};

struct SubscriptionDelete {
  std::uint64_t request_id = 0;
  XAppId xapp;
  E2NodeId node;
  std::vector<DeleteItem> items;
  bool operator==(const SubscriptionDelete&) const = default;
};

using WireMessage = std::variant<E2SetupRequest, E2SetupResponse, SubscriptionRequestMsg, SubscriptionResponse,
                                 SubscriptionDelete, IndicationMessage>;

Kind kind_of(const WireMessage& msg);

/// Full frame including the length prefix. Throws std::length_error when
/// the body would exceed 2^32 - 1 bytes.
std::vector<std::uint8_t> encode(const WireMessage& msg);

/// Decodes exactly one complete frame. Throws DecodeError on truncation,
/// trailing bytes, an unknown kind or an invalid field.
WireMessage decode(std::span<const std::uint8_t> frame);

/// Splits a byte stream into frames.
class FrameDecoder {
public:
  void feed(std::span<const std::uint8_t> data);
  /// Next complete frame, if buffered. Throws DecodeError when a length
  /// prefix exceeds kMaxFrameBytes or the frame is malformed.
  std::optional<WireMessage> next();

private:
  std::vector<std::uint8_t> buf_;
  std::size_t pos_ = 0;
};

}  // namespace ricsim::wire
