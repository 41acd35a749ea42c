// SPDX-License-Identifier: Apache-2.0
#include "ricsim/wire/protocol.hpp"

#include <stdexcept>

namespace ricsim::wire {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void put_count(ByteWriter& w, std::size_t n) {
  if (n > UINT32_MAX) throw std::length_error("list too long");
  w.u32(static_cast<std::uint32_t>(n));
}

void encode_body(ByteWriter& w, const WireMessage& msg) {
  std::visit(overloaded{
                 [&](const E2SetupRequest& m) {
                   w.u8(m.version);
                   w.u64(m.node.value);
                 },
                 [&](const E2SetupResponse& m) {
                   w.u64(m.node.value);
                   w.u8(m.accepted ? 1 : 0);
                 },
                 [&](const SubscriptionRequestMsg& m) {
                   w.u64(m.request_id);
                   w.u64(m.request.xapp.value);
                   w.u64(m.request.node.value);
                   put_count(w, m.request.items.size());
                   for (const auto& it : m.request.items) {
                     w.str(it.kpi.name());
                     w.i64(it.period.millis());
                     if (const auto& d = it.sensitivity.delta_millis()) {
                       w.u8(1);
                       w.i64(*d);
                     } else {
                       w.u8(0);
                     }
                   }
                 },
                 [&](const SubscriptionResponse& m) {
                   w.u64(m.request_id);
                   w.u8(m.success ? 1 : 0);
                   w.str(m.reason);
                 },
                 [&](const SubscriptionDelete& m) {
                   w.u64(m.request_id);
                   w.u64(m.xapp.value);
                   w.u64(m.node.value);
                   put_count(w, m.items.size());
                   for (const auto& it : m.items) {
                     w.str(it.kpi.name());
                     w.i64(it.period_ms);
                   }
                 },
                 [&](const IndicationMessage& m) {
                   w.u64(m.node.value);
                   w.i64(m.emit_time);
                   put_count(w, m.samples.size());
                   for (const auto& s : m.samples) {
                     w.str(s.kpi.name());
                     w.i64(s.sample_time);
                   }
                 },
             },
             msg);
}

bool flag(ByteReader& r) {
  const std::uint8_t b = r.u8();
  if (b > 1) throw DecodeError("flag byte must be 0 or 1");
  return b == 1;
}

// Domain constructors throw InvalidArgument; on the wire that is a malformed frame.
template <class F>
auto checked(F&& f) {
  try {
    return f();
  } catch (const InvalidArgument& e) {
    throw DecodeError(std::string("invalid field: ") + e.what());
  }
}

WireMessage decode_body(Kind kind, ByteReader& r) {
  switch (kind) {
    case Kind::E2SetupRequest: {
      E2SetupRequest m;
      m.version = r.u8();
      m.node = E2NodeId{r.u64()};
      return m;
    }
    case Kind::E2SetupResponse: {
      E2SetupResponse m;
      m.node = E2NodeId{r.u64()};
      m.accepted = flag(r);
      return m;
    }
    case Kind::SubscriptionRequest: {
      SubscriptionRequestMsg m;
      m.request_id = r.u64();
      m.request.xapp = XAppId{r.u64()};
      m.request.node = E2NodeId{r.u64()};
      const std::uint32_t n = r.u32();
      for (std::uint32_t i = 0; i < n; ++i) {
        auto name = r.str();
        const std::int64_t period = r.i64();
        TemporalSensitivity sens;
        if (flag(r)) {
          const std::int64_t d = r.i64();
          sens = checked([&] { return TemporalSensitivity{d}; });
        }
        m.request.items.push_back(checked([&] {
          return RequestItem{KpiId{std::move(name)}, ReportPeriod{period}, sens};
        }));
      }
      return m;
    }
    case Kind::SubscriptionResponse: {
      SubscriptionResponse m;
      m.request_id = r.u64();
      m.success = flag(r);
      m.reason = r.str();
      return m;
    }
    case Kind::SubscriptionDelete: {
      SubscriptionDelete m;
      m.request_id = r.u64();
      m.xapp = XAppId{r.u64()};
      m.node = E2NodeId{r.u64()};
      const std::uint32_t n = r.u32();
      for (std::uint32_t i = 0; i < n; ++i) {
        auto name = r.str();
        const std::int64_t period = r.i64();
        m.items.push_back(checked([&] { return DeleteItem{KpiId{std::move(name)}, period}; }));
      }
      return m;
    }
    case Kind::Indication: {
      IndicationMessage m;
      m.node = E2NodeId{r.u64()};
      m.emit_time = r.i64();
      const std::uint32_t n = r.u32();
      for (std::uint32_t i = 0; i < n; ++i) {
        auto name = r.str();
        const std::int64_t t = r.i64();
        m.samples.push_back(checked([&] { return KpiSample{KpiId{std::move(name)}, t}; }));
      }
      return m;
    }
  }
  throw DecodeError("unknown message kind " + std::to_string(static_cast<int>(kind)));
}

}  // namespace

Kind kind_of(const WireMessage& msg) { return static_cast<Kind>(msg.index() + 1); }

std::vector<std::uint8_t> encode(const WireMessage& msg) {
  ByteWriter frame;
  frame.u32(0);
  frame.u8(static_cast<std::uint8_t>(kind_of(msg)));
  encode_body(frame, msg);
  const std::size_t body = frame.size() - 4;
  if (body > UINT32_MAX) throw std::length_error("frame body exceeds 2^32 - 1 bytes");
  frame.patch_u32(0, static_cast<std::uint32_t>(body));
  return std::move(frame).take();
}

WireMessage decode(std::span<const std::uint8_t> frame) {
  ByteReader r(frame);
  const std::uint32_t len = r.u32();
  if (r.remaining() < len) throw DecodeError("unexpected end of input");
  if (r.remaining() > len) throw DecodeError("trailing bytes after frame");
  if (len == 0) throw DecodeError("empty frame");
  const auto tag = r.u8();
  if (tag < 1 || tag > 6) throw DecodeError("unknown message kind " + std::to_string(tag));
  WireMessage msg = decode_body(static_cast<Kind>(tag), r);
  if (!r.empty()) throw DecodeError("trailing bytes in frame body");
  return msg;
}

void FrameDecoder::feed(std::span<const std::uint8_t> data) {
  if (pos_ > 0 && pos_ == buf_.size()) {
    buf_.clear();
    pos_ = 0;
  }
  buf_.insert(buf_.end(), data.begin(), data.end());
}

std::optional<WireMessage> FrameDecoder::next() {
  const std::size_t avail = buf_.size() - pos_;
  if (avail < 4) return std::nullopt;
  ByteReader hdr(std::span<const std::uint8_t>(buf_).subspan(pos_, 4));
  const std::uint32_t len = hdr.u32();
  if (len > kMaxFrameBytes) throw DecodeError("frame of " + std::to_string(len) + " bytes exceeds limit");
  if (avail < 4 + static_cast<std::size_t>(len)) return std::nullopt;
  auto frame = std::span<const std::uint8_t>(buf_).subspan(pos_, 4 + static_cast<std::size_t>(len));
  pos_ += frame.size();
  WireMessage msg = decode(frame);
  if (pos_ > (1u << 16) && pos_ * 2 > buf_.size()) {
    buf_.erase(buf_.begin(), buf_.begin() + static_cast<std::ptrdiff_t>(pos_));
    pos_ = 0;
  }
  return msg;
}

}  // namespace ricsim::wire
