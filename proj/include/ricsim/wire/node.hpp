// SPDX-License-Identifier: Apache-2.0
//
// E2 node emulator: performs E2 setup, keeps the streams the broker pushes
// and emits Indications on wall-clock timers, all streams phase-aligned to
// the setup instant and batched per emission instant.
#pragma once

#include <chrono>
#include <condition_variable>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <ostream>
#include <string>
#include <thread>

#include "ricsim/wire/net.hpp"

namespace ricsim::wire {

struct NodeOptions {
  std::string broker;
  E2NodeId node;
  int kpis = 1;  // catalog "kpi.0" .. "kpi.<kpis-1>"
  std::int64_t header_bytes = 0;
  std::int64_t bytes_per_sample = 1000;
  int connect_attempts = 6;
  std::chrono::milliseconds initial_backoff{100};
  std::ostream* log = nullptr;
};

struct NodeStats {
  std::uint64_t messages = 0;
  std::uint64_t samples = 0;
  std::uint64_t logical_bytes = 0;  // header + k * bytes_per_sample per message
  std::uint64_t wire_bytes = 0;
  std::uint64_t stream_adds = 0;    // streams the broker asked for, cumulative
  std::map<std::pair<std::string, std::int64_t>, std::uint64_t> per_stream;  // (kpi, period) -> samples
};

class NodeEmulator {
public:
  explicit NodeEmulator(NodeOptions opts);
  ~NodeEmulator();
  NodeEmulator(const NodeEmulator&) = delete;
  NodeEmulator& operator=(const NodeEmulator&) = delete;

  /// Connects (bounded exponential backoff), completes E2 setup and starts
  /// emitting. Throws NetError when the broker stays unreachable or refuses.
  void start();
  void stop();
  /// True while the broker connection is up.
  [[nodiscard]] bool connected() const { return connected_; }

  [[nodiscard]] NodeStats stats() const;
  /// Currently active (kpi, period) streams.
  [[nodiscard]] std::map<std::string, std::vector<std::int64_t>> streams() const;

private:
  struct ActiveStream {
    std::int64_t next_due;
  };

  void read_loop();
  void emit_loop();
  [[nodiscard]] std::int64_t now_ms() const;
  void log(const std::string& line) const;

  NodeOptions opts_;
  std::unique_ptr<Connection> conn_;
  std::chrono::steady_clock::time_point origin_;
  std::atomic<bool> running_{false};
  std::atomic<bool> connected_{false};
  std::thread reader_;
  std::thread emitter_;

  mutable std::mutex mu_;
  std::condition_variable cv_;
  std::map<std::pair<std::string, std::int64_t>, ActiveStream> streams_;
  NodeStats stats_;
};

}  // namespace ricsim::wire
