// SPDX-License-Identifier: Apache-2.0
//
// RIC broker: accepts E2 nodes and xApps, runs every subscription change
// through one MergeState on a single decision thread, pushes plan changes to
// nodes and fans indications out to the xApps each stream serves.
#pragma once

#include <condition_variable>
#include <cstdint>
#include <deque>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <ostream>
#include <thread>
#include <variant>
#include <vector>

#include "ricsim/merge.hpp"
#include "ricsim/power.hpp"
#include "ricsim/wire/net.hpp"

namespace ricsim::wire {

struct BrokerOptions {
  std::string listen = "127.0.0.1:0";
  power::PowerModel power;
  std::int64_t stats_interval_ms = 1000;  // 0 disables the stats line
  std::ostream* log = nullptr;            // null: silent
};

struct BrokerStats {
  std::size_t streams = 0;
  double sample_rate = 0;
  double predicted_watts = 0;
  std::uint64_t indications_in = 0;
  std::uint64_t samples_in = 0;
  std::uint64_t samples_out = 0;
};

class Broker {
public:
  explicit Broker(BrokerOptions opts);
  ~Broker();
  Broker(const Broker&) = delete;
  Broker& operator=(const Broker&) = delete;

  /// Binds and starts the worker threads. Throws NetError.
  void start();
  void stop();
  [[nodiscard]] std::uint16_t port() const { return port_; }

  [[nodiscard]] BrokerStats stats() const;
  [[nodiscard]] MergeState state() const;

private:
  struct Peer;
  struct Snapshot;

  struct NodeUp {
    std::shared_ptr<Peer> peer;
    E2NodeId node;
    std::uint8_t version;
  };
  struct Subscribe {
    std::shared_ptr<Peer> peer;
    SubscriptionRequestMsg msg;
  };
  struct Unsubscribe {
    std::shared_ptr<Peer> peer;
    SubscriptionDelete msg;
  };
  struct PeerGone {
    std::shared_ptr<Peer> peer;
  };
  using Job = std::variant<NodeUp, Subscribe, Unsubscribe, PeerGone>;

  void accept_loop();
  void serve(std::shared_ptr<Peer> peer);
  void decision_loop();
  void stats_loop();
  void enqueue(Job job);
  void handle(Job& job);
  void push_delta(const PlanDelta& delta);
  void publish_snapshot();
  void fan_out(const IndicationMessage& ind);
  void log(const std::string& line) const;

  BrokerOptions opts_;
  Socket listener_;
  std::uint16_t port_ = 0;
  std::atomic<bool> running_{false};

  std::thread acceptor_;
  std::thread decider_;
  std::thread reporter_;
  std::mutex peers_mu_;
  std::vector<std::pair<std::shared_ptr<Peer>, std::thread>> peers_;

  std::mutex queue_mu_;
  std::condition_variable queue_cv_;
  std::deque<Job> queue_;

  // Owned by the decision thread; state_mu_ only guards observers.
  mutable std::mutex state_mu_;
  MergeState state_;
  std::map<E2NodeId, std::shared_ptr<Peer>> nodes_;
  std::map<XAppId, std::shared_ptr<Peer>> xapps_;

  mutable std::mutex snapshot_mu_;
  std::shared_ptr<const Snapshot> snapshot_;

  std::atomic<std::uint64_t> indications_in_{0};
  std::atomic<std::uint64_t> samples_in_{0};
  std::atomic<std::uint64_t> samples_out_{0};

  std::mutex stop_mu_;
  std::condition_variable stop_cv_;
  mutable std::mutex log_mu_;
};

}  // namespace ricsim::wire
