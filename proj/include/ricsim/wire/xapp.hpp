// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <chrono>
#include <condition_variable>
#include <map>
#include <memory>
#include <mutex>
#include <ostream>
#include <thread>
#include <vector>

#include "ricsim/wire/net.hpp"

namespace ricsim::wire {

struct XAppOptions {
  std::string broker;
  std::vector<SubscriptionRequest> subscriptions;
  std::chrono::milliseconds response_timeout{5000};
  std::ostream* log = nullptr;
};

struct XAppStats {
  std::uint64_t indications = 0;
  std::uint64_t samples = 0;
  std::map<std::pair<std::uint64_t, std::string>, std::uint64_t> per_kpi;  // (node, kpi) -> samples
};

/// Monitoring xApp: subscribes, then counts what it receives.
class XAppClient {
public:
  explicit XAppClient(XAppOptions opts);
  ~XAppClient();
  XAppClient(const XAppClient&) = delete;
  XAppClient& operator=(const XAppClient&) = delete;

  /// Connects and sends every subscription; returns the broker's responses
  /// in request order. Throws NetError on connection failure or timeout.
  std::vector<SubscriptionResponse> start();
  /// Deletes every subscription of this client on `node`.
  SubscriptionResponse unsubscribe(XAppId xapp, E2NodeId node);
  void stop();

  [[nodiscard]] XAppStats stats() const;

private:
  SubscriptionResponse await_response(std::uint64_t request_id);
  void read_loop();

  XAppOptions opts_;
  std::unique_ptr<Connection> conn_;
  std::thread reader_;
  std::atomic<bool> running_{false};
  std::uint64_t next_request_ = 1;

  mutable std::mutex mu_;
  std::condition_variable cv_;
  std::map<std::uint64_t, SubscriptionResponse> responses_;
  bool closed_ = false;
  XAppStats stats_;
};

}  // namespace ricsim::wire
