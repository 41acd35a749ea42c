// SPDX-License-Identifier: Apache-2.0
#include "ricsim/wire/xapp.hpp"

#include <fmt/format.h>

namespace ricsim::wire {

XAppClient::XAppClient(XAppOptions opts) : opts_(std::move(opts)) {}

XAppClient::~XAppClient() { stop(); }

std::vector<SubscriptionResponse> XAppClient::start() {
  conn_ = std::make_unique<Connection>(connect_tcp(parse_endpoint(opts_.broker)));
  running_ = true;
  reader_ = std::thread([this] { read_loop(); });

  std::vector<SubscriptionResponse> out;
  for (const auto& sub : opts_.subscriptions) {
    const std::uint64_t id = next_request_++;
    if (!conn_->send(SubscriptionRequestMsg{id, sub})) throw NetError("subscription send failed");
    out.push_back(await_response(id));
    if (opts_.log && !out.back().success)
      *opts_.log << fmt::format("xapp {}: subscription on node {} refused: {}\n", sub.xapp.value, sub.node.value,
                                out.back().reason);
  }
  return out;
}

SubscriptionResponse XAppClient::unsubscribe(XAppId xapp, E2NodeId node) {
  const std::uint64_t id = next_request_++;
  if (!conn_ || !conn_->send(SubscriptionDelete{id, xapp, node, {}})) throw NetError("delete send failed");
  return await_response(id);
}

SubscriptionResponse XAppClient::await_response(std::uint64_t request_id) {
  std::unique_lock lock(mu_);
  const bool got = cv_.wait_for(lock, opts_.response_timeout,
                                [&] { return responses_.count(request_id) > 0 || closed_; });
  auto it = responses_.find(request_id);
  if (!got || it == responses_.end()) throw NetError("no subscription response from broker");
  SubscriptionResponse r = std::move(it->second);
  responses_.erase(it);
  return r;
}

void XAppClient::stop() {
  if (!running_.exchange(false)) return;
  if (conn_) conn_->shutdown();
  if (reader_.joinable()) reader_.join();
}

void XAppClient::read_loop() {
  try {
    while (auto msg = conn_->receive()) {
      std::lock_guard lock(mu_);
      if (auto* r = std::get_if<SubscriptionResponse>(&*msg)) {
        responses_[r->request_id] = std::move(*r);
        cv_.notify_all();
      } else if (auto* ind = std::get_if<IndicationMessage>(&*msg)) {
        stats_.indications += 1;
        stats_.samples += ind->samples.size();
        for (const auto& s : ind->samples) stats_.per_kpi[{ind->node.value, s.kpi.name()}] += 1;
      }
    }
  } catch (const std::exception& e) {
    if (opts_.log) *opts_.log << "xapp: closing connection: " << e.what() << '\n';
  }
  std::lock_guard lock(mu_);
  closed_ = true;
  cv_.notify_all();
}

XAppStats XAppClient::stats() const {
  std::lock_guard lock(mu_);
  return stats_;
}

}  // namespace ricsim::wire
