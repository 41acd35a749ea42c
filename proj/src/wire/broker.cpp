// SPDX-License-Identifier: Apache-2.0
#include "ricsim/wire/broker.hpp"

#include <fmt/format.h>

#include <set>

namespace ricsim::wire {

struct Broker::Peer {
  explicit Peer(Socket s) : conn(std::move(s)) {}

  Connection conn;
  std::atomic<bool> is_node{false};
  std::atomic<std::uint64_t> node_id{0};
  std::set<XAppId> xapps;  // decision thread only
};

// Read-only view used by the indication path; replaced wholesale on change.
struct Broker::Snapshot {
  struct Stream {
    std::int64_t period;
    std::vector<XAppId> readers;
  };
  std::map<PairKey, std::vector<Stream>> streams;
  std::map<XAppId, std::shared_ptr<Peer>> xapps;
};

Broker::Broker(BrokerOptions opts) : opts_(std::move(opts)), snapshot_(std::make_shared<Snapshot>()) {
  opts_.power.validate();
}

Broker::~Broker() { stop(); }

void Broker::log(const std::string& line) const {
  if (!opts_.log) return;
  std::lock_guard lock(log_mu_);
  *opts_.log << line << '\n' << std::flush;
}

void Broker::start() {
  listener_ = listen_tcp(parse_endpoint(opts_.listen));
  port_ = local_port(listener_);
  running_ = true;
  acceptor_ = std::thread([this] { accept_loop(); });
  decider_ = std::thread([this] { decision_loop(); });
  if (opts_.stats_interval_ms > 0) reporter_ = std::thread([this] { stats_loop(); });
  log(fmt::format("broker listening on port {}", port_));
}

void Broker::stop() {
  if (!running_.exchange(false)) return;
  listener_.shutdown();
  if (acceptor_.joinable()) acceptor_.join();
  {
    std::lock_guard lock(peers_mu_);
    for (auto& [peer, th] : peers_) peer->conn.shutdown();
  }
  for (;;) {
    std::thread th;
    {
      std::lock_guard lock(peers_mu_);
      for (auto& entry : peers_)
        if (entry.second.joinable()) {
          th = std::move(entry.second);
          break;
        }
    }
    if (!th.joinable()) break;
    th.join();
  }
  queue_cv_.notify_all();
  if (decider_.joinable()) decider_.join();
  stop_cv_.notify_all();
  if (reporter_.joinable()) reporter_.join();
  std::lock_guard lock(peers_mu_);
  peers_.clear();
  nodes_.clear();
  xapps_.clear();
  snapshot_ = std::make_shared<Snapshot>();
}

void Broker::accept_loop() {
  while (running_) {
    Socket s = accept_tcp(listener_);
    if (!s.valid()) break;
    auto peer = std::make_shared<Peer>(std::move(s));
    std::lock_guard lock(peers_mu_);
    if (!running_) {
      peer->conn.shutdown();
      break;
    }
    peers_.emplace_back(peer, std::thread([this, peer] { serve(peer); }));
  }
}

void Broker::serve(std::shared_ptr<Peer> peer) {
  try {
    while (auto msg = peer->conn.receive()) {
      if (auto* m = std::get_if<E2SetupRequest>(&*msg)) {
        enqueue(NodeUp{peer, m->node, m->version});
      } else if (auto* m = std::get_if<SubscriptionRequestMsg>(&*msg)) {
        enqueue(Subscribe{peer, std::move(*m)});
      } else if (auto* m = std::get_if<SubscriptionDelete>(&*msg)) {
        enqueue(Unsubscribe{peer, std::move(*m)});
      } else if (auto* m = std::get_if<IndicationMessage>(&*msg)) {
        if (!peer->is_node || E2NodeId{peer->node_id} != m->node) {
          log("closing connection: indication from a peer without E2 setup for that node");
          break;
        }
        fan_out(*m);
      } else {
        log(fmt::format("closing connection: unexpected message kind {}", static_cast<int>(kind_of(*msg))));
        break;
      }
    }
  } catch (const DecodeError& e) {
    log(fmt::format("closing connection: malformed frame ({})", e.what()));
  }
  peer->conn.shutdown();
  enqueue(PeerGone{peer});
}

void Broker::enqueue(Job job) {
  {
    std::lock_guard lock(queue_mu_);
    queue_.push_back(std::move(job));
  }
  queue_cv_.notify_one();
}

void Broker::decision_loop() {
  std::unique_lock lock(queue_mu_);
  for (;;) {
    queue_cv_.wait(lock, [&] { return !queue_.empty() || !running_; });
    if (queue_.empty()) return;
    Job job = std::move(queue_.front());
    queue_.pop_front();
    lock.unlock();
    handle(job);
    lock.lock();
  }
}

void Broker::handle(Job& job) {
  if (auto* j = std::get_if<NodeUp>(&job)) {
    if (j->version != kProtocolVersion) {
      log(fmt::format("rejecting node {}: protocol version {}", j->node.value, j->version));
      j->peer->conn.send(E2SetupResponse{j->node, false});
      j->peer->conn.shutdown();
      return;
    }
    j->peer->node_id = j->node.value;
    j->peer->is_node = true;
    nodes_[j->node] = j->peer;
    j->peer->conn.send(E2SetupResponse{j->node, true});
    log(fmt::format("node {} connected", j->node.value));
    // A node reconnecting picks up the streams already planned for it.
    PlanDelta existing;
    {
      std::lock_guard lock(state_mu_);
      for (const auto& [key, plan] : state_.plans())
        if (key.node == j->node)
          for (const auto& s : plan.streams) existing.push_back({ChangeAction::Add, s, std::nullopt});
    }
    push_delta(existing);
    return;
  }

  if (auto* j = std::get_if<Subscribe>(&job)) {
    const auto& req = j->msg.request;
    SubscriptionResponse resp{j->msg.request_id, true, {}};
    if (req.xapp == kBrokerXApp) {
      resp = {j->msg.request_id, false, "reserved xapp id"};
    } else if (!nodes_.count(req.node)) {
      resp = {j->msg.request_id, false, fmt::format("unknown node {}", req.node.value)};
    } else {
      try {
        PlanDelta delta;
        {
          std::lock_guard lock(state_mu_);
          delta = state_.submit(req);
        }
        xapps_[req.xapp] = j->peer;
        j->peer->xapps.insert(req.xapp);
        push_delta(delta);
        publish_snapshot();
      } catch (const InvalidArgument& e) {
        resp = {j->msg.request_id, false, e.what()};
      }
    }
    j->peer->conn.send(resp);
    return;
  }

  if (auto* j = std::get_if<Unsubscribe>(&job)) {
    const auto& del = j->msg;
    SubscriptionResponse resp{del.request_id, true, {}};
    try {
      PlanDelta delta;
      {
        std::lock_guard lock(state_mu_);
        if (del.items.empty()) {
          delta = state_.withdraw(del.xapp, del.node);
        } else {
          MergeState trial = state_;
          for (const auto& it : del.items) {
            auto part = trial.remove_demand(del.xapp, del.node, it.kpi);
            delta.insert(delta.end(), part.begin(), part.end());
          }
          state_ = std::move(trial);
        }
      }
      push_delta(delta);
      publish_snapshot();
    } catch (const InvalidArgument& e) {
      resp = {del.request_id, false, e.what()};
    }
    j->peer->conn.send(resp);
    return;
  }

  if (auto* j = std::get_if<PeerGone>(&job)) {
    if (j->peer->is_node) {
      const E2NodeId node{j->peer->node_id};
      if (auto it = nodes_.find(node); it != nodes_.end() && it->second == j->peer) {
        nodes_.erase(it);
        log(fmt::format("node {} disconnected", node.value));
      }
    }
    PlanDelta delta;
    for (XAppId x : j->peer->xapps) {
      auto it = xapps_.find(x);
      if (it == xapps_.end() || it->second != j->peer) continue;
      xapps_.erase(it);
      std::lock_guard lock(state_mu_);
      std::set<E2NodeId> nodes;
      for (const auto& d : state_.demands())
        if (d.xapp == x) nodes.insert(d.node);
      for (E2NodeId n : nodes) {
        auto part = state_.withdraw(x, n);
        delta.insert(delta.end(), part.begin(), part.end());
      }
    }
    push_delta(delta);
    publish_snapshot();
  }
}

void Broker::push_delta(const PlanDelta& delta) {
  std::map<E2NodeId, std::pair<SubscriptionDelete, SubscriptionRequestMsg>> per_node;
  for (const auto& c : delta) {
    auto& [del, add] = per_node[c.stream.node];
    del.xapp = kBrokerXApp;
    del.node = c.stream.node;
    add.request.xapp = kBrokerXApp;
    add.request.node = c.stream.node;
    if (c.action == ChangeAction::Remove) del.items.push_back({c.stream.kpi, c.stream.period.millis()});
    if (c.action == ChangeAction::Retime) del.items.push_back({c.stream.kpi, c.previous->millis()});
    if (c.action != ChangeAction::Remove) add.request.items.push_back({c.stream.kpi, c.stream.period, {}});
  }
  for (auto& [node, msgs] : per_node) {
    auto it = nodes_.find(node);
    if (it == nodes_.end()) continue;
    if (!msgs.first.items.empty()) it->second->conn.send(msgs.first);
    if (!msgs.second.request.items.empty()) it->second->conn.send(msgs.second);
  }
}

void Broker::publish_snapshot() {
  auto snap = std::make_shared<Snapshot>();
  {
    std::lock_guard lock(state_mu_);
    for (const auto& [key, plan] : state_.plans()) {
      auto& streams = snap->streams[key];
      for (const auto& s : plan.streams) streams.push_back({s.period.millis(), {}});
      for (const auto& [xapp, idx] : plan.fanout) streams[idx].readers.push_back(xapp);
    }
  }
  snap->xapps = xapps_;
  std::lock_guard lock(snapshot_mu_);
  snapshot_ = std::move(snap);
}

void Broker::fan_out(const IndicationMessage& ind) {
  std::shared_ptr<const Snapshot> snap;
  {
    std::lock_guard lock(snapshot_mu_);
    snap = snapshot_;
  }
  indications_in_ += 1;
  samples_in_ += ind.samples.size();

  // Two streams of one KPI due at the same instant each contribute one
  // sample; hand the k-th copy to the k-th due stream in period order.
  std::map<std::pair<std::string, std::int64_t>, std::size_t> seen;
  std::map<XAppId, std::vector<KpiSample>> out;
  for (const auto& s : ind.samples) {
    auto it = snap->streams.find(PairKey{ind.node, s.kpi});
    if (it == snap->streams.end()) continue;
    std::size_t& copy = seen[{s.kpi.name(), s.sample_time}];
    std::size_t due = 0;
    for (const auto& stream : it->second) {
      if (s.sample_time % stream.period != 0) continue;
      if (due++ == copy) {
        for (XAppId x : stream.readers) out[x].push_back(s);
        break;
      }
    }
    ++copy;
  }
  for (auto& [xapp, samples] : out) {
    auto peer = snap->xapps.find(xapp);
    if (peer == snap->xapps.end()) continue;
    samples_out_ += samples.size();
    peer->second->conn.send(IndicationMessage{ind.node, ind.emit_time, std::move(samples)});
  }
}

void Broker::stats_loop() {
  std::unique_lock lock(stop_mu_);
  while (running_) {
    stop_cv_.wait_for(lock, std::chrono::milliseconds(opts_.stats_interval_ms), [&] { return !running_; });
    if (!running_) break;
    const BrokerStats s = stats();
    log(fmt::format("stats streams={} sample_rate={:.3f}/s predicted_watts={:.3f} indications_in={} samples_in={} "
                    "samples_out={}",
                    s.streams, s.sample_rate, s.predicted_watts, s.indications_in, s.samples_in, s.samples_out));
  }
}

BrokerStats Broker::stats() const {
  BrokerStats s;
  {
    std::lock_guard lock(state_mu_);
    s.streams = state_.stream_count();
    s.sample_rate = state_.total_sample_rate().value();
  }
  s.predicted_watts = power::predict(opts_.power, s.sample_rate);
  s.indications_in = indications_in_;
  s.samples_in = samples_in_;
  s.samples_out = samples_out_;
  return s;
}

MergeState Broker::state() const {
  std::lock_guard lock(state_mu_);
  return state_;
}

}  // namespace ricsim::wire
