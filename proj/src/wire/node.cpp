// SPDX-License-Identifier: Apache-2.0
#include "ricsim/wire/node.hpp"

#include <fmt/format.h>

#include <charconv>

namespace ricsim::wire {

namespace {

bool in_catalog(const std::string& name, int kpis) {
  if (name.rfind("kpi.", 0) != 0) return false;
  int index = -1;
  const char* end = name.data() + name.size();
  auto [p, ec] = std::from_chars(name.data() + 4, end, index);
  return ec == std::errc{} && p == end && index >= 0 && index < kpis;
}

}  // namespace

NodeEmulator::NodeEmulator(NodeOptions opts) : opts_(std::move(opts)) {
  if (opts_.kpis < 1) throw InvalidArgument("node needs at least one KPI in its catalog");
  if (opts_.connect_attempts < 1) throw InvalidArgument("connect_attempts must be >= 1");
}

NodeEmulator::~NodeEmulator() { stop(); }

void NodeEmulator::log(const std::string& line) const {
  if (opts_.log) *opts_.log << fmt::format("node {}: {}\n", opts_.node.value, line) << std::flush;
}

std::int64_t NodeEmulator::now_ms() const {
  return std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - origin_).count();
}

void NodeEmulator::start() {
  const Endpoint ep = parse_endpoint(opts_.broker);
  auto backoff = opts_.initial_backoff;
  for (int attempt = 1;; ++attempt) {
    try {
      conn_ = std::make_unique<Connection>(connect_tcp(ep));
      break;
    } catch (const NetError& e) {
      if (attempt >= opts_.connect_attempts)
        throw NetError(fmt::format("broker {} unreachable after {} attempts: {}", opts_.broker, attempt, e.what()));
      log(fmt::format("connect failed ({}), retrying in {} ms", e.what(), backoff.count()));
      std::this_thread::sleep_for(backoff);
      backoff *= 2;
    }
  }

  if (!conn_->send(E2SetupRequest{kProtocolVersion, opts_.node})) throw NetError("E2 setup: send failed");
  auto reply = conn_->receive();
  auto* resp = reply ? std::get_if<E2SetupResponse>(&*reply) : nullptr;
  if (!resp || !resp->accepted || resp->node != opts_.node) throw NetError("E2 setup rejected by broker");

  origin_ = std::chrono::steady_clock::now();
  running_ = true;
  connected_ = true;
  reader_ = std::thread([this] { read_loop(); });
  emitter_ = std::thread([this] { emit_loop(); });
  log("E2 setup complete");
}

void NodeEmulator::stop() {
  if (!running_.exchange(false)) return;
  cv_.notify_all();
  if (emitter_.joinable()) emitter_.join();
  if (conn_) conn_->shutdown();
  if (reader_.joinable()) reader_.join();
  connected_ = false;
}

void NodeEmulator::read_loop() {
  try {
    while (auto msg = conn_->receive()) {
      std::lock_guard lock(mu_);
      if (auto* m = std::get_if<SubscriptionRequestMsg>(&*msg)) {
        const std::int64_t now = now_ms();
        for (const auto& item : m->request.items) {
          const auto& name = item.kpi.name();
          if (!in_catalog(name, opts_.kpis)) {
            log("ignoring KPI outside catalog: " + name);
            continue;
          }
          const std::int64_t p = item.period.millis();
          // First emission on the next multiple of the period after setup.
          streams_[{name, p}] = ActiveStream{(now + p - 1) / p * p};
          stats_.stream_adds += 1;
        }
      } else if (auto* m = std::get_if<SubscriptionDelete>(&*msg)) {
        for (const auto& item : m->items) streams_.erase({item.kpi.name(), item.period_ms});
      }
      cv_.notify_all();
    }
  } catch (const std::exception& e) {
    log(std::string("closing connection: ") + e.what());
  }
  connected_ = false;
  cv_.notify_all();
}

void NodeEmulator::emit_loop() {
  std::unique_lock lock(mu_);
  while (running_ && connected_) {
    if (streams_.empty()) {
      cv_.wait_for(lock, std::chrono::milliseconds(50));
      continue;
    }
    std::int64_t due = INT64_MAX;
    for (const auto& [key, s] : streams_) due = std::min(due, s.next_due);
    const auto deadline = origin_ + std::chrono::milliseconds(due);
    if (std::chrono::steady_clock::now() < deadline) {
      cv_.wait_until(lock, deadline);
      continue;  // re-evaluate: streams may have changed
    }

    IndicationMessage ind{opts_.node, due, {}};
    for (auto& [key, s] : streams_) {
      if (s.next_due != due) continue;
      ind.samples.push_back({KpiId{key.first}, due});
      stats_.per_stream[key] += 1;
      s.next_due += key.second;
    }
    stats_.messages += 1;
    stats_.samples += ind.samples.size();
    stats_.logical_bytes += static_cast<std::uint64_t>(
        opts_.header_bytes + static_cast<std::int64_t>(ind.samples.size()) * opts_.bytes_per_sample);
    lock.unlock();
    conn_->send(ind);
    lock.lock();
  }
  stats_.wire_bytes = conn_->bytes_sent();
}

NodeStats NodeEmulator::stats() const {
  std::lock_guard lock(mu_);
  NodeStats s = stats_;
  if (conn_) s.wire_bytes = conn_->bytes_sent();
  return s;
}

std::map<std::string, std::vector<std::int64_t>> NodeEmulator::streams() const {
  std::lock_guard lock(mu_);
  std::map<std::string, std::vector<std::int64_t>> out;
  for (const auto& [key, s] : streams_) out[key.first].push_back(key.second);
  return out;
}

}  // namespace ricsim::wire
