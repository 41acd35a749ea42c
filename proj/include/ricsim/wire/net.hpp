// SPDX-License-Identifier: Apache-2.0
//
// Blocking TCP plumbing over POSIX sockets.
#pragma once

#include <atomic>
#include <cstdint>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>

#include "ricsim/wire/protocol.hpp"

namespace ricsim::wire {

class NetError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class Socket {
public:
  Socket() = default;
  explicit Socket(int fd) : fd_(fd) {}
  Socket(Socket&& o) noexcept : fd_(std::exchange(o.fd_, -1)) {}
  Socket& operator=(Socket&& o) noexcept;
  Socket(const Socket&) = delete;
  Socket& operator=(const Socket&) = delete;
  ~Socket();

  [[nodiscard]] int fd() const { return fd_; }
  [[nodiscard]] bool valid() const { return fd_ >= 0; }
  /// Unblocks any thread sitting in accept/recv on this socket.
  void shutdown() const;

private:
  int fd_ = -1;
};

struct Endpoint {
  std::string host;
  std::uint16_t port = 0;
};

/// "host:port"; throws NetError.
Endpoint parse_endpoint(const std::string& text);

Socket listen_tcp(const Endpoint& ep, int backlog = 64);
std::uint16_t local_port(const Socket& s);
/// Invalid socket once the listener is shut down.
Socket accept_tcp(const Socket& listener);
Socket connect_tcp(const Endpoint& ep);

/// Framed message stream over a connected socket. send() may be called from
/// several threads; receive() from one.
class Connection {
public:
  explicit Connection(Socket s) : sock_(std::move(s)) {}

  /// False once the peer is gone.
  bool send(const WireMessage& msg);
  /// nullopt on orderly close or I/O error; DecodeError on a malformed frame.
  std::optional<WireMessage> receive();
  void shutdown() const { sock_.shutdown(); }

  [[nodiscard]] std::uint64_t bytes_sent() const { return bytes_sent_; }

private:
  Socket sock_;
  std::mutex send_mu_;
  FrameDecoder decoder_;
  std::atomic<std::uint64_t> bytes_sent_{0};
};

}  // namespace ricsim::wire
