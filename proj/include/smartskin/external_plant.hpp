#pragma once

#include <atomic>
#include <chrono>
#include <csignal>
#include <cstring>
#include <memory>
#include <mutex>
#include <string>

#include <netdb.h>
#include <sys/socket.h>
#include <sys/types.h>
#include <sys/wait.h>
#include <unistd.h>

#include "smartskin/error.hpp"
#include "smartskin/fdio.hpp"
#include "smartskin/geometry.hpp"
#include "smartskin/measurement.hpp"
#include "smartskin/plant.hpp"
#include "smartskin/protocol.hpp"

namespace smartskin {

/// Where an external plant lives: `tcp:<host>:<port>` or `cmd:<shell command>` (stdio pipes).
struct Endpoint {
  enum class Kind { tcp, command } kind = Kind::tcp;
  std::string host;
  std::string port;
  std::string command;

  static Endpoint parse(const std::string& spec) {
    Endpoint e;
    if (spec.rfind("tcp:", 0) == 0) {
      const std::string rest = spec.substr(4);
      const auto colon = rest.rfind(':');
      if (colon == std::string::npos || colon == 0 || colon + 1 == rest.size()) {
        throw ConfigError("tcp endpoint must look like tcp:<host>:<port>, got '" + spec + "'");
      }
      e.kind = Kind::tcp;
      e.host = rest.substr(0, colon);
      e.port = rest.substr(colon + 1);
      return e;
    }
    if (spec.rfind("cmd:", 0) == 0 && spec.size() > 4) {
      e.kind = Kind::command;
      e.command = spec.substr(4);
      return e;
    }
    throw ConfigError("unknown plant endpoint '" + spec + "' (expected tcp:<host>:<port> or cmd:<command>)");
  }
};

namespace detail {

class Channel {
 public:
  virtual ~Channel() = default;
  virtual int read_fd() const = 0;
  virtual int write_fd() const = 0;
};

class TcpChannel final : public Channel {
 public:
  TcpChannel(const std::string& host, const std::string& port) {
    addrinfo hints{};
    hints.ai_family = AF_UNSPEC;
    hints.ai_socktype = SOCK_STREAM;
    addrinfo* res = nullptr;
    if (const int rc = ::getaddrinfo(host.c_str(), port.c_str(), &hints, &res); rc != 0) {
      throw ConnectionError("cannot resolve " + host + ":" + port + ": " + gai_strerror(rc));
    }
    std::string last = "no addresses";
    for (addrinfo* ai = res; ai; ai = ai->ai_next) {
      const int fd = ::socket(ai->ai_family, ai->ai_socktype, ai->ai_protocol);
      if (fd < 0) continue;
      if (::connect(fd, ai->ai_addr, ai->ai_addrlen) == 0) {
        fd_ = fd;
        break;
      }
      last = std::strerror(errno);
      ::close(fd);
    }
    ::freeaddrinfo(res);
    if (fd_ < 0) throw ConnectionError("cannot connect to " + host + ":" + port + ": " + last);
  }
  ~TcpChannel() override { ::close(fd_); }
  int read_fd() const override { return fd_; }
  int write_fd() const override { return fd_; }

 private:
  int fd_ = -1;
};

class ProcessChannel final : public Channel {
 public:
  explicit ProcessChannel(const std::string& command) {
    std::signal(SIGPIPE, SIG_IGN);
    int to_child[2];
    int from_child[2];
    if (::pipe(to_child) != 0) throw ConnectionError("pipe failed");
    if (::pipe(from_child) != 0) {
      ::close(to_child[0]);
      ::close(to_child[1]);
      throw ConnectionError("pipe failed");
    }
    pid_ = ::fork();
    if (pid_ < 0) throw ConnectionError("fork failed");
    if (pid_ == 0) {
      ::dup2(to_child[0], STDIN_FILENO);
      ::dup2(from_child[1], STDOUT_FILENO);
      ::close(to_child[0]);
      ::close(to_child[1]);
      ::close(from_child[0]);
      ::close(from_child[1]);
      ::execl("/bin/sh", "sh", "-c", command.c_str(), static_cast<char*>(nullptr));
      ::_exit(127);
    }
    ::close(to_child[0]);
    ::close(from_child[1]);
    write_fd_ = to_child[1];
    read_fd_ = from_child[0];
  }
  ~ProcessChannel() override {
    ::close(write_fd_);
    ::close(read_fd_);
    ::kill(pid_, SIGTERM);
    int status = 0;
    ::waitpid(pid_, &status, 0);
  }
  int read_fd() const override { return read_fd_; }
  int write_fd() const override { return write_fd_; }

 private:
  pid_t pid_ = -1;
  int read_fd_ = -1;
  int write_fd_ = -1;
};

}  // namespace detail

/// Client for a plant reached over the line protocol.
///
/// Strictly serial: one request in flight, enforced by a mutex. Requests are never retried
/// because a real plant actuates on every request. After a timeout the late reply could be
/// mistaken for the next answer, so the channel is marked desynchronized and refuses further use.
class ExternalPlant final : public PlantEvaluator {
 public:
  ExternalPlant(const std::string& endpoint, TapGrid taps, FlowConfig flow,
                std::chrono::milliseconds timeout = std::chrono::seconds(30))
      : taps_(std::move(taps)), flow_(flow), timeout_(timeout) {
    const Endpoint e = Endpoint::parse(endpoint);
    if (e.kind == Endpoint::Kind::tcp) {
      channel_ = std::make_unique<detail::TcpChannel>(e.host, e.port);
    } else {
      channel_ = std::make_unique<detail::ProcessChannel>(e.command);
    }
    reader_ = std::make_unique<fdio::LineReader>(channel_->read_fd());
  }

  Measurement evaluate(const ActuationPattern& pattern, std::uint64_t seed) override {
    std::lock_guard lock(mutex_);
    InFlight guard(*this);
    if (desynchronized_) {
      throw ConnectionError("plant channel is desynchronized after an earlier timeout; reconnect required");
    }
    fdio::write_all(channel_->write_fd(), protocol::format_request(pattern));
    std::string line;
    switch (reader_->read_line(line, std::chrono::steady_clock::now() + timeout_)) {
      case fdio::LineReader::Status::timeout:
        desynchronized_ = true;
        throw PlantTimeout("no response from plant within " + std::to_string(timeout_.count()) + " ms");
      case fdio::LineReader::Status::eof:
        throw ConnectionError("plant closed the connection");
      case fdio::LineReader::Status::line:
        break;
    }
    Measurement m = protocol::parse_response(line, taps_.size());
    m.seed = seed;
    ++evaluations_;
    return m;
  }

  bool supports_concurrent_evaluation() const override { return false; }
  std::chrono::milliseconds nominal_latency() const override { return timeout_; }
  const TapGrid& taps() const override { return taps_; }
  const FlowConfig& flow() const override { return flow_; }

  bool desynchronized() const {
    std::lock_guard lock(mutex_);
    return desynchronized_;
  }
  /// Highest number of simultaneously active evaluate() calls ever observed past the lock.
  int max_in_flight() const noexcept { return max_in_flight_.load(); }
  std::size_t evaluations() const noexcept { return evaluations_.load(); }

 private:
  struct InFlight {
    explicit InFlight(ExternalPlant& p) : plant(p) {
      const int now = ++plant.in_flight_;
      int seen = plant.max_in_flight_.load();
      while (now > seen && !plant.max_in_flight_.compare_exchange_weak(seen, now)) {
      }
    }
    ~InFlight() { --plant.in_flight_; }
    ExternalPlant& plant;
  };

  TapGrid taps_;
  FlowConfig flow_;
  std::chrono::milliseconds timeout_;
  std::unique_ptr<detail::Channel> channel_;
  std::unique_ptr<fdio::LineReader> reader_;
  mutable std::mutex mutex_;
  bool desynchronized_ = false;
  std::atomic<int> in_flight_{0};
  std::atomic<int> max_in_flight_{0};
  std::atomic<std::size_t> evaluations_{0};
};

}  // namespace smartskin
