#pragma once

#include <atomic>
#include <chrono>
#include <cstdint>
#include <cstring>
#include <mutex>
#include <string>
#include <thread>

#include <arpa/inet.h>
#include <netinet/in.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include "smartskin/error.hpp"
#include "smartskin/fdio.hpp"
#include "smartskin/protocol.hpp"
#include "smartskin/surrogate.hpp"

namespace smartskin {

/// Canned behaviours for exercising the external-plant client.
enum class MockMode {
  surrogate,  // evaluate the surrogate, seed = request counter
  baseline,   // always answer with the unforced field
  short_response,  // drop the last tap (41 values)
  error,      // answer every request with ERR
};

struct MockOptions {
  MockMode mode = MockMode::surrogate;
  std::chrono::milliseconds delay{0};
};

/// Answers protocol requests against a surrogate plant and counts protocol misuse.
class MockResponder {
 public:
  MockResponder(SurrogateConfig config, MockOptions options) : plant_(std::move(config)), options_(options) {}

  /// Serves one stream until EOF or `stop` is raised.
  void serve(int in_fd, int out_fd, const std::atomic<bool>* stop = nullptr) {
    fdio::LineReader reader(in_fd);
    std::string line;
    while (!(stop && stop->load())) {
      const auto status = reader.read_line(line, std::chrono::steady_clock::now() + std::chrono::milliseconds(50));
      if (status == fdio::LineReader::Status::eof) return;
      if (status == fdio::LineReader::Status::timeout) continue;
      if (detail::trim(line).empty()) continue;
      const std::string reply = answer(line);
      if (options_.delay.count() > 0) std::this_thread::sleep_for(options_.delay);
      // A well-behaved client never sends a second request before reading the reply.
      if (reader.poll_pending()) ++overlap_violations_;
      try {
        fdio::write_all(out_fd, reply);
      } catch (const ConnectionError&) {
        return;
      }
    }
  }

  std::string answer(const std::string& line) {
    ActuationPattern p;
    try {
      p = protocol::parse_request(line);
    } catch (const EncodingError& e) {
      return protocol::format_error(e.what());
    }
    const std::uint64_t n = requests_++;
    std::lock_guard lock(plant_mutex_);
    switch (options_.mode) {
      case MockMode::error:
        return protocol::format_error("actuator bank fault");
      case MockMode::baseline:
        return protocol::format_measurement(plant_.baseline());
      case MockMode::short_response: {
        Measurement m = plant_.evaluate(p, n);
        m.mean_pressure.pop_back();
        return protocol::format_measurement(m);
      }
      case MockMode::surrogate:
        break;
    }
    return protocol::format_measurement(plant_.evaluate(p, n));
  }

  std::uint64_t requests() const noexcept { return requests_.load(); }
  std::uint64_t overlap_violations() const noexcept { return overlap_violations_.load(); }

 private:
  SurrogatePlant plant_;
  MockOptions options_;
  std::mutex plant_mutex_;
  std::atomic<std::uint64_t> requests_{0};
  std::atomic<std::uint64_t> overlap_violations_{0};
};

/// Loopback TCP server on 127.0.0.1 with an ephemeral port; connections are served one at a time.
class MockPlantServer {
 public:
  explicit MockPlantServer(SurrogateConfig config, MockOptions options = {}, std::uint16_t port = 0)
      : responder_(std::move(config), options) {
    listen_fd_ = ::socket(AF_INET, SOCK_STREAM, 0);
    if (listen_fd_ < 0) throw ConnectionError("socket failed");
    const int one = 1;
    ::setsockopt(listen_fd_, SOL_SOCKET, SO_REUSEADDR, &one, sizeof one);
    sockaddr_in addr{};
    addr.sin_family = AF_INET;
    addr.sin_addr.s_addr = htonl(INADDR_LOOPBACK);
    addr.sin_port = htons(port);
    if (::bind(listen_fd_, reinterpret_cast<sockaddr*>(&addr), sizeof addr) != 0 || ::listen(listen_fd_, 4) != 0) {
      ::close(listen_fd_);
      throw ConnectionError(std::string("cannot listen on loopback: ") + std::strerror(errno));
    }
    socklen_t len = sizeof addr;
    ::getsockname(listen_fd_, reinterpret_cast<sockaddr*>(&addr), &len);
    port_ = ntohs(addr.sin_port);
    thread_ = std::thread([this] { run(); });
  }

  MockPlantServer(const MockPlantServer&) = delete;
  MockPlantServer& operator=(const MockPlantServer&) = delete;

  ~MockPlantServer() {
    stop_ = true;
    thread_.join();
    ::close(listen_fd_);
  }

  std::uint16_t port() const noexcept { return port_; }
  std::string endpoint() const { return "tcp:127.0.0.1:" + std::to_string(port_); }
  const MockResponder& responder() const noexcept { return responder_; }

 private:
  void run() {
    while (!stop_) {
      pollfd p{listen_fd_, POLLIN, 0};
      if (::poll(&p, 1, 50) <= 0) continue;
      const int fd = ::accept(listen_fd_, nullptr, nullptr);
      if (fd < 0) continue;
      responder_.serve(fd, fd, &stop_);
      ::close(fd);
    }
  }

  MockResponder responder_;
  int listen_fd_ = -1;
  std::uint16_t port_ = 0;
  std::atomic<bool> stop_{false};
  std::thread thread_;
};

}  // namespace smartskin
