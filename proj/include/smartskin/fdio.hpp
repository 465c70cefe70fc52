#pragma once

#include <algorithm>
#include <cerrno>
#include <chrono>
#include <cstring>
#include <string>

#include <poll.h>
#include <sys/socket.h>
#include <sys/stat.h>
#include <unistd.h>

#include "smartskin/error.hpp"

namespace smartskin::fdio {

inline bool is_socket(int fd) {
  struct stat st{};
  return fstat(fd, &st) == 0 && S_ISSOCK(st.st_mode);
}

/// Writes everything or throws ConnectionError. Sockets use MSG_NOSIGNAL so a closed peer
/// surfaces as an error instead of SIGPIPE.
inline void write_all(int fd, const std::string& data) {
  const bool sock = is_socket(fd);
  std::size_t off = 0;
  while (off < data.size()) {
    const ssize_t n = sock ? ::send(fd, data.data() + off, data.size() - off, MSG_NOSIGNAL)
                           : ::write(fd, data.data() + off, data.size() - off);
    if (n < 0) {
      if (errno == EINTR) continue;
      throw ConnectionError(std::string("write failed: ") + std::strerror(errno));
    }
    off += static_cast<std::size_t>(n);
  }
}

/// Buffered line reader over a file descriptor with deadline-based timeouts.
class LineReader {
 public:
  explicit LineReader(int fd) : fd_(fd) {}

  enum class Status { line, timeout, eof };

  /// Waits until a full line is buffered, the deadline passes, or the peer closes.
  Status read_line(std::string& line, std::chrono::steady_clock::time_point deadline) {
    while (true) {
      const std::size_t nl = buffer_.find('\n');
      if (nl != std::string::npos) {
        line = buffer_.substr(0, nl);
        buffer_.erase(0, nl + 1);
        if (!line.empty() && line.back() == '\r') line.pop_back();
        return Status::line;
      }
      if (eof_) return Status::eof;
      const auto remaining =
          std::chrono::duration_cast<std::chrono::milliseconds>(deadline - std::chrono::steady_clock::now()).count();
      if (remaining <= 0) return Status::timeout;
      if (!wait_readable(static_cast<int>(std::min<long long>(remaining, 60000)))) continue;
      fill();
    }
  }

  Status read_line(std::string& line) {
    return read_line(line, std::chrono::steady_clock::time_point::max() - std::chrono::hours(1));
  }

  /// Pulls in whatever is immediately available; true if unread bytes are buffered afterwards.
  bool poll_pending() {
    if (!eof_ && wait_readable(0)) fill();
    return !buffer_.empty();
  }

  bool eof() const noexcept { return eof_ && buffer_.empty(); }

 private:
  bool wait_readable(int timeout_ms) {
    pollfd p{fd_, POLLIN, 0};
    const int r = ::poll(&p, 1, timeout_ms);
    if (r < 0) {
      if (errno == EINTR) return false;
      throw ConnectionError(std::string("poll failed: ") + std::strerror(errno));
    }
    return r > 0;
  }

  void fill() {
    char buf[4096];
    const ssize_t n = ::read(fd_, buf, sizeof buf);
    if (n < 0) {
      if (errno == EINTR || errno == EAGAIN) return;
      if (errno == ECONNRESET) {
        eof_ = true;
        return;
      }
      throw ConnectionError(std::string("read failed: ") + std::strerror(errno));
    }
    if (n == 0) {
      eof_ = true;
      return;
    }
    buffer_.append(buf, static_cast<std::size_t>(n));
  }

  int fd_;
  std::string buffer_;
  bool eof_ = false;
};

}  // namespace smartskin::fdio
