/*
 * Copyright 2026 The MACE Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <arpa/inet.h>
#include <fcntl.h>
#include <netdb.h>
#include <netinet/in.h>
#include <netinet/tcp.h>
#include <poll.h>
#include <signal.h>
#include <sys/socket.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>

#include "mace/errors.h"
#include "mace/remote_scorer.h"

namespace mace {

namespace {

std::string Errno(const std::string& what) {
  return what + ": " + std::strerror(errno);
}

}  // namespace

FdLineChannel::FdLineChannel(int read_fd, int write_fd, pid_t child)
    : read_fd_(read_fd), write_fd_(write_fd), child_(child) {}

FdLineChannel::~FdLineChannel() {
  if (write_fd_ >= 0 && write_fd_ != read_fd_) ::close(write_fd_);
  if (read_fd_ >= 0) ::close(read_fd_);
  if (child_ > 0) {
    int status = 0;
    if (::waitpid(child_, &status, WNOHANG) == 0) {
      ::kill(child_, SIGTERM);
      ::waitpid(child_, &status, 0);
    }
  }
}

void FdLineChannel::WriteLine(std::string_view line) {
  std::string data(line);
  data.push_back('\n');
  std::size_t off = 0;
  while (off < data.size()) {
    ssize_t n = ::send(write_fd_, data.data() + off, data.size() - off,
                       MSG_NOSIGNAL);
    if (n < 0 && errno == ENOTSOCK) {
      n = ::write(write_fd_, data.data() + off, data.size() - off);
    }
    if (n < 0) {
      if (errno == EINTR) continue;
      throw TransportError(Errno("write to scorer failed"));
    }
    off += static_cast<std::size_t>(n);
  }
}

std::string FdLineChannel::ReadLine(std::chrono::milliseconds timeout) {
  const auto deadline = std::chrono::steady_clock::now() + timeout;
  while (true) {
    const auto nl = buffer_.find('\n');
    if (nl != std::string::npos) {
      std::string line = buffer_.substr(0, nl);
      buffer_.erase(0, nl + 1);
      if (!line.empty() && line.back() == '\r') line.pop_back();
      return line;
    }
    const auto left = std::chrono::duration_cast<std::chrono::milliseconds>(
        deadline - std::chrono::steady_clock::now());
    if (left.count() <= 0) throw TransportError("scorer timed out");
    pollfd pfd{read_fd_, POLLIN, 0};
    const int ready = ::poll(&pfd, 1, static_cast<int>(left.count()));
    if (ready < 0) {
      if (errno == EINTR) continue;
      throw TransportError(Errno("poll failed"));
    }
    if (ready == 0) throw TransportError("scorer timed out");
    char buf[4096];
    const ssize_t n = ::read(read_fd_, buf, sizeof(buf));
    if (n < 0) {
      if (errno == EINTR || errno == EAGAIN) continue;
      throw TransportError(Errno("read from scorer failed"));
    }
    if (n == 0) throw TransportError("scorer closed the stream");
    buffer_.append(buf, static_cast<std::size_t>(n));
  }
}

std::pair<std::unique_ptr<LineChannel>, std::unique_ptr<LineChannel>>
MakeChannelPair() {
  int fds[2];
  if (::socketpair(AF_UNIX, SOCK_STREAM, 0, fds) != 0) {
    throw TransportError(Errno("socketpair failed"));
  }
  return {std::make_unique<FdLineChannel>(fds[0], fds[0]),
          std::make_unique<FdLineChannel>(fds[1], fds[1])};
}

std::unique_ptr<LineChannel> ConnectTcp(const std::string& host,
                                        std::uint16_t port) {
  addrinfo hints{};
  hints.ai_family = AF_UNSPEC;
  hints.ai_socktype = SOCK_STREAM;
  addrinfo* res = nullptr;
  const auto service = std::to_string(port);
  if (const int rc = ::getaddrinfo(host.c_str(), service.c_str(), &hints, &res);
      rc != 0) {
    throw TransportError("cannot resolve " + host + ": " + ::gai_strerror(rc));
  }
  int fd = -1;
  for (auto* ai = res; ai != nullptr; ai = ai->ai_next) {
    fd = ::socket(ai->ai_family, ai->ai_socktype, ai->ai_protocol);
    if (fd < 0) continue;
    if (::connect(fd, ai->ai_addr, ai->ai_addrlen) == 0) break;
    ::close(fd);
    fd = -1;
  }
  ::freeaddrinfo(res);
  if (fd < 0) {
    throw TransportError("cannot connect to " + host + ":" + service);
  }
  int one = 1;
  ::setsockopt(fd, IPPROTO_TCP, TCP_NODELAY, &one, sizeof(one));
  return std::make_unique<FdLineChannel>(fd, fd);
}

std::unique_ptr<LineChannel> SpawnProcess(const std::string& command) {
  int to_child[2], from_child[2];
  if (::pipe(to_child) != 0) throw TransportError(Errno("pipe failed"));
  if (::pipe(from_child) != 0) {
    ::close(to_child[0]);
    ::close(to_child[1]);
    throw TransportError(Errno("pipe failed"));
  }
  const pid_t pid = ::fork();
  if (pid < 0) throw TransportError(Errno("fork failed"));
  if (pid == 0) {
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
  ::fcntl(to_child[1], F_SETFD, FD_CLOEXEC);
  ::fcntl(from_child[0], F_SETFD, FD_CLOEXEC);
  // Writes to a dead child must surface as errors, not kill us.
  ::signal(SIGPIPE, SIG_IGN);
  return std::make_unique<FdLineChannel>(from_child[0], to_child[1], pid);
}

std::unique_ptr<LineChannel> OpenChannel(const std::string& address) {
  constexpr std::string_view kTcp = "tcp://";
  constexpr std::string_view kExec = "exec:";
  if (address.rfind(kTcp, 0) == 0) {
    const auto rest = address.substr(kTcp.size());
    const auto colon = rest.rfind(':');
    if (colon == std::string::npos) {
      throw ConfigError("scorer address '" + address + "' lacks a port");
    }
    int port = 0;
    try {
      port = std::stoi(rest.substr(colon + 1));
    } catch (const std::exception&) {
      port = -1;
    }
    if (port <= 0 || port > 65535) {
      throw ConfigError("scorer address '" + address + "' has a bad port");
    }
    return ConnectTcp(rest.substr(0, colon), static_cast<std::uint16_t>(port));
  }
  if (address.rfind(kExec, 0) == 0) {
    return SpawnProcess(address.substr(kExec.size()));
  }
  throw ConfigError("scorer address must start with tcp:// or exec: (got '" +
                    address + "')");
}

TcpListener::TcpListener(std::uint16_t port) {
  fd_ = ::socket(AF_INET, SOCK_STREAM, 0);
  if (fd_ < 0) throw TransportError(Errno("socket failed"));
  int one = 1;
  ::setsockopt(fd_, SOL_SOCKET, SO_REUSEADDR, &one, sizeof(one));
  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_addr.s_addr = htonl(INADDR_LOOPBACK);
  addr.sin_port = htons(port);
  if (::bind(fd_, reinterpret_cast<sockaddr*>(&addr), sizeof(addr)) != 0 ||
      ::listen(fd_, 8) != 0) {
    const auto msg = Errno("cannot listen");
    ::close(fd_);
    throw TransportError(msg);
  }
  socklen_t len = sizeof(addr);
  ::getsockname(fd_, reinterpret_cast<sockaddr*>(&addr), &len);
  port_ = ntohs(addr.sin_port);
}

TcpListener::~TcpListener() {
  if (fd_ >= 0) ::close(fd_);
}

std::unique_ptr<LineChannel> TcpListener::Accept() {
  const int fd = ::accept(fd_, nullptr, nullptr);
  if (fd < 0) throw TransportError(Errno("accept failed"));
  int one = 1;
  ::setsockopt(fd, IPPROTO_TCP, TCP_NODELAY, &one, sizeof(one));
  return std::make_unique<FdLineChannel>(fd, fd);
}

}  // namespace mace
