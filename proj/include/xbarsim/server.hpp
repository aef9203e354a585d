#pragma once

#include <atomic>
#include <cerrno>
#include <cstdint>
#include <mutex>
#include <string>
#include <thread>

#include <netinet/in.h>
#include <netinet/tcp.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include "xbarsim/crossbar.hpp"
#include "xbarsim/port.hpp"
#include "xbarsim/wire.hpp"

namespace xbarsim {

namespace detail {
inline bool send_all(int fd, const std::string& data) {
    const char* p = data.data();
    std::size_t n = data.size();
    while (n > 0) {
        const ssize_t k = ::send(fd, p, n, MSG_NOSIGNAL);
        if (k <= 0) {
            if (k < 0 && errno == EINTR) continue;
            return false;
        }
        p += k;
        n -= static_cast<std::size_t>(k);
    }
    return true;
}
} // namespace detail

/// Loopback instrument stand-in: serves the wire protocol over TCP,
/// backed by the virtual array. One client at a time, requests
/// serialized, malformed input answered (never fatal). Binds an
/// ephemeral port by default; ask port() after construction.
class MockServer {
public:
    MockServer(Crossbar& cb, ReadNoise noise, RandomStream& rng, std::uint16_t port = 0)
        : backend_(cb, noise, rng) {
        listen_fd_ = ::socket(AF_INET, SOCK_STREAM | SOCK_NONBLOCK, 0);
        if (listen_fd_ < 0) throw port_error(0, "mock server: socket failed");
        int one = 1;
        ::setsockopt(listen_fd_, SOL_SOCKET, SO_REUSEADDR, &one, sizeof one);
        sockaddr_in addr{};
        addr.sin_family = AF_INET;
        addr.sin_addr.s_addr = htonl(INADDR_LOOPBACK);
        addr.sin_port = htons(port);
        if (::bind(listen_fd_, reinterpret_cast<sockaddr*>(&addr), sizeof addr) < 0 ||
            ::listen(listen_fd_, 1) < 0) {
            ::close(listen_fd_);
            throw port_error(0, "mock server: bind failed");
        }
        socklen_t len = sizeof addr;
        ::getsockname(listen_fd_, reinterpret_cast<sockaddr*>(&addr), &len);
        port_ = ntohs(addr.sin_port);
        running_ = true;
        thread_ = std::thread([this] { serve(); });
    }

    MockServer(const MockServer&) = delete;
    MockServer& operator=(const MockServer&) = delete;

    ~MockServer() { stop(); }

    std::uint16_t port() const { return port_; }

    void stop() {
        if (!running_.exchange(false)) {
            if (thread_.joinable()) thread_.join();
            return;
        }
        {
            std::lock_guard<std::mutex> lock(client_mu_);
            if (client_fd_ >= 0) ::shutdown(client_fd_, SHUT_RDWR);
        }
        if (thread_.joinable()) thread_.join();
        if (listen_fd_ >= 0) {
            ::close(listen_fd_);
            listen_fd_ = -1;
        }
    }

private:
    void serve() {
        while (running_) {
            pollfd waiter{listen_fd_, POLLIN, 0};
            if (::poll(&waiter, 1, 200) <= 0) continue;
            const int fd = ::accept(listen_fd_, nullptr, nullptr);
            if (fd < 0) continue;
            int one = 1;
            ::setsockopt(fd, IPPROTO_TCP, TCP_NODELAY, &one, sizeof one);
            timeval tv{0, 200000}; // wake periodically so stop() can land
            ::setsockopt(fd, SOL_SOCKET, SO_RCVTIMEO, &tv, sizeof tv);
            {
                std::lock_guard<std::mutex> lock(client_mu_);
                client_fd_ = fd;
            }
            serve_client(fd);
            {
                std::lock_guard<std::mutex> lock(client_mu_);
                ::close(fd);
                client_fd_ = -1;
            }
        }
    }

    void serve_client(int fd) {
        std::string buf;
        char chunk[4096];
        while (running_) {
            const ssize_t n = ::recv(fd, chunk, sizeof chunk, 0);
            if (n == 0) return; // client hung up
            if (n < 0) {
                if (errno == EAGAIN || errno == EWOULDBLOCK || errno == EINTR) continue;
                return;
            }
            buf.append(chunk, static_cast<std::size_t>(n));
            std::size_t pos;
            while ((pos = buf.find('\n')) != std::string::npos) {
                std::string line = buf.substr(0, pos);
                buf.erase(0, pos + 1);
                if (!detail::send_all(fd, wire::handle_line(std::move(line), backend_) + "\n"))
                    return;
            }
        }
    }

    VirtualPort backend_;
    int listen_fd_ = -1;
    std::uint16_t port_ = 0;
    std::atomic<bool> running_{false};
    std::mutex client_mu_;
    int client_fd_ = -1; // guarded by client_mu_
    std::thread thread_;
};

} // namespace xbarsim
