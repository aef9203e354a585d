#pragma once

#include <cerrno>
#include <cstdint>
#include <sstream>
#include <string>

#include <netdb.h>
#include <netinet/in.h>
#include <netinet/tcp.h>
#include <sys/socket.h>
#include <unistd.h>

#include "xbarsim/port.hpp"
#include "xbarsim/wire.hpp"

namespace xbarsim {

/// Client side of the wire protocol: one request, one reply, no
/// pipelining. The capability descriptor is fetched once at connect
/// (INFO) and cached. Transport-level failures throw port_error with
/// code 0; ERR replies carry the server's code.
class RemotePort final : public DeviceArrayPort {
public:
    RemotePort(const std::string& host, std::uint16_t port, int timeout_ms = 10000) {
        addrinfo hints{};
        hints.ai_family = AF_INET;
        hints.ai_socktype = SOCK_STREAM;
        addrinfo* res = nullptr;
        if (::getaddrinfo(host.c_str(), std::to_string(port).c_str(), &hints, &res) != 0 ||
            res == nullptr)
            throw port_error(0, "remote port: cannot resolve " + host);
        fd_ = ::socket(res->ai_family, res->ai_socktype, res->ai_protocol);
        if (fd_ < 0 || ::connect(fd_, res->ai_addr, res->ai_addrlen) < 0) {
            ::freeaddrinfo(res);
            if (fd_ >= 0) ::close(fd_);
            fd_ = -1;
            throw port_error(0, "remote port: connect to " + host + ":" +
                                    std::to_string(port) + " failed");
        }
        ::freeaddrinfo(res);
        int one = 1;
        ::setsockopt(fd_, IPPROTO_TCP, TCP_NODELAY, &one, sizeof one);
        timeval tv{timeout_ms / 1000, (timeout_ms % 1000) * 1000};
        ::setsockopt(fd_, SOL_SOCKET, SO_RCVTIMEO, &tv, sizeof tv);

        const std::string payload = expect_ok(request("INFO"));
        std::istringstream ss(payload);
        if (!(ss >> info_.rows >> info_.cols >> info_.width_min >> info_.width_max)) {
            ::close(fd_);
            fd_ = -1;
            throw port_error(0, "remote port: malformed INFO reply: " + payload);
        }
    }

    RemotePort(const RemotePort&) = delete;
    RemotePort& operator=(const RemotePort&) = delete;

    ~RemotePort() override {
        if (fd_ >= 0) ::close(fd_);
    }

    PortInfo info() const override { return info_; }

    double read_resistance(std::size_t row, std::size_t col) override {
        const std::string payload = expect_ok(request(wire::read_request(row, col)));
        double value = 0.0;
        if (!wire::parse_double(payload, value))
            throw port_error(0, "remote port: malformed READ value: " + payload);
        return value;
    }

    void apply_pulse(std::size_t row, std::size_t col, const Pulse& pulse) override {
        expect_ok(request(wire::pulse_request(row, col, pulse)));
    }

    void ground_all() override { expect_ok(request("GND")); }

private:
    std::string request(const std::string& line) {
        std::string framed = line + "\n";
        const char* p = framed.data();
        std::size_t n = framed.size();
        while (n > 0) {
            const ssize_t k = ::send(fd_, p, n, MSG_NOSIGNAL);
            if (k <= 0) {
                if (k < 0 && errno == EINTR) continue;
                throw port_error(0, "remote port: send failed");
            }
            p += k;
            n -= static_cast<std::size_t>(k);
        }
        return read_line();
    }

    std::string read_line() {
        std::size_t pos;
        while ((pos = buf_.find('\n')) == std::string::npos) {
            char chunk[4096];
            const ssize_t n = ::recv(fd_, chunk, sizeof chunk, 0);
            if (n == 0) throw port_error(0, "remote port: connection closed");
            if (n < 0) {
                if (errno == EINTR) continue;
                if (errno == EAGAIN || errno == EWOULDBLOCK)
                    throw port_error(0, "remote port: reply timeout");
                throw port_error(0, "remote port: recv failed");
            }
            buf_.append(chunk, static_cast<std::size_t>(n));
        }
        std::string line = buf_.substr(0, pos);
        buf_.erase(0, pos + 1);
        if (!line.empty() && line.back() == '\r') line.pop_back();
        return line;
    }

    /// "OK[ payload]" -> payload; "ERR code text" -> port_error(code).
    static std::string expect_ok(const std::string& reply) {
        if (reply == "OK") return "";
        if (reply.rfind("OK ", 0) == 0) return reply.substr(3);
        if (reply.rfind("ERR ", 0) == 0) {
            std::istringstream ss(reply.substr(4));
            int code = 0;
            ss >> code;
            std::string text;
            std::getline(ss, text);
            if (!text.empty() && text.front() == ' ') text.erase(0, 1);
            throw port_error(code, "remote port: server error: " + text);
        }
        throw port_error(0, "remote port: malformed reply: " + reply);
    }

    int fd_ = -1;
    std::string buf_;
    PortInfo info_{};
};

} // namespace xbarsim
