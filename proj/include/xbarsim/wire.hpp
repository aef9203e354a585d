#pragma once

#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <sstream>
#include <string>
#include <vector>

#include "xbarsim/common.hpp"
#include "xbarsim/port.hpp"

namespace xbarsim {
namespace wire {

/// Wire rendering of a double: round-trip exact, and integral values
/// keep a trailing ".0" so a resistance always reads as a decimal
/// ("OK 11000.0", not "OK 11000").
inline std::string format_double(double v) {
    std::string s = fmt_double(v);
    if (s.find_first_of(".eE") == std::string::npos &&
        s.find_first_of("0123456789") != std::string::npos &&
        s.find("inf") == std::string::npos && s.find("nan") == std::string::npos)
        s += ".0";
    return s;
}

inline std::string read_request(std::size_t row, std::size_t col) {
    return "READ " + std::to_string(row) + " " + std::to_string(col);
}

inline std::string pulse_request(std::size_t row, std::size_t col, const Pulse& p) {
    return "PULSE " + std::to_string(row) + " " + std::to_string(col) + " " +
           format_double(p.amplitude) + " " + format_double(p.width);
}

inline bool parse_double(const std::string& tok, double& out) {
    if (tok.empty()) return false;
    errno = 0;
    char* end = nullptr;
    out = std::strtod(tok.c_str(), &end);
    return end == tok.c_str() + tok.size() && errno == 0 && std::isfinite(out);
}

inline bool parse_index(const std::string& tok, long long& out) {
    if (tok.empty()) return false;
    errno = 0;
    char* end = nullptr;
    out = std::strtoll(tok.c_str(), &end, 10);
    return end == tok.c_str() + tok.size() && errno == 0;
}

/// Protocol core, shared by the mock server and any future backend:
/// one request line in, one reply line out (no trailing newline).
/// Every line gets exactly one reply; nothing a client sends can
/// throw out of this function.
inline std::string handle_line(std::string line, DeviceArrayPort& port) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::istringstream ss(line);
    std::vector<std::string> tok;
    for (std::string t; ss >> t;) tok.push_back(t);

    try {
        const PortInfo info = port.info();
        if (tok.empty()) return "ERR 1 malformed";
        if (tok[0] == "READ" && tok.size() == 3) {
            long long r, c;
            if (!parse_index(tok[1], r) || !parse_index(tok[2], c)) return "ERR 1 malformed";
            if (r < 0 || c < 0 || static_cast<std::size_t>(r) >= info.rows ||
                static_cast<std::size_t>(c) >= info.cols)
                return "ERR 2 out-of-bounds";
            return "OK " + format_double(port.read_resistance(static_cast<std::size_t>(r),
                                                              static_cast<std::size_t>(c)));
        }
        if (tok[0] == "PULSE" && tok.size() == 5) {
            long long r, c;
            double amp, width;
            if (!parse_index(tok[1], r) || !parse_index(tok[2], c) ||
                !parse_double(tok[3], amp) || !parse_double(tok[4], width))
                return "ERR 1 malformed";
            if (r < 0 || c < 0 || static_cast<std::size_t>(r) >= info.rows ||
                static_cast<std::size_t>(c) >= info.cols)
                return "ERR 2 out-of-bounds";
            port.apply_pulse(static_cast<std::size_t>(r), static_cast<std::size_t>(c),
                             Pulse{amp, width});
            return "OK";
        }
        if (tok[0] == "GND" && tok.size() == 1) {
            port.ground_all();
            return "OK";
        }
        if (tok[0] == "INFO" && tok.size() == 1) {
            return "OK " + std::to_string(info.rows) + " " + std::to_string(info.cols) + " " +
                   format_double(info.width_min) + " " + format_double(info.width_max);
        }
        return "ERR 1 malformed";
    } catch (const port_error& e) {
        return "ERR " + std::to_string(e.code) + " internal";
    } catch (const std::exception&) {
        return "ERR 3 internal";
    }
}

} // namespace wire
} // namespace xbarsim
