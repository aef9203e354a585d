#pragma once

#include <cstddef>
#include <cstdint>
#include <cstdio>
#include <stdexcept>
#include <string>
#include <vector>

namespace xbarsim {

/// Configuration file is syntactically or semantically invalid.
struct config_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Input data (connectivity, stimuli, IDX, artifacts) is malformed.
struct data_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Filesystem failure (missing file, unwritable directory).
struct io_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Port-level failure: connection loss, timeout, or an ERR reply.
struct port_error : std::runtime_error {
    int code;
    explicit port_error(int c, const std::string& what)
        : std::runtime_error(what), code(c) {}
};

/// Dense row-major matrix of doubles; the only matrix shape this
/// library needs (conductance views, resistance snapshots).
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }
    const std::vector<double>& data() const { return data_; }
    std::vector<double>& data() { return data_; }

    bool operator==(const Matrix& o) const {
        return rows_ == o.rows_ && cols_ == o.cols_ && data_ == o.data_;
    }

private:
    std::size_t rows_ = 0, cols_ = 0;
    std::vector<double> data_;
};

/// Round-trip-exact decimal rendering for doubles; used by every CSV
/// and wire-protocol writer so artifacts are byte-stable.
inline std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

/// FNV-1a 64-bit over raw bytes, rendered as fixed-width hex; used as
/// the config digest recorded in run logs.
inline std::string fnv1a_hex(const std::string& bytes) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char b : bytes) {
        h ^= b;
        h *= 1099511628211ull;
    }
    char buf[20];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

} // namespace xbarsim
