#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

#include "xbarsim/common.hpp"
#include "xbarsim/device.hpp"
#include "xbarsim/rng.hpp"

namespace xbarsim {

/// Write-addressing scheme of the array. Selector-based gates every
/// device so a write touches only its target; selectorless applies the
/// V/2 scheme, so devices sharing the target's row or column see half
/// the write amplitude (half-select disturb).
enum class BiasScheme { selector_based, selectorless_half_voltage };

/// rows x cols grid of memristor states: the virtual synapse array.
class Crossbar {
public:
    Crossbar(std::size_t rows, std::size_t cols, DeviceParams params, BiasScheme scheme,
             const Matrix& initial_R)
        : rows_(rows), cols_(cols), params_(params), scheme_(scheme) {
        if (rows == 0 || cols == 0)
            throw std::invalid_argument("crossbar: dimensions must be >= 1");
        if (initial_R.rows() != rows || initial_R.cols() != cols)
            throw std::invalid_argument("crossbar: initial matrix shape mismatch");
        params_.validate();
        devices_.resize(rows * cols);
        for (std::size_t i = 0; i < rows * cols; ++i)
            devices_[i].R = initial_R.data()[i];
    }

    /// Draws every device's initial R uniformly from
    /// mean*(1 - jitter) .. mean*(1 + jitter), row-major draw order, so
    /// the matrix is reproducible per seed.
    static Matrix draw_initial(std::size_t rows, std::size_t cols, double R_init_mean,
                               double R_init_jitter_rel, RandomStream& rng) {
        if (rows == 0 || cols == 0)
            throw std::invalid_argument("crossbar: dimensions must be >= 1");
        if (!(R_init_jitter_rel >= 0.0))
            throw std::invalid_argument("crossbar: jitter must be >= 0");
        Matrix m(rows, cols);
        for (std::size_t r = 0; r < rows; ++r)
            for (std::size_t c = 0; c < cols; ++c)
                m(r, c) = R_init_mean * (1.0 + R_init_jitter_rel * (2.0 * rng.uniform() - 1.0));
        return m;
    }

    static Crossbar initialize(std::size_t rows, std::size_t cols, DeviceParams params,
                               BiasScheme scheme, double R_init_mean, double R_init_jitter_rel,
                               RandomStream& rng) {
        if (!(R_init_mean >= params.R_floor))
            throw std::invalid_argument("crossbar: R_init_mean below R_floor");
        return Crossbar(rows, cols, params, scheme,
                        draw_initial(rows, cols, R_init_mean, R_init_jitter_rel, rng));
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    const DeviceParams& params() const { return params_; }
    BiasScheme scheme() const { return scheme_; }

    const MemristorState& device(std::size_t r, std::size_t c) const {
        check_bounds(r, c);
        return devices_[r * cols_ + c];
    }

    /// Writes one pulse to (row, col). Selectorless: every device
    /// sharing the row or the column additionally receives
    /// amplitude/2 at the same width, visited in row-major order
    /// (order is observable only through state, not rng: writes
    /// consume no draws).
    void write_selected(std::size_t row, std::size_t col, const Pulse& pulse) {
        check_bounds(row, col);
        at(row, col) = apply_pulse(at_state(row, col), params_, pulse);
        if (scheme_ == BiasScheme::selector_based) return;

        const Pulse half{pulse.amplitude / 2.0, pulse.width};
        for (std::size_t r = 0; r < row; ++r)
            at(r, col) = apply_pulse(at_state(r, col), params_, half);
        for (std::size_t c = 0; c < cols_; ++c)
            if (c != col) at(row, c) = apply_pulse(at_state(row, c), params_, half);
        for (std::size_t r = row + 1; r < rows_; ++r)
            at(r, col) = apply_pulse(at_state(r, col), params_, half);
    }

    /// Conductance matrix 1/read(R). Noise-on consumes one draw per
    /// device in row-major order.
    Matrix read_conductances(const ReadNoise& noise, RandomStream& rng) const {
        Matrix g(rows_, cols_);
        for (std::size_t r = 0; r < rows_; ++r)
            for (std::size_t c = 0; c < cols_; ++c)
                g(r, c) = 1.0 / read(devices_[r * cols_ + c], noise, rng, params_.R_floor);
        return g;
    }

    /// Ideal analog read: output(j) = sum_i input(i) * G(i,j). Read
    /// voltages are non-switching, so device state is untouched.
    std::vector<double> dot_product(const std::vector<double>& input_voltages) const {
        if (input_voltages.size() != rows_)
            throw std::invalid_argument("dot_product: input length != rows");
        std::vector<double> out(cols_, 0.0);
        for (std::size_t r = 0; r < rows_; ++r) {
            const double x = input_voltages[r];
            if (x == 0.0) continue;
            for (std::size_t c = 0; c < cols_; ++c)
                out[c] += x / devices_[r * cols_ + c].R;
        }
        return out;
    }

    Matrix snapshot() const {
        Matrix m(rows_, cols_);
        for (std::size_t r = 0; r < rows_; ++r)
            for (std::size_t c = 0; c < cols_; ++c)
                m(r, c) = devices_[r * cols_ + c].R;
        return m;
    }

private:
    void check_bounds(std::size_t r, std::size_t c) const {
        if (r >= rows_ || c >= cols_)
            throw std::out_of_range("crossbar: device index out of range");
    }
    MemristorState& at(std::size_t r, std::size_t c) { return devices_[r * cols_ + c]; }
    const MemristorState& at_state(std::size_t r, std::size_t c) const {
        return devices_[r * cols_ + c];
    }

    std::size_t rows_, cols_;
    DeviceParams params_;
    BiasScheme scheme_;
    std::vector<MemristorState> devices_;
};

} // namespace xbarsim
