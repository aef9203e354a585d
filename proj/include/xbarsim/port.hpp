#pragma once

#include <cstddef>

#include "xbarsim/common.hpp"
#include "xbarsim/crossbar.hpp"
#include "xbarsim/device.hpp"
#include "xbarsim/rng.hpp"

namespace xbarsim {

/// Capability descriptor a port advertises at connect time.
struct PortInfo {
    std::size_t rows = 0, cols = 0;
    double width_min = 1e-9, width_max = 1.0; // s, supported pulse widths
};

/// Seam between the learning engine and a device array. The engine and
/// programmer only ever talk through this interface, so they run
/// unchanged against the in-process virtual array, the mock instrument
/// server, or (eventually) real characterization hardware.
class DeviceArrayPort {
public:
    virtual ~DeviceArrayPort() = default;
    virtual PortInfo info() const = 0;
    virtual double read_resistance(std::size_t row, std::size_t col) = 0;
    virtual void apply_pulse(std::size_t row, std::size_t col, const Pulse& pulse) = 0;
    virtual void ground_all() = 0;
};

/// Port over the in-process crossbar. Reads go through the device-model
/// read (noise-aware); pulses go through write_selected, so selectorless
/// disturb flows through the port like any other write effect.
class VirtualPort final : public DeviceArrayPort {
public:
    VirtualPort(Crossbar& cb, ReadNoise noise, RandomStream& rng)
        : cb_(cb), noise_(noise), rng_(rng) {}

    PortInfo info() const override { return {cb_.rows(), cb_.cols(), 1e-9, 1.0}; }

    double read_resistance(std::size_t row, std::size_t col) override {
        if (row >= cb_.rows() || col >= cb_.cols())
            throw port_error(2, "read out of bounds");
        return read(cb_.device(row, col), noise_, rng_, cb_.params().R_floor);
    }

    void apply_pulse(std::size_t row, std::size_t col, const Pulse& pulse) override {
        if (row >= cb_.rows() || col >= cb_.cols())
            throw port_error(2, "pulse out of bounds");
        cb_.write_selected(row, col, pulse);
    }

    void ground_all() override {} // no persistent line bias to release

private:
    Crossbar& cb_;
    ReadNoise noise_;
    RandomStream& rng_;
};

} // namespace xbarsim
