#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <vector>

#include "xbarsim/device.hpp"
#include "xbarsim/port.hpp"

namespace xbarsim {

/// Candidate pulses the programmer may choose from, in user priority
/// order (earlier entries win prediction ties).
using PulseOptionSet = std::vector<Pulse>;

struct ProgramPolicy {
    double r_tolerance = 0.001;  // relative, on (R_expected - R_real)/R_expected
    std::size_t max_steps = 5;

    void validate() const {
        if (!(r_tolerance > 0.0))
            throw std::invalid_argument("ProgramPolicy: r_tolerance must be > 0");
        if (max_steps < 1)
            throw std::invalid_argument("ProgramPolicy: max_steps must be >= 1");
    }
};

struct ProgramResult {
    double final_R = 0.0;
    std::size_t steps_used = 0;
    bool converged = false;
    std::vector<Pulse> pulses_applied;
};

/// Pick the option whose predicted outcome lands closest to R_expected.
/// Strict < keeps the earliest option on ties.
inline Pulse select_pulse(const MemristorState& state, const DeviceParams& params,
                          const PulseOptionSet& options, double R_expected) {
    if (options.empty())
        throw std::invalid_argument("select_pulse: option set is empty");
    std::size_t best = 0;
    double best_err = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < options.size(); ++i) {
        const double predicted = predict_pulse_outcome(state, params, options[i]);
        const double err = std::fabs(predicted - R_expected);
        if (err < best_err) {
            best_err = err;
            best = i;
        }
    }
    return options[best];
}

/// Predict-write-verify loop. Verify-first: a device already within
/// tolerance costs zero pulses. Predictions always start from the last
/// verified read, never from internal state, so the same loop works
/// against hardware ports where the true state is unobservable.
inline ProgramResult program(DeviceArrayPort& port, std::size_t row, std::size_t col,
                             double R_expected, const PulseOptionSet& options,
                             const ProgramPolicy& policy, const DeviceParams& params) {
    policy.validate();
    if (!(R_expected > 0.0) || !std::isfinite(R_expected))
        throw std::invalid_argument("program: R_expected must be finite and > 0");
    if (options.empty())
        throw std::invalid_argument("program: option set is empty");

    ProgramResult result;
    double R_real = port.read_resistance(row, col);
    while (true) {
        if (std::fabs((R_expected - R_real) / R_expected) <= policy.r_tolerance) {
            result.converged = true;
            break;
        }
        if (result.steps_used >= policy.max_steps)
            break;
        const Pulse chosen = select_pulse(MemristorState{R_real}, params, options, R_expected);
        port.apply_pulse(row, col, chosen);
        result.pulses_applied.push_back(chosen);
        ++result.steps_used;
        R_real = port.read_resistance(row, col);
    }
    result.final_R = R_real;
    return result;
}

} // namespace xbarsim
