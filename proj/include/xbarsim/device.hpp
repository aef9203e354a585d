#pragma once

#include <cmath>
#include <stdexcept>

#include "xbarsim/common.hpp"
#include "xbarsim/rng.hpp"

namespace xbarsim {

/// Fitting constants of the empirical switching model plus integrator
/// settings. Immutable for the duration of a run.
///
/// The model: under bias v the resistance moves toward a voltage-
/// dependent boundary r_p(v) = a_0p + a_1p*v (positive bias) or
/// r_n(v) = a_0n + a_1n*v (non-positive bias) with rate
///
///   dR/dt = A_p*(e^{|v|/t_p} - 1)*(r_p(v) - R)^2   v > 0, R < r_p(v)
///   dR/dt = A_n*(e^{|v|/t_n} - 1)*(R - r_n(v))^2   v <= 0, R >= r_n(v)
///   dR/dt = 0                                      otherwise
///
/// A_p > 0 and A_n < 0, so positive bias raises R and negative bias
/// lowers it, decelerating quadratically as the boundary approaches.
struct DeviceParams {
    double A_p = 0.21389;    // 1/(ohm*s)
    double A_n = -0.81302;   // 1/(ohm*s), negative by convention
    double t_p = 1.6591;     // V
    double t_n = 1.5148;     // V
    double a_0p = 37087.0;   // ohm
    double a_1p = -20193.0;  // ohm/V
    double a_0n = 43430.0;   // ohm
    double a_1n = 34333.0;   // ohm/V
    double integration_step = 1e-7; // s, explicit Euler step
    double R_floor = 1.0;    // ohm, lower clamp guarding 1/R mappings

    void validate() const {
        if (!(A_p > 0.0)) throw std::invalid_argument("device.A_p: must be > 0");
        if (!(A_n < 0.0)) throw std::invalid_argument("device.A_n: must be < 0");
        if (!(t_p > 0.0)) throw std::invalid_argument("device.t_p: must be > 0");
        if (!(t_n > 0.0)) throw std::invalid_argument("device.t_n: must be > 0");
        if (!(integration_step > 0.0))
            throw std::invalid_argument("device.integration_step: must be > 0");
        if (!(R_floor > 0.0)) throw std::invalid_argument("device.R_floor: must be > 0");
    }
};

/// One device's resistive state, the sole mutable device quantity.
struct MemristorState {
    double R = 11000.0; // ohm
};

/// A write pulse: signed amplitude selects the branch, width is the
/// integration horizon.
struct Pulse {
    double amplitude = 0.0; // V
    double width = 1e-5;    // s
};

enum class NoiseKind { none, gaussian_relative };

/// Read-back noise. Defaults to none; gaussian-relative models a
/// verify-path error proportional to R.
struct ReadNoise {
    NoiseKind kind = NoiseKind::none;
    double sigma_rel = 0.0;
};

/// Boundary of the reachable operating range under bias v:
/// r_p(v) for v > 0, r_n(v) for v <= 0.
inline double operating_range(const DeviceParams& p, double v) {
    return v > 0.0 ? p.a_0p + p.a_1p * v : p.a_0n + p.a_1n * v;
}

/// dR/dt at the given state and bias; zero outside both branch
/// conditions (the state cannot leave the reachable window).
inline double switching_rate(const DeviceParams& p, double R, double v) {
    if (v > 0.0) {
        const double bound = p.a_0p + p.a_1p * v;
        if (R < bound) {
            const double d = bound - R;
            return p.A_p * std::expm1(v / p.t_p) * d * d;
        }
    } else {
        const double bound = p.a_0n + p.a_1n * v;
        if (R >= bound) {
            const double d = R - bound;
            return p.A_n * std::expm1(-v / p.t_n) * d * d;
        }
    }
    return 0.0;
}

/// Integrates one pulse with explicit fixed-step Euler at
/// integration_step; the final partial step lands exactly on the pulse
/// width. Any overshoot across the active branch boundary is clamped to
/// the boundary, which also terminates the loop early (rate is zero
/// there). Deterministic: no rng involved.
inline MemristorState apply_pulse(MemristorState s, const DeviceParams& p, const Pulse& pulse) {
    if (!(pulse.width > 0.0)) throw std::invalid_argument("pulse.width: must be > 0");
    if (!std::isfinite(pulse.amplitude)) throw std::invalid_argument("pulse.amplitude: must be finite");

    const double v = pulse.amplitude;
    if (switching_rate(p, s.R, v) == 0.0) return s; // inactive branch: R never moves

    const double dt = p.integration_step;
    const double bound = operating_range(p, v);
    const bool up = v > 0.0;
    const double k = up ? p.A_p * std::expm1(v / p.t_p)
                        : p.A_n * std::expm1(-v / p.t_n);

    const auto n = static_cast<long long>(std::floor(pulse.width / dt));
    const double rem = pulse.width - static_cast<double>(n) * dt;

    double R = s.R;
    for (long long i = 0; i <= n; ++i) {
        const double h = i < n ? dt : rem;
        if (h <= 0.0) break;
        const double d = up ? bound - R : R - bound;
        R += h * k * d * d;
        if (up ? R >= bound : R <= bound) {
            R = bound;
            break;
        }
    }
    if (R < p.R_floor) R = p.R_floor;
    s.R = R;
    return s;
}

/// Pure outcome prediction: exactly the state apply_pulse would
/// produce, same integrator, no mutation, no noise.
inline double predict_pulse_outcome(const MemristorState& s, const DeviceParams& p, const Pulse& pulse) {
    return apply_pulse(s, p, pulse).R;
}

/// Read-back of R. Noise-off is exact and consumes no draws;
/// gaussian-relative consumes exactly one draw per read.
inline double read(const MemristorState& s, const ReadNoise& noise, RandomStream& rng,
                   double R_floor = 1.0) {
    if (noise.kind == NoiseKind::none) return s.R;
    const double out = s.R * (1.0 + noise.sigma_rel * rng.gaussian());
    return out < R_floor ? R_floor : out;
}

} // namespace xbarsim
