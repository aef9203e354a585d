#pragma once

// Independent reference implementations used only by tests. These
// deliberately do not share code with the library: the closed form
// solves the pulse ODE analytically within a branch, and the fine-step
// Euler re-implements integration from scratch.

#include <cmath>

namespace oracle {

struct Params {
    double A_p = 0.21389, A_n = -0.81302;
    double t_p = 1.6591, t_n = 1.5148;
    double a_0p = 37087.0, a_1p = -20193.0;
    double a_0n = 43430.0, a_1n = 34333.0;
};

inline double r_p(const Params& p, double v) { return p.a_0p + p.a_1p * v; }
inline double r_n(const Params& p, double v) { return p.a_0n + p.a_1n * v; }

// Within an active branch, with u the distance to the boundary,
// du/dt = -|k| u^2 has the exact solution u(t) = u0 / (1 + |k| u0 t):
// the boundary is approached like 1/t and never crossed.
inline double closed_pulse(const Params& p, double R, double v, double w) {
    if (v > 0.0) {
        const double b = r_p(p, v);
        if (R >= b) return R;
        const double k = p.A_p * (std::exp(v / p.t_p) - 1.0);
        const double u0 = b - R;
        return b - u0 / (1.0 + k * u0 * w);
    }
    if (v < 0.0) {
        const double b = r_n(p, v);
        if (R < b) return R;
        const double k = -p.A_n * (std::exp(-v / p.t_n) - 1.0);
        const double u0 = R - b;
        return b + u0 / (1.0 + k * u0 * w);
    }
    return R;
}

// Plain forward Euler at a caller-chosen step, rate re-derived from the
// model definition each substep. The boundary clamp applies only while
// the branch is active (an inactive start point must stay put).
inline double euler_pulse(const Params& p, double R, double v, double w, double dt) {
    const bool active = (v > 0.0 && R < r_p(p, v)) || (v < 0.0 && R >= r_n(p, v));
    if (v == 0.0 || !active) return R;
    const auto rate = [&](double r) -> double {
        if (v > 0.0) {
            const double b = r_p(p, v);
            if (r < b) return p.A_p * (std::exp(v / p.t_p) - 1.0) * (b - r) * (b - r);
            return 0.0;
        }
        const double b = r_n(p, v);
        if (r >= b) return p.A_n * (std::exp(-v / p.t_n) - 1.0) * (r - b) * (r - b);
        return 0.0;
    };
    const auto n = static_cast<long long>(std::floor(w / dt));
    const double rem = w - static_cast<double>(n) * dt;
    for (long long i = 0; i < n; ++i) {
        R += dt * rate(R);
        if (v > 0.0 && R > r_p(p, v)) R = r_p(p, v);
        if (v < 0.0 && R < r_n(p, v)) R = r_n(p, v);
    }
    if (rem > 0.0) {
        R += rem * rate(R);
        if (v > 0.0 && R > r_p(p, v)) R = r_p(p, v);
        if (v < 0.0 && R < r_n(p, v)) R = r_n(p, v);
    }
    return R;
}

} // namespace oracle
