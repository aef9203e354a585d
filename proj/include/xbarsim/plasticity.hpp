#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "xbarsim/device.hpp"

namespace xbarsim {

struct DeltaRuleConfig {
    double learning_rate = 3.5e-6; // S per unit error

    void validate() const {
        if (!(learning_rate > 0.0))
            throw std::invalid_argument("rule.learning_rate: must be > 0");
    }
};

struct STDPConfig {
    double A_plus = 1e-6, A_minus = 1e-6; // S
    double tau_plus = 10.0, tau_minus = 10.0; // steps

    void validate() const {
        if (!(A_plus > 0.0 && A_minus > 0.0 && tau_plus > 0.0 && tau_minus > 0.0))
            throw std::invalid_argument("rule.stdp: all parameters must be > 0");
    }
};

/// Sparse desired conductance change; zero entries are never stored.
struct WeightDelta {
    struct Entry {
        std::size_t pre, post;
        double dG; // S
    };
    std::vector<Entry> entries;
};

/// Single-layer gradient-descent (delta) rule on conductance weights:
/// dG(i,j) = lr * (target(j) - fired(j)) * spikes(i). With one-hot
/// target/fired this touches at most two columns: potentiate the
/// missed target, depress the wrong winner.
inline WeightDelta delta_rule(const std::vector<std::uint8_t>& spikes,
                              const std::vector<std::uint8_t>& fired,
                              const std::vector<std::uint8_t>& target,
                              const DeltaRuleConfig& cfg) {
    if (fired.size() != target.size())
        throw std::invalid_argument("delta_rule: fired/target dimension mismatch");
    WeightDelta out;
    for (std::size_t i = 0; i < spikes.size(); ++i) {
        if (!spikes[i]) continue;
        for (std::size_t j = 0; j < target.size(); ++j) {
            const int err = static_cast<int>(target[j]) - static_cast<int>(fired[j]);
            if (err != 0) out.entries.push_back({i, j, cfg.learning_rate * err});
        }
    }
    return out;
}

/// Pair-based STDP with the standard double-exponential window over the
/// last spike times (-1 = never fired):
/// dG = +A_plus * e^{-dt/tau_plus} for dt >= 0, else -A_minus * e^{dt/tau_minus}.
inline WeightDelta stdp_update(const std::vector<int>& pre_times,
                               const std::vector<int>& post_times, const STDPConfig& cfg) {
    WeightDelta out;
    for (std::size_t i = 0; i < pre_times.size(); ++i) {
        if (pre_times[i] < 0) continue;
        for (std::size_t j = 0; j < post_times.size(); ++j) {
            if (post_times[j] < 0) continue;
            const double dt = static_cast<double>(post_times[j] - pre_times[i]);
            const double dG = dt >= 0.0 ? cfg.A_plus * std::exp(-dt / cfg.tau_plus)
                                        : -cfg.A_minus * std::exp(dt / cfg.tau_minus);
            out.entries.push_back({i, j, dG});
        }
    }
    return out;
}

/// Reachable resistance window implied by a pulse option set: the most
/// negative amplitude pins the low bound r_n, the most positive pins
/// the high bound r_p. One-sided sets fall back to the zero-bias limits.
struct ResistanceWindow {
    double lo, hi; // ohm
};

inline ResistanceWindow window_from_options(const DeviceParams& p,
                                            const std::vector<Pulse>& options) {
    double vmin = 0.0, vmax = 0.0;
    for (const Pulse& o : options) {
        vmin = std::min(vmin, o.amplitude);
        vmax = std::max(vmax, o.amplitude);
    }
    const double lo = vmin < 0.0 ? operating_range(p, vmin) : p.R_floor;
    const double hi = vmax > 0.0 ? operating_range(p, vmax) : p.a_0p;
    return {lo, hi};
}

/// Conductance-to-resistance mapping for one update:
/// R_expected = 1/(1/R + dG), clamped into the reachable window.
/// A non-positive resulting conductance saturates at the window's
/// maximum-R bound.
struct TargetResistance {
    double R;
    bool saturated;
};

inline TargetResistance target_resistance(double R_current, double dG,
                                          const ResistanceWindow& window) {
    if (!(R_current > 0.0))
        throw std::invalid_argument("target_resistance: R_current must be > 0");
    const double g = 1.0 / R_current + dG;
    if (g <= 0.0) return {window.hi, true};
    double r = 1.0 / g;
    if (r < window.lo) r = window.lo;
    if (r > window.hi) r = window.hi;
    return {r, false};
}

} // namespace xbarsim
