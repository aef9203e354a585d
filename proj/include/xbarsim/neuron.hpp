#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "xbarsim/common.hpp"

namespace xbarsim {

/// Leaky integrate-and-fire settings. With leak_factor 1 and membranes
/// reset after every arbitration, one presentation is one timestep and
/// the layer reduces to a thresholded argmax over sum(spike * G).
struct LIFConfig {
    double threshold = 0.01;  // V
    double leak_factor = 1.0; // per-step multiplier in [0, 1]

    void validate() const {
        if (!(threshold > 0.0)) throw std::invalid_argument("neuron.threshold: must be > 0");
        if (!(leak_factor >= 0.0 && leak_factor <= 1.0))
            throw std::invalid_argument("neuron.leak_factor: must be in [0, 1]");
    }
};

/// Output layer state: membrane voltages, last arbitration result as a
/// one-hot fired vector, and an append-only fire history (-1 = silent
/// step).
struct LayerState {
    std::vector<double> membranes;
    std::vector<std::uint8_t> fired;
    std::vector<int> fire_history;

    explicit LayerState(std::size_t n = 0) : membranes(n, 0.0), fired(n, 0) {}
};

/// Accumulates synaptic drive into the membranes:
/// m'(j) = leak * m(j) + sum_i spikes(i) * G(i,j).
/// Thresholding is deliberately separate (wta_arbitrate).
inline void lif_step(LayerState& state, const Matrix& conductances,
                     const std::vector<std::uint8_t>& spikes, const LIFConfig& cfg) {
    const std::size_t nin = conductances.rows();
    const std::size_t nout = conductances.cols();
    if (spikes.size() != nin || state.membranes.size() != nout)
        throw std::invalid_argument("lif_step: dimension mismatch");
    for (std::size_t j = 0; j < nout; ++j) state.membranes[j] *= cfg.leak_factor;
    for (std::size_t i = 0; i < nin; ++i) {
        if (!spikes[i]) continue;
        for (std::size_t j = 0; j < nout; ++j) state.membranes[j] += conductances(i, j);
    }
}

/// Winner-take-all: the highest membrane strictly above threshold fires
/// (ties break to the lowest index), everyone else is inhibited, then
/// all membranes reset to zero. Appends to fire_history.
inline std::optional<std::size_t> wta_arbitrate(LayerState& state, double threshold) {
    std::optional<std::size_t> winner;
    double best = threshold;
    for (std::size_t j = 0; j < state.membranes.size(); ++j) {
        if (state.membranes[j] > best) { // strict: ties keep the earlier index
            best = state.membranes[j];
            winner = j;
        }
    }
    std::fill(state.fired.begin(), state.fired.end(), std::uint8_t{0});
    if (winner) state.fired[*winner] = 1;
    std::fill(state.membranes.begin(), state.membranes.end(), 0.0);
    state.fire_history.push_back(winner ? static_cast<int>(*winner) : -1);
    return winner;
}

/// Izhikevich two-variable neuron, standard form:
///   v' = 0.04 v^2 + 5 v + 140 - u + I,  u' = a (b v - u),
/// spike when v >= 30, then v <- c, u <- u + d. The paper-facing code
/// uses LIF; this core exists for the configurable-neuron seam.
struct IzhikevichConfig {
    double a = 0.02, b = 0.2, c = -65.0, d = 8.0;
    double dt = 1.0;          // ms per step
    double input_gain = 1.0;  // synaptic current -> model input units

    void validate() const {
        if (!(dt > 0.0)) throw std::invalid_argument("neuron.dt: must be > 0");
    }
};

struct IzhikevichLayer {
    std::vector<double> v, u;
    std::vector<std::uint8_t> fired;
    std::vector<int> fire_history;

    explicit IzhikevichLayer(std::size_t n, const IzhikevichConfig& cfg)
        : v(n, -70.0), u(n, cfg.b * -70.0), fired(n, 0) {}
};

/// One forward-Euler dt step per neuron; u is advanced with the already
/// updated v, matching the commonly cited reference implementation.
inline void izhikevich_step(IzhikevichLayer& layer, const std::vector<double>& input_currents,
                            const IzhikevichConfig& cfg) {
    if (input_currents.size() != layer.v.size())
        throw std::invalid_argument("izhikevich_step: dimension mismatch");
    int spiked = -1;
    for (std::size_t j = 0; j < layer.v.size(); ++j) {
        double& vj = layer.v[j];
        double& uj = layer.u[j];
        const double I = cfg.input_gain * input_currents[j];
        vj += cfg.dt * (0.04 * vj * vj + 5.0 * vj + 140.0 - uj + I);
        uj += cfg.dt * cfg.a * (cfg.b * vj - uj);
        layer.fired[j] = 0;
        if (vj >= 30.0) {
            vj = cfg.c;
            uj += cfg.d;
            layer.fired[j] = 1;
            if (spiked < 0) spiked = static_cast<int>(j);
        }
    }
    layer.fire_history.push_back(spiked);
}

} // namespace xbarsim
