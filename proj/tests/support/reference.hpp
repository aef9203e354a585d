#pragma once

// Plain dense-matrix reimplementation of the delta-rule WTA trainer.
// Deliberately written from the update equations with bare loops (no
// neuron/plasticity/engine headers) so the engine's baseline mode can be
// checked against independently derived arithmetic. Accumulation order
// per output (ascending input index) matches the engine's, which is what
// makes bit-level comparison meaningful.

#include <cstddef>
#include <cstdint>
#include <vector>

#include "xbarsim/common.hpp"

namespace xbarsim::testsupport {

inline Matrix reference_train(Matrix G, const std::vector<std::vector<std::uint8_t>>& inputs,
                              const std::vector<int>& labels,
                              const std::vector<std::size_t>& order, std::size_t epochs,
                              std::size_t minibatch, double threshold, double lr,
                              double g_min, double g_max) {
    const std::size_t n_out = G.cols();
    const auto clamp = [&](double g) {
        if (g < g_min) g = g_min;
        if (g > g_max) g = g_max;
        return g;
    };
    for (std::size_t e = 0; e < epochs; ++e) {
        for (std::size_t k = 0; k < minibatch; ++k) {
            const std::size_t idx = order[(e * minibatch + k) % inputs.size()];
            const std::vector<std::uint8_t>& x = inputs[idx];
            std::vector<double> m(n_out, 0.0);
            for (std::size_t j = 0; j < n_out; ++j)
                for (std::size_t i = 0; i < x.size(); ++i)
                    if (x[i]) m[j] += G(i, j);
            int win = -1;
            double best = threshold;
            for (std::size_t j = 0; j < n_out; ++j)
                if (m[j] > best) { // strict: ties keep the earlier index
                    best = m[j];
                    win = static_cast<int>(j);
                }
            const int label = labels[idx];
            if (win == label) continue;
            for (std::size_t i = 0; i < x.size(); ++i) {
                if (!x[i]) continue;
                G(i, static_cast<std::size_t>(label)) =
                    clamp(G(i, static_cast<std::size_t>(label)) + lr);
                if (win >= 0)
                    G(i, static_cast<std::size_t>(win)) =
                        clamp(G(i, static_cast<std::size_t>(win)) + lr * -1.0);
            }
        }
    }
    return G;
}

} // namespace xbarsim::testsupport
