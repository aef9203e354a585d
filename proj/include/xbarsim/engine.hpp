#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "xbarsim/artifacts.hpp"
#include "xbarsim/config.hpp"
#include "xbarsim/dataio.hpp"
#include "xbarsim/neuron.hpp"
#include "xbarsim/plasticity.hpp"
#include "xbarsim/port.hpp"
#include "xbarsim/programmer.hpp"
#include "xbarsim/rng.hpp"

namespace xbarsim {

/// Binary input vectors plus labels (-1 = unlabeled), the common
/// currency of training and evaluation regardless of source format.
struct SampleSet {
    std::vector<std::vector<std::uint8_t>> inputs;
    std::vector<int> labels;

    std::size_t size() const { return inputs.size(); }
    std::size_t width() const { return inputs.empty() ? 0 : inputs[0].size(); }
};

inline SampleSet samples_from_images(const LabeledImages& set) {
    SampleSet out;
    out.inputs.reserve(set.count);
    out.labels.reserve(set.count);
    for (std::size_t i = 0; i < set.count; ++i) {
        out.inputs.push_back(preprocess(set.image(i)));
        out.labels.push_back(set.labels[i]);
    }
    return out;
}

inline SampleSet samples_from_stimuli(const StimuliSet& s) {
    return {s.spikes, s.labels};
}

/// One single-timestep presentation: zeroed membranes, one integration
/// step, one arbitration. Pure in the weights; no state survives.
inline std::optional<std::size_t> run_inference(const Matrix& G,
                                                const std::vector<std::uint8_t>& input,
                                                const LIFConfig& cfg) {
    LayerState state(G.cols());
    lif_step(state, G, input, cfg);
    return wta_arbitrate(state, cfg.threshold);
}

/// Accuracy over the labeled samples of a set: winner == label counts,
/// no-fire counts as incorrect, unlabeled samples are skipped.
inline double evaluate(const Matrix& G, const SampleSet& samples, const LIFConfig& cfg) {
    if (samples.size() == 0) throw data_error("evaluate: empty sample set");
    std::size_t labeled = 0, correct = 0;
    for (std::size_t k = 0; k < samples.size(); ++k) {
        if (samples.labels[k] < 0) continue;
        ++labeled;
        const auto win = run_inference(G, samples.inputs[k], cfg);
        if (win && *win == static_cast<std::size_t>(samples.labels[k])) ++correct;
    }
    if (labeled == 0) throw data_error("evaluate: no labeled samples");
    return static_cast<double>(correct) / static_cast<double>(labeled);
}

/// Presentation order for a run: indices of a seed-shuffled copy of the
/// training set. Minibatches walk this order in sequential slices,
/// wrapping at the end.
inline std::vector<std::size_t> training_order(std::size_t n, std::uint64_t seed) {
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    RandomStream rng(substream_seed(seed, "shuffle"));
    rng.shuffle(order);
    return order;
}

/// Initial conductance matrix for baseline-float mode: the same
/// row-major jittered draw the array initializer uses, shaped directly
/// as (inputs x outputs). Under the canonical synapse layout this
/// reproduces the memristor run's initial weights draw for draw.
inline Matrix baseline_initial_conductance(const RunConfig& cfg) {
    RandomStream rng(substream_seed(cfg.run.seed, "init"));
    Matrix g = Crossbar::draw_initial(cfg.network.layers[0], cfg.network.layers[1],
                                      cfg.array.R_init_mean, cfg.array.R_init_jitter_rel, rng);
    for (double& v : g.data()) v = 1.0 / v;
    return g;
}

namespace detail {

struct DeviceLut {
    std::vector<std::size_t> row, col; // per synapse i*n_out+j; SIZE_MAX = unmapped
    static constexpr std::size_t none = static_cast<std::size_t>(-1);
};

inline DeviceLut build_lut(const ConnectivityMatrix& cm, std::size_t n_in, std::size_t n_out,
                           const PortInfo& info) {
    DeviceLut lut;
    lut.row.assign(n_in * n_out, DeviceLut::none);
    lut.col.assign(n_in * n_out, DeviceLut::none);
    for (const SynapseMap& m : cm.entries) {
        if (m.pre >= n_in || m.post >= n_out)
            throw data_error("connectivity: synapse (" + std::to_string(m.pre) + "," +
                             std::to_string(m.post) + ") outside the network");
        if (m.row >= info.rows || m.col >= info.cols)
            throw data_error("connectivity: device (" + std::to_string(m.row) + "," +
                             std::to_string(m.col) + ") outside the array");
        lut.row[m.pre * n_out + m.post] = m.row;
        lut.col[m.pre * n_out + m.post] = m.col;
    }
    return lut;
}

inline std::vector<std::uint8_t> one_hot(std::size_t n, std::optional<std::size_t> idx) {
    std::vector<std::uint8_t> v(n, 0);
    if (idx) v[*idx] = 1;
    return v;
}

} // namespace detail

/// Runs the full workflow: initialize weights, shuffled-minibatch
/// training with per-sample delta-rule updates, per-epoch accuracy
/// bookkeeping, final snapshots. Memristor mode drives every weight
/// change through the port via predict-write-verify programming;
/// baseline-float mode applies the conductance deltas exactly and never
/// touches a device. NotConverged programming results are counted in
/// the log, not fatal.
inline RunLog run_training(const RunConfig& cfg, const SampleSet& train,
                           const SampleSet& test, const ConnectivityMatrix& connectivity,
                           DeviceArrayPort* port,
                           const std::vector<std::pair<std::size_t, std::size_t>>& watch = {}) {
    if (cfg.neuron.kind != NeuronKind::lif)
        throw config_error("engine: the training workflow uses the lif neuron core");
    if (cfg.rule.kind != RuleKind::delta)
        throw config_error("engine: the training workflow uses the delta rule");
    const std::size_t n_in = cfg.network.layers[0], n_out = cfg.network.layers[1];
    const bool hardware = cfg.run.mode == RunMode::memristor;
    if (hardware && !port) throw config_error("engine: memristor mode requires a port");
    if (train.size() == 0 && cfg.run.epochs > 0)
        throw data_error("engine: training set is empty");
    for (std::size_t k = 0; k < train.size(); ++k) {
        if (train.inputs[k].size() != n_in)
            throw data_error("engine: training sample width != network inputs");
        if (train.labels[k] < 0 || static_cast<std::size_t>(train.labels[k]) >= n_out)
            throw data_error("engine: training sample " + std::to_string(k) +
                             " has no usable label");
    }
    for (const auto& input : test.inputs)
        if (input.size() != n_in)
            throw data_error("engine: test sample width != network inputs");

    RunLog log;
    log.seed = cfg.run.seed;
    log.config_digest = cfg.digest;
    log.mode = cfg.run.mode;
    log.scheme = cfg.array.scheme;
    for (const auto& [pre, post] : watch) {
        if (pre >= n_in || post >= n_out)
            throw data_error("engine: watch synapse (" + std::to_string(pre) + "," +
                             std::to_string(post) + ") outside the network");
        log.watch.push_back({pre, post, {}});
    }

    const ResistanceWindow window = window_from_options(cfg.device, cfg.pulses);
    const double g_min = 1.0 / window.hi, g_max = 1.0 / window.lo;

    // --- weight storage ------------------------------------------------
    detail::DeviceLut lut;
    Matrix G(n_in, n_out); // engine's view of the weights, in siemens
    PortInfo info;
    const auto synapse_device = [&](std::size_t i, std::size_t j) {
        const std::size_t r = lut.row[i * n_out + j];
        if (r == detail::DeviceLut::none)
            throw data_error("engine: synapse (" + std::to_string(i) + "," +
                             std::to_string(j) + ") has no device assignment");
        return std::pair<std::size_t, std::size_t>{r, lut.col[i * n_out + j]};
    };
    // Re-reads every mapped device; the engine's view only ever comes
    // through the port, so remote and virtual runs see identical state.
    const auto refresh_mirror = [&] {
        std::vector<std::size_t> idx(connectivity.entries.size());
        std::iota(idx.begin(), idx.end(), std::size_t{0});
        std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
            const SynapseMap &ma = connectivity.entries[a], &mb = connectivity.entries[b];
            return ma.row != mb.row ? ma.row < mb.row : ma.col < mb.col;
        });
        for (std::size_t k : idx) {
            const SynapseMap& m = connectivity.entries[k];
            G(m.pre, m.post) = 1.0 / port->read_resistance(m.row, m.col);
        }
    };
    const auto full_snapshot = [&] {
        Matrix snap(info.rows, info.cols);
        for (std::size_t r = 0; r < info.rows; ++r)
            for (std::size_t c = 0; c < info.cols; ++c)
                snap(r, c) = port->read_resistance(r, c);
        return snap;
    };

    if (hardware) {
        info = port->info();
        lut = detail::build_lut(connectivity, n_in, n_out, info);
        for (const auto& [pre, post] : watch) synapse_device(pre, post); // must be mapped
        log.snapshot_pre = full_snapshot();
        for (const SynapseMap& m : connectivity.entries)
            G(m.pre, m.post) = 1.0 / log.snapshot_pre(m.row, m.col);
    } else {
        G = baseline_initial_conductance(cfg);
        log.snapshot_pre = Matrix(n_in, n_out);
        for (std::size_t i = 0; i < n_in * n_out; ++i)
            log.snapshot_pre.data()[i] = 1.0 / G.data()[i];
    }

    // --- training ------------------------------------------------------
    const std::vector<std::size_t> order = training_order(train.size(), cfg.run.seed);
    const std::vector<std::uint8_t> nobody(n_out, 0);

    for (std::size_t epoch = 0; epoch < cfg.run.epochs; ++epoch) {
        std::size_t correct = 0;
        for (std::size_t k = 0; k < cfg.run.minibatch; ++k) {
            const std::size_t idx =
                order[(epoch * cfg.run.minibatch + k) % train.size()];
            const std::vector<std::uint8_t>& x = train.inputs[idx];
            const auto label = static_cast<std::size_t>(train.labels[idx]);

            const auto win = run_inference(G, x, cfg.neuron.lif);
            log.fire_history.push_back(win ? static_cast<int>(*win) : -1);
            if (win && *win == label) {
                ++correct;
                continue; // fired == target, delta is empty
            }

            WeightDelta delta = delta_rule(x, detail::one_hot(n_out, win),
                                           detail::one_hot(n_out, label), cfg.rule.delta);
            if (!hardware) {
                for (const WeightDelta::Entry& e : delta.entries) {
                    double g = G(e.pre, e.post) + e.dG;
                    if (g < g_min) g = g_min;
                    if (g > g_max) g = g_max;
                    G(e.pre, e.post) = g;
                }
                continue;
            }
            // device writes in ascending (row, col): selectorless disturb
            // depends on write order, so the order is pinned
            std::sort(delta.entries.begin(), delta.entries.end(),
                      [&](const WeightDelta::Entry& a, const WeightDelta::Entry& b) {
                          const auto da = synapse_device(a.pre, a.post);
                          const auto db = synapse_device(b.pre, b.post);
                          return da < db;
                      });
            for (const WeightDelta::Entry& e : delta.entries) {
                const auto [row, col] = synapse_device(e.pre, e.post);
                const TargetResistance target =
                    target_resistance(1.0 / G(e.pre, e.post), e.dG, window);
                const ProgramResult res = program(*port, row, col, target.R, cfg.pulses,
                                                  cfg.policy, cfg.device);
                if (!res.converged) ++log.unconverged_programs;
                G(e.pre, e.post) = 1.0 / res.final_R;
            }
        }
        // Epoch boundary: fold in anything the engine didn't see happen
        // (half-select disturb, verify noise), then measure.
        if (hardware) refresh_mirror();
        AccuracyRow row{};
        row.epoch = epoch + 1;
        row.train_acc = static_cast<double>(correct) / static_cast<double>(cfg.run.minibatch);
        row.test_acc = evaluate(G, test, cfg.neuron.lif);
        log.accuracy.push_back(row);
        for (WatchTrace& w : log.watch) w.conductance.push_back(G(w.pre, w.post));
    }

    log.snapshot_post = hardware ? full_snapshot() : [&] {
        Matrix snap(n_in, n_out);
        for (std::size_t i = 0; i < n_in * n_out; ++i) snap.data()[i] = 1.0 / G.data()[i];
        return snap;
    }();
    log.final_train_acc = log.accuracy.empty() ? 0.0 : log.accuracy.back().train_acc;
    log.final_test_acc =
        log.accuracy.empty() ? evaluate(G, test, cfg.neuron.lif) : log.accuracy.back().test_acc;
    return log;
}

} // namespace xbarsim
