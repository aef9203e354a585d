#pragma once

#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <string>
#include <vector>

#include <json.hpp>

#include "xbarsim/common.hpp"
#include "xbarsim/crossbar.hpp"
#include "xbarsim/device.hpp"
#include "xbarsim/neuron.hpp"
#include "xbarsim/plasticity.hpp"
#include "xbarsim/programmer.hpp"

namespace xbarsim {

enum class NeuronKind { lif, izhikevich };
enum class RuleKind { delta, stdp };
enum class RunMode { memristor, baseline_float };

struct NetworkConfig {
    std::vector<std::size_t> layers{484, 10};
};

struct NeuronConfig {
    NeuronKind kind = NeuronKind::lif;
    LIFConfig lif;
    IzhikevichConfig izhikevich;
};

struct RuleConfig {
    RuleKind kind = RuleKind::delta;
    DeltaRuleConfig delta;
    STDPConfig stdp;
};

struct ArrayConfig {
    std::size_t rows = 100, cols = 100;
    BiasScheme scheme = BiasScheme::selector_based;
    double R_init_mean = 11000.0;
    double R_init_jitter_rel = 0.0;
};

struct RunSection {
    std::size_t epochs = 10;
    std::size_t minibatch = 100;
    std::uint64_t seed = 1;
    RunMode mode = RunMode::memristor;
};

inline const char* scheme_name(BiasScheme s) {
    return s == BiasScheme::selector_based ? "selector" : "selectorless";
}
inline const char* mode_name(RunMode m) {
    return m == RunMode::memristor ? "memristor" : "baseline";
}

/// Whole-run parameter tree; every field has a documented default so a
/// config file only states what it changes.
struct RunConfig {
    NetworkConfig network;
    NeuronConfig neuron;
    RuleConfig rule;
    DeviceParams device;
    ArrayConfig array;
    PulseOptionSet pulses = default_pulses();
    ProgramPolicy policy;
    ReadNoise read_noise;
    RunSection run;
    std::string digest; // FNV-1a of the source text

    static PulseOptionSet default_pulses() {
        PulseOptionSet o;
        for (double a : {0.9, 1.0, 1.1, 1.2}) {
            o.push_back({a, 1e-5});
            o.push_back({-a, 1e-5});
        }
        return o;
    }

    void validate() const {
        if (network.layers.size() != 2)
            throw config_error("network.layers: expected exactly [inputs, outputs]");
        for (std::size_t n : network.layers)
            if (n == 0) throw config_error("network.layers: sizes must be positive");
        try {
            device.validate();
            policy.validate();
            if (neuron.kind == NeuronKind::lif)
                neuron.lif.validate();
            else
                neuron.izhikevich.validate();
            if (rule.kind == RuleKind::delta)
                rule.delta.validate();
            else
                rule.stdp.validate();
        } catch (const std::invalid_argument& e) {
            throw config_error(e.what());
        }
        if (array.rows == 0 || array.cols == 0)
            throw config_error("array: rows and cols must be >= 1");
        if (network.layers[0] * network.layers[1] > array.rows * array.cols)
            throw config_error("network.layers: synapse count exceeds array capacity");
        if (!(array.R_init_mean >= device.R_floor))
            throw config_error("array.R_init_mean: must be >= device.R_floor");
        if (!(array.R_init_jitter_rel >= 0.0 && array.R_init_jitter_rel < 1.0))
            throw config_error("array.R_init_jitter_rel: must be in [0, 1)");
        if (pulses.empty()) throw config_error("pulses: at least one option required");
        for (const Pulse& p : pulses) {
            if (!std::isfinite(p.amplitude)) throw config_error("pulses.amplitude: must be finite");
            if (!(p.width > 0.0) || !std::isfinite(p.width))
                throw config_error("pulses.width: must be > 0");
        }
        if (!(read_noise.sigma_rel >= 0.0))
            throw config_error("read_noise.sigma_rel: must be >= 0");
        if (run.minibatch == 0) throw config_error("run.minibatch: must be >= 1");
    }
};

namespace detail {

using njson = nlohmann::json;

[[noreturn]] inline void cfg_fail(const std::string& path, const std::string& reason) {
    throw config_error(path + ": " + reason);
}

inline void check_keys(const njson& obj, const std::string& path,
                       std::initializer_list<const char*> allowed) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        bool known = false;
        for (const char* a : allowed)
            if (it.key() == a) {
                known = true;
                break;
            }
        if (!known)
            throw config_error("config: unknown key '" +
                               (path.empty() ? it.key() : path + "." + it.key()) + "'");
    }
}

inline const njson* cfg_find(const njson& obj, const char* key) {
    const auto it = obj.find(key);
    return it == obj.end() ? nullptr : &*it;
}

inline njson section(const njson& root, const char* key) {
    const njson* v = cfg_find(root, key);
    if (!v) return njson::object();
    if (!v->is_object()) cfg_fail(key, "expected an object");
    return *v;
}

inline double cfg_num(const njson& obj, const std::string& path, const char* key, double dflt) {
    const njson* v = cfg_find(obj, key);
    if (!v) return dflt;
    if (!v->is_number()) cfg_fail(path + "." + key, "expected a number");
    return v->get<double>();
}

inline std::uint64_t cfg_uint(const njson& obj, const std::string& path, const char* key,
                              std::uint64_t dflt) {
    const njson* v = cfg_find(obj, key);
    if (!v) return dflt;
    if (v->is_number_unsigned()) return v->get<std::uint64_t>();
    if (v->is_number_integer() && v->get<long long>() >= 0)
        return static_cast<std::uint64_t>(v->get<long long>());
    cfg_fail(path + "." + key, "expected a non-negative integer");
}

inline std::string cfg_str(const njson& obj, const std::string& path, const char* key,
                           const std::string& dflt) {
    const njson* v = cfg_find(obj, key);
    if (!v) return dflt;
    if (!v->is_string()) cfg_fail(path + "." + key, "expected a string");
    return v->get<std::string>();
}

} // namespace detail

/// Parses and fully validates a JSON run configuration. Unknown keys
/// are rejected (they are always typos), missing keys fall back to the
/// documented defaults, and every error carries either a line/column
/// (syntax) or a key path (schema).
inline RunConfig parse_config(const std::string& text) {
    using detail::njson;
    njson root;
    try {
        root = njson::parse(text);
    } catch (const njson::parse_error& e) {
        std::size_t line = 1, col = 1;
        const std::size_t stop = e.byte > 0 ? e.byte - 1 : 0;
        for (std::size_t i = 0; i < stop && i < text.size(); ++i) {
            if (text[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
        throw config_error("config syntax error at line " + std::to_string(line) +
                           ", column " + std::to_string(col));
    }
    if (!root.is_object()) throw config_error("config: top level must be an object");
    detail::check_keys(root, "", {"network", "neuron", "rule", "device", "array", "pulses",
                                  "policy", "read_noise", "run"});

    RunConfig cfg;
    cfg.digest = fnv1a_hex(text);

    {
        const njson net = detail::section(root, "network");
        detail::check_keys(net, "network", {"layers"});
        if (const njson* layers = detail::cfg_find(net, "layers")) {
            if (!layers->is_array()) detail::cfg_fail("network.layers", "expected an array");
            cfg.network.layers.clear();
            for (const njson& v : *layers) {
                if (!v.is_number_integer() || v.get<long long>() <= 0)
                    detail::cfg_fail("network.layers", "sizes must be positive integers");
                cfg.network.layers.push_back(static_cast<std::size_t>(v.get<long long>()));
            }
        }
    }
    {
        const njson neu = detail::section(root, "neuron");
        const std::string kind = detail::cfg_str(neu, "neuron", "type", "lif");
        if (kind == "lif") {
            detail::check_keys(neu, "neuron", {"type", "threshold", "leak_factor"});
            cfg.neuron.kind = NeuronKind::lif;
            cfg.neuron.lif.threshold = detail::cfg_num(neu, "neuron", "threshold", 0.01);
            cfg.neuron.lif.leak_factor = detail::cfg_num(neu, "neuron", "leak_factor", 1.0);
        } else if (kind == "izhikevich") {
            detail::check_keys(neu, "neuron",
                               {"type", "a", "b", "c", "d", "dt", "input_gain"});
            cfg.neuron.kind = NeuronKind::izhikevich;
            IzhikevichConfig& z = cfg.neuron.izhikevich;
            z.a = detail::cfg_num(neu, "neuron", "a", z.a);
            z.b = detail::cfg_num(neu, "neuron", "b", z.b);
            z.c = detail::cfg_num(neu, "neuron", "c", z.c);
            z.d = detail::cfg_num(neu, "neuron", "d", z.d);
            z.dt = detail::cfg_num(neu, "neuron", "dt", z.dt);
            z.input_gain = detail::cfg_num(neu, "neuron", "input_gain", z.input_gain);
        } else {
            detail::cfg_fail("neuron.type", "expected 'lif' or 'izhikevich'");
        }
    }
    {
        const njson rule = detail::section(root, "rule");
        const std::string kind = detail::cfg_str(rule, "rule", "type", "delta");
        if (kind == "delta") {
            detail::check_keys(rule, "rule", {"type", "learning_rate"});
            cfg.rule.kind = RuleKind::delta;
            cfg.rule.delta.learning_rate =
                detail::cfg_num(rule, "rule", "learning_rate", 3.5e-6);
        } else if (kind == "stdp") {
            detail::check_keys(rule, "rule",
                               {"type", "A_plus", "A_minus", "tau_plus", "tau_minus"});
            cfg.rule.kind = RuleKind::stdp;
            STDPConfig& s = cfg.rule.stdp;
            s.A_plus = detail::cfg_num(rule, "rule", "A_plus", s.A_plus);
            s.A_minus = detail::cfg_num(rule, "rule", "A_minus", s.A_minus);
            s.tau_plus = detail::cfg_num(rule, "rule", "tau_plus", s.tau_plus);
            s.tau_minus = detail::cfg_num(rule, "rule", "tau_minus", s.tau_minus);
        } else {
            detail::cfg_fail("rule.type", "expected 'delta' or 'stdp'");
        }
    }
    {
        const njson dev = detail::section(root, "device");
        detail::check_keys(dev, "device",
                           {"A_p", "A_n", "t_p", "t_n", "a_0p", "a_1p", "a_0n", "a_1n",
                            "integration_step", "R_floor"});
        DeviceParams& d = cfg.device;
        d.A_p = detail::cfg_num(dev, "device", "A_p", d.A_p);
        d.A_n = detail::cfg_num(dev, "device", "A_n", d.A_n);
        d.t_p = detail::cfg_num(dev, "device", "t_p", d.t_p);
        d.t_n = detail::cfg_num(dev, "device", "t_n", d.t_n);
        d.a_0p = detail::cfg_num(dev, "device", "a_0p", d.a_0p);
        d.a_1p = detail::cfg_num(dev, "device", "a_1p", d.a_1p);
        d.a_0n = detail::cfg_num(dev, "device", "a_0n", d.a_0n);
        d.a_1n = detail::cfg_num(dev, "device", "a_1n", d.a_1n);
        d.integration_step = detail::cfg_num(dev, "device", "integration_step",
                                             d.integration_step);
        d.R_floor = detail::cfg_num(dev, "device", "R_floor", d.R_floor);
    }
    {
        const njson arr = detail::section(root, "array");
        detail::check_keys(arr, "array",
                           {"rows", "cols", "scheme", "R_init_mean", "R_init_jitter_rel"});
        cfg.array.rows =
            static_cast<std::size_t>(detail::cfg_uint(arr, "array", "rows", cfg.array.rows));
        cfg.array.cols =
            static_cast<std::size_t>(detail::cfg_uint(arr, "array", "cols", cfg.array.cols));
        const std::string scheme = detail::cfg_str(arr, "array", "scheme", "selector");
        if (scheme == "selector")
            cfg.array.scheme = BiasScheme::selector_based;
        else if (scheme == "selectorless")
            cfg.array.scheme = BiasScheme::selectorless_half_voltage;
        else
            detail::cfg_fail("array.scheme", "expected 'selector' or 'selectorless'");
        cfg.array.R_init_mean =
            detail::cfg_num(arr, "array", "R_init_mean", cfg.array.R_init_mean);
        cfg.array.R_init_jitter_rel =
            detail::cfg_num(arr, "array", "R_init_jitter_rel", cfg.array.R_init_jitter_rel);
    }
    if (const njson* pulses = detail::cfg_find(root, "pulses")) {
        if (!pulses->is_array()) detail::cfg_fail("pulses", "expected an array");
        cfg.pulses.clear();
        for (const njson& entry : *pulses) {
            if (!entry.is_object()) detail::cfg_fail("pulses", "expected objects");
            detail::check_keys(entry, "pulses", {"amplitude", "width"});
            if (!detail::cfg_find(entry, "amplitude"))
                detail::cfg_fail("pulses.amplitude", "required");
            cfg.pulses.push_back({detail::cfg_num(entry, "pulses", "amplitude", 0.0),
                                  detail::cfg_num(entry, "pulses", "width", 1e-5)});
        }
    }
    {
        const njson pol = detail::section(root, "policy");
        detail::check_keys(pol, "policy", {"r_tolerance", "max_steps"});
        cfg.policy.r_tolerance =
            detail::cfg_num(pol, "policy", "r_tolerance", cfg.policy.r_tolerance);
        cfg.policy.max_steps = static_cast<std::size_t>(
            detail::cfg_uint(pol, "policy", "max_steps", cfg.policy.max_steps));
    }
    {
        const njson noise = detail::section(root, "read_noise");
        detail::check_keys(noise, "read_noise", {"kind", "sigma_rel"});
        const std::string kind = detail::cfg_str(noise, "read_noise", "kind", "none");
        if (kind == "none")
            cfg.read_noise.kind = NoiseKind::none;
        else if (kind == "gaussian_relative")
            cfg.read_noise.kind = NoiseKind::gaussian_relative;
        else
            detail::cfg_fail("read_noise.kind", "expected 'none' or 'gaussian_relative'");
        cfg.read_noise.sigma_rel =
            detail::cfg_num(noise, "read_noise", "sigma_rel", cfg.read_noise.sigma_rel);
    }
    {
        const njson run = detail::section(root, "run");
        detail::check_keys(run, "run", {"epochs", "minibatch", "seed", "mode"});
        cfg.run.epochs =
            static_cast<std::size_t>(detail::cfg_uint(run, "run", "epochs", cfg.run.epochs));
        cfg.run.minibatch = static_cast<std::size_t>(
            detail::cfg_uint(run, "run", "minibatch", cfg.run.minibatch));
        cfg.run.seed = detail::cfg_uint(run, "run", "seed", cfg.run.seed);
        const std::string mode = detail::cfg_str(run, "run", "mode", "memristor");
        if (mode == "memristor")
            cfg.run.mode = RunMode::memristor;
        else if (mode == "baseline")
            cfg.run.mode = RunMode::baseline_float;
        else
            detail::cfg_fail("run.mode", "expected 'memristor' or 'baseline'");
    }

    cfg.validate();
    return cfg;
}

} // namespace xbarsim
