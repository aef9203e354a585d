// Command-line front end: train / test / program / characterize / analyze.
//
// Exit codes: 0 success, 1 usage, 2 bad config or data, 3 runtime
// failure (I/O on outputs, port trouble).

#include <CLI11.hpp>

#include <xbarsim/artifacts.hpp>
#include <xbarsim/engine.hpp>
#include <xbarsim/remote.hpp>

#include <cstdint>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace {

using namespace xbarsim;

struct usage_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Input files that cannot be opened are a data problem (exit 2), not a
// runtime one; rewrap io_error from the load phase.
template <typename F>
auto loading(F&& f) {
    try {
        return f();
    } catch (const io_error& e) {
        throw data_error(e.what());
    }
}

struct PortSpec {
    bool remote = false;
    std::string host;
    std::uint16_t port = 0;
};

PortSpec parse_port_spec(const std::string& s) {
    if (s == "virtual") return {};
    const std::string prefix = "remote:";
    if (s.rfind(prefix, 0) == 0) {
        const std::string rest = s.substr(prefix.size());
        const auto colon = rest.rfind(':');
        if (colon != std::string::npos && colon > 0) {
            const std::string host = rest.substr(0, colon);
            const std::string num = rest.substr(colon + 1);
            char* end = nullptr;
            const unsigned long v = std::strtoul(num.c_str(), &end, 10);
            if (end && *end == '\0' && !num.empty() && v >= 1 && v <= 65535)
                return {true, host, static_cast<std::uint16_t>(v)};
        }
    }
    throw usage_error("--port: expected 'virtual' or 'remote:HOST:PORT', got '" + s + "'");
}

std::vector<std::pair<std::size_t, std::size_t>> parse_watch(const std::vector<std::string>& specs) {
    std::vector<std::pair<std::size_t, std::size_t>> out;
    for (const auto& spec : specs) {
        const auto dash = spec.find('-');
        const auto parse_index = [&](const std::string& tok) -> std::size_t {
            char* end = nullptr;
            const unsigned long v = std::strtoul(tok.c_str(), &end, 10);
            if (!end || *end != '\0' || tok.empty())
                throw usage_error("--watch: expected 'PRE-POST' pairs, got '" + spec + "'");
            return static_cast<std::size_t>(v);
        };
        if (dash == std::string::npos)
            throw usage_error("--watch: expected 'PRE-POST' pairs, got '" + spec + "'");
        out.emplace_back(parse_index(spec.substr(0, dash)), parse_index(spec.substr(dash + 1)));
    }
    return out;
}

struct CommonOpts {
    std::string config_path;
    std::string connectivity_path;
    std::string stimuli_path;
    std::string mnist_dir;
    std::string out_dir;
    std::string port_spec = "virtual";
    std::optional<std::uint64_t> seed;
    std::optional<std::string> mode;
    std::optional<std::string> scheme;
    std::vector<std::string> watch;
};

void add_dataset_flags(CLI::App& sub, CommonOpts& o) {
    auto* stim = sub.add_option("--stimuli", o.stimuli_path, "binary stimuli CSV");
    auto* mnist = sub.add_option("--mnist", o.mnist_dir,
                                 "directory with IDX image/label pairs "
                                 "(train-* and t10k-*)");
    stim->excludes(mnist);
    mnist->excludes(stim);
}

void add_override_flags(CLI::App& sub, CommonOpts& o) {
    sub.add_option("--seed", o.seed, "override run.seed");
    sub.add_option("--mode", o.mode, "override run.mode")
        ->check(CLI::IsMember({"memristor", "baseline"}));
    sub.add_option("--scheme", o.scheme, "override array.scheme")
        ->check(CLI::IsMember({"selector", "selectorless"}));
    sub.add_option("--port", o.port_spec, "device array port: virtual | remote:HOST:PORT");
}

RunConfig load_config(const CommonOpts& o) {
    RunConfig cfg = o.config_path.empty()
                        ? parse_config("{}")
                        : parse_config(loading([&] { return read_file(o.config_path); }));
    if (o.seed) cfg.run.seed = *o.seed;
    if (o.mode)
        cfg.run.mode = *o.mode == "memristor" ? RunMode::memristor : RunMode::baseline_float;
    if (o.scheme)
        cfg.array.scheme = *o.scheme == "selector" ? BiasScheme::selector_based
                                                   : BiasScheme::selectorless_half_voltage;
    return cfg;
}

ConnectivityMatrix load_connectivity(const CommonOpts& o, const RunConfig& cfg) {
    const std::size_t n_in = cfg.network.layers[0], n_out = cfg.network.layers[1];
    if (o.connectivity_path.empty())
        return canonical_connectivity(n_in, n_out, cfg.array.rows, cfg.array.cols);
    return parse_connectivity(loading([&] { return read_file(o.connectivity_path); }), n_in,
                              n_out, cfg.array.rows, cfg.array.cols);
}

// train == nullptr loads only the evaluation set (the t10k pair, or
// the stimuli file itself).
void load_samples(const CommonOpts& o, SampleSet* train, SampleSet& test) {
    if (!o.mnist_dir.empty()) {
        if (train)
            *train = samples_from_images(loading([&] {
                return load_mnist(o.mnist_dir + "/train-images-idx3-ubyte",
                                  o.mnist_dir + "/train-labels-idx1-ubyte");
            }));
        test = samples_from_images(loading([&] {
            return load_mnist(o.mnist_dir + "/t10k-images-idx3-ubyte",
                              o.mnist_dir + "/t10k-labels-idx1-ubyte");
        }));
    } else if (!o.stimuli_path.empty()) {
        test = samples_from_stimuli(
            parse_stimuli(loading([&] { return read_file(o.stimuli_path); })));
        if (train) *train = test;
    } else {
        throw usage_error("one of --stimuli or --mnist is required");
    }
}

// The canonical virtual array: devices drawn from the "init" substream
// of the run seed, reads noised from the "read-noise" substream.
struct VirtualRig {
    Crossbar cb;
    RandomStream rng;
    VirtualPort port;

    explicit VirtualRig(const RunConfig& cfg)
        : cb(cfg.array.rows, cfg.array.cols, cfg.device, cfg.array.scheme,
             [&] {
                 RandomStream init(substream_seed(cfg.run.seed, "init"));
                 return Crossbar::draw_initial(cfg.array.rows, cfg.array.cols,
                                               cfg.array.R_init_mean,
                                               cfg.array.R_init_jitter_rel, init);
             }()),
          rng(substream_seed(cfg.run.seed, "read-noise")),
          port(cb, cfg.read_noise, rng) {}
};

RunLog run_with_port(const RunConfig& cfg, const SampleSet& train, const SampleSet& test,
                     const ConnectivityMatrix& cm, const PortSpec& spec,
                     const std::vector<std::pair<std::size_t, std::size_t>>& watch) {
    if (cfg.run.mode == RunMode::baseline_float)
        return run_training(cfg, train, test, cm, nullptr, watch);
    if (spec.remote) {
        RemotePort port(spec.host, spec.port);
        return run_training(cfg, train, test, cm, &port, watch);
    }
    VirtualRig rig(cfg);
    return run_training(cfg, train, test, cm, &rig.port, watch);
}

int cmd_train(const CommonOpts& o) {
    const RunConfig cfg = load_config(o);
    const ConnectivityMatrix cm = load_connectivity(o, cfg);
    SampleSet train, test;
    load_samples(o, &train, test);
    const RunLog log =
        run_with_port(cfg, train, test, cm, parse_port_spec(o.port_spec), parse_watch(o.watch));
    write_artifacts(log, o.out_dir);
    std::cout << "train=" << fmt_double(log.final_train_acc)
              << " test=" << fmt_double(log.final_test_acc) << "\n";
    return 0;
}

int cmd_test(const CommonOpts& o) {
    RunConfig cfg = load_config(o);
    cfg.run.epochs = 0; // evaluate the array as it stands
    const ConnectivityMatrix cm = load_connectivity(o, cfg);
    SampleSet test;
    load_samples(o, nullptr, test);
    const RunLog log =
        run_with_port(cfg, SampleSet{}, test, cm, parse_port_spec(o.port_spec), {});
    if (!o.out_dir.empty()) write_artifacts(log, o.out_dir);
    std::cout << "test=" << fmt_double(log.final_test_acc) << "\n";
    return 0;
}

struct ProgramOpts {
    CommonOpts common;
    std::size_t row = 0, col = 0;
    double target = 0.0;
};

int cmd_program(const ProgramOpts& o) {
    const RunConfig cfg = load_config(o.common);
    const PortSpec spec = parse_port_spec(o.common.port_spec);
    const auto run = [&](DeviceArrayPort& port) {
        return program(port, o.row, o.col, o.target, cfg.pulses, cfg.policy, cfg.device);
    };
    ProgramResult result;
    if (spec.remote) {
        RemotePort port(spec.host, spec.port);
        result = run(port);
    } else {
        VirtualRig rig(cfg);
        result = run(rig.port);
    }
    std::cout << "final=" << fmt_double(result.final_R) << " steps=" << result.steps_used
              << " converged=" << (result.converged ? "true" : "false") << "\n";
    return 0;
}

struct CharacterizeOpts {
    std::string config_path;
    std::vector<double> amplitudes = {-1.2, 1.2};
    std::size_t pulses = 200;
    double start = 11000.0;
    double width = 3e-3;
    std::string out_dir;
};

int cmd_characterize(const CharacterizeOpts& o) {
    CommonOpts shim;
    shim.config_path = o.config_path;
    const DeviceParams params = load_config(shim).device;
    if (o.amplitudes.empty()) throw usage_error("--amplitudes: need at least one value");

    std::vector<std::vector<double>> columns;
    for (const double amp : o.amplitudes) {
        std::vector<double> col;
        col.reserve(o.pulses + 1);
        MemristorState s{o.start};
        col.push_back(s.R);
        for (std::size_t k = 0; k < o.pulses; ++k) {
            s = apply_pulse(s, params, Pulse{amp, o.width});
            col.push_back(s.R);
        }
        columns.push_back(std::move(col));
    }

    std::ostringstream csv;
    csv << "pulse";
    for (const double amp : o.amplitudes) csv << ',' << fmt_double(amp);
    csv << '\n';
    for (std::size_t k = 0; k <= o.pulses; ++k) {
        csv << k;
        for (const auto& col : columns) csv << ',' << fmt_double(col[k]);
        csv << '\n';
    }
    if (o.out_dir.empty())
        std::cout << csv.str();
    else
        write_file(o.out_dir + "/characterize.csv", csv.str());
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"memristive crossbar learning emulator"};
    app.require_subcommand(1);

    CommonOpts train_o;
    auto* train = app.add_subcommand("train", "run the online-learning workflow");
    train->add_option("--config", train_o.config_path, "JSON run configuration")->required();
    train->add_option("--connectivity", train_o.connectivity_path,
                      "synapse-to-device map CSV (default: canonical layout)");
    add_dataset_flags(*train, train_o);
    train->add_option("--out", train_o.out_dir, "artifact directory")->required();
    add_override_flags(*train, train_o);
    train->add_option("--watch", train_o.watch, "synapses to trace, e.g. 5-0,10-2")
        ->delimiter(',');

    CommonOpts test_o;
    auto* test = app.add_subcommand("test", "evaluate the array as it stands");
    test->add_option("--config", test_o.config_path, "JSON run configuration")->required();
    test->add_option("--connectivity", test_o.connectivity_path,
                     "synapse-to-device map CSV (default: canonical layout)");
    add_dataset_flags(*test, test_o);
    test->add_option("--out", test_o.out_dir, "artifact directory (optional)");
    add_override_flags(*test, test_o);

    ProgramOpts prog_o;
    auto* prog = app.add_subcommand("program", "drive one device to a target resistance");
    prog->add_option("--config", prog_o.common.config_path,
                     "JSON run configuration (default: built-in defaults)");
    prog->add_option("--row", prog_o.row, "device row")->required();
    prog->add_option("--col", prog_o.col, "device column")->required();
    prog->add_option("--target", prog_o.target, "target resistance, ohm")->required();
    add_override_flags(*prog, prog_o.common);

    CharacterizeOpts char_o;
    auto* charz = app.add_subcommand("characterize", "pulse-response sweep of the device model");
    charz->add_option("--config", char_o.config_path,
                      "JSON run configuration (default: built-in defaults)");
    charz->add_option("--amplitudes", char_o.amplitudes, "pulse amplitudes, volt")
        ->delimiter(',');
    charz->add_option("--pulses", char_o.pulses, "pulses per amplitude");
    charz->add_option("--start", char_o.start, "initial resistance, ohm");
    charz->add_option("--width", char_o.width, "pulse width, s")
        ->check(CLI::PositiveNumber);
    charz->add_option("--out", char_o.out_dir,
                      "directory for characterize.csv (default: stdout)");

    std::string analyze_run_dir, analyze_out_dir;
    auto* analyze = app.add_subcommand("analyze", "render charts from run artifacts");
    analyze->add_option("--run", analyze_run_dir, "artifact directory of a finished run")
        ->required();
    analyze->add_option("--out", analyze_out_dir, "chart directory (default: the run dir)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    try {
        if (*train) return cmd_train(train_o);
        if (*test) return cmd_test(test_o);
        if (*prog) return cmd_program(prog_o);
        if (*charz) return cmd_characterize(char_o);
        if (*analyze) {
            analyze_run(analyze_run_dir,
                        analyze_out_dir.empty() ? analyze_run_dir : analyze_out_dir);
            return 0;
        }
    } catch (const usage_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const config_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const data_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
