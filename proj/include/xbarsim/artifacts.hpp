#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "xbarsim/common.hpp"
#include "xbarsim/config.hpp"
#include "xbarsim/dataio.hpp"
#include "xbarsim/svg.hpp"

namespace xbarsim {

struct AccuracyRow {
    std::size_t epoch; // 1-based: measured after this many epochs
    double train_acc, test_acc;
};

/// Per-epoch conductance of one watched synapse (Fig-2(D)-style trace).
struct WatchTrace {
    std::size_t pre, post;
    std::vector<double> conductance; // one entry per epoch

    std::string id() const { return std::to_string(pre) + "-" + std::to_string(post); }
};

/// Everything a run leaves behind. Append-only during training and
/// byte-identically reproducible for a given (config, seed, dataset).
struct RunLog {
    std::uint64_t seed = 0;
    std::string config_digest;
    RunMode mode = RunMode::memristor;
    BiasScheme scheme = BiasScheme::selector_based;
    std::vector<AccuracyRow> accuracy;
    std::vector<WatchTrace> watch;
    std::vector<int> fire_history; // training arbitrations, -1 = silent
    Matrix snapshot_pre, snapshot_post;
    std::size_t unconverged_programs = 0;
    double final_train_acc = 0.0, final_test_acc = 0.0;
};

// --- CSV renderings ----------------------------------------------------

inline std::string accuracy_csv(const RunLog& log) {
    std::string out = "epoch,train_acc,test_acc\n";
    for (const AccuracyRow& row : log.accuracy)
        out += std::to_string(row.epoch) + "," + fmt_double(row.train_acc) + "," +
               fmt_double(row.test_acc) + "\n";
    return out;
}

inline std::string weights_trace_csv(const RunLog& log) {
    std::string out = "epoch,synapse,conductance\n";
    std::size_t epochs = 0;
    for (const WatchTrace& w : log.watch) epochs = std::max(epochs, w.conductance.size());
    for (std::size_t e = 0; e < epochs; ++e)
        for (const WatchTrace& w : log.watch)
            if (e < w.conductance.size())
                out += std::to_string(e + 1) + "," + w.id() + "," +
                       fmt_double(w.conductance[e]) + "\n";
    return out;
}

inline std::string fire_history_csv(const RunLog& log) {
    std::string out = "step,winner\n";
    for (std::size_t i = 0; i < log.fire_history.size(); ++i)
        out += std::to_string(i) + "," + std::to_string(log.fire_history[i]) + "\n";
    return out;
}

inline std::string matrix_csv(const Matrix& m) {
    std::string out;
    for (std::size_t r = 0; r < m.rows(); ++r) {
        for (std::size_t c = 0; c < m.cols(); ++c) {
            if (c) out += ",";
            out += fmt_double(m(r, c));
        }
        out += "\n";
    }
    return out;
}

// --- CSV parsers (the analyze path re-reads its own artifacts) ---------

inline std::vector<AccuracyRow> parse_accuracy_csv(const std::string& text) {
    const auto lines = detail::split_lines(text);
    if (lines.empty() || lines[0] != "epoch,train_acc,test_acc")
        throw data_error("accuracy.csv: expected header 'epoch,train_acc,test_acc'");
    std::vector<AccuracyRow> out;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        if (lines[i].empty()) continue;
        const auto f = detail::split_csv(lines[i]);
        AccuracyRow row{};
        char* end = nullptr;
        if (f.size() != 3 || !detail::csv_uint(f[0], row.epoch))
            throw data_error("accuracy.csv: malformed row at line " + std::to_string(i + 1));
        row.train_acc = std::strtod(f[1].c_str(), &end);
        if (end != f[1].c_str() + f[1].size())
            throw data_error("accuracy.csv: malformed row at line " + std::to_string(i + 1));
        row.test_acc = std::strtod(f[2].c_str(), &end);
        if (end != f[2].c_str() + f[2].size())
            throw data_error("accuracy.csv: malformed row at line " + std::to_string(i + 1));
        out.push_back(row);
    }
    return out;
}

inline std::vector<WatchTrace> parse_weights_trace_csv(const std::string& text) {
    const auto lines = detail::split_lines(text);
    if (lines.empty() || lines[0] != "epoch,synapse,conductance")
        throw data_error("weights_trace.csv: expected header 'epoch,synapse,conductance'");
    std::vector<WatchTrace> out;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        if (lines[i].empty()) continue;
        const auto f = detail::split_csv(lines[i]);
        std::size_t epoch = 0;
        if (f.size() != 3 || !detail::csv_uint(f[0], epoch))
            throw data_error("weights_trace.csv: malformed row at line " +
                             std::to_string(i + 1));
        const auto dash = f[1].find('-');
        std::size_t pre = 0, post = 0;
        if (dash == std::string::npos || !detail::csv_uint(f[1].substr(0, dash), pre) ||
            !detail::csv_uint(f[1].substr(dash + 1), post))
            throw data_error("weights_trace.csv: bad synapse id at line " +
                             std::to_string(i + 1));
        char* end = nullptr;
        const double g = std::strtod(f[2].c_str(), &end);
        if (end != f[2].c_str() + f[2].size())
            throw data_error("weights_trace.csv: malformed row at line " +
                             std::to_string(i + 1));
        WatchTrace* trace = nullptr;
        for (WatchTrace& w : out)
            if (w.pre == pre && w.post == post) trace = &w;
        if (!trace) {
            out.push_back({pre, post, {}});
            trace = &out.back();
        }
        trace->conductance.push_back(g);
    }
    return out;
}

inline Matrix parse_matrix_csv(const std::string& text) {
    const auto lines = detail::split_lines(text);
    std::vector<std::vector<double>> rows;
    for (std::size_t i = 0; i < lines.size(); ++i) {
        if (lines[i].empty()) continue;
        const auto f = detail::split_csv(lines[i]);
        std::vector<double> row;
        for (const std::string& tok : f) {
            char* end = nullptr;
            row.push_back(std::strtod(tok.c_str(), &end));
            if (tok.empty() || end != tok.c_str() + tok.size())
                throw data_error("snapshot: malformed value at line " + std::to_string(i + 1));
        }
        if (!rows.empty() && row.size() != rows[0].size())
            throw data_error("snapshot: ragged row at line " + std::to_string(i + 1));
        rows.push_back(std::move(row));
    }
    Matrix m(rows.size(), rows.empty() ? 0 : rows[0].size());
    for (std::size_t r = 0; r < rows.size(); ++r)
        for (std::size_t c = 0; c < rows[r].size(); ++c) m(r, c) = rows[r][c];
    return m;
}

// --- writers ------------------------------------------------------------

inline void write_artifacts(const RunLog& log, const std::string& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw io_error("cannot create " + dir + ": " + ec.message());
    const auto path = [&](const char* name) { return dir + "/" + name; };

    write_file(path("accuracy.csv"), accuracy_csv(log));
    write_file(path("weights_trace.csv"), weights_trace_csv(log));
    write_file(path("fire_history.csv"), fire_history_csv(log));
    write_file(path("resistance_snapshot_pre.csv"), matrix_csv(log.snapshot_pre));
    write_file(path("resistance_snapshot_post.csv"), matrix_csv(log.snapshot_post));
    write_file(path("resistance_heatmap.svg"),
               svg::heatmap("final resistance (ohm)", log.snapshot_post));

    nlohmann::json meta;
    meta["config_digest"] = log.config_digest;
    meta["mode"] = mode_name(log.mode);
    meta["scheme"] = scheme_name(log.scheme);
    meta["seed"] = log.seed;
    meta["unconverged_programs"] = log.unconverged_programs;
    write_file(path("run_meta.json"), meta.dump(2) + "\n");
}

/// Renders the four analysis SVGs purely from a run directory's CSVs,
/// so logs from hardware-backed runs plot identically.
inline void analyze_run(const std::string& run_dir, const std::string& out_dir) {
    const char* needed[] = {"accuracy.csv", "weights_trace.csv", "resistance_snapshot_pre.csv",
                            "resistance_snapshot_post.csv"};
    std::string missing;
    for (const char* name : needed)
        if (!std::filesystem::exists(run_dir + "/" + name))
            missing += missing.empty() ? name : std::string(", ") + name;
    if (!missing.empty()) throw data_error("analyze: missing artifacts: " + missing);

    const auto accuracy = parse_accuracy_csv(read_file(run_dir + "/accuracy.csv"));
    const auto watch = parse_weights_trace_csv(read_file(run_dir + "/weights_trace.csv"));
    const Matrix pre = parse_matrix_csv(read_file(run_dir + "/resistance_snapshot_pre.csv"));
    const Matrix post = parse_matrix_csv(read_file(run_dir + "/resistance_snapshot_post.csv"));

    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) throw io_error("cannot create " + out_dir + ": " + ec.message());

    std::vector<svg::Series> acc_series(2);
    acc_series[0].name = "train";
    acc_series[1].name = "test";
    for (const AccuracyRow& row : accuracy) {
        acc_series[0].points.push_back({static_cast<double>(row.epoch), row.train_acc});
        acc_series[1].points.push_back({static_cast<double>(row.epoch), row.test_acc});
    }
    write_file(out_dir + "/accuracy_curve.svg",
               svg::line_chart("accuracy per epoch", acc_series, "epoch", "accuracy"));

    std::vector<svg::Series> traces;
    for (const WatchTrace& w : watch) {
        svg::Series s;
        s.name = "synapse " + w.id();
        for (std::size_t e = 0; e < w.conductance.size(); ++e)
            s.points.push_back({static_cast<double>(e + 1), w.conductance[e]});
        traces.push_back(std::move(s));
    }
    write_file(out_dir + "/weights_trace.svg",
               svg::line_chart("watched synapse conductance (S)", traces, "epoch",
                               "conductance"));

    write_file(out_dir + "/resistance_heatmap_pre.svg",
               svg::heatmap("initial resistance (ohm)", pre));
    write_file(out_dir + "/resistance_heatmap_post.svg",
               svg::heatmap("final resistance (ohm)", post));
}

} // namespace xbarsim
