#pragma once

#include <cstdint>
#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "xbarsim/common.hpp"

namespace xbarsim {

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw io_error("cannot open " + path);
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

inline void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw io_error("cannot write " + path);
    out << content;
    if (!out) throw io_error("short write to " + path);
}

// --- connectivity ----------------------------------------------------

/// One synapse-to-device assignment.
struct SynapseMap {
    std::size_t pre, post; // network coordinates
    std::size_t row, col;  // array coordinates
};

struct ConnectivityMatrix {
    std::vector<SynapseMap> entries;
};

namespace detail {

inline std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::string field;
    std::istringstream ss(line);
    while (std::getline(ss, field, ',')) {
        // trim surrounding blanks
        const auto b = field.find_first_not_of(" \t\r");
        const auto e = field.find_last_not_of(" \t\r");
        out.push_back(b == std::string::npos ? "" : field.substr(b, e - b + 1));
    }
    if (!line.empty() && line.back() == ',') out.push_back("");
    return out;
}

inline bool csv_uint(const std::string& tok, std::size_t& out) {
    if (tok.empty()) return false;
    for (char c : tok)
        if (c < '0' || c > '9') return false;
    try {
        out = std::stoull(tok);
    } catch (...) {
        return false;
    }
    return true;
}

/// Returns logical lines with \r stripped; skips a trailing empty line.
inline std::vector<std::string> split_lines(const std::string& text) {
    std::vector<std::string> lines;
    std::string line;
    std::istringstream ss(text);
    while (std::getline(ss, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        lines.push_back(line);
    }
    return lines;
}

} // namespace detail

/// Parses the synapse->device assignment table (CSV with header
/// pre,post,row,col) and validates it against the network and array
/// shapes: every index in range, no synapse mapped twice, no device
/// shared by two synapses.
inline ConnectivityMatrix parse_connectivity(const std::string& text, std::size_t n_pre,
                                             std::size_t n_post, std::size_t rows,
                                             std::size_t cols) {
    const auto lines = detail::split_lines(text);
    if (lines.empty() || detail::split_csv(lines[0]) !=
                             std::vector<std::string>{"pre", "post", "row", "col"})
        throw data_error("connectivity: expected header 'pre,post,row,col'");

    ConnectivityMatrix out;
    std::set<std::pair<std::size_t, std::size_t>> seen_synapse, seen_device;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        if (lines[i].empty()) continue;
        const auto f = detail::split_csv(lines[i]);
        SynapseMap m{};
        if (f.size() != 4 || !detail::csv_uint(f[0], m.pre) || !detail::csv_uint(f[1], m.post) ||
            !detail::csv_uint(f[2], m.row) || !detail::csv_uint(f[3], m.col))
            throw data_error("connectivity: malformed row at line " + std::to_string(i + 1));
        if (m.pre >= n_pre || m.post >= n_post)
            throw data_error("connectivity: neuron index out of range at line " +
                             std::to_string(i + 1));
        if (m.row >= rows || m.col >= cols)
            throw data_error("connectivity: device index overflow at line " +
                             std::to_string(i + 1));
        if (!seen_synapse.insert({m.pre, m.post}).second)
            throw data_error("connectivity: duplicate synapse (" + std::to_string(m.pre) +
                             "," + std::to_string(m.post) + ")");
        if (!seen_device.insert({m.row, m.col}).second)
            throw data_error("connectivity: device (" + std::to_string(m.row) + "," +
                             std::to_string(m.col) + ") assigned twice");
        out.entries.push_back(m);
    }
    return out;
}

inline std::string format_connectivity(const ConnectivityMatrix& cm) {
    std::string out = "pre,post,row,col\n";
    for (const SynapseMap& m : cm.entries)
        out += std::to_string(m.pre) + "," + std::to_string(m.post) + "," +
               std::to_string(m.row) + "," + std::to_string(m.col) + "\n";
    return out;
}

/// Dense all-to-all assignment in synapse-major order: synapse (i,j)
/// lands on device ((i*n_post + j) div cols, (i*n_post + j) mod cols).
inline ConnectivityMatrix canonical_connectivity(std::size_t n_pre, std::size_t n_post,
                                                 std::size_t rows, std::size_t cols) {
    if (n_pre * n_post > rows * cols)
        throw data_error("connectivity: synapse count exceeds array capacity");
    ConnectivityMatrix out;
    out.entries.reserve(n_pre * n_post);
    for (std::size_t i = 0; i < n_pre; ++i)
        for (std::size_t j = 0; j < n_post; ++j) {
            const std::size_t flat = i * n_post + j;
            out.entries.push_back({i, j, flat / cols, flat % cols});
        }
    return out;
}

// --- stimuli ----------------------------------------------------------

/// Timestepped input spikes with an optional label per step (-1 when
/// the step carries no supervision).
struct StimuliSet {
    std::vector<int> labels;
    std::vector<std::vector<std::uint8_t>> spikes;

    std::size_t width() const { return spikes.empty() ? 0 : spikes[0].size(); }
    std::size_t steps() const { return spikes.size(); }
};

/// CSV rows "t,label,bit,bit,..." (no header); t must count up from 0.
inline StimuliSet parse_stimuli(const std::string& text) {
    StimuliSet out;
    const auto lines = detail::split_lines(text);
    for (std::size_t i = 0; i < lines.size(); ++i) {
        if (lines[i].empty()) continue;
        const auto f = detail::split_csv(lines[i]);
        if (f.size() < 3)
            throw data_error("stimuli: malformed row at line " + std::to_string(i + 1));
        std::size_t t = 0;
        if (!detail::csv_uint(f[0], t) || t != out.spikes.size())
            throw data_error("stimuli: bad timestep at line " + std::to_string(i + 1));
        int label = -1;
        if (f[1] != "-1") {
            std::size_t l = 0;
            if (!detail::csv_uint(f[1], l))
                throw data_error("stimuli: bad label at line " + std::to_string(i + 1));
            label = static_cast<int>(l);
        }
        std::vector<std::uint8_t> bits;
        bits.reserve(f.size() - 2);
        for (std::size_t k = 2; k < f.size(); ++k) {
            if (f[k] == "0")
                bits.push_back(0);
            else if (f[k] == "1")
                bits.push_back(1);
            else
                throw data_error("stimuli: non-binary entry '" + f[k] + "' at line " +
                                 std::to_string(i + 1));
        }
        if (!out.spikes.empty() && bits.size() != out.spikes[0].size())
            throw data_error("stimuli: width mismatch at line " + std::to_string(i + 1));
        out.labels.push_back(label);
        out.spikes.push_back(std::move(bits));
    }
    return out;
}

inline std::string format_stimuli(const StimuliSet& s) {
    std::string out;
    for (std::size_t t = 0; t < s.steps(); ++t) {
        out += std::to_string(t) + "," + std::to_string(s.labels[t]);
        for (std::uint8_t b : s.spikes[t]) out += b ? ",1" : ",0";
        out += "\n";
    }
    return out;
}

// --- MNIST IDX ---------------------------------------------------------

/// 28x28 grayscale images and their labels, both straight out of the
/// IDX containers.
struct LabeledImages {
    std::size_t count = 0;
    std::vector<std::uint8_t> pixels; // count * 784, row-major
    std::vector<std::uint8_t> labels; // count

    const std::uint8_t* image(std::size_t i) const { return pixels.data() + i * 784; }
};

namespace detail {

inline std::uint32_t read_be32(const std::string& bytes, std::size_t off) {
    return (static_cast<std::uint32_t>(static_cast<unsigned char>(bytes[off])) << 24) |
           (static_cast<std::uint32_t>(static_cast<unsigned char>(bytes[off + 1])) << 16) |
           (static_cast<std::uint32_t>(static_cast<unsigned char>(bytes[off + 2])) << 8) |
           static_cast<std::uint32_t>(static_cast<unsigned char>(bytes[off + 3]));
}

} // namespace detail

inline LabeledImages load_mnist(const std::string& image_path, const std::string& label_path) {
    const std::string img = read_file(image_path);
    const std::string lab = read_file(label_path);

    if (img.size() < 16 || detail::read_be32(img, 0) != 0x00000803u)
        throw data_error(image_path + ": bad IDX image magic");
    if (lab.size() < 8 || detail::read_be32(lab, 0) != 0x00000801u)
        throw data_error(label_path + ": bad IDX label magic");

    const std::size_t n_img = detail::read_be32(img, 4);
    const std::size_t rows = detail::read_be32(img, 8);
    const std::size_t cols = detail::read_be32(img, 12);
    if (rows != 28 || cols != 28)
        throw data_error(image_path + ": expected 28x28 images, got " + std::to_string(rows) +
                         "x" + std::to_string(cols));
    const std::size_t expect_img = 16 + n_img * 784;
    if (img.size() != expect_img)
        throw data_error(image_path + ": truncated payload, expected " +
                         std::to_string(expect_img) + " bytes, got " +
                         std::to_string(img.size()));

    const std::size_t n_lab = detail::read_be32(lab, 4);
    const std::size_t expect_lab = 8 + n_lab;
    if (lab.size() != expect_lab)
        throw data_error(label_path + ": truncated payload, expected " +
                         std::to_string(expect_lab) + " bytes, got " +
                         std::to_string(lab.size()));
    if (n_img != n_lab)
        throw data_error("IDX count mismatch: " + std::to_string(n_img) + " images vs " +
                         std::to_string(n_lab) + " labels");

    LabeledImages out;
    out.count = n_img;
    out.pixels.assign(img.begin() + 16, img.end());
    out.labels.assign(lab.begin() + 8, lab.end());
    return out;
}

/// Center-crop a 28x28 image to rows/cols 3..24 (22x22) and binarize
/// at the 127/128 midpoint, row-major.
inline std::vector<std::uint8_t> preprocess(const std::uint8_t* image28x28) {
    std::vector<std::uint8_t> out;
    out.reserve(484);
    for (std::size_t r = 3; r <= 24; ++r)
        for (std::size_t c = 3; c <= 24; ++c)
            out.push_back(image28x28[r * 28 + c] > 127 ? 1 : 0);
    return out;
}

} // namespace xbarsim
