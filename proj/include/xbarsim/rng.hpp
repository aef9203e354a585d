#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

namespace xbarsim {

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

} // namespace detail

/// Derives an independent stream seed from a run seed and a label, so
/// each consumer ("init", "shuffle", ...) gets its own reproducible
/// sequence regardless of how often the others draw.
inline std::uint64_t substream_seed(std::uint64_t seed, std::string_view label) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : label) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return detail::splitmix64(seed ^ h);
}

/// Seeded random stream with fixed draw mappings. std::mt19937_64 has a
/// standard-pinned output sequence, but the std distributions do not, so
/// uniform/gaussian/shuffle are implemented here and never change.
class RandomStream {
public:
    explicit RandomStream(std::uint64_t seed) : eng_(seed) {}

    /// Uniform in [0, 1), 53-bit resolution.
    double uniform() {
        return static_cast<double>(eng_() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) {
        return lo + (hi - lo) * uniform();
    }

    /// Uniform integer in [0, n). Plain modulo: the bias is < n/2^64,
    /// irrelevant for simulation-scale n, and the mapping stays frozen.
    std::uint64_t uniform_int(std::uint64_t n) {
        return eng_() % n;
    }

    /// Standard normal via Box-Muller, sine partner discarded: exactly
    /// two uniform draws per call, no hidden cache state.
    double gaussian() {
        double u1 = uniform();
        double u2 = uniform();
        while (u1 <= 0.0) u1 = uniform(); // 2^-53 tail guard
        return std::sqrt(-2.0 * std::log(u1)) *
               std::cos(2.0 * 3.141592653589793238462643383279502884 * u2);
    }

    /// In-place Fisher-Yates; draw order fixed (i = n-1 .. 1).
    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            std::size_t j = static_cast<std::size_t>(uniform_int(i));
            std::swap(v[i - 1], v[j]);
        }
    }

private:
    std::mt19937_64 eng_;
};

} // namespace xbarsim
