#include <catch2/catch_amalgamated.hpp>

#include "xbarsim/plasticity.hpp"
#include "xbarsim/rng.hpp"

#include <cmath>
#include <cstdint>
#include <vector>

using namespace xbarsim;
using Catch::Approx;

namespace {

const DeviceParams P{};

std::vector<std::uint8_t> onehot(std::size_t n, std::size_t k) {
    std::vector<std::uint8_t> v(n, 0);
    v[k] = 1;
    return v;
}

} // namespace

TEST_CASE("delta_rule is empty when the network already agrees") {
    DeltaRuleConfig cfg;
    auto d = delta_rule(onehot(8, 3), onehot(4, 1), onehot(4, 1), cfg);
    CHECK(d.entries.empty());
}

TEST_CASE("delta_rule potentiates the target and depresses the wrong winner") {
    DeltaRuleConfig cfg; // 3.5e-6
    auto d = delta_rule(onehot(10, 5), onehot(10, 7), onehot(10, 2), cfg);
    REQUIRE(d.entries.size() == 2);
    CHECK(d.entries[0].pre == 5);
    CHECK(d.entries[0].post == 2);
    CHECK(d.entries[0].dG == 3.5e-6);
    CHECK(d.entries[1].pre == 5);
    CHECK(d.entries[1].post == 7);
    CHECK(d.entries[1].dG == -3.5e-6);
}

TEST_CASE("delta_rule is empty without presynaptic activity") {
    auto d = delta_rule(std::vector<std::uint8_t>(6, 0), onehot(3, 0), onehot(3, 2),
                        DeltaRuleConfig{});
    CHECK(d.entries.empty());
}

TEST_CASE("delta_rule on a silent step only potentiates") {
    std::vector<std::uint8_t> spikes = {1, 0, 1, 1, 0};
    std::vector<std::uint8_t> silent(4, 0);
    auto d = delta_rule(spikes, silent, onehot(4, 3), DeltaRuleConfig{});
    REQUIRE(d.entries.size() == 3);
    for (const auto& e : d.entries) {
        CHECK(e.post == 3);
        CHECK(e.dG == 3.5e-6);
        CHECK(spikes[e.pre] == 1);
    }
}

TEST_CASE("delta_rule sign correctness and sparsity on random instances") {
    RandomStream rng(substream_seed(11, "delta-random"));
    DeltaRuleConfig cfg;
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<std::uint8_t> spikes(20);
        std::size_t active = 0;
        for (auto& b : spikes) {
            b = rng.uniform() < 0.4 ? 1 : 0;
            active += b;
        }
        const std::size_t tgt = rng.uniform_int(6);
        std::vector<std::uint8_t> fired(6, 0);
        if (rng.uniform() < 0.8) fired[rng.uniform_int(6)] = 1;
        auto d = delta_rule(spikes, fired, onehot(6, tgt), cfg);

        CHECK(d.entries.size() <= 2 * active);
        for (const auto& e : d.entries) {
            CHECK(spikes[e.pre] == 1);
            if (e.dG > 0.0) {
                CHECK(e.post == tgt);
                CHECK(fired[e.post] == 0);
            } else {
                CHECK(fired[e.post] == 1);
                CHECK(e.post != tgt);
            }
            CHECK(std::fabs(e.dG) == cfg.learning_rate);
        }
    }
}

TEST_CASE("delta_rule rejects fired/target dimension mismatch") {
    CHECK_THROWS_AS(delta_rule(onehot(4, 0), onehot(3, 0), onehot(4, 0), DeltaRuleConfig{}),
                    std::invalid_argument);
}

TEST_CASE("stdp_update window values") {
    STDPConfig cfg;
    cfg.A_plus = 2e-6;
    cfg.A_minus = 3e-6;
    cfg.tau_plus = 10.0;
    cfg.tau_minus = 8.0;

    SECTION("no post spikes") {
        auto d = stdp_update({3, 7}, {-1, -1}, cfg);
        CHECK(d.entries.empty());
    }
    SECTION("coincident spikes sit at the potentiation peak") {
        auto d = stdp_update({5}, {5}, cfg);
        REQUIRE(d.entries.size() == 1);
        CHECK(d.entries[0].dG == Approx(cfg.A_plus).epsilon(1e-15));
    }
    SECTION("post leading by tau_minus gives -A_minus/e") {
        auto d = stdp_update({8}, {0}, cfg); // dt = -8 = -tau_minus
        REQUIRE(d.entries.size() == 1);
        CHECK(d.entries[0].dG == Approx(-cfg.A_minus * std::exp(-1.0)).epsilon(1e-12));
    }
    SECTION("causal order potentiates, anticausal depresses") {
        auto forward = stdp_update({0}, {4}, cfg);
        auto backward = stdp_update({4}, {0}, cfg);
        REQUIRE(forward.entries.size() == 1);
        REQUIRE(backward.entries.size() == 1);
        CHECK(forward.entries[0].dG > 0.0);
        CHECK(backward.entries[0].dG < 0.0);
        CHECK(forward.entries[0].dG == Approx(cfg.A_plus * std::exp(-0.4)).epsilon(1e-12));
    }
    SECTION("silent pre neurons contribute nothing") {
        auto d = stdp_update({-1, 2}, {2, -1}, cfg);
        REQUIRE(d.entries.size() == 1);
        CHECK(d.entries[0].pre == 1);
        CHECK(d.entries[0].post == 0);
        CHECK(d.entries[0].dG == Approx(cfg.A_plus).epsilon(1e-15));
    }
}

TEST_CASE("window_from_options spans the pulse-set operating range") {
    std::vector<Pulse> opts;
    for (double a : {0.9, 1.0, 1.1, 1.2}) {
        opts.push_back({a, 1e-5});
        opts.push_back({-a, 1e-5});
    }
    const ResistanceWindow w = window_from_options(P, opts);
    CHECK(w.lo == Approx(2230.4).epsilon(1e-12));  // r_n at -1.2 V
    CHECK(w.hi == Approx(12855.4).epsilon(1e-12)); // r_p at +1.2 V

    // one-sided sets fall back to the zero-bias limits
    const ResistanceWindow up_only = window_from_options(P, {{1.0, 1e-5}});
    CHECK(up_only.lo == P.R_floor);
    CHECK(up_only.hi == Approx(operating_range(P, 1.0)).epsilon(1e-12));
    const ResistanceWindow down_only = window_from_options(P, {{-1.0, 1e-5}});
    CHECK(down_only.lo == Approx(operating_range(P, -1.0)).epsilon(1e-12));
    CHECK(down_only.hi == P.a_0p);
}

TEST_CASE("target_resistance identity and hand-checked values") {
    const ResistanceWindow w{2230.4, 12855.4};

    auto same = target_resistance(11000.0, 0.0, w);
    CHECK(same.R == 11000.0);
    CHECK_FALSE(same.saturated);

    // one potentiation step at the canonical learning rate
    auto pot = target_resistance(11000.0, 3.5e-6, w);
    CHECK(pot.R == Approx(1.0 / (1.0 / 11000.0 + 3.5e-6)).epsilon(1e-15));
    CHECK(pot.R == Approx(10592.20028887819).epsilon(1e-12));
    CHECK_FALSE(pot.saturated);

    // one depression step stays inside the window
    auto dep = target_resistance(11000.0, -3.5e-6, w);
    CHECK(dep.R == Approx(1.0 / (1.0 / 11000.0 - 3.5e-6)).epsilon(1e-15));
    CHECK(dep.R == Approx(11440.457618304734).epsilon(1e-12));
    CHECK_FALSE(dep.saturated);
}

TEST_CASE("target_resistance clamps into the reachable window") {
    const ResistanceWindow w{2230.4, 12855.4};

    auto low = target_resistance(2300.0, 1e-3, w); // raw R far below lo
    CHECK(low.R == w.lo);
    CHECK_FALSE(low.saturated);

    auto high = target_resistance(12855.4, -3.5e-6, w); // raw R above hi
    CHECK(high.R == w.hi);
    CHECK_FALSE(high.saturated);
}

TEST_CASE("target_resistance saturates when depression kills the conductance") {
    const ResistanceWindow w{2230.4, 12855.4};
    auto zero = target_resistance(11000.0, -1.0 / 11000.0, w); // g exactly 0
    CHECK(zero.R == w.hi);
    CHECK(zero.saturated);
    auto neg = target_resistance(11000.0, -1e-3, w); // g < 0
    CHECK(neg.R == w.hi);
    CHECK(neg.saturated);
    CHECK_THROWS_AS(target_resistance(0.0, 1e-6, w), std::invalid_argument);
}

TEST_CASE("target_resistance decreases monotonically in dG before clamping") {
    const ResistanceWindow w{1.0, 1e9}; // wide-open window: observe the raw map
    double prev = target_resistance(11000.0, -5e-5, w).R;
    for (double dG = -4.5e-5; dG < 3e-4; dG += 5e-6) {
        const double r = target_resistance(11000.0, dG, w).R;
        CHECK(r < prev);
        prev = r;
    }
}

TEST_CASE("config validation for plasticity rules") {
    DeltaRuleConfig d;
    d.learning_rate = 0.0;
    CHECK_THROWS_AS(d.validate(), std::invalid_argument);
    CHECK_NOTHROW(DeltaRuleConfig{}.validate());

    STDPConfig s;
    s.tau_plus = -1.0;
    CHECK_THROWS_AS(s.validate(), std::invalid_argument);
    CHECK_NOTHROW(STDPConfig{}.validate());
}
