#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstring>
#include <random>
#include <vector>

#include "ais/dynamics.hpp"
#include "ais/encoding.hpp"
#include "ais/errors.hpp"
#include "ais/rng.hpp"

using namespace ais;

namespace {

NetworkConfig base_config() {
    NetworkConfig cfg;
    cfg.stimulation_rate = 0.2;
    cfg.suppression_rate = 0.02;
    cfg.death_rate = 0.1;
    cfg.dt = 1.0;
    cfg.pool_capacity = 20;
    cfg.initial_concentration = 10.0;
    cfg.drop_threshold = 1.0;
    cfg.saturation_cap = 1000.0;
    return cfg;
}

// Single decaying antibody: one antigen with zero matching.
ImmuneNetwork decay_network(double x0, double k3, double dt) {
    NetworkConfig cfg = base_config();
    cfg.death_rate = k3;
    cfg.dt = dt;
    cfg.drop_threshold = 0.0;
    cfg.initial_concentration = x0;
    cfg.saturation_cap = 1e9;
    return ImmuneNetwork::from_matching(cfg, {x0}, {1.0}, {{0.0}}, {{1.0}});
}

std::vector<double> concentrations(const ImmuneNetwork& net) {
    std::vector<double> out;
    out.reserve(net.size());
    for (const auto& ab : net.antibodies()) out.push_back(ab.concentration);
    return out;
}

}  // namespace

TEST_CASE("network configuration invariants are enforced") {
    CHECK_NOTHROW(base_config().validate());

    NetworkConfig bad = base_config();
    bad.death_rate = 0.8;
    bad.dt = 2.0;  // k3*dt = 1.6: one Euler step would overshoot below zero
    CHECK_THROWS_AS(bad.validate(), ConfigError);

    bad = base_config();
    bad.drop_threshold = 10.0;  // not below initial_concentration
    CHECK_THROWS_AS(bad.validate(), ConfigError);

    bad = base_config();
    bad.pool_capacity = 1;
    CHECK_THROWS_AS(bad.validate(), ConfigError);

    bad = base_config();
    bad.death_rate = 0.0;
    CHECK_THROWS_AS(bad.validate(), ConfigError);
}

TEST_CASE("adding antibodies fills the pool and normalizes concentration") {
    NetworkConfig cfg = base_config();
    cfg.pool_capacity = 2;
    ImmuneNetwork net(cfg, Measure::hamming);
    net.add_antigen(Antigen{BitString::from_string("0000"), 1.0});

    CHECK(net.empty());
    net.add_antibody(Antibody{BitString::from_string("0011"), 42.0, 7});
    CHECK(net.size() == 1);
    CHECK(net.antibodies()[0].concentration == cfg.initial_concentration);
    CHECK(net.antibodies()[0].source_id == 7);
    CHECK(net.antigen_matching(0, 0) == doctest::Approx(0.5));

    net.add_antibody(Antibody{BitString::from_string("0000"), 1.0, 8});
    CHECK(net.is_full());
    CHECK_THROWS_AS(net.add_antibody(Antibody{BitString::from_string("1111"), 1.0, 9}),
                    std::logic_error);
    CHECK(net.antibody_matching(0, 1) == doctest::Approx(0.5));
    CHECK(net.antibody_matching(1, 0) == doctest::Approx(0.5));
}

TEST_CASE("zero matching decays along the closed form for a hundred steps") {
    struct Case {
        double x0, k3, dt;
    };
    for (Case c : {Case{10.0, 0.1, 1.0}, Case{3.5, 0.45, 0.5}, Case{80.0, 0.02, 0.25}}) {
        ImmuneNetwork net = decay_network(c.x0, c.k3, c.dt);
        for (int t = 1; t <= 100; ++t) {
            net.step_plain();
            double expected = c.x0 * std::pow(1.0 - c.k3 * c.dt, t);
            CHECK(std::abs(net.antibodies()[0].concentration - expected) <= 1e-9);
        }
    }
}

TEST_CASE("stimulation equal to death holds concentration constant") {
    NetworkConfig cfg = base_config();
    cfg.stimulation_rate = cfg.death_rate;  // m = 1, y = 1: stimulation == death
    ImmuneNetwork net =
        ImmuneNetwork::from_matching(cfg, {10.0}, {1.0}, {{1.0}}, {{1.0}});
    for (int t = 0; t < 50; ++t) {
        net.step_plain();
        CHECK(net.antibodies()[0].concentration == doctest::Approx(10.0).epsilon(1e-12));
    }
}

TEST_CASE("concentrations saturate at the cap under strong stimulation") {
    NetworkConfig cfg = base_config();
    cfg.stimulation_rate = 5.0;
    cfg.saturation_cap = 50.0;
    cfg.initial_concentration = 10.0;
    ImmuneNetwork net =
        ImmuneNetwork::from_matching(cfg, {50.0}, {1.0}, {{1.0}}, {{1.0}});
    net.step_plain();
    CHECK(net.antibodies()[0].concentration == 50.0);
    net.step_plain();
    CHECK(net.antibodies()[0].concentration == 50.0);
}

TEST_CASE("suppression off reduces the idiotypic step to the plain step bitwise") {
    NetworkConfig cfg = base_config();
    cfg.suppression_rate = 0.0;
    auto rng = make_rng(5);
    std::uniform_real_distribution<double> m(-1.0, 1.0);
    std::uniform_real_distribution<double> x(0.5, 20.0);

    std::vector<double> x0(6);
    std::vector<std::vector<double>> mag(1, std::vector<double>(6));
    std::vector<std::vector<double>> mab(6, std::vector<double>(6));
    for (int i = 0; i < 6; ++i) {
        x0[static_cast<std::size_t>(i)] = x(rng);
        mag[0][static_cast<std::size_t>(i)] = m(rng);
        for (int j = 0; j < 6; ++j)
            mab[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = m(rng);
    }
    ImmuneNetwork plain = ImmuneNetwork::from_matching(cfg, x0, {2.0}, mag, mab);
    ImmuneNetwork idio = ImmuneNetwork::from_matching(cfg, x0, {2.0}, mag, mab);
    for (int t = 0; t < 200; ++t) {
        plain.step_plain();
        idio.step_idiotypic();
        auto a = concentrations(plain);
        auto b = concentrations(idio);
        REQUIRE(std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0);
    }
}

TEST_CASE("one idiotypic step matches the hand-computed two-antibody system") {
    NetworkConfig cfg = base_config();
    cfg.stimulation_rate = 0.8;
    cfg.suppression_rate = 0.5;
    cfg.death_rate = 0.1;
    cfg.dt = 0.5;
    ImmuneNetwork net = ImmuneNetwork::from_matching(
        cfg, {1.0, 3.0}, {2.0}, {{0.6, -0.25}}, {{1.0, 0.75}, {0.75, 1.0}});
    net.step_idiotypic();
    CHECK(std::abs(net.antibodies()[0].concentration - 1.14875) <= 1e-12);
    CHECK(std::abs(net.antibodies()[1].concentration - 1.96875) <= 1e-12);
}

TEST_CASE("mutual recognition accelerates decay") {
    auto one_step = [](double m12) {
        NetworkConfig cfg = base_config();
        cfg.suppression_rate = 0.4;
        ImmuneNetwork net = ImmuneNetwork::from_matching(
            cfg, {10.0, 10.0}, {1.0}, {{0.0, 0.0}}, {{1.0, m12}, {m12, 1.0}});
        net.step_idiotypic();
        return net.antibodies()[0].concentration;
    };
    CHECK(one_step(1.0) < one_step(0.0));
    CHECK(one_step(0.0) == doctest::Approx(10.0 * 0.9));  // pure decay
}

TEST_CASE("suppression never increases with a larger mutual matching") {
    for (double low : {0.0, 0.3, 0.6}) {
        double high = low + 0.3;
        auto run = [](double m12) {
            NetworkConfig cfg = base_config();
            cfg.suppression_rate = 0.2;
            ImmuneNetwork net = ImmuneNetwork::from_matching(
                cfg, {5.0, 8.0}, {1.0}, {{0.5, 0.5}}, {{1.0, m12}, {m12, 1.0}});
            net.step_idiotypic();
            return net.antibodies()[0].concentration;
        };
        CHECK(run(high) <= run(low));
    }
}

TEST_CASE("single antibody has an empty suppression sum") {
    NetworkConfig cfg = base_config();
    cfg.suppression_rate = 123.0;  // arbitrary: no partner to suppress with
    cfg.death_rate = 0.1;
    cfg.dt = 1.0;
    ImmuneNetwork net = ImmuneNetwork::from_matching(cfg, {10.0}, {1.0}, {{0.0}}, {{1.0}});
    for (int t = 1; t <= 50; ++t) {
        net.step_idiotypic();
        double expected = 10.0 * std::pow(0.9, t);
        CHECK(std::abs(net.antibodies()[0].concentration - expected) <= 1e-9);
    }
}

TEST_CASE("the idiotypic step requires exactly one antigen") {
    NetworkConfig cfg = base_config();
    ImmuneNetwork net = ImmuneNetwork::from_matching(
        cfg, {1.0}, {1.0, 1.0}, {{0.5}, {0.5}}, {{1.0}});
    CHECK_THROWS_AS(net.step_idiotypic(), std::invalid_argument);
    CHECK_NOTHROW(net.step_plain());
}

TEST_CASE("stepping an empty pool is an error") {
    ImmuneNetwork net = ImmuneNetwork::with_explicit_matching(base_config());
    net.add_antigen(Antigen{RealVector{}, 1.0});
    CHECK_THROWS_AS(net.step_plain(), std::logic_error);
}

TEST_CASE("drop-out removes only antibodies strictly below the threshold") {
    NetworkConfig cfg = base_config();
    cfg.drop_threshold = 1.0;
    ImmuneNetwork net = ImmuneNetwork::from_matching(
        cfg, {0.5, 1.0, 7.0}, {1.0}, {{0.0, 0.0, 0.0}},
        {{1.0, 0.0, 0.0}, {0.0, 1.0, 0.0}, {0.0, 0.0, 1.0}});

    auto dropped = net.drop_out();
    REQUIRE(dropped.size() == 1);
    CHECK(dropped[0].source_id == 0);
    CHECK(net.size() == 2);
    CHECK(net.iterations_since_size_change() == 0);
    CHECK(net.antibodies()[0].concentration == 1.0);  // boundary value survives

    auto none = net.drop_out();
    CHECK(none.empty());
    CHECK(net.iterations_since_size_change() == 1);
}

TEST_CASE("a zero drop threshold never removes anything") {
    NetworkConfig cfg = base_config();
    cfg.drop_threshold = 0.0;
    ImmuneNetwork net = ImmuneNetwork::from_matching(cfg, {0.0, 5.0}, {1.0},
                                                     {{0.0, 0.0}},
                                                     {{1.0, 0.0}, {0.0, 1.0}});
    CHECK(net.drop_out().empty());
    CHECK(net.size() == 2);
}

TEST_CASE("matching caches shrink consistently when antibodies drop") {
    NetworkConfig cfg = base_config();
    cfg.drop_threshold = 1.0;
    ImmuneNetwork net = ImmuneNetwork::from_matching(
        cfg, {0.5, 10.0, 20.0}, {1.0}, {{0.1, 0.2, 0.3}},
        {{1.0, 0.4, 0.5}, {0.4, 1.0, 0.6}, {0.5, 0.6, 1.0}});
    net.drop_out();
    REQUIRE(net.size() == 2);
    CHECK(net.antigen_matching(0, 0) == doctest::Approx(0.2));
    CHECK(net.antigen_matching(0, 1) == doctest::Approx(0.3));
    CHECK(net.antibody_matching(0, 1) == doctest::Approx(0.6));
}

TEST_CASE("an initially empty network is vacuously stable") {
    ImmuneNetwork net = ImmuneNetwork::with_explicit_matching(base_config());
    net.add_antigen(Antigen{RealVector{}, 1.0});
    CHECK(net.run_until_stable(StepMode::plain) == StopReason::stabilized);
    CHECK(net.iteration_count() == 0);
}

TEST_CASE("zero matchings decay, drop out, and stabilize empty") {
    NetworkConfig cfg = base_config();
    cfg.stabilization_window = 10;
    cfg.drop_threshold = 5.0;
    ImmuneNetwork net = ImmuneNetwork::from_matching(
        cfg, {10.0, 10.0}, {1.0}, {{0.0, 0.0}}, {{1.0, 0.0}, {0.0, 1.0}});
    StopReason reason = net.run_until_stable(StepMode::plain);
    CHECK(reason == StopReason::stabilized);
    CHECK(net.empty());
    // x0 = 10, decay factor 0.9: 10·0.9^t first falls below 5 at t = 7
    // (0.9^7 ≈ 0.478), inside the stability window, so both antibodies drop
    // there and a full unchanged window follows.
    CHECK(net.iteration_count() == 7 + cfg.stabilization_window);
}

TEST_CASE("a slow decay stabilizes before any drop occurs") {
    // The stability rule counts iterations without a size change, so a pool
    // whose concentrations shrink too slowly to cross the drop threshold
    // within the window settles as stable with its members intact.
    NetworkConfig cfg = base_config();
    cfg.stabilization_window = 10;  // 10·0.9^t < 1 only at t = 22
    ImmuneNetwork net = ImmuneNetwork::from_matching(
        cfg, {10.0, 10.0}, {1.0}, {{0.0, 0.0}}, {{1.0, 0.0}, {0.0, 1.0}});
    CHECK(net.run_until_stable(StepMode::plain) == StopReason::stabilized);
    CHECK(net.size() == 2);
    CHECK(net.iteration_count() == cfg.stabilization_window);
}

TEST_CASE("the iteration bound stops a pool that never stabilizes") {
    NetworkConfig cfg = base_config();
    cfg.max_iterations = 3;
    cfg.stabilization_window = 10;
    ImmuneNetwork net =
        ImmuneNetwork::from_matching(cfg, {10.0}, {1.0}, {{1.0}}, {{1.0}});
    CHECK(net.run_until_stable(StepMode::plain) == StopReason::iteration_limit);
    CHECK(net.iteration_count() == 3);
}

TEST_CASE("the observer sees every pass of the stabilization loop") {
    NetworkConfig cfg = base_config();
    cfg.max_iterations = 5;
    ImmuneNetwork net =
        ImmuneNetwork::from_matching(cfg, {10.0}, {1.0}, {{1.0}}, {{1.0}});
    int calls = 0;
    net.run_until_stable(StepMode::plain, [&calls](const ImmuneNetwork&) { ++calls; });
    CHECK(calls == 5);
}

TEST_CASE("pool order does not affect the resulting concentrations") {
    // Same six antibodies inserted in two different orders; after idiotypic
    // steps the (source_id, concentration) pairs must agree exactly.
    NetworkConfig cfg = base_config();
    cfg.suppression_rate = 0.3;
    auto rng = make_rng(99);
    std::uniform_real_distribution<double> mdist(0.0, 1.0);

    const int n = 6;
    std::vector<double> mag(n);
    std::vector<std::vector<double>> mab(n, std::vector<double>(n, 1.0));
    for (int i = 0; i < n; ++i) {
        mag[static_cast<std::size_t>(i)] = mdist(rng);
        for (int j = i + 1; j < n; ++j) {
            double v = mdist(rng);
            mab[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = v;
            mab[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)] = v;
        }
    }

    auto build = [&](const std::vector<int>& order) {
        ImmuneNetwork net = ImmuneNetwork::with_explicit_matching(cfg);
        net.add_antigen(Antigen{RealVector{}, 1.0});
        std::vector<int> placed;
        for (int id : order) {
            std::vector<double> ag_row{mag[static_cast<std::size_t>(id)]};
            std::vector<double> ab_row;
            for (int other : placed)
                ab_row.push_back(mab[static_cast<std::size_t>(id)]
                                    [static_cast<std::size_t>(other)]);
            net.add_antibody(Antibody{RealVector{}, 0.0, id}, ag_row, ab_row);
            placed.push_back(id);
        }
        for (int t = 0; t < 40; ++t) net.step_idiotypic();
        std::vector<std::pair<int, double>> out;
        for (const auto& ab : net.antibodies())
            out.emplace_back(static_cast<int>(ab.source_id), ab.concentration);
        std::sort(out.begin(), out.end());
        return out;
    };

    auto a = build({0, 1, 2, 3, 4, 5});
    auto b = build({5, 3, 0, 4, 2, 1});
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].first == b[i].first);
        CHECK(a[i].second == b[i].second);  // bit-exact
    }
}

TEST_CASE("matrix construction validates shapes and ranges") {
    NetworkConfig cfg = base_config();
    CHECK_THROWS_AS(ImmuneNetwork::from_matching(cfg, {1.0}, {}, {}, {{1.0}}),
                    ConfigError);
    CHECK_THROWS_AS(
        ImmuneNetwork::from_matching(cfg, {1.0}, {1.0}, {{0.0, 0.0}}, {{1.0}}),
        ConfigError);
    CHECK_THROWS_AS(
        ImmuneNetwork::from_matching(cfg, {1.0, 2.0}, {1.0}, {{0.0, 0.0}}, {{1.0}}),
        ConfigError);
    CHECK_THROWS_AS(
        ImmuneNetwork::from_matching(cfg, {-1.0}, {1.0}, {{0.0}}, {{1.0}}),
        ConfigError);
    CHECK_THROWS_AS(
        ImmuneNetwork::from_matching(cfg, {1.0}, {-1.0}, {{0.0}}, {{1.0}}),
        ConfigError);
}

TEST_CASE("explicit-matching networks add antigens before antibodies") {
    ImmuneNetwork net = ImmuneNetwork::with_explicit_matching(base_config());
    net.add_antigen(Antigen{RealVector{}, 1.0});
    net.add_antibody(Antibody{RealVector{}, 0.0, 1}, {0.5}, {});
    CHECK_THROWS_AS(net.add_antigen(Antigen{RealVector{}, 1.0}), std::logic_error);
}
