#include <doctest.h>

#include <cmath>
#include <string>
#include <variant>

#include "ais/clonal.hpp"
#include "ais/encoding.hpp"
#include "ais/errors.hpp"
#include "ais/rng.hpp"
#include "support/oracles.hpp"

using namespace ais;

namespace {
BitString bits(const std::string& s) { return BitString::from_string(s); }

std::string random_bits(std::size_t n, Rng& rng) {
    std::uniform_int_distribution<int> bit(0, 1);
    std::string s(n, '0');
    for (auto& c : s) c = static_cast<char>('0' + bit(rng));
    return s;
}
}  // namespace

TEST_CASE("clone budget grows with affinity and never hits zero") {
    CloneConfig cfg;
    CHECK(clone_count(0.0, cfg) == 1);
    CHECK(clone_count(1.0, cfg) == 10);
    CHECK(clone_count(0.3, cfg) <= clone_count(0.7, cfg));

    CloneConfig scaled;
    scaled.clone_factor = 2.5;
    CHECK(clone_count(1.0, scaled) == 25);
    CHECK(clone_count(0.02, scaled) == 1);  // rounds to zero, floored to one

    CHECK_THROWS_AS(clone_count(1.5, cfg), std::invalid_argument);
    CHECK_THROWS_AS(clone_count(-0.1, cfg), std::invalid_argument);
}

TEST_CASE("effective mutation probability follows the configured direction") {
    CloneConfig inverse;  // default: refine good matches
    CHECK(effective_mutation_probability(1.0, inverse) == 0.0);
    CHECK(effective_mutation_probability(0.0, inverse) == doctest::Approx(0.1));

    CloneConfig direct;
    direct.inverse_affinity_mutation = false;
    CHECK(effective_mutation_probability(0.0, direct) == 0.0);
    CHECK(effective_mutation_probability(1.0, direct) == doctest::Approx(0.1));
}

TEST_CASE("zero effective probability returns the input unchanged, exactly") {
    CloneConfig inverse;
    inverse.seed = 17;
    auto pattern = AttributeString{bits("1011001110")};
    auto out = hypermutate(pattern, 1.0, inverse);  // inverse mode, perfect match
    CHECK(std::get<BitString>(out) == std::get<BitString>(pattern));

    CloneConfig direct;
    direct.inverse_affinity_mutation = false;
    direct.seed = 17;
    auto out2 = hypermutate(pattern, 0.0, direct);
    CHECK(std::get<BitString>(out2) == std::get<BitString>(pattern));

    auto reals = AttributeString{RealVector{{1.5, -2.25, 0.0}}};
    auto out3 = hypermutate(reals, 1.0, inverse);
    CHECK(std::get<RealVector>(out3) == std::get<RealVector>(reals));
}

TEST_CASE("bit mutation flips close to the expected fraction") {
    CloneConfig cfg;  // rate 0.1, inverse mode; affinity 0 -> probability 0.1
    Rng rng = make_rng(derive_seed(2024, "clonal.fraction"));
    const std::size_t width = 1000;
    std::string parent = random_bits(width, rng);
    auto mutated = hypermutate(AttributeString{bits(parent)}, 0.0, cfg, rng);
    int flipped = static_cast<int>(width) -
                  oracle::naive_agreement_count(
                      parent, std::get<BitString>(mutated).to_string());
    double fraction = static_cast<double>(flipped) / static_cast<double>(width);
    CHECK(fraction >= 0.07);
    CHECK(fraction <= 0.13);
}

TEST_CASE("mutation disruption grows with the effective probability") {
    // Statistical: mean agreement with the parent decreases as the rate rises.
    const std::size_t width = 64;
    auto mean_distance = [&](double rate) {
        CloneConfig cfg;
        cfg.base_mutation_rate = rate;
        Rng rng = make_rng(derive_seed(5, "clonal.monotone"));
        double total = 0;
        for (int trial = 0; trial < 1000; ++trial) {
            std::string parent = random_bits(width, rng);
            auto mutated = hypermutate(AttributeString{bits(parent)}, 0.0, cfg, rng);
            total += width - oracle::naive_agreement_count(
                                 parent, std::get<BitString>(mutated).to_string());
        }
        return total / 1000.0;
    };
    double d1 = mean_distance(0.05), d2 = mean_distance(0.2), d3 = mean_distance(0.8);
    CHECK(d1 < d2);
    CHECK(d2 < d3);
}

TEST_CASE("real vectors keep their length and move by bounded noise") {
    CloneConfig cfg;
    cfg.real_noise_scale = 0.5;
    cfg.seed = 4;
    RealVector parent{{10.0, -3.0, 0.25}};
    auto mutated = hypermutate(AttributeString{parent}, 0.0, cfg);
    const auto& out = std::get<RealVector>(mutated);
    REQUIRE(out.size() == parent.size());
    bool changed = false;
    for (std::size_t i = 0; i < out.size(); ++i) changed = changed || out[i] != parent[i];
    CHECK(changed);
}

TEST_CASE("record mutation redraws fields from their domains") {
    RecordDomains domains;
    domains.field_values = {{"tcp", "udp"}, {"1.1.1.1", "2.2.2.2"}, {"25", "80"}};
    domains.include_wildcard = true;

    CloneConfig cfg;
    cfg.base_mutation_rate = 1.0;  // force every field to redraw
    cfg.inverse_affinity_mutation = false;
    cfg.domains = domains;
    cfg.seed = 9;

    Record parent{{std::optional<std::string>("tcp"), std::optional<std::string>("1.1.1.1"),
                   std::optional<std::string>("25")}};
    auto mutated = hypermutate(AttributeString{parent}, 1.0, cfg);
    const auto& out = std::get<Record>(mutated);
    REQUIRE(out.size() == 3);
    for (std::size_t f = 0; f < out.size(); ++f) {
        if (!out.field(f).has_value()) continue;  // wildcard is a legal draw
        bool in_domain = false;
        for (const auto& token : domains.field_values[f]) {
            in_domain = in_domain || token == *out.field(f);
        }
        CHECK(in_domain);
    }
}

TEST_CASE("record mutation without domains is a configuration error") {
    CloneConfig cfg;
    cfg.inverse_affinity_mutation = false;
    Record parent{{std::optional<std::string>("tcp")}};
    CHECK_THROWS_AS(hypermutate(AttributeString{parent}, 1.0, cfg), ConfigError);
}

TEST_CASE("expansion produces the budgeted clones with parent provenance") {
    Antibody parent{bits("0000"), 3.5, 42};
    Antigen antigen{bits("0000"), 1.0};

    CloneConfig cfg;  // affinity 1 (identity), inverse mode -> no mutation
    auto clones = clonal_expand(parent, antigen, cfg, Measure::hamming);
    REQUIRE(clones.size() == 10);
    for (const auto& clone : clones) {
        CHECK(clone.source_id == 42);
        CHECK(clone.concentration == 3.5);
        CHECK(std::get<BitString>(clone.pattern) == bits("0000"));
    }
}

TEST_CASE("zero-affinity expansion in direct mode yields one unmutated clone") {
    Antibody parent{bits("1111"), 1.0, 1};
    Antigen antigen{bits("0000"), 1.0};
    CloneConfig cfg;
    cfg.inverse_affinity_mutation = false;  // affinity 0 -> probability 0
    auto clones = clonal_expand(parent, antigen, cfg, Measure::hamming);
    REQUIRE(clones.size() == 1);
    CHECK(std::get<BitString>(clones[0].pattern) == bits("1111"));
}

TEST_CASE("expansion is reproducible for a fixed seed") {
    Antibody parent{bits("10110100"), 2.0, 5};
    Antigen antigen{bits("10010110"), 1.0};
    CloneConfig cfg;
    cfg.seed = 31;
    auto first = clonal_expand(parent, antigen, cfg, Measure::hamming);
    auto second = clonal_expand(parent, antigen, cfg, Measure::hamming);
    REQUIRE(first.size() == second.size());
    for (std::size_t i = 0; i < first.size(); ++i) {
        CHECK(std::get<BitString>(first[i].pattern) ==
              std::get<BitString>(second[i].pattern));
    }
}

TEST_CASE("clone configuration bounds are validated") {
    CloneConfig cfg;
    cfg.base_mutation_rate = 0.0;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
    cfg.base_mutation_rate = 1.5;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
    cfg = CloneConfig{};
    cfg.clone_factor = 0.0;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
}
