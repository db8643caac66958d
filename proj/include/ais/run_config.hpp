#pragma once

// Merged configuration for the batch CLI. Defaults, then an optional flat
// key-value config file ("key = value" lines, '#' comments), then
// --key=value flag overrides; precedence flags > file > defaults. Unknown
// keys and out-of-range values raise ConfigError naming the key. The single
// global seed fans out to per-module streams in finalize(), so every
// subcommand's randomness is independent of the others.

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "ais/clonal.hpp"
#include "ais/dynamics.hpp"
#include "ais/negsel.hpp"
#include "ais/recommender.hpp"

namespace ais::cli {

struct EvaluateConfig {
    double holdout_fraction = 0.2;
    std::vector<std::uint64_t> seeds = {1, 2, 3};
    int knn_k = 20;
};

struct SimulateConfig {
    StepMode mode = StepMode::plain;
    int steps = 100;
    std::vector<double> antibody_concentrations;
    std::vector<double> antigen_concentrations;
    // Row-major matrices: rows separated by ';', entries by ','.
    std::vector<std::vector<double>> antigen_matching;
    std::vector<std::vector<double>> antibody_matching;
};

struct RunConfig {
    std::uint64_t seed = 0;
    std::string out_dir = ".";
    bool trajectory = false;     // recommend: also dump per-iteration concentrations
    bool auto_confirm = false;   // detect: promote every activated detector
    RecommenderConfig recommender;
    NegSelConfig negsel;
    CloneConfig clonal;
    EvaluateConfig evaluate;
    SimulateConfig simulate;

    // Applies one "key" = "value" assignment; throws ConfigError for unknown
    // keys or invalid values.
    void apply(std::string_view key, std::string_view value);

    // Applies every assignment in a config file / its text.
    void apply_file(const std::string& path);
    void apply_text(std::string_view text);

    // Derives per-module seeds from the global one and validates every
    // embedded config. Call once, after all sources are applied.
    void finalize();
};

// Shared lenient boolean syntax: true/false, on/off, yes/no, 1/0.
bool parse_bool_value(std::string_view text, std::string_view key);

}  // namespace ais::cli
