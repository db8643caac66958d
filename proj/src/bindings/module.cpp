// Python bindings for the toolkit's main operations. The surface is
// deliberately functional: patterns cross the boundary as plain strings,
// lists and tuples, so the module is usable without mirroring the C++ type
// system.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "ais/affinity.hpp"
#include "ais/clonal.hpp"
#include "ais/dynamics.hpp"
#include "ais/encoding.hpp"
#include "ais/errors.hpp"
#include "ais/negsel.hpp"
#include "ais/recommender.hpp"

namespace py = pybind11;

namespace {

ais::UserProfile profile_from_votes(std::int64_t user_id,
                                    const std::vector<std::pair<std::int64_t, int>>& votes) {
    std::vector<ais::Vote> converted;
    converted.reserve(votes.size());
    for (auto [item, score] : votes) converted.push_back({item, score});
    return ais::UserProfile(user_id, std::move(converted));
}

ais::NegSelConfig bit_negsel_config(int r, int target, int attempts, std::uint64_t seed,
                                    int activation_threshold, bool mutate,
                                    int pattern_length) {
    ais::NegSelConfig config;
    config.rule = ais::MatchRule::r_contiguous;
    config.r = r;
    config.target_detector_count = target;
    config.max_generation_attempts = attempts;
    config.activation_threshold = activation_threshold;
    config.mutate_instead_of_discard = mutate;
    config.pattern_length = pattern_length;
    config.seed = seed;
    return config;
}

std::vector<ais::AttributeString> bit_patterns(const std::vector<std::string>& strings) {
    std::vector<ais::AttributeString> out;
    out.reserve(strings.size());
    for (const auto& s : strings) out.emplace_back(ais::BitString::from_string(s));
    return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Artificial immune systems toolkit: affinity measures, immune-network "
              "dynamics, collaborative filtering, negative selection.";

    py::register_exception<ais::ParseError>(m, "ParseError");
    py::register_exception<ais::ConfigError>(m, "ConfigError");
    py::register_exception<ais::GenerationError>(m, "GenerationError");

    // --- affinity measures ---

    m.def(
        "hamming_score",
        [](const std::string& a, const std::string& b) {
            return ais::hamming_score(ais::BitString::from_string(a),
                                      ais::BitString::from_string(b));
        },
        py::arg("a"), py::arg("b"),
        "Number of positions where two equal-length bit strings agree.");

    m.def(
        "longest_contiguous",
        [](const std::string& a, const std::string& b) {
            return ais::longest_contiguous(ais::BitString::from_string(a),
                                           ais::BitString::from_string(b));
        },
        py::arg("a"), py::arg("b"),
        "Length of the longest run of consecutive agreeing positions.");

    m.def(
        "euclidean_distance",
        [](const std::vector<double>& a, const std::vector<double>& b) {
            return ais::euclidean_distance(ais::RealVector(a), ais::RealVector(b));
        },
        py::arg("a"), py::arg("b"));

    m.def(
        "pearson",
        [](std::int64_t user_a, const std::vector<std::pair<std::int64_t, int>>& votes_a,
           std::int64_t user_b, const std::vector<std::pair<std::int64_t, int>>& votes_b,
           int overlap_penalty_threshold, bool hard_zero) {
            ais::AffinityConfig config;
            config.overlap_penalty_threshold = overlap_penalty_threshold;
            config.penalty_mode = hard_zero ? ais::PenaltyMode::hard_zero
                                            : ais::PenaltyMode::linear_scale;
            return ais::pearson(profile_from_votes(user_a, votes_a),
                                profile_from_votes(user_b, votes_b), config);
        },
        py::arg("user_a"), py::arg("votes_a"), py::arg("user_b"), py::arg("votes_b"),
        py::arg("overlap_penalty_threshold") = 0, py::arg("hard_zero") = false,
        "Correlation of two users' votes ([(item, score), ...]) over co-voted items, "
        "with deviations from each user's full-profile mean.");

    // --- clonal expansion ---

    m.def(
        "clone_count",
        [](double affinity, double clone_factor) {
            ais::CloneConfig config;
            config.clone_factor = clone_factor;
            return ais::clone_count(affinity, config);
        },
        py::arg("affinity"), py::arg("clone_factor") = 1.0);

    m.def(
        "hypermutate_bits",
        [](const std::string& pattern, double affinity, double base_mutation_rate,
           bool inverse, std::uint64_t seed) {
            ais::CloneConfig config;
            config.base_mutation_rate = base_mutation_rate;
            config.inverse_affinity_mutation = inverse;
            config.seed = seed;
            auto mutated =
                ais::hypermutate(ais::BitString::from_string(pattern), affinity, config);
            return std::get<ais::BitString>(mutated).to_string();
        },
        py::arg("pattern"), py::arg("affinity"), py::arg("base_mutation_rate") = 0.1,
        py::arg("inverse") = true, py::arg("seed") = 0);

    // --- concentration dynamics ---

    m.def(
        "simulate",
        [](const std::vector<double>& antibody_concentrations,
           const std::vector<double>& antigen_concentrations,
           const std::vector<std::vector<double>>& antigen_matching,
           const std::vector<std::vector<double>>& antibody_matching, int steps,
           bool idiotypic, double stimulation_rate, double suppression_rate,
           double death_rate, double dt, double saturation_cap) {
            ais::NetworkConfig config;
            config.stimulation_rate = stimulation_rate;
            config.suppression_rate = suppression_rate;
            config.death_rate = death_rate;
            config.dt = dt;
            config.saturation_cap = saturation_cap;
            config.pool_capacity = std::max(
                config.pool_capacity, static_cast<int>(antibody_concentrations.size()));
            auto net = ais::ImmuneNetwork::from_matching(
                config, antibody_concentrations, antigen_concentrations, antigen_matching,
                antibody_matching);
            auto mode = idiotypic ? ais::StepMode::idiotypic : ais::StepMode::plain;

            std::vector<std::vector<double>> trajectory;
            auto snapshot = [&net, &trajectory] {
                std::vector<double> row;
                row.reserve(net.size());
                for (const auto& ab : net.antibodies()) row.push_back(ab.concentration);
                trajectory.push_back(std::move(row));
            };
            snapshot();
            for (int i = 0; i < steps; ++i) {
                net.step(mode);
                snapshot();
            }
            return trajectory;
        },
        py::arg("antibody_concentrations"), py::arg("antigen_concentrations"),
        py::arg("antigen_matching"), py::arg("antibody_matching"), py::arg("steps"),
        py::arg("idiotypic") = false, py::arg("stimulation_rate") = 0.2,
        py::arg("suppression_rate") = 0.02, py::arg("death_rate") = 0.1,
        py::arg("dt") = 1.0, py::arg("saturation_cap") = 1000.0,
        "Concentration trajectory (one row per step, step 0 included) of an "
        "explicit antibody/antigen system.");

    // --- negative selection ---

    m.def(
        "generate_detectors",
        [](const std::vector<std::string>& self_set, int r, int target_detector_count,
           int max_generation_attempts, std::uint64_t seed, int activation_threshold,
           bool mutate_instead_of_discard, int pattern_length) {
            auto config =
                bit_negsel_config(r, target_detector_count, max_generation_attempts, seed,
                                  activation_threshold, mutate_instead_of_discard,
                                  pattern_length);
            auto result = ais::generate_detectors(bit_patterns(self_set), config);
            std::vector<std::string> patterns;
            patterns.reserve(result.detectors.size());
            for (const auto& d : result.detectors) {
                patterns.push_back(std::get<ais::BitString>(d.pattern).to_string());
            }
            return py::make_tuple(patterns, result.draws_used);
        },
        py::arg("self_set"), py::arg("r"), py::arg("target_detector_count") = 10,
        py::arg("max_generation_attempts") = 1000, py::arg("seed") = 0,
        py::arg("activation_threshold") = 1, py::arg("mutate_instead_of_discard") = false,
        py::arg("pattern_length") = 0,
        "Censored r-contiguous bit detectors; returns (patterns, draws_used).");

    m.def(
        "monitor_bits",
        [](const std::vector<std::string>& detectors, const std::vector<std::string>& traffic,
           int r, int activation_threshold) {
            ais::NegSelConfig config;
            config.rule = ais::MatchRule::r_contiguous;
            config.r = r;
            config.activation_threshold = activation_threshold;
            std::vector<ais::Detector> set;
            set.reserve(detectors.size());
            for (const auto& pattern : detectors) {
                ais::Detector d = ais::make_immature(ais::BitString::from_string(pattern));
                d.state = ais::DetectorState::mature;
                d.activation_threshold = activation_threshold;
                set.push_back(std::move(d));
            }
            auto result = ais::monitor(std::move(set), bit_patterns(traffic), config);
            std::vector<std::pair<std::size_t, std::size_t>> alerts;
            alerts.reserve(result.alerts.size());
            for (const auto& alert : result.alerts) {
                alerts.emplace_back(alert.traffic_index, alert.detector_index);
            }
            return alerts;
        },
        py::arg("detectors"), py::arg("traffic"), py::arg("r"),
        py::arg("activation_threshold") = 1,
        "Alerts as (traffic_index, detector_index) pairs, in traffic order.");

    // --- recommender ---

    m.def(
        "recommend",
        [](const std::string& ratings_text, std::int64_t target_user, bool idiotypic,
           int top_n, int min_support, std::uint64_t seed) {
            ais::RecommenderConfig config;
            config.idiotypic_enabled = idiotypic;
            config.top_n = top_n;
            config.min_support = min_support;
            config.network.seed = ais::derive_seed(seed, "dynamics");

            auto profiles = ais::parse_ratings(ratings_text, config.scale);
            const ais::UserProfile* target = nullptr;
            std::vector<ais::UserProfile> candidates;
            for (const auto& profile : profiles) {
                if (profile.user_id() == target_user) {
                    target = &profile;
                } else {
                    candidates.push_back(profile);
                }
            }
            if (!target) {
                throw py::value_error("user " + std::to_string(target_user) +
                                      " not found in ratings");
            }
            auto nb = ais::build_neighbourhood(*target, candidates, config);
            auto predictions = ais::predict(nb, *target, config);
            auto top = ais::recommend_top_n(std::move(predictions), config.top_n);
            std::vector<std::tuple<std::int64_t, double, int>> out;
            out.reserve(top.size());
            for (const auto& p : top) {
                out.emplace_back(p.item_id, p.predicted_score, p.support);
            }
            return out;
        },
        py::arg("ratings_text"), py::arg("target_user"), py::arg("idiotypic") = true,
        py::arg("top_n") = 10, py::arg("min_support") = 1, py::arg("seed") = 0,
        "Top-n (item_id, predicted_score, support) for a target user, from "
        "tab-separated ratings text.");
}
