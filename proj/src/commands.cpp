#include "ais/commands.hpp"

#include <algorithm>
#include <filesystem>
#include <iostream>
#include <stdexcept>

#include "ais/errors.hpp"
#include "ais/report.hpp"

namespace ais::cli {

namespace {

namespace fs = std::filesystem;

std::string output_path(const RunConfig& config, const std::string& name) {
    fs::create_directories(config.out_dir);
    return (fs::path(config.out_dir) / name).string();
}

// Uniform error-to-exit-code mapping for every subcommand body. The context
// string is read at throw time, so a body may repoint it at whichever input
// it is currently parsing.
template <typename Body>
int run_guarded(const std::string& input_context, Body&& body) {
    try {
        return body();
    } catch (const ParseError& e) {
        std::cerr << input_context << ": " << e.what() << '\n';
        return kExitDataError;
    } catch (const ConfigError& e) {
        std::cerr << "configuration error: " << e.what() << '\n';
        return kExitConfigError;
    } catch (const GenerationError& e) {
        std::cerr << e.what() << '\n';
        return kExitAlgorithmError;
    } catch (const std::invalid_argument& e) {
        std::cerr << input_context << ": " << e.what() << '\n';
        return kExitDataError;
    } catch (const std::runtime_error& e) {
        // File IO problems land here; the message already names the path.
        std::cerr << e.what() << '\n';
        return kExitDataError;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << '\n';
        return kExitAlgorithmError;
    }
}

std::vector<std::vector<std::string>> trajectory_rows(const ImmuneNetwork& net) {
    std::vector<std::vector<std::string>> rows;
    for (const auto& antibody : net.antibodies()) {
        rows.push_back({std::to_string(net.iteration_count()),
                        std::to_string(antibody.source_id),
                        format_double(antibody.concentration)});
    }
    return rows;
}

const std::vector<std::string> kTrajectoryHeader = {"iteration", "source_id",
                                                    "concentration"};

}  // namespace

// ---------------------------------------------------------------------------
// recommend
// ---------------------------------------------------------------------------

int cmd_recommend(const RunConfig& config, const std::string& ratings_path,
                  std::int64_t target_user) {
    return run_guarded(ratings_path, [&]() -> int {
        auto profiles = parse_ratings(read_text_file(ratings_path),
                                      config.recommender.scale);

        const UserProfile* target = nullptr;
        std::vector<UserProfile> candidates;
        candidates.reserve(profiles.size());
        for (const auto& profile : profiles) {
            if (profile.user_id() == target_user) {
                target = &profile;
            } else {
                candidates.push_back(profile);
            }
        }
        if (!target) {
            std::cerr << "user " << target_user << " not found in " << ratings_path
                      << '\n';
            return kExitDataError;
        }

        std::vector<std::vector<std::string>> trajectory;
        NetworkObserver observer;
        if (config.trajectory) {
            observer = [&trajectory](const ImmuneNetwork& net) {
                auto rows = trajectory_rows(net);
                trajectory.insert(trajectory.end(), rows.begin(), rows.end());
            };
        }

        Neighbourhood nb =
            build_neighbourhood(*target, candidates, config.recommender, observer);
        auto predictions = predict(nb, *target, config.recommender);
        auto top = recommend_top_n(std::move(predictions), config.recommender.top_n);

        std::vector<std::vector<std::string>> prediction_rows;
        for (const auto& p : top) {
            prediction_rows.push_back({std::to_string(p.item_id),
                                       format_double(p.predicted_score),
                                       std::to_string(p.support)});
        }
        const std::vector<std::string> prediction_header = {"item_id", "predicted_score",
                                                            "support"};
        save_text_file(output_path(config, "predictions.csv"),
                       render_csv(prediction_header, prediction_rows));

        const std::vector<std::string> summary_header = {"pool_size", "iterations",
                                                         "stop_reason"};
        std::vector<std::vector<std::string>> summary_rows = {
            {std::to_string(nb.network.size()),
             std::to_string(nb.network.iteration_count()),
             std::string(stop_reason_name(nb.stop_reason))}};
        save_text_file(output_path(config, "summary.csv"),
                       render_csv(summary_header, summary_rows));

        if (config.trajectory) {
            save_text_file(output_path(config, "trajectory.csv"),
                           render_csv(kTrajectoryHeader, trajectory));
        }

        std::cout << "recommend: " << top.size() << " prediction(s) for user "
                  << target_user << " from a pool of " << nb.network.size() << " ("
                  << nb.network.iteration_count() << " iterations, "
                  << stop_reason_name(nb.stop_reason) << ")\n";
        return kExitOk;
    });
}

// ---------------------------------------------------------------------------
// detect
// ---------------------------------------------------------------------------

namespace {

// Loads self/traffic patterns for the configured match rule. Record inputs
// must be fully concrete: wildcards belong to detector patterns only.
std::vector<AttributeString> load_patterns(const std::string& path, MatchRule rule) {
    std::string text = read_text_file(path);
    std::vector<AttributeString> out;
    if (rule == MatchRule::r_contiguous) {
        for (auto& bits : parse_bitstrings(text)) out.emplace_back(std::move(bits));
        return out;
    }
    auto records = parse_connection_log(text);
    for (std::size_t i = 0; i < records.size(); ++i) {
        Record record = records[i].to_record();
        for (std::size_t f = 0; f < record.size(); ++f) {
            if (!record.field(f)) {
                throw std::invalid_argument(
                    "record " + std::to_string(i + 1) + " in " + path +
                    " contains a wildcard; self and traffic records must be concrete");
            }
        }
        out.emplace_back(std::move(record));
    }
    return out;
}

}  // namespace

int cmd_detect(const RunConfig& config, const std::string& self_path,
               const std::string& traffic_path) {
    std::string context = self_path;
    return run_guarded(context, [&]() -> int {
        NegSelConfig negsel = config.negsel;

        auto self_set = load_patterns(self_path, negsel.rule);
        context = traffic_path;
        auto traffic = load_patterns(traffic_path, negsel.rule);
        context = "detect";
        if (negsel.rule == MatchRule::r_contiguous && !self_set.empty() &&
            !traffic.empty() &&
            pattern_length(self_set.front()) != pattern_length(traffic.front())) {
            std::cerr << "traffic bit width " << pattern_length(traffic.front())
                      << " does not match self bit width "
                      << pattern_length(self_set.front()) << '\n';
            return kExitDataError;
        }
        if (negsel.rule == MatchRule::record) {
            // Detector fields are drawn from the tokens seen in the self
            // set, plus the wildcard.
            std::vector<Record> records;
            records.reserve(self_set.size());
            for (const auto& p : self_set) records.push_back(std::get<Record>(p));
            negsel.domains = RecordDomains::from_records(records);
        }

        GenerationResult generation = generate_detectors(self_set, negsel);
        MonitorResult monitored =
            monitor(std::move(generation.detectors), traffic, negsel);

        int promoted = 0;
        if (config.auto_confirm) {
            for (auto& detector : monitored.detectors) {
                if (detector.match_count >= detector.activation_threshold) {
                    detector = *promote(std::move(detector), true);
                    ++promoted;
                }
            }
        }

        const std::vector<std::string> alert_header = {"traffic_index", "detector_id",
                                                       "detector_pattern"};
        std::vector<std::vector<std::string>> alert_rows;
        for (const auto& alert : monitored.alerts) {
            alert_rows.push_back(
                {std::to_string(alert.traffic_index), std::to_string(alert.detector_index),
                 pattern_to_string(monitored.detectors[alert.detector_index].pattern)});
        }
        save_text_file(output_path(config, "alerts.csv"),
                       render_csv(alert_header, alert_rows));

        const std::vector<std::string> stats_header = {"detectors", "draws_used", "alerts",
                                                       "promoted"};
        std::vector<std::vector<std::string>> stats_rows = {
            {std::to_string(monitored.detectors.size()),
             std::to_string(generation.draws_used), std::to_string(monitored.alerts.size()),
             std::to_string(promoted)}};
        save_text_file(output_path(config, "stats.csv"),
                       render_csv(stats_header, stats_rows));

        std::cout << "detect: " << monitored.detectors.size() << " detector(s) ("
                  << generation.draws_used << " draws), " << monitored.alerts.size()
                  << " alert(s) on " << traffic.size() << " traffic item(s)";
        if (config.auto_confirm) std::cout << ", " << promoted << " promoted";
        std::cout << '\n';
        return kExitOk;
    });
}

// ---------------------------------------------------------------------------
// evaluate
// ---------------------------------------------------------------------------

int cmd_evaluate(const RunConfig& config, const std::string& ratings_path) {
    return run_guarded(ratings_path, [&]() -> int {
        auto profiles = parse_ratings(read_text_file(ratings_path),
                                      config.recommender.scale);
        if (profiles.size() < 2) {
            std::cerr << ratings_path << ": evaluation requires at least 2 users, found "
                      << profiles.size() << '\n';
            return kExitDataError;
        }

        const std::vector<std::string> header = {"seed", "method", "mae", "coverage"};
        std::vector<std::vector<std::string>> rows;
        auto add_row = [&rows](std::uint64_t seed, const char* method,
                               const EvalResult& result) {
            rows.push_back({std::to_string(seed), method,
                            result.mae ? format_double(*result.mae) : std::string{},
                            format_double(result.coverage)});
        };

        for (std::uint64_t seed : config.evaluate.seeds) {
            add_row(seed, "ais",
                    evaluate_mae(profiles, config.evaluate.holdout_fraction,
                                 config.recommender, seed));
            add_row(seed, "global_mean",
                    evaluate_global_mean(profiles, config.evaluate.holdout_fraction,
                                         config.recommender, seed));
            add_row(seed, "knn",
                    evaluate_knn(profiles, config.evaluate.holdout_fraction,
                                 config.recommender, config.evaluate.knn_k, seed));
        }
        save_text_file(output_path(config, "evaluation.csv"), render_csv(header, rows));

        std::cout << "evaluate: " << profiles.size() << " user(s), "
                  << config.evaluate.seeds.size() << " seed(s), 3 method(s)\n";
        return kExitOk;
    });
}

// ---------------------------------------------------------------------------
// simulate
// ---------------------------------------------------------------------------

int cmd_simulate(const RunConfig& config) {
    return run_guarded("simulate", [&]() -> int {
        const SimulateConfig& sim = config.simulate;
        if (sim.antibody_concentrations.empty()) {
            throw ConfigError(
                "simulate.antibody_concentrations must list at least one antibody");
        }
        if (sim.mode == StepMode::idiotypic && sim.antigen_concentrations.size() != 1) {
            throw ConfigError("idiotypic mode requires exactly one antigen (" +
                              std::to_string(sim.antigen_concentrations.size()) +
                              " configured)");
        }
        NetworkConfig net_config = config.recommender.network;
        net_config.pool_capacity = std::max(
            net_config.pool_capacity, static_cast<int>(sim.antibody_concentrations.size()));

        ImmuneNetwork net = ImmuneNetwork::from_matching(
            net_config, sim.antibody_concentrations, sim.antigen_concentrations,
            sim.antigen_matching, sim.antibody_matching);

        std::vector<std::vector<std::string>> rows = trajectory_rows(net);
        for (int step = 0; step < sim.steps; ++step) {
            net.step(sim.mode);
            auto step_rows = trajectory_rows(net);
            rows.insert(rows.end(), step_rows.begin(), step_rows.end());
        }
        save_text_file(output_path(config, "trajectory.csv"),
                       render_csv(kTrajectoryHeader, rows));

        std::cout << "simulate: " << sim.antibody_concentrations.size()
                  << " antibody(ies), " << sim.steps << " step(s)\n";
        return kExitOk;
    });
}

}  // namespace ais::cli
