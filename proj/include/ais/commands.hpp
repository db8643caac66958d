#pragma once

// The four batch subcommands. Each reads its inputs, runs the algorithms,
// writes CSV reports into the configured output directory, prints a short
// summary to stdout, and returns a process exit code:
//   0  success
//   2  data error (unreadable/malformed input, unknown user, too few users)
//   3  configuration error (unknown key, invalid or inconsistent value)
//   4  algorithmic failure (e.g. detector generation exhausted its budget)

#include <cstdint>
#include <string>

#include "ais/run_config.hpp"

namespace ais::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitDataError = 2;
inline constexpr int kExitConfigError = 3;
inline constexpr int kExitAlgorithmError = 4;

// Builds the target user's neighbourhood from a ratings file and writes
// predictions.csv (top-n recommendations) and summary.csv; with
// config.trajectory also trajectory.csv.
int cmd_recommend(const RunConfig& config, const std::string& ratings_path,
                  std::int64_t target_user);

// Generates censored detectors from the self file, monitors the traffic
// file, and writes alerts.csv and stats.csv. With config.auto_confirm every
// activated detector is promoted to memory.
int cmd_detect(const RunConfig& config, const std::string& self_path,
               const std::string& traffic_path);

// Holdout evaluation of the recommender against the global-mean and k-NN
// baselines over config.evaluate.seeds; writes evaluation.csv (one row per
// seed per method).
int cmd_evaluate(const RunConfig& config, const std::string& ratings_path);

// Runs the configured antibody/antigen system for simulate.steps steps and
// writes trajectory.csv (per-iteration concentrations, including step 0).
int cmd_simulate(const RunConfig& config);

}  // namespace ais::cli
