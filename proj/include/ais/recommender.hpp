#pragma once

// Immune-network collaborative filtering. The target user is encoded as the
// sole antigen and other users join a bounded antibody pool, stimulated in
// proportion to their rating correlation with the target; whenever the pool
// fills, the dynamics run until weak members drop out or the pool size
// stabilises. The surviving neighbourhood votes, weighted by concentration,
// to predict the target's unseen ratings.

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "ais/affinity.hpp"
#include "ais/dynamics.hpp"
#include "ais/encoding.hpp"

namespace ais {

struct Prediction {
    std::int64_t item_id = 0;
    double predicted_score = 0.0;
    int support = 0;  // neighbours who voted on the item

    friend bool operator==(const Prediction&, const Prediction&) = default;
};

struct RecommenderConfig {
    NetworkConfig network;
    AffinityConfig affinity;  // overlap penalty applied to every profile correlation
    RatingScale scale;
    bool idiotypic_enabled = true;
    int min_support = 1;
    int top_n = 10;

    StepMode step_mode() const noexcept {
        return idiotypic_enabled ? StepMode::idiotypic : StepMode::plain;
    }
    void validate() const;  // throws ConfigError
};

// A stabilised pool plus the user profiles behind its antibodies
// (antibody source_id == user_id) and how the run ended.
struct Neighbourhood {
    ImmuneNetwork network;
    std::map<std::int64_t, UserProfile> profiles;
    StopReason stop_reason = StopReason::stabilized;
};

// The pool-building loop: candidates are added in input order; while the
// pool is full the dynamics iterate until it stabilises (done adding) or a
// drop-out frees space; once candidates are exhausted the network settles to
// stability. Throws std::invalid_argument if the target appears among the
// candidates. The observer (if any) runs after every dynamics pass.
Neighbourhood build_neighbourhood(const UserProfile& target,
                                  std::span<const UserProfile> candidates,
                                  const RecommenderConfig& config,
                                  const NetworkObserver& observer = {});

// Concentration-weighted mean-offset prediction over the surviving pool, for
// every item with at least min_support neighbour votes that the target has
// not voted on:
//   predicted = target_mean + sum_i x_i * (v_i - mean_i) / sum_i x_i
// clamped to the rating scale. Sorted by item_id. An empty pool (or an
// empty target profile) yields no predictions.
std::vector<Prediction> predict(const Neighbourhood& neighbourhood,
                                const UserProfile& target,
                                const RecommenderConfig& config);

// Top n by predicted score; ties broken by higher support, then lower
// item_id, making the order total.
std::vector<Prediction> recommend_top_n(std::vector<Prediction> predictions, int n);

struct EvalResult {
    // Mean absolute error over the hidden votes that were predictable;
    // absent when none were.
    std::optional<double> mae;
    // Fraction of hidden votes that received a prediction.
    double coverage = 0.0;
};

// Leave-out evaluation: per user, hide a seeded random fraction of votes
// (at least one), rebuild the neighbourhood from everyone else's full
// profiles, and score the predictions against the hidden votes. All methods
// below share the same per-user splits for a given seed, so their errors are
// directly comparable. Requires >= 2 users and holdout_fraction in (0, 1).
EvalResult evaluate_mae(std::span<const UserProfile> dataset, double holdout_fraction,
                        const RecommenderConfig& config, std::uint64_t seed);

// Baseline: predict every hidden vote with the mean of all visible votes.
EvalResult evaluate_global_mean(std::span<const UserProfile> dataset,
                                double holdout_fraction, const RecommenderConfig& config,
                                std::uint64_t seed);

// Baseline: correlation-weighted mean-offset prediction from the k most
// positively correlated users (correlation weights instead of
// concentrations; no pool dynamics).
EvalResult evaluate_knn(std::span<const UserProfile> dataset, double holdout_fraction,
                        const RecommenderConfig& config, int k, std::uint64_t seed);

// The shared split: which of the user's votes a given evaluation seed hides.
// Hides max(1, round(fraction * votes)) votes.
std::pair<UserProfile, std::vector<Vote>> split_for_holdout(const UserProfile& user,
                                                            double holdout_fraction,
                                                            std::uint64_t seed);

}  // namespace ais
