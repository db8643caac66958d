#include "ais/recommender.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "ais/errors.hpp"
#include "ais/rng.hpp"

namespace ais {

namespace {

// The target antigen's concentration (y). With stimulation k1 and death k3,
// a neighbour whose correlation m satisfies k1 * m * y > k3 is sustained;
// y = 1 keeps that boundary at m = k3 / k1.
constexpr double kAntigenConcentration = 1.0;

}  // namespace

void RecommenderConfig::validate() const {
    network.validate();
    if (affinity.overlap_penalty_threshold < 0) {
        throw ConfigError("overlap_penalty_threshold must be >= 0");
    }
    if (scale.min_score >= scale.max_score) {
        throw ConfigError("rating scale must have min_score < max_score");
    }
    if (min_support < 1) throw ConfigError("min_support must be at least 1");
    if (top_n < 1) throw ConfigError("top_n must be at least 1");
}

Neighbourhood build_neighbourhood(const UserProfile& target,
                                  std::span<const UserProfile> candidates,
                                  const RecommenderConfig& config,
                                  const NetworkObserver& observer) {
    config.validate();
    for (const auto& candidate : candidates) {
        if (candidate.user_id() == target.user_id()) {
            throw std::invalid_argument("target user " + std::to_string(target.user_id()) +
                                        " must not appear among the candidates");
        }
    }

    ImmuneNetwork net = ImmuneNetwork::with_explicit_matching(config.network);
    net.add_antigen(Antigen{RealVector{}, kAntigenConcentration});
    const StepMode mode = config.step_mode();

    std::map<std::int64_t, UserProfile> profiles;

    auto settle_while_full = [&] {
        while (net.is_full() && !net.is_stable() &&
               net.iteration_count() < config.network.max_iterations) {
            net.step(mode);
            net.drop_out();
            if (observer) observer(net);
        }
    };

    for (const auto& candidate : candidates) {
        if (net.is_full()) {
            settle_while_full();
            // A full pool that stabilised (or hit the iteration bound)
            // accepts no more candidates.
            if (net.is_full()) break;
        }
        std::vector<double> antigen_row = {pearson(candidate, target, config.affinity)};
        std::vector<double> pool_row;
        pool_row.reserve(net.size());
        for (const auto& member : net.antibodies()) {
            pool_row.push_back(
                pearson(candidate, profiles.at(member.source_id), config.affinity));
        }
        net.add_antibody(Antibody{RealVector{}, 0.0, candidate.user_id()}, antigen_row,
                         pool_row);
        profiles.insert_or_assign(candidate.user_id(), candidate);
    }

    StopReason reason = net.run_until_stable(mode, observer);
    return Neighbourhood{std::move(net), std::move(profiles), reason};
}

std::vector<Prediction> predict(const Neighbourhood& neighbourhood,
                                const UserProfile& target,
                                const RecommenderConfig& config) {
    const auto& pool = neighbourhood.network.antibodies();
    if (pool.empty() || target.empty()) return {};

    const double target_mean = target.mean_score();

    // Candidate items: everything any surviving neighbour voted on that the
    // target has not.
    std::map<std::int64_t, std::pair<double, double>> accumulators;  // item -> (num, den)
    std::map<std::int64_t, int> supports;
    for (const auto& antibody : pool) {
        const UserProfile& profile = neighbourhood.profiles.at(antibody.source_id);
        if (profile.empty()) continue;
        const double neighbour_mean = profile.mean_score();
        for (const auto& vote : profile.votes()) {
            if (target.has_vote(vote.item_id)) continue;
            auto& [num, den] = accumulators[vote.item_id];
            num += antibody.concentration * (vote.score - neighbour_mean);
            den += antibody.concentration;
            ++supports[vote.item_id];
        }
    }

    std::vector<Prediction> predictions;
    for (const auto& [item, acc] : accumulators) {
        const auto& [num, den] = acc;
        int support = supports[item];
        if (support < config.min_support) continue;
        if (den <= 0.0) continue;  // all supporting neighbours at zero weight
        double score = std::clamp(target_mean + num / den,
                                  static_cast<double>(config.scale.min_score),
                                  static_cast<double>(config.scale.max_score));
        predictions.push_back(Prediction{item, score, support});
    }
    return predictions;  // std::map iteration: already sorted by item_id
}

std::vector<Prediction> recommend_top_n(std::vector<Prediction> predictions, int n) {
    std::sort(predictions.begin(), predictions.end(),
              [](const Prediction& a, const Prediction& b) {
                  if (a.predicted_score != b.predicted_score) {
                      return a.predicted_score > b.predicted_score;
                  }
                  if (a.support != b.support) return a.support > b.support;
                  return a.item_id < b.item_id;
              });
    if (n < static_cast<int>(predictions.size())) {
        predictions.resize(n < 0 ? 0 : static_cast<std::size_t>(n));
    }
    return predictions;
}

// ---------------------------------------------------------------------------
// Evaluation
// ---------------------------------------------------------------------------

std::pair<UserProfile, std::vector<Vote>> split_for_holdout(const UserProfile& user,
                                                            double holdout_fraction,
                                                            std::uint64_t seed) {
    const auto& votes = user.votes();
    auto hidden_count = static_cast<std::size_t>(std::max<long long>(
        1, std::llround(holdout_fraction * static_cast<double>(votes.size()))));
    hidden_count = std::min(hidden_count, votes.size());

    std::vector<std::size_t> order(votes.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    Rng rng = make_rng(derive_seed(seed, "evaluate.holdout",
                                   static_cast<std::uint64_t>(user.user_id())));
    std::shuffle(order.begin(), order.end(), rng);

    std::vector<Vote> hidden, remaining;
    for (std::size_t i = 0; i < order.size(); ++i) {
        (i < hidden_count ? hidden : remaining).push_back(votes[order[i]]);
    }
    std::sort(hidden.begin(), hidden.end(),
              [](const Vote& a, const Vote& b) { return a.item_id < b.item_id; });
    return {UserProfile(user.user_id(), std::move(remaining)), std::move(hidden)};
}

namespace {

void require_evaluable(std::span<const UserProfile> dataset, double holdout_fraction) {
    if (dataset.size() < 2) {
        throw std::invalid_argument("evaluation requires at least 2 users");
    }
    if (!(holdout_fraction > 0.0 && holdout_fraction < 1.0)) {
        throw std::invalid_argument("holdout_fraction must lie in (0, 1)");
    }
}

struct ErrorTally {
    double abs_error_sum = 0.0;
    std::size_t predicted = 0;
    std::size_t hidden_total = 0;

    void score(double predicted_value, int actual) {
        abs_error_sum += std::abs(predicted_value - actual);
        ++predicted;
    }
    EvalResult result() const {
        EvalResult out;
        if (hidden_total > 0) {
            out.coverage =
                static_cast<double>(predicted) / static_cast<double>(hidden_total);
        }
        if (predicted > 0) out.mae = abs_error_sum / static_cast<double>(predicted);
        return out;
    }
};

}  // namespace

EvalResult evaluate_mae(std::span<const UserProfile> dataset, double holdout_fraction,
                        const RecommenderConfig& config, std::uint64_t seed) {
    require_evaluable(dataset, holdout_fraction);
    config.validate();

    ErrorTally tally;
    std::vector<UserProfile> candidates;
    candidates.reserve(dataset.size() - 1);
    for (std::size_t u = 0; u < dataset.size(); ++u) {
        auto [remaining, hidden] = split_for_holdout(dataset[u], holdout_fraction, seed);
        tally.hidden_total += hidden.size();

        candidates.clear();
        for (std::size_t v = 0; v < dataset.size(); ++v) {
            if (v != u) candidates.push_back(dataset[v]);
        }
        Neighbourhood nb = build_neighbourhood(remaining, candidates, config);
        std::vector<Prediction> predictions = predict(nb, remaining, config);

        for (const auto& vote : hidden) {
            auto it = std::lower_bound(predictions.begin(), predictions.end(), vote.item_id,
                                       [](const Prediction& p, std::int64_t item) {
                                           return p.item_id < item;
                                       });
            if (it != predictions.end() && it->item_id == vote.item_id) {
                tally.score(it->predicted_score, vote.score);
            }
        }
    }
    return tally.result();
}

EvalResult evaluate_global_mean(std::span<const UserProfile> dataset,
                                double holdout_fraction, const RecommenderConfig& config,
                                std::uint64_t seed) {
    require_evaluable(dataset, holdout_fraction);

    // First pass: the mean of every vote left visible by the shared splits.
    double visible_sum = 0.0;
    std::size_t visible_count = 0;
    for (const auto& user : dataset) {
        auto [remaining, hidden] = split_for_holdout(user, holdout_fraction, seed);
        for (const auto& vote : remaining.votes()) {
            visible_sum += vote.score;
            ++visible_count;
        }
    }

    ErrorTally tally;
    if (visible_count == 0) return tally.result();  // nothing to learn from
    const double global_mean =
        std::clamp(visible_sum / static_cast<double>(visible_count),
                   static_cast<double>(config.scale.min_score),
                   static_cast<double>(config.scale.max_score));

    for (const auto& user : dataset) {
        auto [remaining, hidden] = split_for_holdout(user, holdout_fraction, seed);
        for (const auto& vote : hidden) {
            ++tally.hidden_total;
            tally.score(global_mean, vote.score);
        }
    }
    return tally.result();
}

EvalResult evaluate_knn(std::span<const UserProfile> dataset, double holdout_fraction,
                        const RecommenderConfig& config, int k, std::uint64_t seed) {
    require_evaluable(dataset, holdout_fraction);
    if (k < 1) throw std::invalid_argument("k must be at least 1");

    ErrorTally tally;
    for (std::size_t u = 0; u < dataset.size(); ++u) {
        auto [remaining, hidden] = split_for_holdout(dataset[u], holdout_fraction, seed);
        tally.hidden_total += hidden.size();
        if (remaining.empty()) continue;
        const double target_mean = remaining.mean_score();

        // Positively correlated users only, strongest first.
        std::vector<std::pair<double, std::size_t>> scored;
        for (std::size_t v = 0; v < dataset.size(); ++v) {
            if (v == u) continue;
            double r = pearson(remaining, dataset[v], config.affinity);
            if (r > 0.0) scored.emplace_back(r, v);
        }
        std::sort(scored.begin(), scored.end(), [](const auto& a, const auto& b) {
            if (a.first != b.first) return a.first > b.first;
            return a.second < b.second;
        });
        if (scored.size() > static_cast<std::size_t>(k)) scored.resize(k);

        for (const auto& vote : hidden) {
            double num = 0.0, den = 0.0;
            for (const auto& [r, v] : scored) {
                auto score = dataset[v].score_for(vote.item_id);
                if (!score) continue;
                num += r * (*score - dataset[v].mean_score());
                den += r;
            }
            if (den <= 0.0) continue;
            double predicted = std::clamp(target_mean + num / den,
                                          static_cast<double>(config.scale.min_score),
                                          static_cast<double>(config.scale.max_score));
            tally.score(predicted, vote.score);
        }
    }
    return tally.result();
}

}  // namespace ais
