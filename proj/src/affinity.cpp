#include "ais/affinity.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "ais/errors.hpp"

namespace ais {

namespace {

void require_same_length(std::size_t a, std::size_t b) {
    if (a != b) {
        throw std::invalid_argument("pattern length mismatch: " + std::to_string(a) +
                                    " vs " + std::to_string(b));
    }
}

bool fields_agree(const Record::Field& a, const Record::Field& b) {
    return !a || !b || *a == *b;
}

// Shared scoring core: `agree(i)` says whether position i matches.
template <typename Agree>
int count_matches(std::size_t length, Agree&& agree) {
    int score = 0;
    for (std::size_t i = 0; i < length; ++i) {
        if (agree(i)) ++score;
    }
    return score;
}

template <typename Agree>
int longest_run(std::size_t length, Agree&& agree) {
    int best = 0, run = 0;
    for (std::size_t i = 0; i < length; ++i) {
        run = agree(i) ? run + 1 : 0;
        best = std::max(best, run);
    }
    return best;
}

}  // namespace

int hamming_score(const BitString& a, const BitString& b) {
    require_same_length(a.size(), b.size());
    return count_matches(a.size(), [&](std::size_t i) { return a.bit(i) == b.bit(i); });
}

int hamming_score(const Record& a, const Record& b) {
    require_same_length(a.size(), b.size());
    return count_matches(a.size(),
                         [&](std::size_t i) { return fields_agree(a.field(i), b.field(i)); });
}

int longest_contiguous(const BitString& a, const BitString& b) {
    require_same_length(a.size(), b.size());
    return longest_run(a.size(), [&](std::size_t i) { return a.bit(i) == b.bit(i); });
}

int longest_contiguous(const Record& a, const Record& b) {
    require_same_length(a.size(), b.size());
    return longest_run(a.size(),
                       [&](std::size_t i) { return fields_agree(a.field(i), b.field(i)); });
}

double euclidean_distance(const RealVector& a, const RealVector& b) {
    require_same_length(a.size(), b.size());
    double sum = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        double d = a[i] - b[i];
        sum += d * d;
    }
    return std::sqrt(sum);
}

double pearson(const RealVector& a, const RealVector& b) {
    require_same_length(a.size(), b.size());
    if (a.empty()) return 0.0;
    double mean_a = 0.0, mean_b = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        mean_a += a[i];
        mean_b += b[i];
    }
    mean_a /= static_cast<double>(a.size());
    mean_b /= static_cast<double>(b.size());

    double num = 0.0, var_a = 0.0, var_b = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        double da = a[i] - mean_a;
        double db = b[i] - mean_b;
        num += da * db;
        var_a += da * da;
        var_b += db * db;
    }
    if (var_a <= 0.0 || var_b <= 0.0) return 0.0;
    return std::clamp(num / std::sqrt(var_a * var_b), -1.0, 1.0);
}

double pearson(const UserProfile& a, const UserProfile& b,
               const AffinityConfig& config) {
    ProfileOverlap overlap = encode_profile_pair(a, b);
    if (overlap.size() == 0) return 0.0;

    // Deviations are from each user's mean over every vote they cast, so a
    // user who rates everything the same way contributes no signal even when
    // the overlap happens to look varied.
    double mean_a = a.mean_score();
    double mean_b = b.mean_score();

    double num = 0.0, var_a = 0.0, var_b = 0.0;
    for (auto [sa, sb] : overlap.score_pairs) {
        double da = sa - mean_a;
        double db = sb - mean_b;
        num += da * db;
        var_a += da * da;
        var_b += db * db;
    }
    if (var_a <= 0.0 || var_b <= 0.0) return 0.0;
    double r = num / std::sqrt(var_a * var_b);

    // Correlations computed on a handful of shared items are unreliable;
    // shrink (or drop) them below the configured overlap threshold.
    if (config.overlap_penalty_threshold > 0 &&
        overlap.size() < static_cast<std::size_t>(config.overlap_penalty_threshold)) {
        if (config.penalty_mode == PenaltyMode::hard_zero) return 0.0;
        r *= static_cast<double>(overlap.size()) /
             static_cast<double>(config.overlap_penalty_threshold);
    }
    return std::clamp(r, -1.0, 1.0);
}

bool record_match(const Record& pattern, const Record& observed) {
    require_same_length(pattern.size(), observed.size());
    for (std::size_t i = 0; i < observed.size(); ++i) {
        if (!observed.field(i)) {
            throw std::invalid_argument(
                "observed record contains a wildcard in field " + std::to_string(i) +
                "; only patterns may use wildcards");
        }
    }
    for (std::size_t i = 0; i < pattern.size(); ++i) {
        if (pattern.field(i) && *pattern.field(i) != *observed.field(i)) return false;
    }
    return true;
}

bool record_match(const ConnectionRecord& pattern, const ConnectionRecord& observed) {
    return record_match(pattern.to_record(), observed.to_record());
}

Measure measure_from_name(std::string_view name) {
    if (name == "hamming") return Measure::hamming;
    if (name == "contiguous") return Measure::longest_contiguous;
    if (name == "euclidean") return Measure::euclidean;
    if (name == "pearson") return Measure::pearson;
    throw ConfigError("unknown affinity measure '" + std::string(name) +
                      "' (expected hamming, contiguous, euclidean or pearson)");
}

std::string_view measure_name(Measure measure) {
    switch (measure) {
        case Measure::hamming: return "hamming";
        case Measure::longest_contiguous: return "contiguous";
        case Measure::euclidean: return "euclidean";
        case Measure::pearson: return "pearson";
    }
    return "?";
}

namespace {

[[noreturn]] void reject_measure(const AttributeString& pattern, Measure measure) {
    throw std::invalid_argument(std::string(measure_name(measure)) +
                                " affinity is not defined for " +
                                std::string(pattern_kind(pattern)) + " patterns");
}

}  // namespace

double affinity(const AttributeString& a, const AttributeString& b, Measure measure) {
    if (!same_kind(a, b)) {
        throw std::invalid_argument(std::string("pattern kind mismatch: ") +
                                    std::string(pattern_kind(a)) + " vs " +
                                    std::string(pattern_kind(b)));
    }
    require_same_length(pattern_length(a), pattern_length(b));
    if (pattern_length(a) == 0) {
        throw std::invalid_argument("affinity of empty patterns is undefined");
    }
    double length = static_cast<double>(pattern_length(a));

    switch (measure) {
        case Measure::hamming:
            if (const auto* bits = std::get_if<BitString>(&a)) {
                return hamming_score(*bits, std::get<BitString>(b)) / length;
            }
            if (const auto* rec = std::get_if<Record>(&a)) {
                return hamming_score(*rec, std::get<Record>(b)) / length;
            }
            reject_measure(a, measure);

        case Measure::longest_contiguous:
            if (const auto* bits = std::get_if<BitString>(&a)) {
                return longest_contiguous(*bits, std::get<BitString>(b)) / length;
            }
            if (const auto* rec = std::get_if<Record>(&a)) {
                return longest_contiguous(*rec, std::get<Record>(b)) / length;
            }
            reject_measure(a, measure);

        case Measure::euclidean:
            if (const auto* v = std::get_if<RealVector>(&a)) {
                return 1.0 / (1.0 + euclidean_distance(*v, std::get<RealVector>(b)));
            }
            reject_measure(a, measure);

        case Measure::pearson:
            if (const auto* v = std::get_if<RealVector>(&a)) {
                return (pearson(*v, std::get<RealVector>(b)) + 1.0) / 2.0;
            }
            reject_measure(a, measure);
    }
    reject_measure(a, measure);
}

}  // namespace ais
