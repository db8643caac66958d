#pragma once

// Affinity measures: how strongly one pattern recognises another. Binary and
// record patterns score by matching positions (total and longest contiguous
// run), real vectors by Euclidean distance or Pearson correlation, and user
// profiles by Pearson correlation over co-voted items with an optional
// penalty for small overlaps.

#include <string_view>

#include "ais/encoding.hpp"

namespace ais {

enum class Measure { hamming, longest_contiguous, euclidean, pearson };

Measure measure_from_name(std::string_view name);  // throws ConfigError
std::string_view measure_name(Measure measure);

// Behaviour when two profiles share fewer co-voted items than the threshold:
// scale the correlation by overlap/threshold, or zero it outright.
enum class PenaltyMode { linear_scale, hard_zero };

struct AffinityConfig {
    // Overlap size below which the penalty applies; 0 disables it.
    int overlap_penalty_threshold = 0;
    PenaltyMode penalty_mode = PenaltyMode::linear_scale;
};

// Number of positions where the two patterns agree. Record fields agree when
// either side is a wildcard or both tokens are equal. Throws
// std::invalid_argument on length mismatch.
int hamming_score(const BitString& a, const BitString& b);
int hamming_score(const Record& a, const Record& b);

// Length of the longest run of consecutive agreeing positions.
int longest_contiguous(const BitString& a, const BitString& b);
int longest_contiguous(const Record& a, const Record& b);

double euclidean_distance(const RealVector& a, const RealVector& b);

// Sample correlation of two equal-length vectors, in [-1, 1]. Returns 0 when
// either side has zero variance.
double pearson(const RealVector& a, const RealVector& b);

// Correlation of two users' scores over the items both voted on. Deviations
// are taken from each user's mean over their *whole* profile, not just the
// overlap. Returns 0 when the overlap is empty or degenerate (zero variance
// on either side), applies the configured small-overlap penalty, and clamps
// to [-1, 1].
double pearson(const UserProfile& a, const UserProfile& b,
               const AffinityConfig& config = {});

// True when the pattern record matches the observed one: every concrete
// pattern field must equal the corresponding observed field. The observed
// record must be fully concrete; a wildcard there throws
// std::invalid_argument.
bool record_match(const ConnectionRecord& pattern, const ConnectionRecord& observed);
bool record_match(const Record& pattern, const Record& observed);

// Normalised affinity in [0, 1] between two patterns of the same kind:
//   hamming / longest_contiguous : matching score divided by length
//                                  (bit-strings and records)
//   euclidean                    : 1 / (1 + distance)       (real vectors)
//   pearson                      : (r + 1) / 2              (real vectors)
// Throws std::invalid_argument for mismatched kinds or lengths, empty
// patterns, or a measure that does not apply to the representation.
double affinity(const AttributeString& a, const AttributeString& b, Measure measure);

}  // namespace ais
