#pragma once

// Negative-selection anomaly detection. Detectors are drawn at random (or
// enumerated exhaustively for small bit widths), censored against a trusted
// self set so that survivors can only match non-self, then used to monitor
// traffic. Detectors activate after enough matches and can be promoted to
// memory detectors that alert on the first match.

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "ais/clonal.hpp"
#include "ais/encoding.hpp"

namespace ais {

enum class DetectorState { immature, mature, memory };

std::string_view detector_state_name(DetectorState state);

struct Detector {
    AttributeString pattern;
    DetectorState state = DetectorState::immature;
    int match_count = 0;
    int activation_threshold = 1;
};

Detector make_immature(AttributeString pattern);

enum class MatchRule {
    r_contiguous,  // bit strings: match iff longest agreeing run >= r
    record,        // records: wildcard-absorbing field equality
};

struct NegSelConfig {
    MatchRule rule = MatchRule::r_contiguous;
    int r = 2;
    // Bit width of candidates. May be 0 when a nonempty self set fixes the
    // width; required for generation against an empty self set.
    int pattern_length = 0;
    int target_detector_count = 10;
    int max_generation_attempts = 1000;
    int activation_threshold = 1;
    // When a candidate matches self, mutate it away and re-censor instead of
    // discarding it outright.
    bool mutate_instead_of_discard = false;
    int mutation_attempts_per_candidate = 5;
    // Mutation knobs for that path. Defaults differ from CloneConfig's: the
    // goal is escaping a match, so stronger self-affinity means harsher
    // mutation (inverse_affinity_mutation off).
    CloneConfig mutation = default_escape_mutation();
    // Field token pools; required for record-rule generation and record
    // mutation.
    std::optional<RecordDomains> domains;
    // Mature detectors stop matching after this many traffic items
    // (memory detectors never expire); 0 = unlimited.
    int mature_lifetime_items = 0;
    std::uint64_t seed = 0;

    static CloneConfig default_escape_mutation();
    void validate() const;  // throws ConfigError
};

// Rule dispatch: does this detector pattern match the item? For the record
// rule the item must be wildcard-free (record_match's contract).
bool detector_matches(const AttributeString& pattern, const AttributeString& item,
                      const NegSelConfig& config);

// Maturation step. An immature candidate matching any self pattern is
// eliminated (nullopt); otherwise it comes back mature, carrying the
// configured activation threshold. Throws std::invalid_argument if the
// candidate is not immature.
std::optional<Detector> censor(Detector candidate,
                               std::span<const AttributeString> self_set,
                               const NegSelConfig& config);

struct GenerationResult {
    std::vector<Detector> detectors;
    // Fresh random candidates drawn (mutation retries not counted).
    int draws_used = 0;
};

// Rejection sampling of mature detectors: draw, censor, optionally mutate
// self-matchers away, reject duplicates; stops at target_detector_count
// detectors or max_generation_attempts draws. Each candidate draws from its
// own seed-derived stream, so candidate k is the same pattern regardless of
// what happened to candidates 0..k-1. Throws GenerationError if the budget
// ends with zero survivors.
GenerationResult generate_detectors(std::span<const AttributeString> self_set,
                                    const NegSelConfig& config);

// Exhaustive alternative for bit widths <= 16: every surviving pattern, in
// numeric order. The ground truth that sampling approximates.
std::vector<Detector> enumerate_surviving_detectors(
    std::span<const AttributeString> self_set, const NegSelConfig& config);

struct Alert {
    std::size_t traffic_index = 0;
    std::size_t detector_index = 0;

    friend bool operator==(const Alert&, const Alert&) = default;
};

struct MonitorResult {
    std::vector<Alert> alerts;          // ordered by traffic index, then detector
    std::vector<Detector> detectors;    // with updated match counts
};

// Runs the detector set over traffic in order. Every match increments the
// detector's match_count; an alert is emitted whenever the count is at or
// above the detector's activation threshold (memory detectors therefore
// alert on their first match). Detectors must be mature or memory.
MonitorResult monitor(std::vector<Detector> detectors,
                      std::span<const AttributeString> traffic,
                      const NegSelConfig& config);

// Operator decision on an activated detector (match_count >= threshold):
// confirmed detectors become memory detectors (threshold 1, count reset),
// rejected ones are discarded (nullopt). Throws std::invalid_argument if the
// detector is not activated.
std::optional<Detector> promote(Detector detector, bool operator_confirmed);

}  // namespace ais
