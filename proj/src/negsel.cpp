#include "ais/negsel.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

#include "ais/affinity.hpp"
#include "ais/errors.hpp"
#include "ais/rng.hpp"

namespace ais {

std::string_view detector_state_name(DetectorState state) {
    switch (state) {
        case DetectorState::immature: return "immature";
        case DetectorState::mature: return "mature";
        case DetectorState::memory: return "memory";
    }
    return "?";
}

Detector make_immature(AttributeString pattern) {
    return Detector{std::move(pattern), DetectorState::immature, 0, 1};
}

CloneConfig NegSelConfig::default_escape_mutation() {
    CloneConfig config;
    config.inverse_affinity_mutation = false;  // stronger self-match, harsher mutation
    config.base_mutation_rate = 0.3;
    return config;
}

void NegSelConfig::validate() const {
    if (r < 1) throw ConfigError("r must be at least 1");
    if (pattern_length < 0) throw ConfigError("pattern_length must be >= 0");
    if (rule == MatchRule::r_contiguous && pattern_length > 0 && r > pattern_length) {
        throw ConfigError("r (" + std::to_string(r) + ") must not exceed pattern_length (" +
                          std::to_string(pattern_length) + ")");
    }
    if (target_detector_count < 1) {
        throw ConfigError("target_detector_count must be at least 1");
    }
    if (max_generation_attempts < 1) {
        throw ConfigError("max_generation_attempts must be at least 1");
    }
    if (activation_threshold < 1) {
        throw ConfigError("activation_threshold must be at least 1");
    }
    if (mutation_attempts_per_candidate < 0) {
        throw ConfigError("mutation_attempts_per_candidate must be >= 0");
    }
    if (mature_lifetime_items < 0) {
        throw ConfigError("mature_lifetime_items must be >= 0 (0 = unlimited)");
    }
    if (mutate_instead_of_discard) mutation.validate();
}

// ---------------------------------------------------------------------------
// Matching
// ---------------------------------------------------------------------------

bool detector_matches(const AttributeString& pattern, const AttributeString& item,
                      const NegSelConfig& config) {
    if (config.rule == MatchRule::r_contiguous) {
        const auto* p = std::get_if<BitString>(&pattern);
        const auto* t = std::get_if<BitString>(&item);
        if (!p || !t) {
            throw std::invalid_argument("r-contiguous matching requires bit-string patterns");
        }
        return longest_contiguous(*p, *t) >= config.r;
    }
    const auto* p = std::get_if<Record>(&pattern);
    const auto* t = std::get_if<Record>(&item);
    if (!p || !t) {
        throw std::invalid_argument("record matching requires record patterns");
    }
    return record_match(*p, *t);
}

// ---------------------------------------------------------------------------
// Censoring
// ---------------------------------------------------------------------------

std::optional<Detector> censor(Detector candidate,
                               std::span<const AttributeString> self_set,
                               const NegSelConfig& config) {
    if (candidate.state != DetectorState::immature) {
        throw std::invalid_argument("censoring applies to immature detectors only (got " +
                                    std::string(detector_state_name(candidate.state)) + ")");
    }
    for (const auto& self : self_set) {
        if (detector_matches(candidate.pattern, self, config)) return std::nullopt;
    }
    candidate.state = DetectorState::mature;
    candidate.activation_threshold = config.activation_threshold;
    candidate.match_count = 0;
    return candidate;
}

// ---------------------------------------------------------------------------
// Generation
// ---------------------------------------------------------------------------

namespace {

// How strongly the candidate resembles its closest self pattern, in [0, 1],
// under the semantics of the active rule. Drives mutation strength for the
// mutate-instead-of-discard path.
double self_match_degree(const AttributeString& pattern,
                         std::span<const AttributeString> self_set,
                         const NegSelConfig& config) {
    double best = 0.0;
    for (const auto& self : self_set) {
        double a;
        if (config.rule == MatchRule::r_contiguous) {
            const auto& p = std::get<BitString>(pattern);
            const auto& s = std::get<BitString>(self);
            a = static_cast<double>(longest_contiguous(p, s)) /
                static_cast<double>(p.size());
        } else {
            const auto& p = std::get<Record>(pattern);
            const auto& s = std::get<Record>(self);
            a = static_cast<double>(hamming_score(p, s)) / static_cast<double>(p.size());
        }
        best = std::max(best, a);
    }
    return best;
}

std::size_t candidate_width(std::span<const AttributeString> self_set,
                            const NegSelConfig& config) {
    if (config.rule == MatchRule::record) {
        if (!config.domains) {
            throw ConfigError("record-rule generation requires configured field domains");
        }
        return config.domains->field_count();
    }
    if (config.pattern_length > 0) {
        return static_cast<std::size_t>(config.pattern_length);
    }
    if (!self_set.empty()) {
        return pattern_length(self_set.front());
    }
    throw ConfigError("pattern_length is required when the self set is empty");
}

AttributeString draw_candidate(std::size_t width, const NegSelConfig& config, Rng& rng) {
    if (config.rule == MatchRule::r_contiguous) {
        std::vector<std::uint8_t> bits(width);
        std::uniform_int_distribution<int> coin(0, 1);
        for (auto& b : bits) b = static_cast<std::uint8_t>(coin(rng));
        return BitString(std::move(bits));
    }
    std::vector<Record::Field> fields(width);
    for (std::size_t i = 0; i < width; ++i) fields[i] = config.domains->sample(i, rng);
    return Record(std::move(fields));
}

bool is_duplicate(const AttributeString& pattern, const std::vector<Detector>& accepted) {
    return std::any_of(accepted.begin(), accepted.end(),
                       [&](const Detector& d) { return d.pattern == pattern; });
}

}  // namespace

GenerationResult generate_detectors(std::span<const AttributeString> self_set,
                                    const NegSelConfig& config) {
    config.validate();
    const std::size_t width = candidate_width(self_set, config);
    if (width == 0) throw ConfigError("candidate patterns must have length >= 1");
    if (config.rule == MatchRule::r_contiguous &&
        static_cast<std::size_t>(config.r) > width) {
        throw ConfigError("r (" + std::to_string(config.r) +
                          ") must not exceed the pattern width (" + std::to_string(width) +
                          ")");
    }

    CloneConfig mutation = config.mutation;
    if (config.rule == MatchRule::record && !mutation.domains) {
        mutation.domains = config.domains;
    }

    GenerationResult result;
    for (int k = 0; k < config.max_generation_attempts; ++k) {
        if (result.detectors.size() ==
            static_cast<std::size_t>(config.target_detector_count)) {
            break;
        }
        // One private stream per candidate index: the k-th draw is the same
        // pattern no matter how earlier candidates fared.
        Rng rng = make_rng(derive_seed(config.seed, "negsel.candidate",
                                       static_cast<std::uint64_t>(k)));
        AttributeString pattern = draw_candidate(width, config, rng);
        ++result.draws_used;

        std::optional<Detector> survivor = censor(make_immature(pattern), self_set, config);
        if (!survivor && config.mutate_instead_of_discard) {
            // Mutate away from self and re-censor, chaining from the latest
            // mutant so each attempt explores further out.
            Rng mutant_rng = make_rng(derive_seed(config.seed, "negsel.mutant",
                                                  static_cast<std::uint64_t>(k)));
            AttributeString current = std::move(pattern);
            for (int t = 0; t < config.mutation_attempts_per_candidate && !survivor; ++t) {
                double a = self_match_degree(current, self_set, config);
                current = hypermutate(current, a, mutation, mutant_rng);
                survivor = censor(make_immature(current), self_set, config);
            }
        }
        if (survivor && !is_duplicate(survivor->pattern, result.detectors)) {
            result.detectors.push_back(std::move(*survivor));
        }
    }

    if (result.detectors.empty()) {
        throw GenerationError(
            "no detector survived censoring after " + std::to_string(result.draws_used) +
            " draw(s); the self set appears to cover the pattern space under this rule");
    }
    return result;
}

std::vector<Detector> enumerate_surviving_detectors(
    std::span<const AttributeString> self_set, const NegSelConfig& config) {
    config.validate();
    if (config.rule != MatchRule::r_contiguous) {
        throw std::invalid_argument(
            "exhaustive enumeration is defined for the r-contiguous bit rule only");
    }
    const std::size_t width = candidate_width(self_set, config);
    if (width == 0 || width > 16) {
        throw std::invalid_argument("exhaustive enumeration supports widths 1..16, got " +
                                    std::to_string(width));
    }

    std::vector<Detector> survivors;
    const std::uint32_t count = 1u << width;
    for (std::uint32_t v = 0; v < count; ++v) {
        std::vector<std::uint8_t> bits(width);
        for (std::size_t i = 0; i < width; ++i) {
            bits[i] = static_cast<std::uint8_t>((v >> (width - 1 - i)) & 1u);
        }
        auto survivor = censor(make_immature(BitString(std::move(bits))), self_set, config);
        if (survivor) survivors.push_back(std::move(*survivor));
    }
    return survivors;
}

// ---------------------------------------------------------------------------
// Monitoring and promotion
// ---------------------------------------------------------------------------

MonitorResult monitor(std::vector<Detector> detectors,
                      std::span<const AttributeString> traffic,
                      const NegSelConfig& config) {
    for (const auto& d : detectors) {
        if (d.state == DetectorState::immature) {
            throw std::invalid_argument("monitor requires mature or memory detectors");
        }
    }
    MonitorResult result;
    result.detectors = std::move(detectors);
    for (std::size_t t = 0; t < traffic.size(); ++t) {
        // Mature detectors have a finite patrol unless configured otherwise.
        bool mature_expired = config.mature_lifetime_items > 0 &&
                              t >= static_cast<std::size_t>(config.mature_lifetime_items);
        for (std::size_t d = 0; d < result.detectors.size(); ++d) {
            Detector& detector = result.detectors[d];
            if (mature_expired && detector.state == DetectorState::mature) continue;
            if (!detector_matches(detector.pattern, traffic[t], config)) continue;
            ++detector.match_count;
            if (detector.match_count >= detector.activation_threshold) {
                result.alerts.push_back(Alert{t, d});
            }
        }
    }
    return result;
}

std::optional<Detector> promote(Detector detector, bool operator_confirmed) {
    if (detector.match_count < detector.activation_threshold) {
        throw std::invalid_argument("cannot promote a detector that has not activated (" +
                                    std::to_string(detector.match_count) + "/" +
                                    std::to_string(detector.activation_threshold) +
                                    " matches)");
    }
    if (!operator_confirmed) return std::nullopt;  // false alarm: discard
    detector.state = DetectorState::memory;
    detector.activation_threshold = 1;
    detector.match_count = 0;
    return detector;
}

}  // namespace ais
