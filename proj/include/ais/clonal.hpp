#pragma once

// Clonal expansion and somatic hypermutation: produce mutated copies of an
// antibody, with mutation strength tied to how well the parent already
// matches. Used standalone and by the detector-generation path that mutates
// failed candidates instead of discarding them.

#include <cstdint>
#include <optional>
#include <vector>

#include "ais/affinity.hpp"
#include "ais/dynamics.hpp"
#include "ais/encoding.hpp"
#include "ais/rng.hpp"

namespace ais {

struct CloneConfig {
    double clone_factor = 1.0;         // scales how many clones a match earns
    double base_mutation_rate = 0.1;   // per-position probability scale, in (0, 1]
    // true: higher affinity => gentler mutation (refine good matches);
    // false: higher affinity => harsher mutation (escape what is matched).
    bool inverse_affinity_mutation = true;
    // Standard deviation of real-vector noise is real_noise_scale times the
    // effective mutation probability.
    double real_noise_scale = 1.0;
    // Token pools for record mutation; required when mutating Records.
    std::optional<RecordDomains> domains;
    std::uint64_t seed = 0;

    void validate() const;  // throws ConfigError
};

// Number of clones a parent with the given affinity earns:
// max(1, round(clone_factor * affinity * 10)). Monotone in affinity, never 0.
int clone_count(double affinity, const CloneConfig& config);

// Per-position effective mutation probability for the given affinity:
// base_mutation_rate * (1 - affinity) in inverse mode, base_mutation_rate *
// affinity otherwise.
double effective_mutation_probability(double affinity, const CloneConfig& config);

// Mutates a copy of the pattern. Bits flip independently with the effective
// probability; record fields re-draw from their domain (wildcard included)
// with that probability; real entries all receive zero-mean Gaussian noise
// whose spread is proportional to it. Probability 0 returns the input
// unchanged, bit for bit. Length and representation are always preserved.
AttributeString hypermutate(const AttributeString& pattern, double affinity,
                            const CloneConfig& config, Rng& rng);

// Convenience overload drawing from a stream derived from config.seed.
AttributeString hypermutate(const AttributeString& pattern, double affinity,
                            const CloneConfig& config);

// Computes the parent's affinity to the antigen under the measure, then
// returns clone_count mutated copies (the parent itself is not included).
// Clones keep the parent's source_id and concentration.
std::vector<Antibody> clonal_expand(const Antibody& parent, const Antigen& antigen,
                                    const CloneConfig& config, Measure measure, Rng& rng);

std::vector<Antibody> clonal_expand(const Antibody& parent, const Antigen& antigen,
                                    const CloneConfig& config, Measure measure);

}  // namespace ais
