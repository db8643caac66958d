#include "ais/clonal.hpp"

#include <cmath>
#include <stdexcept>

#include "ais/errors.hpp"

namespace ais {

namespace {

void require_affinity_in_range(double affinity) {
    if (!(affinity >= 0.0 && affinity <= 1.0)) {
        throw std::invalid_argument("affinity must lie in [0, 1]");
    }
}

}  // namespace

void CloneConfig::validate() const {
    if (!(clone_factor > 0.0) || !std::isfinite(clone_factor)) {
        throw ConfigError("clone_factor must be positive");
    }
    if (!(base_mutation_rate > 0.0 && base_mutation_rate <= 1.0)) {
        throw ConfigError("base_mutation_rate must lie in (0, 1]");
    }
    if (!(real_noise_scale >= 0.0) || !std::isfinite(real_noise_scale)) {
        throw ConfigError("real_noise_scale must be >= 0");
    }
}

int clone_count(double affinity, const CloneConfig& config) {
    require_affinity_in_range(affinity);
    // The x10 reference scale makes clone_factor = 1, affinity = 1 yield
    // exactly ten clones; clone_factor rescales from there.
    auto scaled = std::llround(config.clone_factor * affinity * 10.0);
    return static_cast<int>(std::max<long long>(1, scaled));
}

double effective_mutation_probability(double affinity, const CloneConfig& config) {
    require_affinity_in_range(affinity);
    double p = config.inverse_affinity_mutation
                   ? config.base_mutation_rate * (1.0 - affinity)
                   : config.base_mutation_rate * affinity;
    return std::min(p, 1.0);
}

namespace {

BitString mutate_bits(const BitString& pattern, double p, Rng& rng) {
    std::bernoulli_distribution flip(p);
    std::vector<std::uint8_t> bits = pattern.bits();
    for (auto& b : bits) {
        if (flip(rng)) b ^= 1u;
    }
    return BitString(std::move(bits));
}

RealVector mutate_reals(const RealVector& pattern, double p, const CloneConfig& config,
                        Rng& rng) {
    std::normal_distribution<double> noise(0.0, config.real_noise_scale * p);
    std::vector<double> values = pattern.values();
    for (auto& v : values) v += noise(rng);
    return RealVector(std::move(values));
}

Record mutate_record(const Record& pattern, double p, const CloneConfig& config,
                     Rng& rng) {
    if (!config.domains) {
        throw ConfigError("record mutation requires configured field domains");
    }
    if (config.domains->field_count() < pattern.size()) {
        throw ConfigError("record domains cover " +
                          std::to_string(config.domains->field_count()) +
                          " field(s) but the pattern has " + std::to_string(pattern.size()));
    }
    std::bernoulli_distribution redraw(p);
    std::vector<Record::Field> fields = pattern.fields();
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (redraw(rng)) fields[i] = config.domains->sample(i, rng);
    }
    return Record(std::move(fields));
}

}  // namespace

AttributeString hypermutate(const AttributeString& pattern, double affinity,
                            const CloneConfig& config, Rng& rng) {
    config.validate();
    double p = effective_mutation_probability(affinity, config);
    if (p == 0.0) return pattern;  // boundary no-op: the exact input back

    if (const auto* bits = std::get_if<BitString>(&pattern)) {
        return mutate_bits(*bits, p, rng);
    }
    if (const auto* reals = std::get_if<RealVector>(&pattern)) {
        return mutate_reals(*reals, p, config, rng);
    }
    return mutate_record(std::get<Record>(pattern), p, config, rng);
}

AttributeString hypermutate(const AttributeString& pattern, double affinity,
                            const CloneConfig& config) {
    Rng rng = make_rng(derive_seed(config.seed, "clonal.hypermutate"));
    return hypermutate(pattern, affinity, config, rng);
}

std::vector<Antibody> clonal_expand(const Antibody& parent, const Antigen& antigen,
                                    const CloneConfig& config, Measure measure, Rng& rng) {
    config.validate();
    double a = affinity(parent.pattern, antigen.pattern, measure);
    int count = clone_count(a, config);
    std::vector<Antibody> clones;
    clones.reserve(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) {
        clones.push_back(Antibody{hypermutate(parent.pattern, a, config, rng),
                                  parent.concentration, parent.source_id});
    }
    return clones;
}

std::vector<Antibody> clonal_expand(const Antibody& parent, const Antigen& antigen,
                                    const CloneConfig& config, Measure measure) {
    Rng rng = make_rng(derive_seed(config.seed, "clonal.expand"));
    return clonal_expand(parent, antigen, config, measure, rng);
}

}  // namespace ais
