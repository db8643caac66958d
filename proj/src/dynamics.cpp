#include "ais/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "ais/errors.hpp"

namespace ais {

namespace {

void require_positive(double value, const char* field) {
    if (!(value > 0.0) || !std::isfinite(value)) {
        throw ConfigError(std::string(field) + " must be a positive finite number");
    }
}

void require_finite_row(const std::vector<double>& row, const char* what) {
    for (double v : row) {
        if (!std::isfinite(v)) {
            throw ConfigError(std::string(what) + " contains a non-finite value");
        }
    }
}

}  // namespace

void NetworkConfig::validate() const {
    require_positive(stimulation_rate, "stimulation_rate");
    if (suppression_rate < 0.0 || !std::isfinite(suppression_rate)) {
        throw ConfigError("suppression_rate must be >= 0");
    }
    if (!(death_rate > 0.0 && death_rate < 1.0)) {
        throw ConfigError("death_rate must lie in (0, 1)");
    }
    require_positive(dt, "dt");
    if (death_rate * dt >= 1.0) {
        throw ConfigError("death_rate * dt must stay below 1 so decay remains positive");
    }
    if (pool_capacity < 2) {
        throw ConfigError("pool_capacity must be at least 2");
    }
    require_positive(initial_concentration, "initial_concentration");
    if (drop_threshold < 0.0 || !std::isfinite(drop_threshold)) {
        throw ConfigError("drop_threshold must be >= 0");
    }
    if (!(saturation_cap > drop_threshold)) {
        throw ConfigError("saturation_cap must exceed drop_threshold");
    }
    if (!(drop_threshold < initial_concentration)) {
        throw ConfigError("drop_threshold must be below initial_concentration");
    }
    if (!(initial_concentration <= saturation_cap)) {
        throw ConfigError("initial_concentration must not exceed saturation_cap");
    }
    if (stabilization_window < 1) {
        throw ConfigError("stabilization_window must be at least 1");
    }
    if (max_iterations < 1) {
        throw ConfigError("max_iterations must be at least 1");
    }
}

std::string_view stop_reason_name(StopReason reason) {
    return reason == StopReason::stabilized ? "stabilized" : "iteration_limit";
}

// ---------------------------------------------------------------------------
// Construction
// ---------------------------------------------------------------------------

ImmuneNetwork::ImmuneNetwork(NetworkConfig config, Measure measure)
    : config_(config), pattern_driven_(true), measure_(measure) {
    config_.validate();
}

ImmuneNetwork::ImmuneNetwork(NetworkConfig config)
    : config_(config), pattern_driven_(false) {
    config_.validate();
}

ImmuneNetwork ImmuneNetwork::with_explicit_matching(NetworkConfig config) {
    return ImmuneNetwork(std::move(config));
}

ImmuneNetwork ImmuneNetwork::from_matching(
    NetworkConfig config, const std::vector<double>& antibody_concentrations,
    const std::vector<double>& antigen_concentrations,
    const std::vector<std::vector<double>>& antigen_matching,
    const std::vector<std::vector<double>>& antibody_matching) {
    ImmuneNetwork net(config);
    const std::size_t n = antibody_concentrations.size();

    if (n > static_cast<std::size_t>(config.pool_capacity)) {
        throw ConfigError("antibody count " + std::to_string(n) +
                          " exceeds pool_capacity " + std::to_string(config.pool_capacity));
    }
    if (antigen_concentrations.empty()) {
        throw ConfigError("at least one antigen concentration is required");
    }
    if (antigen_matching.size() != antigen_concentrations.size()) {
        throw ConfigError("antigen_matching must have one row per antigen (" +
                          std::to_string(antigen_concentrations.size()) + " expected, " +
                          std::to_string(antigen_matching.size()) + " given)");
    }
    for (const auto& row : antigen_matching) {
        if (row.size() != n) {
            throw ConfigError("antigen_matching rows must have one entry per antibody (" +
                              std::to_string(n) + " expected, " +
                              std::to_string(row.size()) + " given)");
        }
        require_finite_row(row, "antigen_matching");
    }
    if (antibody_matching.size() != n) {
        throw ConfigError("antibody_matching must be a " + std::to_string(n) + "x" +
                          std::to_string(n) + " matrix, got " +
                          std::to_string(antibody_matching.size()) + " row(s)");
    }
    for (const auto& row : antibody_matching) {
        if (row.size() != n) {
            throw ConfigError("antibody_matching must be a " + std::to_string(n) + "x" +
                              std::to_string(n) + " matrix; found a row of size " +
                              std::to_string(row.size()));
        }
        require_finite_row(row, "antibody_matching");
    }

    for (double y : antigen_concentrations) {
        if (!(y > 0.0) || !std::isfinite(y)) {
            throw ConfigError("antigen concentrations must be positive");
        }
        net.antigens_.push_back(Antigen{RealVector{}, y});
    }
    for (std::size_t i = 0; i < n; ++i) {
        double x = antibody_concentrations[i];
        if (!(x >= 0.0) || !std::isfinite(x) || x > config.saturation_cap) {
            throw ConfigError("antibody concentrations must lie in [0, saturation_cap]");
        }
        net.antibodies_.push_back(
            Antibody{RealVector{}, x, static_cast<std::int64_t>(i)});
    }
    net.antigen_matching_ = antigen_matching;
    net.antibody_matching_ = antibody_matching;
    return net;
}

void ImmuneNetwork::add_antigen(Antigen antigen) {
    if (!(antigen.concentration > 0.0) || !std::isfinite(antigen.concentration)) {
        throw ConfigError("antigen concentration must be positive");
    }
    std::vector<double> row(antibodies_.size(), 0.0);
    if (pattern_driven_) {
        for (std::size_t i = 0; i < antibodies_.size(); ++i) {
            row[i] = affinity(antigen.pattern, antibodies_[i].pattern, measure_);
        }
    } else if (!antibodies_.empty()) {
        // In explicit-matching mode an antigen's column is filled by later
        // add_antibody calls; against an existing pool it would be all
        // zeros, which is never what the caller wants.
        throw std::logic_error(
            "explicit-matching networks require antigens to be added before antibodies");
    }
    antigens_.push_back(std::move(antigen));
    antigen_matching_.push_back(std::move(row));
}

void ImmuneNetwork::add_antibody(Antibody antibody) {
    if (!pattern_driven_) {
        throw std::logic_error(
            "pattern-free add_antibody requires explicit matching values");
    }
    std::vector<double> antigen_row(antigens_.size());
    for (std::size_t a = 0; a < antigens_.size(); ++a) {
        antigen_row[a] = affinity(antigens_[a].pattern, antibody.pattern, measure_);
    }
    std::vector<double> pool_row(antibodies_.size());
    for (std::size_t j = 0; j < antibodies_.size(); ++j) {
        pool_row[j] = affinity(antibody.pattern, antibodies_[j].pattern, measure_);
    }
    add_antibody(std::move(antibody), antigen_row, pool_row);
}

void ImmuneNetwork::add_antibody(Antibody antibody,
                                 const std::vector<double>& antigen_matching,
                                 const std::vector<double>& antibody_matching) {
    if (is_full()) {
        throw std::logic_error("antibody pool is at capacity (" +
                               std::to_string(config_.pool_capacity) + ")");
    }
    if (antigen_matching.size() != antigens_.size()) {
        throw std::invalid_argument("expected one antigen matching value per antigen");
    }
    if (antibody_matching.size() != antibodies_.size()) {
        throw std::invalid_argument("expected one pool matching value per existing antibody");
    }
    require_finite_row(antigen_matching, "antigen matching values");
    require_finite_row(antibody_matching, "antibody matching values");

    // Concentration is normalised on entry: every newcomer starts at the
    // configured level no matter what its struct carried.
    antibody.concentration = config_.initial_concentration;

    const std::size_t n = antibodies_.size();
    for (std::size_t a = 0; a < antigens_.size(); ++a) {
        antigen_matching_[a].push_back(antigen_matching[a]);
    }
    for (std::size_t j = 0; j < n; ++j) {
        antibody_matching_[j].push_back(antibody_matching[j]);
    }
    std::vector<double> own_row = antibody_matching;
    own_row.push_back(1.0);  // diagonal: stored for shape, never read
    antibody_matching_.push_back(std::move(own_row));
    antibodies_.push_back(std::move(antibody));
    iterations_since_size_change_ = 0;
}

double ImmuneNetwork::antigen_matching(std::size_t antigen_index,
                                       std::size_t antibody_index) const {
    return antigen_matching_.at(antigen_index).at(antibody_index);
}

double ImmuneNetwork::antibody_matching(std::size_t i, std::size_t j) const {
    return antibody_matching_.at(i).at(j);
}

// ---------------------------------------------------------------------------
// Dynamics
// ---------------------------------------------------------------------------

double ImmuneNetwork::clamp_concentration(double value) const {
    // Canonicalises -0.0 to +0.0 so both step modes land on identical bits.
    if (value <= 0.0) return 0.0;
    if (value > config_.saturation_cap) return config_.saturation_cap;
    return value;
}

double ImmuneNetwork::antigen_drive(std::size_t i, const std::vector<double>& x) const {
    double drive = 0.0;
    for (std::size_t a = 0; a < antigens_.size(); ++a) {
        drive += antigen_matching_[a][i] * x[i] * antigens_[a].concentration;
    }
    return drive;
}

double ImmuneNetwork::suppression(std::size_t i, const std::vector<double>& x) const {
    // The suppression sum is accumulated in value order, not pool order, so
    // a permuted pool produces bit-identical concentrations.
    auto& terms = suppression_scratch_;
    terms.clear();
    for (std::size_t j = 0; j < x.size(); ++j) {
        if (j != i) terms.push_back(antibody_matching_[i][j] * x[j]);
    }
    std::sort(terms.begin(), terms.end());
    double sum = 0.0;
    for (double t : terms) sum += t;
    return (config_.suppression_rate / static_cast<double>(x.size())) * x[i] * sum;
}

void ImmuneNetwork::step_kernel(StepMode mode) {
    if (antibodies_.empty()) {
        throw std::logic_error("cannot step an empty antibody pool");
    }
    if (mode == StepMode::idiotypic && antigens_.size() != 1) {
        throw std::invalid_argument(
            "idiotypic dynamics are defined for exactly one antigen (" +
            std::to_string(antigens_.size()) +
            " present); use plain dynamics for multi-antigen networks");
    }

    // Synchronous update: every antibody sees the same pre-step snapshot.
    std::vector<double> x(antibodies_.size());
    for (std::size_t i = 0; i < x.size(); ++i) x[i] = antibodies_[i].concentration;

    for (std::size_t i = 0; i < x.size(); ++i) {
        double stim = config_.stimulation_rate * antigen_drive(i, x);
        double supp = mode == StepMode::idiotypic ? suppression(i, x) : 0.0;
        double death = config_.death_rate * x[i];
        double next = x[i] + config_.dt * (stim - supp - death);
        antibodies_[i].concentration = clamp_concentration(next);
    }
    ++iteration_count_;
}

void ImmuneNetwork::step_plain() { step_kernel(StepMode::plain); }

void ImmuneNetwork::step_idiotypic() { step_kernel(StepMode::idiotypic); }

void ImmuneNetwork::step(StepMode mode) { step_kernel(mode); }

std::vector<Antibody> ImmuneNetwork::drop_out() {
    std::vector<Antibody> dropped;
    std::size_t kept = 0;
    for (std::size_t i = 0; i < antibodies_.size(); ++i) {
        if (antibodies_[i].concentration < config_.drop_threshold) {
            dropped.push_back(std::move(antibodies_[i]));
            // Remove row i's slice from every cache.
            for (auto& row : antigen_matching_) row.erase(row.begin() + kept);
            for (auto& row : antibody_matching_) row.erase(row.begin() + kept);
            antibody_matching_.erase(antibody_matching_.begin() + kept);
        } else {
            antibodies_[kept] = std::move(antibodies_[i]);
            ++kept;
        }
    }
    antibodies_.resize(kept);
    if (dropped.empty()) {
        ++iterations_since_size_change_;
    } else {
        iterations_since_size_change_ = 0;
    }
    return dropped;
}

StopReason ImmuneNetwork::run_until_stable(StepMode mode, const NetworkObserver& observer) {
    if (antibodies_.empty() && iteration_count_ == 0) {
        return StopReason::stabilized;  // vacuously stable, nothing to settle
    }
    while (true) {
        if (is_stable()) return StopReason::stabilized;
        if (iteration_count_ >= config_.max_iterations) return StopReason::iteration_limit;
        if (antibodies_.empty()) {
            ++iteration_count_;  // an (empty) iteration still counts
        } else {
            step_kernel(mode);
        }
        drop_out();
        if (observer) observer(*this);
    }
}

}  // namespace ais
