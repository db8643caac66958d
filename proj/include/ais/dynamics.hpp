#pragma once

// The immune-network engine: a bounded pool of antibodies whose
// concentrations evolve under discrete-time dynamics, with drop-out of weak
// members and detection of a stabilized pool size.
//
// Two update rules share one kernel. With stimulation k1, suppression k2,
// death k3 and time step dt, a synchronous Euler step computes for each
// antibody i (from the pre-step snapshot x, antigen concentrations y):
//
//   plain:      x_i += dt * ( k1 * sum_a m_ai * x_i * y_a  -  k3 * x_i )
//   idiotypic:  x_i += dt * ( k1 * m_i * x_i * y
//                             - (k2 / n) * x_i * sum_{j != i} m_ij * x_j
//                             - k3 * x_i )
//
// where m_ai / m_i are antigen-antibody matching values, m_ij
// antibody-antibody matching, and n the current pool size. The idiotypic
// form is defined for exactly one antigen. Either way the result is clamped
// to [0, saturation_cap]. With k2 = 0 the idiotypic step is bit-for-bit
// identical to the plain step.

#include <cstdint>
#include <functional>
#include <string_view>
#include <vector>

#include "ais/affinity.hpp"
#include "ais/encoding.hpp"

namespace ais {

struct Antibody {
    AttributeString pattern;
    double concentration = 0.0;
    // Provenance of the antibody (e.g. the originating user id); carried
    // through untouched and reported in trajectories.
    std::int64_t source_id = -1;
};

struct Antigen {
    AttributeString pattern;
    double concentration = 1.0;  // must stay > 0
};

struct NetworkConfig {
    double stimulation_rate = 0.2;   // k1 > 0
    double suppression_rate = 0.02;  // k2 >= 0 (idiotypic only)
    double death_rate = 0.1;         // k3 in (0,1), with k3*dt < 1
    double dt = 1.0;
    int pool_capacity = 20;
    double initial_concentration = 10.0;
    double drop_threshold = 1.0;        // removal below this (strict <)
    double saturation_cap = 1000.0;     // concentration ceiling
    int stabilization_window = 10;      // iterations without size change
    int max_iterations = 10000;         // safety bound for run_until_stable
    std::uint64_t seed = 0;

    void validate() const;  // throws ConfigError naming the offending field
};

enum class StepMode { plain, idiotypic };

enum class StopReason { stabilized, iteration_limit };

std::string_view stop_reason_name(StopReason reason);

class ImmuneNetwork;

// Called once per {step, drop_out} pass of run_until_stable and of the
// neighbourhood build loop, for trajectory reporting.
using NetworkObserver = std::function<void(const ImmuneNetwork&)>;

class ImmuneNetwork {
public:
    // Pattern-driven network: matching values are computed from patterns
    // with the given measure (normalised affinity in [0, 1]) as antigens and
    // antibodies are added.
    ImmuneNetwork(NetworkConfig config, Measure measure);

    // Matrix-driven network for direct study of the dynamics: explicit
    // concentrations and matching values, no patterns. antigen_matching has
    // one row per antigen, antibody_matching is n x n; rows are validated
    // for shape, values for finiteness, concentrations for range.
    static ImmuneNetwork from_matching(NetworkConfig config,
                                       const std::vector<double>& antibody_concentrations,
                                       const std::vector<double>& antigen_concentrations,
                                       const std::vector<std::vector<double>>& antigen_matching,
                                       const std::vector<std::vector<double>>& antibody_matching);

    // Empty network whose matching values the caller supplies as members are
    // added (patterns are carried but never compared). Antigens must be
    // added before any antibody; antibodies enter through the
    // explicit-matching add_antibody overload.
    static ImmuneNetwork with_explicit_matching(NetworkConfig config);

    // --- construction of the pool ---

    // Appends an antigen; in a pattern-driven network its matching values
    // against the existing pool are computed on entry.
    void add_antigen(Antigen antigen);

    // Appends an antibody with concentration reset to initial_concentration
    // and matching values computed from its pattern. Throws std::logic_error
    // if the pool is full.
    void add_antibody(Antibody antibody);

    // Same, but with caller-supplied matching values: one per antigen, and
    // one per existing pool member (symmetric m_ij). Used when patterns are
    // not directly comparable inside the network (e.g. user profiles whose
    // correlation the caller computes).
    void add_antibody(Antibody antibody, const std::vector<double>& antigen_matching,
                      const std::vector<double>& antibody_matching);

    // --- inspection ---

    const std::vector<Antibody>& antibodies() const noexcept { return antibodies_; }
    const std::vector<Antigen>& antigens() const noexcept { return antigens_; }
    std::size_t size() const noexcept { return antibodies_.size(); }
    bool empty() const noexcept { return antibodies_.empty(); }
    bool is_full() const noexcept {
        return size() >= static_cast<std::size_t>(config_.pool_capacity);
    }
    int iteration_count() const noexcept { return iteration_count_; }
    int iterations_since_size_change() const noexcept {
        return iterations_since_size_change_;
    }
    bool is_stable() const noexcept {
        return iterations_since_size_change_ >= config_.stabilization_window;
    }
    const NetworkConfig& config() const noexcept { return config_; }

    double antigen_matching(std::size_t antigen_index, std::size_t antibody_index) const;
    double antibody_matching(std::size_t i, std::size_t j) const;

    // --- dynamics ---

    // One synchronous plain-dynamics step (stimulation by antigens, death).
    // Requires a nonempty pool.
    void step_plain();

    // One synchronous idiotypic step (adds antibody-antibody suppression).
    // Requires a nonempty pool and exactly one antigen; with several
    // antigens, plain dynamics is the defined form.
    void step_idiotypic();

    void step(StepMode mode);

    // Removes every antibody with concentration < drop_threshold and returns
    // them. Resets the stability counter if anything was removed, advances
    // it otherwise.
    std::vector<Antibody> drop_out();

    // Repeats {step, drop_out} until the pool size has been unchanged for
    // stabilization_window iterations, or iteration_count reaches
    // max_iterations. An initially-empty network is vacuously stable. The
    // observer (if any) runs after every pass.
    StopReason run_until_stable(StepMode mode, const NetworkObserver& observer = {});

private:
    ImmuneNetwork(NetworkConfig config);  // matrix-driven (no measure)

    double antigen_drive(std::size_t i, const std::vector<double>& x) const;
    double suppression(std::size_t i, const std::vector<double>& x) const;
    double clamp_concentration(double value) const;
    void step_kernel(StepMode mode);

    NetworkConfig config_;
    bool pattern_driven_ = true;
    Measure measure_ = Measure::hamming;
    std::vector<Antigen> antigens_;
    std::vector<Antibody> antibodies_;
    // antigen_matching_[a][i]: antigen a vs antibody i; antibody_matching_
    // is the full n x n pool matrix (diagonal present but never read).
    std::vector<std::vector<double>> antigen_matching_;
    std::vector<std::vector<double>> antibody_matching_;
    int iteration_count_ = 0;
    int iterations_since_size_change_ = 0;
    mutable std::vector<double> suppression_scratch_;
};

}  // namespace ais
