#include "ais/run_config.hpp"

#include <charconv>
#include <stdexcept>

#include "ais/errors.hpp"
#include "ais/report.hpp"

namespace ais::cli {

namespace {

std::string_view trim(std::string_view s) {
    const char* ws = " \t\r\n";
    auto begin = s.find_first_not_of(ws);
    if (begin == std::string_view::npos) return {};
    auto end = s.find_last_not_of(ws);
    return s.substr(begin, end - begin + 1);
}

[[noreturn]] void bad_value(std::string_view key, std::string_view value,
                            const std::string& expected) {
    throw ConfigError("invalid value '" + std::string(value) + "' for key '" +
                      std::string(key) + "': expected " + expected);
}

double to_double(std::string_view key, std::string_view value) {
    double out{};
    auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
    if (ec != std::errc{} || ptr != value.data() + value.size()) {
        bad_value(key, value, "a number");
    }
    return out;
}

int to_int(std::string_view key, std::string_view value) {
    int out{};
    auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
    if (ec != std::errc{} || ptr != value.data() + value.size()) {
        bad_value(key, value, "an integer");
    }
    return out;
}

std::uint64_t to_uint64(std::string_view key, std::string_view value) {
    std::uint64_t out{};
    auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
    if (ec != std::errc{} || ptr != value.data() + value.size()) {
        bad_value(key, value, "a nonnegative integer");
    }
    return out;
}

template <typename Parse>
auto parse_list(std::string_view key, std::string_view value, char sep, Parse&& parse) {
    std::vector<decltype(parse(key, value))> out;
    while (true) {
        auto pos = value.find(sep);
        std::string_view item = trim(value.substr(0, pos));
        if (item.empty()) bad_value(key, value, "a non-empty list");
        out.push_back(parse(key, item));
        if (pos == std::string_view::npos) break;
        value = value.substr(pos + 1);
    }
    return out;
}

std::vector<double> to_double_list(std::string_view key, std::string_view value) {
    return parse_list(key, value, ',', to_double);
}

std::vector<std::vector<double>> to_matrix(std::string_view key, std::string_view value) {
    std::vector<std::vector<double>> rows;
    while (true) {
        auto pos = value.find(';');
        std::string_view row = trim(value.substr(0, pos));
        if (row.empty()) bad_value(key, value, "';'-separated rows of numbers");
        rows.push_back(to_double_list(key, row));
        if (pos == std::string_view::npos) break;
        value = value.substr(pos + 1);
    }
    return rows;
}

}  // namespace

bool parse_bool_value(std::string_view text, std::string_view key) {
    if (text == "true" || text == "on" || text == "yes" || text == "1") return true;
    if (text == "false" || text == "off" || text == "no" || text == "0") return false;
    bad_value(key, text, "a boolean (true/false, on/off, yes/no, 1/0)");
}

void RunConfig::apply(std::string_view key, std::string_view value) {
    auto& net = recommender.network;
    auto& aff = recommender.affinity;

    // --- global ---
    if (key == "seed") { seed = to_uint64(key, value); return; }
    if (key == "out") { out_dir = std::string(value); return; }
    if (key == "idiotypic") { recommender.idiotypic_enabled = parse_bool_value(value, key); return; }
    if (key == "trajectory") { trajectory = parse_bool_value(value, key); return; }
    if (key == "auto_confirm") { auto_confirm = parse_bool_value(value, key); return; }

    // --- network dynamics ---
    if (key == "network.stimulation_rate") { net.stimulation_rate = to_double(key, value); return; }
    if (key == "network.suppression_rate") { net.suppression_rate = to_double(key, value); return; }
    if (key == "network.death_rate") { net.death_rate = to_double(key, value); return; }
    if (key == "network.dt") { net.dt = to_double(key, value); return; }
    if (key == "network.pool_capacity") { net.pool_capacity = to_int(key, value); return; }
    if (key == "network.initial_concentration") { net.initial_concentration = to_double(key, value); return; }
    if (key == "network.drop_threshold") { net.drop_threshold = to_double(key, value); return; }
    if (key == "network.saturation_cap") { net.saturation_cap = to_double(key, value); return; }
    if (key == "network.stabilization_window") { net.stabilization_window = to_int(key, value); return; }
    if (key == "network.max_iterations") { net.max_iterations = to_int(key, value); return; }

    // --- profile correlation ---
    if (key == "affinity.overlap_penalty_threshold") { aff.overlap_penalty_threshold = to_int(key, value); return; }
    if (key == "affinity.penalty_mode") {
        if (value == "linear_scale") { aff.penalty_mode = PenaltyMode::linear_scale; return; }
        if (value == "hard_zero") { aff.penalty_mode = PenaltyMode::hard_zero; return; }
        bad_value(key, value, "linear_scale or hard_zero");
    }
    if (key == "scale.min_score") { recommender.scale.min_score = to_int(key, value); return; }
    if (key == "scale.max_score") { recommender.scale.max_score = to_int(key, value); return; }

    // --- recommender ---
    if (key == "recommender.min_support") { recommender.min_support = to_int(key, value); return; }
    if (key == "recommender.top_n") { recommender.top_n = to_int(key, value); return; }

    // --- negative selection ---
    if (key == "negsel.rule") {
        if (value == "contiguous") { negsel.rule = MatchRule::r_contiguous; return; }
        if (value == "record") { negsel.rule = MatchRule::record; return; }
        bad_value(key, value, "contiguous or record");
    }
    if (key == "negsel.r") { negsel.r = to_int(key, value); return; }
    if (key == "negsel.pattern_length") { negsel.pattern_length = to_int(key, value); return; }
    if (key == "negsel.target_detector_count") { negsel.target_detector_count = to_int(key, value); return; }
    if (key == "negsel.max_generation_attempts") { negsel.max_generation_attempts = to_int(key, value); return; }
    if (key == "negsel.activation_threshold") { negsel.activation_threshold = to_int(key, value); return; }
    if (key == "negsel.mutate_instead_of_discard") { negsel.mutate_instead_of_discard = parse_bool_value(value, key); return; }
    if (key == "negsel.mutation_attempts_per_candidate") { negsel.mutation_attempts_per_candidate = to_int(key, value); return; }
    if (key == "negsel.mutation_rate") { negsel.mutation.base_mutation_rate = to_double(key, value); return; }
    if (key == "negsel.mature_lifetime_items") { negsel.mature_lifetime_items = to_int(key, value); return; }

    // --- clonal expansion ---
    if (key == "clonal.clone_factor") { clonal.clone_factor = to_double(key, value); return; }
    if (key == "clonal.base_mutation_rate") { clonal.base_mutation_rate = to_double(key, value); return; }
    if (key == "clonal.inverse_affinity_mutation") { clonal.inverse_affinity_mutation = parse_bool_value(value, key); return; }
    if (key == "clonal.real_noise_scale") { clonal.real_noise_scale = to_double(key, value); return; }

    // --- evaluation ---
    if (key == "evaluate.holdout_fraction") { evaluate.holdout_fraction = to_double(key, value); return; }
    if (key == "evaluate.seeds") { evaluate.seeds = parse_list(key, value, ',', to_uint64); return; }
    if (key == "evaluate.knn_k") { evaluate.knn_k = to_int(key, value); return; }

    // --- direct dynamics runs ---
    if (key == "simulate.mode") {
        if (value == "plain") { simulate.mode = StepMode::plain; return; }
        if (value == "idiotypic") { simulate.mode = StepMode::idiotypic; return; }
        bad_value(key, value, "plain or idiotypic");
    }
    if (key == "simulate.steps") { simulate.steps = to_int(key, value); return; }
    if (key == "simulate.antibody_concentrations") { simulate.antibody_concentrations = to_double_list(key, value); return; }
    if (key == "simulate.antigen_concentrations") { simulate.antigen_concentrations = to_double_list(key, value); return; }
    if (key == "simulate.antigen_matching") { simulate.antigen_matching = to_matrix(key, value); return; }
    if (key == "simulate.antibody_matching") { simulate.antibody_matching = to_matrix(key, value); return; }

    throw ConfigError("unknown configuration key '" + std::string(key) + "'");
}

void RunConfig::apply_text(std::string_view text) {
    std::size_t line_no = 0;
    while (!text.empty()) {
        ++line_no;
        auto eol = text.find('\n');
        std::string_view raw = eol == std::string_view::npos ? text : text.substr(0, eol);
        text = eol == std::string_view::npos ? std::string_view{} : text.substr(eol + 1);

        if (auto hash = raw.find('#'); hash != std::string_view::npos) {
            raw = raw.substr(0, hash);
        }
        raw = trim(raw);
        if (raw.empty()) continue;

        auto eq = raw.find('=');
        if (eq == std::string_view::npos) {
            throw ConfigError("config line " + std::to_string(line_no) +
                              ": expected 'key = value', got '" + std::string(raw) + "'");
        }
        apply(trim(raw.substr(0, eq)), trim(raw.substr(eq + 1)));
    }
}

void RunConfig::apply_file(const std::string& path) {
    apply_text(read_text_file(path));
}

void RunConfig::finalize() {
    // One user-facing seed, one labelled stream per consumer.
    recommender.network.seed = derive_seed(seed, "dynamics");
    negsel.seed = derive_seed(seed, "negsel");
    negsel.mutation.seed = derive_seed(seed, "negsel.mutation");
    clonal.seed = derive_seed(seed, "clonal");

    recommender.validate();
    negsel.validate();
    clonal.validate();
    if (!(evaluate.holdout_fraction > 0.0 && evaluate.holdout_fraction < 1.0)) {
        throw ConfigError("evaluate.holdout_fraction must lie in (0, 1)");
    }
    if (evaluate.seeds.empty()) {
        throw ConfigError("evaluate.seeds must list at least one seed");
    }
    if (evaluate.knn_k < 1) {
        throw ConfigError("evaluate.knn_k must be at least 1");
    }
    if (simulate.steps < 1) {
        throw ConfigError("simulate.steps must be at least 1");
    }
    if (out_dir.empty()) {
        throw ConfigError("output directory must not be empty");
    }
}

}  // namespace ais::cli
