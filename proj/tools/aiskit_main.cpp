// aiskit — batch front-end for the immune-systems toolkit.
//
//   aiskit recommend RATINGS TARGET_USER   collaborative-filtering predictions
//   aiskit detect    SELF TRAFFIC          negative-selection anomaly alerts
//   aiskit evaluate  RATINGS               holdout MAE vs. baselines
//   aiskit simulate                        run the concentration dynamics
//
// Shared flags: --config PATH (or $AISKIT_CONFIG), --seed N, --out DIR,
// --idiotypic on|off, --auto-confirm, plus --key=value overrides for any
// configuration key. Precedence: flags > config file > defaults.

#include <cstdint>
#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ais/commands.hpp"
#include "ais/errors.hpp"
#include "ais/run_config.hpp"

namespace {

struct CommonFlags {
    std::string config_path;
    std::uint64_t seed = 0;
    bool seed_given = false;
    std::string out_dir;
    std::string idiotypic;
    bool auto_confirm = false;
};

void add_common_flags(CLI::App* sub, CommonFlags& flags) {
    sub->add_option("--config", flags.config_path,
                    "Config file (key = value lines); defaults to $AISKIT_CONFIG");
    sub->add_option("--seed", flags.seed, "Global seed for all random streams")
        ->each([&flags](const std::string&) { flags.seed_given = true; });
    sub->add_option("--out", flags.out_dir, "Output directory for CSV reports");
    sub->add_option("--idiotypic", flags.idiotypic,
                    "Idiotypic suppression in the recommender pool: on|off");
    sub->add_flag("--auto-confirm", flags.auto_confirm,
                  "Promote every activated detector to memory");
    sub->allow_extras();  // --key=value overrides, applied after the file
}

// Builds the final configuration from defaults, file, then flags.
ais::cli::RunConfig make_config(const CLI::App& sub, const CommonFlags& flags) {
    ais::cli::RunConfig config;

    if (!flags.config_path.empty()) {
        config.apply_file(flags.config_path);
    } else if (const char* env = std::getenv("AISKIT_CONFIG"); env && *env) {
        config.apply_file(env);
    }

    for (const std::string& extra : sub.remaining()) {
        std::string_view arg = extra;
        if (arg.rfind("--", 0) != 0) {
            throw ais::ConfigError("unrecognized argument '" + extra +
                                   "' (overrides look like --key=value)");
        }
        arg.remove_prefix(2);
        auto eq = arg.find('=');
        if (eq == std::string_view::npos) {
            throw ais::ConfigError("override '" + extra + "' is missing '=value'");
        }
        config.apply(arg.substr(0, eq), arg.substr(eq + 1));
    }

    if (flags.seed_given) config.seed = flags.seed;
    if (!flags.out_dir.empty()) config.out_dir = flags.out_dir;
    if (!flags.idiotypic.empty()) {
        config.recommender.idiotypic_enabled =
            ais::cli::parse_bool_value(flags.idiotypic, "--idiotypic");
    }
    if (flags.auto_confirm) config.auto_confirm = true;

    config.finalize();
    return config;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"artificial immune systems toolkit"};
    app.require_subcommand(1);

    CommonFlags flags;

    std::string ratings_path;
    std::int64_t target_user = 0;
    auto* recommend = app.add_subcommand(
        "recommend", "Predict ratings for a target user from a ratings file");
    recommend->add_option("ratings", ratings_path, "Tab-separated ratings file")
        ->required();
    recommend->add_option("target", target_user, "Target user id")->required();
    add_common_flags(recommend, flags);

    std::string self_path, traffic_path;
    auto* detect =
        app.add_subcommand("detect", "Monitor traffic with negative-selection detectors");
    detect->add_option("self", self_path, "Trusted self patterns")->required();
    detect->add_option("traffic", traffic_path, "Traffic to monitor")->required();
    add_common_flags(detect, flags);

    std::string evaluate_ratings;
    auto* evaluate = app.add_subcommand(
        "evaluate", "Holdout evaluation of the recommender and baselines");
    evaluate->add_option("ratings", evaluate_ratings, "Tab-separated ratings file")
        ->required();
    add_common_flags(evaluate, flags);

    auto* simulate =
        app.add_subcommand("simulate", "Run the concentration dynamics directly");
    add_common_flags(simulate, flags);

    CLI11_PARSE(app, argc, argv);

    CLI::App* chosen = app.get_subcommands().front();
    ais::cli::RunConfig config;
    try {
        config = make_config(*chosen, flags);
    } catch (const ais::ConfigError& e) {
        std::cerr << "configuration error: " << e.what() << '\n';
        return ais::cli::kExitConfigError;
    } catch (const std::runtime_error& e) {
        std::cerr << e.what() << '\n';  // e.g. unreadable config file
        return ais::cli::kExitConfigError;
    }

    if (chosen == recommend) {
        return ais::cli::cmd_recommend(config, ratings_path, target_user);
    }
    if (chosen == detect) {
        return ais::cli::cmd_detect(config, self_path, traffic_path);
    }
    if (chosen == evaluate) {
        return ais::cli::cmd_evaluate(config, evaluate_ratings);
    }
    return ais::cli::cmd_simulate(config);
}
