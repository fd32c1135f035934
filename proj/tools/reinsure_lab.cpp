// reinsure-lab: figure data and strategy comparisons for the learning
// reinsurance-investment model.

#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "reinsure/reinsure.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitConfig = 2;
constexpr int kExitDomain = 3;

std::optional<std::uint64_t> seed_from_env() {
    const char* raw = std::getenv("REINSURE_SEED");
    if (raw == nullptr || *raw == '\0') return std::nullopt;
    try {
        std::size_t used = 0;
        const auto v = std::stoull(raw, &used);
        if (raw[used] != '\0') throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        throw reinsure::ConfigError(std::string("REINSURE_SEED is not an unsigned integer: ") + raw);
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Optimal investment and proportional reinsurance with Bayesian learning"};
    app.require_subcommand(1);

    std::string config_path;
    reinsure::CommandOptions opts;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> grid;
    std::optional<std::size_t> paths;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--config", config_path, "experiment config (JSON)")->required()->check(CLI::ExistingFile);
        cmd->add_option("--out", opts.out_dir, "output directory (overrides output_dir)");
        cmd->add_option("--seed", seed, "random seed (falls back to REINSURE_SEED, then the config)");
        cmd->add_option("--grid", grid, "time-grid resolution for filter-demo and bounds");
        cmd->add_option("--paths", paths, "Monte Carlo paths for value-compare");
    };
    auto* filter_demo = app.add_subcommand("filter-demo", "filter trajectory of one scenario");
    auto* bounds = app.add_subcommand("bounds", "a-priori retention bounds and certainty-equivalent paths");
    auto* surplus = app.add_subcommand("surplus", "surplus paths for each strategy on a shared scenario");
    auto* value = app.add_subcommand("value-compare", "Monte Carlo value comparison of strategies");
    for (auto* cmd : {filter_demo, bounds, surplus, value}) add_common(cmd);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kExitOk : kExitConfig;  // --help exits cleanly
    }

    try {
        opts.seed = seed ? seed : seed_from_env();
        opts.grid = grid;
        opts.paths = paths;
        const auto cfg = reinsure::apply_overrides(reinsure::load_config(config_path), opts);

        if (filter_demo->parsed()) {
            std::cout << reinsure::cmd_filter_demo(cfg) << '\n';
        } else if (bounds->parsed()) {
            for (const auto& f : reinsure::cmd_bounds(cfg)) std::cout << f << '\n';
        } else if (surplus->parsed()) {
            for (const auto& f : reinsure::cmd_surplus(cfg)) std::cout << f << '\n';
        } else if (value->parsed()) {
            std::cout << reinsure::cmd_value_compare(cfg) << '\n';
        }
    } catch (const std::invalid_argument& e) {  // includes ConfigError
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const reinsure::DomainError& e) {
        std::cerr << "numerical error: " << e.what() << '\n';
        return kExitDomain;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitFailure;
    }
    return kExitOk;
}
