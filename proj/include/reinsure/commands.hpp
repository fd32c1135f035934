#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "config.hpp"
#include "csv.hpp"
#include "filter.hpp"
#include "simulate.hpp"
#include "strategy.hpp"

namespace reinsure {

/// Command-line overrides applied on top of a loaded config.
struct CommandOptions {
    std::string out_dir;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> grid;
    std::optional<std::size_t> paths;
};

/// Folds CLI overrides into the config. An explicit seed replaces the
/// simulation seed and shifts the bounds seeds to seed, seed + 1, ...
inline ExperimentConfig apply_overrides(ExperimentConfig cfg, const CommandOptions& opt) {
    if (!opt.out_dir.empty()) cfg.output_dir = opt.out_dir;
    if (opt.seed) {
        cfg.simulate.seed = *opt.seed;
        for (std::size_t i = 0; i < cfg.bounds.seeds.size(); ++i) cfg.bounds.seeds[i] = *opt.seed + i;
    }
    if (opt.grid) {
        if (*opt.grid < 1) throw ConfigError("--grid must be >= 1");
        cfg.bounds.grid = *opt.grid;
        cfg.filter_grid = *opt.grid;
    }
    if (opt.paths) {
        if (*opt.paths < 2) throw ConfigError("--paths must be >= 2");
        cfg.simulate.n_paths = *opt.paths;
    }
    return cfg;
}

namespace detail {

inline std::string output_path(const ExperimentConfig& cfg, const std::string& file) {
    std::filesystem::create_directories(cfg.output_dir);
    return (std::filesystem::path(cfg.output_dir) / file).string();
}

/// Scenario used by the single-path commands, drawn from the streams of path 0.
inline Scenario showcase_scenario(const ExperimentConfig& cfg, PathStreams& streams) {
    return draw_scenario(cfg.setup, streams, cfg.simulate.pin);
}

}  // namespace detail

/// Filter trajectory of one seeded scenario:
/// t,p_1..p_m,lambda_hat,q_1..q_l,event.
inline std::string cmd_filter_demo(const ExperimentConfig& cfg) {
    PathStreams streams = PathStreams::for_path(cfg.simulate.seed, 0);
    const auto scenario = detail::showcase_scenario(cfg, streams);
    const auto rows =
        filter_trajectory(scenario, cfg.setup, cfg.setup.params.horizon / static_cast<double>(cfg.filter_grid));

    std::vector<std::string> header{"t"};
    for (std::size_t j = 1; j <= cfg.setup.prior.size(); ++j) header.push_back("p_" + std::to_string(j));
    header.push_back("lambda_hat");
    for (std::size_t d = 1; d <= cfg.setup.dirichlet.beta.size(); ++d) header.push_back("q_" + std::to_string(d));
    header.push_back("event");

    CsvWriter csv(detail::output_path(cfg, "filter.csv"), header);
    for (const auto& row : rows) {
        csv.cell(row.t);
        for (double v : row.p) csv.cell(v);
        csv.cell(row.lambda_hat);
        for (auto v : row.q) csv.cell(v);
        csv.cell(row.event);
        csv.end_row();
    }
    return csv.path();
}

/// A-priori bounds and the certainty-equivalent retention b_ce(t) evaluated at
/// the left-limit filter state, one file per scenario seed:
/// bounds_seed<S>.csv with t,apriori_lower,apriori_upper,b_ce.
inline std::vector<std::string> cmd_bounds(const ExperimentConfig& cfg) {
    const auto& setup = cfg.setup;
    const std::size_t n = cfg.bounds.grid;
    std::vector<double> times(n + 1);
    std::vector<RetentionBounds> bounds(n + 1);
    for (std::size_t k = 0; k <= n; ++k) {
        times[k] = k == n ? setup.params.horizon : setup.params.horizon * static_cast<double>(k) / static_cast<double>(n);
        bounds[k] = apriori_bounds(setup.claims, setup.params, setup.prior, times[k]);
    }

    std::vector<std::string> written;
    for (std::uint64_t seed : cfg.bounds.seeds) {
        PathStreams streams = PathStreams::for_path(seed, 0);
        const auto scenario = detail::showcase_scenario(cfg, streams);
        CsvWriter csv(detail::output_path(cfg, "bounds_seed" + std::to_string(seed) + ".csv"),
                      {"t", "apriori_lower", "apriori_upper", "b_ce"});
        for (std::size_t k = 0; k <= n; ++k) {
            const auto state = state_before(scenario, setup, times[k]);
            csv.cell(times[k]).cell(bounds[k].lower).cell(bounds[k].upper);
            csv.cell(certainty_equivalent_retention(setup, times[k], state));
            csv.end_row();
        }
        written.push_back(csv.path());
    }
    return written;
}

/// Surplus paths of every configured strategy on one shared scenario and
/// Brownian path: surplus_<name>.csv with t,X,b,xi,event.
inline std::vector<std::string> cmd_surplus(const ExperimentConfig& cfg) {
    PathStreams streams = PathStreams::for_path(cfg.simulate.seed, 0);
    const auto scenario = detail::showcase_scenario(cfg, streams);
    const double dt = cfg.simulate.step(cfg.setup.params);

    std::vector<std::string> written;
    for (const auto& spec : cfg.strategies) {
        Rng brownian = streams.brownian;
        const auto record = simulate_path(scenario, cfg.setup, spec, dt, brownian);
        CsvWriter csv(detail::output_path(cfg, "surplus_" + spec.name + ".csv"), {"t", "X", "b", "xi", "event"});
        for (const auto& row : record.rows) {
            csv.cell(row.t).cell(row.X).cell(row.b).cell(row.xi).cell(row.event);
            csv.end_row();
        }
        written.push_back(csv.path());
    }
    return written;
}

/// Monte Carlo value of each strategy under common random numbers:
/// value.csv with strategy,n_paths,mean_utility,std_err,entropic_risk.
inline std::string cmd_value_compare(const ExperimentConfig& cfg) {
    if (cfg.strategies.size() < 2) throw ConfigError("value-compare needs at least two strategies");
    if (cfg.simulate.n_paths < 100) throw ConfigError("value-compare needs n_paths >= 100");
    CsvWriter csv(detail::output_path(cfg, "value.csv"),
                  {"strategy", "n_paths", "mean_utility", "std_err", "entropic_risk"});
    for (const auto& spec : cfg.strategies) {
        const auto est = estimate_value(cfg.setup, spec, cfg.simulate);
        csv.cell(spec.name).cell(cfg.simulate.n_paths).cell(est.mean_utility).cell(est.std_error);
        csv.cell(entropic_risk(est.terminal_wealth, cfg.setup.params.alpha));
        csv.end_row();
    }
    return csv.path();
}

}  // namespace reinsure
