#pragma once

#include <cstdint>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "claims.hpp"
#include "csv.hpp"
#include "errors.hpp"
#include "model.hpp"
#include "setup.hpp"
#include "simulate.hpp"
#include "strategy.hpp"

namespace reinsure {

struct BoundsOptions {
    std::size_t grid = 500;
    std::vector<std::uint64_t> seeds{1, 2};
};

/// Parsed and validated experiment description.
struct ExperimentConfig {
    ProblemSetup setup;
    bool kappa_pinned = false;
    double investment_bound = 1.0;
    std::vector<StrategySpec> strategies;
    SimulationOptions simulate;
    BoundsOptions bounds;
    std::size_t filter_grid = 1000;
    std::string output_dir = "out";
};

namespace detail {

using nlohmann::json;

inline const json& require_key(const json& obj, const std::string& key, const std::string& where) {
    if (!obj.is_object() || !obj.contains(key)) throw ConfigError(where + ": missing key '" + key + "'");
    return obj.at(key);
}

inline double number(const json& v, const std::string& what) {
    if (!v.is_number()) throw ConfigError(what + " must be a number");
    return v.get<double>();
}

inline std::vector<double> number_list(const json& v, const std::string& what) {
    if (!v.is_array()) throw ConfigError(what + " must be an array of numbers");
    std::vector<double> out;
    for (const auto& e : v) out.push_back(number(e, what));
    return out;
}

inline MarginalLaw parse_marginal(const json& j) {
    const auto kind = require_key(j, "kind", "claims").get<std::string>();
    if (kind == "trunc_exp") {
        return TruncatedExponential(number(require_key(j, "rate", "claims"), "claims.rate"),
                                    number(require_key(j, "cutoff", "claims"), "claims.cutoff"));
    }
    if (kind == "deterministic") return DeterministicClaim(number(require_key(j, "value", "claims"), "claims.value"));
    throw ConfigError("claims: unknown kind '" + kind + "'");
}

inline StrategySpec parse_strategy(const json& j, std::size_t position) {
    StrategySpec spec;
    if (!j.is_object()) throw ConfigError("strategies: each entry must be an object");

    const json inv = j.value("investment", json("merton"));
    if (inv.is_string() && inv.get<std::string>() == "merton") {
        spec.investment = MertonInvestment{};
    } else if (inv.is_object() && inv.contains("constant")) {
        spec.investment = ConstantInvestment{number(inv.at("constant"), "investment.constant")};
    } else {
        throw ConfigError("strategy investment must be \"merton\" or {\"constant\": x}");
    }

    const json& ret = require_key(j, "retention", "strategy");
    std::string label;
    if (ret.is_string()) {
        label = ret.get<std::string>();
        if (label == "full") {
            spec.retention = FullReinsurance{};
        } else if (label == "certainty_equivalent") {
            spec.retention = CertaintyEquivalentRetention{};
        } else if (label == "apriori_lower") {
            spec.retention = AprioriLowerRetention{};
        } else if (label == "apriori_upper") {
            spec.retention = AprioriUpperRetention{};
        } else {
            throw ConfigError("strategy retention: unknown rule '" + label + "'");
        }
    } else if (ret.is_object() && ret.contains("constant")) {
        const double b = number(ret.at("constant"), "retention.constant");
        spec.retention = ConstantRetention{b};
        label = "constant_" + format_number(b);
    } else if (ret.is_object() && ret.contains("complete_info")) {
        const auto& ci = ret.at("complete_info");
        spec.retention = CompleteInfoRetention{number(require_key(ci, "lambda", "complete_info"), "complete_info.lambda"),
                                               number_list(require_key(ci, "c", "complete_info"), "complete_info.c")};
        label = "complete_info";
    } else {
        throw ConfigError("strategy retention must be a rule name or {\"constant\": b} / {\"complete_info\": {...}}");
    }
    spec.name = j.value("name", label.empty() ? "strategy_" + std::to_string(position) : label);
    return spec;
}

inline std::vector<StrategySpec> default_strategies() {
    return {{"full", MertonInvestment{}, FullReinsurance{}},
            {"constant_0.5", MertonInvestment{}, ConstantRetention{0.5}},
            {"certainty_equivalent", MertonInvestment{}, CertaintyEquivalentRetention{}}};
}

}  // namespace detail

/// Builds and validates an ExperimentConfig from its JSON form. Throws ConfigError.
inline ExperimentConfig parse_config(const nlohmann::json& root) {
    using detail::number;
    using detail::number_list;
    using detail::require_key;
    ExperimentConfig cfg;

    try {
        const auto& model = require_key(root, "model", "config");
        auto& p = cfg.setup.params;
        p.r = number(require_key(model, "r", "model"), "model.r");
        p.mu = number(require_key(model, "mu", "model"), "model.mu");
        p.sigma = number(require_key(model, "sigma", "model"), "model.sigma");
        p.alpha = number(require_key(model, "alpha", "model"), "model.alpha");
        p.eta = number(require_key(model, "eta", "model"), "model.eta");
        p.theta = number(require_key(model, "theta", "model"), "model.theta");
        p.horizon = number(require_key(model, "T", "model"), "model.T");
        p.x0 = number(require_key(model, "x0", "model"), "model.x0");
        cfg.setup.prior.lambdas = number_list(require_key(model, "lambdas", "model"), "model.lambdas");
        cfg.setup.prior.pi = number_list(require_key(model, "pi", "model"), "model.pi");

        const auto& beta = require_key(model, "beta", "model");
        if (!beta.is_object() || beta.empty()) throw ConfigError("model.beta must be an object keyed by line subsets");
        int lines = 0;
        std::vector<std::pair<LineSet, double>> entries;
        for (const auto& [key, value] : beta.items()) {
            const LineSet set = LineSet::parse(key);
            lines = std::max(lines, set.max_line());
            entries.emplace_back(set, number(value, "model.beta[" + key + "]"));
        }
        cfg.setup.dirichlet.beta.assign(subset_count(lines), 0.0);
        for (const auto& [set, value] : entries) {
            if (cfg.setup.dirichlet.beta[set.index()] != 0.0) throw ConfigError("model.beta: duplicate subset key");
            if (!(value > 0.0)) throw ConfigError("model.beta[" + set.to_string() + "] must be positive");
            cfg.setup.dirichlet.beta[set.index()] = value;
        }
        for (std::size_t i = 0; i < cfg.setup.dirichlet.beta.size(); ++i) {
            if (cfg.setup.dirichlet.beta[i] == 0.0) {
                throw ConfigError("model.beta: missing subset {" + LineSet(static_cast<std::uint32_t>(i + 1)).to_string() +
                                  "}");
            }
        }

        const auto& claims = require_key(root, "claims", "config");
        if (claims.is_array()) {
            std::vector<MarginalLaw> laws;
            for (const auto& c : claims) laws.push_back(detail::parse_marginal(c));
            cfg.setup.claims = ClaimModel(std::move(laws));
        } else if (claims.is_object()) {
            const bool identical = claims.value("identical", true);
            if (!identical) throw ConfigError("claims: a single entry must be marked \"identical\": true");
            cfg.setup.claims = ClaimModel::identical(detail::parse_marginal(claims), lines);
        } else {
            throw ConfigError("claims must be an object or an array");
        }

        cfg.kappa_pinned = model.contains("kappa") && !model.at("kappa").is_null();
        p.kappa = 1.0;  // placeholder so prior/claims validation can run first
        cfg.setup.prior.validate();
        cfg.setup.dirichlet.validate();
        if (cfg.setup.dirichlet.lines() != cfg.setup.claims.lines()) {
            throw ConfigError("model.beta covers " + std::to_string(cfg.setup.dirichlet.lines()) +
                              " lines but claims has " + std::to_string(cfg.setup.claims.lines()));
        }
        p.kappa = cfg.kappa_pinned ? number(model.at("kappa"), "model.kappa")
                                   : default_kappa(cfg.setup.prior, cfg.setup.dirichlet, cfg.setup.claims);
        cfg.setup.validate();

        cfg.investment_bound = root.contains("investment_bound") ? number(root.at("investment_bound"), "investment_bound")
                                                                : default_investment_bound(p);
        if (!(cfg.investment_bound > 0.0)) throw ConfigError("investment_bound must be positive");

        if (root.contains("strategies") && root.contains("strategy")) {
            throw ConfigError("give either 'strategy' or 'strategies', not both");
        }
        if (root.contains("strategies")) {
            const auto& list = root.at("strategies");
            if (!list.is_array()) throw ConfigError("strategies must be an array");
            for (std::size_t i = 0; i < list.size(); ++i) cfg.strategies.push_back(detail::parse_strategy(list[i], i));
        } else if (root.contains("strategy")) {
            cfg.strategies.push_back(detail::parse_strategy(root.at("strategy"), 0));
        } else {
            cfg.strategies = detail::default_strategies();
        }
        for (const auto& s : cfg.strategies) s.validate(cfg.setup, cfg.investment_bound);

        if (root.contains("simulate")) {
            const auto& sim = root.at("simulate");
            if (sim.contains("n_paths")) {
                const double n = number(sim.at("n_paths"), "simulate.n_paths");
                if (!(n >= 2)) throw ConfigError("simulate.n_paths must be at least 2");
                cfg.simulate.n_paths = static_cast<std::size_t>(n);
            }
            if (sim.contains("dt_max")) {
                cfg.simulate.dt_max = number(sim.at("dt_max"), "simulate.dt_max");
                if (!(cfg.simulate.dt_max > 0.0)) throw ConfigError("simulate.dt_max must be positive");
            }
            if (sim.contains("seed")) cfg.simulate.seed = sim.at("seed").get<std::uint64_t>();
            if (sim.contains("pin_lambda") && !sim.at("pin_lambda").is_null()) {
                cfg.simulate.pin.lambda = number(sim.at("pin_lambda"), "simulate.pin_lambda");
                if (!(*cfg.simulate.pin.lambda > 0.0)) throw ConfigError("simulate.pin_lambda must be positive");
            }
            if (sim.contains("pin_alpha") && !sim.at("pin_alpha").is_null()) {
                auto alpha = number_list(sim.at("pin_alpha"), "simulate.pin_alpha");
                if (alpha.size() != cfg.setup.dirichlet.beta.size()) {
                    throw ConfigError("simulate.pin_alpha must have 2^d - 1 entries");
                }
                double total = 0.0;
                for (double a : alpha) {
                    if (!(a >= 0.0)) throw ConfigError("simulate.pin_alpha entries must be nonnegative");
                    total += a;
                }
                if (std::abs(total - 1.0) > 1e-9) throw ConfigError("simulate.pin_alpha must sum to 1");
                cfg.simulate.pin.alpha = std::move(alpha);
            }
        }
        if (root.contains("bounds")) {
            const auto& b = root.at("bounds");
            if (b.contains("grid")) cfg.bounds.grid = b.at("grid").get<std::size_t>();
            if (b.contains("seeds")) cfg.bounds.seeds = b.at("seeds").get<std::vector<std::uint64_t>>();
            if (cfg.bounds.grid < 1 || cfg.bounds.seeds.empty()) throw ConfigError("bounds: need grid >= 1 and a seed");
        }
        if (root.contains("filter_grid")) cfg.filter_grid = root.at("filter_grid").get<std::size_t>();
        if (cfg.filter_grid < 1) throw ConfigError("filter_grid must be >= 1");
        if (root.contains("output_dir")) cfg.output_dir = root.at("output_dir").get<std::string>();
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
    return cfg;
}

inline ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config file '" + path + "'");
    nlohmann::json root;
    try {
        in >> root;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("config '" + path + "': " + e.what());
    }
    return parse_config(root);
}

}  // namespace reinsure
