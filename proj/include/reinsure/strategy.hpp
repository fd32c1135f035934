#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "claims.hpp"
#include "filter.hpp"
#include "model.hpp"
#include "roots.hpp"
#include "setup.hpp"

namespace reinsure {

/// Merton-type investment amount ((mu - r) / sigma^2) (1 / alpha) e^{-r(T-t)}.
inline double xi_star(const ModelParams& params, double t) {
    return (params.mu - params.r) / (params.sigma * params.sigma) / params.alpha * std::exp(-params.r * (params.horizon - t));
}

/// Default bound K on admissible investment amounts: 10 max_t |xi_star(t)|,
/// or 1 when the Merton amount vanishes identically.
inline double default_investment_bound(const ModelParams& params) {
    const double peak = std::max(std::abs(xi_star(params, 0.0)), std::abs(xi_star(params, params.horizon)));
    return peak > 0.0 ? 10.0 * peak : 1.0;
}

/// Complete-information FOC function h_{lambda,c}(t, a) = lambda sum_D c_D gamma(t, a, D).
inline double h_lambda_c(const ClaimModel& claims, const ModelParams& params, double t, double a, double lambda,
                         std::span<const double> c) {
    if (c.size() != subset_count(claims.lines())) throw std::invalid_argument("h_lambda_c: weight vector size mismatch");
    double total = 0.0;
    for (std::size_t i = 0; i < c.size(); ++i) {
        if (c[i] == 0.0) continue;
        total += c[i] * gamma_factor(claims, params, t, a, LineSet(static_cast<std::uint32_t>(i + 1)));
    }
    return lambda * total;
}

/// Root a of (1 + theta) kappa = h_{lambda,c}(t, a), unclipped.
inline double solve_retention_root(const ClaimModel& claims, const ModelParams& params, double t, double lambda,
                                   std::span<const double> c) {
    const double target = (1.0 + params.theta) * params.kappa;
    return increasing_root([&](double a) { return h_lambda_c(claims, params, t, a, lambda, c) - target; });
}

/// Retention rule shared by every FOC function h: 0 when theta <= h(0)/kappa - 1,
/// 1 when theta >= h(1)/kappa - 1, otherwise the root of (1 + theta) kappa = h(a).
template <class H>
double clipped_retention(const H& h, const ModelParams& params) {
    if (params.theta <= h(0.0) / params.kappa - 1.0) return 0.0;
    if (params.theta >= h(1.0) / params.kappa - 1.0) return 1.0;
    const double target = (1.0 + params.theta) * params.kappa;
    const double root = increasing_root([&](double a) { return h(a) - target; });
    return std::clamp(root, 0.0, 1.0);
}

/// Optimal retention when the intensity lambda and thinning probabilities c are known.
inline double b_star_complete(const ClaimModel& claims, const ModelParams& params, double t, double lambda,
                              std::span<const double> c) {
    return clipped_retention([&](double a) { return h_lambda_c(claims, params, t, a, lambda, c); }, params);
}

/// Complete-information retention evaluated at the posterior means
/// u(p) = lambda_hat and w(q) = (beta_D + q_D) / |beta + q|. An upper bound on the
/// optimal partially observed retention under identical marginals.
inline double certainty_equivalent_retention(const ProblemSetup& setup, double t, const FilterState& state) {
    const auto w = thinning_posterior_mean(state, setup.dirichlet);
    return b_star_complete(setup.claims, setup.params, t, lambda_hat(state, setup.prior), w);
}

struct GammaRange {
    double min;
    double max;
};

/// min_D and max_D of gamma(t, a, D) over all nonempty subsets.
inline GammaRange gamma_range(const ClaimModel& claims, const ModelParams& params, double t, double a) {
    GammaRange out{std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
    for (LineSet set : enumerate_linesets(claims.lines())) {
        const double g = gamma_factor(claims, params, t, a, set);
        out.min = std::min(out.min, g);
        out.max = std::max(out.max, g);
    }
    return out;
}

inline double h_min(const ClaimModel& claims, const ModelParams& params, const IntensityPrior& prior, double t, double a) {
    return prior.lambdas.front() * gamma_range(claims, params, t, a).min;
}

inline double h_max(const ClaimModel& claims, const ModelParams& params, const IntensityPrior& prior, double t, double a) {
    return prior.lambdas.back() * gamma_range(claims, params, t, a).max;
}

struct AprioriRoots {
    double a_max;  // root of (1 + theta) kappa = h^max(t, a)
    double a_min;  // root of (1 + theta) kappa = h^min(t, a)
};

/// Unclipped roots a^max(t) <= a^min(t).
inline AprioriRoots apriori_roots(const ClaimModel& claims, const ModelParams& params, const IntensityPrior& prior,
                                  double t) {
    const double target = (1.0 + params.theta) * params.kappa;
    return {increasing_root([&](double a) { return h_max(claims, params, prior, t, a) - target; }),
            increasing_root([&](double a) { return h_min(claims, params, prior, t, a) - target; })};
}

struct RetentionBounds {
    double lower;
    double upper;
};

/// State-independent bounds: lower = clamp(a^max(t)), upper = clamp(a^min(t)),
/// where a^max and a^min solve (1 + theta) kappa = h^max and h^min.
inline RetentionBounds apriori_bounds(const ClaimModel& claims, const ModelParams& params, const IntensityPrior& prior,
                                      double t) {
    const double lower =
        clipped_retention([&](double a) { return h_max(claims, params, prior, t, a); }, params);
    const double upper =
        clipped_retention([&](double a) { return h_min(claims, params, prior, t, a); }, params);
    return {lower, upper};
}

/// Single-line, single-intensity retention from the Euler equation
/// (1 + theta) kappa = lambda E[Y e^{alpha b Y}], clipped to [0, 1].
inline double euler_retention_cramer_lundberg(const ClaimModel& claims, const ModelParams& params, double lambda) {
    if (claims.lines() != 1) throw std::invalid_argument("euler_retention_cramer_lundberg: needs exactly one line");
    return clipped_retention([&](double b) { return lambda * claims.tilted_mean(0, params.alpha * b); }, params);
}

/// Ratio g(t, J(p), v(q, D)) / g(t, p, q) used by the partially observed FOC function.
/// Arguments: time, current state, post-jump state for subset D.
using GRatio = std::function<double(double, const FilterState&, const FilterState&)>;

inline double unit_g_ratio(double, const FilterState&, const FilterState&) { return 1.0; }

/// Partially observed FOC function
/// h(t, p, q, a) = u(p) sum_D w(q)_D [g(t, J(p), v(q, D)) / g(t, p, q)] gamma(t, a, D).
/// With the unit ratio this reduces to h_{u(p), w(q)}(t, a).
inline double foc_function(const ProblemSetup& setup, double t, const FilterState& state, double a,
                           const GRatio& ratio = unit_g_ratio) {
    const auto w = thinning_posterior_mean(state, setup.dirichlet);
    double total = 0.0;
    for (LineSet set : enumerate_linesets(setup.lines())) {
        const FilterState after = jump_update(state, set, setup.prior);
        total += w[set.index()] * ratio(t, state, after) * gamma_factor(setup.claims, setup.params, t, a, set);
    }
    return lambda_hat(state, setup.prior) * total;
}

/// Retention b(t, p, q) from the partially observed FOC with a caller-supplied g ratio.
inline double partial_info_retention(const ProblemSetup& setup, double t, const FilterState& state,
                                     const GRatio& ratio = unit_g_ratio) {
    return clipped_retention([&](double a) { return foc_function(setup, t, state, a, ratio); }, setup.params);
}

// --- strategy specifications -------------------------------------------------

struct MertonInvestment {};
struct ConstantInvestment {
    double amount;
};
using InvestmentRule = std::variant<MertonInvestment, ConstantInvestment>;

struct FullReinsurance {};
struct ConstantRetention {
    double b;
};
struct CompleteInfoRetention {
    double lambda;
    std::vector<double> c;
};
struct CertaintyEquivalentRetention {};
struct AprioriLowerRetention {};
struct AprioriUpperRetention {};
using RetentionRule = std::variant<FullReinsurance, ConstantRetention, CompleteInfoRetention,
                                   CertaintyEquivalentRetention, AprioriLowerRetention, AprioriUpperRetention>;

struct StrategySpec {
    std::string name;
    InvestmentRule investment = MertonInvestment{};
    RetentionRule retention = FullReinsurance{};

    /// Checks the admissibility constraints that do not depend on the path.
    void validate(const ProblemSetup& setup, double investment_bound) const {
        if (const auto* c = std::get_if<ConstantInvestment>(&investment)) {
            if (!(std::abs(c->amount) <= investment_bound)) {
                throw ConfigError("strategy '" + name + "': constant investment exceeds the bound K = " +
                                  std::to_string(investment_bound));
            }
        }
        if (const auto* c = std::get_if<ConstantRetention>(&retention)) {
            if (!(c->b >= 0.0 && c->b <= 1.0)) throw ConfigError("strategy '" + name + "': retention outside [0, 1]");
        }
        if (const auto* c = std::get_if<CompleteInfoRetention>(&retention)) {
            const auto& lambdas = setup.prior.lambdas;
            if (!(c->lambda >= lambdas.front() && c->lambda <= lambdas.back())) {
                throw ConfigError("strategy '" + name + "': complete_info lambda outside [lambda_1, lambda_m]");
            }
            if (c->c.size() != subset_count(setup.lines())) {
                throw ConfigError("strategy '" + name + "': complete_info c must have 2^d - 1 entries");
            }
            double total = 0.0;
            for (double v : c->c) {
                if (!(v >= 0.0)) throw ConfigError("strategy '" + name + "': complete_info c must be nonnegative");
                total += v;
            }
            if (std::abs(total - 1.0) > 1e-12) throw ConfigError("strategy '" + name + "': complete_info c must sum to 1");
        }
    }
};

struct Controls {
    double xi;
    double b;
};

/// Investment amount and retention prescribed by `spec` in filter state `state` at time t.
inline Controls evaluate_strategy(const StrategySpec& spec, const ProblemSetup& setup, double t,
                                  const FilterState& state) {
    const double xi = std::visit(
        [&](const auto& rule) -> double {
            using T = std::decay_t<decltype(rule)>;
            if constexpr (std::is_same_v<T, MertonInvestment>) {
                return xi_star(setup.params, t);
            } else {
                return rule.amount;
            }
        },
        spec.investment);

    const double b = std::visit(
        [&](const auto& rule) -> double {
            using T = std::decay_t<decltype(rule)>;
            if constexpr (std::is_same_v<T, FullReinsurance>) {
                return 0.0;
            } else if constexpr (std::is_same_v<T, ConstantRetention>) {
                return rule.b;
            } else if constexpr (std::is_same_v<T, CompleteInfoRetention>) {
                return b_star_complete(setup.claims, setup.params, t, rule.lambda, rule.c);
            } else if constexpr (std::is_same_v<T, CertaintyEquivalentRetention>) {
                return certainty_equivalent_retention(setup, t, state);
            } else if constexpr (std::is_same_v<T, AprioriLowerRetention>) {
                return apriori_bounds(setup.claims, setup.params, setup.prior, t).lower;
            } else {
                return apriori_bounds(setup.claims, setup.params, setup.prior, t).upper;
            }
        },
        spec.retention);
    return {xi, b};
}

/// True when the retention never depends on the filter state.
inline bool retention_is_state_free(const StrategySpec& spec) {
    return !std::holds_alternative<CertaintyEquivalentRetention>(spec.retention);
}

}  // namespace reinsure
