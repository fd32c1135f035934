#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <stdexcept>
#include <vector>

#include "claims.hpp"
#include "filter.hpp"
#include "model.hpp"
#include "parallel.hpp"
#include "random.hpp"
#include "setup.hpp"
#include "strategy.hpp"

namespace reinsure {

/// One trigger event: time, affected lines, and the full claim vector
/// (only the coordinates in `lines` are charged).
struct ClaimEvent {
    double time;
    LineSet lines;
    std::vector<double> sizes;

    double charged() const {
        double total = 0.0;
        for (std::size_t i = 0; i < sizes.size(); ++i) {
            if (lines.contains(static_cast<int>(i))) total += sizes[i];
        }
        return total;
    }
};

struct Scenario {
    double start = 0.0;
    double lambda_true = 0.0;
    std::vector<double> alpha_true;
    std::vector<ClaimEvent> events;  // strictly increasing times in (start, T]
};

/// Optional pinned realizations of the unknown parameters.
struct ScenarioPin {
    std::optional<double> lambda;
    std::optional<std::vector<double>> alpha;
};

/// Scenario on (start, T] with Lambda ~ weights over prior.lambdas and
/// alpha ~ Dir(beta), unless pinned. Event times come from exponential
/// inter-arrivals, affected subsets from categorical(alpha) draws.
inline Scenario draw_scenario_from(const ProblemSetup& setup, double start, std::span<const double> intensity_weights,
                                   std::span<const double> beta, PathStreams& streams, const ScenarioPin& pin = {}) {
    Scenario out;
    out.start = start;
    const double u = uniform01(streams.intensity);
    out.lambda_true = pin.lambda ? *pin.lambda : setup.prior.lambdas[sample_categorical(intensity_weights, u)];
    if (pin.alpha) {
        if (pin.alpha->size() != beta.size()) throw ConfigError("pinned alpha must have 2^d - 1 entries");
        out.alpha_true = *pin.alpha;
    } else {
        out.alpha_true = sample_dirichlet(beta, streams.thinning);
    }
    if (!(out.lambda_true > 0.0)) throw ConfigError("pinned lambda must be positive");

    std::exponential_distribution<double> wait(out.lambda_true);
    double t = start;
    for (;;) {
        const double dt = wait(streams.events);
        if (dt <= 0.0) continue;
        t += dt;
        if (t > setup.params.horizon) break;
        const auto slot = sample_categorical(out.alpha_true, uniform01(streams.events));
        auto sizes = setup.claims.sample_vector(streams.events);
        out.events.push_back({t, LineSet(static_cast<std::uint32_t>(slot + 1)), std::move(sizes)});
    }
    return out;
}

/// Scenario from the priors on (0, T].
inline Scenario draw_scenario(const ProblemSetup& setup, PathStreams& streams, const ScenarioPin& pin = {}) {
    return draw_scenario_from(setup, 0.0, setup.prior.pi, setup.dirichlet.beta, streams, pin);
}

/// Scenario on (state.t, T] conditional on the filter state: Lambda ~ p, alpha ~ Dir(beta + q).
inline Scenario draw_conditional_scenario(const ProblemSetup& setup, const FilterState& state, PathStreams& streams) {
    const auto posterior = posterior_dirichlet(state, setup.dirichlet);
    return draw_scenario_from(setup, state.t, state.p, posterior.beta, streams);
}

struct GridPoint {
    double t;
    int event;  // index into Scenario::events, or -1
};

/// Uniform grid on [start, T] with step <= dt_max, with every event time
/// inserted exactly. A grid node within 1e-12 T of an event is replaced by it.
inline std::vector<GridPoint> build_grid(const Scenario& scenario, double horizon, double dt_max) {
    if (!(dt_max > 0.0)) throw std::invalid_argument("dt_max must be positive");
    const double span = horizon - scenario.start;
    const auto steps = static_cast<std::size_t>(std::max(1.0, std::ceil(span / dt_max - 1e-9)));
    const double snap = 1e-12 * std::max(1.0, horizon);

    std::vector<GridPoint> grid;
    grid.reserve(steps + 1 + scenario.events.size());
    std::size_t next_event = 0;
    for (std::size_t k = 0; k <= steps; ++k) {
        const double t = k == steps ? horizon : scenario.start + span * static_cast<double>(k) / static_cast<double>(steps);
        while (next_event < scenario.events.size() && scenario.events[next_event].time < t - snap) {
            grid.push_back({scenario.events[next_event].time, static_cast<int>(next_event)});
            ++next_event;
        }
        if (next_event < scenario.events.size() && std::abs(scenario.events[next_event].time - t) <= snap) {
            grid.push_back({scenario.events[next_event].time, static_cast<int>(next_event)});
            ++next_event;
        } else {
            grid.push_back({t, -1});
        }
    }
    return grid;
}

/// Row of a simulated path. X, p, q are post-event values at t; xi and b are
/// the controls applied on (t, t_next], computed from this row's state.
struct PathRow {
    double t;
    double X;
    double b;
    double xi;
    std::uint32_t event;  // LineSet mask of an event at t, or 0
    std::vector<double> p;
    std::vector<std::uint64_t> q;
};

struct PathRecord {
    std::vector<PathRow> rows;
    double terminal_utility = 0.0;

    double terminal_wealth() const { return rows.back().X; }
};

namespace detail {

/// Integrates the surplus along the grid. The linear r X part is propagated
/// exactly by e^{r dt}; premium, investment drift and diffusion use an
/// Euler-Maruyama step with controls frozen at the left endpoint. At an event
/// the surplus drops by the retention of the preceding step times the charged
/// claims, then the filter jumps. `on_row(row_state)` sees every grid row.
template <class OnRow>
double integrate_surplus(const Scenario& scenario, const ProblemSetup& setup, const StrategySpec& spec, double dt_max,
                         Rng& brownian, double x_start, const FilterState& start_state, OnRow&& on_row) {
    const auto& params = setup.params;
    const auto grid = build_grid(scenario, params.horizon, dt_max);
    std::normal_distribution<double> normal(0.0, 1.0);

    FilterState state = start_state;
    double x = x_start;
    Controls controls = evaluate_strategy(spec, setup, grid.front().t, state);
    on_row(grid.front().t, x, controls, std::uint32_t{0}, state);

    for (std::size_t k = 1; k < grid.size(); ++k) {
        const double t0 = grid[k - 1].t;
        const double t1 = grid[k].t;
        const double dt = t1 - t0;
        const double z = normal(brownian);
        x = std::exp(params.r * dt) * x +
            ((params.mu - params.r) * controls.xi + premium_rate(params, controls.b)) * dt +
            controls.xi * params.sigma * std::sqrt(dt) * z;
        state = propagate(state, dt, setup.prior);
        state.t = t1;

        std::uint32_t mask = 0;
        if (grid[k].event >= 0) {
            const auto& ev = scenario.events[static_cast<std::size_t>(grid[k].event)];
            x -= controls.b * ev.charged();
            state = jump_update(state, ev.lines, setup.prior);
            mask = ev.lines.mask();
        }
        controls = evaluate_strategy(spec, setup, t1, state);
        on_row(t1, x, controls, mask, state);
    }
    return x;
}

}  // namespace detail

inline double exponential_utility(double x, double alpha) { return -std::exp(-alpha * x); }

/// Simulates the surplus under `spec` along `scenario`, recording every grid row.
inline PathRecord simulate_path(const Scenario& scenario, const ProblemSetup& setup, const StrategySpec& spec,
                                double dt_max, Rng& brownian) {
    if (!(dt_max > 0.0)) throw std::invalid_argument("simulate_path: dt_max must be positive");
    PathRecord record;
    const auto start = FilterState::initial(setup.prior, setup.dirichlet, scenario.start);
    const double xt = detail::integrate_surplus(
        scenario, setup, spec, dt_max, brownian, setup.params.x0, start,
        [&](double t, double x, const Controls& c, std::uint32_t mask, const FilterState& s) {
            record.rows.push_back({t, x, c.b, c.xi, mask, s.p, s.q});
        });
    record.terminal_utility = exponential_utility(xt, setup.params.alpha);
    return record;
}

/// Filter rows (posterior, counts) on a grid with every event inserted.
struct FilterRow {
    double t;
    std::vector<double> p;
    double lambda_hat;
    std::vector<std::uint64_t> q;
    std::uint32_t event;
};

inline std::vector<FilterRow> filter_trajectory(const Scenario& scenario, const ProblemSetup& setup, double dt_max) {
    std::vector<FilterRow> rows;
    FilterState state = FilterState::initial(setup.prior, setup.dirichlet, scenario.start);
    double prev = scenario.start;
    for (const auto& node : build_grid(scenario, setup.params.horizon, dt_max)) {
        state = propagate(state, node.t - prev, setup.prior);
        state.t = node.t;
        prev = node.t;
        std::uint32_t mask = 0;
        if (node.event >= 0) {
            const auto& ev = scenario.events[static_cast<std::size_t>(node.event)];
            state = jump_update(state, ev.lines, setup.prior);
            mask = ev.lines.mask();
        }
        rows.push_back({node.t, state.p, lambda_hat(state, setup.prior), state.q, mask});
    }
    return rows;
}

/// Filter state at the left limit t-: events strictly before t are processed.
inline FilterState state_before(const Scenario& scenario, const ProblemSetup& setup, double t) {
    FilterState state = FilterState::initial(setup.prior, setup.dirichlet, scenario.start);
    for (const auto& ev : scenario.events) {
        if (!(ev.time < t)) break;
        state = propagate(state, ev.time - state.t, setup.prior);
        state.t = ev.time;
        state = jump_update(state, ev.lines, setup.prior);
    }
    state = propagate(state, t - state.t, setup.prior);
    state.t = t;
    return state;
}

struct SimulationOptions {
    std::size_t n_paths = 1000;
    double dt_max = 0.0;  // 0 selects 1e-3 T
    std::uint64_t seed = 1;
    ScenarioPin pin;
    unsigned workers = 0;

    double step(const ModelParams& params) const { return dt_max > 0.0 ? dt_max : 1e-3 * params.horizon; }
};

struct MonteCarloEstimate {
    double mean;
    double std_error;
};

inline MonteCarloEstimate summarize(std::span<const double> samples) {
    const auto n = static_cast<double>(samples.size());
    double mean = 0.0;
    for (double v : samples) mean += v;
    mean /= n;
    double ss = 0.0;
    for (double v : samples) ss += (v - mean) * (v - mean);
    const double var = samples.size() > 1 ? ss / (n - 1.0) : 0.0;
    return {mean, std::sqrt(var / n)};
}

struct ValueEstimate {
    double mean_utility;
    double std_error;
    std::vector<double> terminal_wealth;  // per path, in path-index order
};

/// Monte Carlo value E[-e^{-alpha X_T}] from X_0 = x0 (or `x_start` if given).
/// Path i uses PathStreams::for_path(seed, i) for both the scenario and the
/// Brownian increments, so strategies compared at the same seed share all
/// random numbers.
inline ValueEstimate estimate_value(const ProblemSetup& setup, const StrategySpec& spec, const SimulationOptions& opt,
                                    std::optional<double> x_start = std::nullopt) {
    if (opt.n_paths < 2) throw std::invalid_argument("estimate_value: need at least two paths");
    const double dt = opt.step(setup.params);
    const double x0 = x_start.value_or(setup.params.x0);
    std::vector<double> wealth(opt.n_paths);
    std::vector<double> utility(opt.n_paths);
    parallel_for(
        opt.n_paths,
        [&](std::size_t i) {
            auto streams = PathStreams::for_path(opt.seed, i);
            const auto scenario = draw_scenario(setup, streams, opt.pin);
            const auto start = FilterState::initial(setup.prior, setup.dirichlet, 0.0);
            wealth[i] = detail::integrate_surplus(scenario, setup, spec, dt, streams.brownian, x0, start,
                                                  [](auto&&...) {});
            utility[i] = exponential_utility(wealth[i], setup.params.alpha);
        },
        opt.workers);
    const auto est = summarize(utility);
    return {est.mean, est.std_error, std::move(wealth)};
}

/// Monte Carlo estimate of
/// g^{xi,b}(t, p, q) = E[exp{-int_t^T alpha e^{r(T-s)} ((mu - r) xi_s + c(b_s)) ds
///                          - int_t^T alpha sigma e^{r(T-s)} xi_s dW_s
///                          + sum_{t < T_n <= T} alpha b_{T_n-} e^{r(T-T_n)} sum_{i in Z_n} Y_n^i}]
/// with Lambda ~ p and alpha ~ Dir(beta + q). Controls are frozen on grid steps;
/// the time and Ito integrals of each frozen step are evaluated exactly.
inline MonteCarloEstimate estimate_g(const ProblemSetup& setup, const StrategySpec& spec, const FilterState& state,
                                     const SimulationOptions& opt) {
    if (opt.n_paths < 2) throw std::invalid_argument("estimate_g: need at least two paths");
    const auto& params = setup.params;
    const double dt_max = opt.step(params);
    const double r = params.r;
    // int_{t0}^{t1} e^{k r (T-s)} ds
    auto discount_integral = [&](double t0, double t1, double k) {
        if (r == 0.0) return t1 - t0;
        return (std::exp(k * r * (params.horizon - t0)) - std::exp(k * r * (params.horizon - t1))) / (k * r);
    };

    std::vector<double> samples(opt.n_paths);
    parallel_for(
        opt.n_paths,
        [&](std::size_t i) {
            auto streams = PathStreams::for_path(opt.seed, i);
            const auto scenario = draw_conditional_scenario(setup, state, streams);
            const auto grid = build_grid(scenario, params.horizon, dt_max);
            std::normal_distribution<double> normal(0.0, 1.0);

            FilterState s = state;
            Controls c = evaluate_strategy(spec, setup, s.t, s);
            double log_g = 0.0;
            for (std::size_t k = 1; k < grid.size(); ++k) {
                const double t0 = grid[k - 1].t;
                const double t1 = grid[k].t;
                const double z = normal(streams.brownian);
                log_g -= params.alpha * ((params.mu - r) * c.xi + premium_rate(params, c.b)) *
                         discount_integral(t0, t1, 1.0);
                log_g -= params.alpha * params.sigma * c.xi * std::sqrt(discount_integral(t0, t1, 2.0)) * z;
                s = propagate(s, t1 - t0, setup.prior);
                s.t = t1;
                if (grid[k].event >= 0) {
                    const auto& ev = scenario.events[static_cast<std::size_t>(grid[k].event)];
                    log_g += params.alpha * c.b * params.growth(t1) * ev.charged();
                    s = jump_update(s, ev.lines, setup.prior);
                }
                c = evaluate_strategy(spec, setup, t1, s);
            }
            samples[i] = std::exp(log_g);
        },
        opt.workers);
    return summarize(samples);
}

/// Entropic risk -(1/alpha) log E[e^{-alpha X}] of an empirical sample, via a
/// max-shifted log-sum-exp.
inline double entropic_risk(std::span<const double> wealth, double alpha) {
    if (wealth.empty()) throw std::invalid_argument("entropic_risk: empty sample");
    if (!(alpha > 0.0)) throw std::invalid_argument("entropic_risk: alpha must be positive");
    double shift = -std::numeric_limits<double>::infinity();
    for (double x : wealth) shift = std::max(shift, -alpha * x);
    double acc = 0.0;
    for (double x : wealth) acc += std::exp(-alpha * x - shift);
    const double log_mean = shift + std::log(acc / static_cast<double>(wealth.size()));
    return -log_mean / alpha;
}

}  // namespace reinsure
