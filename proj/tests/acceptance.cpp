// Acceptance run: one PASS/FAIL line per primary criterion.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "reinsure/reinsure.hpp"

using namespace reinsure;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool pass;
    std::string detail;
};

int failures = 0;

void report(const std::string& name, const std::function<Outcome()>& check) {
    const auto start = std::chrono::steady_clock::now();
    Outcome out;
    try {
        out = check();
    } catch (const std::exception& e) {
        out = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (!out.pass) ++failures;
    std::printf("[%s] %s: %s (%.2fs)\n", out.pass ? "PASS" : "FAIL", name.c_str(), out.detail.c_str(), secs);
    std::fflush(stdout);
}

std::string fmt(const char* pattern, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, pattern, args...);
    return buf;
}

std::vector<double> random_simplex(std::mt19937_64& rng, std::size_t m) {
    std::exponential_distribution<double> e(1.0);
    std::vector<double> p(m);
    double s = 0.0;
    for (auto& v : p) s += (v = e(rng));
    for (auto& v : p) v /= s;
    return p;
}

std::vector<std::vector<double>> read_numeric_csv(const fs::path& path) {
    std::ifstream in(path);
    std::string line;
    std::getline(in, line);  // header
    std::vector<std::vector<double>> rows;
    while (std::getline(in, line)) {
        std::vector<double> row;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) row.push_back(std::stod(cell));
        rows.push_back(std::move(row));
    }
    return rows;
}

Outcome filter_correctness() {
    const auto s = fixtures::paper_setup();
    std::mt19937_64 rng(101);
    std::uniform_real_distribution<double> dt_dist(0.0, 1.0);
    double worst = 0.0;
    for (int i = 0; i < 1000; ++i) {
        FilterState st{0.0, random_simplex(rng, 3), {0, 0, 0}};
        const double dt = dt_dist(rng);
        const auto closed = propagate(st, dt, s.prior);
        const auto ode = oracle::filter_ode_rk4(st.p, s.prior.lambdas, dt, 1e-3);
        for (std::size_t j = 0; j < 3; ++j) worst = std::max(worst, std::abs(closed.p[j] - ode[j]));
    }
    const auto jumped = jump_update(FilterState::initial(s.prior, s.dirichlet), LineSet::of({1}), s.prior);
    const std::vector<double> expected{0.8 / 3.4, 1.6 / 3.4, 1.0 / 3.4};
    double jump_err = 0.0;
    for (std::size_t j = 0; j < 3; ++j) jump_err = std::max(jump_err, std::abs(jumped.p[j] - expected[j]));
    return {worst <= 1e-6 && jump_err <= 1e-12,
            fmt("max |closed form - RK4| = %.3g over 1000 pairs (<= 1e-6), jump map error %.3g (<= 1e-12)", worst,
                jump_err)};
}

Outcome martingale() {
    const auto s = fixtures::paper_setup();
    const std::size_t n = 10000;
    std::vector<std::vector<double>> terminal(3, std::vector<double>(n));
    parallel_for(n, [&](std::size_t i) {
        auto streams = PathStreams::for_path(2024, i);
        const auto sc = draw_scenario(s, streams);
        const auto st = state_before(sc, s, std::nextafter(s.params.horizon, 2 * s.params.horizon));
        for (std::size_t j = 0; j < 3; ++j) terminal[j][i] = st.p[j];
    });
    bool ok = true;
    std::string detail;
    for (std::size_t j = 0; j < 3; ++j) {
        const auto e = summarize(terminal[j]);
        const double z = std::abs(e.mean - s.prior.pi[j]) / e.std_error;
        ok = ok && z <= 3.0;
        detail += fmt("%sp_%zu(T) mean %.5f vs %.2f (%.2f SE)", j ? ", " : "", j + 1, e.mean, s.prior.pi[j], z);
    }
    return {ok, detail + "; 10000 scenarios, limit 3 SE"};
}

Outcome dirichlet_conjugacy() {
    const auto s = fixtures::paper_setup();
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<std::uint64_t> count(0, 500);
    std::size_t mismatches = 0;
    for (int i = 0; i < 1000; ++i) {
        FilterState st{0.0, s.prior.pi, {count(rng), count(rng), count(rng)}};
        const auto w = thinning_posterior_mean(st, s.dirichlet);
        double norm = 0.0;
        for (std::size_t d = 0; d < 3; ++d) norm += s.dirichlet.beta[d] + static_cast<double>(st.q[d]);
        for (std::size_t d = 0; d < 3; ++d) {
            if (w[d] != (s.dirichlet.beta[d] + static_cast<double>(st.q[d])) / norm) ++mismatches;
        }
        const auto post = posterior_dirichlet(st, s.dirichlet);
        for (std::size_t d = 0; d < 3; ++d) {
            if (post.beta[d] != s.dirichlet.beta[d] + static_cast<double>(st.q[d])) ++mismatches;
        }
    }
    return {mismatches == 0, fmt("%zu mismatches over 1000 count vectors", mismatches)};
}

Outcome strategy_roots() {
    const auto u = fixtures::unit_claim_setup();
    const std::vector<double> one{1.0};
    const double analytic = b_star_complete(u.claims, u.params, 0.0, 1.0, one);
    const double analytic_root = solve_retention_root(u.claims, u.params, 0.0, 1.0, one);
    bool ok = std::abs(analytic - 1.0) <= 1e-10 && std::abs(analytic_root - 1.0) <= 1e-10;

    auto s = fixtures::paper_setup();
    s.params.kappa = 2.5;
    const std::vector<double> c{0.40, 0.35, 0.25};
    double prev_b = -1.0, prev_root = -1e300, worst_residual = 0.0;
    int monotone_violations = 0, interior = 0;
    for (int k = 0; k < 50; ++k) {
        s.params.theta = 0.41 + 0.06 * k;
        const double target = (1 + s.params.theta) * s.params.kappa;
        for (double t : {0.0, 5.0, 10.0}) {
            const double root = solve_retention_root(s.claims, s.params, t, 3.4, c);
            worst_residual =
                std::max(worst_residual, std::abs(h_lambda_c(s.claims, s.params, t, root, 3.4, c) - target) / target);
        }
        const double root = solve_retention_root(s.claims, s.params, 0.0, 3.4, c);
        const double b = b_star_complete(s.claims, s.params, 0.0, 3.4, c);
        if (b > 0.0 && b < 1.0) ++interior;
        if (b < prev_b || root <= prev_root) ++monotone_violations;
        prev_b = b;
        prev_root = root;
    }
    ok = ok && monotone_violations == 0 && worst_residual <= 1e-8 && interior > 0;
    return {ok, fmt("unit case b = %.12f (root %.12f); %d monotonicity violations on 50 thetas (%d interior); "
                    "max relative residual %.3g (<= 1e-8)",
                    analytic, analytic_root, monotone_violations, interior, worst_residual)};
}

Outcome sandwich() {
    std::size_t violations = 0, checked = 0;
    std::string detail;
    for (double kappa : {fixtures::kPaperKappa, 2.0}) {
        auto s = fixtures::paper_setup();
        s.params.kappa = kappa;
        std::vector<std::size_t> bad(100, 0), inside(100, 0);
        parallel_for(100, [&](std::size_t k) {
            const double t = s.params.horizon * static_cast<double>(k) / 99.0;
            const auto bounds = apriori_bounds(s.claims, s.params, s.prior, t);
            std::mt19937_64 rng(1000 + k);
            std::uniform_int_distribution<std::uint64_t> count(0, 60);
            for (int i = 0; i < 1000; ++i) {
                FilterState st{t, random_simplex(rng, 3), {count(rng), count(rng), count(rng)}};
                const double ce = certainty_equivalent_retention(s, t, st);
                if (!(bounds.lower <= ce && ce <= bounds.upper)) ++bad[k];
                if (ce > 0.0 && ce < 1.0) ++inside[k];
            }
        });
        std::size_t v = 0, in = 0;
        for (std::size_t k = 0; k < 100; ++k) {
            v += bad[k];
            in += inside[k];
        }
        violations += v;
        checked += 100000;
        detail += fmt("%skappa %.6g: %zu violations, %zu interior b_ce", detail.empty() ? "" : "; ", kappa, v, in);
    }
    return {violations == 0, detail + fmt(" (%zu checks)", checked)};
}

Outcome cramer_lundberg() {
    ProblemSetup s = fixtures::unit_claim_setup();
    s.claims = ClaimModel::identical(TruncatedExponential(1.0, 3.0), 1);
    s.params.alpha = 0.2;
    s.params.eta = 0.3;
    s.params.horizon = 10.0;
    const std::vector<double> one{1.0};
    double worst = 0.0;
    int interior = 0;
    for (double theta : {0.4, 0.6, 1.0}) {
        s.params.theta = theta;
        for (double lam : {0.9, 1.2, 1.5, 1.8, 2.5}) {
            s.prior = {{lam}, {1.0}};
            const double euler = euler_retention_cramer_lundberg(s.claims, s.params, lam);
            if (euler > 0.0 && euler < 1.0) ++interior;
            for (int k = 0; k <= 100; ++k) {
                const double t = 0.1 * k;
                worst = std::max(worst, std::abs(euler - b_star_complete(s.claims, s.params, t, lam, one)));
            }
        }
    }
    return {worst <= 1e-10 && interior > 0,
            fmt("max |euler - b_star| = %.3g over 15 (theta, lambda) x 101 times (<= 1e-10), %d interior", worst,
                interior)};
}

Outcome surplus_integrator() {
    const auto s = fixtures::paper_setup();
    const auto& p = s.params;
    const StrategySpec quiet{"quiet", ConstantInvestment{0.0}, FullReinsurance{}};
    auto streams = PathStreams::for_path(1, 0);
    const auto sc = draw_scenario(s, streams, {4.0, std::nullopt});
    Rng brownian = streams.brownian;
    const double numeric = simulate_path(sc, s, quiet, 1e-4, brownian).terminal_wealth();
    const double exact = p.x0 * std::exp(p.r * p.horizon) + premium_rate(p, 0.0) * std::expm1(p.r * p.horizon) / p.r;
    const double ode_err = std::abs(numeric - exact);

    const StrategySpec ce{"ce", MertonInvestment{}, CertaintyEquivalentRetention{}};
    auto shifted = s;
    shifted.params.x0 += 250.0;
    double worst = 0.0;
    for (std::uint64_t path = 0; path < 20; ++path) {
        auto st = PathStreams::for_path(77, path);
        const auto scenario = draw_scenario(s, st);
        Rng b1 = st.brownian, b2 = st.brownian;
        const double x = simulate_path(scenario, s, ce, 0.01, b1).terminal_wealth();
        const double y = simulate_path(scenario, shifted, ce, 0.01, b2).terminal_wealth();
        const double expected = x + 250.0 * std::exp(p.r * p.horizon);
        worst = std::max(worst, std::abs(y - expected) / std::abs(expected));
    }
    return {ode_err <= 1e-3 && worst <= 1e-9,
            fmt("X_T = %.6f vs closed form %.6f (error %.3g <= 1e-3); translation relative error %.3g (<= 1e-9)",
                numeric, exact, ode_err, worst)};
}

Outcome g_structure() {
    const auto s = fixtures::paper_setup();
    const StrategySpec spec{"const", MertonInvestment{}, ConstantRetention{0.5}};
    SimulationOptions opt;
    opt.n_paths = 10000;
    opt.dt_max = 0.05;
    std::mt19937_64 rng(55);
    std::uniform_real_distribution<double> tdist(0.0, 9.0);
    std::uniform_int_distribution<std::uint64_t> count(0, 20);
    bool ok = true;
    std::string detail;
    for (int triple = 0; triple < 3; ++triple) {
        const FilterState st{tdist(rng), random_simplex(rng, 3), {count(rng), count(rng), count(rng)}};
        opt.seed = 900 + static_cast<std::uint64_t>(triple);
        const auto base = estimate_g(s, spec, st, opt);

        double mix = 0.0, var = base.std_error * base.std_error;
        for (std::size_t j = 0; j < 3; ++j) {
            FilterState ej = st;
            ej.p.assign(3, 0.0);
            ej.p[j] = 1.0;
            const auto g = estimate_g(s, spec, ej, opt);
            mix += st.p[j] * g.mean;
            var += st.p[j] * st.p[j] * g.std_error * g.std_error;
        }
        const double z_lin = std::abs(base.mean - mix) / std::sqrt(var);

        const auto w = thinning_posterior_mean(st, s.dirichlet);
        double dmix = 0.0, dvar = base.std_error * base.std_error;
        for (LineSet set : enumerate_linesets(2)) {
            FilterState v = st;
            v.q[set.index()] += 1;
            const auto g = estimate_g(s, spec, v, opt);
            dmix += w[set.index()] * g.mean;
            dvar += w[set.index()] * w[set.index()] * g.std_error * g.std_error;
        }
        const double z_mix = std::abs(base.mean - dmix) / std::sqrt(dvar);
        ok = ok && z_lin <= 3.0 && z_mix <= 3.0;
        detail += fmt("%st=%.2f: linearity %.2f SE, mixture %.2f SE", triple ? "; " : "", st.t, z_lin, z_mix);
    }
    return {ok, detail + " (limit 3 combined SE, 10000 paths)"};
}

Outcome entropic_expansion() {
    std::mt19937_64 rng(31);
    std::normal_distribution<double> normal(100.0, 10.0);
    std::vector<double> x(1000000);
    for (auto& v : x) v = normal(rng);
    const auto e = summarize(x);
    const double var = e.std_error * e.std_error * static_cast<double>(x.size());
    const double alpha = 0.01;
    const double risk = entropic_risk(x, alpha);
    const double gap = std::abs(risk - (e.mean - 0.5 * alpha * var));
    return {gap <= 1e-3, fmt("entropic %.6f vs mean - alpha/2 var %.6f, gap %.3g (<= 1e-3)", risk,
                             e.mean - 0.5 * alpha * var, gap)};
}

Outcome figure_shapes() {
    auto cfg = load_config(std::string(REINSURE_SOURCE_DIR) + "/configs/paper.json");
    const auto dir = fs::temp_directory_path() / ("reinsure_acceptance_" + std::to_string(::getpid()));
    fs::remove_all(dir);
    cfg.output_dir = dir.string();
    const auto& p = cfg.setup.params;

    const auto filter = read_numeric_csv(cmd_filter_demo(cfg));
    // p_2 is the posterior weight of the pinned intensity 4
    const double p_true_0 = filter.front()[2], p_true_T = filter.back()[2];
    const bool filter_ok = *cfg.simulate.pin.lambda == cfg.setup.prior.lambdas[1] && p_true_T > p_true_0;

    const auto files = cmd_surplus(cfg);
    const auto full = read_numeric_csv(files.at(0));
    bool jump_free = true;
    for (const auto& row : full) jump_free = jump_free && row[2] == 0.0;
    const double xt = full.back()[1];
    const double riskless = p.x0 * std::exp(p.r * p.horizon);
    const bool surplus_ok = jump_free && xt < riskless;

    std::size_t rows = 0, bad = 0;
    for (const auto& f : cmd_bounds(cfg)) {
        for (const auto& row : read_numeric_csv(f)) {
            ++rows;
            if (!(row[1] <= row[3] && row[3] <= row[2])) ++bad;
        }
    }
    fs::remove_all(dir);
    return {filter_ok && surplus_ok && bad == 0 && rows > 0,
            fmt("p_true %.4f -> %.4f; full reinsurance X_T %.4f < %.4f, jump-free %s; bounds %zu/%zu rows ordered",
                p_true_0, p_true_T, xt, riskless, jump_free ? "yes" : "no", rows - bad, rows)};
}

}  // namespace

int main() {
    report("filter correctness", filter_correctness);
    report("martingale check", martingale);
    report("Dirichlet conjugacy", dirichlet_conjugacy);
    report("strategy roots", strategy_roots);
    report("sandwich property", sandwich);
    report("Cramer-Lundberg consistency", cramer_lundberg);
    report("surplus integrator", surplus_integrator);
    report("g structure", g_structure);
    report("entropic expansion", entropic_expansion);
    report("figure shapes", figure_shapes);
    std::printf("%d of 10 criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}
