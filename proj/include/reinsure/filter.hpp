#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "model.hpp"

namespace reinsure {

/// Posterior state: time, intensity posterior p over {lambda_1..lambda_m},
/// and per-subset shock counts q (indexed by LineSet::index()).
struct FilterState {
    double t = 0.0;
    std::vector<double> p;
    std::vector<std::uint64_t> q;

    /// Prior state at time t0: p = pi, q = 0.
    static FilterState initial(const IntensityPrior& prior, const DirichletPrior& dir, double t0 = 0.0) {
        return FilterState{t0, prior.pi, std::vector<std::uint64_t>(dir.beta.size(), 0)};
    }

    std::uint64_t events() const { return std::accumulate(q.begin(), q.end(), std::uint64_t{0}); }
};

namespace detail {

inline void normalize(std::vector<double>& p) {
    const double total = std::accumulate(p.begin(), p.end(), 0.0);
    if (!(total > 0) || !std::isfinite(total)) throw DomainError("filter: posterior weights lost all mass");
    for (double& v : p) v /= total;
}

}  // namespace detail

/// Flow of the filter between claim events over a time step dt:
/// p_j <- p_j e^{-lambda_j dt} / sum_k p_k e^{-lambda_k dt}.
/// Weights are taken relative to the smallest lambda carrying mass, so large dt
/// cannot underflow all entries.
inline FilterState propagate(const FilterState& state, double dt, const IntensityPrior& prior) {
    if (!(dt >= 0.0)) throw std::invalid_argument("propagate: dt must be nonnegative");
    if (state.p.size() != prior.size()) throw std::invalid_argument("propagate: state/prior dimension mismatch");
    FilterState next = state;
    double base = prior.lambdas.back();
    for (std::size_t j = 0; j < next.p.size(); ++j) {
        if (next.p[j] > 0.0) base = std::min(base, prior.lambdas[j]);
    }
    for (std::size_t j = 0; j < next.p.size(); ++j) {
        if (next.p[j] > 0.0) next.p[j] *= std::exp(-(prior.lambdas[j] - base) * dt);
    }
    detail::normalize(next.p);
    next.t = state.t + dt;
    return next;
}

/// Instantaneous update at a claim event hitting the lines in `set`:
/// p_j <- lambda_j p_j / sum_k lambda_k p_k and q_set += 1.
inline FilterState jump_update(const FilterState& state, LineSet set, const IntensityPrior& prior) {
    if (state.p.size() != prior.size()) throw std::invalid_argument("jump_update: state/prior dimension mismatch");
    if (set.index() >= state.q.size()) throw std::invalid_argument("jump_update: subset outside the count vector");
    FilterState next = state;
    for (std::size_t j = 0; j < next.p.size(); ++j) next.p[j] *= prior.lambdas[j];
    detail::normalize(next.p);
    next.q[set.index()] += 1;
    return next;
}

/// Posterior mean intensity sum_k lambda_k p_k.
inline double lambda_hat(const FilterState& state, const IntensityPrior& prior) {
    double out = 0.0;
    for (std::size_t k = 0; k < prior.size(); ++k) out += prior.lambdas[k] * state.p.at(k);
    return out;
}

/// Posterior mean of the thinning probabilities, (beta_D + q_D) / |beta + q|.
inline std::vector<double> thinning_posterior_mean(const FilterState& state, const DirichletPrior& dir) {
    if (state.q.size() != dir.beta.size()) throw std::invalid_argument("thinning_posterior_mean: size mismatch");
    std::vector<double> w(dir.beta.size());
    double norm = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i) {
        w[i] = dir.beta[i] + static_cast<double>(state.q[i]);
        norm += w[i];
    }
    for (double& v : w) v /= norm;
    return w;
}

/// Posterior Dirichlet parameter beta + q.
inline DirichletPrior posterior_dirichlet(const FilterState& state, const DirichletPrior& dir) {
    DirichletPrior out = dir;
    for (std::size_t i = 0; i < out.beta.size(); ++i) out.beta[i] += static_cast<double>(state.q.at(i));
    return out;
}

}  // namespace reinsure
