#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <stdexcept>
#include <vector>

#include "claims.hpp"

namespace reinsure {

/// Independent engine for (seed, path index, stream id). Paths never share
/// engines, so results do not depend on how paths are scheduled.
inline Rng make_stream(std::uint64_t seed, std::uint64_t path, std::uint64_t stream) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(path), static_cast<std::uint32_t>(path >> 32),
                      static_cast<std::uint32_t>(stream), 0x5eed5eedu};
    return Rng(seq);
}

/// Per-path engines. Keeping the draws for the intensity, the thinning
/// probabilities, the event sequence and the Brownian increments apart lets
/// common-random-number comparisons stay aligned when only one ingredient changes.
struct PathStreams {
    Rng intensity;
    Rng thinning;
    Rng events;
    Rng brownian;

    static PathStreams for_path(std::uint64_t seed, std::uint64_t path) {
        return {make_stream(seed, path, 0), make_stream(seed, path, 1), make_stream(seed, path, 2),
                make_stream(seed, path, 3)};
    }
};

/// Inverse-CDF categorical draw from `weights` (need not be normalized) using one uniform.
inline std::size_t sample_categorical(std::span<const double> weights, double uniform) {
    double total = 0.0;
    for (double w : weights) total += w;
    const double target = uniform * total;
    double acc = 0.0;
    for (std::size_t i = 0; i < weights.size(); ++i) {
        acc += weights[i];
        if (target < acc) return i;
    }
    // uniform ~ 1 with rounding: last index with positive weight
    for (std::size_t i = weights.size(); i-- > 0;) {
        if (weights[i] > 0.0) return i;
    }
    throw std::invalid_argument("sample_categorical: all weights are zero");
}

/// Dirichlet draw as normalized independent Gamma(beta_i, 1) variates.
inline std::vector<double> sample_dirichlet(std::span<const double> beta, Rng& rng) {
    std::vector<double> out(beta.size());
    double total = 0.0;
    for (std::size_t i = 0; i < beta.size(); ++i) {
        std::gamma_distribution<double> gamma(beta[i], 1.0);
        out[i] = gamma(rng);
        total += out[i];
    }
    for (double& v : out) v /= total;
    return out;
}

inline double uniform01(Rng& rng) { return std::uniform_real_distribution<double>(0.0, 1.0)(rng); }

}  // namespace reinsure
