#pragma once

#include <bit>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "errors.hpp"

namespace reinsure {

inline constexpr int kMaxLines = 16;

/// Nonempty subset of the business lines {1, ..., d}, stored as a bitmask
/// (bit i-1 set when line i is affected). The mask value is the canonical
/// ordering of subsets everywhere: slot index = mask - 1.
class LineSet {
  public:
    explicit LineSet(std::uint32_t mask) : mask_(mask) {
        if (mask == 0 || mask >= (1u << kMaxLines)) {
            throw std::invalid_argument("LineSet: mask must be in [1, 2^16 - 1], got " + std::to_string(mask));
        }
    }

    /// Build from 1-based line numbers.
    static LineSet of(std::initializer_list<int> lines) {
        std::uint32_t mask = 0;
        for (int line : lines) {
            if (line < 1 || line > kMaxLines) throw std::invalid_argument("LineSet: line index out of range");
            mask |= 1u << (line - 1);
        }
        return LineSet(mask);
    }

    /// Parse a comma-joined list of 1-based line numbers, e.g. "1,2".
    static LineSet parse(const std::string& text) {
        std::uint32_t mask = 0;
        std::size_t pos = 0;
        while (pos <= text.size()) {
            std::size_t comma = text.find(',', pos);
            if (comma == std::string::npos) comma = text.size();
            std::string token = text.substr(pos, comma - pos);
            std::size_t used = 0;
            int line = 0;
            try {
                line = std::stoi(token, &used);
            } catch (const std::exception&) {
                throw ConfigError("invalid line subset key '" + text + "'");
            }
            if (used != token.size() || line < 1 || line > kMaxLines) {
                throw ConfigError("invalid line subset key '" + text + "'");
            }
            mask |= 1u << (line - 1);
            pos = comma + 1;
        }
        if (mask == 0) throw ConfigError("empty line subset key");
        return LineSet(mask);
    }

    std::uint32_t mask() const { return mask_; }
    std::size_t index() const { return mask_ - 1; }
    int size() const { return std::popcount(mask_); }

    /// `line` is 0-based here.
    bool contains(int line) const { return (mask_ >> line) & 1u; }

    /// Highest 1-based line number present.
    int max_line() const { return std::bit_width(mask_); }

    std::string to_string() const {
        std::string out;
        for (int i = 0; i < kMaxLines; ++i) {
            if (!contains(i)) continue;
            if (!out.empty()) out += ',';
            out += std::to_string(i + 1);
        }
        return out;
    }

    friend bool operator==(LineSet, LineSet) = default;

  private:
    std::uint32_t mask_;
};

/// Number of nonempty subsets of d lines.
inline std::size_t subset_count(int lines) { return (std::size_t{1} << lines) - 1; }

/// All 2^d - 1 nonempty subsets in increasing mask order.
inline std::vector<LineSet> enumerate_linesets(int lines) {
    if (lines < 1 || lines > kMaxLines) {
        throw std::invalid_argument("enumerate_linesets: line count must be in [1, 16], got " + std::to_string(lines));
    }
    std::vector<LineSet> out;
    out.reserve(subset_count(lines));
    for (std::uint32_t mask = 1; mask <= subset_count(lines); ++mask) out.emplace_back(mask);
    return out;
}

/// Market, utility and premium constants.
struct ModelParams {
    double r = 0.0;      // risk-free rate
    double mu = 0.0;     // drift of the risky asset
    double sigma = 1.0;  // volatility, > 0
    double alpha = 1.0;  // absolute risk aversion, > 0
    double eta = 0.0;    // insurer safety loading, > 0
    double theta = 0.0;  // reinsurer safety loading, > eta
    double kappa = 1.0;  // premium scale, > 0
    double horizon = 1.0;
    double x0 = 0.0;

    void validate() const {
        auto require = [](bool ok, const char* msg) {
            if (!ok) throw ConfigError(msg);
        };
        require(std::isfinite(r) && std::isfinite(mu) && std::isfinite(x0), "model: r, mu and x0 must be finite");
        require(sigma > 0 && std::isfinite(sigma), "model: sigma must be > 0");
        require(alpha > 0 && std::isfinite(alpha), "model: alpha must be > 0");
        require(eta > 0, "model: eta must be > 0");
        require(theta > eta, "model: theta must exceed eta");
        require(kappa > 0 && std::isfinite(kappa), "model: kappa must be > 0");
        require(horizon > 0 && std::isfinite(horizon), "model: T must be > 0");
    }

    /// Compounding factor e^{r(T-t)} used throughout the strategy formulas.
    double growth(double t) const { return std::exp(r * (horizon - t)); }
};

/// Finite prior for the unknown claim-arrival intensity.
struct IntensityPrior {
    std::vector<double> lambdas;  // strictly increasing, > 0
    std::vector<double> pi;       // prior weights on the simplex

    std::size_t size() const { return lambdas.size(); }

    void validate() const {
        if (lambdas.empty()) throw ConfigError("model: lambdas must be nonempty");
        if (lambdas.size() != pi.size()) {
            throw ConfigError("model: 'lambdas' has " + std::to_string(lambdas.size()) + " entries but 'pi' has " +
                              std::to_string(pi.size()));
        }
        if (!(lambdas.front() > 0)) throw ConfigError("model: lambdas must be positive");
        for (std::size_t j = 1; j < lambdas.size(); ++j) {
            if (!(lambdas[j] > lambdas[j - 1])) throw ConfigError("model: lambdas must be strictly increasing");
        }
        double total = 0.0;
        for (double w : pi) {
            if (!(w >= 0)) throw ConfigError("model: pi entries must be nonnegative");
            total += w;
        }
        if (std::abs(total - 1.0) > 1e-12) throw ConfigError("model: pi must sum to 1");
    }
};

/// Dirichlet prior on the thinning probabilities, indexed by LineSet::index().
struct DirichletPrior {
    std::vector<double> beta;

    /// Number of lines d with beta.size() == 2^d - 1.
    int lines() const {
        const auto n = beta.size() + 1;
        return std::has_single_bit(n) ? std::countr_zero(n) : -1;
    }

    double total() const { return std::accumulate(beta.begin(), beta.end(), 0.0); }

    void validate() const {
        const int d = lines();
        if (d < 1 || d > kMaxLines) throw ConfigError("model: beta must have 2^d - 1 entries for 1 <= d <= 16");
        for (double b : beta) {
            if (!(b > 0) || !std::isfinite(b)) throw ConfigError("model: beta entries must be positive");
        }
    }
};

/// Net premium income at retention level b: (eta - theta) kappa + (1 + theta) kappa b.
inline double premium_rate(const ModelParams& params, double b) {
    if (!(b >= 0.0 && b <= 1.0)) throw std::invalid_argument("premium_rate: retention must lie in [0, 1]");
    return (params.eta - params.theta) * params.kappa + (1.0 + params.theta) * params.kappa * b;
}

/// Expected aggregate claim rate under the priors:
/// sum_k lambda_k pi_k * sum_D beta_D / |beta| * sum_{i in D} E[Y^i].
/// `line_means` holds E[Y^i] for i = 1..d.
inline double default_kappa(const IntensityPrior& prior, const DirichletPrior& dir, std::span<const double> line_means) {
    const int d = dir.lines();
    if (d < 1 || static_cast<std::size_t>(d) != line_means.size()) {
        throw std::invalid_argument("default_kappa: Dirichlet prior and claim model disagree on the line count");
    }
    if (prior.lambdas.size() != prior.pi.size()) throw std::invalid_argument("default_kappa: lambdas/pi size mismatch");

    double mean_intensity = 0.0;
    for (std::size_t k = 0; k < prior.size(); ++k) mean_intensity += prior.lambdas[k] * prior.pi[k];

    const double norm = dir.total();
    double per_event = 0.0;
    for (LineSet set : enumerate_linesets(d)) {
        double charged = 0.0;
        for (int i = 0; i < d; ++i) {
            if (set.contains(i)) charged += line_means[i];
        }
        per_event += dir.beta[set.index()] / norm * charged;
    }
    return mean_intensity * per_event;
}

}  // namespace reinsure
