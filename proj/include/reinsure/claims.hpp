#pragma once

#include <cmath>
#include <functional>
#include <memory>
#include <random>
#include <string>
#include <variant>
#include <vector>

#include "errors.hpp"
#include "model.hpp"
#include "quadrature.hpp"

namespace reinsure {

using Rng = std::mt19937_64;

/// Right-truncated exponential law with density rate e^{-rate y} / (1 - e^{-rate cutoff}) on (0, cutoff).
class TruncatedExponential {
  public:
    TruncatedExponential(double rate, double cutoff) : rate_(rate), cutoff_(cutoff) {
        if (!(rate > 0) || !(cutoff > 0) || !std::isfinite(rate) || !std::isfinite(cutoff)) {
            throw ConfigError("trunc_exp claims need rate > 0 and cutoff > 0");
        }
        mass_ = -std::expm1(-rate_ * cutoff_);
    }

    double rate() const { return rate_; }
    double cutoff() const { return cutoff_; }

    double mean() const { return tilted_mean(0.0); }

    /// E[e^{zY}] = rate (e^{(z-rate) c} - 1) / ((z - rate)(1 - e^{-rate c})).
    double mgf(double z) const { return rate_ / mass_ * kernel(z - rate_); }

    /// E[Y e^{zY}], the derivative of mgf in z.
    double tilted_mean(double z) const { return rate_ / mass_ * kernel_derivative(z - rate_); }

    /// Inverse-CDF draw, always strictly inside (0, cutoff).
    double sample(Rng& rng) const {
        std::uniform_real_distribution<double> unif(0.0, 1.0);
        for (;;) {
            const double y = -std::log1p(-unif(rng) * mass_) / rate_;
            if (y > 0.0 && y < cutoff_) return y;
        }
    }

  private:
    // (e^{s c} - 1) / s and its s-derivative; power series near s = 0 where the
    // closed forms cancel.
    double kernel(double s) const {
        const double x = s * cutoff_;
        if (std::abs(x) < 1e-3) return cutoff_ * series(x, 0);
        return std::expm1(x) / s;
    }

    double kernel_derivative(double s) const {
        const double x = s * cutoff_;
        if (std::abs(x) < 0.5) return cutoff_ * cutoff_ * series(x, 1);
        return (cutoff_ * std::exp(x) * s - std::expm1(x)) / (s * s);
    }

    // order 0: sum_{n>=1} x^{n-1}/n!; order 1: sum_{n>=2} (n-1) x^{n-2}/n!
    static double series(double x, int order) {
        double sum = 0.0;
        double power = 1.0;  // x^{n-1-order}
        double factorial = 1.0;
        for (int n = 1; n < 30; ++n) {
            factorial *= n;
            if (order == 0) {
                sum += power / factorial;
                power *= x;
            } else if (n >= 2) {
                sum += (n - 1) * power / factorial;
                power *= x;
            }
        }
        return sum;
    }

    double rate_;
    double cutoff_;
    double mass_;
};

/// Point mass at `value`.
class DeterministicClaim {
  public:
    explicit DeterministicClaim(double value) : value_(value) {
        if (!(value > 0) || !std::isfinite(value)) throw ConfigError("deterministic claims need value > 0");
    }
    double value() const { return value_; }
    double mean() const { return value_; }
    double mgf(double z) const { return std::exp(z * value_); }
    double tilted_mean(double z) const { return value_ * std::exp(z * value_); }
    double sample(Rng&) const { return value_; }

  private:
    double value_;
};

/// Law given only by a density on a bounded support [lower, upper]. Transforms
/// come from adaptive Simpson quadrature; sampling inverts the numerically
/// integrated CDF unless an explicit sampler is supplied.
class QuadratureClaim {
  public:
    using Density = std::function<double(double)>;
    using Sampler = std::function<double(Rng&)>;

    QuadratureClaim(Density density, double lower, double upper, Sampler sampler = {}, double tol = 1e-10)
        : density_(std::move(density)), lower_(lower), upper_(upper), sampler_(std::move(sampler)), tol_(tol) {
        if (!density_ || !(upper > lower) || !(lower >= 0)) {
            throw ConfigError("quadrature claims need a density on [lower, upper] with 0 <= lower < upper");
        }
        mass_ = adaptive_simpson(density_, lower_, upper_, tol_);
        if (!(mass_ > 0)) throw ConfigError("quadrature claim density has no mass");
    }

    double mean() const { return tilted_mean(0.0); }

    double mgf(double z) const {
        return adaptive_simpson([&](double y) { return std::exp(z * y) * density_(y); }, lower_, upper_, tol_) / mass_;
    }

    double tilted_mean(double z) const {
        return adaptive_simpson([&](double y) { return y * std::exp(z * y) * density_(y); }, lower_, upper_, tol_) /
               mass_;
    }

    double sample(Rng& rng) const {
        if (sampler_) return sampler_(rng);
        std::uniform_real_distribution<double> unif(0.0, 1.0);
        const double target = unif(rng) * mass_;
        double lo = lower_;
        double hi = upper_;
        for (int it = 0; it < 60; ++it) {
            const double mid = 0.5 * (lo + hi);
            (adaptive_simpson(density_, lower_, mid, tol_) < target ? lo : hi) = mid;
        }
        return 0.5 * (lo + hi);
    }

  private:
    Density density_;
    double lower_;
    double upper_;
    Sampler sampler_;
    double tol_;
    double mass_ = 1.0;
};

using MarginalLaw = std::variant<TruncatedExponential, DeterministicClaim, QuadratureClaim>;

/// Claim-size law under the product assumption: independent marginals, one per line.
class ClaimModel {
  public:
    ClaimModel() = default;
    explicit ClaimModel(std::vector<MarginalLaw> marginals) : marginals_(std::move(marginals)) {
        if (marginals_.empty() || marginals_.size() > static_cast<std::size_t>(kMaxLines)) {
            throw ConfigError("claims: need between 1 and 16 marginal laws");
        }
    }

    /// Same marginal law on every one of `lines` lines.
    static ClaimModel identical(const MarginalLaw& law, int lines) {
        return ClaimModel(std::vector<MarginalLaw>(static_cast<std::size_t>(lines), law));
    }

    int lines() const { return static_cast<int>(marginals_.size()); }
    const MarginalLaw& marginal(int line) const { return marginals_.at(static_cast<std::size_t>(line)); }

    double mean(int line) const {
        return std::visit([](const auto& law) { return law.mean(); }, marginal(line));
    }
    double mgf(int line, double z) const {
        return std::visit([z](const auto& law) { return law.mgf(z); }, marginal(line));
    }
    double tilted_mean(int line, double z) const {
        return std::visit([z](const auto& law) { return law.tilted_mean(z); }, marginal(line));
    }

    std::vector<double> means() const {
        std::vector<double> out;
        for (int i = 0; i < lines(); ++i) out.push_back(mean(i));
        return out;
    }

    /// One independent draw per line. Every coordinate is drawn, charged or not,
    /// so RNG consumption does not depend on which lines an event hits.
    std::vector<double> sample_vector(Rng& rng) const {
        std::vector<double> out;
        out.reserve(marginals_.size());
        for (const auto& law : marginals_) {
            out.push_back(std::visit([&rng](const auto& l) { return l.sample(rng); }, law));
        }
        return out;
    }

  private:
    std::vector<MarginalLaw> marginals_;
};

inline std::vector<double> sample_claim_vector(const ClaimModel& claims, Rng& rng) { return claims.sample_vector(rng); }

inline double default_kappa(const IntensityPrior& prior, const DirichletPrior& dir, const ClaimModel& claims) {
    const auto means = claims.means();
    return default_kappa(prior, dir, std::span<const double>(means));
}

/// Tilt argument u = alpha a e^{r(T-t)} shared by gamma and the FOC functions.
inline double tilt(const ModelParams& params, double t, double a) { return params.alpha * a * params.growth(t); }

/// gamma(t, a, D) = sum_{i in D} E[Y_i e^{u Y_i}] prod_{j in D, j != i} E[e^{u Y_j}], u = alpha a e^{r(T-t)}.
inline double gamma_factor(const ClaimModel& claims, const ModelParams& params, double t, double a, LineSet set) {
    if (set.max_line() > claims.lines()) throw std::invalid_argument("gamma_factor: subset references a missing line");
    const double u = tilt(params, t, a);
    const int d = claims.lines();

    std::vector<double> mgf(static_cast<std::size_t>(d), 1.0);
    for (int i = 0; i < d; ++i) {
        if (set.contains(i)) mgf[i] = claims.mgf(i, u);
    }
    double total = 0.0;
    for (int i = 0; i < d; ++i) {
        if (!set.contains(i)) continue;
        double term = claims.tilted_mean(i, u);
        for (int j = 0; j < d; ++j) {
            if (j != i && set.contains(j)) term *= mgf[j];
        }
        total += term;
    }
    if (!std::isfinite(total)) {
        throw DomainError("gamma_factor: non-finite claim transform at tilt u = " + std::to_string(u));
    }
    return total;
}

}  // namespace reinsure
