#pragma once

#include <cmath>

#include "reinsure/reinsure.hpp"

namespace fixtures {

inline const double kPaperKappa = 17.0 / (4.0 - 4.0 * std::exp(-3.0));

/// Two lines, lambda in {2, 4, 5}, beta = ({1}:8, {2}:7, {1,2}:5), truncated
/// exponential claims (rate 1, cutoff 3) and the market/premium constants of
/// the reference experiment.
inline reinsure::ProblemSetup paper_setup() {
    reinsure::ProblemSetup s;
    s.params.r = 0.01;
    s.params.mu = 0.2;
    s.params.sigma = 3.0;
    s.params.alpha = 0.2;
    s.params.eta = 0.4;
    s.params.theta = 0.6;
    s.params.kappa = kPaperKappa;
    s.params.horizon = 10.0;
    s.params.x0 = 100.0;
    s.prior = {{2.0, 4.0, 5.0}, {0.4, 0.4, 0.2}};
    s.dirichlet = {{8.0, 7.0, 5.0}};
    s.claims = reinsure::ClaimModel::identical(reinsure::TruncatedExponential(1.0, 3.0), 2);
    return s;
}

/// Single line with unit claims, lambda = 1, kappa = 1, alpha = 1, r = 0, theta = e - 1.
inline reinsure::ProblemSetup unit_claim_setup() {
    reinsure::ProblemSetup s;
    s.params.r = 0.0;
    s.params.mu = 0.0;
    s.params.sigma = 1.0;
    s.params.alpha = 1.0;
    s.params.eta = 0.5;
    s.params.theta = std::exp(1.0) - 1.0;
    s.params.kappa = 1.0;
    s.params.horizon = 1.0;
    s.params.x0 = 0.0;
    s.prior = {{1.0}, {1.0}};
    s.dirichlet = {{1.0}};
    s.claims = reinsure::ClaimModel::identical(reinsure::DeterministicClaim(1.0), 1);
    return s;
}

}  // namespace fixtures
