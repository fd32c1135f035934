#pragma once

#include "claims.hpp"
#include "model.hpp"

namespace reinsure {

/// Everything that defines one instance of the control problem.
struct ProblemSetup {
    ModelParams params;
    IntensityPrior prior;
    DirichletPrior dirichlet;
    ClaimModel claims;

    int lines() const { return claims.lines(); }

    void validate() const {
        params.validate();
        prior.validate();
        dirichlet.validate();
        if (dirichlet.lines() != claims.lines()) {
            throw ConfigError("model.beta covers " + std::to_string(dirichlet.lines()) + " lines but claims has " +
                              std::to_string(claims.lines()));
        }
    }
};

}  // namespace reinsure
