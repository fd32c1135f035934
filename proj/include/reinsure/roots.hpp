#pragma once

#include <cmath>
#include <string>

#include "errors.hpp"

namespace reinsure {

struct RootOptions {
    double lower = -1.0;
    double upper = 2.0;
    double tolerance = 1e-12;  // absolute, in the argument
    int max_expansions = 64;
};

/// Root of a strictly increasing function by bisection. The initial bracket is
/// widened by doubling its width on the failing side until the sign
/// changes. NaN values or a bracket that never closes raise DomainError.
template <class F>
double increasing_root(const F& f, RootOptions opt = {}) {
    double lo = opt.lower;
    double hi = opt.upper;
    double flo = f(lo);
    double fhi = f(hi);
    auto check = [](double v) {
        if (std::isnan(v)) throw DomainError("root bracketing hit a NaN function value");
    };
    check(flo);
    check(fhi);
    for (int k = 0; flo > 0.0; ++k) {
        if (k == opt.max_expansions) throw DomainError("root bracketing failed below a = " + std::to_string(lo));
        lo -= hi - lo;
        flo = f(lo);
        check(flo);
    }
    for (int k = 0; fhi < 0.0; ++k) {
        if (k == opt.max_expansions) throw DomainError("root bracketing failed above a = " + std::to_string(hi));
        hi += hi - lo;
        fhi = f(hi);
        check(fhi);
    }
    while (hi - lo > opt.tolerance) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        const double fm = f(mid);
        check(fm);
        if (fm == 0.0) return mid;
        (fm < 0.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace reinsure
