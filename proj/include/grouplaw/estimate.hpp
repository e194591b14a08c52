#pragma once

#include <cmath>
#include <cstdint>

#include "grouplaw/errors.hpp"

namespace grouplaw {

// Monte Carlo result with a 95% Wilson score interval.
struct Estimate {
    long long successes = 0;
    long long trials = 0;
    double p_hat = 0.0;
    double ci_lo = 0.0;
    double ci_hi = 0.0;
    std::uint64_t seed = 0;

    bool operator==(const Estimate&) const = default;
};

inline constexpr double kWilsonZ95 = 1.9599639845400545;

inline Estimate wilson_estimate(long long successes, long long trials, std::uint64_t seed,
                                double z = kWilsonZ95) {
    if (trials <= 0) throw ArgumentError("wilson_estimate: trials must be positive");
    if (successes < 0 || successes > trials)
        throw ArgumentError("wilson_estimate: successes out of range");
    Estimate e;
    e.successes = successes;
    e.trials = trials;
    e.seed = seed;
    const double n = static_cast<double>(trials);
    const double p = static_cast<double>(successes) / n;
    e.p_hat = p;
    const double z2 = z * z;
    const double denom = 1.0 + z2 / n;
    const double center = p + z2 / (2.0 * n);
    const double margin = z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n));
    e.ci_lo = (center - margin) / denom;
    e.ci_hi = (center + margin) / denom;
    if (e.ci_lo < 0.0) e.ci_lo = 0.0;
    if (e.ci_hi > 1.0) e.ci_hi = 1.0;
    return e;
}

inline bool ci_contains(const Estimate& e, double p) { return e.ci_lo <= p && p <= e.ci_hi; }

// Strict separation: every value in a's interval is below every value in b's.
inline bool ci_below(const Estimate& a, const Estimate& b) { return a.ci_hi < b.ci_lo; }

}  // namespace grouplaw
