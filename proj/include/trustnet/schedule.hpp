#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "trustnet/errors.hpp"

namespace trustnet {

// Honesty schedule: gamma_at(l) is the probability that a shop currently
// rated l behaves honestly in the next transaction; gamma_bot is the same
// probability for a brand-new, untested shop.
//
// Three kinds:
//   constant           gamma_l = gamma for all l
//   geometric-approach gamma_l = 1 - (1 - gamma1) * rho^(l-1), rho in (0,1);
//                      the dishonesty deficit decays geometrically, so the
//                      infinite product G = prod gamma_l stays positive
//   sleeper            honest while l < L, always dishonest once l >= L
struct GammaSchedule {
    enum class Kind { Constant, GeometricApproach, Sleeper };

    Kind kind = Kind::Constant;
    double gamma_bot = 1.0; // honesty probability of an untested shop

    // constant
    double gamma = 1.0;
    // geometric-approach
    double gamma1 = 0.9;
    double rho = 0.5;
    // sleeper
    std::uint64_t sleeper_threshold = 1;

    static GammaSchedule constant(double g, double g_bot = 1.0) {
        validate_probability("gamma", g);
        validate_probability("gamma_bot", g_bot);
        GammaSchedule s;
        s.kind = Kind::Constant;
        s.gamma = g;
        s.gamma_bot = g_bot;
        return s;
    }

    static GammaSchedule geometric_approach(double g1, double r, double g_bot = 1.0) {
        validate_probability("gamma1", g1);
        validate_probability("gamma_bot", g_bot);
        if (!(r > 0.0 && r < 1.0))
            throw ConfigError("geometric-approach schedule needs rho in (0,1)");
        GammaSchedule s;
        s.kind = Kind::GeometricApproach;
        s.gamma1 = g1;
        s.rho = r;
        s.gamma_bot = g_bot;
        return s;
    }

    static GammaSchedule sleeper(std::uint64_t threshold, double g_bot = 1.0) {
        validate_probability("gamma_bot", g_bot);
        if (threshold == 0)
            throw ConfigError("sleeper threshold must be >= 1");
        GammaSchedule s;
        s.kind = Kind::Sleeper;
        s.sleeper_threshold = threshold;
        s.gamma_bot = g_bot;
        return s;
    }

    // Honesty probability for a shop rated l >= 1.
    double gamma_at(std::uint64_t l) const {
        switch (kind) {
        case Kind::Constant:
            return gamma;
        case Kind::GeometricApproach:
            return 1.0 - (1.0 - gamma1) * std::pow(rho, static_cast<double>(l) - 1.0);
        case Kind::Sleeper:
            return l < sleeper_threshold ? 1.0 : 0.0;
        }
        return 1.0;
    }

    // log G_n = sum_{l=1..n} log gamma_l; log G_0 = 0. Returned as a prefix
    // table so callers can evaluate densities for all n in one pass.
    std::vector<double> log_gamma_prefix(std::uint64_t n) const {
        std::vector<double> prefix(n + 1, 0.0);
        for (std::uint64_t l = 1; l <= n; ++l)
            prefix[l] = prefix[l - 1] + std::log(gamma_at(l));
        return prefix;
    }

    // Truncation bound sum_{l>n} (1 - gamma_l) for the tail dropped when G
    // is estimated from the first n factors. Only the geometric-approach
    // kind has a closed form; constant(1) and sleepers are exact (0 or the
    // product is already 0), constant(g<1) diverges.
    double g_truncation_bound(std::uint64_t n) const {
        switch (kind) {
        case Kind::Constant:
            return gamma >= 1.0 ? 0.0 : std::numeric_limits<double>::infinity();
        case Kind::GeometricApproach:
            return (1.0 - gamma1) * std::pow(rho, static_cast<double>(n)) / (1.0 - rho);
        case Kind::Sleeper:
            return std::numeric_limits<double>::infinity(); // G is exactly 0
        }
        return 0.0;
    }

    std::string describe() const {
        switch (kind) {
        case Kind::Constant:
            return "constant(" + std::to_string(gamma) + ")";
        case Kind::GeometricApproach:
            return "geometric(gamma1=" + std::to_string(gamma1) +
                   ",rho=" + std::to_string(rho) + ")";
        case Kind::Sleeper:
            return "sleeper(L=" + std::to_string(sleeper_threshold) + ")";
        }
        return "?";
    }

private:
    static void validate_probability(const char* name, double p) {
        if (!(p >= 0.0 && p <= 1.0))
            throw ConfigError(std::string(name) + " must lie in [0,1]");
    }
};

} // namespace trustnet
