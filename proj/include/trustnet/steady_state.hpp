#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

#include "trustnet/errors.hpp"
#include "trustnet/schedule.hpp"
#include "trustnet/specfun.hpp"

namespace trustnet {

// Parameters of the analytic steady state. The renormalizing constant
//
//     c = (1 - alpha) / (1 + alpha * gamma_bot)
//
// comes from the drift approximation S(t) ~ (1 + alpha*gamma_bot) t of the
// total trust mass; the tail exponent of the density is 1 + 1/c.
struct SteadyStateParams {
    double alpha = 0.1;
    GammaSchedule schedule;

    double gamma_bot() const { return schedule.gamma_bot; }

    double c() const { return (1.0 - alpha) / (1.0 + alpha * schedule.gamma_bot); }

    double tail_exponent() const { return 1.0 + 1.0 / c(); }

    void validate() const {
        if (!(alpha >= 0.0 && alpha <= 1.0))
            throw ConfigError("alpha must lie in [0,1]");
    }
};

// Density table upsilon_1..upsilon_N kept in log space: schedules with
// G_n -> 0 push the densities far below the double underflow threshold
// long before N = 10^4.
struct DensityTable {
    std::vector<double> log_values; // log upsilon_n at index n-1

    std::size_t size() const { return log_values.size(); }

    double log_value(std::uint64_t n) const { return log_values.at(n - 1); }

    double value(std::uint64_t n) const { return std::exp(log_value(n)); }

    std::vector<double> values() const {
        std::vector<double> out(log_values.size());
        for (std::size_t i = 0; i < out.size(); ++i) out[i] = std::exp(log_values[i]);
        return out;
    }
};

// Forward evaluation of the steady-state recurrence
//
//     upsilon_1 = alpha*gamma_bot / (c + 1)
//     upsilon_n = (n-1) gamma_{n-1} c / (n c + 1) * upsilon_{n-1}
inline DensityTable steady_state_recurrence(const SteadyStateParams& params,
                                            std::uint64_t n_max) {
    params.validate();
    if (n_max < 1) throw ConfigError("n_max must be >= 1");
    const double c = params.c();
    DensityTable table;
    table.log_values.reserve(n_max);
    const double base = params.alpha * params.gamma_bot();
    table.log_values.push_back(std::log(base) - std::log(c + 1.0)); // -inf when base = 0
    for (std::uint64_t n = 2; n <= n_max; ++n) {
        const double gamma_prev = params.schedule.gamma_at(n - 1);
        const double log_ratio = std::log(static_cast<double>(n - 1)) + std::log(gamma_prev) +
                                 std::log(c) - std::log(static_cast<double>(n) * c + 1.0);
        table.log_values.push_back(table.log_values.back() + log_ratio);
    }
    return table;
}

// Closed form upsilon_n = (alpha*gamma_bot*G_{n-1} / c) * B(n, 1 + 1/c),
// algebraically equal to the recurrence, evaluated through log Gamma.
inline double steady_state_closed_form_log(const SteadyStateParams& params, std::uint64_t n,
                                           double log_g_prefix) {
    const double c = params.c();
    const double base = params.alpha * params.gamma_bot();
    if (base == 0.0) return -std::numeric_limits<double>::infinity();
    return std::log(base) + log_g_prefix - std::log(c) +
           log_beta(static_cast<double>(n), 1.0 + 1.0 / c);
}

inline double steady_state_closed_form(const SteadyStateParams& params, std::uint64_t n) {
    params.validate();
    if (n < 1) throw ConfigError("n must be >= 1");
    double log_g = 0.0;
    for (std::uint64_t l = 1; l + 1 <= n; ++l) log_g += std::log(params.schedule.gamma_at(l));
    return std::exp(steady_state_closed_form_log(params, n, log_g));
}

// Whole-table variant sharing one pass over the gamma prefix sums.
inline DensityTable steady_state_closed_form_table(const SteadyStateParams& params,
                                                   std::uint64_t n_max) {
    params.validate();
    if (n_max < 1) throw ConfigError("n_max must be >= 1");
    const auto prefix = params.schedule.log_gamma_prefix(n_max > 0 ? n_max - 1 : 0);
    DensityTable table;
    table.log_values.reserve(n_max);
    for (std::uint64_t n = 1; n <= n_max; ++n)
        table.log_values.push_back(steady_state_closed_form_log(params, n, prefix[n - 1]));
    return table;
}

// Power-law asymptote w_n/J ~ (alpha*gamma_bot*G/c) n^-(1+1/c). G is the
// infinite honesty product, estimated from the first `g_cutoff` factors;
// when it vanishes the tail is exponential, not power, and the asymptote is
// flagged inapplicable (sleepers and constant gamma < 1).
struct PowerLawAsymptote {
    double exponent = 0.0;        // 1 + 1/c
    double log_coefficient = 0.0; // log(alpha*gamma_bot*G/c)
    double g_estimate = 1.0;
    double g_truncation_bound = 0.0;
    std::uint64_t g_cutoff = 0;
    bool applicable = true;

    double log_density(std::uint64_t n) const {
        return log_coefficient - exponent * std::log(static_cast<double>(n));
    }
    double density(std::uint64_t n) const { return std::exp(log_density(n)); }
};

inline PowerLawAsymptote power_law_asymptote(const SteadyStateParams& params,
                                             std::uint64_t g_cutoff = 10000) {
    params.validate();
    PowerLawAsymptote out;
    out.exponent = params.tail_exponent();
    out.g_cutoff = g_cutoff;
    double log_g = 0.0;
    for (std::uint64_t l = 1; l <= g_cutoff; ++l) {
        log_g += std::log(params.schedule.gamma_at(l));
        if (std::isinf(log_g)) break;
    }
    out.g_estimate = std::exp(log_g);
    out.g_truncation_bound = params.schedule.g_truncation_bound(g_cutoff);
    out.applicable = out.g_estimate > 1e-12;
    const double base = params.alpha * params.gamma_bot();
    out.log_coefficient = base == 0.0 ? -std::numeric_limits<double>::infinity()
                                      : std::log(base) + log_g - std::log(params.c());
    if (base == 0.0) out.applicable = false;
    return out;
}

inline double power_law_asymptote_density(const SteadyStateParams& params, std::uint64_t n) {
    return power_law_asymptote(params).density(n);
}

// --- finite-time check: the differential system ------------------------
//
//     dv_1/dt = alpha*gamma_bot - (c/t) v_1
//     dv_l/dt = (c/t) (gamma_{l-1} (l-1) v_{l-1} - l v_l)
//
// integrated with classic RK4 from t0 with fixed step h. The linear-in-t
// steady state means v_l(t)/t should approach upsilon_l; the integrator
// re-runs at half step until the two runs agree to `refine_tol`.

struct OdeOptions {
    double t0 = 1.0;
    double step = 0.01;
    double refine_tol = 1e-6;
    int max_refinements = 6;
};

struct OdeResult {
    double t_final = 0.0;
    std::vector<double> v;        // v_l(t_final), l = 1..N
    std::vector<double> v_over_t; // compare against upsilon_l
    double step_used = 0.0;
    int refinements = 0;
};

namespace detail {

inline std::vector<double> rk4_integrate(const SteadyStateParams& params, double t0,
                                         double t1, double h,
                                         std::vector<double> v) {
    const std::size_t n = v.size();
    const double c = params.c();
    const double inflow = params.alpha * params.gamma_bot();
    std::vector<double> gamma(n, 1.0);
    for (std::size_t l = 1; l < n; ++l)
        gamma[l] = params.schedule.gamma_at(static_cast<std::uint64_t>(l));

    auto deriv = [&](double t, const std::vector<double>& y, std::vector<double>& dy) {
        const double ct = c / t;
        dy[0] = inflow - ct * y[0];
        for (std::size_t l = 1; l < n; ++l)
            dy[l] = ct * (gamma[l] * static_cast<double>(l) * y[l - 1] -
                          static_cast<double>(l + 1) * y[l]);
    };

    const auto steps = static_cast<std::size_t>(std::ceil((t1 - t0) / h));
    const double step = (t1 - t0) / static_cast<double>(steps);
    std::vector<double> k1(n), k2(n), k3(n), k4(n), tmp(n);
    double t = t0;
    for (std::size_t s = 0; s < steps; ++s) {
        deriv(t, v, k1);
        for (std::size_t i = 0; i < n; ++i) tmp[i] = v[i] + 0.5 * step * k1[i];
        deriv(t + 0.5 * step, tmp, k2);
        for (std::size_t i = 0; i < n; ++i) tmp[i] = v[i] + 0.5 * step * k2[i];
        deriv(t + 0.5 * step, tmp, k3);
        for (std::size_t i = 0; i < n; ++i) tmp[i] = v[i] + step * k3[i];
        deriv(t + step, tmp, k4);
        for (std::size_t i = 0; i < n; ++i)
            v[i] += step / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        t = t0 + static_cast<double>(s + 1) * step;
    }
    return v;
}

} // namespace detail

inline OdeResult integrate_density_odes(const SteadyStateParams& params, double t_max,
                                        std::size_t n_levels, OdeOptions opts = {},
                                        const std::vector<double>* initial = nullptr) {
    params.validate();
    if (!(t_max > opts.t0)) throw ConfigError("t_max must exceed t0");
    if (n_levels < 1) throw ConfigError("need at least one density level");
    if (!(opts.step > 0.0) || opts.step > 0.01)
        throw ConfigError("step size must lie in (0, 0.01]");

    std::vector<double> v0(n_levels, 0.0);
    if (initial) {
        if (initial->size() != n_levels)
            throw ConfigError("initial data size mismatch");
        v0 = *initial;
    }

    OdeResult out;
    double h = opts.step;
    std::vector<double> coarse = detail::rk4_integrate(params, opts.t0, t_max, h, v0);
    for (int r = 0;; ++r) {
        std::vector<double> fine = detail::rk4_integrate(params, opts.t0, t_max, h / 2.0, v0);
        double disagreement = 0.0;
        for (std::size_t i = 0; i < n_levels; ++i) {
            const double scale = std::max(1.0, std::fabs(fine[i]));
            disagreement = std::max(disagreement, std::fabs(fine[i] - coarse[i]) / scale);
        }
        if (disagreement <= opts.refine_tol || r >= opts.max_refinements) {
            out.v = std::move(fine);
            out.step_used = h / 2.0;
            out.refinements = r;
            break;
        }
        coarse = std::move(fine);
        h /= 2.0;
    }
    out.t_final = t_max;
    out.v_over_t.resize(n_levels);
    for (std::size_t i = 0; i < n_levels; ++i) out.v_over_t[i] = out.v[i] / t_max;
    return out;
}

} // namespace trustnet
