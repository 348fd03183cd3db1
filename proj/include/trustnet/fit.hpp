#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "trustnet/dynamics.hpp"
#include "trustnet/errors.hpp"
#include "trustnet/rng.hpp"

namespace trustnet {

enum class TailModel { PowerLaw, Geometric };

inline const char* tail_model_name(TailModel m) {
    return m == TailModel::PowerLaw ? "power" : "geometric";
}

// Maximum-likelihood fit of the histogram tail x >= x_min under two rival
// models:
//
//   power      p(x) ~ x^-a, discrete MLE via the continuous approximation
//              a = 1 + N / sum ln(x_i / (x_min - 1/2))
//   geometric  p(x) = q (1-q)^(x - x_min), q = N / sum (x_i - x_min + 1)
//
// Both log-likelihoods are reported; `preferred` is the larger one. A
// heavy (power) tail favors the first, an exponentially trimmed tail the
// second.
struct TailFit {
    TailModel preferred = TailModel::PowerLaw;
    double power_exponent = 0.0;
    double power_loglik = 0.0;
    double geometric_rate = 0.0;
    double geometric_loglik = 0.0;
    std::uint64_t x_min = 0;
    std::uint64_t n_tail = 0;
};

inline TailFit fit_tail(const RatingHistogram& hist, std::uint64_t x_min,
                        std::uint64_t min_observations = 50) {
    if (x_min < 1) throw ConfigError("x_min must be >= 1");
    std::uint64_t n = 0;
    double sum_log = 0.0;    // sum ln(x / (x_min - 1/2))
    double sum_excess = 0.0; // sum (x - x_min)
    const double shift = static_cast<double>(x_min) - 0.5;
    for (const auto& [rating, count] : hist.counts) {
        if (rating < x_min) continue;
        n += count;
        const auto cnt = static_cast<double>(count);
        sum_log += cnt * std::log(static_cast<double>(rating) / shift);
        sum_excess += cnt * static_cast<double>(rating - x_min);
    }
    if (n < min_observations)
        throw NumericError("fit_tail: only " + std::to_string(n) + " observations >= x_min=" +
                           std::to_string(x_min) +
                           "; run a larger simulation or lower x_min");
    if (sum_excess == 0.0)
        throw NumericError("fit_tail: degenerate tail, all observations equal x_min");

    TailFit fit;
    fit.x_min = x_min;
    fit.n_tail = n;
    const auto nd = static_cast<double>(n);

    fit.power_exponent = 1.0 + nd / sum_log;
    fit.power_loglik =
        nd * (std::log(fit.power_exponent - 1.0) - std::log(shift)) -
        fit.power_exponent * sum_log;

    fit.geometric_rate = nd / (sum_excess + nd);
    fit.geometric_loglik =
        nd * std::log(fit.geometric_rate) + sum_excess * std::log1p(-fit.geometric_rate);

    fit.preferred =
        fit.power_loglik >= fit.geometric_loglik ? TailModel::PowerLaw : TailModel::Geometric;
    return fit;
}

// Exact sampler for the discrete power law p(x) ~ x^-a on {x_min, ...}
// by inverse CDF over a truncated support. The truncation point is chosen
// so the dropped mass is far below 1/n for any n used here.
inline std::vector<std::uint64_t> sample_discrete_power_law(double exponent,
                                                            std::uint64_t x_min,
                                                            std::size_t n, Rng& rng,
                                                            std::uint64_t support_max = 2000000) {
    if (!(exponent > 1.0)) throw ConfigError("power-law exponent must exceed 1");
    if (x_min < 1) throw ConfigError("x_min must be >= 1");
    std::vector<double> cdf;
    cdf.reserve(1024);
    double total = 0.0;
    for (std::uint64_t x = x_min; x <= support_max; ++x) {
        total += std::pow(static_cast<double>(x), -exponent);
        cdf.push_back(total);
    }
    std::vector<std::uint64_t> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double u = rng.uniform01() * total;
        const auto it = std::lower_bound(cdf.begin(), cdf.end(), u);
        out[i] = x_min + static_cast<std::uint64_t>(it - cdf.begin());
    }
    return out;
}

inline RatingHistogram histogram_from_samples(const std::vector<std::uint64_t>& xs) {
    RatingHistogram h;
    for (auto x : xs) ++h.counts[x];
    h.total = xs.size();
    return h;
}

} // namespace trustnet
