#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "trustnet/errors.hpp"
#include "trustnet/network.hpp"
#include "trustnet/rng.hpp"
#include "trustnet/schedule.hpp"

namespace trustnet {

// Histogram of trust ratings: counts[l] = number of shops rated l.
struct RatingHistogram {
    std::map<std::uint64_t, std::uint64_t> counts;
    std::uint64_t total = 0;

    std::uint64_t count_at(std::uint64_t rating) const {
        auto it = counts.find(rating);
        return it == counts.end() ? 0 : it->second;
    }
};

struct Selection {
    enum class Kind { ReplaceMinimal, Proportional };
    Kind kind;
    std::uint32_t index;
};

namespace detail {

// Fenwick tree over integer trust weights; prefix-search drives the
// proportional shop selection in O(log J) per tick.
class FenwickU64 {
public:
    explicit FenwickU64(std::size_t n) : tree_(n + 1, 0), n_(n) {}

    void add(std::size_t i, std::int64_t delta) {
        for (std::size_t k = i + 1; k <= n_; k += k & (~k + 1))
            tree_[k] = static_cast<std::uint64_t>(static_cast<std::int64_t>(tree_[k]) + delta);
    }

    // Smallest index i with prefix_sum(i) > u, for u in [0, total).
    std::size_t upper_bound(std::uint64_t u) const {
        std::size_t pos = 0;
        std::size_t mask = 1;
        while ((mask << 1) <= n_) mask <<= 1;
        for (; mask > 0; mask >>= 1) {
            const std::size_t next = pos + mask;
            if (next <= n_ && tree_[next] <= u) {
                pos = next;
                u -= tree_[next];
            }
        }
        return pos; // 0-based
    }

private:
    std::vector<std::uint64_t> tree_;
    std::size_t n_;
};

} // namespace detail

// The shopper's private trust vector over J shops, with the bookkeeping
// that makes one simulation tick O(log J): a Fenwick tree over the weights
// and per-rating membership buckets (the lowest bucket is the replacement
// pool).
class TrustState {
public:
    TrustState(std::vector<std::uint64_t> initial_tau, std::uint64_t seed)
        : tau_(std::move(initial_tau)), rng_(seed),
          weights_(tau_.size()), positions_(tau_.size(), 0) {
        if (tau_.size() < 1)
            throw ConfigError("trust state needs at least one shop");
        for (std::size_t i = 0; i < tau_.size(); ++i) {
            weights_.add(i, static_cast<std::int64_t>(tau_[i]));
            total_ += tau_[i];
            bucket_insert(i, tau_[i]);
        }
    }

    std::size_t shops() const { return tau_.size(); }
    const std::vector<std::uint64_t>& tau() const { return tau_; }
    std::uint64_t tick() const { return tick_; }
    std::uint64_t total() const { return total_; }
    std::uint64_t min_rating() const { return levels_.begin()->first; }
    std::uint64_t replacements() const { return replacements_; }
    std::uint64_t resets() const { return resets_; }
    Rng& rng() { return rng_; }

    RatingHistogram histogram() const {
        RatingHistogram h;
        for (const auto& [rating, members] : levels_)
            h.counts[rating] = members.size();
        h.total = tau_.size();
        return h;
    }

    // -- used by the update operations ----------------------------------

    std::uint32_t pick_minimal() {
        const auto& pool = levels_.begin()->second;
        return pool[rng_.uniform_below(pool.size())];
    }

    std::uint32_t pick_proportional() {
        const std::uint64_t u = rng_.uniform_below(total_);
        return static_cast<std::uint32_t>(weights_.upper_bound(u));
    }

    void set_rating(std::uint32_t shop, std::uint64_t rating) {
        const std::uint64_t old = tau_[shop];
        if (old == rating) {
            ++tick_;
            return;
        }
        bucket_erase(shop, old);
        bucket_insert(shop, rating);
        weights_.add(shop, static_cast<std::int64_t>(rating) - static_cast<std::int64_t>(old));
        total_ += rating;
        total_ -= old;
        tau_[shop] = rating;
        ++tick_;
    }

    void note_replacement() { ++replacements_; }
    void note_reset() { ++resets_; }

private:
    void bucket_insert(std::size_t shop, std::uint64_t rating) {
        auto& members = levels_[rating];
        positions_[shop] = members.size();
        members.push_back(static_cast<std::uint32_t>(shop));
    }

    void bucket_erase(std::size_t shop, std::uint64_t rating) {
        auto it = levels_.find(rating);
        auto& members = it->second;
        const std::size_t pos = positions_[shop];
        members[pos] = members.back();
        positions_[members[pos]] = pos;
        members.pop_back();
        if (members.empty()) levels_.erase(it);
    }

    std::vector<std::uint64_t> tau_;
    Rng rng_;
    detail::FenwickU64 weights_;
    std::vector<std::size_t> positions_;
    std::map<std::uint64_t, std::vector<std::uint32_t>> levels_;
    std::uint64_t total_ = 0;
    std::uint64_t tick_ = 0;
    std::uint64_t replacements_ = 0;
    std::uint64_t resets_ = 0;
};

// One selection step. With probability alpha the shopper swaps out a shop
// of minimal rating for a new, untested one (uniform tie-break among the
// minima); otherwise she revisits shop i with probability tau_i / sum tau.
// A zero-rated shop is unreachable on the proportional branch, so if every
// shop is rated zero the replacement branch is the only one available; with
// alpha = 0 the process is stuck.
inline Selection select_shop(TrustState& state, double alpha) {
    if (!(alpha >= 0.0 && alpha <= 1.0))
        throw ConfigError("alpha must lie in [0,1]");
    const bool replace = state.rng().bernoulli(alpha);
    if (replace || state.total() == 0) {
        if (state.total() == 0 && alpha == 0.0)
            throw StuckStateError("all trust ratings are zero and alpha = 0");
        return {Selection::Kind::ReplaceMinimal, state.pick_minimal()};
    }
    return {Selection::Kind::Proportional, state.pick_proportional()};
}

struct SelectionContext {
    bool is_new;           // replacement introduces an untested shop
    std::uint64_t rating;  // current rating, for tested shops
};

// Honesty draw: Bernoulli(gamma_bot) for untested shops, Bernoulli(gamma_l)
// for a shop rated l. The sleeper schedule is deterministic on rated shops
// (honest strictly below the threshold) and consumes no randomness there.
inline bool sample_honesty(const GammaSchedule& schedule, SelectionContext ctx, Rng& rng) {
    if (ctx.is_new) return rng.bernoulli(schedule.gamma_bot);
    if (schedule.kind == GammaSchedule::Kind::Sleeper)
        return ctx.rating < schedule.sleeper_threshold;
    return rng.bernoulli(schedule.gamma_at(ctx.rating));
}

// The four-case update of the trust vector. Exactly one coordinate changes:
//   dishonest                 -> 0
//   honest, new shop          -> 1
//   honest, established shop  -> +1
inline void update_trust(TrustState& state, const Selection& sel, bool honest) {
    const std::uint64_t old = state.tau()[sel.index];
    if (sel.kind == Selection::Kind::ReplaceMinimal) {
        state.note_replacement();
        state.set_rating(sel.index, honest ? 1 : 0);
    } else if (honest) {
        state.set_rating(sel.index, old + 1);
    } else {
        state.note_reset();
        state.set_rating(sel.index, 0);
    }
}

// tau_i = (rig) sum_u sigma_u * A_ui: the recommender-side trust vector
// pushed through the recommendation matrix.
inline std::vector<double> derive_tau_from_sigma(const std::vector<double>& sigma,
                                                 const TrustMatrix& a,
                                                 RigKind kind = RigKind::NonnegReals) {
    if (sigma.size() != a.values.rows())
        throw ConfigError("derive_tau_from_sigma: sigma length != matrix rows");
    std::vector<double> tau(a.values.cols(), rig_zero(kind));
    for (std::size_t j = 0; j < a.values.cols(); ++j) {
        double acc = rig_zero(kind);
        for (std::size_t u = 0; u < a.values.rows(); ++u)
            acc = rig_add(kind, acc, rig_mul(kind, sigma[u], a.values(u, j)));
        tau[j] = acc;
    }
    return tau;
}

enum class InitMode { UniformTauOne, FromSigma };

enum class SnapshotPolicy { Geometric, FinalOnly };

struct SimConfig {
    std::uint64_t shops = 2;   // J
    double alpha = 0.0;
    GammaSchedule schedule;
    std::uint64_t steps = 1;
    std::uint64_t seed = 1u;
    InitMode init = InitMode::UniformTauOne;
    std::vector<double> initial_tau; // used by InitMode::FromSigma
    SnapshotPolicy snapshot = SnapshotPolicy::Geometric;

    void validate() const {
        if (shops < 2) throw ConfigError("J must be >= 2");
        if (!(alpha >= 0.0 && alpha <= 1.0)) throw ConfigError("alpha must lie in [0,1]");
        if (steps < 1) throw ConfigError("steps must be >= 1");
        if (init == InitMode::FromSigma && initial_tau.size() != shops)
            throw ConfigError("from-sigma init needs one derived rating per shop");
    }
};

struct SimResult {
    std::vector<std::uint64_t> final_tau;
    RatingHistogram final_histogram;
    std::vector<std::pair<std::uint64_t, RatingHistogram>> snapshots; // (t, histogram)
    std::uint64_t replacements = 0;
    std::uint64_t resets = 0;
    std::uint64_t final_total = 0;
};

// Runs the full trust process: per tick one selection, one honesty draw,
// one update. Deterministic for a given seed. Snapshots are taken at
// t = 1, 2, 4, 8, ... plus the final tick (power-law convergence is slow,
// log-spaced checkpoints keep the output small).
inline SimResult run_simulation(const SimConfig& config) {
    config.validate();
    std::vector<std::uint64_t> tau0(config.shops, 1);
    if (config.init == InitMode::FromSigma) {
        for (std::size_t i = 0; i < config.shops; ++i) {
            const double v = config.initial_tau[i];
            if (!(v >= 0.0) || !std::isfinite(v))
                throw ConfigError("derived initial trust must be nonnegative");
            tau0[i] = static_cast<std::uint64_t>(std::llround(v));
        }
    }
    TrustState state(std::move(tau0), config.seed);

    SimResult result;
    std::uint64_t next_snapshot = 1;
    for (std::uint64_t t = 0; t < config.steps; ++t) {
        const Selection sel = select_shop(state, config.alpha);
        const SelectionContext ctx{sel.kind == Selection::Kind::ReplaceMinimal,
                                   state.tau()[sel.index]};
        const bool honest = sample_honesty(config.schedule, ctx, state.rng());
        update_trust(state, sel, honest);
        if (config.snapshot == SnapshotPolicy::Geometric && state.tick() == next_snapshot &&
            state.tick() != config.steps) {
            result.snapshots.emplace_back(state.tick(), state.histogram());
            next_snapshot *= 2;
        } else if (state.tick() >= next_snapshot) {
            next_snapshot *= 2;
        }
    }
    result.final_histogram = state.histogram();
    result.snapshots.emplace_back(state.tick(), result.final_histogram);
    result.final_tau = state.tau();
    result.replacements = state.replacements();
    result.resets = state.resets();
    result.final_total = state.total();
    return result;
}

} // namespace trustnet
