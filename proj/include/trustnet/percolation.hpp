#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <unordered_set>
#include <vector>

#include "trustnet/dynamics.hpp"
#include "trustnet/errors.hpp"
#include "trustnet/rng.hpp"

namespace trustnet {

// Undirected simple graph as adjacency lists.
struct SimpleGraph {
    std::size_t n = 0;
    std::vector<std::vector<std::uint32_t>> adj;
    std::size_t edges = 0;
};

// One degree per shop, equal to its trust rating; zero-rated shops stay in
// the graph as degree-1 leaves. The total is made even by bumping the
// first (highest-degree) entry so a stub matching exists.
inline std::vector<std::uint64_t> degree_sequence_from_histogram(const RatingHistogram& hist) {
    std::vector<std::uint64_t> degrees;
    std::uint64_t total = 0;
    for (auto it = hist.counts.rbegin(); it != hist.counts.rend(); ++it) {
        const std::uint64_t degree = std::max<std::uint64_t>(it->first, 1);
        for (std::uint64_t k = 0; k < it->second; ++k) {
            degrees.push_back(degree);
            total += degree;
        }
    }
    if (degrees.size() < 2)
        throw ConfigError("degree sequence needs at least two nodes");
    if (total % 2 != 0) degrees.front() += 1;
    return degrees;
}

// Configuration model: uniform stub matching, then self-loops and parallel
// edges dropped. Realized degrees are therefore <= requested ones.
inline SimpleGraph sample_configuration_graph(const std::vector<std::uint64_t>& degrees,
                                              std::uint64_t seed) {
    std::uint64_t total = 0;
    for (auto d : degrees) total += d;
    if (total % 2 != 0)
        throw ConfigError("configuration model needs an even degree total");

    std::vector<std::uint32_t> stubs;
    stubs.reserve(total);
    for (std::uint32_t v = 0; v < degrees.size(); ++v)
        for (std::uint64_t k = 0; k < degrees[v]; ++k) stubs.push_back(v);

    Rng rng(seed);
    rng.shuffle(stubs.begin(), stubs.end());

    SimpleGraph g;
    g.n = degrees.size();
    g.adj.resize(g.n);
    std::unordered_set<std::uint64_t> seen;
    seen.reserve(total);
    for (std::size_t k = 0; k + 1 < stubs.size(); k += 2) {
        const std::uint32_t a = stubs[k];
        const std::uint32_t b = stubs[k + 1];
        if (a == b) continue; // self-loop
        const std::uint64_t key = (static_cast<std::uint64_t>(std::min(a, b)) << 32) |
                                  std::max(a, b);
        if (!seen.insert(key).second) continue; // parallel edge
        g.adj[a].push_back(b);
        g.adj[b].push_back(a);
        ++g.edges;
    }
    return g;
}

// Size of the largest connected component divided by the node count.
// `removed`, when given, marks nodes excluded from the graph; the fraction
// is still relative to the full node count.
inline double giant_component_fraction(const SimpleGraph& g,
                                       const std::vector<char>* removed = nullptr) {
    if (g.n == 0) throw ConfigError("giant component of an empty graph");
    std::vector<std::uint32_t> component(g.n, 0);
    std::vector<std::uint32_t> queue;
    std::size_t best = 0;
    std::uint32_t mark = 0;
    for (std::uint32_t start = 0; start < g.n; ++start) {
        if (component[start] != 0) continue;
        if (removed && (*removed)[start]) continue;
        ++mark;
        component[start] = mark;
        queue.assign(1, start);
        std::size_t size = 0;
        while (!queue.empty()) {
            const std::uint32_t v = queue.back();
            queue.pop_back();
            ++size;
            for (const std::uint32_t w : g.adj[v]) {
                if (component[w] != 0) continue;
                if (removed && (*removed)[w]) continue;
                component[w] = mark;
                queue.push_back(w);
            }
        }
        best = std::max(best, size);
    }
    return static_cast<double>(best) / static_cast<double>(g.n);
}

enum class AttackStrategy { Random, Hubs };

inline const char* attack_strategy_name(AttackStrategy s) {
    return s == AttackStrategy::Random ? "random" : "hubs";
}

struct AttackCell {
    AttackStrategy strategy;
    double fraction;
    std::uint64_t seed;
    double giant_fraction;
};

struct AttackSummary {
    AttackStrategy strategy;
    double fraction;
    double mean;
    double stddev; // sample standard deviation over seeds
};

struct AttackResult {
    std::vector<AttackCell> cells;
    std::vector<AttackSummary> summaries;
};

// Percolation experiment on configuration graphs drawn from a degree
// sequence. Per seed one graph is sampled; each strategy removes the first
// ceil(f*n) nodes of its removal order (uniformly random, or by descending
// realized degree with random tie-break) and the remaining giant-component
// fraction is recorded.
inline AttackResult attack_experiment_on_sequence(const std::vector<std::uint64_t>& degrees,
                                                  const std::vector<AttackStrategy>& strategies,
                                                  std::vector<double> fractions,
                                                  std::size_t n_seeds,
                                                  std::uint64_t base_seed) {
    for (double f : fractions)
        if (!(f >= 0.0 && f < 1.0))
            throw ConfigError("removal fractions must lie in [0,1)");
    std::sort(fractions.begin(), fractions.end());

    AttackResult result;
    for (std::size_t s = 0; s < n_seeds; ++s) {
        const std::uint64_t seed = base_seed + s;
        const SimpleGraph g = sample_configuration_graph(degrees, seed * 2654435761u + 1);
        Rng rng(seed * 0x9e3779b97f4a7c15ull + 17);
        for (const AttackStrategy strategy : strategies) {
            std::vector<std::uint32_t> order(g.n);
            std::iota(order.begin(), order.end(), 0);
            if (strategy == AttackStrategy::Random) {
                rng.shuffle(order.begin(), order.end());
            } else {
                // descending realized degree, uniform random tie-break
                std::vector<std::uint64_t> tiebreak(g.n);
                for (auto& t : tiebreak) t = rng.next_u64();
                std::sort(order.begin(), order.end(), [&](std::uint32_t x, std::uint32_t y) {
                    if (g.adj[x].size() != g.adj[y].size())
                        return g.adj[x].size() > g.adj[y].size();
                    return tiebreak[x] < tiebreak[y];
                });
            }
            std::vector<char> removed(g.n, 0);
            std::size_t cut = 0;
            for (const double f : fractions) {
                const auto target = static_cast<std::size_t>(
                    std::ceil(f * static_cast<double>(g.n)));
                while (cut < target && cut < g.n) removed[order[cut++]] = 1;
                result.cells.push_back({strategy, f, seed,
                                        giant_component_fraction(g, &removed)});
            }
        }
    }

    for (const AttackStrategy strategy : strategies) {
        for (const double f : fractions) {
            double sum = 0.0, sum_sq = 0.0;
            std::size_t count = 0;
            for (const auto& cell : result.cells) {
                if (cell.strategy != strategy || cell.fraction != f) continue;
                sum += cell.giant_fraction;
                sum_sq += cell.giant_fraction * cell.giant_fraction;
                ++count;
            }
            const double mean = sum / static_cast<double>(count);
            const double var = count > 1
                ? std::max(0.0, (sum_sq - sum * mean) / static_cast<double>(count - 1))
                : 0.0;
            result.summaries.push_back({strategy, f, mean, std::sqrt(var)});
        }
    }
    return result;
}

inline AttackResult attack_experiment(const RatingHistogram& hist,
                                      const std::vector<AttackStrategy>& strategies,
                                      const std::vector<double>& fractions,
                                      std::size_t n_seeds, std::uint64_t base_seed) {
    return attack_experiment_on_sequence(degree_sequence_from_histogram(hist), strategies,
                                         fractions, n_seeds, base_seed);
}

} // namespace trustnet
