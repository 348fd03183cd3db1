#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <tuple>
#include <utility>
#include <vector>

#include "trustnet/errors.hpp"
#include "trustnet/network.hpp"

namespace trustnet {

// Parameters of path and endorsement completion.
//
// A chain e1..en is rated epsilon^(n-1) * prod delta(e_k); chains rated
// below eta are dropped. Chains may revisit nodes: with ratings <= 1 and
// epsilon < 1 any cycle decays below eta by itself, so only the degenerate
// all-ones case needs the hop cap to terminate.
struct CompletionParams {
    double eta = 0.0;            // trust threshold in [0,1]
    double epsilon = 1.0;        // composition penalty in [0,1]
    std::size_t max_path_len = 8; // hop cap per chain

    void validate() const {
        if (!(eta >= 0.0 && eta <= 1.0))
            throw ConfigError("eta must lie in [0,1]");
        if (!(epsilon >= 0.0 && epsilon <= 1.0))
            throw ConfigError("epsilon must lie in [0,1]");
        if (max_path_len < 1)
            throw ConfigError("max_path_len must be >= 1");
    }
};

namespace detail {

struct LiveEdge {
    std::size_t target;
    double rating;
};

// Adjacency over live (non-revoked) endorsements; ratings validated to [0,1].
inline std::vector<std::vector<LiveEdge>> live_adjacency(const EndorsementNetwork& net) {
    std::vector<std::vector<LiveEdge>> adj(net.recommenders().size());
    for (const auto& e : net.endorsements()) {
        if (e.revoked) continue;
        if (e.rating > 1.0)
            throw std::domain_error("path completion needs ratings in [0,1], got " +
                                    std::to_string(e.rating));
        adj[net.recommender_index(e.source)].push_back(
            {net.recommender_index(e.target), e.rating});
    }
    return adj;
}

// Depth-first walk over all nonempty chains starting at `start`, visiting
// each chain once with its penalized rating. Extending a chain multiplies
// by epsilon * delta <= epsilon, so a prefix whose rating already satisfies
// rating * epsilon < eta cannot lead to any admissible longer chain and the
// branch is cut. visit(node, rating) is called for every chain with
// length <= max_path_len, regardless of eta; the caller filters.
inline void walk_chains(const std::vector<std::vector<LiveEdge>>& adj,
                        std::size_t start, const CompletionParams& params,
                        const std::function<void(std::size_t, double)>& visit) {
    struct Frame {
        std::size_t node;
        double rating;
        std::size_t depth;
    };
    std::vector<Frame> stack;
    for (const auto& first : adj[start])
        stack.push_back({first.target, first.rating, 1});
    // LIFO order is deterministic; emission order does not matter to the
    // multiset semantics of the result.
    while (!stack.empty()) {
        const Frame f = stack.back();
        stack.pop_back();
        visit(f.node, f.rating);
        if (f.depth == params.max_path_len) continue;
        if (f.rating * params.epsilon < params.eta) continue; // monotone pruning
        for (const auto& next : adj[f.node])
            stack.push_back({next.target, f.rating * params.epsilon * next.rating, f.depth + 1});
    }
}

} // namespace detail

// Path completion E#: the edges are exactly the nonempty chains of E with
// penalized rating >= eta and at most max_path_len hops, each connecting
// the chain's endpoints. Note E is generally not contained in E#: a direct
// endorsement rated below eta disappears.
inline EndorsementNetwork path_complete(const EndorsementNetwork& net,
                                        const CompletionParams& params) {
    params.validate();
    EndorsementNetwork out;
    for (const auto& u : net.recommenders()) out.add_recommender(u);
    const auto adj = detail::live_adjacency(net);
    const auto& ids = net.recommenders();
    for (std::size_t u = 0; u < ids.size(); ++u) {
        detail::walk_chains(adj, u, params, [&](std::size_t v, double rating) {
            if (rating >= params.eta) out.add_endorsement(ids[u], ids[v], rating);
        });
    }
    return out;
}

// Multiset equality of edges up to `tol` on ratings; sources/targets exact.
inline bool edge_multisets_equal(const EndorsementNetwork& a,
                                 const EndorsementNetwork& b, double tol = 1e-12) {
    auto snapshot = [](const EndorsementNetwork& n) {
        std::vector<std::tuple<NodeId, NodeId, double>> edges;
        for (const auto& e : n.endorsements())
            if (!e.revoked) edges.emplace_back(e.source, e.target, e.rating);
        std::sort(edges.begin(), edges.end());
        return edges;
    };
    const auto ea = snapshot(a);
    const auto eb = snapshot(b);
    if (ea.size() != eb.size()) return false;
    for (std::size_t i = 0; i < ea.size(); ++i) {
        if (std::get<0>(ea[i]) != std::get<0>(eb[i])) return false;
        if (std::get<1>(ea[i]) != std::get<1>(eb[i])) return false;
        if (std::fabs(std::get<2>(ea[i]) - std::get<2>(eb[i])) > tol) return false;
    }
    return true;
}

// A network is path complete iff completing it changes nothing. Completion
// itself is idempotent, so path_complete(N) always satisfies this.
inline bool is_path_complete(const EndorsementNetwork& net,
                             const CompletionParams& params, double tol = 1e-12) {
    return edge_multisets_equal(net, path_complete(net, params), tol);
}

// Endorsement completion A#: certificates are pairs (endorsement chain
// u ->* v, certificate v -> i) rated delta(chain) * beta(cert), kept when
// the product reaches eta. The empty chain (u = v, delta = 1) contributes
// every direct certificate on its own, so direct recommendations survive
// whenever their rating alone reaches eta.
inline RecommendationNetwork endorsement_complete(const RecommendationNetwork& rec,
                                                  const EndorsementNetwork& end,
                                                  const CompletionParams& params) {
    params.validate();
    if (!same_recommender_sets(rec, end))
        throw ConfigError("endorsement completion: recommender sets differ");

    RecommendationNetwork out;
    for (const auto& u : rec.recommenders()) out.add_recommender(u);
    for (const auto& i : rec.objects()) out.add_object(i);

    // live certificates grouped by issuing recommender
    std::vector<std::vector<std::pair<std::size_t, double>>> certs_by_rec(
        rec.recommenders().size());
    for (const auto& c : rec.certificates()) {
        if (c.revoked) continue;
        if (c.rating > 1.0)
            throw std::domain_error("endorsement completion needs ratings in [0,1], got " +
                                    std::to_string(c.rating));
        certs_by_rec[rec.recommender_index(c.source)].emplace_back(
            rec.object_index(c.target), c.rating);
    }

    // Map endorsement node indices onto the recommendation network's
    // recommender order so chains can be paired with certificates.
    const auto adj = detail::live_adjacency(end);
    std::vector<std::size_t> to_rec(end.recommenders().size());
    for (std::size_t v = 0; v < end.recommenders().size(); ++v)
        to_rec[v] = rec.recommender_index(end.recommenders()[v]);

    const auto& rec_ids = rec.recommenders();
    const auto& obj_ids = rec.objects();
    for (std::size_t u = 0; u < end.recommenders().size(); ++u) {
        const std::size_t u_rec = to_rec[u];
        auto attach = [&](std::size_t v_rec, double delta) {
            for (const auto& [obj, beta] : certs_by_rec[v_rec]) {
                const double rating = delta * beta;
                if (rating >= params.eta)
                    out.add_certificate(rec_ids[u_rec], obj_ids[obj], rating);
            }
        };
        attach(u_rec, 1.0); // empty chain
        detail::walk_chains(adj, u, params, [&](std::size_t v, double delta) {
            // beta <= 1, so chains below eta cannot contribute
            if (delta >= params.eta) attach(to_rec[v], delta);
        });
    }
    return out;
}

} // namespace trustnet
