#pragma once

#include <charconv>
#include <cmath>
#include <cstddef>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "trustnet/errors.hpp"
#include "trustnet/matrix.hpp"
#include "trustnet/rig.hpp"

namespace trustnet {

using NodeId = std::string;

// A recommendation certificate: recommender `source` rates object `target`.
struct Certificate {
    std::string id;
    NodeId source; // in U
    NodeId target; // in J
    double rating = 0.0;
    bool revoked = false;
};

// An endorsement certificate between two recommenders.
struct Endorsement {
    std::string id;
    NodeId source; // in U
    NodeId target; // in U
    double rating = 0.0;
    bool revoked = false;
};

namespace detail {

// Ordered set of node ids: insertion order is preserved so matrices and
// emitted files are deterministic.
class IdIndex {
public:
    std::size_t insert(const NodeId& id) {
        auto it = index_.find(id);
        if (it != index_.end()) return it->second;
        const std::size_t pos = ids_.size();
        ids_.push_back(id);
        index_.emplace(id, pos);
        return pos;
    }

    bool contains(const NodeId& id) const { return index_.count(id) != 0; }

    std::size_t at(const NodeId& id) const {
        auto it = index_.find(id);
        if (it == index_.end())
            throw ConfigError("unknown node id: " + id);
        return it->second;
    }

    std::size_t size() const { return ids_.size(); }
    const std::vector<NodeId>& ids() const { return ids_; }

    bool operator==(const IdIndex& o) const { return ids_ == o.ids_; }

private:
    std::vector<NodeId> ids_;
    std::unordered_map<NodeId, std::size_t> index_;
};

} // namespace detail

// Edge-labelled bipartite multigraph of recommendation certificates.
class RecommendationNetwork {
public:
    std::size_t add_recommender(const NodeId& u) { return recommenders_.insert(u); }
    std::size_t add_object(const NodeId& i) { return objects_.insert(i); }

    void add_certificate(const NodeId& source, const NodeId& target, double rating,
                         bool revoked = false) {
        if (!(rating >= 0.0) || !std::isfinite(rating))
            throw std::domain_error("certificate rating must be a finite nonnegative real");
        Certificate c;
        c.id = "c" + std::to_string(certificates_.size());
        c.source = source;
        c.target = target;
        c.rating = rating;
        c.revoked = revoked;
        recommenders_.insert(source);
        objects_.insert(target);
        certificates_.push_back(std::move(c));
    }

    const std::vector<Certificate>& certificates() const { return certificates_; }
    const std::vector<NodeId>& recommenders() const { return recommenders_.ids(); }
    const std::vector<NodeId>& objects() const { return objects_.ids(); }
    std::size_t recommender_index(const NodeId& u) const { return recommenders_.at(u); }
    std::size_t object_index(const NodeId& i) const { return objects_.at(i); }

private:
    friend class EndorsementNetwork;
    friend bool same_recommender_sets(const RecommendationNetwork&,
                                      const class EndorsementNetwork&);
    detail::IdIndex recommenders_;
    detail::IdIndex objects_;
    std::vector<Certificate> certificates_;
};

// Edge-labelled multigraph of recommender-to-recommender endorsements.
// Self-loops are allowed but reported by has_self_loops().
class EndorsementNetwork {
public:
    std::size_t add_recommender(const NodeId& u) { return recommenders_.insert(u); }

    void add_endorsement(const NodeId& source, const NodeId& target, double rating,
                         bool revoked = false) {
        if (!(rating >= 0.0) || !std::isfinite(rating))
            throw std::domain_error("endorsement rating must be a finite nonnegative real");
        Endorsement e;
        e.id = "e" + std::to_string(endorsements_.size());
        e.source = source;
        e.target = target;
        e.rating = rating;
        e.revoked = revoked;
        recommenders_.insert(source);
        recommenders_.insert(target);
        endorsements_.push_back(std::move(e));
    }

    const std::vector<Endorsement>& endorsements() const { return endorsements_; }
    const std::vector<NodeId>& recommenders() const { return recommenders_.ids(); }
    std::size_t recommender_index(const NodeId& u) const { return recommenders_.at(u); }

    bool has_self_loops() const {
        for (const auto& e : endorsements_)
            if (!e.revoked && e.source == e.target) return true;
        return false;
    }

private:
    friend bool same_recommender_sets(const RecommendationNetwork&,
                                      const EndorsementNetwork&);
    detail::IdIndex recommenders_;
    std::vector<Endorsement> endorsements_;
};

inline bool same_recommender_sets(const RecommendationNetwork& rec,
                                  const EndorsementNetwork& end) {
    if (rec.recommenders_.size() != end.recommenders_.size()) return false;
    for (const auto& id : rec.recommenders_.ids()) // set equality, order-free
        if (!end.recommenders_.contains(id)) return false;
    return true;
}

// A reduced network: dense rig-valued matrix with labelled rows/columns.
struct TrustMatrix {
    std::vector<NodeId> row_ids; // recommenders
    std::vector<NodeId> col_ids; // objects (or recommenders, for E)
    Matrix values;
};

enum class ReducePolicy { Sum, Average, Last };

namespace detail {

template <typename Edge>
Matrix reduce_edges(const std::vector<Edge>& edges,
                    const detail::IdIndex& rows, const detail::IdIndex& cols,
                    auto&& col_of, ReducePolicy policy, RigKind kind) {
    Matrix m(rows.size(), cols.size(), rig_zero(kind));
    Matrix counts(rows.size(), cols.size(), 0.0);
    for (const auto& e : edges) {
        if (e.revoked) continue;
        const std::size_t r = rows.at(e.source);
        const std::size_t c = col_of(e);
        switch (policy) {
        case ReducePolicy::Sum:
        case ReducePolicy::Average:
            m(r, c) = rig_add(kind, m(r, c), e.rating); // zero is the unit
            counts(r, c) += 1.0;
            break;
        case ReducePolicy::Last:
            m(r, c) = e.rating; // certificates are stored in issue order
            counts(r, c) += 1.0;
            break;
        }
    }
    if (policy == ReducePolicy::Average) {
        if (kind != RigKind::Naturals && kind != RigKind::NonnegReals)
            throw ConfigError("average policy needs a rig with division (naturals/nonneg-reals)");
        for (std::size_t r = 0; r < m.rows(); ++r)
            for (std::size_t c = 0; c < m.cols(); ++c)
                if (counts(r, c) > 0.0) m(r, c) /= counts(r, c);
    }
    return m;
}

} // namespace detail

// A_ui = (rig) sum over live certificates u -> i; pairs without
// certificates keep the rig zero. Average divides by the live multiplicity,
// Last keeps the most recently issued rating.
inline TrustMatrix reduce_to_matrix(const RecommendationNetwork& net,
                                    ReducePolicy policy = ReducePolicy::Sum,
                                    RigKind kind = RigKind::NonnegReals) {
    TrustMatrix out;
    out.row_ids = net.recommenders();
    out.col_ids = net.objects();
    detail::IdIndex rows, cols;
    for (const auto& id : out.row_ids) rows.insert(id);
    for (const auto& id : out.col_ids) cols.insert(id);
    out.values = detail::reduce_edges(net.certificates(), rows, cols,
                                      [&](const Certificate& c) { return cols.at(c.target); },
                                      policy, kind);
    return out;
}

// E_uv for endorsement networks; rows and columns are both U.
inline TrustMatrix reduce_to_matrix(const EndorsementNetwork& net,
                                    ReducePolicy policy = ReducePolicy::Sum,
                                    RigKind kind = RigKind::NonnegReals) {
    TrustMatrix out;
    out.row_ids = net.recommenders();
    out.col_ids = net.recommenders();
    detail::IdIndex idx;
    for (const auto& id : out.row_ids) idx.insert(id);
    out.values = detail::reduce_edges(net.endorsements(), idx, idx,
                                      [&](const Endorsement& e) { return idx.at(e.target); },
                                      policy, kind);
    return out;
}

// --- network file format ----------------------------------------------
//
// Line-oriented UTF-8 text:
//   REC <recommender-id> <object-id> <rating>
//   END <recommender-id> <recommender-id> <rating>
//   #  comment
// Ids are arbitrary non-whitespace tokens, ratings decimal literals.
// emit() writes the canonical form (shortest round-tripping literals), so
// parse -> emit is byte-stable on canonical files.

struct TrustNetworkFile {
    RecommendationNetwork recommendations;
    EndorsementNetwork endorsements;
};

namespace detail {

inline double parse_rating_token(std::string_view tok, std::size_t line_no) {
    double v = 0.0;
    const char* first = tok.data();
    const char* last = tok.data() + tok.size();
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || ptr != last)
        throw ParseError("bad rating literal '" + std::string(tok) + "'", line_no);
    if (!(v >= 0.0) || !std::isfinite(v))
        throw ParseError("rating must be a finite nonnegative real", line_no);
    return v;
}

inline std::string format_double(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, ptr);
}

} // namespace detail

inline TrustNetworkFile parse_network(std::istream& in) {
    TrustNetworkFile file;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::istringstream ls(line);
        std::string kw;
        if (!(ls >> kw) || kw[0] == '#') continue;
        std::string a, b, rating_tok;
        if (!(ls >> a >> b >> rating_tok))
            throw ParseError("expected '" + kw + " <src> <dst> <rating>'", line_no);
        std::string extra;
        if (ls >> extra)
            throw ParseError("trailing token '" + extra + "'", line_no);
        const double rating = detail::parse_rating_token(rating_tok, line_no);
        if (kw == "REC") {
            file.recommendations.add_certificate(a, b, rating);
            file.endorsements.add_recommender(a);
        } else if (kw == "END") {
            file.endorsements.add_endorsement(a, b, rating);
            file.recommendations.add_recommender(a);
            file.recommendations.add_recommender(b);
        } else {
            throw ParseError("unknown directive '" + kw + "'", line_no);
        }
    }
    return file;
}

inline void emit_network(std::ostream& out, const TrustNetworkFile& file) {
    for (const auto& c : file.recommendations.certificates()) {
        if (c.revoked) continue;
        out << "REC " << c.source << ' ' << c.target << ' '
            << detail::format_double(c.rating) << '\n';
    }
    for (const auto& e : file.endorsements.endorsements()) {
        if (e.revoked) continue;
        out << "END " << e.source << ' ' << e.target << ' '
            << detail::format_double(e.rating) << '\n';
    }
}

} // namespace trustnet
