#include <catch2/catch_amalgamated.hpp>

#include <sstream>

#include "trustnet/network.hpp"
#include "trustnet/rng.hpp"

using namespace trustnet;

TEST_CASE("reduce aggregates parallel certificates") {
    RecommendationNetwork net;
    net.add_certificate("u", "i", 2.0);
    net.add_certificate("u", "i", 3.0);
    net.add_certificate("u", "j", 1.5);
    net.add_recommender("w"); // no certificates

    SECTION("sum") {
        const TrustMatrix m = reduce_to_matrix(net, ReducePolicy::Sum);
        CHECK(m.values(0, 0) == 5.0);
        CHECK(m.values(0, 1) == 1.5);
        CHECK(m.values(1, 0) == 0.0); // absent edge gives the rig zero
        CHECK(m.row_ids == std::vector<NodeId>{"u", "w"});
        CHECK(m.col_ids == std::vector<NodeId>{"i", "j"});
    }
    SECTION("average") {
        const TrustMatrix m = reduce_to_matrix(net, ReducePolicy::Average);
        CHECK(m.values(0, 0) == 2.5);
        CHECK(m.values(1, 1) == 0.0); // empty average is zero, not an error
    }
    SECTION("last") {
        const TrustMatrix m = reduce_to_matrix(net, ReducePolicy::Last);
        CHECK(m.values(0, 0) == 3.0);
    }
}

TEST_CASE("revoked certificates are excluded") {
    RecommendationNetwork net;
    net.add_certificate("u", "i", 2.0);
    net.add_certificate("u", "i", 3.0, /*revoked=*/true);
    const TrustMatrix m = reduce_to_matrix(net);
    CHECK(m.values(0, 0) == 2.0);
}

TEST_CASE("reduce(sum) is additive under certificate splits") {
    Rng rng(99);
    for (int trial = 0; trial < 50; ++trial) {
        RecommendationNetwork a, b;
        for (int e = 0; e < 12; ++e) {
            const NodeId u = "u" + std::to_string(rng.uniform_below(4));
            const NodeId i = "i" + std::to_string(rng.uniform_below(4));
            const double r = rng.uniform01() * 5.0;
            a.add_certificate(u, i, r);
            const double r1 = r * rng.uniform01();
            b.add_certificate(u, i, r1);
            b.add_certificate(u, i, r - r1);
        }
        const TrustMatrix ma = reduce_to_matrix(a);
        const TrustMatrix mb = reduce_to_matrix(b);
        REQUIRE(ma.row_ids == mb.row_ids);
        REQUIRE(ma.col_ids == mb.col_ids);
        for (std::size_t r = 0; r < ma.values.rows(); ++r)
            for (std::size_t c = 0; c < ma.values.cols(); ++c)
                REQUIRE_THAT(ma.values(r, c),
                             Catch::Matchers::WithinAbs(mb.values(r, c), 1e-12));
    }
}

TEST_CASE("endorsement networks reduce over U x U") {
    EndorsementNetwork net;
    net.add_endorsement("u", "v", 0.5);
    net.add_endorsement("u", "v", 0.25);
    net.add_endorsement("v", "u", 1.0);
    const TrustMatrix m = reduce_to_matrix(net);
    CHECK(m.row_ids == m.col_ids);
    CHECK(m.values(0, 1) == 0.75);
    CHECK(m.values(1, 0) == 1.0);
    CHECK(m.values(0, 0) == 0.0);
}

TEST_CASE("reduce in other rigs") {
    RecommendationNetwork net;
    net.add_certificate("u", "i", 0.5);
    net.add_certificate("u", "i", 0.75);
    const TrustMatrix m = reduce_to_matrix(net, ReducePolicy::Sum, RigKind::UnitIntervalMaxMul);
    CHECK(m.values(0, 0) == 0.75); // max aggregation
    CHECK_THROWS_AS(reduce_to_matrix(net, ReducePolicy::Average, RigKind::UnitIntervalMaxMul),
                    ConfigError);
}

TEST_CASE("network file parses and emits canonically") {
    const std::string text =
        "# sample network\n"
        "REC u1 shop1 0.9\n"
        "REC u2 shop1 0.25\n"
        "\n"
        "END u1 u2 0.5\n";
    std::istringstream in(text);
    const TrustNetworkFile file = parse_network(in);
    CHECK(file.recommendations.certificates().size() == 2);
    CHECK(file.endorsements.endorsements().size() == 1);
    CHECK(file.recommendations.recommenders() == std::vector<NodeId>{"u1", "u2"});
    CHECK(file.recommendations.objects() == std::vector<NodeId>{"shop1"});

    std::ostringstream out;
    emit_network(out, file);
    const std::string emitted = out.str();
    CHECK(emitted == "REC u1 shop1 0.9\nREC u2 shop1 0.25\nEND u1 u2 0.5\n");

    // emit(parse(emit(...))) is byte-stable
    std::istringstream in2(emitted);
    std::ostringstream out2;
    emit_network(out2, parse_network(in2));
    CHECK(out2.str() == emitted);
}

TEST_CASE("network file round trip on random networks") {
    Rng rng(4242);
    for (int trial = 0; trial < 30; ++trial) {
        TrustNetworkFile file;
        const int n_rec = 1 + static_cast<int>(rng.uniform_below(20));
        const int n_end = static_cast<int>(rng.uniform_below(20));
        for (int e = 0; e < n_rec; ++e)
            file.recommendations.add_certificate(
                "u" + std::to_string(rng.uniform_below(5)),
                "i" + std::to_string(rng.uniform_below(5)), rng.uniform01() * 10.0);
        for (int e = 0; e < n_end; ++e)
            file.endorsements.add_endorsement("u" + std::to_string(rng.uniform_below(5)),
                                              "u" + std::to_string(rng.uniform_below(5)),
                                              rng.uniform01());
        std::ostringstream first;
        emit_network(first, file);
        std::istringstream back(first.str());
        std::ostringstream second;
        emit_network(second, parse_network(back));
        REQUIRE(first.str() == second.str());
    }
}

TEST_CASE("network file parse errors carry line numbers") {
    auto parse_text = [](const std::string& text) {
        std::istringstream in(text);
        return parse_network(in);
    };
    CHECK_THROWS_WITH(parse_text("REC u\n"), Catch::Matchers::ContainsSubstring("line 1"));
    CHECK_THROWS_WITH(parse_text("REC u i 0.5\nFOO a b 1\n"),
                      Catch::Matchers::ContainsSubstring("line 2"));
    CHECK_THROWS_AS(parse_text("REC u i abc\n"), ParseError);
    CHECK_THROWS_AS(parse_text("REC u i -1\n"), ParseError);
    CHECK_THROWS_AS(parse_text("REC u i 1 extra\n"), ParseError);
}

TEST_CASE("certificate ratings must be nonnegative") {
    RecommendationNetwork net;
    CHECK_THROWS_AS(net.add_certificate("u", "i", -0.5), std::domain_error);
    EndorsementNetwork e;
    CHECK_THROWS_AS(e.add_endorsement("u", "v", -1.0), std::domain_error);
}

TEST_CASE("self loops are permitted but flagged") {
    EndorsementNetwork e;
    e.add_endorsement("u", "v", 0.5);
    CHECK_FALSE(e.has_self_loops());
    e.add_endorsement("v", "v", 0.5);
    CHECK(e.has_self_loops());
}
