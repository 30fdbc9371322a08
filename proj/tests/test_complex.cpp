#include <catch2/catch_amalgamated.hpp>

#include "support/golden.hpp"
#include "support/matchers.hpp"

using namespace linkgap;

TEST_CASE("triangle complex derives unit edge weights", "[complex]") {
    auto I = golden::triangle();
    REQUIRE(I.X.vertex_count == 3);
    REQUIRE(I.X.triangles.size() == 1);
    REQUIRE(I.X.edges.size() == 3);
    REQUIRE(I.X.weight_constant == 1.0);
    for (double w : I.X.edge_weights) REQUIRE(w == 1.0);
    REQUIRE(I.X.min_edge_weight() == 1.0);
    check_admissibility(I.X);
}

TEST_CASE("octahedron edges and links", "[complex]") {
    auto I = golden::octahedron(false);
    REQUIRE(I.X.vertex_count == 6);
    REQUIRE(I.X.triangles.size() == 8);
    REQUIRE(I.X.edges.size() == 12);
    // every edge lies in exactly two triangles of weight 1
    for (double w : I.X.edge_weights) REQUIRE(w == 2.0);
    REQUIRE(I.X.min_edge_weight() == 2.0);

    LinkGraph L = link_of(I.X, 0);
    REQUIRE(L.vertices == std::vector<Vertex>{1, 2, 4, 5});
    REQUIRE(L.edges.size() == 4);  // 4-cycle
    for (double w : L.edge_weights) REQUIRE(w == 1.0);
    for (double w : L.vertex_weights) REQUIRE(w == 2.0);
    auto deg = L.weighted_degrees();
    for (std::size_t i = 0; i < L.size(); ++i) {
        REQUIRE(deg[i] == Catch::Approx(2.0));  // degree identity: C(m) * m_0(v)
        REQUIRE(deg[i] == Catch::Approx(L.weight_constant * L.vertex_weights[i]));
    }
    // the two non-neighbors in the 4-cycle are the antipodal pairs {1,4},{2,5}
    for (const auto& e : L.edges) {
        Vertex a = L.vertices[e[0]], b = L.vertices[e[1]];
        REQUIRE((a + 3) % 6 != b % 6);
    }
}

TEST_CASE("torus complex is 6-valent with doubled edge weights", "[complex]") {
    auto I = golden::torus7(false);
    REQUIRE(I.X.vertex_count == 7);
    REQUIRE(I.X.triangles.size() == 14);
    REQUIRE(I.X.edges.size() == 21);  // complete graph on 7 vertices
    for (double w : I.X.edge_weights) REQUIRE(w == 2.0);
    for (Vertex u = 0; u < 7; ++u) {
        LinkGraph L = link_of(I.X, u);
        REQUIRE(L.size() == 6);
        REQUIRE(L.edges.size() == 6);  // a 6-cycle
        auto deg = L.weighted_degrees();
        for (double d : deg) REQUIRE(d == Catch::Approx(2.0));
    }
}

TEST_CASE("rescaling weights preserves admissibility", "[complex]") {
    auto I = golden::octahedron(false);
    WeightedComplex Y = rescale_weights(I.X, 2.0);
    REQUIRE(Y.weight_constant == Catch::Approx(2.0));
    // triangle weights stay, edge weights absorb the constant
    for (double w : Y.triangle_weights) REQUIRE(w == 1.0);
    for (double w : Y.edge_weights) REQUIRE(w == Catch::Approx(1.0));
    check_admissibility(Y);

    LinkGraph L = link_of(Y, 0);
    auto deg = L.weighted_degrees();
    for (std::size_t i = 0; i < L.size(); ++i)
        REQUIRE(deg[i] == Catch::Approx(L.weight_constant * L.vertex_weights[i]));
}

TEST_CASE("tampered edge weight fails admissibility", "[complex]") {
    auto I = golden::triangle();
    I.X.edge_weights[0] = 1.5;
    REQUIRE_THROWS_MATCHES(check_admissibility(I.X), Error, ErrcMatcher(Errc::InvariantViolation));
}

TEST_CASE("malformed inputs are rejected", "[complex]") {
    REQUIRE_THROWS_MATCHES(build_complex({}), Error, ErrcMatcher(Errc::InvalidArgument));
    REQUIRE_THROWS_MATCHES(build_complex({{0, 1, 1}}), Error, ErrcMatcher(Errc::InvalidArgument));
    REQUIRE_THROWS_MATCHES(build_complex({{0, 1, 2}, {2, 0, 1}}), Error,
                           ErrcMatcher(Errc::InvalidArgument));
    REQUIRE_THROWS_MATCHES(build_complex({{0, 1, 2}}, {0.0}), Error,
                           ErrcMatcher(Errc::NonPositiveWeight));
    REQUIRE_THROWS_MATCHES(build_complex({{0, 1, 2}}, {-1.0}), Error,
                           ErrcMatcher(Errc::NonPositiveWeight));
    // isolated vertex: declared vertex 3 appears in no triangle
    REQUIRE_THROWS_MATCHES(build_complex({{0, 1, 2}}, {}, 4), Error, ErrcMatcher(Errc::NonPure));
    // dangling edge in no triangle
    REQUIRE_THROWS_MATCHES(build_complex({{0, 1, 2}}, {}, 0, {Edge{1, 3}}), Error,
                           ErrcMatcher(Errc::NonPure));
    // bowtie: two triangles sharing only vertex 0 give a disconnected link
    REQUIRE_THROWS_MATCHES(build_complex({{0, 1, 2}, {0, 3, 4}}), Error,
                           ErrcMatcher(Errc::DisconnectedLink));
}

TEST_CASE("edge and triangle lookups", "[complex]") {
    auto I = golden::octahedron(false);
    REQUIRE(I.X.has_edge(0, 1));
    REQUIRE_FALSE(I.X.has_edge(0, 3));  // antipodal pairs are not edges
    REQUIRE(I.X.edge_weight(1, 0) == 2.0);
    REQUIRE(I.X.triangle_weight(2, 1, 0) == 1.0);
    REQUIRE_THROWS_MATCHES(I.X.edge_weight(0, 3), Error, ErrcMatcher(Errc::InvalidArgument));
    REQUIRE_THROWS_MATCHES(link_of(I.X, 9), Error, ErrcMatcher(Errc::UnknownVertex));
}
