#include <catch2/catch_amalgamated.hpp>

#include "support/golden.hpp"
#include "support/matchers.hpp"

using namespace linkgap;

TEST_CASE("permutation composition applies right factor first", "[group]") {
    Permutation a{1, 2, 0}, b{0, 2, 1};
    Permutation ba = compose(b, a);
    REQUIRE(ba == Permutation{2, 1, 0});
}

TEST_CASE("antipodal closure has order two", "[group]") {
    auto I = golden::octahedron();
    REQUIRE(I.G.order() == 2);
    REQUIRE(I.G.index_of(identity_permutation(6)) == 0);
    REQUIRE(I.G.index_of(Permutation{3, 4, 5, 0, 1, 2}) == 1);

    // vertex orbits pair antipodes
    REQUIRE(I.orbits.reps[0].size() == 3);
    for (const OrbitRep& r : I.orbits.reps[0]) {
        REQUIRE(r.orbit_size == 2);
        REQUIRE(r.stabilizer_order == 1);
    }
    // 24 ordered edges in 12 free orbits, 48 ordered triangles in 24
    REQUIRE(I.orbits.reps[1].size() == 12);
    REQUIRE(I.orbits.reps[2].size() == 24);
}

TEST_CASE("three-cycle on the tetrahedron fixes one vertex", "[group]") {
    auto I = golden::tetrahedron();
    REQUIRE(I.G.order() == 3);
    REQUIRE(I.orbits.reps[0].size() == 2);
    const OrbitRep& moving = I.orbits.reps[0][0];
    const OrbitRep& fixed = I.orbits.reps[0][1];
    REQUIRE(moving.simplex == std::vector<Vertex>{0});
    REQUIRE(moving.orbit_size == 3);
    REQUIRE(moving.stabilizer_order == 1);
    REQUIRE(fixed.simplex == std::vector<Vertex>{3});
    REQUIRE(fixed.orbit_size == 1);
    REQUIRE(fixed.stabilizer_order == 3);
    // orbit-stabilizer identity is validated during construction; spot-check anyway
    for (std::size_t k = 0; k < 3; ++k)
        for (const OrbitRep& r : I.orbits.reps[k])
            REQUIRE(r.orbit_size * r.stabilizer_order == I.G.order());
}

TEST_CASE("locate carries representatives onto orbit members", "[group]") {
    auto I = golden::octahedron();
    std::size_t g = 0;
    const OrbitRep& rep = I.orbits.rep_of(1, {4, 0}, &g);
    REQUIRE(rep.simplex == std::vector<Vertex>{1, 3});
    REQUIRE(I.G.act_tuple(g, rep.simplex) == std::vector<Vertex>{4, 0});

    // every ordered edge must be reachable from its representative
    for (const auto& [simplex, loc] : I.orbits.locate[1]) {
        const OrbitRep& r = I.orbits.reps[1][loc[0]];
        REQUIRE(I.G.act_tuple(loc[1], r.simplex) == simplex);
    }
}

TEST_CASE("double-counting identity on frozen values", "[group]") {
    auto unit = [](const std::vector<Vertex>&, const std::vector<Vertex>&) { return 1.0; };

    auto I = golden::octahedron();
    auto s01 = check_orbit_identity(I.X, I.G, I.orbits, unit, 0, 1);
    REQUIRE(s01.lhs == Catch::Approx(24.0).epsilon(1e-12));
    REQUIRE(s01.rhs == Catch::Approx(24.0).epsilon(1e-12));
    auto s02 = check_orbit_identity(I.X, I.G, I.orbits, unit, 0, 2);
    REQUIRE(s02.lhs == Catch::Approx(72.0).epsilon(1e-12));
    REQUIRE(s02.rhs == Catch::Approx(72.0).epsilon(1e-12));
    auto s12 = check_orbit_identity(I.X, I.G, I.orbits, unit, 1, 2);
    REQUIRE(s12.lhs == Catch::Approx(144.0).epsilon(1e-12));
    REQUIRE(s12.rhs == Catch::Approx(144.0).epsilon(1e-12));

    auto T = golden::tetrahedron();
    auto t01 = check_orbit_identity(T.X, T.G, T.orbits, unit, 0, 1);
    REQUIRE(t01.lhs == Catch::Approx(8.0).epsilon(1e-12));
    REQUIRE(t01.rhs == Catch::Approx(8.0).epsilon(1e-12));
}

TEST_CASE("double-counting identity with weight-valued functions", "[group]") {
    auto I = golden::torus7();
    const WeightedComplex& X = I.X;
    auto by_weight = [&X](const std::vector<Vertex>& tau, const std::vector<Vertex>& sigma) {
        double w = sigma.size() == 3 ? X.triangle_weight(sigma[0], sigma[1], sigma[2])
                                     : X.edge_weight(sigma[0], sigma[1]);
        return w * static_cast<double>(tau.size());
    };
    const std::array<std::array<std::size_t, 2>, 3> pairs{{{0, 1}, {0, 2}, {1, 2}}};
    for (auto [l, k] : pairs) {
        auto s = check_orbit_identity(X, I.G, I.orbits, by_weight, l, k);
        REQUIRE(s.lhs == Catch::Approx(s.rhs).epsilon(1e-12));
        REQUIRE(s.lhs > 0.0);
    }
}

TEST_CASE("non-invariant pair functions are rejected", "[group]") {
    auto I = golden::octahedron();
    auto leaky = [](const std::vector<Vertex>& tau, const std::vector<Vertex>&) {
        return static_cast<double>(tau[0]);
    };
    REQUIRE_THROWS_MATCHES(check_orbit_identity(I.X, I.G, I.orbits, leaky, 0, 1), Error,
                           ErrcMatcher(Errc::InvariantViolation));
}

TEST_CASE("bad generators are rejected", "[group]") {
    auto tris = golden::octahedron_triangles();
    WeightedComplex X = build_complex(tris);
    // swapping 4 and 5 maps {0,1,5} to the non-face {0,1,4}
    REQUIRE_THROWS_MATCHES(build_action(X, {Permutation{0, 1, 2, 3, 5, 4}}), Error,
                           ErrcMatcher(Errc::NotAutomorphism));
    // not a bijection
    REQUIRE_THROWS_MATCHES(build_action(X, {Permutation{0, 0, 2, 3, 4, 5}}), Error,
                           ErrcMatcher(Errc::InvalidArgument));
    // wrong length
    REQUIRE_THROWS_MATCHES(build_action(X, {Permutation{0, 1, 2}}), Error,
                           ErrcMatcher(Errc::InvalidArgument));

    // automorphism of the complex that does not preserve triangle weights
    std::vector<double> weights(tris.size(), 1.0);
    weights[0] = 2.0;  // {0,1,2}, which the antipodal map sends to {3,4,5}
    WeightedComplex Y = build_complex(tris, weights);
    REQUIRE_THROWS_MATCHES(build_action(Y, {Permutation{3, 4, 5, 0, 1, 2}}), Error,
                           ErrcMatcher(Errc::WeightNotInvariant));
}

TEST_CASE("group closure respects the cap", "[group]") {
    auto tris = golden::torus7_triangles();
    WeightedComplex X = build_complex(tris);
    REQUIRE_THROWS_MATCHES(build_action(X, {Permutation{1, 2, 3, 4, 5, 6, 0}}, 3), Error,
                           ErrcMatcher(Errc::GroupTooLarge));
    GroupAction G = build_action(X, {Permutation{1, 2, 3, 4, 5, 6, 0}}, 7);
    REQUIRE(G.order() == 7);
}

TEST_CASE("trivial group makes every simplex its own orbit", "[group]") {
    auto I = golden::triangle();
    REQUIRE(I.G.order() == 1);
    REQUIRE(I.orbits.reps[0].size() == 3);
    REQUIRE(I.orbits.reps[1].size() == 6);
    REQUIRE(I.orbits.reps[2].size() == 6);
}
