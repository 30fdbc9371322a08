#include <catch2/catch_amalgamated.hpp>

#include "support/golden.hpp"
#include "support/matchers.hpp"

#include <cmath>

using namespace linkgap;

TEST_CASE("euclidean distance and midpoints", "[space]") {
    Space S = Space::euclidean(2);
    Point a = S.point({0.0, 0.0}), b = S.point({3.0, 4.0});
    REQUIRE(S.distance(a, b) == Catch::Approx(5.0));
    REQUIRE(S.distance(a, a) == 0.0);
    Point m = S.combine(a, b, 0.5);
    REQUIRE(m.coords[0] == Catch::Approx(1.5));
    REQUIRE(m.coords[1] == Catch::Approx(2.0));
    REQUIRE(S.distance(S.combine(a, b, 0.0), a) == 0.0);
    REQUIRE(S.distance(S.combine(a, b, 1.0), b) == 0.0);
}

TEST_CASE("lp distance matches the p-norm", "[space]") {
    Space S = Space::lp(3, 3.0);
    Point a = S.point({1.0, 0.0, 0.0}), b = S.point({0.0, 1.0, 0.0});
    REQUIRE(S.distance(a, b) == Catch::Approx(std::pow(2.0, 1.0 / 3.0)));
    // geodesics are straight lines: distance splits along combine
    Point z = S.combine(a, b, 0.25);
    REQUIRE(S.distance(a, z) == Catch::Approx(0.25 * S.distance(a, b)));
    REQUIRE(S.distance(z, b) == Catch::Approx(0.75 * S.distance(a, b)));
}

TEST_CASE("space construction guards", "[space]") {
    REQUIRE_THROWS_MATCHES(Space::euclidean(0), Error, ErrcMatcher(Errc::ParameterOutOfRange));
    REQUIRE_THROWS_MATCHES(Space::lp(2, 1.0), Error, ErrcMatcher(Errc::ParameterOutOfRange));
    REQUIRE_THROWS_MATCHES(Space::lp(2, 11.0), Error, ErrcMatcher(Errc::ParameterOutOfRange));
    REQUIRE_THROWS_MATCHES(Space::tree({}), Error, ErrcMatcher(Errc::InvalidArgument));
    // cycle: 3 edges on 3 vertices
    REQUIRE_THROWS_MATCHES(Space::tree({{0, 1, 1.0}, {1, 2, 1.0}, {2, 0, 1.0}}), Error,
                           ErrcMatcher(Errc::InvalidArgument));
    // forest: edge count n-1 fails
    REQUIRE_THROWS_MATCHES(Space::tree({{0, 1, 1.0}, {2, 3, 1.0}}), Error,
                           ErrcMatcher(Errc::InvalidArgument));
    REQUIRE_THROWS_MATCHES(Space::tree({{0, 1, -2.0}}), Error,
                           ErrcMatcher(Errc::ParameterOutOfRange));

    Space S = Space::euclidean(2);
    REQUIRE_THROWS_MATCHES(S.point({1.0}), Error, ErrcMatcher(Errc::DimensionMismatch));
    REQUIRE_THROWS_MATCHES(S.tree_point(0, 0.5), Error, ErrcMatcher(Errc::ForeignPoint));
    Point a = S.point({0.0, 0.0}), b = S.point({1.0, 0.0});
    REQUIRE_THROWS_MATCHES(S.combine(a, b, 1.5), Error, ErrcMatcher(Errc::ParameterOutOfRange));
}

TEST_CASE("star tree distances cross the center", "[space]") {
    Space S = Space::tree({{0, 1, 1.0}, {0, 2, 1.0}, {0, 3, 1.0}});
    // points 0.7 and 0.5 out from the center on different legs
    Point x = S.tree_point(0, 0.7), y = S.tree_point(1, 0.5);
    REQUIRE(S.distance(x, y) == Catch::Approx(1.2));
    REQUIRE(S.distance(S.tree_vertex(1), S.tree_vertex(2)) == Catch::Approx(2.0));
    REQUIRE(S.distance(S.tree_vertex(0), x) == Catch::Approx(0.7));

    // walking from x toward y passes back through edge 0
    Point m = S.combine(x, y, 0.5);  // 0.6 along the path, still on leg 1's edge
    REQUIRE(m.edge == 0);
    REQUIRE(m.offset == Catch::Approx(0.1));
    REQUIRE(S.distance(x, m) == Catch::Approx(0.6));
    REQUIRE(S.distance(m, y) == Catch::Approx(0.6));

    // endpoint canonicalization: offset 0 and full length name vertices
    REQUIRE(S.distance(S.tree_point(1, 0.0), S.tree_vertex(0)) == 0.0);
    REQUIRE(S.distance(S.tree_point(1, 1.0), S.tree_vertex(2)) == 0.0);
}

TEST_CASE("path tree with unequal lengths", "[space]") {
    Space S = Space::tree({{0, 1, 1.0}, {1, 2, 2.0}});
    REQUIRE(S.distance(S.tree_vertex(0), S.tree_vertex(2)) == Catch::Approx(3.0));
    Point m = S.combine(S.tree_vertex(0), S.tree_vertex(2), 0.5);  // 1.5 from vertex 0
    REQUIRE(m.edge == 1);
    REQUIRE(m.offset == Catch::Approx(0.5));

    // geodesic distance rule at several parameters
    Point a = S.tree_point(0, 0.25), b = S.tree_point(1, 1.75);
    double d = S.distance(a, b);
    for (double t : {0.1, 0.3, 0.9}) {
        Point z = S.combine(a, b, t);
        REQUIRE(S.distance(a, z) == Catch::Approx(t * d));
        REQUIRE(S.distance(z, b) == Catch::Approx((1.0 - t) * d));
    }
}

TEST_CASE("signed permutation isometries preserve distances", "[space]") {
    Space S = Space::lp(3, 3.0);
    Isometry T = Isometry::signed_permutation(S, {2, 0, 1}, {1.0, -1.0, 1.0}, {0.5, 0.0, -1.0});
    Point x = S.point({1.0, 2.0, 3.0});
    Point y = T.apply(S, x);
    REQUIRE(y.coords[0] == Catch::Approx(3.5));   // x[2] + 0.5
    REQUIRE(y.coords[1] == Catch::Approx(-1.0));  // -x[0]
    REQUIRE(y.coords[2] == Catch::Approx(1.0));   // x[1] - 1
    Point z = S.point({-0.5, 0.25, 2.0});
    REQUIRE(S.distance(T.apply(S, x), T.apply(S, z)) == Catch::Approx(S.distance(x, z)));

    // isometries commute with geodesic combination
    Point mid = S.combine(x, z, 0.3);
    REQUIRE(S.distance(T.apply(S, mid), S.combine(T.apply(S, x), T.apply(S, z), 0.3)) ==
            Catch::Approx(0.0).margin(1e-15));

    REQUIRE_THROWS_MATCHES(
        Isometry::signed_permutation(S, {0, 0, 1}, {1.0, 1.0, 1.0}, {0.0, 0.0, 0.0}), Error,
        ErrcMatcher(Errc::InvalidArgument));
    REQUIRE_THROWS_MATCHES(
        Isometry::signed_permutation(S, {0, 1, 2}, {2.0, 1.0, 1.0}, {0.0, 0.0, 0.0}), Error,
        ErrcMatcher(Errc::InvalidArgument));
}

TEST_CASE("composition matches sequential application", "[space]") {
    Space S = Space::euclidean(3);
    Isometry T = Isometry::signed_permutation(S, {1, 2, 0}, {1.0, -1.0, 1.0}, {0.1, 0.2, 0.3});
    Isometry U = Isometry::signed_permutation(S, {2, 1, 0}, {-1.0, 1.0, 1.0}, {1.0, 0.0, -1.0});
    Isometry TU = T.compose_after(U);
    Rng rng(7);
    for (int i = 0; i < 10; ++i) {
        Point x = S.random_point(rng, 2.0);
        REQUIRE(S.distance(TU.apply(S, x), T.apply(S, U.apply(S, x))) ==
                Catch::Approx(0.0).margin(1e-14));
    }
}

TEST_CASE("tree automorphism enumeration and application", "[space]") {
    Space star = Space::tree({{0, 1, 1.0}, {0, 2, 1.0}, {0, 3, 1.0}});
    auto autos = tree_automorphisms(star);
    REQUIRE(autos.size() == 6);  // leaves permute freely

    // swapping legs 1 and 2 carries points across
    Isometry T = Isometry::tree_automorphism(star, {0, 2, 1, 3});
    Point x = star.tree_point(0, 0.3);  // on edge {0,1}
    Point y = T.apply(star, x);
    REQUIRE(y.edge == 1);
    REQUIRE(y.offset == Catch::Approx(0.3));
    Point c = star.tree_vertex(0);
    REQUIRE(star.distance(T.apply(star, c), c) == 0.0);

    Space path = Space::tree({{0, 1, 1.0}, {1, 2, 2.0}});
    REQUIRE(tree_automorphisms(path).size() == 1);  // unequal lengths pin everything
    Space sym = Space::tree({{0, 1, 1.0}, {1, 2, 1.0}});
    REQUIRE(tree_automorphisms(sym).size() == 2);  // reflection through the middle
    REQUIRE_THROWS_MATCHES(Isometry::tree_automorphism(path, {2, 1, 0}), Error,
                           ErrcMatcher(Errc::NotAutomorphism));
}

TEST_CASE("random points stay valid and deterministic", "[space]") {
    const std::array<Space, 3> spaces{Space::euclidean(3), Space::lp(2, 1.5),
                                      Space::tree({{0, 1, 2.0}, {1, 2, 1.0}, {1, 3, 0.5}})};
    for (const Space& S : spaces) {
        Rng r1(42), r2(42);
        for (int i = 0; i < 50; ++i) {
            Point a = S.random_point(r1, 1.5);
            Point b = S.random_point(r2, 1.5);
            S.validate(a);
            REQUIRE(S.distance(a, b) == 0.0);  // same seed, same stream
        }
    }
}

TEST_CASE("random isometries preserve the metric", "[space]") {
    const std::array<Space, 3> spaces{Space::euclidean(3), Space::lp(3, 2.5),
                                      Space::tree({{0, 1, 1.0}, {0, 2, 1.0}, {0, 3, 1.0}})};
    for (const Space& S : spaces) {
        std::vector<std::vector<int>> autos;
        if (!S.is_vector_space()) autos = tree_automorphisms(S);
        Rng rng(11);
        for (int i = 0; i < 20; ++i) {
            Isometry T = random_isometry(S, rng, autos.empty() ? nullptr : &autos);
            Point x = S.random_point(rng, 1.0), y = S.random_point(rng, 1.0);
            REQUIRE(S.distance(T.apply(S, x), T.apply(S, y)) ==
                    Catch::Approx(S.distance(x, y)).margin(1e-12));
        }
    }
}
