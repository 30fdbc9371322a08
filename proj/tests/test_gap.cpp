#include <catch2/catch_amalgamated.hpp>

#include "support/golden.hpp"
#include "support/matchers.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

using namespace linkgap;

namespace {

// coefficients of prod_i (x - r_i) by repeated multiplication
std::vector<double> poly_from_roots(const std::vector<double>& roots) {
    std::vector<double> c{1.0};
    for (double r : roots) {
        std::vector<double> next(c.size() + 1, 0.0);
        for (std::size_t i = 0; i < c.size(); ++i) {
            next[i + 1] += c[i];
            next[i] -= r * c[i];
        }
        c = std::move(next);
    }
    return c;  // ascending powers, c.back() == 1
}

SymMatrix normalized_laplacian(const LinkGraph& L) {
    auto deg = L.weighted_degrees();
    SymMatrix N(L.size());
    for (std::size_t i = 0; i < L.size(); ++i) N.at(i, i) = 1.0;
    for (std::size_t e = 0; e < L.edges.size(); ++e) {
        std::size_t i = L.edges[e][0], j = L.edges[e][1];
        double w = L.edge_weights[e] / std::sqrt(deg[i] * deg[j]);
        N.at(i, j) -= w;
        N.at(j, i) -= w;
    }
    return N;
}

double rayleigh(const LinkGraph& L, const Space& S, const Gauge& f,
                const std::vector<Point>& values) {
    Point bar = minimize_link_energy(L, values, S, f);
    double bottom = link_local_energy(L, values, S, f, bar);
    return L.weight_constant * link_edge_energy(L, values, S, f) / bottom;
}

}  // namespace

TEST_CASE("jacobi eigenvalues on closed forms", "[gap]") {
    SymMatrix m(2);
    m.at(0, 0) = 2.0;
    m.at(0, 1) = m.at(1, 0) = 1.0;
    m.at(1, 1) = 2.0;
    auto ev = symmetric_eigenvalues(m);
    REQUIRE(ev[0] == Catch::Approx(1.0).margin(1e-13));
    REQUIRE(ev[1] == Catch::Approx(3.0).margin(1e-13));

    SymMatrix bad(2);
    bad.at(0, 1) = 1.0;  // at(1,0) left at 0
    REQUIRE_THROWS_MATCHES(symmetric_eigenvalues(bad), Error,
                           ErrcMatcher(Errc::InvalidArgument));
}

TEST_CASE("eigenvalues reproduce the characteristic polynomial", "[gap]") {
    // two independent routes to det(xI - A): eigenvalue products vs the
    // trace recursion; agreement validates the solver including multiplicity
    std::vector<SymMatrix> cases;
    auto oct = golden::octahedron(false);
    cases.push_back(normalized_laplacian(link_of(oct.X, 0)));   // spectrum {0,1,1,2}
    auto tet = golden::tetrahedron(false);
    cases.push_back(normalized_laplacian(link_of(tet.X, 0)));   // {0, 3/2, 3/2}
    auto tor = golden::torus7(false);
    cases.push_back(normalized_laplacian(link_of(tor.X, 0)));   // {0, 1/2, 1/2, 3/2, 3/2, 2}

    Rng rng(99);
    SymMatrix r(5);
    for (std::size_t i = 0; i < 5; ++i)
        for (std::size_t j = i; j < 5; ++j) r.at(i, j) = r.at(j, i) = rng.uniform(-2.0, 2.0);
    cases.push_back(r);

    for (const SymMatrix& m : cases) {
        auto from_roots = poly_from_roots(symmetric_eigenvalues(m));
        auto direct = characteristic_polynomial(m);
        REQUIRE(from_roots.size() == direct.size());
        for (std::size_t i = 0; i < direct.size(); ++i)
            REQUIRE(from_roots[i] == Catch::Approx(direct[i]).margin(1e-10));
    }
}

TEST_CASE("spectral link constants of the golden complexes", "[gap]") {
    auto oct = golden::octahedron(false);
    for (Vertex u = 0; u < 6; ++u)
        REQUIRE(lambda_spectral(link_of(oct.X, u)) == Catch::Approx(1.0).margin(1e-12));

    auto tet = golden::tetrahedron(false);
    for (Vertex u = 0; u < 4; ++u)
        REQUIRE(lambda_spectral(link_of(tet.X, u)) == Catch::Approx(1.5).margin(1e-12));

    auto tri = golden::triangle();
    for (Vertex u = 0; u < 3; ++u)
        REQUIRE(lambda_spectral(link_of(tri.X, u)) == Catch::Approx(2.0).margin(1e-12));

    auto tor = golden::torus7(false);
    for (Vertex u = 0; u < 7; ++u)
        REQUIRE(lambda_spectral(link_of(tor.X, u)) == Catch::Approx(0.5).margin(1e-12));

    // rescaling the weights scales the constant through C(m)
    WeightedComplex Y = rescale_weights(oct.X, 2.0);
    REQUIRE(lambda_spectral(link_of(Y, 0)) == Catch::Approx(2.0).margin(1e-12));
}

TEST_CASE("degenerate links are rejected", "[gap]") {
    LinkGraph tiny;
    tiny.center = 0;
    tiny.vertices = {1};
    tiny.vertex_weights = {1.0};
    REQUIRE_THROWS_MATCHES(lambda_spectral(tiny), Error, ErrcMatcher(Errc::TooSmall));

    LinkGraph split;
    split.center = 0;
    split.vertices = {1, 2, 3, 4};
    split.vertex_weights = {1.0, 1.0, 1.0, 1.0};
    split.edges = {{0, 1}, {2, 3}};
    split.edge_weights = {1.0, 1.0};
    REQUIRE_THROWS_MATCHES(lambda_spectral(split), Error, ErrcMatcher(Errc::Disconnected));
}

TEST_CASE("variational estimates sit in the spectral window", "[gap]") {
    Gauge f = Gauge::power(2.0);
    auto check_link = [&](const LinkGraph& L, double spectral, double upper) {
        Space S = Space::euclidean(L.size());
        auto res = lambda_variational(L, S, f, 64, 0);
        REQUIRE(res.counted == 64);
        REQUIRE(res.lambda >= spectral - 1e-6);
        REQUIRE(res.lambda <= upper);
        REQUIRE(res.witness.size() == L.size());
        double best = res.attempt_lambdas[0];
        for (double v : res.attempt_lambdas) best = std::min(best, v);
        REQUIRE(res.lambda == best);
    };
    auto oct = golden::octahedron(false);
    check_link(link_of(oct.X, 0), 1.0, 1.01);
    auto tet = golden::tetrahedron(false);
    check_link(link_of(tet.X, 0), 1.5, 1.515);
    auto tri = golden::triangle();
    check_link(link_of(tri.X, 0), 2.0, 2.02);
    auto tor = golden::torus7(false);
    check_link(link_of(tor.X, 0), 0.5, 0.505);
}

TEST_CASE("rayleigh ratio is scale and isometry invariant", "[gap]") {
    auto oct = golden::octahedron(false);
    LinkGraph L = link_of(oct.X, 0);
    Gauge f = Gauge::power(2.0);
    Space S = Space::euclidean(4);
    Rng rng(7);
    std::vector<Point> values;
    for (std::size_t i = 0; i < L.size(); ++i) values.push_back(S.random_point(rng, 1.0));

    double base = rayleigh(L, S, f, values);
    for (double c : {0.1, 10.0}) {
        std::vector<Point> scaled = values;
        for (Point& p : scaled)
            for (double& x : p.coords) x *= c;
        REQUIRE(rayleigh(L, S, f, scaled) == Catch::Approx(base).epsilon(1e-10));
    }

    Isometry T = random_isometry(S, rng);
    std::vector<Point> moved;
    for (const Point& p : values) moved.push_back(T.apply(S, p));
    REQUIRE(rayleigh(L, S, f, moved) == Catch::Approx(base).epsilon(1e-10));
}

TEST_CASE("global gap report for the octahedron", "[gap]") {
    auto I = golden::octahedron();
    Space S = Space::euclidean(1);
    Gauge f = Gauge::power(2.0);
    GapReport R = global_gap(I.X, I.G, I.orbits, GapMethod::Spectral, S, f);
    REQUIRE(R.entries.size() == 3);
    for (const GapEntry& e : R.entries) {
        REQUIRE(e.lambda == Catch::Approx(1.0).margin(1e-12));
        REQUIRE(e.orbit_size == 2);
        REQUIRE(e.checked_vertex >= 3);  // the non-representative antipode
        REQUIRE(e.checked_lambda == Catch::Approx(e.lambda).margin(1e-12));
    }
    REQUIRE(R.global_lambda == Catch::Approx(1.0).margin(1e-12));
    REQUIRE(R.threshold == 0.5);
    REQUIRE(R.kappa == Catch::Approx(0.5).margin(1e-12));
    REQUIRE(R.verdict);
    REQUIRE(R.certifying);
}

TEST_CASE("global gap reports for tetrahedron and torus", "[gap]") {
    Space S = Space::euclidean(1);
    Gauge f = Gauge::power(2.0);

    auto tet = golden::tetrahedron();
    GapReport Rt = global_gap(tet.X, tet.G, tet.orbits, GapMethod::Spectral, S, f);
    REQUIRE(Rt.entries.size() == 2);
    REQUIRE(Rt.global_lambda == Catch::Approx(1.5).margin(1e-12));
    REQUIRE(Rt.kappa == Catch::Approx(1.0 / 3.0).margin(1e-12));
    REQUIRE(Rt.verdict);

    auto tor = golden::torus7();
    GapReport Rr = global_gap(tor.X, tor.G, tor.orbits, GapMethod::Spectral, S, f);
    REQUIRE(Rr.entries.size() == 1);
    REQUIRE(Rr.entries[0].orbit_size == 7);
    REQUIRE(Rr.global_lambda == Catch::Approx(0.5).margin(1e-12));
    REQUIRE_FALSE(Rr.verdict);   // lambda == C/2 is not a gap
    REQUIRE(Rr.certifying);      // spectral negatives are conclusive
    REQUIRE(Rr.kappa == Catch::Approx(1.0).margin(1e-12));
}

TEST_CASE("variational global gap transports witnesses across orbits", "[gap]") {
    auto I = golden::octahedron();
    Space S = Space::euclidean(3);
    Gauge f = Gauge::power(2.0);
    GapParams params;
    params.restarts = 16;
    GapReport R = global_gap(I.X, I.G, I.orbits, GapMethod::Variational, S, f, params);
    REQUIRE(R.method == GapMethod::Variational);
    REQUIRE_FALSE(R.certifying);
    REQUIRE(R.verdict);  // the estimate still clears C/2 comfortably
    for (const GapEntry& e : R.entries) {
        REQUIRE(e.lambda >= 1.0 - 1e-6);
        REQUIRE(e.lambda <= 1.01);
        REQUIRE(e.witness.size() == 4);
        REQUIRE(e.checked_vertex >= 3);
        REQUIRE(std::abs(e.checked_lambda - e.lambda) <= 1e-9 * (1.0 + e.lambda));
    }
}

TEST_CASE("spectral route requires euclidean geometry with the square gauge", "[gap]") {
    auto I = golden::octahedron();
    Gauge square = Gauge::power(2.0);
    Gauge cube = Gauge::power(3.0);
    REQUIRE_THROWS_MATCHES(
        global_gap(I.X, I.G, I.orbits, GapMethod::Spectral, Space::lp(3, 3.0), square), Error,
        ErrcMatcher(Errc::InvalidArgument));
    REQUIRE_THROWS_MATCHES(
        global_gap(I.X, I.G, I.orbits, GapMethod::Spectral, Space::euclidean(3), cube), Error,
        ErrcMatcher(Errc::InvalidArgument));
}
