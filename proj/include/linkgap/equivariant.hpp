#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "defs.hpp"
#include "errors.hpp"
#include "group.hpp"
#include "rng.hpp"
#include "space.hpp"

namespace linkgap {

/// Isometric representation of a finite automorphism group: one isometry per
/// group element, extended from the generators along the closure's spanning
/// tree and verified to be a homomorphism on every (element, generator) pair.
class Representation {
  public:
    static Representation trivial(const GroupAction& G, const Space& S) {
        Representation rho;
        rho.isos_.assign(G.order(), Isometry::identity(S));
        return rho;
    }

    static Representation from_generators(const GroupAction& G, const Space& S,
                                          const std::vector<Isometry>& gen_isos) {
        require(gen_isos.size() == G.generators.size(), Errc::RepresentationMismatch,
                "one isometry per generator required");
        for (const Isometry& T : gen_isos) T.check_shape(S);
        Representation rho;
        rho.isos_.resize(G.order());
        rho.isos_[0] = Isometry::identity(S);
        // words[i] = (parent, generator): elements[i] = gen ∘ parent
        for (std::size_t i = 1; i < G.order(); ++i)
            rho.isos_[i] = gen_isos[G.words[i][1]].compose_after(rho.isos_[G.words[i][0]]);
        // homomorphism check: the image of gen ∘ element must match the stored
        // isometry of that product for every pair.
        for (std::size_t e = 0; e < G.order(); ++e) {
            for (std::size_t gi = 0; gi < gen_isos.size(); ++gi) {
                std::size_t prod = G.index_of(compose(G.generators[gi], G.elements[e]));
                Isometry composed = gen_isos[gi].compose_after(rho.isos_[e]);
                require(composed.approx_equals(rho.isos_[prod], tol::stabilizer_fix),
                        Errc::RepresentationMismatch,
                        "generator isometries do not extend to a homomorphism");
            }
        }
        return rho;
    }

    const Isometry& of(std::size_t element) const { return isos_[element]; }
    std::size_t size() const { return isos_.size(); }

  private:
    std::vector<Isometry> isos_;
};

/// Equivariant vertex map phi: values stored on the vertex-orbit
/// representatives, extended through rho by phi(g·u) = rho(g)·phi(u).
/// Construction verifies that each stored value is fixed by its stabilizer,
/// which makes the extension independent of the factorization.
struct EquivariantMap {
    const WeightedComplex* X = nullptr;
    const GroupAction* G = nullptr;
    const OrbitData* orbits = nullptr;
    const Space* space = nullptr;
    const Representation* rho = nullptr;
    std::vector<Point> values;  ///< one per orbits->reps[0] entry

    bool same_context(const EquivariantMap& o) const {
        return X == o.X && G == o.G && orbits == o.orbits && space == o.space && rho == o.rho;
    }

    Point at(Vertex v) const {
        const auto& loc = orbits->locate[0].at({v});  // (representative, carrying element)
        return rho->of(loc[1]).apply(*space, values[loc[0]]);
    }
};

/// Builds an equivariant map from per-representative values, checking the
/// stabilizer condition d(rho(gamma)·phi(u), phi(u)) <= tol for every
/// stabilizer element gamma of every representative u.
inline EquivariantMap make_equivariant_map(const WeightedComplex& X, const GroupAction& G,
                                           const OrbitData& orbits, const Space& S,
                                           const Representation& rho,
                                           std::vector<Point> values) {
    require(values.size() == orbits.reps[0].size(), Errc::InvalidArgument,
            "one value per vertex-orbit representative required");
    EquivariantMap phi;
    phi.X = &X;
    phi.G = &G;
    phi.orbits = &orbits;
    phi.space = &S;
    phi.rho = &rho;
    phi.values = std::move(values);
    for (std::size_t r = 0; r < orbits.reps[0].size(); ++r) {
        S.validate(phi.values[r]);
        Vertex u = orbits.reps[0][r].simplex[0];
        for (std::size_t g = 0; g < G.order(); ++g) {
            if (G.act(g, u) != u) continue;
            double moved = S.distance(rho.of(g).apply(S, phi.values[r]), phi.values[r]);
            require(moved <= tol::stabilizer_fix, Errc::InvariantViolation,
                    "value at representative " + std::to_string(u) +
                        " is not fixed by its stabilizer");
        }
    }
    return phi;
}

/// Constant map u -> z.
inline EquivariantMap constant_map(const WeightedComplex& X, const GroupAction& G,
                                   const OrbitData& orbits, const Space& S,
                                   const Representation& rho, const Point& z) {
    std::vector<Point> values(orbits.reps[0].size(), z);
    return make_equivariant_map(X, G, orbits, S, rho, std::move(values));
}

namespace detail {

/// Pushes a candidate value toward the fixed-point set of the stabilizer of
/// representative u: vector spaces average the stabilizer orbit exactly;
/// trees contract toward fixedness by repeated midpoints.
inline Point project_to_stabilizer(const GroupAction& G, const Space& S,
                                   const Representation& rho, Vertex u, Point x) {
    std::vector<std::size_t> stab;
    for (std::size_t g = 0; g < G.order(); ++g)
        if (G.act(g, u) == u) stab.push_back(g);
    if (stab.size() == 1) return x;
    if (S.is_vector_space()) {
        std::vector<double> avg(S.dim(), 0.0);
        for (std::size_t g : stab) {
            Point y = rho.of(g).apply(S, x);
            for (std::size_t i = 0; i < S.dim(); ++i) avg[i] += y.coords[i];
        }
        for (double& c : avg) c /= static_cast<double>(stab.size());
        return S.point(std::move(avg));
    }
    for (int round = 0; round < 200; ++round) {
        double worst = 0.0;
        for (std::size_t g : stab) {
            Point y = rho.of(g).apply(S, x);
            double d = S.distance(x, y);
            worst = std::max(worst, d);
            if (d > 0.0) x = S.combine(x, y, 0.5);
        }
        if (worst <= tol::stabilizer_fix * 0.5) break;
    }
    return x;
}

}  // namespace detail

/// Random equivariant map: independent draws per representative, projected
/// onto the stabilizer fixed-point set so the construction check passes.
inline EquivariantMap random_equivariant_map(const WeightedComplex& X, const GroupAction& G,
                                             const OrbitData& orbits, const Space& S,
                                             const Representation& rho, Rng& rng,
                                             double scale = 1.0) {
    std::vector<Point> values;
    values.reserve(orbits.reps[0].size());
    for (const OrbitRep& rep : orbits.reps[0]) {
        Point x = S.random_point(rng, scale);
        values.push_back(detail::project_to_stabilizer(G, S, rho, rep.simplex[0], x));
    }
    return make_equivariant_map(X, G, orbits, S, rho, std::move(values));
}

}  // namespace linkgap
