#pragma once

#include <algorithm>
#include <array>
#include <cstddef>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "complex.hpp"
#include "defs.hpp"
#include "errors.hpp"

namespace linkgap {

using Permutation = std::vector<Vertex>;  ///< perm[v] = image of v

inline Permutation identity_permutation(std::size_t n) {
    Permutation p(n);
    for (std::size_t i = 0; i < n; ++i) p[i] = static_cast<Vertex>(i);
    return p;
}

/// apply a, then b: (b ∘ a)(v) = b[a[v]]
inline Permutation compose(const Permutation& b, const Permutation& a) {
    Permutation r(a.size());
    for (std::size_t v = 0; v < a.size(); ++v) r[v] = b[static_cast<std::size_t>(a[v])];
    return r;
}

/// Finite group of weight-preserving simplicial automorphisms, enumerated by
/// breadth-first closure of the generators. elements[0] is the identity, and
/// words[i] = (parent, generator) records elements[i] = gen[generator] ∘
/// elements[parent] so representations extend along the same spanning tree.
struct GroupAction {
    std::size_t vertex_count = 0;
    std::vector<Permutation> generators;
    std::vector<Permutation> elements;
    std::vector<std::array<std::size_t, 2>> words;  ///< identity gets {0,0}, unused
    std::map<Permutation, std::size_t> element_index;

    std::size_t order() const { return elements.size(); }

    std::size_t index_of(const Permutation& p) const {
        auto it = element_index.find(p);
        require(it != element_index.end(), Errc::InvalidArgument, "permutation not in group");
        return it->second;
    }

    Vertex act(std::size_t g, Vertex v) const {
        return elements[g][static_cast<std::size_t>(v)];
    }

    std::vector<Vertex> act_tuple(std::size_t g, const std::vector<Vertex>& s) const {
        std::vector<Vertex> r(s.size());
        for (std::size_t i = 0; i < s.size(); ++i) r[i] = act(g, s[i]);
        return r;
    }
};

/// Closes the generators into a group of order ≤ cap and verifies that every
/// generator is a weight-preserving simplicial automorphism.
inline GroupAction build_action(const WeightedComplex& X,
                                const std::vector<Permutation>& generators,
                                std::size_t cap = tol::group_cap_default) {
    GroupAction G;
    G.vertex_count = X.vertex_count;
    for (const Permutation& g : generators) {
        require(g.size() == X.vertex_count, Errc::InvalidArgument, "generator length mismatch");
        std::vector<char> hit(X.vertex_count, 0);
        for (Vertex img : g) {
            require(img >= 0 && static_cast<std::size_t>(img) < X.vertex_count &&
                        !hit[static_cast<std::size_t>(img)],
                    Errc::InvalidArgument, "generator is not a bijection");
            hit[static_cast<std::size_t>(img)] = 1;
        }
        for (std::size_t ti = 0; ti < X.triangles.size(); ++ti) {
            const Triangle& t = X.triangles[ti];
            Vertex a = g[static_cast<std::size_t>(t[0])];
            Vertex b = g[static_cast<std::size_t>(t[1])];
            Vertex c = g[static_cast<std::size_t>(t[2])];
            require(a != b && b != c && a != c &&
                        X.triangle_index.count(make_triangle(a, b, c)) > 0,
                    Errc::NotAutomorphism, "generator does not map triangles to triangles");
            double w = X.triangle_weight(a, b, c);
            require(std::abs(w - X.triangle_weights[ti]) <= tol::identity_rel * w,
                    Errc::WeightNotInvariant, "triangle weight not preserved");
        }
        for (std::size_t ei = 0; ei < X.edges.size(); ++ei) {
            const Edge& e = X.edges[ei];
            double w = X.edge_weight(g[static_cast<std::size_t>(e[0])],
                                     g[static_cast<std::size_t>(e[1])]);
            require(std::abs(w - X.edge_weights[ei]) <= tol::identity_rel * w,
                    Errc::WeightNotInvariant, "edge weight not preserved");
        }
        G.generators.push_back(g);
    }

    Permutation id = identity_permutation(X.vertex_count);
    G.elements.push_back(id);
    G.words.push_back({0, 0});
    G.element_index.emplace(id, 0);
    for (std::size_t head = 0; head < G.elements.size(); ++head) {
        for (std::size_t gi = 0; gi < G.generators.size(); ++gi) {
            Permutation next = compose(G.generators[gi], G.elements[head]);
            if (G.element_index.count(next)) continue;
            require(G.elements.size() < cap, Errc::GroupTooLarge,
                    "group closure exceeds cap " + std::to_string(cap));
            G.element_index.emplace(next, G.elements.size());
            G.elements.push_back(std::move(next));
            G.words.push_back({head, gi});
        }
    }
    return G;
}

/// One orbit of ordered k-simplices: the lexicographically smallest member as
/// representative, the orbit size, and the point-wise stabilizer order.
struct OrbitRep {
    std::vector<Vertex> simplex;
    std::size_t orbit_size = 0;
    std::size_t stabilizer_order = 0;
};

/// Orbit bookkeeping for ordered simplices of dimensions 0, 1, 2. locate maps
/// every ordered simplex to (representative index, group element carrying the
/// representative onto it).
struct OrbitData {
    std::size_t group_order = 1;
    std::array<std::vector<OrbitRep>, 3> reps;
    std::array<std::map<std::vector<Vertex>, std::array<std::size_t, 2>>, 3> locate;

    const OrbitRep& rep_of(std::size_t k, const std::vector<Vertex>& s,
                           std::size_t* element = nullptr) const {
        auto it = locate[k].find(s);
        require(it != locate[k].end(), Errc::InvalidArgument, "not an ordered simplex");
        if (element) *element = it->second[1];
        return reps[k][it->second[0]];
    }
};

namespace detail {

inline std::vector<std::vector<Vertex>> ordered_simplices(const WeightedComplex& X,
                                                          std::size_t k) {
    std::vector<std::vector<Vertex>> out;
    if (k == 0) {
        for (std::size_t v = 0; v < X.vertex_count; ++v)
            out.push_back({static_cast<Vertex>(v)});
    } else if (k == 1) {
        for (const Edge& e : X.edges) {
            out.push_back({e[0], e[1]});
            out.push_back({e[1], e[0]});
        }
    } else {
        for (const Triangle& t : X.triangles) {
            Triangle s = t;
            std::sort(s.begin(), s.end());
            do out.push_back({s[0], s[1], s[2]});
            while (std::next_permutation(s.begin(), s.end()));
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace detail

/// Deterministic orbit decomposition of the ordered simplices of X under G.
inline OrbitData orbit_data(const WeightedComplex& X, const GroupAction& G) {
    OrbitData O;
    O.group_order = G.order();
    for (std::size_t k = 0; k < 3; ++k) {
        auto all = detail::ordered_simplices(X, k);
        for (const auto& s : all) {
            if (O.locate[k].count(s)) continue;
            // s is lexicographically smallest in its orbit: the scan is ordered.
            OrbitRep rep;
            rep.simplex = s;
            for (std::size_t g = 0; g < G.order(); ++g) {
                auto img = G.act_tuple(g, s);
                if (img == s) ++rep.stabilizer_order;
                if (O.locate[k].emplace(std::move(img), std::array<std::size_t, 2>{
                                                            O.reps[k].size(), g})
                        .second)
                    ++rep.orbit_size;
            }
            require(rep.orbit_size * rep.stabilizer_order == G.order(), Errc::InvariantViolation,
                    "orbit-stabilizer identity fails");
            O.reps[k].push_back(std::move(rep));
        }
        require(O.locate[k].size() == all.size(), Errc::InvariantViolation,
                "orbit decomposition does not cover all simplices");
    }
    return O;
}

/// Both sides of the double-counting identity for a Γ-invariant function f on
/// pairs (τ, σ) of ordered simplices with dim τ = l < dim σ = k and τ ⊂ σ:
///   Σ_{σ∈Σ(k,Γ)} Σ_{τ⊂σ} f(τ,σ)/|Γ_σ|  and  Σ_{τ∈Σ(l,Γ)} Σ_{σ⊃τ} f(τ,σ)/|Γ_τ|.
/// Each side is accumulated as an orbit-size weighted integer-friendly sum and
/// divided by |Γ| once, so integer data stays exact. Invariance of f is
/// checked on every pair against every generator.
struct OrbitIdentitySides {
    double lhs = 0.0;
    double rhs = 0.0;
};

inline OrbitIdentitySides check_orbit_identity(
    const WeightedComplex& X, const GroupAction& G, const OrbitData& O,
    const std::function<double(const std::vector<Vertex>&, const std::vector<Vertex>&)>& f,
    std::size_t l, std::size_t k) {
    require(l < k && k <= 2, Errc::InvalidArgument, "need 0 <= l < k <= 2");

    auto subsimplices = [&](const std::vector<Vertex>& sigma) {
        std::vector<std::vector<Vertex>> taus;
        if (l == 0) {
            for (Vertex v : sigma) taus.push_back({v});
        } else {
            for (Vertex a : sigma)
                for (Vertex b : sigma)
                    if (a != b) taus.push_back({a, b});
        }
        return taus;
    };

    auto check_invariant = [&](const std::vector<Vertex>& tau, const std::vector<Vertex>& sigma,
                               double val) {
        for (std::size_t gi = 0; gi < G.generators.size(); ++gi) {
            std::size_t g = G.index_of(G.generators[gi]);
            double moved = f(G.act_tuple(g, tau), G.act_tuple(g, sigma));
            require(std::abs(moved - val) <= tol::identity_rel * (1.0 + std::abs(val)),
                    Errc::InvariantViolation, "pair function is not invariant");
        }
    };

    OrbitIdentitySides sides;
    double lhs_scaled = 0.0;
    for (const OrbitRep& rep : O.reps[k]) {
        double inner = 0.0;
        for (const auto& tau : subsimplices(rep.simplex)) {
            double val = f(tau, rep.simplex);
            check_invariant(tau, rep.simplex, val);
            inner += val;
        }
        lhs_scaled += inner * static_cast<double>(rep.orbit_size);
    }
    sides.lhs = lhs_scaled / static_cast<double>(G.order());

    // σ ⊃ τ enumeration: all ordered k-simplices whose vertex set contains τ's.
    auto contains = [](const std::vector<Vertex>& sigma, const std::vector<Vertex>& tau) {
        for (Vertex v : tau)
            if (std::find(sigma.begin(), sigma.end(), v) == sigma.end()) return false;
        return true;
    };
    auto all_sigma = detail::ordered_simplices(X, k);
    double rhs_scaled = 0.0;
    for (const OrbitRep& rep : O.reps[l]) {
        double inner = 0.0;
        for (const auto& sigma : all_sigma)
            if (contains(sigma, rep.simplex)) inner += f(rep.simplex, sigma);
        rhs_scaled += inner * static_cast<double>(rep.orbit_size);
    }
    sides.rhs = rhs_scaled / static_cast<double>(G.order());
    return sides;
}

}  // namespace linkgap
