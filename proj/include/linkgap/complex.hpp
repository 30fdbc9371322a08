#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "defs.hpp"
#include "errors.hpp"

namespace linkgap {

using Vertex = int;
using Edge = std::array<Vertex, 2>;      ///< unordered, stored ascending
using Triangle = std::array<Vertex, 3>;  ///< unordered, stored ascending

inline Edge make_edge(Vertex a, Vertex b) {
    require(a != b, Errc::InvalidArgument, "degenerate edge");
    if (a > b) std::swap(a, b);
    return Edge{a, b};
}

inline Triangle make_triangle(Vertex a, Vertex b, Vertex c) {
    require(a != b && b != c && a != c, Errc::InvalidArgument, "degenerate triangle");
    Triangle t{a, b, c};
    std::sort(t.begin(), t.end());
    return t;
}

/// Connectivity of an undirected graph on n nodes given by local-index edges.
inline bool is_connected(std::size_t n, const std::vector<std::array<std::size_t, 2>>& edges) {
    if (n == 0) return false;
    std::vector<std::vector<std::size_t>> adj(n);
    for (const auto& e : edges) {
        adj[e[0]].push_back(e[1]);
        adj[e[1]].push_back(e[0]);
    }
    std::vector<char> seen(n, 0);
    std::vector<std::size_t> stack{0};
    seen[0] = 1;
    std::size_t reached = 1;
    while (!stack.empty()) {
        std::size_t v = stack.back();
        stack.pop_back();
        for (std::size_t w : adj[v])
            if (!seen[w]) {
                seen[w] = 1;
                ++reached;
                stack.push_back(w);
            }
    }
    return reached == n;
}

/// Finite pure 2-dimensional simplicial complex with a positive weight on
/// triangles and edges satisfying, for every edge e,
///   sum over triangles t containing e of m(t) = C(m) * m(e),
/// the unordered form of the admissibility condition (the ordered-count
/// factor 3! cancels against the 6 ordered copies of each triangle).
struct WeightedComplex {
    std::size_t vertex_count = 0;
    std::vector<Triangle> triangles;       ///< lexicographically sorted, unique
    std::vector<double> triangle_weights;  ///< parallel to triangles
    std::vector<Edge> edges;               ///< lexicographically sorted; every edge lies in a triangle
    std::vector<double> edge_weights;      ///< parallel to edges
    double weight_constant = 1.0;          ///< C(m)

    std::map<Edge, std::size_t> edge_index;
    std::map<Triangle, std::size_t> triangle_index;
    std::vector<std::vector<Vertex>> neighbors;  ///< per-vertex sorted adjacency

    bool has_vertex(Vertex v) const { return v >= 0 && static_cast<std::size_t>(v) < vertex_count; }

    bool has_edge(Vertex a, Vertex b) const {
        return a != b && edge_index.count(make_edge(a, b)) > 0;
    }

    std::size_t edge_id(Vertex a, Vertex b) const {
        auto it = edge_index.find(make_edge(a, b));
        require(it != edge_index.end(), Errc::InvalidArgument,
                "no edge {" + std::to_string(a) + "," + std::to_string(b) + "}");
        return it->second;
    }

    double edge_weight(Vertex a, Vertex b) const { return edge_weights[edge_id(a, b)]; }

    double triangle_weight(Vertex a, Vertex b, Vertex c) const {
        auto it = triangle_index.find(make_triangle(a, b, c));
        require(it != triangle_index.end(), Errc::InvalidArgument, "no such triangle");
        return triangle_weights[it->second];
    }

    /// delta = min over edges of m(e); the denominator of the displacement bound.
    double min_edge_weight() const {
        double d = edge_weights.front();
        for (double w : edge_weights) d = std::min(d, w);
        return d;
    }
};

/// Weighted link of a vertex: vertices v with {u,v} an edge, edges {v,w}
/// with {u,v,w} a triangle, m_u(v) = m({u,v}), m_u({v,w}) = m({u,v,w}).
struct LinkGraph {
    Vertex center = -1;
    double weight_constant = 1.0;  ///< C(m) of the ambient complex
    std::vector<Vertex> vertices;  ///< ambient vertex ids, ascending
    std::vector<double> vertex_weights;
    std::vector<std::array<std::size_t, 2>> edges;  ///< local indices into vertices, i<j
    std::vector<double> edge_weights;

    std::size_t size() const { return vertices.size(); }

    std::size_t local_index(Vertex v) const {
        auto it = std::lower_bound(vertices.begin(), vertices.end(), v);
        require(it != vertices.end() && *it == v, Errc::UnknownVertex,
                "vertex " + std::to_string(v) + " not in link");
        return static_cast<std::size_t>(it - vertices.begin());
    }

    /// Weighted degree per link vertex: sum of incident link-edge weights.
    std::vector<double> weighted_degrees() const {
        std::vector<double> deg(vertices.size(), 0.0);
        for (std::size_t i = 0; i < edges.size(); ++i) {
            deg[edges[i][0]] += edge_weights[i];
            deg[edges[i][1]] += edge_weights[i];
        }
        return deg;
    }
};

/// Link of u, with the degree identity sum_w m_u({v,w}) = C(m) m_u(v) verified.
inline LinkGraph link_of(const WeightedComplex& X, Vertex u) {
    require(X.has_vertex(u), Errc::UnknownVertex, "vertex " + std::to_string(u));
    LinkGraph L;
    L.center = u;
    L.weight_constant = X.weight_constant;
    L.vertices = X.neighbors[static_cast<std::size_t>(u)];
    L.vertex_weights.reserve(L.vertices.size());
    for (Vertex v : L.vertices) L.vertex_weights.push_back(X.edge_weight(u, v));
    for (std::size_t ti = 0; ti < X.triangles.size(); ++ti) {
        const Triangle& t = X.triangles[ti];
        if (t[0] != u && t[1] != u && t[2] != u) continue;
        Vertex v = t[0] == u ? t[1] : t[0];
        Vertex w = t[2] == u ? t[1] : t[2];
        std::size_t i = L.local_index(v), j = L.local_index(w);
        if (i > j) std::swap(i, j);
        L.edges.push_back({i, j});
        L.edge_weights.push_back(X.triangle_weights[ti]);
    }
    auto deg = L.weighted_degrees();
    for (std::size_t i = 0; i < L.size(); ++i) {
        double expect = L.weight_constant * L.vertex_weights[i];
        require(std::abs(deg[i] - expect) <= tol::identity_rel * expect, Errc::InvariantViolation,
                "link degree identity fails at vertex " + std::to_string(L.vertices[i]));
    }
    return L;
}

/// Builds a complex from unordered triples. Edge weights are derived as
/// m(e) = sum of the weights of the triangles containing e, i.e. the C(m)=1
/// normalization; use rescale_weights to move to another constant.
///
/// vertex_count 0 means "infer as max vertex id + 1". extra_edges may list
/// edges beyond the triangle-derived ones; any such edge makes the complex
/// non-pure and is rejected (it exists to express malformed inputs).
inline WeightedComplex build_complex(const std::vector<Triangle>& triples,
                                     const std::vector<double>& weights = {},
                                     std::size_t vertex_count = 0,
                                     const std::vector<Edge>& extra_edges = {}) {
    require(!triples.empty(), Errc::InvalidArgument, "no triangles");
    require(weights.empty() || weights.size() == triples.size(), Errc::InvalidArgument,
            "triangle_weights length mismatch");
    for (double w : weights)
        require(w > 0.0, Errc::NonPositiveWeight, "triangle weight must be positive");

    WeightedComplex X;
    std::map<Triangle, double> tw;
    Vertex max_v = 0;
    for (std::size_t i = 0; i < triples.size(); ++i) {
        Triangle t = make_triangle(triples[i][0], triples[i][1], triples[i][2]);
        require(t[0] >= 0, Errc::InvalidArgument, "negative vertex id");
        require(tw.emplace(t, weights.empty() ? 1.0 : weights[i]).second, Errc::InvalidArgument,
                "duplicate triangle");
        max_v = std::max(max_v, t[2]);
    }
    std::size_t needed = static_cast<std::size_t>(max_v) + 1;
    for (const Edge& e : extra_edges) max_v = std::max(max_v, make_edge(e[0], e[1])[1]);
    needed = std::max(needed, static_cast<std::size_t>(max_v) + 1);
    require(vertex_count == 0 || vertex_count >= needed, Errc::InvalidArgument,
            "vertex id exceeds vertex_count");
    X.vertex_count = vertex_count == 0 ? needed : vertex_count;

    for (const auto& [t, w] : tw) {
        X.triangle_index.emplace(t, X.triangles.size());
        X.triangles.push_back(t);
        X.triangle_weights.push_back(w);
    }

    // Edge weights under the C(m)=1 normalization.
    std::map<Edge, double> ew;
    for (std::size_t i = 0; i < X.triangles.size(); ++i) {
        const Triangle& t = X.triangles[i];
        for (auto [a, b] : {std::pair{t[0], t[1]}, {t[0], t[2]}, {t[1], t[2]}})
            ew[make_edge(a, b)] += X.triangle_weights[i];
    }
    for (const Edge& raw : extra_edges) {
        Edge e = make_edge(raw[0], raw[1]);
        require(ew.count(e) > 0, Errc::NonPure,
                "edge {" + std::to_string(e[0]) + "," + std::to_string(e[1]) +
                    "} lies in no triangle");
    }
    for (const auto& [e, w] : ew) {
        X.edge_index.emplace(e, X.edges.size());
        X.edges.push_back(e);
        X.edge_weights.push_back(w);
    }
    X.weight_constant = 1.0;

    X.neighbors.assign(X.vertex_count, {});
    for (const Edge& e : X.edges) {
        X.neighbors[static_cast<std::size_t>(e[0])].push_back(e[1]);
        X.neighbors[static_cast<std::size_t>(e[1])].push_back(e[0]);
    }
    for (std::size_t v = 0; v < X.vertex_count; ++v) {
        auto& nb = X.neighbors[v];
        std::sort(nb.begin(), nb.end());
        require(!nb.empty(), Errc::NonPure, "isolated vertex " + std::to_string(v));
    }

    for (std::size_t v = 0; v < X.vertex_count; ++v) {
        LinkGraph L = link_of(X, static_cast<Vertex>(v));
        require(is_connected(L.size(), L.edges), Errc::DisconnectedLink,
                "link of vertex " + std::to_string(v) + " is disconnected");
    }
    return X;
}

/// Verifies sum_{t ⊇ e} m(t) = C(m) m(e) for every edge, at relative tolerance.
inline void check_admissibility(const WeightedComplex& X) {
    std::vector<double> sums(X.edges.size(), 0.0);
    for (std::size_t i = 0; i < X.triangles.size(); ++i) {
        const Triangle& t = X.triangles[i];
        for (auto [a, b] : {std::pair{t[0], t[1]}, {t[0], t[2]}, {t[1], t[2]}})
            sums[X.edge_id(a, b)] += X.triangle_weights[i];
    }
    for (std::size_t i = 0; i < X.edges.size(); ++i) {
        double expect = X.weight_constant * X.edge_weights[i];
        require(std::abs(sums[i] - expect) <= tol::admissibility_rel * expect,
                Errc::InvariantViolation,
                "admissibility fails at edge {" + std::to_string(X.edges[i][0]) + "," +
                    std::to_string(X.edges[i][1]) + "}");
    }
}

/// Renormalizes so the returned complex has weight_constant = target_C.
/// Triangle weights are untouched; edge weights scale by C(m)/target_C.
inline WeightedComplex rescale_weights(const WeightedComplex& X, double target_C) {
    require(target_C > 0.0, Errc::ParameterOutOfRange, "target C(m) must be positive");
    WeightedComplex Y = X;
    double factor = X.weight_constant / target_C;
    for (double& w : Y.edge_weights) w *= factor;
    Y.weight_constant = target_C;
    check_admissibility(Y);
    return Y;
}

}  // namespace linkgap
