#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "defs.hpp"
#include "errors.hpp"
#include "rng.hpp"

namespace linkgap {

enum class SpaceKind { Euclidean, Lp, Tree };

/// A point of one of the target spaces: a coordinate vector (Euclidean, l^p)
/// or a position on a metric tree as (edge id, offset from the edge's first
/// endpoint). Which half is active is decided by the owning Space.
struct Point {
    std::vector<double> coords;
    int edge = -1;
    double offset = 0.0;
};

struct TreeEdge {
    int a = 0;
    int b = 0;
    double length = 1.0;
};

/// Target metric space: distance, geodesic combination, point validation.
///
/// combine(x, y, t) returns the point z on the geodesic from x to y with
/// d(x, z) = t * d(x, y). In the vector spaces that is the affine point
/// (1-t)x + ty; in the tree it walks the unique path.
class Space {
  public:
    static Space euclidean(std::size_t dim) {
        require(dim >= 1, Errc::ParameterOutOfRange, "dimension must be >= 1");
        Space S;
        S.kind_ = SpaceKind::Euclidean;
        S.dim_ = dim;
        S.p_ = 2.0;
        return S;
    }

    /// Finite-dimensional l^p. p is kept in [1.1, 10] so the p-norm stays
    /// well-conditioned in double precision.
    static Space lp(std::size_t dim, double p) {
        require(dim >= 1, Errc::ParameterOutOfRange, "dimension must be >= 1");
        require(p >= 1.1 && p <= 10.0, Errc::ParameterOutOfRange, "p must lie in [1.1, 10]");
        Space S;
        S.kind_ = SpaceKind::Lp;
        S.dim_ = dim;
        S.p_ = p;
        return S;
    }

    /// Finite metric tree with positive edge lengths. Vertices are the
    /// integers 0..n-1 appearing in the edge list; the edge list must form a
    /// tree (connected, acyclic).
    static Space tree(const std::vector<TreeEdge>& edges) {
        require(!edges.empty(), Errc::InvalidArgument, "tree needs at least one edge");
        Space S;
        S.kind_ = SpaceKind::Tree;
        int maxv = 0;
        for (const TreeEdge& e : edges) {
            require(e.a >= 0 && e.b >= 0 && e.a != e.b, Errc::InvalidArgument,
                    "bad tree edge endpoints");
            require(e.length > 0.0, Errc::ParameterOutOfRange, "tree edge length must be positive");
            maxv = std::max(maxv, std::max(e.a, e.b));
        }
        S.tn_ = static_cast<std::size_t>(maxv) + 1;
        require(edges.size() == S.tn_ - 1, Errc::InvalidArgument, "edge count is not n-1");
        S.tedges_ = edges;
        S.tadj_.assign(S.tn_, {});
        for (std::size_t i = 0; i < edges.size(); ++i) {
            auto key = std::minmax(edges[i].a, edges[i].b);
            require(S.tedge_id_.emplace(key, static_cast<int>(i)).second, Errc::InvalidArgument,
                    "duplicate tree edge");
            S.tadj_[static_cast<std::size_t>(edges[i].a)].push_back(static_cast<int>(i));
            S.tadj_[static_cast<std::size_t>(edges[i].b)].push_back(static_cast<int>(i));
        }
        S.build_tree_tables();
        return S;
    }

    SpaceKind kind() const { return kind_; }
    bool is_vector_space() const { return kind_ != SpaceKind::Tree; }
    std::size_t dim() const { return dim_; }
    double p() const { return p_; }
    std::size_t tree_vertex_count() const { return tn_; }
    const std::vector<TreeEdge>& tree_edges() const { return tedges_; }

    bool same_shape(const Space& o) const {
        if (kind_ != o.kind_) return false;
        if (is_vector_space()) return dim_ == o.dim_ && p_ == o.p_;
        if (tn_ != o.tn_ || tedges_.size() != o.tedges_.size()) return false;
        for (std::size_t i = 0; i < tedges_.size(); ++i)
            if (tedges_[i].a != o.tedges_[i].a || tedges_[i].b != o.tedges_[i].b ||
                tedges_[i].length != o.tedges_[i].length)
                return false;
        return true;
    }

    Point point(std::vector<double> coords) const {
        require(is_vector_space(), Errc::ForeignPoint, "coordinate point in a tree space");
        require(coords.size() == dim_, Errc::DimensionMismatch, "coordinate dimension mismatch");
        Point x;
        x.coords = std::move(coords);
        return x;
    }

    /// Tree point, canonicalized: offsets at 0 or the full edge length are
    /// rewritten onto the vertex's lowest-numbered incident edge so equal
    /// points compare equal.
    Point tree_point(int edge, double offset) const {
        require(kind_ == SpaceKind::Tree, Errc::ForeignPoint, "tree point in a vector space");
        require(edge >= 0 && static_cast<std::size_t>(edge) < tedges_.size(), Errc::ForeignPoint,
                "tree edge id out of range");
        const TreeEdge& e = tedges_[static_cast<std::size_t>(edge)];
        require(offset >= -1e-12 && offset <= e.length + 1e-12, Errc::ForeignPoint,
                "tree offset outside edge");
        offset = std::clamp(offset, 0.0, e.length);
        if (offset == 0.0) return vertex_point_(e.a);
        if (offset == e.length) return vertex_point_(e.b);
        Point x;
        x.edge = edge;
        x.offset = offset;
        return x;
    }

    Point tree_vertex(int v) const {
        require(kind_ == SpaceKind::Tree, Errc::ForeignPoint, "tree vertex in a vector space");
        require(v >= 0 && static_cast<std::size_t>(v) < tn_, Errc::ForeignPoint,
                "tree vertex id out of range");
        return vertex_point_(v);
    }

    double tree_vertex_distance(int a, int b) const {
        return tdist_[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)];
    }

    void validate(const Point& x) const {
        if (is_vector_space()) {
            require(x.edge < 0, Errc::ForeignPoint, "tree point in a vector space");
            require(x.coords.size() == dim_, Errc::DimensionMismatch,
                    "coordinate dimension mismatch");
        } else {
            require(x.coords.empty(), Errc::ForeignPoint, "coordinate point in a tree space");
            require(x.edge >= 0 && static_cast<std::size_t>(x.edge) < tedges_.size(),
                    Errc::ForeignPoint, "tree edge id out of range");
            double len = tedges_[static_cast<std::size_t>(x.edge)].length;
            require(x.offset >= 0.0 && x.offset <= len, Errc::ForeignPoint,
                    "tree offset outside edge");
        }
    }

    double distance(const Point& x, const Point& y) const {
        validate(x);
        validate(y);
        if (kind_ == SpaceKind::Euclidean) {
            double s = 0.0;
            for (std::size_t i = 0; i < dim_; ++i) {
                double d = x.coords[i] - y.coords[i];
                s += d * d;
            }
            return std::sqrt(s);
        }
        if (kind_ == SpaceKind::Lp) {
            double s = 0.0;
            for (std::size_t i = 0; i < dim_; ++i) s += std::pow(std::abs(x.coords[i] - y.coords[i]), p_);
            return std::pow(s, 1.0 / p_);
        }
        if (x.edge == y.edge) return std::abs(x.offset - y.offset);
        auto [ux, dx] = exit_candidates_(x);
        auto [uy, dy] = exit_candidates_(y);
        double best = -1.0;
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) {
                double d = dx[i] + tdist_[ux[i]][uy[j]] + dy[j];
                if (best < 0.0 || d < best) best = d;
            }
        return best;
    }

    Point combine(const Point& x, const Point& y, double t) const {
        validate(x);
        validate(y);
        require(t >= 0.0 && t <= 1.0, Errc::ParameterOutOfRange,
                "geodesic parameter outside [0,1]");
        if (is_vector_space()) {
            Point z;
            z.coords.resize(dim_);
            for (std::size_t i = 0; i < dim_; ++i)
                z.coords[i] = x.coords[i] + t * (y.coords[i] - x.coords[i]);
            return z;
        }
        if (x.edge == y.edge)
            return tree_point(x.edge, x.offset + t * (y.offset - x.offset));
        double total = distance(x, y);
        if (total == 0.0) return x;
        double target = t * total;

        auto [ux, dx] = exit_candidates_(x);
        auto [uy, dy] = exit_candidates_(y);
        int bi = 0, bj = 0;
        double best = -1.0;
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) {
                double d = dx[i] + tdist_[ux[i]][uy[j]] + dy[j];
                if (best < 0.0 || d < best) {
                    best = d;
                    bi = i;
                    bj = j;
                }
            }
        int u = static_cast<int>(ux[bi]);  // path: x -> u -> ... -> v -> y
        int v = static_cast<int>(uy[bj]);

        // first leg, on x's edge
        const TreeEdge& ex = tedges_[static_cast<std::size_t>(x.edge)];
        if (target <= dx[bi]) {
            double off = (u == ex.a) ? x.offset - target : x.offset + target;
            return tree_point(x.edge, off);
        }
        double remaining = target - dx[bi];
        // vertex-to-vertex legs
        int cur = u;
        while (cur != v) {
            int nxt = tnext_[static_cast<std::size_t>(cur)][static_cast<std::size_t>(v)];
            int eid = edge_between_(cur, nxt);
            const TreeEdge& e = tedges_[static_cast<std::size_t>(eid)];
            if (remaining <= e.length) {
                double off = (cur == e.a) ? remaining : e.length - remaining;
                return tree_point(eid, off);
            }
            remaining -= e.length;
            cur = nxt;
        }
        // last leg, on y's edge, walking from v toward y
        const TreeEdge& ey = tedges_[static_cast<std::size_t>(y.edge)];
        double off = (v == ey.a) ? std::min(remaining, y.offset)
                                 : ey.length - std::min(remaining, ey.length - y.offset);
        return tree_point(y.edge, off);
    }

    Point random_point(Rng& rng, double scale = 1.0) const {
        if (is_vector_space()) {
            std::vector<double> c(dim_);
            for (double& v : c) v = scale * rng.normal();
            return point(std::move(c));
        }
        std::size_t e = rng.index(tedges_.size());
        double off = rng.uniform01() * tedges_[e].length;
        return tree_point(static_cast<int>(e), off);
    }

    const std::vector<std::vector<int>>& tree_adjacency() const { return tadj_; }

    int tree_edge_between(int a, int b) const { return edge_between_(a, b); }

  private:
    Point vertex_point_(int v) const {
        int eid = tadj_[static_cast<std::size_t>(v)].front();
        const TreeEdge& e = tedges_[static_cast<std::size_t>(eid)];
        Point x;
        x.edge = eid;
        x.offset = (v == e.a) ? 0.0 : e.length;
        return x;
    }

    // the two tree vertices a point can exit through, with the leg lengths
    std::pair<std::array<std::size_t, 2>, std::array<double, 2>> exit_candidates_(
        const Point& x) const {
        const TreeEdge& e = tedges_[static_cast<std::size_t>(x.edge)];
        return {{static_cast<std::size_t>(e.a), static_cast<std::size_t>(e.b)},
                {x.offset, e.length - x.offset}};
    }

    int edge_between_(int a, int b) const {
        auto it = tedge_id_.find(std::minmax(a, b));
        require(it != tedge_id_.end(), Errc::InvalidArgument, "no tree edge between vertices");
        return it->second;
    }

    void build_tree_tables() {
        tdist_.assign(tn_, std::vector<double>(tn_, 0.0));
        tnext_.assign(tn_, std::vector<int>(tn_, -1));
        for (std::size_t r = 0; r < tn_; ++r) {
            // BFS from r; parent pointers give the next hop toward r.
            std::vector<int> parent(tn_, -1);
            std::vector<char> seen(tn_, 0);
            std::vector<std::size_t> queue{r};
            seen[r] = 1;
            for (std::size_t head = 0; head < queue.size(); ++head) {
                std::size_t cur = queue[head];
                for (int eid : tadj_[cur]) {
                    const TreeEdge& e = tedges_[static_cast<std::size_t>(eid)];
                    std::size_t other =
                        static_cast<std::size_t>(e.a) == cur ? static_cast<std::size_t>(e.b)
                                                             : static_cast<std::size_t>(e.a);
                    if (seen[other]) continue;
                    seen[other] = 1;
                    parent[other] = static_cast<int>(cur);
                    tdist_[r][other] = tdist_[r][cur] + e.length;
                    queue.push_back(other);
                }
            }
            for (std::size_t v = 0; v < tn_; ++v) {
                require(seen[v], Errc::InvalidArgument, "tree edges are not connected");
                if (v != r) tnext_[v][r] = parent[v];
            }
        }
    }

    SpaceKind kind_ = SpaceKind::Euclidean;
    std::size_t dim_ = 0;
    double p_ = 2.0;

    std::vector<TreeEdge> tedges_;
    std::size_t tn_ = 0;
    std::vector<std::vector<int>> tadj_;                ///< per-vertex incident edge ids
    std::vector<std::vector<double>> tdist_;            ///< vertex-vertex distances
    std::vector<std::vector<int>> tnext_;               ///< tnext_[v][r]: neighbor of v toward r
    std::map<std::pair<int, int>, int> tedge_id_;
};

/// Isometry of a target space. Vector spaces get signed coordinate
/// permutations plus a translation — isometries of every l^p norm — applied
/// as (Tx)[i] = sign[i] * x[perm[i]] + translation[i]. Trees get
/// length-preserving vertex permutations.
struct Isometry {
    SpaceKind kind = SpaceKind::Euclidean;
    std::vector<std::size_t> perm;
    std::vector<double> sign;
    std::vector<double> translation;
    std::vector<int> tree_perm;

    static Isometry identity(const Space& S) {
        Isometry T;
        T.kind = S.kind();
        if (S.is_vector_space()) {
            T.perm.resize(S.dim());
            for (std::size_t i = 0; i < S.dim(); ++i) T.perm[i] = i;
            T.sign.assign(S.dim(), 1.0);
            T.translation.assign(S.dim(), 0.0);
        } else {
            T.tree_perm.resize(S.tree_vertex_count());
            for (std::size_t i = 0; i < T.tree_perm.size(); ++i)
                T.tree_perm[i] = static_cast<int>(i);
        }
        return T;
    }

    static Isometry signed_permutation(const Space& S, std::vector<std::size_t> perm,
                                       std::vector<double> sign,
                                       std::vector<double> translation) {
        require(S.is_vector_space(), Errc::SpaceMismatch,
                "signed permutations act on vector spaces");
        Isometry T;
        T.kind = S.kind();
        T.perm = std::move(perm);
        T.sign = std::move(sign);
        T.translation = std::move(translation);
        T.check_shape(S);
        return T;
    }

    static Isometry tree_automorphism(const Space& S, std::vector<int> vperm) {
        require(S.kind() == SpaceKind::Tree, Errc::SpaceMismatch, "not a tree space");
        require(vperm.size() == S.tree_vertex_count(), Errc::InvalidArgument,
                "automorphism length mismatch");
        for (const TreeEdge& e : S.tree_edges()) {
            int a = vperm[static_cast<std::size_t>(e.a)];
            int b = vperm[static_cast<std::size_t>(e.b)];
            int eid = -1;
            try {
                eid = S.tree_edge_between(a, b);
            } catch (const Error&) {
                fail(Errc::NotAutomorphism, "vertex permutation does not preserve tree edges");
            }
            double len = S.tree_edges()[static_cast<std::size_t>(eid)].length;
            require(std::abs(len - e.length) <= tol::identity_rel * len, Errc::NotAutomorphism,
                    "tree automorphism does not preserve edge lengths");
        }
        Isometry T;
        T.kind = SpaceKind::Tree;
        T.tree_perm = std::move(vperm);
        return T;
    }

    void check_shape(const Space& S) const {
        if (S.is_vector_space()) {
            require(kind != SpaceKind::Tree, Errc::SpaceMismatch,
                    "tree isometry applied in a vector space");
            require(perm.size() == S.dim() && sign.size() == S.dim() &&
                        translation.size() == S.dim(),
                    Errc::DimensionMismatch, "isometry dimension mismatch");
            std::vector<char> hit(S.dim(), 0);
            for (std::size_t j : perm) {
                require(j < S.dim() && !hit[j], Errc::InvalidArgument,
                        "isometry permutation is not a bijection");
                hit[j] = 1;
            }
            for (double s : sign)
                require(s == 1.0 || s == -1.0, Errc::InvalidArgument, "isometry signs must be ±1");
        } else {
            require(kind == SpaceKind::Tree, Errc::SpaceMismatch,
                    "vector isometry applied in a tree space");
            require(tree_perm.size() == S.tree_vertex_count(), Errc::DimensionMismatch,
                    "automorphism length mismatch");
        }
    }

    Point apply(const Space& S, const Point& x) const {
        check_shape(S);
        S.validate(x);
        if (S.is_vector_space()) {
            Point y;
            y.coords.resize(S.dim());
            for (std::size_t i = 0; i < S.dim(); ++i)
                y.coords[i] = sign[i] * x.coords[perm[i]] + translation[i];
            return y;
        }
        const TreeEdge& e = S.tree_edges()[static_cast<std::size_t>(x.edge)];
        int a = tree_perm[static_cast<std::size_t>(e.a)];
        int b = tree_perm[static_cast<std::size_t>(e.b)];
        int eid = S.tree_edge_between(a, b);
        const TreeEdge& img = S.tree_edges()[static_cast<std::size_t>(eid)];
        double off = (a == img.a) ? x.offset : img.length - x.offset;
        return S.tree_point(eid, off);
    }

    /// this ∘ other (apply other first)
    Isometry compose_after(const Isometry& other) const {
        Isometry r;
        r.kind = kind;
        if (kind != SpaceKind::Tree) {
            std::size_t n = perm.size();
            r.perm.resize(n);
            r.sign.resize(n);
            r.translation.resize(n);
            for (std::size_t i = 0; i < n; ++i) {
                r.perm[i] = other.perm[perm[i]];
                r.sign[i] = sign[i] * other.sign[perm[i]];
                r.translation[i] = sign[i] * other.translation[perm[i]] + translation[i];
            }
        } else {
            r.tree_perm.resize(tree_perm.size());
            for (std::size_t v = 0; v < tree_perm.size(); ++v)
                r.tree_perm[v] = tree_perm[static_cast<std::size_t>(other.tree_perm[v])];
        }
        return r;
    }

    bool approx_equals(const Isometry& o, double tolerance) const {
        if (kind != o.kind) return false;
        if (kind != SpaceKind::Tree) {
            if (perm != o.perm || sign != o.sign) return false;
            for (std::size_t i = 0; i < translation.size(); ++i)
                if (std::abs(translation[i] - o.translation[i]) > tolerance) return false;
            return true;
        }
        return tree_perm == o.tree_perm;
    }
};

/// All length-preserving vertex permutations of a metric tree, by
/// backtracking over degree/length-compatible assignments.
inline std::vector<std::vector<int>> tree_automorphisms(const Space& S,
                                                        std::size_t cap = 10000) {
    require(S.kind() == SpaceKind::Tree, Errc::SpaceMismatch, "not a tree space");
    std::size_t n = S.tree_vertex_count();
    std::vector<std::vector<int>> out;
    std::vector<int> perm(n, -1);
    std::vector<char> used(n, 0);

    auto consistent = [&](int v, int img) {
        for (int eid : S.tree_adjacency()[static_cast<std::size_t>(v)]) {
            const TreeEdge& e = S.tree_edges()[static_cast<std::size_t>(eid)];
            int w = e.a == v ? e.b : e.a;
            if (perm[static_cast<std::size_t>(w)] < 0) continue;
            int iw = perm[static_cast<std::size_t>(w)];
            int ieid;
            try {
                ieid = S.tree_edge_between(img, iw);
            } catch (const Error&) {
                return false;
            }
            double len = S.tree_edges()[static_cast<std::size_t>(ieid)].length;
            if (std::abs(len - e.length) > tol::identity_rel * len) return false;
        }
        return true;
    };

    std::function<void(std::size_t)> rec = [&](std::size_t v) {
        if (out.size() >= cap) return;
        if (v == n) {
            out.push_back(perm);
            return;
        }
        for (std::size_t img = 0; img < n; ++img) {
            if (used[img]) continue;
            if (!consistent(static_cast<int>(v), static_cast<int>(img))) continue;
            perm[v] = static_cast<int>(img);
            used[img] = 1;
            rec(v + 1);
            perm[v] = -1;
            used[img] = 0;
        }
    };
    rec(0);
    return out;
}

/// Random signed permutation plus bounded translation (vector spaces) or a
/// uniformly chosen member of a precomputed automorphism list (trees).
inline Isometry random_isometry(const Space& S, Rng& rng,
                                const std::vector<std::vector<int>>* tree_autos = nullptr) {
    if (S.is_vector_space()) {
        std::size_t n = S.dim();
        std::vector<std::size_t> perm(n);
        for (std::size_t i = 0; i < n; ++i) perm[i] = i;
        for (std::size_t i = n; i > 1; --i) std::swap(perm[i - 1], perm[rng.index(i)]);
        std::vector<double> sign(n), trans(n);
        for (std::size_t i = 0; i < n; ++i) {
            sign[i] = rng.uniform01() < 0.5 ? -1.0 : 1.0;
            trans[i] = rng.uniform(-1.0, 1.0);
        }
        return Isometry::signed_permutation(S, std::move(perm), std::move(sign),
                                            std::move(trans));
    }
    require(tree_autos != nullptr && !tree_autos->empty(), Errc::InvalidArgument,
            "tree isometry sampling needs an automorphism list");
    return Isometry::tree_automorphism(S, (*tree_autos)[rng.index(tree_autos->size())]);
}

}  // namespace linkgap
