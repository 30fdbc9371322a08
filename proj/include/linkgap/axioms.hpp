#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "defs.hpp"
#include "errors.hpp"
#include "parallel.hpp"
#include "rng.hpp"
#include "space.hpp"

namespace linkgap {

/// Worst sampled violations of the space contract, plus the empirical
/// modulus of uniform convexity on a fixed epsilon grid. A violation of 0
/// means every sampled instance satisfied the axiom.
struct AxiomReport {
    std::size_t trials = 0;
    std::uint64_t seed = 0;
    double worst_symmetry = 0.0;           ///< |d(x,y) - d(y,x)|
    double worst_identity = 0.0;           ///< d(x,x)
    double worst_triangle = 0.0;           ///< d(x,z) - d(x,y) - d(y,z), clamped at 0
    double worst_endpoint = 0.0;           ///< combine at t = 0 / t = 1 vs x / y
    double worst_geodesic = 0.0;           ///< |d(x, c_t) - t d(x,y)| and the mirror
    double worst_busemann = 0.0;           ///< four-point midpoint condition
    double worst_convexity = 0.0;          ///< d(c_t, z) vs the chord
    double worst_associativity = 0.0;      ///< combine(x,y,st) vs combine(x, combine(x,y,t), s)
    double worst_isometry_distance = 0.0;  ///< |d(Tx,Ty) - d(x,y)|
    double worst_isometry_midpoint = 0.0;  ///< d(T mid(x,y), mid(Tx,Ty))
    std::vector<double> theta_grid;        ///< epsilon values 0.1 .. 2.0
    std::vector<double> theta_hat;         ///< empirical modulus per epsilon
};

namespace detail {

struct AxiomAccumulator {
    double sym = 0, ident = 0, tri = 0, endp = 0, geo = 0, bus = 0, conv = 0, assoc = 0,
           iso_d = 0, iso_m = 0;
    std::vector<double> max_q;  ///< per epsilon bucket: max d(mid,a)/r over admissible pairs

    explicit AxiomAccumulator(std::size_t buckets) : max_q(buckets, 0.0) {}

    void merge(const AxiomAccumulator& o) {
        sym = std::max(sym, o.sym);
        ident = std::max(ident, o.ident);
        tri = std::max(tri, o.tri);
        endp = std::max(endp, o.endp);
        geo = std::max(geo, o.geo);
        bus = std::max(bus, o.bus);
        conv = std::max(conv, o.conv);
        assoc = std::max(assoc, o.assoc);
        iso_d = std::max(iso_d, o.iso_d);
        iso_m = std::max(iso_m, o.iso_m);
        for (std::size_t i = 0; i < max_q.size(); ++i) max_q[i] = std::max(max_q[i], o.max_q[i]);
    }
};

/// A point at the prescribed distance from a (or as far as the space allows,
/// for trees), plus the realized distance.
inline Point step_away(const Space& S, const Point& a, double dist, Rng& rng) {
    if (S.is_vector_space()) {
        std::vector<double> dir(S.dim());
        double norm = 0.0;
        do {
            for (double& c : dir) c = rng.normal();
            Point probe = S.point(dir);
            std::vector<double> zero(S.dim(), 0.0);
            norm = S.distance(probe, S.point(zero));
        } while (norm == 0.0);
        std::vector<double> c(S.dim());
        for (std::size_t i = 0; i < S.dim(); ++i) c[i] = a.coords[i] + dist * dir[i] / norm;
        return S.point(std::move(c));
    }
    Point target = S.random_point(rng);
    double reach = S.distance(a, target);
    if (reach == 0.0) return a;
    return S.combine(a, target, std::min(1.0, dist / reach));
}

inline void theta_sample(const Space& S, const Point& a, const Point& x, const Point& y,
                         const std::vector<double>& grid, AxiomAccumulator& acc) {
    double rx = S.distance(a, x), ry = S.distance(a, y);
    double r = std::max(rx, ry);
    if (r <= 1e-9) return;
    double s = S.distance(x, y) / r;
    double q = S.distance(S.combine(x, y, 0.5), a) / r;
    // admit every bucket the pair qualifies for (tiny slack absorbs rounding
    // on exactly-antipodal constructions)
    for (std::size_t j = 0; j < grid.size(); ++j)
        if (grid[j] <= s * (1.0 + 1e-12) + 1e-15) acc.max_q[j] = std::max(acc.max_q[j], q);
}

}  // namespace detail

/// Draws seeded random configurations and measures the worst violation of
/// each axiom the target-space contract promises, along with the empirical
/// modulus of uniform convexity theta_hat on the grid 0.1, 0.2, ..., 2.0.
inline AxiomReport sample_axioms(const Space& S, std::size_t trials, std::uint64_t seed) {
    require(trials >= 1, Errc::ParameterOutOfRange, "trials must be >= 1");
    std::vector<double> grid;
    for (int i = 1; i <= 20; ++i) grid.push_back(0.1 * i);

    std::vector<std::vector<int>> tree_autos;
    if (!S.is_vector_space()) tree_autos = tree_automorphisms(S);

    const std::size_t chunks = std::min<std::size_t>(64, trials);
    std::vector<detail::AxiomAccumulator> acc(chunks, detail::AxiomAccumulator(grid.size()));

    parallel_for(chunks, [&](std::size_t c) {
        detail::AxiomAccumulator& A = acc[c];
        for (std::size_t t = c; t < trials; t += chunks) {
            Rng rng = Rng::fork(seed, t);
            Point x = S.random_point(rng, 1.5);
            Point y = S.random_point(rng, 1.5);
            Point z = S.random_point(rng, 1.5);
            Point w = S.random_point(rng, 1.5);
            double tt = rng.uniform01();

            double dxy = S.distance(x, y);
            A.sym = std::max(A.sym, std::abs(dxy - S.distance(y, x)));
            A.ident = std::max(A.ident, S.distance(x, x));
            A.tri = std::max(A.tri, S.distance(x, z) - dxy - S.distance(y, z));

            A.endp = std::max(A.endp, S.distance(S.combine(x, y, 0.0), x));
            A.endp = std::max(A.endp, S.distance(S.combine(x, y, 1.0), y));

            Point ct = S.combine(x, y, tt);
            A.geo = std::max(A.geo, std::abs(S.distance(x, ct) - tt * dxy));
            A.geo = std::max(A.geo, std::abs(S.distance(y, ct) - (1.0 - tt) * dxy));

            Point mxy = S.combine(x, y, 0.5);
            Point mzw = S.combine(z, w, 0.5);
            A.bus = std::max(A.bus, S.distance(mxy, mzw) -
                                        0.5 * (S.distance(x, w) + S.distance(z, y)));

            A.conv = std::max(A.conv, S.distance(ct, z) -
                                          ((1.0 - tt) * S.distance(x, z) + tt * S.distance(y, z)));

            double ss = rng.uniform01();
            A.assoc = std::max(A.assoc, S.distance(S.combine(x, y, ss * tt),
                                                   S.combine(x, S.combine(x, y, tt), ss)));

            Isometry T = random_isometry(S, rng, tree_autos.empty() ? nullptr : &tree_autos);
            Point Tx = T.apply(S, x), Ty = T.apply(S, y);
            A.iso_d = std::max(A.iso_d, std::abs(S.distance(Tx, Ty) - dxy));
            A.iso_m = std::max(A.iso_m, S.distance(T.apply(S, mxy), S.combine(Tx, Ty, 0.5)));

            // modulus samples: center plus a pair on / inside the sphere
            Point a = S.random_point(rng, 1.5);
            double r = 0.25 + 1.75 * rng.uniform01();
            bool on_sphere = rng.uniform01() < 0.5;
            double dx_r = on_sphere ? r : r * rng.uniform01();
            double dy_r = on_sphere ? r : r * rng.uniform01();
            Point px = detail::step_away(S, a, dx_r, rng);
            Point py;
            if (t % 100 == 0 && S.is_vector_space()) {
                // exact antipode: reflection of px through a
                std::vector<double> c(S.dim());
                for (std::size_t i = 0; i < S.dim(); ++i)
                    c[i] = 2.0 * a.coords[i] - px.coords[i];
                py = S.point(std::move(c));
            } else if (t % 100 == 0 && !S.is_vector_space()) {
                // branch through a tree vertex: equal legs down two edges
                std::size_t v = rng.index(S.tree_vertex_count());
                const auto& inc = S.tree_adjacency()[v];
                if (inc.size() >= 2) {
                    std::size_t i1 = rng.index(inc.size());
                    std::size_t i2 = (i1 + 1 + rng.index(inc.size() - 1)) % inc.size();
                    const TreeEdge& e1 = S.tree_edges()[static_cast<std::size_t>(inc[i1])];
                    const TreeEdge& e2 = S.tree_edges()[static_cast<std::size_t>(inc[i2])];
                    double rr = std::min(e1.length, e2.length) * (0.1 + 0.9 * rng.uniform01());
                    a = S.tree_vertex(static_cast<int>(v));
                    px = S.tree_point(inc[i1],
                                      e1.a == static_cast<int>(v) ? rr : e1.length - rr);
                    py = S.tree_point(inc[i2],
                                      e2.a == static_cast<int>(v) ? rr : e2.length - rr);
                } else {
                    py = detail::step_away(S, a, dy_r, rng);
                }
            } else {
                py = detail::step_away(S, a, dy_r, rng);
            }
            detail::theta_sample(S, a, px, py, grid, A);
        }
    });

    for (std::size_t c = 1; c < chunks; ++c) acc[0].merge(acc[c]);

    AxiomReport R;
    R.trials = trials;
    R.seed = seed;
    R.worst_symmetry = acc[0].sym;
    R.worst_identity = acc[0].ident;
    R.worst_triangle = std::max(0.0, acc[0].tri);
    R.worst_endpoint = acc[0].endp;
    R.worst_geodesic = acc[0].geo;
    R.worst_busemann = std::max(0.0, acc[0].bus);
    R.worst_convexity = std::max(0.0, acc[0].conv);
    R.worst_associativity = acc[0].assoc;
    R.worst_isometry_distance = acc[0].iso_d;
    R.worst_isometry_midpoint = acc[0].iso_m;
    R.theta_grid = grid;
    R.theta_hat.resize(grid.size());
    for (std::size_t j = 0; j < grid.size(); ++j) R.theta_hat[j] = 1.0 - acc[0].max_q[j];
    return R;
}

}  // namespace linkgap
