#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "complex.hpp"
#include "defs.hpp"
#include "equivariant.hpp"
#include "errors.hpp"
#include "gauge.hpp"
#include "group.hpp"
#include "space.hpp"

namespace linkgap {

namespace detail {

/// Weighted anchor configuration: the data a local energy sees.
struct Anchors {
    std::vector<Point> points;
    std::vector<double> weights;
};

inline double anchors_energy(const Space& S, const Gauge& f, const Anchors& A, const Point& xi) {
    double s = 0.0;
    for (std::size_t i = 0; i < A.points.size(); ++i)
        s += A.weights[i] * f(S.distance(xi, A.points[i]));
    return s;
}

inline double anchors_diameter(const Space& S, const Anchors& A) {
    double d = 0.0;
    for (std::size_t i = 0; i < A.points.size(); ++i)
        for (std::size_t j = i + 1; j < A.points.size(); ++j)
            d = std::max(d, S.distance(A.points[i], A.points[j]));
    return d;
}

/// Golden-section minimum of a unimodal g on [a, b]; returns (t, g(t)).
template <typename F>
std::pair<double, double> golden_min(F&& g, double a, double b, int iters = 60) {
    constexpr double inv_phi = 0.6180339887498949;
    double x1 = b - inv_phi * (b - a), x2 = a + inv_phi * (b - a);
    double g1 = g(x1), g2 = g(x2);
    for (int i = 0; i < iters; ++i) {
        if (g1 <= g2) {
            b = x2;
            x2 = x1;
            g2 = g1;
            x1 = b - inv_phi * (b - a);
            g1 = g(x1);
        } else {
            a = x1;
            x1 = x2;
            g1 = g2;
            x2 = a + inv_phi * (b - a);
            g2 = g(x2);
        }
    }
    return g1 <= g2 ? std::pair{x1, g1} : std::pair{x2, g2};
}

/// Minimizer of the weighted anchor energy by geodesic descent: move toward
/// the anchor with the steepest probed one-sided slope using a halving
/// (Armijo 0.25) line search, then polish with golden-section sweeps along
/// the anchor geodesics; certify optimality by midpoint probes. Needs only
/// distance and combine, so it runs unchanged in every implemented space.
/// For Euclidean targets with f = x^2 the closed-form weighted mean is
/// returned instead unless force_descent asks for the iteration.
inline Point minimize_anchors(const Space& S, const Gauge& f, const Anchors& A, double tol,
                              const Point* start = nullptr, bool force_descent = false) {
    require(!A.points.empty(), Errc::InvalidArgument, "no anchors");
    if (S.kind() == SpaceKind::Euclidean && f.is_square() && !force_descent) {
        std::vector<double> mean(S.dim(), 0.0);
        double total = 0.0;
        for (std::size_t i = 0; i < A.points.size(); ++i) {
            total += A.weights[i];
            for (std::size_t c = 0; c < S.dim(); ++c)
                mean[c] += A.weights[i] * A.points[i].coords[c];
        }
        for (double& c : mean) c /= total;
        return S.point(std::move(mean));
    }

    double diam = anchors_diameter(S, A);
    std::size_t heaviest = 0;
    for (std::size_t i = 1; i < A.weights.size(); ++i)
        if (A.weights[i] > A.weights[heaviest]) heaviest = i;
    Point xi = start ? *start : A.points[heaviest];
    if (diam == 0.0 && !start) return xi;

    double step_tol = tol * (1.0 + diam);
    double energy = anchors_energy(S, f, A, xi);
    auto certificate = [&]() {
        double allowed = tol * (1.0 + energy);
        for (const Point& a : A.points) {
            if (anchors_energy(S, f, A, S.combine(xi, a, 0.5)) < energy - allowed) return false;
        }
        return true;
    };

    // Vector spaces admit straight-line moves in any direction, and both gauge
    // kinds have closed-form derivatives, so run gradient descent with
    // Barzilai-Borwein steps (halved until monotone). All stopping scales are
    // relative to the local anchor radius: the iterate shrinks configurations
    // toward a point, and absolute cutoffs would either freeze early or grind
    // forever. The anchor-geodesic walk below stays as the purely metric
    // fallback (trees), where only combine() is available.
    if (S.is_vector_space() && !force_descent) {
        const std::size_t dim = S.dim();
        const double pn = S.p();
        // returns the local anchor radius at `at`
        auto eval_grad = [&](const Point& at, std::vector<double>& g_out) {
            double r_loc = 0.0;
            std::fill(g_out.begin(), g_out.end(), 0.0);
            for (std::size_t i = 0; i < A.points.size(); ++i) {
                double d = S.distance(at, A.points[i]);
                r_loc = std::max(r_loc, d);
                if (d <= 0.0) continue;
                double fp = A.weights[i] * f.derivative(d);
                for (std::size_t c = 0; c < dim; ++c) {
                    double t = at.coords[c] - A.points[i].coords[c];
                    if (t == 0.0) continue;
                    // d|x|_p/dx_c = sign(x_c) (|x_c|/|x|_p)^(p-1)
                    double g = pn == 2.0 ? t / d
                                         : std::copysign(std::pow(std::abs(t) / d, pn - 1.0), t);
                    g_out[c] += fp * g;
                }
            }
            return r_loc;
        };
        auto norm_of = [&](const std::vector<double>& g) {
            double n = 0.0;
            for (double c : g) n += c * c;
            return std::sqrt(n);
        };

        std::vector<double> grad(dim), cand_grad(dim), prev_grad(dim), moved_by(dim);
        bool have_prev = false;
        for (int iter = 0; iter < tol::barycenter_max_iter; ++iter) {
            double r_loc = eval_grad(xi, grad);
            double gnorm = norm_of(grad);
            double gscale = 0.0;
            for (double w : A.weights) gscale += w;
            gscale *= f.derivative(r_loc);
            if (gnorm <= tol * gscale) break;  // stationary relative to the local scale

            double alpha = 0.5 * r_loc / gnorm;
            if (have_prev) {
                double sy = 0.0, yy = 0.0;
                for (std::size_t c = 0; c < dim; ++c) {
                    double y = grad[c] - prev_grad[c];
                    sy += moved_by[c] * y;
                    yy += y * y;
                }
                if (sy > 0.0 && yy > 0.0) alpha = sy / yy;
            }
            bool accepted = false;
            for (int h = 0; h < 60 && !accepted; ++h, alpha *= 0.5) {
                Point cand = xi;
                for (std::size_t c = 0; c < dim; ++c) cand.coords[c] -= alpha * grad[c];
                double e = anchors_energy(S, f, A, cand);
                // near the bottom energy differences fall below double
                // rounding while the gradient stays informative, so a strict
                // gradient-norm drop also counts as progress
                bool take = e < energy;
                if (!take && e == energy) {
                    eval_grad(cand, cand_grad);
                    take = norm_of(cand_grad) < gnorm;
                }
                if (take) {
                    for (std::size_t c = 0; c < dim; ++c) {
                        moved_by[c] = cand.coords[c] - xi.coords[c];
                        prev_grad[c] = grad[c];
                    }
                    xi = std::move(cand);
                    energy = e;
                    have_prev = accepted = true;
                }
            }
            if (!accepted) break;  // no progress measure survives: numerically at the bottom
        }
        require(certificate(), Errc::NoConvergence, "descent stopped short of the certificate");
        return xi;
    }

    const double probe = 1e-7;
    for (int iter = 0; iter < tol::barycenter_max_iter; ++iter) {
        // steepest probed one-sided slope among the anchor directions
        std::size_t best = A.points.size();
        double best_slope = 0.0;
        double r_loc = 0.0;
        for (std::size_t v = 0; v < A.points.size(); ++v) {
            double dv = S.distance(xi, A.points[v]);
            r_loc = std::max(r_loc, dv);
            if (dv == 0.0) continue;
            double drop = anchors_energy(S, f, A, S.combine(xi, A.points[v], probe)) - energy;
            double slope = drop / (probe * dv);
            if (slope < best_slope) {
                best_slope = slope;
                best = v;
            }
        }
        if (r_loc == 0.0) return xi;  // sitting on a coincident anchor set
        step_tol = tol * r_loc;       // progress is judged relative to the local radius

        double moved = 0.0;
        if (best < A.points.size()) {
            double dv = S.distance(xi, A.points[best]);
            for (double t = 1.0; t > 1e-14; t *= 0.5) {
                Point cand = S.combine(xi, A.points[best], t);
                double e = anchors_energy(S, f, A, cand);
                if (e <= energy + 0.25 * t * dv * best_slope) {
                    moved = S.distance(xi, cand);
                    xi = cand;
                    energy = e;
                    break;
                }
            }
        }

        if (moved >= step_tol) continue;

        // polish: golden-section sweeps along every anchor geodesic
        double sweep_step = 0.0;
        for (const Point& a : A.points) {
            auto [t, e] = golden_min(
                [&](double s) { return anchors_energy(S, f, A, S.combine(xi, a, s)); }, 0.0, 1.0);
            if (e < energy) {
                Point cand = S.combine(xi, a, t);
                sweep_step = std::max(sweep_step, S.distance(xi, cand));
                xi = cand;
                energy = e;
            }
        }
        if (sweep_step <= step_tol && certificate()) return xi;
    }
    fail(Errc::NoConvergence,
         "barycenter descent exhausted " + std::to_string(tol::barycenter_max_iter) + " steps");
}

/// Anchor view of the link of u under phi: points phi(v), weights m({u,v}).
inline Anchors link_anchors(const WeightedComplex& X, Vertex u, const EquivariantMap& phi) {
    require(X.has_vertex(u), Errc::UnknownVertex, "vertex " + std::to_string(u));
    Anchors A;
    const auto& nb = X.neighbors[static_cast<std::size_t>(u)];
    A.points.reserve(nb.size());
    A.weights.reserve(nb.size());
    for (Vertex v : nb) {
        A.points.push_back(phi.at(v));
        A.weights.push_back(X.edge_weight(u, v));
    }
    return A;
}

}  // namespace detail

/// E_{u,phi}(xi) = sum over link vertices v of m({u,v}) f(d(xi, phi(v))).
inline double local_energy(const WeightedComplex& X, Vertex u, const EquivariantMap& phi,
                           const Point& xi, const Gauge& f) {
    try {
        phi.space->validate(xi);
    } catch (const Error&) {
        fail(Errc::SpaceMismatch, "evaluation point does not belong to the map's space");
    }
    return detail::anchors_energy(*phi.space, f, detail::link_anchors(X, u, phi), xi);
}

/// The f-barycenter M_u phi: unique minimizer of E_{u,phi}.
inline Point minimize_local_energy(const WeightedComplex& X, Vertex u, const EquivariantMap& phi,
                                   const Gauge& f, const Space& S,
                                   double tol = tol::barycenter_step_rel,
                                   const Point* start = nullptr, bool force_descent = false) {
    require(phi.space->same_shape(S), Errc::SpaceMismatch,
            "minimization space differs from the map's space");
    return detail::minimize_anchors(S, f, detail::link_anchors(X, u, phi), tol, start,
                                    force_descent);
}

/// Global pairing energy over ordered-edge orbit representatives:
///   E(phi, psi) = sum_{(u,v)} m({u,v}) / |Gamma_(u,v)| f(d(phi(u), psi(v))).
/// Accumulated as orbit-size weighted sums over representatives and divided
/// by |Gamma| once, matching the double-counting bookkeeping exactly.
inline double global_energy(const WeightedComplex& X, const GroupAction& G,
                            const OrbitData& orbits, const EquivariantMap& phi,
                            const EquivariantMap& psi, const Gauge& f) {
    require(phi.same_context(psi), Errc::RepresentationMismatch,
            "maps live over different complexes, spaces, or representations");
    const Space& S = *phi.space;
    double scaled = 0.0;
    for (const OrbitRep& rep : orbits.reps[1]) {
        Vertex u = rep.simplex[0], v = rep.simplex[1];
        double term = X.edge_weight(u, v) * f(S.distance(phi.at(u), psi.at(v)));
        scaled += term * static_cast<double>(rep.orbit_size);
    }
    return scaled / static_cast<double>(G.order());
}

/// Link edge energy at u: sum over unordered link edges {v,w} of
/// m({u,v,w}) f(d(phi(v), phi(w))) — the ordered sum with its 1/2 collapses.
inline double link_edge_energy(const LinkGraph& L, const std::vector<Point>& values,
                               const Space& S, const Gauge& f) {
    require(values.size() == L.size(), Errc::InvalidArgument,
            "one value per link vertex required");
    double s = 0.0;
    for (std::size_t i = 0; i < L.edges.size(); ++i)
        s += L.edge_weights[i] * f(S.distance(values[L.edges[i][0]], values[L.edges[i][1]]));
    return s;
}

inline double link_edge_energy(const WeightedComplex& X, Vertex u, const EquivariantMap& phi,
                               const Gauge& f) {
    LinkGraph L = link_of(X, u);
    std::vector<Point> values;
    values.reserve(L.size());
    for (Vertex v : L.vertices) values.push_back(phi.at(v));
    return link_edge_energy(L, values, *phi.space, f);
}

/// Local energy in link-local form: anchors are the link vertices with their
/// m_u weights. Shared by the variational gap search.
inline double link_local_energy(const LinkGraph& L, const std::vector<Point>& values,
                                const Space& S, const Gauge& f, const Point& xi) {
    require(values.size() == L.size(), Errc::InvalidArgument,
            "one value per link vertex required");
    detail::Anchors A{values, L.vertex_weights};
    return detail::anchors_energy(S, f, A, xi);
}

inline Point minimize_link_energy(const LinkGraph& L, const std::vector<Point>& values,
                                  const Space& S, const Gauge& f,
                                  double tol = tol::barycenter_step_rel,
                                  const Point* start = nullptr, bool force_descent = false) {
    require(values.size() == L.size(), Errc::InvalidArgument,
            "one value per link vertex required");
    detail::Anchors A{values, L.vertex_weights};
    return detail::minimize_anchors(S, f, A, tol, start, force_descent);
}

}  // namespace linkgap
