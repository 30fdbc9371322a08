#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <vector>

#include "complex.hpp"
#include "defs.hpp"
#include "energy.hpp"
#include "errors.hpp"
#include "gauge.hpp"
#include "group.hpp"
#include "jacobi.hpp"
#include "parallel.hpp"
#include "rng.hpp"
#include "space.hpp"

namespace linkgap {

enum class GapMethod { Spectral, Variational };

inline const char* gap_method_name(GapMethod m) {
    return m == GapMethod::Spectral ? "spectral" : "variational";
}

namespace detail {

inline void require_usable_link(const LinkGraph& L) {
    const std::size_t n = L.size();
    require(n >= 2, Errc::TooSmall, "link needs at least two vertices");
    std::vector<std::vector<std::size_t>> adj(n);
    for (const auto& e : L.edges) {
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
    require(reached == n, Errc::Disconnected, "link graph is not connected");
}

}  // namespace detail

/// The link constant for the euclidean x^2 regime: C(m) times the smallest
/// positive eigenvalue of the normalized Laplacian of the weighted link
/// graph (vertex measure = weighted degree, edge weights m_u). In that
/// regime this equals the variational constant exactly.
inline double lambda_spectral(const LinkGraph& L) {
    detail::require_usable_link(L);
    const std::size_t n = L.size();
    std::vector<double> deg = L.weighted_degrees();
    SymMatrix N(n);
    for (std::size_t i = 0; i < n; ++i) N.at(i, i) = 1.0;
    for (std::size_t k = 0; k < L.edges.size(); ++k) {
        std::size_t i = L.edges[k][0], j = L.edges[k][1];
        double off = -L.edge_weights[k] / std::sqrt(deg[i] * deg[j]);
        N.at(i, j) = off;
        N.at(j, i) = off;
    }
    std::vector<double> eig = symmetric_eigenvalues(N);
    return L.weight_constant * eig[1];
}

namespace detail {

struct RatioEval {
    double ratio = std::numeric_limits<double>::infinity();
    double edge_energy = 0.0;
    Point barycenter;
    bool degenerate = true;
};

/// R(phi) = link edge energy / local energy at the barycenter. Degenerate
/// (near-constant) configurations are flagged instead of divided.
inline RatioEval link_ratio(const LinkGraph& L, const Space& S, const Gauge& f,
                            const std::vector<Point>& values, const Point* warm = nullptr) {
    RatioEval r;
    r.edge_energy = link_edge_energy(L, values, S, f);
    r.barycenter = minimize_link_energy(L, values, S, f, tol::barycenter_step_rel, warm);
    double bottom = link_local_energy(L, values, S, f, r.barycenter);
    r.degenerate = bottom <= tol::degenerate_energy * (1.0 + r.edge_energy);
    if (!r.degenerate) r.ratio = r.edge_energy / bottom;
    return r;
}

inline double values_diameter(const Space& S, const std::vector<Point>& values) {
    double d = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i)
        for (std::size_t j = i + 1; j < values.size(); ++j)
            d = std::max(d, S.distance(values[i], values[j]));
    return d;
}

/// Coordinate-wise perturbation descent on the ratio. Each step probes one
/// coordinate of one value (vector spaces) or one random pull per value
/// (trees); the probe radius halves after an unproductive full cycle.
inline void refine_witness(const LinkGraph& L, const Space& S, const Gauge& f,
                           std::vector<Point>& values, RatioEval& best, int steps, Rng& rng) {
    const std::size_t n = values.size();
    const std::size_t cycle = S.is_vector_space() ? n * S.dim() : n;
    double diam = values_diameter(S, values);
    double h = 0.25 * (1.0 + diam);
    std::size_t stale = 0;
    for (int s = 0; s < steps; ++s) {
        bool improved = false;
        std::vector<Point> cand = values;
        if (S.is_vector_space()) {
            std::size_t idx = static_cast<std::size_t>(s) % cycle;
            std::size_t v = idx / S.dim(), c = idx % S.dim();
            for (double sgn : {1.0, -1.0}) {
                cand[v].coords[c] = values[v].coords[c] + sgn * h;
                RatioEval ev = link_ratio(L, S, f, cand, &best.barycenter);
                if (!ev.degenerate && ev.ratio < best.ratio) {
                    values = cand;
                    best = ev;
                    improved = true;
                    break;
                }
            }
        } else {
            std::size_t v = static_cast<std::size_t>(s) % n;
            Point target = S.random_point(rng);
            double dist = S.distance(values[v], target);
            if (dist > 0.0) {
                cand[v] = S.combine(values[v], target, std::min(1.0, h / dist));
                RatioEval ev = link_ratio(L, S, f, cand, &best.barycenter);
                if (!ev.degenerate && ev.ratio < best.ratio) {
                    values = cand;
                    best = ev;
                    improved = true;
                }
            }
        }
        if (improved) {
            stale = 0;
        } else if (++stale >= cycle) {
            stale = 0;
            h *= 0.5;
            if (h < 1e-9 * (1.0 + diam)) break;
        }
    }
}

}  // namespace detail

/// Result of the sampled minimization of R(phi): an upper bound estimate of
/// the link constant together with the best configuration found.
struct VariationalResult {
    double lambda = std::numeric_limits<double>::infinity();
    std::vector<Point> witness;             ///< best phi, in link-local vertex order
    std::vector<double> attempt_lambdas;    ///< refined ratio per counted attempt, draw order
    std::size_t counted = 0;                ///< non-degenerate restarts
    std::size_t skipped = 0;                ///< degenerate draws, not counted
};

/// Minimizes the ratio R(phi) = link edge energy / E_{u,phi}(M_u phi) over
/// seeded random starts with coordinate-descent refinement. The result is
/// an upper bound on the true link constant (the infimum over all
/// nonconstant phi); constant configurations are skipped, and skipped draws
/// do not consume the restart budget.
inline VariationalResult lambda_variational(const LinkGraph& L, const Space& S, const Gauge& f,
                                            std::size_t restarts, std::uint64_t seed,
                                            int refine_steps = 500) {
    require(restarts >= 1, Errc::ParameterOutOfRange, "restarts must be >= 1");
    detail::require_usable_link(L);
    const std::size_t n = L.size();
    const std::uint64_t salt =
        seed ^ (0x517cc1b727220a95ULL * (static_cast<std::uint64_t>(L.center) + 1));

    struct Attempt {
        bool valid = false;
        double lambda = std::numeric_limits<double>::infinity();
        std::vector<Point> witness;
    };
    const std::size_t max_attempts = restarts * 10;
    std::vector<Attempt> attempts(max_attempts);

    std::size_t launched = 0, counted = 0;
    while (counted < restarts && launched < max_attempts) {
        std::size_t wave = std::min(restarts - counted, max_attempts - launched);
        parallel_for(wave, [&](std::size_t i) {
            const std::size_t a = launched + i;
            Rng rng = Rng::fork(salt, a);
            std::vector<Point> values;
            values.reserve(n);
            for (std::size_t v = 0; v < n; ++v) values.push_back(S.random_point(rng));

            if (!f.is_power() && S.is_vector_space()) {
                // polynomial gauges are not scale-free: probe several scales
                // and start from the best one
                double best_ratio = std::numeric_limits<double>::infinity();
                std::vector<Point> best_values;
                for (double c : {1e-2, 1e-1, 1.0, 1e1, 1e2}) {
                    std::vector<Point> scaled = values;
                    for (Point& pt : scaled)
                        for (double& x : pt.coords) x *= c;
                    detail::RatioEval ev = detail::link_ratio(L, S, f, scaled);
                    if (!ev.degenerate && ev.ratio < best_ratio) {
                        best_ratio = ev.ratio;
                        best_values = std::move(scaled);
                    }
                }
                if (!best_values.empty()) values = std::move(best_values);
            }

            detail::RatioEval ev = detail::link_ratio(L, S, f, values);
            if (ev.degenerate) return;
            detail::refine_witness(L, S, f, values, ev, refine_steps, rng);

            if (f.is_power() && S.is_vector_space()) {
                // R is scale-invariant for power gauges: report the witness
                // at unit diameter
                double diam = detail::values_diameter(S, values);
                if (diam > 0.0) {
                    std::vector<Point> scaled = values;
                    for (Point& pt : scaled)
                        for (double& x : pt.coords) x /= diam;
                    detail::RatioEval ev2 = detail::link_ratio(L, S, f, scaled);
                    if (!ev2.degenerate && ev2.ratio <= ev.ratio * (1.0 + 1e-12)) {
                        values = std::move(scaled);
                        ev = ev2;
                    }
                }
            }

            attempts[a].valid = true;
            attempts[a].lambda = ev.ratio;
            attempts[a].witness = std::move(values);
        });
        launched += wave;
        counted = 0;
        for (std::size_t a = 0; a < launched; ++a)
            if (attempts[a].valid) ++counted;
    }

    VariationalResult R;
    for (std::size_t a = 0; a < launched; ++a) {
        if (!attempts[a].valid) continue;
        R.attempt_lambdas.push_back(attempts[a].lambda);
        if (attempts[a].lambda < R.lambda) {
            R.lambda = attempts[a].lambda;
            R.witness = attempts[a].witness;
        }
    }
    R.counted = counted;
    R.skipped = launched - counted;
    require(R.counted >= 1, Errc::AllSamplesDegenerate,
            "every sampled configuration was degenerate");
    return R;
}

struct GapParams {
    std::size_t restarts = 64;
    int refine_steps = 500;
    std::uint64_t seed = 0;
};

struct GapEntry {
    Vertex vertex = -1;             ///< vertex-orbit representative
    std::size_t orbit_size = 1;
    double lambda = 0.0;
    std::vector<Point> witness;     ///< variational only; link-local order
    std::size_t restarts_counted = 0;
    std::size_t skipped = 0;
    Vertex checked_vertex = -1;     ///< non-representative orbit member re-checked
    double checked_lambda = std::numeric_limits<double>::quiet_NaN();
};

struct GapReport {
    GapMethod method = GapMethod::Spectral;
    double weight_constant = 1.0;
    double global_lambda = 0.0;
    double threshold = 0.0;         ///< C(m)/2
    double kappa = 0.0;             ///< C(m) / (2 global_lambda)
    bool verdict = false;           ///< global_lambda > threshold
    bool certifying = false;        ///< spectral route only
    std::uint64_t seed = 0;
    std::size_t restarts = 0;
    int refine_steps = 0;
    std::vector<GapEntry> entries;  ///< one per vertex-orbit representative
};

/// Evaluates the link constant once per vertex-orbit representative, takes
/// the minimum, and fills the certificate fields. When an orbit has more
/// than one vertex, the constant is re-derived at a non-representative
/// member (spectral: fresh eigensolve; variational: the witness transported
/// through the group element) and must agree to 1e-9.
inline GapReport global_gap(const WeightedComplex& X, const GroupAction& G, const OrbitData& O,
                            GapMethod method, const Space& S, const Gauge& f,
                            const GapParams& params = {}) {
    if (method == GapMethod::Spectral)
        require(S.kind() == SpaceKind::Euclidean && f.is_square(), Errc::InvalidArgument,
                "the spectral route is only valid for euclidean targets with the square gauge");

    GapReport R;
    R.method = method;
    R.weight_constant = X.weight_constant;
    R.seed = params.seed;
    R.restarts = method == GapMethod::Variational ? params.restarts : 0;
    R.refine_steps = method == GapMethod::Variational ? params.refine_steps : 0;
    R.certifying = method == GapMethod::Spectral;
    R.entries.resize(O.reps[0].size());

    parallel_for(O.reps[0].size(), [&](std::size_t r) {
        const OrbitRep& rep = O.reps[0][r];
        const Vertex u = rep.simplex[0];
        GapEntry& entry = R.entries[r];
        entry.vertex = u;
        entry.orbit_size = rep.orbit_size;
        LinkGraph L = link_of(X, u);

        VariationalResult var;
        if (method == GapMethod::Spectral) {
            entry.lambda = lambda_spectral(L);
        } else {
            var = lambda_variational(L, S, f, params.restarts, params.seed, params.refine_steps);
            entry.lambda = var.lambda;
            entry.witness = var.witness;
            entry.restarts_counted = var.counted;
            entry.skipped = var.skipped;
        }

        if (rep.orbit_size > 1) {
            // locate a group element moving the representative
            std::size_t g = 0;
            Vertex w = u;
            for (std::size_t e = 1; e < G.order(); ++e) {
                Vertex img = G.act(e, u);
                if (img != u) {
                    g = e;
                    w = img;
                    break;
                }
            }
            require(w != u, Errc::InvariantViolation,
                    "orbit larger than one but no element moves the vertex");
            LinkGraph Lw = link_of(X, w);
            if (method == GapMethod::Spectral) {
                entry.checked_lambda = lambda_spectral(Lw);
            } else {
                std::vector<Point> transported(Lw.size());
                for (std::size_t j = 0; j < L.size(); ++j)
                    transported[Lw.local_index(G.act(g, L.vertices[j]))] = var.witness[j];
                detail::RatioEval ev = detail::link_ratio(Lw, S, f, transported);
                require(!ev.degenerate, Errc::InvariantViolation,
                        "transported witness became degenerate");
                entry.checked_lambda = ev.ratio;
            }
            entry.checked_vertex = w;
            require(std::abs(entry.checked_lambda - entry.lambda) <=
                        tol::orbit_lambda_check * (1.0 + std::abs(entry.lambda)),
                    Errc::InvariantViolation,
                    "link constant is not constant on a vertex orbit");
        }
    });

    R.global_lambda = std::numeric_limits<double>::infinity();
    for (const GapEntry& e : R.entries) R.global_lambda = std::min(R.global_lambda, e.lambda);
    R.threshold = X.weight_constant / 2.0;
    R.kappa = R.threshold / R.global_lambda;
    // Strict inequality with a relative guard: a complex sitting exactly on the
    // threshold (lambda == C/2 in exact arithmetic) must report false rather
    // than let rounding noise in the eigensolve decide the verdict.
    R.verdict = R.global_lambda > R.threshold * (1.0 + tol::identity_rel);
    return R;
}

}  // namespace linkgap
