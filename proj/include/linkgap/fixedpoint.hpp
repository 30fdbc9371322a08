#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <vector>

#include "complex.hpp"
#include "defs.hpp"
#include "energy.hpp"
#include "equivariant.hpp"
#include "errors.hpp"
#include "gap.hpp"
#include "gauge.hpp"
#include "group.hpp"
#include "parallel.hpp"
#include "space.hpp"

namespace linkgap {

namespace detail {

inline std::vector<std::size_t> generator_elements(const GroupAction& G) {
    std::vector<std::size_t> ids;
    ids.reserve(G.generators.size());
    for (const Permutation& g : G.generators) ids.push_back(G.index_of(g));
    return ids;
}

}  // namespace detail

/// Pointwise barycenter operator: (M phi)(u) minimizes the local energy
/// E_{u,phi} at every representative, extended equivariantly. When
/// `equivariance_defect` is given, it receives the certificate
///   max over generators gamma and representatives u of
///   d(rho(gamma)·M phi(u), M phi(gamma·u))
/// where the right side is minimized directly at gamma·u from a cold start,
/// so the two sides are computed independently.
inline EquivariantMap apply_M(const WeightedComplex& X, const GroupAction& G,
                              const OrbitData& orbits, const EquivariantMap& phi, const Gauge& f,
                              const Space& S, double tol = tol::barycenter_step_rel,
                              double* equivariance_defect = nullptr) {
    require(phi.space->same_shape(S), Errc::SpaceMismatch,
            "operator space differs from the map's space");
    const std::size_t nreps = orbits.reps[0].size();
    std::vector<Point> values(nreps);
    parallel_for(nreps, [&](std::size_t r) {
        Vertex u = orbits.reps[0][r].simplex[0];
        Point m = minimize_local_energy(X, u, phi, f, S, tol, &phi.values[r]);
        values[r] = detail::project_to_stabilizer(G, S, *phi.rho, u, m);
    });

    if (equivariance_defect) {
        std::vector<std::size_t> gens = detail::generator_elements(G);
        std::vector<double> defect(nreps, 0.0);
        parallel_for(nreps, [&](std::size_t r) {
            Vertex u = orbits.reps[0][r].simplex[0];
            for (std::size_t g : gens) {
                Vertex v = G.act(g, u);
                Point expected = phi.rho->of(g).apply(S, values[r]);
                Point direct = minimize_local_energy(X, v, phi, f, S, tol);
                defect[r] = std::max(defect[r], S.distance(expected, direct));
            }
        });
        *equivariance_defect = 0.0;
        for (double d : defect) *equivariance_defect = std::max(*equivariance_defect, d);
    }
    return make_equivariant_map(X, G, orbits, S, *phi.rho, std::move(values));
}

/// Half-step operator: (M' phi)(u) is the midpoint of phi(u) and (M phi)(u).
inline EquivariantMap apply_Mprime(const WeightedComplex& X, const GroupAction& G,
                                   const OrbitData& orbits, const EquivariantMap& phi,
                                   const Gauge& f, const Space& S,
                                   double tol = tol::barycenter_step_rel,
                                   double* equivariance_defect = nullptr) {
    EquivariantMap M = apply_M(X, G, orbits, phi, f, S, tol, equivariance_defect);
    std::vector<Point> values(M.values.size());
    for (std::size_t r = 0; r < values.size(); ++r)
        values[r] = S.combine(phi.values[r], M.values[r], 0.5);
    return make_equivariant_map(X, G, orbits, S, *phi.rho, std::move(values));
}

/// Linear averaging variant: (M phi)(u) = sum_v m({u,v}) phi(v) / sum_v m({u,v}).
/// Vector-space targets only; agrees with apply_M for euclidean targets with
/// the square gauge.
inline EquivariantMap apply_M_avg(const WeightedComplex& X, const GroupAction& G,
                                  const OrbitData& orbits, const EquivariantMap& phi,
                                  const Space& S) {
    require(phi.space->same_shape(S), Errc::SpaceMismatch,
            "operator space differs from the map's space");
    require(S.is_vector_space(), Errc::UnsupportedSpace,
            "the averaging operator needs a vector-space target");
    const std::size_t nreps = orbits.reps[0].size();
    std::vector<Point> values(nreps);
    parallel_for(nreps, [&](std::size_t r) {
        Vertex u = orbits.reps[0][r].simplex[0];
        std::vector<double> acc(S.dim(), 0.0);
        double total = 0.0;
        for (Vertex v : X.neighbors[static_cast<std::size_t>(u)]) {
            double w = X.edge_weight(u, v);
            Point pv = phi.at(v);
            for (std::size_t i = 0; i < S.dim(); ++i) acc[i] += w * pv.coords[i];
            total += w;
        }
        for (double& c : acc) c /= total;
        values[r] = S.point(std::move(acc));
    });
    return make_equivariant_map(X, G, orbits, S, *phi.rho, std::move(values));
}

enum class IterationOperator { HalfStep, Average };

struct IterateOptions {
    IterationOperator op = IterationOperator::HalfStep;
    bool stop_on_convergence = true;
    double inner_tol = tol::iterate_inner_tol;  ///< minimizer tolerance inside the loop
    bool certify_equivariance = true;
};

/// One row per completed step k >= 1.
struct StepRecord {
    int step = 0;
    double energy = 0.0;                 ///< E_k = E(phi_k, phi_k)
    double ratio = 0.0;                  ///< E_k / E_{k-1}; 0 when E_{k-1} = 0
    double displacement = 0.0;           ///< max over reps d(phi_{k-1}(u), phi_k(u))
    double bound = 0.0;                  ///< 2 f^{-1}(kappa^{k-1} E_0 / delta)
    double diameter = 0.0;               ///< max over representative pairs
    double equivariance_defect = 0.0;    ///< operator certificate at this step
    bool decay_ok = true;                ///< E_k <= kappa E_{k-1} + slack·E_0
    bool bound_ok = true;                ///< displacement <= bound + slack
};

struct IterationTrace {
    std::vector<StepRecord> steps;
    double initial_energy = 0.0;
    double initial_diameter = 0.0;
    double kappa = 0.0;                  ///< from the gap report
    double delta = 0.0;                  ///< min edge weight
    bool gap_verdict = false;
    bool certifying = false;             ///< gap method could certify the verdict
    bool converged = false;
    int steps_taken = 0;
    double final_diameter = 0.0;
    double fixed_point_defect = 0.0;     ///< max over generators d(rho(g) vbar, vbar)
    bool non_contractive = false;        ///< verdict false, or some ratio > kappa + slack
    bool budget_exhausted = false;
};

namespace detail {

/// Diameter of the full image {phi(u) : u vertex}, not just the stored
/// representative values: an equivariant map can agree on every orbit
/// representative yet differ on their translates.
inline double image_diameter(const WeightedComplex& X, const Space& S, const EquivariantMap& phi) {
    std::vector<Point> image;
    image.reserve(X.vertex_count);
    for (std::size_t u = 0; u < X.vertex_count; ++u) image.push_back(phi.at(static_cast<Vertex>(u)));
    double d = 0.0;
    for (std::size_t i = 0; i < image.size(); ++i)
        for (std::size_t j = i + 1; j < image.size(); ++j)
            d = std::max(d, S.distance(image[i], image[j]));
    return d;
}

}  // namespace detail

/// Runs phi_{k+1} = M' phi_k (or the averaging variant) for at most `steps`
/// steps, recording energy decay against kappa from the gap report, the
/// displacement bound 2 f^{-1}(kappa^k E_0 / delta) with delta the minimum
/// edge weight, the image diameter, and the per-step equivariance
/// certificate. Convergence is declared when the image diameter falls below
/// 1e-8·(1 + initial diameter); the converged value must then be fixed by
/// every generator isometry.
inline IterationTrace iterate(const WeightedComplex& X, const GroupAction& G,
                              const OrbitData& orbits, const EquivariantMap& phi0, const Gauge& f,
                              const Space& S, const GapReport& gap, int steps = 200,
                              const IterateOptions& opts = {}) {
    require(steps >= 1, Errc::ParameterOutOfRange, "steps must be >= 1");
    require(phi0.space->same_shape(S), Errc::SpaceMismatch,
            "iteration space differs from the map's space");

    IterationTrace T;
    T.kappa = gap.kappa;
    T.gap_verdict = gap.verdict;
    T.certifying = gap.certifying;
    T.delta = X.min_edge_weight();
    T.initial_energy = global_energy(X, G, orbits, phi0, phi0, f);
    T.initial_diameter = detail::image_diameter(X, S, phi0);
    const double diam_stop = tol::convergence_diam_rel * (1.0 + T.initial_diameter);

    EquivariantMap cur = phi0;
    double prev_energy = T.initial_energy;
    T.final_diameter = T.initial_diameter;
    T.converged = T.initial_diameter < diam_stop;

    for (int k = 1; k <= steps && !(T.converged && opts.stop_on_convergence); ++k) {
        double defect = 0.0;
        EquivariantMap next =
            opts.op == IterationOperator::HalfStep
                ? apply_Mprime(X, G, orbits, cur, f, S, opts.inner_tol,
                               opts.certify_equivariance ? &defect : nullptr)
                : apply_M_avg(X, G, orbits, cur, S);

        StepRecord rec;
        rec.step = k;
        rec.energy = global_energy(X, G, orbits, next, next, f);
        rec.ratio = prev_energy > 0.0 ? rec.energy / prev_energy : 0.0;
        for (std::size_t r = 0; r < cur.values.size(); ++r)
            rec.displacement =
                std::max(rec.displacement, S.distance(cur.values[r], next.values[r]));
        double pow_k = std::pow(T.kappa, k - 1);
        rec.bound = 2.0 * f.inverse(pow_k * T.initial_energy / T.delta);
        rec.diameter = detail::image_diameter(X, S, next);
        rec.equivariance_defect = defect;
        rec.decay_ok = rec.energy <= T.kappa * prev_energy + tol::decay_slack_rel * T.initial_energy;
        rec.bound_ok =
            rec.displacement <= rec.bound + tol::displacement_slack * (1.0 + rec.bound);
        // only judge contraction while energies sit clear of minimizer noise
        if (prev_energy > tol::degenerate_energy * (1.0 + T.initial_energy) &&
            rec.ratio > T.kappa + tol::noncontractive_slack)
            T.non_contractive = true;
        T.steps.push_back(rec);
        T.steps_taken = k;

        cur = std::move(next);
        prev_energy = rec.energy;
        T.final_diameter = rec.diameter;
        if (rec.diameter < diam_stop) T.converged = true;
    }

    // how far the generators move the (near-)constant final value
    const Point& vbar = cur.values.front();
    for (std::size_t g : detail::generator_elements(G))
        T.fixed_point_defect =
            std::max(T.fixed_point_defect, S.distance(cur.rho->of(g).apply(S, vbar), vbar));

    if (!gap.verdict) T.non_contractive = true;
    T.budget_exhausted = !T.converged;
    return T;
}

}  // namespace linkgap
