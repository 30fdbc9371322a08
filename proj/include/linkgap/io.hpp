#pragma once

#include <fstream>
#include <iomanip>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "axioms.hpp"
#include "complex.hpp"
#include "defs.hpp"
#include "equivariant.hpp"
#include "errors.hpp"
#include "fixedpoint.hpp"
#include "gap.hpp"
#include "gauge.hpp"
#include "group.hpp"
#include "space.hpp"

namespace linkgap {
namespace io {

using nlohmann::json;

inline json read_json_file(const std::string& path) {
    std::ifstream in(path);
    require(in.good(), Errc::ParseError, "cannot open " + path);
    try {
        json j;
        in >> j;
        return j;
    } catch (const std::exception& e) {
        fail(Errc::ParseError, "invalid JSON in " + path + ": " + e.what());
    }
}

/// Accepts either an inline JSON object or a path to a JSON file.
inline json read_json_arg(const std::string& arg) {
    std::size_t first = arg.find_first_not_of(" \t\n");
    if (first != std::string::npos && arg[first] == '{') {
        try {
            return json::parse(arg);
        } catch (const std::exception& e) {
            fail(Errc::ParseError, std::string("invalid inline JSON: ") + e.what());
        }
    }
    return read_json_file(arg);
}

namespace detail {

inline const json& field(const json& j, const char* key) {
    auto it = j.find(key);
    require(it != j.end(), Errc::ParseError, std::string("missing field \"") + key + "\"");
    return *it;
}

template <typename T>
T as(const json& j, const char* what) {
    try {
        return j.get<T>();
    } catch (const std::exception&) {
        fail(Errc::ParseError, std::string("field \"") + what + "\" has the wrong type");
    }
}

}  // namespace detail

/// A complex file bundles the geometry, an optional group, and an optional
/// representation recipe (resolved against a concrete space later).
struct ComplexBundle {
    WeightedComplex X;
    GroupAction G;
    OrbitData orbits;
    json rep_spec;  ///< null when the file names no representation
};

inline ComplexBundle load_complex(const json& j) {
    require(j.is_object(), Errc::ParseError, "complex description must be a JSON object");
    std::vector<std::array<Vertex, 3>> triples;
    for (const json& t : detail::as<std::vector<json>>(detail::field(j, "triangles"),
                                                       "triangles")) {
        auto v = detail::as<std::vector<Vertex>>(t, "triangles");
        require(v.size() == 3, Errc::ParseError, "each triangle needs exactly 3 vertices");
        triples.push_back({v[0], v[1], v[2]});
    }
    std::vector<double> weights;
    if (j.count("triangle_weights"))
        weights = detail::as<std::vector<double>>(j.at("triangle_weights"), "triangle_weights");
    std::size_t vertices = 0;
    if (j.count("vertices"))
        vertices = detail::as<std::size_t>(j.at("vertices"), "vertices");
    std::vector<std::array<Vertex, 2>> extra_edges;
    if (j.count("edges")) {
        for (const json& e : detail::as<std::vector<json>>(j.at("edges"), "edges")) {
            auto v = detail::as<std::vector<Vertex>>(e, "edges");
            require(v.size() == 2, Errc::ParseError, "each edge needs exactly 2 vertices");
            extra_edges.push_back({v[0], v[1]});
        }
    }
    std::vector<Permutation> generators;
    if (j.count("generators"))
        generators = detail::as<std::vector<Permutation>>(j.at("generators"), "generators");
    std::size_t cap = tol::group_cap_default;
    if (j.count("group_cap")) cap = detail::as<std::size_t>(j.at("group_cap"), "group_cap");

    ComplexBundle B;
    B.X = build_complex(triples, weights, vertices, extra_edges);
    B.G = build_action(B.X, generators, cap);
    B.orbits = orbit_data(B.X, B.G);
    B.rep_spec = j.count("representation") ? j.at("representation") : json();
    return B;
}

inline Space parse_space(const json& j) {
    require(j.is_object(), Errc::ParseError, "space description must be a JSON object");
    std::string kind = detail::as<std::string>(detail::field(j, "kind"), "kind");
    if (kind == "euclidean")
        return Space::euclidean(detail::as<std::size_t>(detail::field(j, "dim"), "dim"));
    if (kind == "lp")
        return Space::lp(detail::as<std::size_t>(detail::field(j, "dim"), "dim"),
                         detail::as<double>(detail::field(j, "p"), "p"));
    if (kind == "tree") {
        std::vector<TreeEdge> edges;
        for (const json& e : detail::as<std::vector<json>>(detail::field(j, "edges"),
                                                           "edges")) {
            auto v = detail::as<std::vector<double>>(e, "tree edges");
            require(v.size() == 3, Errc::ParseError,
                    "each tree edge needs [vertex, vertex, length]");
            edges.push_back(TreeEdge{static_cast<int>(v[0]), static_cast<int>(v[1]), v[2]});
        }
        return Space::tree(edges);
    }
    fail(Errc::ParseError, "unknown space kind \"" + kind + "\"");
}

inline Gauge parse_gauge(const json& j) {
    require(j.is_object(), Errc::ParseError, "gauge description must be a JSON object");
    std::string kind = detail::as<std::string>(detail::field(j, "kind"), "kind");
    if (kind == "power") return Gauge::power(detail::as<double>(detail::field(j, "p"), "p"));
    if (kind == "polynomial") {
        std::map<int, double> coeffs;
        const json& c = detail::field(j, "coeffs");
        require(c.is_object(), Errc::ParseError, "coeffs must map exponent -> coefficient");
        for (auto it = c.begin(); it != c.end(); ++it) {
            try {
                coeffs[std::stoi(it.key())] = it.value().get<double>();
            } catch (const Error&) {
                throw;
            } catch (const std::exception&) {
                fail(Errc::ParseError, "bad coefficient entry \"" + it.key() + "\"");
            }
        }
        return Gauge::polynomial(coeffs);
    }
    fail(Errc::ParseError, "unknown gauge kind \"" + kind + "\"");
}

/// Resolves the bundle's representation recipe against a concrete space;
/// no recipe means the trivial representation.
inline Representation make_representation(const ComplexBundle& B, const Space& S) {
    if (B.rep_spec.is_null()) return Representation::trivial(B.G, S);
    const json& j = B.rep_spec;
    require(j.is_object(), Errc::ParseError, "representation must be a JSON object");
    std::string kind = detail::as<std::string>(detail::field(j, "kind"), "kind");
    if (kind == "trivial") return Representation::trivial(B.G, S);

    require(kind != "signed_permutation" || S.is_vector_space(), Errc::ParseError,
            "signed_permutation representation needs a vector-space target; pick a matching "
            "space or drop the representation from the complex file");
    require(kind != "tree" || S.kind() == SpaceKind::Tree, Errc::ParseError,
            "tree representation needs a tree target; pick a matching space or drop the "
            "representation from the complex file");

    std::vector<Isometry> isos;
    const json& maps = detail::field(j, "maps");
    require(maps.is_array() && maps.size() == B.G.generators.size(), Errc::ParseError,
            "representation needs one map per generator");
    for (const json& m : maps) {
        if (kind == "signed_permutation") {
            auto perm = detail::as<std::vector<std::size_t>>(detail::field(m, "perm"), "perm");
            std::vector<double> sign(perm.size(), 1.0), translation(perm.size(), 0.0);
            if (m.count("sign")) sign = detail::as<std::vector<double>>(m.at("sign"), "sign");
            if (m.count("translation"))
                translation =
                    detail::as<std::vector<double>>(m.at("translation"), "translation");
            isos.push_back(Isometry::signed_permutation(S, perm, sign, translation));
        } else if (kind == "tree") {
            isos.push_back(Isometry::tree_automorphism(
                S, detail::as<std::vector<int>>(detail::field(m, "vertex_perm"),
                                                "vertex_perm")));
        } else {
            fail(Errc::ParseError, "unknown representation kind \"" + kind + "\"");
        }
    }
    return Representation::from_generators(B.G, S, isos);
}

// ---------------------------------------------------------------------------
// serializers (keys come out sorted; no timestamps — reruns are byte-identical)

inline json point_json(const Point& p) {
    if (p.edge >= 0) return json{{"edge", p.edge}, {"offset", p.offset}};
    return json(p.coords);
}

inline json tolerances_json() {
    return json{{"admissibility_rel", tol::admissibility_rel},
                {"identity_rel", tol::identity_rel},
                {"energy_ineq_rel", tol::energy_ineq_rel},
                {"stabilizer_fix", tol::stabilizer_fix},
                {"orbit_lambda_check", tol::orbit_lambda_check},
                {"equivariance_cert", tol::equivariance_cert},
                {"convergence_diam_rel", tol::convergence_diam_rel},
                {"decay_slack_rel", tol::decay_slack_rel},
                {"displacement_slack", tol::displacement_slack},
                {"noncontractive_slack", tol::noncontractive_slack},
                {"barycenter_step_rel", tol::barycenter_step_rel},
                {"iterate_inner_tol", tol::iterate_inner_tol},
                {"degenerate_energy", tol::degenerate_energy}};
}

inline json gap_report_json(const GapReport& R) {
    json entries = json::array();
    for (const GapEntry& e : R.entries) {
        json je{{"vertex", e.vertex},
                {"orbit_size", e.orbit_size},
                {"lambda", e.lambda},
                {"lambda_kind",
                 R.method == GapMethod::Spectral ? "spectral" : "upper bound estimate"}};
        if (R.method == GapMethod::Variational) {
            json w = json::array();
            for (const Point& p : e.witness) w.push_back(point_json(p));
            je["witness"] = w;
            je["restarts_counted"] = e.restarts_counted;
            je["skipped_degenerate"] = e.skipped;
        }
        if (e.checked_vertex >= 0) {
            je["checked_vertex"] = e.checked_vertex;
            je["checked_lambda"] = e.checked_lambda;
        }
        entries.push_back(je);
    }
    return json{{"method", gap_method_name(R.method)},
                {"certifying", R.certifying},
                {"constant_maps_excluded", true},
                {"lambda_scope", "computed for the configured target space and gauge"},
                {"weight_constant", R.weight_constant},
                {"global_lambda", R.global_lambda},
                {"threshold", R.threshold},
                {"kappa", R.kappa},
                {"verdict", R.verdict},
                {"seed", R.seed},
                {"restarts", R.restarts},
                {"refine_steps", R.refine_steps},
                {"entries", entries}};
}

inline json step_json(const StepRecord& s) {
    return json{{"step", s.step},
                {"energy", s.energy},
                {"ratio", s.ratio},
                {"displacement", s.displacement},
                {"bound", s.bound},
                {"diameter", s.diameter},
                {"equivariance_defect", s.equivariance_defect},
                {"decay_ok", s.decay_ok},
                {"bound_ok", s.bound_ok}};
}

inline json trace_summary_json(const IterationTrace& T) {
    return json{{"initial_energy", T.initial_energy},
                {"initial_diameter", T.initial_diameter},
                {"kappa", T.kappa},
                {"delta", T.delta},
                {"gap_verdict", T.gap_verdict},
                {"certifying", T.certifying},
                {"converged", T.converged},
                {"steps_taken", T.steps_taken},
                {"final_diameter", T.final_diameter},
                {"fixed_point_defect", T.fixed_point_defect},
                {"non_contractive", T.non_contractive},
                {"budget_exhausted", T.budget_exhausted}};
}

/// One JSON object per line: every step, then a summary line.
inline std::string trace_jsonl(const IterationTrace& T) {
    std::ostringstream out;
    for (const StepRecord& s : T.steps) out << step_json(s).dump() << "\n";
    json summary = trace_summary_json(T);
    summary["record"] = "summary";
    out << summary.dump() << "\n";
    return out.str();
}

inline std::string trace_csv(const IterationTrace& T) {
    std::ostringstream out;
    out << std::setprecision(17);
    out << "step,energy,ratio,displacement,bound,diameter,equivariance_defect,decay_ok,"
           "bound_ok\n";
    for (const StepRecord& s : T.steps)
        out << s.step << ',' << s.energy << ',' << s.ratio << ',' << s.displacement << ','
            << s.bound << ',' << s.diameter << ',' << s.equivariance_defect << ','
            << (s.decay_ok ? 1 : 0) << ',' << (s.bound_ok ? 1 : 0) << "\n";
    return out.str();
}

inline json axiom_report_json(const AxiomReport& R) {
    return json{{"trials", R.trials},
                {"seed", R.seed},
                {"worst_symmetry", R.worst_symmetry},
                {"worst_identity", R.worst_identity},
                {"worst_triangle", R.worst_triangle},
                {"worst_endpoint", R.worst_endpoint},
                {"worst_geodesic", R.worst_geodesic},
                {"worst_busemann", R.worst_busemann},
                {"worst_convexity", R.worst_convexity},
                {"worst_associativity", R.worst_associativity},
                {"worst_isometry_distance", R.worst_isometry_distance},
                {"worst_isometry_midpoint", R.worst_isometry_midpoint},
                {"theta_grid", R.theta_grid},
                {"theta_hat", R.theta_hat}};
}

inline void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    require(out.good(), Errc::ParseError, "cannot write " + path);
    out << text;
}

}  // namespace io
}  // namespace linkgap
