// linkgap: validate weighted 2-complexes, certify link constants, and run
// the contracting iteration. See README.md for the JSON formats.

#include <array>
#include <cstdint>
#include <functional>
#include <iostream>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>

#include <linkgap/linkgap.hpp>

namespace lg = linkgap;
using nlohmann::json;

namespace {

struct Args {
    std::string complex_path;
    std::string space_arg;   // inline JSON or path; command-specific default
    std::string gauge_arg;   // inline JSON or path; default: square power gauge
    std::string method = "auto";
    std::string out;
    std::uint64_t seed = 0;
    std::size_t restarts = 64;
    int steps = 200;
    bool csv = false;
    bool no_early_stop = false;
};

void add_common(CLI::App* cmd, Args& a) {
    cmd->add_option("--complex", a.complex_path, "complex JSON file")->required();
    cmd->add_option("--space", a.space_arg, "target space, JSON file or inline object");
    cmd->add_option("--gauge", a.gauge_arg, "gauge, JSON file or inline object");
    cmd->add_option("--method", a.method, "gap method: auto|spectral|variational");
    cmd->add_option("--seed", a.seed, "RNG seed");
    cmd->add_option("--restarts", a.restarts, "variational restarts");
    cmd->add_option("--steps", a.steps, "iteration step budget");
    cmd->add_option("--out", a.out, "output file (reports also print to stdout)");
}

json gauge_json_of(const Args& a) {
    if (a.gauge_arg.empty()) return json{{"kind", "power"}, {"p", 2.0}};
    return lg::io::read_json_arg(a.gauge_arg);
}

std::size_t max_link_size(const lg::WeightedComplex& X) {
    std::size_t m = 0;
    for (const auto& nb : X.neighbors) m = std::max(m, nb.size());
    return std::max<std::size_t>(m, 1);
}

json config_json(const Args& a, const char* command, const json& space_j, const json& gauge_j,
                 const char* method) {
    return json{{"command", command}, {"complex", a.complex_path},
                {"space", space_j},   {"gauge", gauge_j},
                {"method", method},   {"seed", a.seed},
                {"restarts", a.restarts}, {"steps", a.steps},
                {"early_stop", !a.no_early_stop}};
}

json envelope(const json& config, const char* key, const json& payload) {
    return json{{"version", lg::kVersion},
                {"tolerances", lg::io::tolerances_json()},
                {"config", config},
                {key, payload}};
}

void emit(const json& doc, const std::string& out_path) {
    std::string text = doc.dump(2) + "\n";
    std::cout << text;
    if (!out_path.empty()) lg::io::write_text_file(out_path, text);
}

// ---------------------------------------------------------------------------

json run_validation(const lg::io::ComplexBundle& B) {
    const lg::WeightedComplex& X = B.X;
    lg::check_admissibility(X);

    auto unit = [](const std::vector<lg::Vertex>&, const std::vector<lg::Vertex>&) {
        return 1.0;
    };
    auto weight = [&X](const std::vector<lg::Vertex>&, const std::vector<lg::Vertex>& sigma) {
        return sigma.size() == 2
                   ? X.edge_weight(sigma[0], sigma[1])
                   : X.triangle_weight(sigma[0], sigma[1], sigma[2]);
    };

    using PairFn =
        std::function<double(const std::vector<lg::Vertex>&, const std::vector<lg::Vertex>&)>;
    const std::array<std::array<std::size_t, 2>, 3> combos{{{0, 1}, {0, 2}, {1, 2}}};
    const std::vector<std::pair<const char*, PairFn>> fns{{"unit", unit}, {"weight", weight}};

    json checks = json::array();
    bool all_pass = true;
    for (const auto& combo : combos) {
        const std::size_t l = combo[0], k = combo[1];
        for (const auto& [name, fn] : fns) {
            lg::OrbitIdentitySides sides = lg::check_orbit_identity(X, B.G, B.orbits, fn, l, k);
            bool pass =
                std::abs(sides.lhs - sides.rhs) <= 1e-12 * (1.0 + std::abs(sides.lhs));
            all_pass = all_pass && pass;
            checks.push_back(json{{"k", k},
                                  {"l", l},
                                  {"f", name},
                                  {"lhs", sides.lhs},
                                  {"rhs", sides.rhs},
                                  {"pass", pass}});
        }
    }

    json link_sizes = json::array();
    for (std::size_t v = 0; v < X.vertex_count; ++v)
        link_sizes.push_back(X.neighbors[v].size());

    return json{{"admissible", true},
                {"weight_constant", X.weight_constant},
                {"vertices", X.vertex_count},
                {"edges", X.edges.size()},
                {"triangles", X.triangles.size()},
                {"links_connected", true},
                {"link_sizes", link_sizes},
                {"group_order", B.G.order()},
                {"orbit_counts", json{{"vertices", B.orbits.reps[0].size()},
                                      {"edges", B.orbits.reps[1].size()},
                                      {"triangles", B.orbits.reps[2].size()}}},
                {"identity_checks", checks},
                {"pass", all_pass}};
}

struct GapStage {
    json space_j, gauge_j;
    std::optional<lg::Space> S;
    std::optional<lg::Gauge> f;
    lg::GapMethod method = lg::GapMethod::Spectral;
    lg::GapReport report;
    int exit_code = 0;
};

GapStage run_gap(const Args& a, const lg::io::ComplexBundle& B, bool space_for_iteration) {
    GapStage st;
    st.gauge_j = gauge_json_of(a);
    st.f = lg::io::parse_gauge(st.gauge_j);
    if (!a.space_arg.empty()) {
        st.space_j = lg::io::read_json_arg(a.space_arg);
        st.S = lg::io::parse_space(st.space_j);
    }

    if (a.method == "spectral") {
        st.method = lg::GapMethod::Spectral;
    } else if (a.method == "variational") {
        st.method = lg::GapMethod::Variational;
    } else if (a.method == "auto") {
        bool spectral_ok =
            st.f->is_square() && (!st.S || st.S->kind() == lg::SpaceKind::Euclidean);
        st.method = spectral_ok ? lg::GapMethod::Spectral : lg::GapMethod::Variational;
    } else {
        lg::fail(lg::Errc::ParseError, "unknown method \"" + a.method + "\"");
    }

    if (!st.S) {
        std::size_t dim = space_for_iteration || st.method == lg::GapMethod::Variational
                              ? max_link_size(B.X)
                              : 1;
        if (space_for_iteration) dim = std::max<std::size_t>(dim, 3);
        // a signed-permutation recipe pins the dimension the group acts on
        if (B.rep_spec.is_object() &&
            B.rep_spec.value("kind", "") == std::string("signed_permutation")) {
            const json& maps = B.rep_spec.value("maps", json::array());
            if (maps.is_array() && !maps.empty() && maps[0].contains("perm"))
                dim = maps[0].at("perm").size();
        }
        st.space_j = json{{"kind", "euclidean"}, {"dim", dim}};
        st.S = lg::io::parse_space(st.space_j);
    }
    if (st.method == lg::GapMethod::Spectral &&
        (st.S->kind() != lg::SpaceKind::Euclidean || !st.f->is_square()))
        lg::fail(lg::Errc::ParseError,
                 "the spectral method needs a euclidean space and the square gauge; "
                 "pass --method variational for this combination");

    lg::GapParams params;
    params.restarts = a.restarts;
    params.seed = a.seed;
    st.report = lg::global_gap(B.X, B.G, B.orbits, st.method, *st.S, *st.f, params);
    st.exit_code = st.report.verdict ? (st.report.certifying ? 0 : 4) : 3;
    return st;
}

struct IterateStage {
    lg::IterationTrace trace;
    int exit_code = 0;
};

IterateStage run_iterate(const Args& a, const lg::io::ComplexBundle& B, const GapStage& gap,
                         const lg::Representation& rho) {
    IterateStage st;
    lg::Rng rng(a.seed);
    lg::EquivariantMap phi0 =
        lg::random_equivariant_map(B.X, B.G, B.orbits, *gap.S, rho, rng);
    lg::IterateOptions opts;
    opts.stop_on_convergence = !a.no_early_stop;
    st.trace = lg::iterate(B.X, B.G, B.orbits, phi0, *gap.f, *gap.S, gap.report, a.steps, opts);
    st.exit_code = st.trace.non_contractive ? 3 : (st.trace.converged ? 0 : 5);
    return st;
}

void emit_trace(const Args& a, const json& config, const lg::IterationTrace& trace) {
    json head = json{{"record", "config"},
                     {"version", lg::kVersion},
                     {"tolerances", lg::io::tolerances_json()},
                     {"config", config}};
    std::string text = head.dump() + "\n" + lg::io::trace_jsonl(trace);
    std::cout << text;
    if (!a.out.empty()) {
        lg::io::write_text_file(a.out, text);
        if (a.csv) lg::io::write_text_file(a.out + ".csv", lg::io::trace_csv(trace));
    }
}

// ---------------------------------------------------------------------------

int cmd_validate(const Args& a) {
    lg::io::ComplexBundle B = lg::io::load_complex(lg::io::read_json_file(a.complex_path));
    if (!a.space_arg.empty()) {
        // resolving the representation against a concrete space checks it too
        json space_j = lg::io::read_json_arg(a.space_arg);
        lg::Space S = lg::io::parse_space(space_j);
        lg::io::make_representation(B, S);
    }
    json payload = run_validation(B);
    json config{{"command", "validate"}, {"complex", a.complex_path}};
    emit(envelope(config, "validation", payload), a.out);
    return payload.at("pass").get<bool>() ? 0 : 2;
}

int cmd_gap(const Args& a) {
    lg::io::ComplexBundle B = lg::io::load_complex(lg::io::read_json_file(a.complex_path));
    GapStage gap = run_gap(a, B, false);
    json config = config_json(a, "gap", gap.space_j, gap.gauge_j,
                              lg::gap_method_name(gap.method));
    emit(envelope(config, "gap", lg::io::gap_report_json(gap.report)), a.out);
    return gap.exit_code;
}

int cmd_iterate(const Args& a) {
    lg::io::ComplexBundle B = lg::io::load_complex(lg::io::read_json_file(a.complex_path));
    GapStage gap = run_gap(a, B, true);
    lg::Representation rho = lg::io::make_representation(B, *gap.S);
    IterateStage it = run_iterate(a, B, gap, rho);
    json config = config_json(a, "iterate", gap.space_j, gap.gauge_j,
                              lg::gap_method_name(gap.method));
    emit_trace(a, config, it.trace);
    return it.exit_code;
}

int cmd_report(const Args& a) {
    lg::io::ComplexBundle B = lg::io::load_complex(lg::io::read_json_file(a.complex_path));
    json payload = run_validation(B);
    int validate_code = payload.at("pass").get<bool>() ? 0 : 2;

    GapStage gap = run_gap(a, B, true);
    lg::Representation rho = lg::io::make_representation(B, *gap.S);
    IterateStage it = run_iterate(a, B, gap, rho);

    json steps = json::array();
    for (const lg::StepRecord& s : it.trace.steps) steps.push_back(lg::io::step_json(s));
    json config = config_json(a, "report", gap.space_j, gap.gauge_j,
                              lg::gap_method_name(gap.method));
    json doc = envelope(config, "validation", payload);
    doc["gap"] = lg::io::gap_report_json(gap.report);
    doc["iterate"] = json{{"steps", steps},
                          {"summary", lg::io::trace_summary_json(it.trace)}};
    emit(doc, a.out);

    if (validate_code != 0) return validate_code;
    if (gap.exit_code != 0) return gap.exit_code;
    return it.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"link-constant certification and fixed-point iteration for weighted "
                 "2-dimensional complexes"};
    app.require_subcommand(1);

    Args a;
    CLI::App* validate = app.add_subcommand("validate", "check the complex, weights, and group");
    CLI::App* gap = app.add_subcommand("gap", "compute link constants and the certificate");
    CLI::App* iterate = app.add_subcommand("iterate", "run the contracting iteration");
    CLI::App* report = app.add_subcommand("report", "validate + gap + iterate in one document");
    for (CLI::App* cmd : {validate, gap, iterate, report}) add_common(cmd, a);
    for (CLI::App* cmd : {iterate, report}) {
        cmd->add_flag("--csv", a.csv, "also write the trace as CSV next to --out");
        cmd->add_flag("--no-early-stop", a.no_early_stop,
                      "run the full step budget even after convergence");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    auto guarded = [](int (*fn)(const Args&), const Args& args) {
        try {
            return fn(args);
        } catch (const lg::Error& e) {
            json err{{"error", {{"code", lg::errc_name(e.code())}, {"message", e.what()}}}};
            std::cout << err.dump(2) << "\n";
            return e.code() == lg::Errc::ParseError ? 1 : 2;
        } catch (const std::exception& e) {
            std::cerr << "unexpected error: " << e.what() << "\n";
            return 1;
        }
    };

    if (validate->parsed()) return guarded(cmd_validate, a);
    if (gap->parsed()) return guarded(cmd_gap, a);
    if (iterate->parsed()) return guarded(cmd_iterate, a);
    return guarded(cmd_report, a);
}
