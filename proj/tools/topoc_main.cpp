#include <chrono>
#include <filesystem>
#include <iostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "rg/canonical.hpp"
#include "rg/gates.hpp"
#include "rg/json_io.hpp"
#include "rg/lattice.hpp"
#include "rg/measurement.hpp"
#include "rg/rewrite.hpp"
#include "rg/tensor.hpp"

namespace {

using namespace rg;
using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitMismatch = 1;
constexpr int kExitInput = 2;
constexpr int kExitResource = 3;

struct CommonOpts {
    double tol = 1e-9;
    std::size_t budget = 1000000;
    std::size_t rank_cap = std::size_t{1} << 14;
    std::string gates_dir;
};

std::vector<GateLibraryEntry> library_for(const CommonOpts& c) {
    if (!c.gates_dir.empty()) return load_gate_library(c.gates_dir);
    return default_gate_library();
}

NormalizePolicy shrink_with_budget(std::size_t budget) {
    NormalizePolicy p = NormalizePolicy::shrink();
    p.budget = budget;
    return p;
}

int cmd_build(const std::string& spec_path, const std::string& out,
              const std::string& convention_flag) {
    LatticeSpec spec = lattice_spec_from_json(read_file(spec_path));
    if (convention_flag == "red-centre") spec.convention = Convention::RedCentre;
    if (convention_flag == "green-centre") spec.convention = Convention::GreenCentre;
    ClusterBuild b = tile_lattice(spec.nx, spec.ny, spec.nz, spec.convention);
    write_file(out, diagram_to_json(b.diagram));
    std::cout << "built " << b.n_sites() << " sites, " << b.diagram.n_vertices() << " vertices -> "
              << out << "\n";
    return kExitOk;
}

int cmd_compile(const std::string& pattern_path, const std::string& out,
                const std::string& report_path, const std::string& trace_path,
                const CommonOpts& common) {
    auto t0 = std::chrono::steady_clock::now();
    std::string pattern_text = read_file(pattern_path);
    PatternFile pf = pattern_from_json(pattern_text);

    ClusterBuild build = tile_lattice(pf.lattice.nx, pf.lattice.ny, pf.lattice.nz,
                                      pf.lattice.convention);
    MeasurementPattern mp =
        make_pattern(build, pf.defects, pf.outcome_mode, pf.seed, pf.explicit_signs);
    std::vector<CellParityViolation> violations = parity_check(build, mp);
    for (const CellParityViolation& v : violations)
        std::cerr << "warning: odd measurement parity in "
                  << (v.sublattice == Sublattice::Primal ? "primal" : "dual") << " cell at ("
                  << v.origin.x << "," << v.origin.y << "," << v.origin.z << ")\n";

    NormalizePolicy policy = shrink_with_budget(common.budget);
    std::size_t vertices_before = build.diagram.n_vertices();
    Diagram carved = carve_defects(build, pf.defects, mp, policy);
    Diagram with_ops = insert_logical_operators(carved, pf.logical_ops, build);
    MeasureResult measured = measure_bulk_x(with_ops, mp, build, policy);
    NormalizeResult extracted = extract_logical(measured.diagram, policy);

    std::vector<PortGroup> groups;
    for (const LogicalPorts& lp : derive_ports(build, pf.defects)) {
        PortGroup in{true, {}}, outg{false, {}};
        for (int s : lp.in_sites) in.legs.push_back(build.time_legs[static_cast<std::size_t>(s)]);
        for (int s : lp.out_sites) outg.legs.push_back(build.time_legs[static_cast<std::size_t>(s)]);
        groups.push_back(std::move(in));
        groups.push_back(std::move(outg));
    }

    std::vector<GateLibraryEntry> lib = library_for(common);
    Recognition rec = recognize(extracted.diagram, lib, groups, {common.tol, common.rank_cap});

    json equivalence;
    if (rec.name != "unrecognized") {
        try {
            Diagram cand = recognition_candidate(extracted.diagram, groups);
            TensorMap t = evaluate(cand, {common.rank_cap});
            for (const GateLibraryEntry& e : lib) {
                if (e.name != rec.name) continue;
                ScalarEquivalence eq = equiv_up_to_scalar(t, e.tensor, common.tol);
                equivalence = {{"equivalent", eq.equivalent},
                               {"scalar_re", eq.scalar.real()},
                               {"scalar_im", eq.scalar.imag()},
                               {"max_residual", eq.max_residual}};
            }
        } catch (const ResourceError&) {
            equivalence = {{"equivalent", nullptr}, {"note", "above rank cap"}};
        }
    }

    if (!out.empty()) write_file(out, diagram_to_json(extracted.diagram));
    if (!trace_path.empty()) {
        Trace full = measured.trace;
        full.steps.insert(full.steps.end(), extracted.trace.steps.begin(),
                          extracted.trace.steps.end());
        write_file(trace_path, trace_to_json(full));
    }

    auto wall =
        std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - t0)
            .count();
    json report;
    report["input"] = pattern_path;
    report["digest"] = canonical_hash_hex(build.diagram);
    report["sites"] = build.n_sites();
    report["vertices_before"] = vertices_before;
    report["vertices_after"] = extracted.diagram.n_vertices();
    report["trace_len"] = measured.trace.steps.size() + extracted.trace.steps.size();
    report["recognized"] = rec.name;
    report["zero_amplitude"] = rec.zero_scalar;
    report["equivalence"] = equivalence;
    json jv = json::array();
    for (const CellParityViolation& v : violations)
        jv.push_back({{"sublattice", v.sublattice == Sublattice::Primal ? "primal" : "dual"},
                      {"cell", {v.origin.x, v.origin.y, v.origin.z}}});
    report["parity_violations"] = jv;
    report["wall_ms"] = wall;
    if (!report_path.empty()) write_file(report_path, report.dump(2) + "\n");

    std::cout << "recognized: " << rec.name << "\n";
    return rec.name == "unrecognized" ? kExitMismatch : kExitOk;
}

int cmd_verify(const std::string& diagram_path, const std::string& expected,
               const CommonOpts& common) {
    Diagram d = diagram_from_json(read_file(diagram_path));
    TensorMap got = evaluate(d, {common.rank_cap});
    TensorMap want;
    bool found = false;
    if (std::filesystem::exists(expected)) {
        want = tensor_from_json(read_file(expected));
        found = true;
    } else {
        for (const GateLibraryEntry& e : library_for(common)) {
            if (e.name == expected) {
                want = e.tensor;
                found = true;
                break;
            }
        }
    }
    if (!found) throw InputError("expected '" + expected + "' is neither a gate name nor a file");
    ScalarEquivalence eq = equiv_up_to_scalar(got, want, common.tol);
    if (eq.equivalent) {
        std::cout << "equivalent, scalar = " << eq.scalar.real() << (eq.scalar.imag() < 0 ? "-" : "+")
                  << std::abs(eq.scalar.imag()) << "i, residual = " << eq.max_residual << "\n";
        return kExitOk;
    }
    std::cout << "not equivalent, residual = " << eq.max_residual << "\n";
    return kExitMismatch;
}

int cmd_rewrite(const std::string& diagram_path, const std::string& rule,
                const std::vector<std::size_t>& anchor, bool do_normalize, const std::string& out,
                const std::string& trace_path, const CommonOpts& common) {
    Diagram d = diagram_from_json(read_file(diagram_path));
    Diagram result;
    Trace trace;
    if (do_normalize) {
        NormalizeResult r = normalize(d, shrink_with_budget(common.budget));
        result = std::move(r.diagram);
        trace = std::move(r.trace);
    } else {
        auto rid = rule_from_name(rule);
        if (!rid) throw InputError("unknown rule '" + rule + "'");
        std::vector<Match> matches = find_matches(d, *rid);
        CanonicalForm form = canonical_form(d);
        const Match* chosen = nullptr;
        if (anchor.empty()) {
            if (!matches.empty()) chosen = &matches.front();
        } else {
            for (const Match& m : matches) {
                std::vector<std::size_t> labels;
                for (VertexId v : m.anchors) labels.push_back(form.label.at(v));
                if (labels == anchor) {
                    chosen = &m;
                    break;
                }
            }
        }
        if (!chosen) {
            std::cerr << "no match for rule " << rule << " at the requested anchor\n";
            return kExitMismatch;
        }
        RewriteStep step;
        step.rule = *rid;
        for (VertexId v : chosen->anchors) step.anchors.push_back(form.label.at(v));
        step.before_hash = canonical_hash_hex(d);
        result = apply(d, *chosen);
        step.after_hash = canonical_hash_hex(result);
        trace.steps.push_back(std::move(step));
    }
    write_file(out, diagram_to_json(result));
    if (!trace_path.empty()) write_file(trace_path, trace_to_json(trace));
    std::cout << trace.steps.size() << " step(s) -> " << out << "\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"red/green diagram rewriting and topological cluster-state compiling"};
    app.require_subcommand(1);

    CommonOpts common;
    app.add_option("--tol", common.tol, "tensor equivalence tolerance")->capture_default_str();
    app.add_option("--budget", common.budget, "rewrite step budget")->capture_default_str();
    app.add_option("--rank-cap", common.rank_cap, "max amplitudes per intermediate tensor")
        ->capture_default_str();
    app.add_option("--gates", common.gates_dir, "gate library directory (JSON entries)");

    std::string in_path, out_path = "out.json", report_path, trace_path, convention_flag;
    std::string expected, rule;
    std::vector<std::size_t> anchor;
    bool do_normalize = false;

    CLI::App* build = app.add_subcommand("build", "build a cluster lattice diagram");
    build->add_option("spec", in_path, "lattice spec JSON")->required();
    build->add_option("-o,--out", out_path, "output diagram path")->capture_default_str();
    build->add_option("--convention", convention_flag, "red-centre | green-centre");

    CLI::App* compile = app.add_subcommand("compile", "carve, measure and recognize a pattern");
    compile->add_option("pattern", in_path, "measurement pattern JSON")->required();
    compile->add_option("-o,--out", out_path, "normal-form diagram path")->capture_default_str();
    compile->add_option("--report", report_path, "report JSON path");
    compile->add_option("--emit-trace", trace_path, "rewrite trace path");

    CLI::App* verify = app.add_subcommand("verify", "compare a diagram against a gate or tensor");
    verify->add_option("diagram", in_path, "diagram JSON")->required();
    verify->add_option("expected", expected, "gate name or tensor JSON path")->required();

    CLI::App* rewrite = app.add_subcommand("rewrite", "apply one rule or normalize");
    rewrite->add_option("diagram", in_path, "diagram JSON")->required();
    rewrite->add_option("--rule", rule, "rule name for a single step");
    rewrite->add_option("--anchor", anchor, "canonical anchor labels for the step");
    rewrite->add_flag("--normalize", do_normalize, "fully normalize instead");
    rewrite->add_option("-o,--out", out_path, "output diagram path")->capture_default_str();
    rewrite->add_option("--emit-trace", trace_path, "rewrite trace path");

    CLI::App* dot = app.add_subcommand("export-dot", "write a DOT rendering");
    dot->add_option("diagram", in_path, "diagram JSON")->required();
    dot->add_option("-o,--out", out_path, "output DOT path")->capture_default_str();

    CLI::App* tensor = app.add_subcommand("tensor", "evaluate a diagram to a dense tensor");
    tensor->add_option("diagram", in_path, "diagram JSON")->required();
    tensor->add_option("-o,--out", out_path, "output tensor JSON path")->capture_default_str();

    CLI11_PARSE(app, argc, argv);

    try {
        if (build->parsed()) return cmd_build(in_path, out_path, convention_flag);
        if (compile->parsed())
            return cmd_compile(in_path, out_path, report_path, trace_path, common);
        if (verify->parsed()) return cmd_verify(in_path, expected, common);
        if (rewrite->parsed()) {
            if (!do_normalize && rule.empty())
                throw rg::InputError("rewrite needs --rule or --normalize");
            return cmd_rewrite(in_path, rule, anchor, do_normalize, out_path, trace_path, common);
        }
        if (dot->parsed()) {
            rg::Diagram d = rg::diagram_from_json(rg::read_file(in_path));
            rg::write_file(out_path, rg::export_dot(d));
            std::cout << "wrote " << out_path << "\n";
            return kExitOk;
        }
        if (tensor->parsed()) {
            rg::Diagram d = rg::diagram_from_json(rg::read_file(in_path));
            rg::TensorMap t = rg::evaluate(d, {common.rank_cap});
            rg::write_file(out_path, rg::tensor_to_json(t));
            std::cout << "wrote " << out_path << "\n";
            return kExitOk;
        }
    } catch (const rg::BudgetError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitResource;
    } catch (const rg::ResourceError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitResource;
    } catch (const rg::InputError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    }
    return kExitInput;
}
