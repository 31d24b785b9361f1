#include "rg/json_io.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "rg/canonical.hpp"

namespace rg {

using nlohmann::json;

namespace {

json parse(const std::string& text) {
    json j = json::parse(text, nullptr, false);
    if (j.is_discarded()) throw ParseError("malformed JSON");
    return j;
}

VertexType kind_from_string(const std::string& s) {
    if (s == "Z") return VertexType::Z;
    if (s == "X") return VertexType::X;
    if (s == "H") return VertexType::H;
    if (s == "B") return VertexType::B;
    throw ParseError("unknown vertex kind '" + s + "'");
}

SiteCoordinate coord_from_json(const json& j) {
    if (!j.is_array() || j.size() != 3) throw ParseError("site coordinate must be [x,y,z]");
    return {j[0].get<int>(), j[1].get<int>(), j[2].get<int>()};
}

}  // namespace

std::string diagram_to_json(const Diagram& d) {
    json j;
    j["vertices"] = json::array();
    for (const auto& [v, k] : d.vertices()) {
        json jv;
        jv["id"] = v;
        jv["kind"] = std::string(1, vertex_type_char(k.type));
        if (k.is_spider()) jv["phase"] = {{"num", k.phase.num()}, {"den", k.phase.den()}};
        j["vertices"].push_back(jv);
    }
    j["edges"] = json::array();
    for (const Edge& e : d.edges()) j["edges"].push_back({e.first, e.second});
    j["inputs"] = d.inputs();
    j["outputs"] = d.outputs();
    return j.dump(2) + "\n";
}

Diagram diagram_from_json(const std::string& text) {
    json j = parse(text);
    if (!j.is_object() || !j.contains("vertices") || !j.contains("edges"))
        throw ParseError("diagram JSON needs vertices and edges");
    DiagramBuilder b;
    for (const json& jv : j["vertices"]) {
        VertexId id = jv.at("id").get<VertexId>();
        VertexType t = kind_from_string(jv.at("kind").get<std::string>());
        VertexKind k{t, Phase::zero()};
        if (t == VertexType::Z || t == VertexType::X) {
            if (!jv.contains("phase")) throw ParseError("spider vertex missing phase");
            k.phase = Phase(jv["phase"].at("num").get<std::int64_t>(),
                            jv["phase"].at("den").get<std::int64_t>());
        }
        if (b.vertices.count(id)) throw ParseError("duplicate vertex id " + std::to_string(id));
        b.vertices.emplace(id, k);
        b.next_id = std::max(b.next_id, id + 1);
    }
    for (const json& je : j["edges"]) {
        if (!je.is_array() || je.size() != 2) throw ParseError("edge must be [a,b]");
        b.add_edge(je[0].get<VertexId>(), je[1].get<VertexId>());
    }
    if (j.contains("inputs"))
        for (const json& ji : j["inputs"]) b.inputs.push_back(ji.get<VertexId>());
    if (j.contains("outputs"))
        for (const json& jo : j["outputs"]) b.outputs.push_back(jo.get<VertexId>());
    if (auto v = validate(b))
        throw ParseError("invalid diagram: " + v->invariant + " (" + v->detail + ")");
    return b.build();
}

std::string trace_to_json(const Trace& t) {
    json j;
    j["steps"] = json::array();
    for (const RewriteStep& s : t.steps) {
        json js;
        js["rule"] = rule_name(s.rule);
        js["anchors"] = s.anchors;
        js["before"] = s.before_hash;
        js["after"] = s.after_hash;
        j["steps"].push_back(js);
    }
    return j.dump(2) + "\n";
}

Trace trace_from_json(const std::string& text) {
    json j = parse(text);
    Trace t;
    for (const json& js : j.at("steps")) {
        RewriteStep s;
        auto r = rule_from_name(js.at("rule").get<std::string>());
        if (!r) throw ParseError("unknown rule '" + js.at("rule").get<std::string>() + "'");
        s.rule = *r;
        for (const json& ja : js.at("anchors")) s.anchors.push_back(ja.get<std::size_t>());
        s.before_hash = js.at("before").get<std::string>();
        s.after_hash = js.at("after").get<std::string>();
        t.steps.push_back(std::move(s));
    }
    return t;
}

std::string tensor_to_json(const TensorMap& t) {
    json j;
    j["n_inputs"] = t.n_inputs;
    j["n_outputs"] = t.n_outputs;
    json re = json::array(), im = json::array();
    for (std::size_t r = 0; r < t.rows(); ++r) {
        json rr = json::array(), ri = json::array();
        for (std::size_t c = 0; c < t.cols(); ++c) {
            rr.push_back(t.at(r, c).real());
            ri.push_back(t.at(r, c).imag());
        }
        re.push_back(rr);
        im.push_back(ri);
    }
    j["re"] = re;
    j["im"] = im;
    return j.dump() + "\n";
}

TensorMap tensor_from_json(const std::string& text) {
    json j = parse(text);
    TensorMap t;
    t.n_inputs = j.at("n_inputs").get<std::size_t>();
    t.n_outputs = j.at("n_outputs").get<std::size_t>();
    const json& re = j.at("re");
    const json& im = j.at("im");
    if (re.size() != t.rows() || im.size() != t.rows())
        throw ParseError("tensor row count does not match signature");
    t.entries.resize(t.rows() * t.cols());
    for (std::size_t r = 0; r < t.rows(); ++r) {
        if (re[r].size() != t.cols() || im[r].size() != t.cols())
            throw ParseError("tensor column count does not match signature");
        for (std::size_t c = 0; c < t.cols(); ++c)
            t.at(r, c) = Complex{re[r][c].get<double>(), im[r][c].get<double>()};
    }
    return t;
}

LatticeSpec lattice_spec_from_json(const std::string& text) {
    json j = parse(text);
    LatticeSpec s;
    const json& cells = j.at("cells");
    if (!cells.is_array() || cells.size() != 3) throw ParseError("cells must be [nx,ny,nz]");
    s.nx = cells[0].get<int>();
    s.ny = cells[1].get<int>();
    s.nz = cells[2].get<int>();
    if (s.nx < 1 || s.ny < 1 || s.nz < 1) throw InputError("cell counts must be >= 1");
    if (j.contains("convention")) {
        std::string c = j["convention"].get<std::string>();
        if (c == "red-centre") s.convention = Convention::RedCentre;
        else if (c == "green-centre") s.convention = Convention::GreenCentre;
        else throw ParseError("unknown convention '" + c + "'");
    }
    return s;
}

std::string lattice_spec_to_json(const LatticeSpec& s) {
    json j;
    j["cells"] = {s.nx, s.ny, s.nz};
    j["convention"] = s.convention == Convention::RedCentre ? "red-centre" : "green-centre";
    return j.dump(2) + "\n";
}

PatternFile pattern_from_json(const std::string& text) {
    json j = parse(text);
    PatternFile p;
    p.lattice = lattice_spec_from_json(j.at("lattice").dump());
    if (j.contains("defects")) {
        for (const json& jd : j["defects"]) {
            DefectStrand s;
            std::string sub = jd.at("sublattice").get<std::string>();
            if (sub == "primal") s.sublattice = Sublattice::Primal;
            else if (sub == "dual") s.sublattice = Sublattice::Dual;
            else throw ParseError("unknown sublattice '" + sub + "'");
            for (const json& jc : jd.at("path")) s.path.push_back(coord_from_json(jc));
            p.defects.strands.push_back(std::move(s));
        }
    }
    if (j.contains("pairs")) {
        for (const json& jp : j["pairs"]) {
            if (!jp.is_array() || jp.size() != 2) throw ParseError("pair must be [i,j]");
            p.defects.pairs.push_back({jp[0].get<int>(), jp[1].get<int>()});
        }
    }
    if (j.contains("logical_ops")) {
        for (const json& jo : j["logical_ops"]) {
            LogicalOperatorSpec op;
            std::string kind = jo.at("kind").get<std::string>();
            if (kind == "ring") op.kind = LogicalOperatorSpec::Kind::Ring;
            else if (kind == "chain") op.kind = LogicalOperatorSpec::Kind::Chain;
            else throw ParseError("unknown logical op kind '" + kind + "'");
            for (const json& jc : jo.at("sites")) op.sites.push_back(coord_from_json(jc));
            p.logical_ops.push_back(std::move(op));
        }
    }
    if (j.contains("outcomes")) {
        const json& jo = j["outcomes"];
        if (jo.is_string() && jo.get<std::string>() == "all-plus") {
            p.outcome_mode = OutcomeMode::AllPlus;
        } else if (jo.is_object() && jo.contains("seed")) {
            p.outcome_mode = OutcomeMode::Seeded;
            p.seed = jo["seed"].get<std::uint64_t>();
        } else if (jo.is_object() && jo.contains("explicit")) {
            p.outcome_mode = OutcomeMode::Explicit;
            for (const json& je : jo["explicit"]) {
                if (!je.is_array() || je.size() != 4)
                    throw ParseError("explicit outcome must be [x,y,z,sign]");
                p.explicit_signs.push_back(
                    {{je[0].get<int>(), je[1].get<int>(), je[2].get<int>()}, je[3].get<int>()});
            }
        } else {
            throw ParseError("outcomes must be \"all-plus\", {\"seed\":n} or {\"explicit\":[...]}");
        }
    }
    return p;
}

std::vector<GateLibraryEntry> load_gate_library(const std::string& dir) {
    namespace fs = std::filesystem;
    std::vector<GateLibraryEntry> lib;
    if (!fs::is_directory(dir)) throw InputError("gate library directory not found: " + dir);
    std::vector<fs::path> files;
    for (const auto& e : fs::directory_iterator(dir))
        if (e.path().extension() == ".json") files.push_back(e.path());
    std::sort(files.begin(), files.end());
    for (const fs::path& f : files) {
        json j = parse(read_file(f.string()));
        GateLibraryEntry e;
        e.name = j.at("name").get<std::string>();
        e.diagram = diagram_from_json(j.at("diagram").dump());
        e.tensor = evaluate(e.diagram);
        lib.push_back(std::move(e));
    }
    if (lib.empty()) throw InputError("gate library directory has no entries: " + dir);
    return lib;
}

std::string export_dot(const Diagram& d) {
    CanonicalForm form = canonical_form(d);
    std::ostringstream os;
    os << "graph diagram {\n";
    os << "  node [fontsize=10];\n";
    for (VertexId v : form.order) {
        const VertexKind& k = d.kind(v);
        os << "  v" << v << " [";
        switch (k.type) {
            case VertexType::Z:
                os << "shape=circle,style=filled,fillcolor=palegreen,label=\""
                   << (k.phase.is_zero() ? "" : k.phase.str()) << "\"";
                break;
            case VertexType::X:
                os << "shape=circle,style=filled,fillcolor=lightcoral,label=\""
                   << (k.phase.is_zero() ? "" : k.phase.str()) << "\"";
                break;
            case VertexType::H:
                os << "shape=square,style=filled,fillcolor=gold,label=\"H\"";
                break;
            case VertexType::B:
                os << "shape=point,label=\"\"";
                break;
        }
        os << "];\n";
    }
    std::vector<std::pair<std::size_t, std::size_t>> es;
    std::vector<Edge> raw;
    for (const Edge& e : d.edges()) {
        es.push_back({form.label.at(e.first), form.label.at(e.second)});
        raw.push_back(e);
    }
    std::vector<std::size_t> idx(es.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    std::sort(idx.begin(), idx.end(), [&es](std::size_t a, std::size_t b) { return es[a] < es[b]; });
    for (std::size_t i : idx) os << "  v" << raw[i].first << " -- v" << raw[i].second << ";\n";
    os << "}\n";
    return os.str();
}

std::string read_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw InputError("cannot read file: " + path);
    std::ostringstream os;
    os << f.rdbuf();
    return os.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw InputError("cannot write file: " + path);
    f << content;
}

}  // namespace rg
