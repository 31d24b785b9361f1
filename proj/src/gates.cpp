#include "rg/gates.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "rg/canonical.hpp"
#include "rg/rewrite.hpp"

namespace rg {

Diagram wire_diagram() {
    DiagramBuilder b;
    VertexId in = b.add_boundary();
    VertexId out = b.add_boundary();
    b.add_edge(in, out);
    b.inputs = {in};
    b.outputs = {out};
    return b.build();
}

namespace {

Diagram line_with(VertexKind k) {
    DiagramBuilder b;
    VertexId in = b.add_boundary();
    VertexId s = b.add_vertex(k);
    VertexId out = b.add_boundary();
    b.add_edge(in, s);
    b.add_edge(s, out);
    b.inputs = {in};
    b.outputs = {out};
    return b.build();
}

}  // namespace

Diagram z_l_diagram() { return line_with(VertexKind::z(Phase::pi())); }
Diagram x_l_diagram() { return line_with(VertexKind::x(Phase::pi())); }

Diagram cnot_diagram() {
    DiagramBuilder b;
    VertexId ci = b.add_boundary();
    VertexId ti = b.add_boundary();
    VertexId c = b.add_z();
    VertexId t = b.add_x();
    VertexId co = b.add_boundary();
    VertexId to = b.add_boundary();
    b.add_edge(ci, c);
    b.add_edge(ti, t);
    b.add_edge(c, t);
    b.add_edge(c, co);
    b.add_edge(t, to);
    b.inputs = {ci, ti};
    b.outputs = {co, to};
    return b.build();
}

Diagram cz_diagram() {
    DiagramBuilder b;
    VertexId ai = b.add_boundary();
    VertexId bi = b.add_boundary();
    VertexId u = b.add_z();
    VertexId v = b.add_z();
    VertexId h = b.add_h();
    VertexId ao = b.add_boundary();
    VertexId bo = b.add_boundary();
    b.add_edge(ai, u);
    b.add_edge(bi, v);
    b.add_edge(u, h);
    b.add_edge(h, v);
    b.add_edge(u, ao);
    b.add_edge(v, bo);
    b.inputs = {ai, bi};
    b.outputs = {ao, bo};
    return b.build();
}

std::vector<GateLibraryEntry> default_gate_library() {
    std::vector<GateLibraryEntry> lib;
    for (auto& [name, d] : std::vector<std::pair<std::string, Diagram>>{
             {"identity", wire_diagram()},
             {"Z_L", z_l_diagram()},
             {"X_L", x_l_diagram()},
             {"CZ", cz_diagram()},
             {"CNOT", cnot_diagram()}}) {
        GateLibraryEntry e;
        e.name = name;
        e.tensor = evaluate(d);
        e.diagram = std::move(d);
        lib.push_back(std::move(e));
    }
    return lib;
}

namespace {

// Colour of the structure a boundary's wire leads to: walk through H boxes
// and degree-2 spiders until a branching or terminal spider.
std::optional<VertexType> attachment_colour(const Diagram& d, VertexId leg) {
    VertexId prev = leg;
    VertexId cur = d.neighbors(leg).at(0);
    std::set<VertexId> seen{leg};
    std::optional<VertexType> last;
    bool flip = false;  // H boxes crossed conjugate the decoding basis
    while (seen.insert(cur).second) {
        const VertexKind& k = d.kind(cur);
        if (k.is_boundary()) return last;
        if (k.is_spider()) {
            VertexType t = flip ? k.colour_swapped().type : k.type;
            last = t;
            if (d.degree(cur) != 2) return t;
        } else {
            flip = !flip;
        }
        const auto& ns = d.neighbors(cur);
        VertexId next = ns[0] == prev ? ns[1] : ns[0];
        if (next == cur) return last;
        prev = cur;
        cur = next;
    }
    return last;
}

}  // namespace

Diagram regroup_boundaries(const Diagram& d, const std::vector<PortGroup>& groups) {
    DiagramBuilder b = d.to_builder();
    std::vector<VertexId> new_inputs, new_outputs;
    std::set<VertexId> grouped;
    for (const PortGroup& g : groups) {
        if (g.legs.empty()) throw InputError("empty port group");
        int reds = 0, greens = 0;
        for (VertexId leg : g.legs) {
            if (!d.has_vertex(leg) || !d.kind(leg).is_boundary())
                throw InputError("port group leg " + std::to_string(leg) + " is not a boundary");
            if (!grouped.insert(leg).second)
                throw InputError("port group leg " + std::to_string(leg) + " listed twice");
            auto col = attachment_colour(d, leg);
            if (col == VertexType::X) ++reds;
            if (col == VertexType::Z) ++greens;
        }
        VertexKind copy_kind = reds > greens ? VertexKind::x() : VertexKind::z();
        VertexId w = b.add_vertex(copy_kind);
        for (VertexId leg : g.legs) {
            VertexId y = b.neighbors(leg).at(0);
            b.remove_vertex(leg);
            b.add_edge(w, y);
        }
        VertexId nb = b.add_boundary();
        b.add_edge(w, nb);
        (g.is_input ? new_inputs : new_outputs).push_back(nb);
    }
    for (VertexId v : d.inputs())
        if (!grouped.count(v)) new_inputs.push_back(v);
    for (VertexId v : d.outputs())
        if (!grouped.count(v)) new_outputs.push_back(v);
    b.inputs = new_inputs;
    b.outputs = new_outputs;
    return b.build();
}

Diagram recognition_candidate(const Diagram& normal, const std::vector<PortGroup>& groups,
                              bool* zero_scalar) {
    Diagram candidate = groups.empty() ? normal : regroup_boundaries(normal, groups);
    candidate = normalize(candidate).diagram;
    // strip scalar junk: degree-0 spiders; a pi one means the whole diagram
    // evaluates to zero
    DiagramBuilder b = candidate.to_builder();
    std::vector<VertexId> junk;
    for (const auto& [v, k] : b.vertices) {
        if (k.is_spider() && candidate.degree(v) == 0) {
            if (k.phase.is_pi() && zero_scalar) *zero_scalar = true;
            junk.push_back(v);
        }
    }
    for (VertexId v : junk) b.remove_vertex(v);
    return b.build();
}

Recognition recognize(const Diagram& normal, const std::vector<GateLibraryEntry>& library,
                      const std::vector<PortGroup>& groups, const RecognitionOptions& opts) {
    Recognition rec;
    Diagram candidate = recognition_candidate(normal, groups, &rec.zero_scalar);
    if (rec.zero_scalar) return rec;

    for (const GateLibraryEntry& e : library) {
        if (isomorphic(candidate, e.diagram).isomorphic) {
            rec.name = e.name;
            rec.matched_structurally = true;
            return rec;
        }
    }
    // tensor fallback
    try {
        TensorMap t = evaluate(candidate, {opts.rank_cap});
        for (const GateLibraryEntry& e : library) {
            if (e.tensor.n_inputs != t.n_inputs || e.tensor.n_outputs != t.n_outputs) continue;
            ScalarEquivalence eq = equiv_up_to_scalar(t, e.tensor, opts.tol);
            if (eq.equivalent) {
                rec.name = e.name;
                rec.matched_by_tensor = true;
                return rec;
            }
        }
    } catch (const ResourceError&) {
        // too large for the oracle; structural match already failed
    }
    return rec;
}

}  // namespace rg
