#include "rg/diagram.hpp"

#include <algorithm>
#include <set>

namespace rg {

void DiagramBuilder::add_edge(VertexId a, VertexId b) {
    Edge e = make_edge(a, b);
    edges.insert(std::upper_bound(edges.begin(), edges.end(), e), e);
}

void DiagramBuilder::remove_edge_once(VertexId a, VertexId b) {
    Edge e = make_edge(a, b);
    auto it = std::lower_bound(edges.begin(), edges.end(), e);
    if (it == edges.end() || *it != e)
        throw MatchError("edge (" + std::to_string(a) + "," + std::to_string(b) + ") not present");
    edges.erase(it);
}

void DiagramBuilder::remove_vertex(VertexId v) {
    vertices.erase(v);
    edges.erase(std::remove_if(edges.begin(), edges.end(),
                               [v](const Edge& e) { return e.first == v || e.second == v; }),
                edges.end());
    inputs.erase(std::remove(inputs.begin(), inputs.end(), v), inputs.end());
    outputs.erase(std::remove(outputs.begin(), outputs.end(), v), outputs.end());
}

std::size_t DiagramBuilder::degree(VertexId v) const {
    std::size_t d = 0;
    for (const Edge& e : edges) {
        if (e.first == v) ++d;
        if (e.second == v) ++d;
    }
    return d;
}

std::vector<VertexId> DiagramBuilder::neighbors(VertexId v) const {
    std::vector<VertexId> out;
    for (const Edge& e : edges) {
        if (e.first == v) out.push_back(e.second);
        if (e.second == v) out.push_back(e.first);
    }
    return out;
}

std::optional<Violation> validate(const DiagramBuilder& b) {
    std::set<VertexId> boundary_listed;
    for (const auto& [name, list] : {std::pair<const char*, const std::vector<VertexId>*>{
                                         "inputs", &b.inputs},
                                     {"outputs", &b.outputs}}) {
        for (VertexId v : *list) {
            auto it = b.vertices.find(v);
            if (it == b.vertices.end())
                return Violation{"boundary list refers to existing vertex",
                                 std::string(name) + " contains unknown vertex " + std::to_string(v)};
            if (!it->second.is_boundary())
                return Violation{"boundary lists contain only Boundary vertices",
                                 std::string(name) + " vertex " + std::to_string(v) + " is not Boundary"};
            if (!boundary_listed.insert(v).second)
                return Violation{"boundary vertex appears in exactly one list position",
                                 "vertex " + std::to_string(v) + " listed twice"};
        }
    }
    for (const auto& [v, k] : b.vertices) {
        if (k.is_boundary() && boundary_listed.count(v) == 0)
            return Violation{"every Boundary vertex appears in inputs or outputs",
                             "vertex " + std::to_string(v) + " unlisted"};
    }
    for (const Edge& e : b.edges) {
        if (b.vertices.count(e.first) == 0 || b.vertices.count(e.second) == 0)
            return Violation{"every edge endpoint exists",
                             "edge (" + std::to_string(e.first) + "," + std::to_string(e.second) + ")"};
        if (e.first > e.second)
            return Violation{"edges stored normalized", "edge endpoints out of order"};
    }
    for (const auto& [v, k] : b.vertices) {
        std::size_t d = b.degree(v);
        if (k.is_h() && d != 2)
            return Violation{"Hadamard degree = 2",
                             "vertex " + std::to_string(v) + " has degree " + std::to_string(d)};
        if (k.is_boundary() && d != 1)
            return Violation{"Boundary degree = 1",
                             "vertex " + std::to_string(v) + " has degree " + std::to_string(d)};
    }
    return std::nullopt;
}

Diagram DiagramBuilder::build() const {
    if (auto v = validate(*this))
        throw ValidationError("invalid diagram: " + v->invariant + " (" + v->detail + ")");
    Diagram d;
    d.vertices_ = vertices;
    d.edges_ = edges;
    std::sort(d.edges_.begin(), d.edges_.end());
    d.inputs_ = inputs;
    d.outputs_ = outputs;
    d.next_id_ = next_id;
    for (const auto& [v, k] : d.vertices_) d.adjacency_[v];
    for (const Edge& e : d.edges_) {
        d.adjacency_[e.first].push_back(e.second);
        if (e.first != e.second)
            d.adjacency_[e.second].push_back(e.first);
        else
            d.adjacency_[e.first].push_back(e.first);  // loop counts twice
    }
    for (auto& [v, ns] : d.adjacency_) std::sort(ns.begin(), ns.end());
    return d;
}

const VertexKind& Diagram::kind(VertexId v) const {
    auto it = vertices_.find(v);
    if (it == vertices_.end()) throw InputError("unknown vertex " + std::to_string(v));
    return it->second;
}

std::size_t Diagram::degree(VertexId v) const { return neighbors(v).size(); }

const std::vector<VertexId>& Diagram::neighbors(VertexId v) const {
    auto it = adjacency_.find(v);
    if (it == adjacency_.end()) throw InputError("unknown vertex " + std::to_string(v));
    return it->second;
}

std::size_t Diagram::edge_multiplicity(VertexId a, VertexId b) const {
    Edge e = make_edge(a, b);
    auto lo = std::lower_bound(edges_.begin(), edges_.end(), e);
    auto hi = std::upper_bound(edges_.begin(), edges_.end(), e);
    return static_cast<std::size_t>(hi - lo);
}

DiagramBuilder Diagram::to_builder() const {
    DiagramBuilder b;
    b.vertices = vertices_;
    b.edges = edges_;
    b.inputs = inputs_;
    b.outputs = outputs_;
    b.next_id = next_id_;
    return b;
}

Diagram Diagram::colour_swapped() const {
    DiagramBuilder b = to_builder();
    for (auto& [v, k] : b.vertices) k = k.colour_swapped();
    return b.build();
}

namespace {

// Appends other's vertices/edges with ids shifted to stay disjoint.
// Returns the id offset applied.
VertexId append_shifted(DiagramBuilder& dst, const Diagram& src) {
    VertexId off = dst.next_id;
    for (const auto& [v, k] : src.vertices()) dst.vertices.emplace(v + off, k);
    for (const Edge& e : src.edges()) dst.add_edge(e.first + off, e.second + off);
    dst.next_id = off + src.to_builder().next_id;
    return off;
}

}  // namespace

Diagram compose_sequential(const Diagram& first, const Diagram& second) {
    if (first.outputs().size() != second.inputs().size())
        throw CompositionError("arity mismatch: first is " + first.signature().str() +
                               ", second is " + second.signature().str());

    DiagramBuilder b;
    for (const auto& [v, k] : first.vertices()) b.vertices.emplace(v, k);
    for (const Edge& e : first.edges()) b.add_edge(e.first, e.second);
    b.next_id = first.to_builder().next_id;
    VertexId off = append_shifted(b, second);

    // Each glued output/input pair becomes one connector of degree 2, then
    // connectors dissolve by joining their two wire ends. A connector whose
    // both ends meet itself is a closed circle; circles are scalars and drop.
    std::set<VertexId> connectors;
    for (std::size_t i = 0; i < first.outputs().size(); ++i) {
        VertexId o = first.outputs()[i];
        VertexId in = second.inputs()[i] + off;
        for (auto& e : b.edges) {
            if (e.first == in) e.first = o;
            if (e.second == in) e.second = o;
            if (e.first > e.second) std::swap(e.first, e.second);
        }
        b.vertices.erase(in);
        connectors.insert(o);
    }
    std::sort(b.edges.begin(), b.edges.end());

    while (!connectors.empty()) {
        VertexId c = *connectors.begin();
        connectors.erase(connectors.begin());
        std::vector<VertexId> ends;
        for (const Edge& e : b.edges) {
            if (e.first == c) ends.push_back(e.second);
            if (e.second == c) ends.push_back(e.first);
        }
        b.remove_vertex(c);
        if (ends.size() != 2) throw CompositionError("internal: connector degree != 2");
        if (ends[0] == c && ends[1] == c) continue;  // circle, dropped
        b.add_edge(ends[0], ends[1]);
    }

    b.inputs = first.inputs();
    b.outputs.clear();
    for (VertexId o : second.outputs()) b.outputs.push_back(o + off);
    return b.build();
}

Diagram compose_parallel(const Diagram& a, const Diagram& b2) {
    DiagramBuilder b = a.to_builder();
    VertexId off = append_shifted(b, b2);
    for (VertexId v : b2.inputs()) b.inputs.push_back(v + off);
    for (VertexId v : b2.outputs()) b.outputs.push_back(v + off);
    return b.build();
}

}  // namespace rg
