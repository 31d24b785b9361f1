#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "rg/errors.hpp"
#include "rg/phase.hpp"

namespace rg {

enum class VertexType : std::uint8_t { Z, X, H, B };

inline char vertex_type_char(VertexType t) {
    switch (t) {
        case VertexType::Z: return 'Z';
        case VertexType::X: return 'X';
        case VertexType::H: return 'H';
        case VertexType::B: return 'B';
    }
    return '?';
}

struct VertexKind {
    VertexType type = VertexType::Z;
    Phase phase{};  // meaningful for Z and X only

    static VertexKind z(Phase p = Phase::zero()) { return {VertexType::Z, p}; }
    static VertexKind x(Phase p = Phase::zero()) { return {VertexType::X, p}; }
    static VertexKind h() { return {VertexType::H, Phase::zero()}; }
    static VertexKind boundary() { return {VertexType::B, Phase::zero()}; }

    bool is_spider() const { return type == VertexType::Z || type == VertexType::X; }
    bool is_h() const { return type == VertexType::H; }
    bool is_boundary() const { return type == VertexType::B; }

    /// Z<->X with phase kept; H and B unchanged.
    VertexKind colour_swapped() const {
        if (type == VertexType::Z) return {VertexType::X, phase};
        if (type == VertexType::X) return {VertexType::Z, phase};
        return *this;
    }

    bool operator==(const VertexKind& o) const { return type == o.type && phase == o.phase; }
    bool operator!=(const VertexKind& o) const { return !(*this == o); }
};

using VertexId = std::uint32_t;

/// Unordered edge, stored with first <= second. Self-loops allowed.
using Edge = std::pair<VertexId, VertexId>;

inline Edge make_edge(VertexId a, VertexId b) { return a <= b ? Edge{a, b} : Edge{b, a}; }

struct Signature {
    std::size_t n_inputs = 0;
    std::size_t n_outputs = 0;
    bool operator==(const Signature& o) const {
        return n_inputs == o.n_inputs && n_outputs == o.n_outputs;
    }
    std::string str() const {
        return std::to_string(n_inputs) + "->" + std::to_string(n_outputs);
    }
};

struct Violation {
    std::string invariant;
    std::string detail;
};

class Diagram;

/// Mutable, unchecked diagram under construction. build() validates and
/// freezes into a Diagram. Vertex ids are handed out once and never reused.
class DiagramBuilder {
public:
    DiagramBuilder() = default;

    VertexId add_vertex(VertexKind k) {
        VertexId id = next_id++;
        vertices.emplace(id, k);
        return id;
    }
    VertexId add_z(Phase p = Phase::zero()) { return add_vertex(VertexKind::z(p)); }
    VertexId add_x(Phase p = Phase::zero()) { return add_vertex(VertexKind::x(p)); }
    VertexId add_h() { return add_vertex(VertexKind::h()); }
    VertexId add_boundary() { return add_vertex(VertexKind::boundary()); }

    void add_edge(VertexId a, VertexId b);
    /// Removes one instance of the edge; throws MatchError if absent.
    void remove_edge_once(VertexId a, VertexId b);
    /// Removes the vertex together with all incident edges and any
    /// occurrence in the boundary lists.
    void remove_vertex(VertexId v);

    std::size_t degree(VertexId v) const;
    /// Neighbor list with multiplicity; a self-loop lists v twice.
    std::vector<VertexId> neighbors(VertexId v) const;

    Diagram build() const;

    std::map<VertexId, VertexKind> vertices;
    std::vector<Edge> edges;  // kept sorted
    std::vector<VertexId> inputs;
    std::vector<VertexId> outputs;
    VertexId next_id = 0;
};

std::optional<Violation> validate(const DiagramBuilder& b);

/// Open undirected multigraph of spiders, Hadamard boxes and boundaries
/// with ordered boundary wires. Immutable once built; every operation
/// returns a new value.
class Diagram {
public:
    Diagram() = default;

    const std::map<VertexId, VertexKind>& vertices() const { return vertices_; }
    const std::vector<Edge>& edges() const { return edges_; }
    const std::vector<VertexId>& inputs() const { return inputs_; }
    const std::vector<VertexId>& outputs() const { return outputs_; }

    const VertexKind& kind(VertexId v) const;
    bool has_vertex(VertexId v) const { return vertices_.count(v) != 0; }

    std::size_t degree(VertexId v) const;
    /// Neighbors with multiplicity; a self-loop lists the vertex twice.
    const std::vector<VertexId>& neighbors(VertexId v) const;
    /// Number of edge instances between a and b (a==b counts loops).
    std::size_t edge_multiplicity(VertexId a, VertexId b) const;

    Signature signature() const { return {inputs_.size(), outputs_.size()}; }
    std::size_t n_vertices() const { return vertices_.size(); }
    std::size_t n_edges() const { return edges_.size(); }

    DiagramBuilder to_builder() const;

    /// Z<->X on every spider; wiring untouched.
    Diagram colour_swapped() const;

private:
    friend class DiagramBuilder;

    std::map<VertexId, VertexKind> vertices_;
    std::vector<Edge> edges_;
    std::vector<VertexId> inputs_;
    std::vector<VertexId> outputs_;
    VertexId next_id_ = 0;
    std::map<VertexId, std::vector<VertexId>> adjacency_;
};

/// Glues first's outputs to second's inputs pairwise in order.
/// Throws CompositionError on arity mismatch.
Diagram compose_sequential(const Diagram& first, const Diagram& second);

/// Disjoint union; boundary lists concatenate.
Diagram compose_parallel(const Diagram& a, const Diagram& b);

}  // namespace rg
