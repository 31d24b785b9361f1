#pragma once

#include <compare>
#include <map>
#include <optional>
#include <vector>

#include "rg/diagram.hpp"

namespace rg {

/// Doubled integer coordinates: one unit cell spans 2 in each axis. A qubit
/// site exists where exactly two coordinates are odd (face site) or exactly
/// one is odd (edge site); zero or three odd components are cell corners and
/// centres.
struct SiteCoordinate {
    int x = 0;
    int y = 0;
    int z = 0;
    auto operator<=>(const SiteCoordinate&) const = default;
};

inline int odd_count(const SiteCoordinate& c) {
    return (c.x & 1) + (c.y & 1) + (c.z & 1);
}
inline bool is_site(const SiteCoordinate& c) {
    int o = odd_count(c);
    return o == 1 || o == 2;
}
/// Face site of the primal sublattice (two odd coordinates).
inline bool is_primal_face(const SiteCoordinate& c) { return odd_count(c) == 2; }

enum class Sublattice { Primal, Dual };
enum class Colour { Red, Green };
enum class Convention { RedCentre, GreenCentre };

struct SiteClass {
    Sublattice sublattice;
    Colour colour;
};

/// Colour and sublattice are pure functions of coordinate parity. Under
/// red-centre, primal face sites are red; the dual classification is the
/// colour swap, offset by half a cell.
SiteClass classify_site(const SiteCoordinate& c, Convention conv);

/// A cluster-state diagram plus the site bookkeeping the measurement
/// pipeline needs. Sites are indexed 0..n-1; each has one spider and one
/// open time leg (an output boundary).
struct ClusterBuild {
    Diagram diagram;
    std::vector<VertexId> site_spiders;
    std::vector<VertexId> time_legs;
    std::vector<std::pair<int, int>> site_edges;  ///< site graph, index pairs
    std::vector<bool> centre_class;               ///< bipartition flag per site
    std::vector<SiteCoordinate> coords;           ///< empty for plain graph states
    std::map<SiteCoordinate, int> site_at;
    std::optional<Convention> convention;         ///< nullopt = uncoloured (all green)

    std::size_t n_sites() const { return site_spiders.size(); }
    int site_index(const SiteCoordinate& c) const;
};

/// Graph state over arbitrary qubit labels 0..n-1: a phase-free Z-spider per
/// qubit with one open leg, neighbours joined through one Hadamard box
/// (a CZ in normal form, fused into the state). Uncoloured.
ClusterBuild build_graph_state(std::size_t n_qubits,
                               const std::vector<std::pair<int, int>>& adjacency);

/// Two-colours the build: the centre class takes the convention's colour and
/// the recolouring moves Hadamards so that opposite-colour neighbours connect
/// plainly while recoloured sites carry an H on the time leg. Tensor is
/// unchanged up to scalar. Throws InputError when the site graph is not
/// bipartite.
ClusterBuild two_colour(const ClusterBuild& build, Convention conv);

struct LatticeOptions {
    std::size_t site_cap = 20000;
};

/// The 18-site cell: 6 face + 12 edge sites of one cube, faces joined to
/// their 4 surrounding edge sites.
ClusterBuild build_unit_cell(Convention conv = Convention::RedCentre);

/// nx*ny*nz cells with shared boundary sites deduplicated.
ClusterBuild tile_lattice(int nx, int ny, int nz, Convention conv = Convention::RedCentre,
                          const LatticeOptions& opts = {});

}  // namespace rg
