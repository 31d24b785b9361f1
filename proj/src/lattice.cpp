#include "rg/lattice.hpp"

#include <algorithm>
#include <queue>
#include <set>

namespace rg {

SiteClass classify_site(const SiteCoordinate& c, Convention conv) {
    if (!is_site(c)) throw InputError("not a qubit site: odd-coordinate count must be 1 or 2");
    bool primal = is_primal_face(c);
    Colour centre = conv == Convention::RedCentre ? Colour::Red : Colour::Green;
    Colour other = conv == Convention::RedCentre ? Colour::Green : Colour::Red;
    return {primal ? Sublattice::Primal : Sublattice::Dual, primal ? centre : other};
}

int ClusterBuild::site_index(const SiteCoordinate& c) const {
    auto it = site_at.find(c);
    if (it == site_at.end())
        throw InputError("no site at (" + std::to_string(c.x) + "," + std::to_string(c.y) + "," +
                         std::to_string(c.z) + ")");
    return it->second;
}

namespace {

// Assembles the diagram for given classes: flipped sites become X-spiders
// with an H on the time leg; site-site edges of an uncoloured build pass
// through an H, edges of a coloured build are plain (bipartite input).
void assemble(ClusterBuild& b, const std::vector<bool>& flipped, bool coloured) {
    DiagramBuilder db;
    std::size_t n = b.centre_class.size();
    b.site_spiders.assign(n, 0);
    b.time_legs.assign(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
        bool f = coloured && flipped[i];
        VertexId s = db.add_vertex(f ? VertexKind::x() : VertexKind::z());
        VertexId leg = db.add_boundary();
        if (f) {
            VertexId h = db.add_h();
            db.add_edge(s, h);
            db.add_edge(h, leg);
        } else {
            db.add_edge(s, leg);
        }
        db.outputs.push_back(leg);
        b.site_spiders[i] = s;
        b.time_legs[i] = leg;
    }
    for (const auto& [i, j] : b.site_edges) {
        VertexId u = b.site_spiders[static_cast<std::size_t>(i)];
        VertexId v = b.site_spiders[static_cast<std::size_t>(j)];
        bool fi = coloured && flipped[static_cast<std::size_t>(i)];
        bool fj = coloured && flipped[static_cast<std::size_t>(j)];
        if (!coloured || fi == fj) {
            VertexId h = db.add_h();
            db.add_edge(u, h);
            db.add_edge(h, v);
        } else {
            db.add_edge(u, v);
        }
    }
    b.diagram = db.build();
}

std::vector<bool> bipartition(std::size_t n, const std::vector<std::pair<int, int>>& edges) {
    std::vector<std::vector<int>> adj(n);
    for (const auto& [i, j] : edges) {
        adj[static_cast<std::size_t>(i)].push_back(j);
        adj[static_cast<std::size_t>(j)].push_back(i);
    }
    std::vector<int> side(n, -1);
    for (std::size_t root = 0; root < n; ++root) {
        if (side[root] != -1) continue;
        side[root] = 1;  // smallest label of each component is centre class
        std::queue<int> q;
        q.push(static_cast<int>(root));
        while (!q.empty()) {
            int v = q.front();
            q.pop();
            for (int u : adj[static_cast<std::size_t>(v)]) {
                if (side[static_cast<std::size_t>(u)] == -1) {
                    side[static_cast<std::size_t>(u)] = 1 - side[static_cast<std::size_t>(v)];
                    q.push(u);
                } else if (side[static_cast<std::size_t>(u)] == side[static_cast<std::size_t>(v)]) {
                    throw InputError("site graph is not two-colourable (odd cycle)");
                }
            }
        }
    }
    std::vector<bool> centre(n);
    for (std::size_t i = 0; i < n; ++i) centre[i] = side[i] == 1;
    return centre;
}

}  // namespace

ClusterBuild build_graph_state(std::size_t n_qubits,
                               const std::vector<std::pair<int, int>>& adjacency) {
    if (n_qubits == 0) throw InputError("graph state needs at least one qubit");
    std::set<std::pair<int, int>> seen;
    for (auto [i, j] : adjacency) {
        if (i == j) throw InputError("graph state adjacency has a self-loop");
        if (i < 0 || j < 0 || static_cast<std::size_t>(i) >= n_qubits ||
            static_cast<std::size_t>(j) >= n_qubits)
            throw InputError("graph state adjacency refers to unknown qubit");
        auto norm = std::minmax(i, j);
        if (!seen.insert({norm.first, norm.second}).second)
            throw InputError("graph state adjacency has a duplicate edge");
    }
    ClusterBuild b;
    b.site_edges = adjacency;
    b.centre_class.assign(n_qubits, false);
    assemble(b, b.centre_class, false);
    return b;
}

ClusterBuild two_colour(const ClusterBuild& build, Convention conv) {
    ClusterBuild b = build;
    if (b.coords.empty()) {
        b.centre_class = bipartition(b.centre_class.size(), b.site_edges);
    } else {
        for (std::size_t i = 0; i < b.coords.size(); ++i)
            b.centre_class[i] = is_primal_face(b.coords[i]);
    }
    std::vector<bool> flipped(b.centre_class.size());
    for (std::size_t i = 0; i < flipped.size(); ++i)
        flipped[i] = conv == Convention::RedCentre ? b.centre_class[i] : !b.centre_class[i];
    b.convention = conv;
    assemble(b, flipped, true);
    return b;
}

ClusterBuild build_unit_cell(Convention conv) { return tile_lattice(1, 1, 1, conv); }

ClusterBuild tile_lattice(int nx, int ny, int nz, Convention conv, const LatticeOptions& opts) {
    if (nx < 1 || ny < 1 || nz < 1) throw InputError("lattice needs at least one cell per axis");
    ClusterBuild b;
    for (int x = 0; x <= 2 * nx; ++x)
        for (int y = 0; y <= 2 * ny; ++y)
            for (int z = 0; z <= 2 * nz; ++z) {
                SiteCoordinate c{x, y, z};
                if (!is_site(c)) continue;
                if (b.coords.size() >= opts.site_cap)
                    throw ResourceError("lattice build exceeds site cap of " +
                                        std::to_string(opts.site_cap));
                b.site_at[c] = static_cast<int>(b.coords.size());
                b.coords.push_back(c);
            }
    for (std::size_t i = 0; i < b.coords.size(); ++i) {
        const SiteCoordinate& c = b.coords[i];
        for (const SiteCoordinate& n : {SiteCoordinate{c.x + 1, c.y, c.z},
                                        SiteCoordinate{c.x, c.y + 1, c.z},
                                        SiteCoordinate{c.x, c.y, c.z + 1}}) {
            auto it = b.site_at.find(n);
            if (it != b.site_at.end())
                b.site_edges.push_back({static_cast<int>(i), it->second});
        }
    }
    b.centre_class.assign(b.coords.size(), false);
    assemble(b, b.centre_class, false);
    return two_colour(b, conv);
}

}  // namespace rg
