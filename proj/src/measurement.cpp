#include "rg/measurement.hpp"

#include <algorithm>
#include <random>
#include <set>

namespace rg {

namespace {

std::string coord_str(const SiteCoordinate& c) {
    return "(" + std::to_string(c.x) + "," + std::to_string(c.y) + "," + std::to_string(c.z) + ")";
}

void validate_strand(const ClusterBuild& build, const DefectStrand& s) {
    if (s.path.empty()) throw InputError("defect strand has no sites");
    for (const SiteCoordinate& c : s.path) {
        build.site_index(c);  // throws when absent
        bool primal = is_primal_face(c);
        if ((s.sublattice == Sublattice::Primal) != primal)
            throw InputError("defect site " + coord_str(c) +
                             " is not a face site of the declared sublattice");
    }
    for (std::size_t i = 0; i + 1 < s.path.size(); ++i) {
        const SiteCoordinate& a = s.path[i];
        const SiteCoordinate& b = s.path[i + 1];
        int dx = std::abs(a.x - b.x), dy = std::abs(a.y - b.y), dz = std::abs(a.z - b.z);
        bool step = (dx == 2 && dy == 0 && dz == 0) || (dx == 0 && dy == 2 && dz == 0) ||
                    (dx == 0 && dy == 0 && dz == 2);
        if (!step)
            throw InputError("defect strand not connected: " + coord_str(a) + " -> " + coord_str(b));
    }
}

std::vector<int> strand_site_indices(const ClusterBuild& build, const DefectSpec& defects) {
    std::vector<int> out;
    for (const DefectStrand& s : defects.strands) {
        validate_strand(build, s);
        for (const SiteCoordinate& c : s.path) out.push_back(build.site_index(c));
    }
    return out;
}

// The four in-lattice neighbours of a strand-end face.
std::vector<int> arm_sites(const ClusterBuild& build, const SiteCoordinate& c) {
    std::vector<int> out;
    for (const SiteCoordinate& n :
         {SiteCoordinate{c.x - 1, c.y, c.z}, SiteCoordinate{c.x + 1, c.y, c.z},
          SiteCoordinate{c.x, c.y - 1, c.z}, SiteCoordinate{c.x, c.y + 1, c.z},
          SiteCoordinate{c.x, c.y, c.z - 1}, SiteCoordinate{c.x, c.y, c.z + 1}}) {
        auto it = build.site_at.find(n);
        if (it != build.site_at.end()) out.push_back(it->second);
    }
    return out;
}

// Port sites for one strand end. An end face lying in a lattice boundary
// plane keeps its perpendicular in-plane arms open; an end face one step
// inside ports through the half-open boundary cell instead: the four
// same-sublattice faces diagonally beyond the end.
std::vector<int> end_ports(const ClusterBuild& build, const SiteCoordinate& f,
                           const SiteCoordinate& inward) {
    SiteCoordinate d{f.x - inward.x, f.y - inward.y, f.z - inward.z};  // outward, length 2
    SiteCoordinate cont{f.x + d.x, f.y + d.y, f.z + d.z};
    bool cont_inside = build.site_at.count(cont) > 0;
    if (!cont_inside) {
        SiteCoordinate half{f.x + d.x / 2, f.y + d.y / 2, f.z + d.z / 2};
        bool half_inside = half.x >= 0 && half.y >= 0 && half.z >= 0;
        int mx = 0, my = 0, mz = 0;
        for (const SiteCoordinate& c : build.coords) {
            mx = std::max(mx, c.x);
            my = std::max(my, c.y);
            mz = std::max(mz, c.z);
        }
        half_inside = half_inside && half.x <= mx && half.y <= my && half.z <= mz;
        if (half_inside) {
            std::vector<int> out;
            for (const SiteCoordinate& n : {SiteCoordinate{half.x - 1, half.y, half.z},
                                            SiteCoordinate{half.x + 1, half.y, half.z},
                                            SiteCoordinate{half.x, half.y - 1, half.z},
                                            SiteCoordinate{half.x, half.y + 1, half.z},
                                            SiteCoordinate{half.x, half.y, half.z - 1},
                                            SiteCoordinate{half.x, half.y, half.z + 1}}) {
                if (n == f) continue;
                auto it = build.site_at.find(n);
                if (it != build.site_at.end()) out.push_back(it->second);
            }
            return out;
        }
    }
    return arm_sites(build, f);
}

// Replaces an open leg (boundary vertex) with an effect spider in-place.
void attach_effect(DiagramBuilder& b, VertexId leg, VertexType colour, int sign) {
    auto it = b.vertices.find(leg);
    if (it == b.vertices.end() || !it->second.is_boundary())
        throw InputError("site leg " + std::to_string(leg) + " is not an open boundary");
    it->second = {colour, sign < 0 ? Phase::pi() : Phase::zero()};
    b.inputs.erase(std::remove(b.inputs.begin(), b.inputs.end(), leg), b.inputs.end());
    b.outputs.erase(std::remove(b.outputs.begin(), b.outputs.end(), leg), b.outputs.end());
}

}  // namespace

std::vector<LogicalPorts> derive_ports(const ClusterBuild& build, const DefectSpec& defects) {
    std::vector<bool> paired(defects.strands.size(), false);
    std::vector<LogicalPorts> ports;
    auto add_for = [&](const std::vector<std::size_t>& strands) {
        LogicalPorts p;
        for (std::size_t si : strands) {
            const auto& path = defects.strands[si].path;
            SiteCoordinate front = path.front();
            SiteCoordinate back = path.back();
            SiteCoordinate front_in = path.size() > 1 ? path[1] : SiteCoordinate{front.x, front.y,
                                                                                 front.z + 2};
            SiteCoordinate back_in = path.size() > 1 ? path[path.size() - 2]
                                                     : SiteCoordinate{back.x, back.y, back.z - 2};
            for (int a : end_ports(build, front, front_in)) p.in_sites.push_back(a);
            for (int a : end_ports(build, back, back_in)) p.out_sites.push_back(a);
        }
        // paired strands may share arm sites
        auto dedupe = [](std::vector<int>& v) {
            std::sort(v.begin(), v.end());
            v.erase(std::unique(v.begin(), v.end()), v.end());
        };
        dedupe(p.in_sites);
        dedupe(p.out_sites);
        ports.push_back(std::move(p));
    };
    for (auto [i, j] : defects.pairs) {
        if (i < 0 || j < 0 || static_cast<std::size_t>(i) >= defects.strands.size() ||
            static_cast<std::size_t>(j) >= defects.strands.size())
            throw InputError("defect pair refers to unknown strand");
        paired[static_cast<std::size_t>(i)] = paired[static_cast<std::size_t>(j)] = true;
        add_for({static_cast<std::size_t>(i), static_cast<std::size_t>(j)});
    }
    for (std::size_t i = 0; i < defects.strands.size(); ++i)
        if (!paired[i]) add_for({i});
    return ports;
}

MeasurementPattern make_pattern(const ClusterBuild& build, const DefectSpec& defects,
                                OutcomeMode mode, std::uint64_t seed,
                                const std::vector<std::pair<SiteCoordinate, int>>& explicit_signs) {
    MeasurementPattern p;
    p.basis.assign(build.n_sites(), Basis::X);
    p.sign.assign(build.n_sites(), +1);
    for (int s : strand_site_indices(build, defects)) p.basis[static_cast<std::size_t>(s)] = Basis::Z;
    for (const LogicalPorts& lp : derive_ports(build, defects)) {
        for (int s : lp.in_sites) p.basis[static_cast<std::size_t>(s)] = Basis::None;
        for (int s : lp.out_sites) p.basis[static_cast<std::size_t>(s)] = Basis::None;
    }
    switch (mode) {
        case OutcomeMode::AllPlus:
            break;
        case OutcomeMode::Seeded: {
            std::mt19937_64 rng(seed);
            for (std::size_t i = 0; i < p.sign.size(); ++i)
                if (p.basis[i] != Basis::None) p.sign[i] = (rng() & 1) ? -1 : +1;
            break;
        }
        case OutcomeMode::Explicit: {
            for (const auto& [c, sign] : explicit_signs) {
                int i = build.site_index(c);
                if (sign != 1 && sign != -1) throw InputError("outcome sign must be +1 or -1");
                p.sign[static_cast<std::size_t>(i)] = sign;
            }
            break;
        }
    }
    return p;
}

Diagram carve_defects(const ClusterBuild& build, const DefectSpec& defects,
                      const MeasurementPattern& pattern, const NormalizePolicy& policy) {
    if (pattern.basis.size() != build.n_sites())
        throw InputError("pattern does not cover the build");
    DiagramBuilder b = build.diagram.to_builder();
    for (int s : strand_site_indices(build, defects)) {
        std::size_t i = static_cast<std::size_t>(s);
        if (pattern.basis[i] != Basis::Z)
            throw InputError("defect site is not Z-measured in the pattern");
        attach_effect(b, build.time_legs[i], VertexType::X, pattern.sign[i]);
    }
    return normalize(b.build(), policy).diagram;
}

Diagram insert_logical_operators(const Diagram& d, const std::vector<LogicalOperatorSpec>& ops,
                                 const ClusterBuild& build) {
    DiagramBuilder b = d.to_builder();
    for (const LogicalOperatorSpec& op : ops) {
        for (const SiteCoordinate& c : op.sites) {
            int i = build.site_index(c);
            VertexId leg = build.time_legs[static_cast<std::size_t>(i)];
            auto it = b.vertices.find(leg);
            if (it == b.vertices.end() || !it->second.is_boundary())
                throw InputError("logical operator site " + coord_str(c) +
                                 " was carved away or is not open");
            // splice on the wire right at the open leg
            std::vector<VertexId> ns = b.neighbors(leg);
            if (ns.size() != 1) throw InputError("open leg is not a single wire");
            b.remove_edge_once(leg, ns[0]);
            VertexId w = b.add_z(Phase::pi());
            b.add_edge(ns[0], w);
            b.add_edge(w, leg);
        }
    }
    return b.build();
}

MeasureResult measure_bulk_x(const Diagram& d, const MeasurementPattern& pattern,
                             const ClusterBuild& build, const NormalizePolicy& policy) {
    if (pattern.basis.size() != build.n_sites())
        throw InputError("pattern does not cover the build");
    DiagramBuilder b = d.to_builder();
    for (std::size_t i = 0; i < pattern.basis.size(); ++i) {
        if (pattern.basis[i] != Basis::X) continue;
        attach_effect(b, build.time_legs[i], VertexType::Z, pattern.sign[i]);
    }
    NormalizeResult r = normalize(b.build(), policy);
    return {std::move(r.diagram), std::move(r.trace)};
}

std::vector<CellParityViolation> parity_check(const ClusterBuild& build,
                                              const MeasurementPattern& pattern) {
    if (pattern.basis.size() != build.n_sites())
        throw InputError("pattern does not cover the build");
    std::vector<CellParityViolation> out;
    if (build.coords.empty()) return out;
    int mx = 0, my = 0, mz = 0;
    for (const SiteCoordinate& c : build.coords) {
        mx = std::max(mx, c.x);
        my = std::max(my, c.y);
        mz = std::max(mz, c.z);
    }
    // cells of both sublattices: primal origins even, dual origins odd
    for (int ox = -1; ox + 2 <= mx + 1; ++ox)
        for (int oy = -1; oy + 2 <= my + 1; ++oy)
            for (int oz = -1; oz + 2 <= mz + 1; ++oz) {
                SiteCoordinate faces[6] = {{ox + 1, oy + 1, oz},     {ox + 1, oy + 1, oz + 2},
                                           {ox + 1, oy, oz + 1},     {ox + 1, oy + 2, oz + 1},
                                           {ox, oy + 1, oz + 1},     {ox + 2, oy + 1, oz + 1}};
                int prod = 1;
                bool complete = true;
                for (const SiteCoordinate& f : faces) {
                    auto it = build.site_at.find(f);
                    if (it == build.site_at.end() ||
                        pattern.basis[static_cast<std::size_t>(it->second)] != Basis::X) {
                        complete = false;
                        break;
                    }
                    prod *= pattern.sign[static_cast<std::size_t>(it->second)];
                }
                if (complete && prod < 0)
                    out.push_back({(ox & 1) ? Sublattice::Dual : Sublattice::Primal,
                                   SiteCoordinate{ox, oy, oz}});
            }
    return out;
}

NormalizeResult extract_logical(const Diagram& d, const NormalizePolicy& policy) {
    return normalize(d, policy);
}

}  // namespace rg
