#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rg/lattice.hpp"
#include "rg/rewrite.hpp"

namespace rg {

enum class Basis : std::uint8_t { Z, X, None };

/// One defect strand: a connected path of face sites on one sublattice
/// (consecutive sites are opposite faces of a shared cell, i.e. differ by
/// exactly 2 in one coordinate).
struct DefectStrand {
    Sublattice sublattice = Sublattice::Primal;
    std::vector<SiteCoordinate> path;
};

struct DefectSpec {
    std::vector<DefectStrand> strands;
    std::vector<std::pair<int, int>> pairs;  ///< strand indices forming double-defect qubits
};

struct LogicalOperatorSpec {
    enum class Kind { Ring, Chain };
    Kind kind = Kind::Ring;
    std::vector<SiteCoordinate> sites;  ///< each receives a Z(pi) insertion
};

enum class OutcomeMode { AllPlus, Seeded, Explicit };

struct MeasurementPattern {
    std::vector<Basis> basis;  ///< per site index
    std::vector<int> sign;     ///< per site, +1/-1; meaningful when measured
};

/// Derives the pattern for a defect spec: strand sites measure Z, the four
/// lattice neighbours of each strand end stay open as logical ports, and
/// everything else measures X. Outcomes come from the chosen mode.
MeasurementPattern make_pattern(const ClusterBuild& build, const DefectSpec& defects,
                                OutcomeMode mode = OutcomeMode::AllPlus,
                                std::uint64_t seed = 0,
                                const std::vector<std::pair<SiteCoordinate, int>>& explicit_signs = {});

/// Port site indices per logical qubit, in strand/pair order.
struct LogicalPorts {
    std::vector<int> in_sites;
    std::vector<int> out_sites;
};
std::vector<LogicalPorts> derive_ports(const ClusterBuild& build, const DefectSpec& defects);

/// Z-measures the defect sites: an X-spider effect (phase 0 for +1, pi for
/// -1) replaces each strand site's open leg, then the diagram normalizes,
/// which removes the carved sites.
Diagram carve_defects(const ClusterBuild& build, const DefectSpec& defects,
                      const MeasurementPattern& pattern,
                      const NormalizePolicy& policy = NormalizePolicy::shrink());

/// Splices a Z(pi) spider into each listed site's wire, next to the open
/// leg (before any measurement effect is attached).
Diagram insert_logical_operators(const Diagram& d, const std::vector<LogicalOperatorSpec>& ops,
                                 const ClusterBuild& build);

struct MeasureResult {
    Diagram diagram;
    Trace trace;
};

/// X-measures every Basis::X site: a Z-spider effect (phase by outcome sign)
/// replaces the open leg, then the diagram normalizes under the policy.
MeasureResult measure_bulk_x(const Diagram& d, const MeasurementPattern& pattern,
                             const ClusterBuild& build,
                             const NormalizePolicy& policy = NormalizePolicy::shrink());

struct CellParityViolation {
    Sublattice sublattice;
    SiteCoordinate origin;  ///< cell's minimal corner
};

/// Reports every complete cell (all six face sites present and X-measured)
/// whose outcome signs multiply to -1.
std::vector<CellParityViolation> parity_check(const ClusterBuild& build,
                                              const MeasurementPattern& pattern);

/// Full normalization of a post-measurement diagram.
NormalizeResult extract_logical(const Diagram& d,
                                const NormalizePolicy& policy = NormalizePolicy::shrink());

}  // namespace rg
