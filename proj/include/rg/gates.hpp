#pragma once

#include <string>
#include <vector>

#include "rg/diagram.hpp"
#include "rg/tensor.hpp"

namespace rg {

/// Reference diagram constructors, all in normal form.
Diagram wire_diagram();
Diagram z_l_diagram();   ///< wire with one green pi spider
Diagram x_l_diagram();   ///< wire with one red pi spider
Diagram cnot_diagram();  ///< green control spider joined to red target spider
Diagram cz_diagram();    ///< two green spiders joined through one Hadamard

struct GateLibraryEntry {
    std::string name;
    Diagram diagram;
    TensorMap tensor;
};

std::vector<GateLibraryEntry> default_gate_library();

/// One logical port: several boundary legs that carry the same logical wire.
struct PortGroup {
    bool is_input = false;
    std::vector<VertexId> legs;  ///< boundary vertex ids in the diagram
};

/// Fuses each group's legs into one port: a fresh copy spider of the
/// attachment colour takes over the group's wires and exposes a single new
/// boundary. Grouped inputs precede ungrouped ones, in group order.
Diagram regroup_boundaries(const Diagram& d, const std::vector<PortGroup>& groups);

struct RecognitionOptions {
    double tol = 1e-9;
    std::size_t rank_cap = std::size_t{1} << 14;
};

struct Recognition {
    std::string name = "unrecognized";
    bool matched_structurally = false;
    bool matched_by_tensor = false;
    bool zero_scalar = false;  ///< diagram evaluates to zero (odd post-selection)
};

/// Regrouped, renormalized and junk-stripped form used for matching.
/// zero_scalar reports a leftover degree-0 pi spider (zero amplitude).
Diagram recognition_candidate(const Diagram& normal, const std::vector<PortGroup>& groups,
                              bool* zero_scalar = nullptr);

/// Matches the normalized, regrouped diagram against the library: first by
/// isomorphism, then by tensor equivalence within the rank cap.
Recognition recognize(const Diagram& normal, const std::vector<GateLibraryEntry>& library,
                      const std::vector<PortGroup>& groups, const RecognitionOptions& opts = {});

}  // namespace rg
