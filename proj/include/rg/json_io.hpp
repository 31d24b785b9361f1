#pragma once

#include <string>
#include <vector>

#include "rg/diagram.hpp"
#include "rg/gates.hpp"
#include "rg/lattice.hpp"
#include "rg/measurement.hpp"
#include "rg/rewrite.hpp"
#include "rg/tensor.hpp"

namespace rg {

std::string diagram_to_json(const Diagram& d);
Diagram diagram_from_json(const std::string& text);

std::string trace_to_json(const Trace& t);
Trace trace_from_json(const std::string& text);

std::string tensor_to_json(const TensorMap& t);
TensorMap tensor_from_json(const std::string& text);

struct LatticeSpec {
    int nx = 1, ny = 1, nz = 1;
    Convention convention = Convention::RedCentre;
};
LatticeSpec lattice_spec_from_json(const std::string& text);
std::string lattice_spec_to_json(const LatticeSpec& s);

struct PatternFile {
    LatticeSpec lattice;
    DefectSpec defects;
    std::vector<LogicalOperatorSpec> logical_ops;
    OutcomeMode outcome_mode = OutcomeMode::AllPlus;
    std::uint64_t seed = 0;
    std::vector<std::pair<SiteCoordinate, int>> explicit_signs;
};
PatternFile pattern_from_json(const std::string& text);

std::vector<GateLibraryEntry> load_gate_library(const std::string& dir);

/// DOT text with stable node ordering by canonical labels.
std::string export_dot(const Diagram& d);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

}  // namespace rg
