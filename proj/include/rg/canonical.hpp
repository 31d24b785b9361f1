#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "rg/diagram.hpp"

namespace rg {

/// Canonical labeling of a diagram. Isomorphism here is kind- and
/// phase-preserving graph isomorphism that fixes the boundary lists
/// pointwise. Equal certificates <=> isomorphic diagrams.
struct CanonicalForm {
    std::vector<VertexId> order;           ///< order[label] = vertex id
    std::map<VertexId, std::size_t> label; ///< inverse of order
    std::string certificate;
};

CanonicalForm canonical_form(const Diagram& d);

std::uint64_t canonical_hash(const Diagram& d);
std::string canonical_hash_hex(const Diagram& d);

inline bool canonically_equal(const Diagram& a, const Diagram& b) {
    return canonical_form(a).certificate == canonical_form(b).certificate;
}

struct IsoResult {
    bool isomorphic = false;
    std::map<VertexId, VertexId> witness;  ///< a-vertex -> b-vertex when isomorphic
};

IsoResult isomorphic(const Diagram& a, const Diagram& b);

std::uint64_t fnv1a64(const std::string& bytes);

}  // namespace rg
