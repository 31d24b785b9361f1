#pragma once

#include <optional>
#include <string>
#include <vector>

#include "rg/canonical.hpp"
#include "rg/diagram.hpp"

namespace rg {

/// The rule set. Bialgebra and Hopf are deliberately not members; the
/// fragment stays confluent without them and the normalizer relies on that.
enum class RuleId {
    SpiderFuse,
    IdentityRemove,
    HHCancel,
    ColorChange,
    StateCopy,
    PiCopy,
    SelfLoopRemove,
};

const char* rule_name(RuleId r);
std::optional<RuleId> rule_from_name(const std::string& name);

struct Match {
    RuleId rule;
    std::vector<VertexId> anchors;
};

struct RewriteStep {
    RuleId rule;
    std::vector<std::size_t> anchors;  ///< canonical labels in the pre-step diagram
    std::string before_hash;
    std::string after_hash;
};

struct Trace {
    std::vector<RewriteStep> steps;
};

/// All matches of the rule's left-hand side, ordered by canonical labels.
std::vector<Match> find_matches(const Diagram& d, RuleId rule);

/// Applies one match. Revalidates the match shape against d and throws
/// MatchError when stale; the result diagram is validated.
Diagram apply(const Diagram& d, const Match& m);

struct NormalizePolicy {
    std::vector<RuleId> priority;
    /// Auto PiCopy fires only when every landed copy fuses immediately
    /// (all other legs of the target are plain edges to spiders of the
    /// pushed colour). Unrestricted PiCopy stays available via apply().
    bool pi_copy_guard = true;
    /// Restrict SpiderFuse to pairs with a degree-1 endpoint.
    bool fuse_pendant_only = false;
    /// Targeted ColorChange: flip a spider whose incident H count strictly
    /// drops.
    bool absorb = true;
    /// Targeted ColorChange: degree-2 spider bridged through an H to a
    /// spider while its other leg is open; slides the H to the open side.
    bool slide = true;
    std::size_t budget = 1000000;

    /// Default full normalization.
    static NormalizePolicy shrink();
    /// Topology-preserving reduction: absorbs measurement pendants but
    /// keeps the site graph (no identity removal, no copies).
    static NormalizePolicy reduce();
};

struct NormalizeResult {
    Diagram diagram;
    Trace trace;
};

class BudgetError : public ResourceError {
public:
    BudgetError(std::string what, NormalizeResult partial)
        : ResourceError(std::move(what)), partial(std::move(partial)) {}
    NormalizeResult partial;
};

NormalizeResult normalize(const Diagram& d, const NormalizePolicy& policy = NormalizePolicy::shrink());

/// Deterministic re-application of a trace; anchors are canonical labels,
/// so any diagram with the matching before-hash replays.
Diagram replay(const Diagram& d, const Trace& t);

}  // namespace rg
