#include "rg/rewrite.hpp"

#include <algorithm>
#include <set>

namespace rg {

const char* rule_name(RuleId r) {
    switch (r) {
        case RuleId::SpiderFuse: return "spider-fuse";
        case RuleId::IdentityRemove: return "identity-remove";
        case RuleId::HHCancel: return "hh-cancel";
        case RuleId::ColorChange: return "color-change";
        case RuleId::StateCopy: return "state-copy";
        case RuleId::PiCopy: return "pi-copy";
        case RuleId::SelfLoopRemove: return "self-loop-remove";
    }
    return "?";
}

std::optional<RuleId> rule_from_name(const std::string& name) {
    for (RuleId r : {RuleId::SpiderFuse, RuleId::IdentityRemove, RuleId::HHCancel,
                     RuleId::ColorChange, RuleId::StateCopy, RuleId::PiCopy,
                     RuleId::SelfLoopRemove}) {
        if (name == rule_name(r)) return r;
    }
    return std::nullopt;
}

namespace {

bool is_opposite(const VertexKind& a, const VertexKind& b) {
    return (a.type == VertexType::Z && b.type == VertexType::X) ||
           (a.type == VertexType::X && b.type == VertexType::Z);
}

bool copyable_phase(const Phase& p) { return p.is_zero() || p.is_pi(); }

// True when v's two edges are one self-loop.
bool is_loop_pair(const Diagram& d, VertexId v) {
    const auto& ns = d.neighbors(v);
    return ns.size() == 2 && ns[0] == v && ns[1] == v;
}

std::vector<Match> raw_matches(const Diagram& d, RuleId rule) {
    std::vector<Match> out;
    switch (rule) {
        case RuleId::SpiderFuse: {
            std::set<Edge> seen;
            for (const Edge& e : d.edges()) {
                if (e.first == e.second) continue;
                const VertexKind& a = d.kind(e.first);
                const VertexKind& b = d.kind(e.second);
                if (!a.is_spider() || a.type != b.type) continue;
                if (seen.insert(e).second) out.push_back({rule, {e.first, e.second}});
            }
            break;
        }
        case RuleId::IdentityRemove: {
            for (const auto& [v, k] : d.vertices()) {
                if (!k.is_spider() || !k.phase.is_zero()) continue;
                if (d.degree(v) != 2 || is_loop_pair(d, v)) continue;
                out.push_back({rule, {v}});
            }
            break;
        }
        case RuleId::HHCancel: {
            std::set<Edge> seen;
            for (const Edge& e : d.edges()) {
                if (e.first == e.second) continue;
                if (!d.kind(e.first).is_h() || !d.kind(e.second).is_h()) continue;
                if (seen.insert(e).second) out.push_back({rule, {e.first, e.second}});
            }
            break;
        }
        case RuleId::ColorChange: {
            for (const auto& [v, k] : d.vertices())
                if (k.is_spider()) out.push_back({rule, {v}});
            break;
        }
        case RuleId::StateCopy: {
            for (const auto& [v, k] : d.vertices()) {
                if (!k.is_spider() || d.degree(v) != 1 || !copyable_phase(k.phase)) continue;
                VertexId t = d.neighbors(v)[0];
                if (!d.kind(t).is_spider() || !is_opposite(k, d.kind(t))) continue;
                out.push_back({rule, {v, t}});
            }
            break;
        }
        case RuleId::PiCopy: {
            for (const auto& [v, k] : d.vertices()) {
                if (!k.is_spider() || !k.phase.is_pi() || d.degree(v) != 2) continue;
                if (is_loop_pair(d, v)) continue;
                const auto& ns = d.neighbors(v);
                std::set<VertexId> targets;
                for (VertexId t : ns) {
                    if (t == v || !d.has_vertex(t)) continue;
                    if (!d.kind(t).is_spider() || !is_opposite(k, d.kind(t))) continue;
                    // pushing through t needs v's other edge to end elsewhere
                    if (ns[0] == ns[1]) continue;
                    targets.insert(t);
                }
                for (VertexId t : targets) out.push_back({rule, {v, t}});
            }
            break;
        }
        case RuleId::SelfLoopRemove: {
            std::set<VertexId> seen;
            for (const Edge& e : d.edges()) {
                if (e.first != e.second || !d.kind(e.first).is_spider()) continue;
                if (seen.insert(e.first).second) out.push_back({rule, {e.first}});
            }
            break;
        }
    }
    return out;
}

void order_matches(std::vector<Match>& ms, const CanonicalForm& form) {
    auto key = [&form](const Match& m) {
        std::vector<std::size_t> k;
        k.reserve(m.anchors.size());
        for (VertexId v : m.anchors) k.push_back(form.label.at(v));
        return k;
    };
    // SpiderFuse/HHCancel anchors are an unordered pair; present min label first
    for (Match& m : ms) {
        if ((m.rule == RuleId::SpiderFuse || m.rule == RuleId::HHCancel) &&
            form.label.at(m.anchors[0]) > form.label.at(m.anchors[1]))
            std::swap(m.anchors[0], m.anchors[1]);
    }
    std::stable_sort(ms.begin(), ms.end(),
                     [&key](const Match& a, const Match& b) { return key(a) < key(b); });
}

void check(bool cond, const char* what) {
    if (!cond) throw MatchError(std::string("stale match: ") + what);
}

Diagram apply_spider_fuse(const Diagram& d, VertexId u, VertexId v) {
    check(d.has_vertex(u) && d.has_vertex(v) && u != v, "spider-fuse anchors");
    const VertexKind& ku = d.kind(u);
    const VertexKind& kv = d.kind(v);
    check(ku.is_spider() && ku.type == kv.type, "spider-fuse kinds");
    check(d.edge_multiplicity(u, v) > 0, "spider-fuse edge");
    DiagramBuilder b = d.to_builder();
    b.remove_edge_once(u, v);
    b.vertices[u].phase = ku.phase + kv.phase;
    for (auto& e : b.edges) {
        if (e.first == v) e.first = u;
        if (e.second == v) e.second = u;
        if (e.first > e.second) std::swap(e.first, e.second);
    }
    std::sort(b.edges.begin(), b.edges.end());
    b.vertices.erase(v);
    return b.build();
}

Diagram apply_identity_remove(const Diagram& d, VertexId v) {
    check(d.has_vertex(v), "identity anchor");
    const VertexKind& k = d.kind(v);
    check(k.is_spider() && k.phase.is_zero() && d.degree(v) == 2 && !is_loop_pair(d, v),
          "identity shape");
    auto ends = d.neighbors(v);
    DiagramBuilder b = d.to_builder();
    b.remove_vertex(v);
    b.add_edge(ends[0], ends[1]);
    return b.build();
}

Diagram apply_hh_cancel(const Diagram& d, VertexId h1, VertexId h2) {
    check(d.has_vertex(h1) && d.has_vertex(h2) && h1 != h2, "hh anchors");
    check(d.kind(h1).is_h() && d.kind(h2).is_h(), "hh kinds");
    check(d.edge_multiplicity(h1, h2) > 0, "hh edge");
    DiagramBuilder b = d.to_builder();
    b.remove_edge_once(h1, h2);
    auto other = [&b](VertexId h) {
        for (const Edge& e : b.edges) {
            if (e.first == h) return e.second;
            if (e.second == h) return e.first;
        }
        throw MatchError("stale match: hh wiring");
    };
    if (b.degree(h1) == 1 && other(h1) == h2) {
        // parallel pair: closed loop through two boxes, a scalar
        b.remove_vertex(h1);
        b.remove_vertex(h2);
        return b.build();
    }
    VertexId a = other(h1);
    VertexId c = other(h2);
    b.remove_vertex(h1);
    b.remove_vertex(h2);
    b.add_edge(a, c);
    return b.build();
}

Diagram apply_color_change(const Diagram& d, VertexId v) {
    check(d.has_vertex(v) && d.kind(v).is_spider(), "color-change anchor");
    DiagramBuilder b = d.to_builder();
    b.vertices[v] = b.vertices[v].colour_swapped();

    // classify incident edges first; self-loops (plain or through an H whose
    // both wires return to v) toggle twice and stay put
    std::vector<VertexId> absorb_h;
    std::vector<VertexId> insert_to;
    std::vector<Edge> insert_instances;
    for (const Edge& e : d.edges()) {
        VertexId x;
        if (e.first == v && e.second == v) continue;  // plain loop
        if (e.first == v) x = e.second;
        else if (e.second == v) x = e.first;
        else continue;
        if (d.kind(x).is_h()) {
            const auto& hn = d.neighbors(x);
            VertexId far = hn[0] == v ? hn[1] : hn[0];
            if (far == v && hn[0] == v && hn[1] == v) continue;  // H-loop on v
            absorb_h.push_back(x);
        } else {
            insert_instances.push_back(e);
            insert_to.push_back(x);
        }
    }
    std::set<VertexId> absorbed;
    for (VertexId h : absorb_h) {
        if (!absorbed.insert(h).second) continue;
        const auto& hn = d.neighbors(h);
        VertexId far = hn[0] == v ? hn[1] : hn[0];
        b.remove_vertex(h);
        b.add_edge(v, far);
    }
    for (std::size_t i = 0; i < insert_instances.size(); ++i) {
        b.remove_edge_once(insert_instances[i].first, insert_instances[i].second);
        VertexId h = b.add_h();
        b.add_edge(v, h);
        b.add_edge(h, insert_to[i]);
    }
    return b.build();
}

Diagram apply_state_copy(const Diagram& d, VertexId s, VertexId t) {
    check(d.has_vertex(s) && d.has_vertex(t), "state-copy anchors");
    const VertexKind& ks = d.kind(s);
    check(ks.is_spider() && d.degree(s) == 1 && copyable_phase(ks.phase), "state-copy state");
    check(d.kind(t).is_spider() && is_opposite(ks, d.kind(t)) && d.neighbors(s)[0] == t,
          "state-copy target");
    DiagramBuilder b = d.to_builder();
    std::vector<VertexId> legs;
    bool skipped_s = false;
    for (const Edge& e : d.edges()) {
        if (e.first != t && e.second != t) continue;
        if (e.first == t && e.second == t) continue;  // loops vanish with t
        VertexId x = e.first == t ? e.second : e.first;
        if (x == s && !skipped_s) {
            skipped_s = true;
            continue;
        }
        legs.push_back(x);
    }
    b.remove_vertex(s);
    b.remove_vertex(t);
    for (VertexId x : legs) {
        VertexId w = b.add_vertex({ks.type, ks.phase});
        b.add_edge(w, x);
    }
    return b.build();
}

Diagram apply_pi_copy(const Diagram& d, VertexId p, VertexId t) {
    check(d.has_vertex(p) && d.has_vertex(t) && p != t, "pi-copy anchors");
    const VertexKind& kp = d.kind(p);
    check(kp.is_spider() && kp.phase.is_pi() && d.degree(p) == 2 && !is_loop_pair(d, p),
          "pi-copy source");
    check(d.kind(t).is_spider() && is_opposite(kp, d.kind(t)), "pi-copy target");
    const auto& ns = d.neighbors(p);
    check(ns[0] == t || ns[1] == t, "pi-copy adjacency");
    check(ns[0] != ns[1], "pi-copy distinct far end");
    VertexId a = ns[0] == t ? ns[1] : ns[0];

    DiagramBuilder b = d.to_builder();
    // copies go on t's legs other than the pushed wire; loops toggle twice
    std::vector<Edge> targets;
    bool skipped_p = false;
    for (const Edge& e : d.edges()) {
        if (e.first != t && e.second != t) continue;
        if (e.first == t && e.second == t) continue;
        VertexId x = e.first == t ? e.second : e.first;
        if (x == p && !skipped_p) {
            skipped_p = true;
            continue;
        }
        targets.push_back(e);
    }
    b.remove_vertex(p);
    b.add_edge(a, t);
    b.vertices[t].phase = -b.vertices[t].phase;
    for (const Edge& e : targets) {
        VertexId x = e.first == t ? e.second : e.first;
        b.remove_edge_once(e.first, e.second);
        VertexId w = b.add_vertex({kp.type, Phase::pi()});
        b.add_edge(t, w);
        b.add_edge(w, x);
    }
    return b.build();
}

Diagram apply_self_loop_remove(const Diagram& d, VertexId v) {
    check(d.has_vertex(v) && d.kind(v).is_spider(), "self-loop anchor");
    check(d.edge_multiplicity(v, v) > 0, "self-loop presence");
    DiagramBuilder b = d.to_builder();
    b.remove_edge_once(v, v);
    return b.build();
}

// --- normalize machinery ---------------------------------------------------

bool pi_copy_all_fuse(const Diagram& d, VertexId p, VertexId t) {
    const VertexKind& kp = d.kind(p);
    bool skipped_p = false;
    for (const Edge& e : d.edges()) {
        if (e.first != t && e.second != t) continue;
        if (e.first == t && e.second == t) continue;
        VertexId x = e.first == t ? e.second : e.first;
        if (x == p && !skipped_p) {
            skipped_p = true;
            continue;
        }
        if (!d.has_vertex(x) || !d.kind(x).is_spider() || d.kind(x).type != kp.type) return false;
    }
    return true;
}

// Targeted ColorChange candidates under the policy.
std::vector<Match> absorb_matches(const Diagram& d) {
    std::vector<Match> out;
    for (const auto& [v, k] : d.vertices()) {
        if (!k.is_spider()) continue;
        std::size_t h_legs = 0, plain_legs = 0;
        for (const Edge& e : d.edges()) {
            VertexId x;
            if (e.first == v && e.second == v) continue;
            if (e.first == v) x = e.second;
            else if (e.second == v) x = e.first;
            else continue;
            if (d.kind(x).is_h()) {
                const auto& hn = d.neighbors(x);
                if (hn[0] == v && hn[1] == v) continue;  // H-loop
                ++h_legs;
            } else {
                ++plain_legs;
            }
        }
        if (h_legs > plain_legs) out.push_back({RuleId::ColorChange, {v}});
    }
    return out;
}

std::vector<Match> slide_matches(const Diagram& d) {
    std::vector<Match> out;
    for (const auto& [v, k] : d.vertices()) {
        if (!k.is_spider() || d.degree(v) != 2 || is_loop_pair(d, v)) continue;
        const auto& ns = d.neighbors(v);
        VertexId hside = 0;
        bool found = false;
        for (int i = 0; i < 2; ++i) {
            VertexId a = ns[static_cast<std::size_t>(i)];
            VertexId b2 = ns[static_cast<std::size_t>(1 - i)];
            if (d.kind(a).is_h() && d.kind(b2).is_boundary()) {
                hside = a;
                found = true;
                break;
            }
        }
        if (!found) continue;
        const auto& hn = d.neighbors(hside);
        VertexId far = hn[0] == v ? hn[1] : hn[0];
        if (far == v || !d.kind(far).is_spider()) continue;
        out.push_back({RuleId::ColorChange, {v}});
    }
    return out;
}

}  // namespace

std::vector<Match> find_matches(const Diagram& d, RuleId rule) {
    std::vector<Match> ms = raw_matches(d, rule);
    CanonicalForm form = canonical_form(d);
    order_matches(ms, form);
    return ms;
}

Diagram apply(const Diagram& d, const Match& m) {
    switch (m.rule) {
        case RuleId::SpiderFuse:
            check(m.anchors.size() == 2, "anchor count");
            return apply_spider_fuse(d, m.anchors[0], m.anchors[1]);
        case RuleId::IdentityRemove:
            check(m.anchors.size() == 1, "anchor count");
            return apply_identity_remove(d, m.anchors[0]);
        case RuleId::HHCancel:
            check(m.anchors.size() == 2, "anchor count");
            return apply_hh_cancel(d, m.anchors[0], m.anchors[1]);
        case RuleId::ColorChange:
            check(m.anchors.size() == 1, "anchor count");
            return apply_color_change(d, m.anchors[0]);
        case RuleId::StateCopy:
            check(m.anchors.size() == 2, "anchor count");
            return apply_state_copy(d, m.anchors[0], m.anchors[1]);
        case RuleId::PiCopy:
            check(m.anchors.size() == 2, "anchor count");
            return apply_pi_copy(d, m.anchors[0], m.anchors[1]);
        case RuleId::SelfLoopRemove:
            check(m.anchors.size() == 1, "anchor count");
            return apply_self_loop_remove(d, m.anchors[0]);
    }
    throw MatchError("unknown rule");
}

NormalizePolicy NormalizePolicy::shrink() {
    NormalizePolicy p;
    p.priority = {RuleId::HHCancel,  RuleId::SelfLoopRemove, RuleId::StateCopy,
                  RuleId::SpiderFuse, RuleId::PiCopy,        RuleId::IdentityRemove};
    return p;
}

NormalizePolicy NormalizePolicy::reduce() {
    NormalizePolicy p;
    p.priority = {RuleId::HHCancel, RuleId::SelfLoopRemove, RuleId::SpiderFuse};
    p.fuse_pendant_only = true;
    return p;
}

namespace {

std::string hash_hex_of(const CanonicalForm& form) {
    std::uint64_t h = fnv1a64(form.certificate);
    static const char* hex = "0123456789abcdef";
    std::string s(16, '0');
    for (int i = 15; i >= 0; --i) {
        s[static_cast<std::size_t>(i)] = hex[h & 0xf];
        h >>= 4;
    }
    return s;
}

}  // namespace

NormalizeResult normalize(const Diagram& d, const NormalizePolicy& policy) {
    NormalizeResult res;
    res.diagram = d;
    std::size_t steps = 0;
    CanonicalForm form = canonical_form(res.diagram);
    for (;;) {
        std::optional<Match> chosen;
        for (RuleId rule : policy.priority) {
            std::vector<Match> ms = raw_matches(res.diagram, rule);
            if (rule == RuleId::PiCopy && policy.pi_copy_guard) {
                std::erase_if(ms, [&](const Match& m) {
                    return !pi_copy_all_fuse(res.diagram, m.anchors[0], m.anchors[1]);
                });
            }
            if (rule == RuleId::SpiderFuse && policy.fuse_pendant_only) {
                std::erase_if(ms, [&](const Match& m) {
                    return res.diagram.degree(m.anchors[0]) != 1 &&
                           res.diagram.degree(m.anchors[1]) != 1;
                });
            }
            if (ms.empty()) continue;
            order_matches(ms, form);
            chosen = ms.front();
            break;
        }
        if (!chosen && policy.slide) {
            std::vector<Match> ms = slide_matches(res.diagram);
            if (!ms.empty()) {
                order_matches(ms, form);
                chosen = ms.front();
            }
        }
        if (!chosen && policy.absorb) {
            std::vector<Match> ms = absorb_matches(res.diagram);
            if (!ms.empty()) {
                order_matches(ms, form);
                chosen = ms.front();
            }
        }
        if (!chosen) return res;
        if (++steps > policy.budget)
            throw BudgetError("normalize exceeded step budget of " + std::to_string(policy.budget),
                              res);
        RewriteStep step;
        step.rule = chosen->rule;
        for (VertexId v : chosen->anchors) step.anchors.push_back(form.label.at(v));
        step.before_hash = hash_hex_of(form);
        res.diagram = apply(res.diagram, *chosen);
        form = canonical_form(res.diagram);
        step.after_hash = hash_hex_of(form);
        res.trace.steps.push_back(std::move(step));
    }
}

Diagram replay(const Diagram& d, const Trace& t) {
    Diagram cur = d;
    for (std::size_t i = 0; i < t.steps.size(); ++i) {
        const RewriteStep& s = t.steps[i];
        CanonicalForm form = canonical_form(cur);
        if (canonical_hash_hex(cur) != s.before_hash)
            throw ReplayError("replay hash mismatch at step " + std::to_string(i), i);
        Match m;
        m.rule = s.rule;
        for (std::size_t label : s.anchors) {
            if (label >= form.order.size())
                throw ReplayError("replay anchor out of range at step " + std::to_string(i), i);
            m.anchors.push_back(form.order[label]);
        }
        cur = apply(cur, m);
        if (canonical_hash_hex(cur) != s.after_hash)
            throw ReplayError("replay produced unexpected diagram at step " + std::to_string(i), i);
    }
    return cur;
}

}  // namespace rg
