#include <doctest.h>

#include <random>

#include "oracle.hpp"
#include "rg/gates.hpp"
#include "rg/rewrite.hpp"

using namespace rg;

namespace {

Diagram wire() { return wire_diagram(); }

Diagram hh_chain() {
    DiagramBuilder b;
    VertexId in = b.add_boundary();
    VertexId h1 = b.add_h();
    VertexId h2 = b.add_h();
    VertexId out = b.add_boundary();
    b.add_edge(in, h1);
    b.add_edge(h1, h2);
    b.add_edge(h2, out);
    b.inputs = {in};
    b.outputs = {out};
    return b.build();
}

// valid random diagram with spiders, boxes and boundaries
Diagram random_diagram(std::mt19937_64& rng, int max_spiders = 6, int max_boundaries = 4) {
    DiagramBuilder b;
    int n = static_cast<int>(rng() % static_cast<unsigned>(max_spiders)) + 1;
    std::vector<VertexId> spiders;
    for (int i = 0; i < n; ++i) {
        std::int64_t num = static_cast<std::int64_t>(rng() % 8);
        Phase p = (rng() % 3 == 0) ? Phase(num, 4) : ((rng() & 1) ? Phase::pi() : Phase::zero());
        spiders.push_back((rng() & 1) ? b.add_z(p) : b.add_x(p));
    }
    std::uniform_int_distribution<int> pick(0, n - 1);
    int nedges = static_cast<int>(rng() % static_cast<unsigned>(2 * n + 1));
    for (int i = 0; i < nedges; ++i) {
        VertexId u = spiders[static_cast<std::size_t>(pick(rng))];
        VertexId v = spiders[static_cast<std::size_t>(pick(rng))];
        switch (rng() % 4) {
            case 0: {
                VertexId h = b.add_h();
                b.add_edge(u, h);
                b.add_edge(h, v);
                break;
            }
            default:
                b.add_edge(u, v);
        }
    }
    int nb = static_cast<int>(rng() % static_cast<unsigned>(max_boundaries + 1));
    for (int i = 0; i < nb; ++i) {
        VertexId bd = b.add_boundary();
        b.add_edge(spiders[static_cast<std::size_t>(pick(rng))], bd);
        ((rng() & 1) ? b.inputs : b.outputs).push_back(bd);
    }
    return b.build();
}

}  // namespace

TEST_CASE("find_matches: adjacent same-colour spiders give one fuse match") {
    DiagramBuilder b;
    VertexId z1 = b.add_z();
    VertexId z2 = b.add_z();
    b.add_edge(z1, z2);
    VertexId o1 = b.add_boundary(), o2 = b.add_boundary();
    b.add_edge(z1, o1);
    b.add_edge(z2, o2);
    b.outputs = {o1, o2};
    auto ms = find_matches(b.build(), RuleId::SpiderFuse);
    REQUIRE(ms.size() == 1);
    CHECK(ms[0].anchors.size() == 2);
}

TEST_CASE("find_matches: H-H chain gives one cancel match, wire gives none") {
    auto ms = find_matches(hh_chain(), RuleId::HHCancel);
    CHECK(ms.size() == 1);
    for (RuleId r : {RuleId::SpiderFuse, RuleId::IdentityRemove, RuleId::HHCancel,
                     RuleId::ColorChange, RuleId::StateCopy, RuleId::PiCopy,
                     RuleId::SelfLoopRemove})
        CHECK(find_matches(wire(), r).empty());
}

TEST_CASE("apply: spider fusion adds phases") {
    DiagramBuilder b;
    VertexId z1 = b.add_z(Phase(1, 2));
    VertexId z2 = b.add_z(Phase(1, 4));
    b.add_edge(z1, z2);
    VertexId i = b.add_boundary(), o = b.add_boundary();
    b.add_edge(i, z1);
    b.add_edge(z2, o);
    b.inputs = {i};
    b.outputs = {o};
    Diagram d = b.build();
    auto ms = find_matches(d, RuleId::SpiderFuse);
    REQUIRE(ms.size() == 1);
    Diagram after = apply(d, ms[0]);
    int spiders = 0;
    for (const auto& [v, k] : after.vertices()) {
        if (k.is_spider()) {
            ++spiders;
            CHECK(k.phase == Phase(3, 4));
        }
    }
    CHECK(spiders == 1);
}

TEST_CASE("apply: parallel edges become self-loops on fusion") {
    DiagramBuilder b;
    VertexId z1 = b.add_z();
    VertexId z2 = b.add_z();
    b.add_edge(z1, z2);
    b.add_edge(z1, z2);
    Diagram d = b.build();
    auto ms = find_matches(d, RuleId::SpiderFuse);
    REQUIRE(ms.size() == 1);
    Diagram after = apply(d, ms[0]);
    CHECK(after.n_vertices() == 1);
    CHECK(after.n_edges() == 1);
    auto loops = find_matches(after, RuleId::SelfLoopRemove);
    REQUIRE(loops.size() == 1);
    Diagram clean = apply(after, loops[0]);
    CHECK(clean.n_edges() == 0);
}

TEST_CASE("apply: pi pushes through the opposite colour, copying to legs") {
    // X(pi) on the input wire of a phase-free green 1->2 spider
    DiagramBuilder b;
    VertexId in = b.add_boundary();
    VertexId x = b.add_x(Phase::pi());
    VertexId g = b.add_z();
    VertexId o1 = b.add_boundary(), o2 = b.add_boundary();
    b.add_edge(in, x);
    b.add_edge(x, g);
    b.add_edge(g, o1);
    b.add_edge(g, o2);
    b.inputs = {in};
    b.outputs = {o1, o2};
    Diagram d = b.build();
    auto ms = find_matches(d, RuleId::PiCopy);
    REQUIRE(ms.size() == 1);
    Diagram after = apply(d, ms[0]);
    int xpis = 0, greens = 0;
    for (const auto& [v, k] : after.vertices()) {
        if (k.type == VertexType::X && k.phase.is_pi()) ++xpis;
        if (k.type == VertexType::Z) ++greens;
    }
    CHECK(xpis == 2);
    CHECK(greens == 1);
    // each output wire now carries one X(pi)
    for (VertexId o : after.outputs()) {
        VertexId n = after.neighbors(o)[0];
        CHECK(after.kind(n).type == VertexType::X);
        CHECK(after.kind(n).phase.is_pi());
    }
}

TEST_CASE("apply: colour change turns the CZ pre-form into the normal form") {
    // green—(red with H on both outer wires) is the gate-equivalence shape;
    // flipping the red absorbs both boxes and inserts one on the inner wire
    DiagramBuilder b;
    VertexId i1 = b.add_boundary(), i2 = b.add_boundary();
    VertexId g = b.add_z();
    VertexId r = b.add_x();
    VertexId h1 = b.add_h(), h2 = b.add_h();
    VertexId o1 = b.add_boundary(), o2 = b.add_boundary();
    b.add_edge(i1, g);
    b.add_edge(g, o1);
    b.add_edge(g, r);
    b.add_edge(i2, h1);
    b.add_edge(h1, r);
    b.add_edge(r, h2);
    b.add_edge(h2, o2);
    b.inputs = {i1, i2};
    b.outputs = {o1, o2};
    Diagram d = b.build();

    Diagram flipped = apply(d, Match{RuleId::ColorChange, {r}});
    CHECK(isomorphic(flipped, cz_diagram()).isomorphic);
    CHECK(equiv_up_to_scalar(evaluate(flipped), evaluate(d), 1e-9).equivalent);
}

TEST_CASE("apply: stale matches are rejected") {
    Diagram d = hh_chain();
    auto ms = find_matches(d, RuleId::HHCancel);
    REQUIRE(ms.size() == 1);
    Diagram after = apply(d, ms[0]);
    CHECK_THROWS_AS(apply(after, ms[0]), MatchError);
}

TEST_CASE("every rule application preserves the tensor up to scalar") {
    std::mt19937_64 rng(101);
    int applied = 0;
    for (int i = 0; i < 120; ++i) {
        Diagram d = random_diagram(rng);
        TensorMap before;
        try {
            before = evaluate(d);
        } catch (const ResourceError&) {
            continue;
        }
        for (RuleId r : {RuleId::SpiderFuse, RuleId::IdentityRemove, RuleId::HHCancel,
                         RuleId::ColorChange, RuleId::StateCopy, RuleId::PiCopy,
                         RuleId::SelfLoopRemove}) {
            for (const Match& m : find_matches(d, r)) {
                Diagram after = apply(d, m);
                TensorMap ta;
                try {
                    ta = evaluate(after);
                } catch (const ResourceError&) {
                    continue;
                }
                ScalarEquivalence eq = equiv_up_to_scalar(ta, before, 1e-9);
                if (!eq.equivalent) {
                    CAPTURE(rule_name(r));
                    CAPTURE(eq.max_residual);
                }
                CHECK(eq.equivalent);
                ++applied;
            }
        }
    }
    CHECK(applied > 300);
}

TEST_CASE("normalize: H-H chain reduces to the wire") {
    NormalizeResult r = normalize(hh_chain());
    CHECK(isomorphic(r.diagram, wire()).isomorphic);
    CHECK(r.trace.steps.size() == 1);
}

TEST_CASE("normalize: already-normal CNOT is a fixed point") {
    NormalizeResult r = normalize(cnot_diagram());
    CHECK(r.trace.steps.empty());
    CHECK(canonically_equal(r.diagram, cnot_diagram()));
}

TEST_CASE("normalize is deterministic") {
    std::mt19937_64 rng(55);
    for (int i = 0; i < 30; ++i) {
        Diagram d = random_diagram(rng);
        NormalizeResult a = normalize(d);
        NormalizeResult b = normalize(d);
        CHECK(canonically_equal(a.diagram, b.diagram));
        REQUIRE(a.trace.steps.size() == b.trace.steps.size());
        for (std::size_t s = 0; s < a.trace.steps.size(); ++s) {
            CHECK(a.trace.steps[s].rule == b.trace.steps[s].rule);
            CHECK(a.trace.steps[s].anchors == b.trace.steps[s].anchors);
            CHECK(a.trace.steps[s].after_hash == b.trace.steps[s].after_hash);
        }
    }
}

TEST_CASE("normalize preserves the tensor") {
    std::mt19937_64 rng(77);
    for (int i = 0; i < 50; ++i) {
        Diagram d = random_diagram(rng, 5, 3);
        TensorMap before;
        try {
            before = evaluate(d);
        } catch (const ResourceError&) {
            continue;
        }
        NormalizeResult r = normalize(d);
        TensorMap after = evaluate(r.diagram);
        CHECK(equiv_up_to_scalar(after, before, 1e-9).equivalent);
    }
}

TEST_CASE("normalize trace keeps a contiguous hash chain and replays") {
    std::mt19937_64 rng(91);
    for (int i = 0; i < 20; ++i) {
        Diagram d = random_diagram(rng);
        NormalizeResult r = normalize(d);
        for (std::size_t s = 0; s + 1 < r.trace.steps.size(); ++s)
            CHECK(r.trace.steps[s].after_hash == r.trace.steps[s + 1].before_hash);
        Diagram replayed = replay(d, r.trace);
        CHECK(canonically_equal(replayed, r.diagram));
    }
}

TEST_CASE("replay: empty trace returns the input; wrong input fails at step 0") {
    Diagram d = hh_chain();
    Trace empty;
    CHECK(canonically_equal(replay(d, empty), d));

    NormalizeResult r = normalize(d);
    REQUIRE_FALSE(r.trace.steps.empty());
    try {
        replay(cnot_diagram(), r.trace);
        FAIL("expected ReplayError");
    } catch (const ReplayError& e) {
        CHECK(e.step_index == 0);
    }
}

TEST_CASE("normalize: colour duality") {
    std::mt19937_64 rng(123);
    for (int i = 0; i < 30; ++i) {
        Diagram d = random_diagram(rng);
        Diagram a = normalize(d.colour_swapped()).diagram;
        Diagram b = normalize(d).diagram.colour_swapped();
        CHECK(isomorphic(a, b).isomorphic);
    }
}

TEST_CASE("normalize: per-step measure bookkeeping") {
    // every non-PiCopy step drops the edge count or (for targeted colour
    // changes) the spider-H-spider bridge count; PiCopy steps only fire when
    // all landed copies fuse, and the net edge count returns below the
    // pre-push value once they do
    auto bridges = [](const Diagram& d) {
        std::size_t n = 0;
        for (const auto& [v, k] : d.vertices()) {
            if (!k.is_h()) continue;
            const auto& ns = d.neighbors(v);
            if (ns.size() == 2 && d.kind(ns[0]).is_spider() && d.kind(ns[1]).is_spider()) ++n;
        }
        return n;
    };
    std::mt19937_64 rng(131);
    for (int i = 0; i < 25; ++i) {
        Diagram d = random_diagram(rng);
        NormalizeResult r = normalize(d);
        Diagram cur = d;
        std::size_t pending_regain = 0;  // edges above baseline from pi pushes
        std::size_t baseline = cur.n_edges();
        for (const RewriteStep& s : r.trace.steps) {
            CanonicalForm form = canonical_form(cur);
            Match m;
            m.rule = s.rule;
            for (std::size_t l : s.anchors) m.anchors.push_back(form.order[l]);
            Diagram next = apply(cur, m);
            if (s.rule == RuleId::PiCopy) {
                pending_regain += next.n_edges() > cur.n_edges()
                                      ? next.n_edges() - cur.n_edges()
                                      : 0;
            } else if (s.rule == RuleId::ColorChange) {
                CHECK((next.n_edges() < cur.n_edges() || bridges(next) < bridges(cur)));
            } else {
                CHECK(next.n_edges() < cur.n_edges());
            }
            cur = next;
        }
        // termination netted out: the final form is never above the start
        CHECK(cur.n_edges() <= baseline + 0);
        (void)pending_regain;
    }
}

TEST_CASE("empirical confluence on shuffled priorities") {
    std::mt19937_64 rng(203);
    std::vector<RuleId> base = {RuleId::HHCancel,  RuleId::SelfLoopRemove, RuleId::StateCopy,
                                RuleId::SpiderFuse, RuleId::PiCopy,        RuleId::IdentityRemove};
    int mismatches = 0;
    for (int i = 0; i < 40; ++i) {
        Diagram d = random_diagram(rng, 6, 3);
        std::string want = canonical_form(normalize(d).diagram).certificate;
        for (int s = 0; s < 4; ++s) {
            NormalizePolicy p = NormalizePolicy::shrink();
            std::shuffle(p.priority.begin(), p.priority.end(), rng);
            std::string got = canonical_form(normalize(d, p).diagram).certificate;
            if (got != want) ++mismatches;
        }
    }
    CHECK(mismatches == 0);
}
