#include <doctest.h>

#include <map>
#include <random>

#include "rg/canonical.hpp"
#include "rg/gates.hpp"

using namespace rg;

namespace {

// relabel vertex ids through a random permutation
Diagram relabel(const Diagram& d, std::mt19937_64& rng) {
    std::vector<VertexId> ids;
    for (const auto& [v, k] : d.vertices()) ids.push_back(v);
    std::vector<VertexId> shuffled = ids;
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    std::map<VertexId, VertexId> to;
    for (std::size_t i = 0; i < ids.size(); ++i) to[ids[i]] = shuffled[i] + 100;
    DiagramBuilder b;
    for (const auto& [v, k] : d.vertices()) b.vertices.emplace(to[v], k);
    for (const Edge& e : d.edges()) b.add_edge(to[e.first], to[e.second]);
    for (VertexId v : d.inputs()) b.inputs.push_back(to[v]);
    for (VertexId v : d.outputs()) b.outputs.push_back(to[v]);
    b.next_id = 1000;
    return b.build();
}

}  // namespace

TEST_CASE("relabeled CNOT hashes equal") {
    std::mt19937_64 rng(3);
    Diagram c = cnot_diagram();
    for (int i = 0; i < 10; ++i) {
        Diagram r = relabel(c, rng);
        CHECK(canonical_hash(c) == canonical_hash(r));
        auto iso = isomorphic(c, r);
        REQUIRE(iso.isomorphic);
        // witness preserves kinds and boundary positions
        for (const auto& [a, b] : iso.witness) CHECK(c.kind(a) == r.kind(b));
        for (std::size_t i2 = 0; i2 < c.inputs().size(); ++i2)
            CHECK(iso.witness.at(c.inputs()[i2]) == r.inputs()[i2]);
    }
}

TEST_CASE("CNOT and CZ hash differently") {
    CHECK(canonical_hash(cnot_diagram()) != canonical_hash(cz_diagram()));
    CHECK_FALSE(isomorphic(cnot_diagram(), cz_diagram()).isomorphic);
}

TEST_CASE("single-vertex colour distinction") {
    DiagramBuilder a, b;
    a.add_z(Phase::pi());
    b.add_x(Phase::pi());
    CHECK(canonical_hash(a.build()) != canonical_hash(b.build()));
}

TEST_CASE("boundary order is significant") {
    auto two_wires = [](bool crossed) {
        DiagramBuilder b;
        VertexId i1 = b.add_boundary(), i2 = b.add_boundary();
        VertexId o1 = b.add_boundary(), o2 = b.add_boundary();
        b.add_edge(i1, crossed ? o2 : o1);
        b.add_edge(i2, crossed ? o1 : o2);
        b.inputs = {i1, i2};
        b.outputs = {o1, o2};
        return b.build();
    };
    CHECK_FALSE(isomorphic(two_wires(false), two_wires(true)).isomorphic);
    CHECK(canonical_hash(two_wires(false)) != canonical_hash(two_wires(true)));
}

TEST_CASE("hash equality coincides with isomorphism on small diagram space") {
    // enumerate closed diagrams over <= 3 spiders with multiplicity-2 edges
    std::vector<VertexKind> kinds = {VertexKind::z(), VertexKind::z(Phase::pi()),
                                     VertexKind::x()};
    std::vector<Diagram> all;
    for (std::size_t n = 1; n <= 3; ++n) {
        std::vector<std::pair<std::size_t, std::size_t>> slots;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i; j < n; ++j) slots.push_back({i, j});
        std::size_t kind_combos = 1;
        for (std::size_t i = 0; i < n; ++i) kind_combos *= kinds.size();
        std::size_t edge_combos = 1;
        for (std::size_t i = 0; i < slots.size(); ++i) edge_combos *= 3;  // 0,1,2 copies
        if (edge_combos > 800) edge_combos = 800;
        for (std::size_t kc = 0; kc < kind_combos; ++kc) {
            for (std::size_t ec = 0; ec < edge_combos; ++ec) {
                DiagramBuilder b;
                std::vector<VertexId> vs;
                std::size_t k = kc;
                for (std::size_t i = 0; i < n; ++i) {
                    vs.push_back(b.add_vertex(kinds[k % kinds.size()]));
                    k /= kinds.size();
                }
                std::size_t e = ec;
                for (auto [i, j] : slots) {
                    std::size_t copies = e % 3;
                    e /= 3;
                    for (std::size_t c = 0; c < copies; ++c) b.add_edge(vs[i], vs[j]);
                }
                all.push_back(b.build());
            }
        }
    }
    std::mt19937_64 rng(17);
    std::size_t equal_hash = 0;
    for (std::size_t i = 0; i < all.size(); ++i) {
        // hash-equal pairs must be isomorphic (check against a sample and
        // against own relabelings)
        Diagram r = relabel(all[i], rng);
        CHECK(canonical_hash(all[i]) == canonical_hash(r));
        for (std::size_t j = i + 1; j < std::min(all.size(), i + 60); ++j) {
            bool same_hash = canonical_hash(all[i]) == canonical_hash(all[j]);
            bool iso = isomorphic(all[i], all[j]).isomorphic;
            CHECK(same_hash == iso);
            equal_hash += same_hash;
        }
    }
    CHECK(all.size() > 500);
    (void)equal_hash;
}

TEST_CASE("symmetric components canonicalize") {
    // several identical disconnected spiders plus a ring
    DiagramBuilder b;
    for (int i = 0; i < 6; ++i) b.add_z();
    std::vector<VertexId> ring;
    for (int i = 0; i < 6; ++i) ring.push_back(i % 2 ? b.add_z() : b.add_x());
    for (int i = 0; i < 6; ++i) b.add_edge(ring[static_cast<std::size_t>(i)],
                                           ring[static_cast<std::size_t>((i + 1) % 6)]);
    Diagram d = b.build();
    std::mt19937_64 rng(23);
    Diagram r = relabel(d, rng);
    CHECK(canonical_hash(d) == canonical_hash(r));
    CHECK(isomorphic(d, r).isomorphic);
}
