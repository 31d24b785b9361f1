#include <doctest.h>

#include <random>

#include "rg/canonical.hpp"
#include "rg/diagram.hpp"

using namespace rg;

namespace {

Diagram wire() {
    DiagramBuilder b;
    VertexId in = b.add_boundary();
    VertexId out = b.add_boundary();
    b.add_edge(in, out);
    b.inputs = {in};
    b.outputs = {out};
    return b.build();
}

Diagram h_gate() {
    DiagramBuilder b;
    VertexId in = b.add_boundary();
    VertexId h = b.add_h();
    VertexId out = b.add_boundary();
    b.add_edge(in, h);
    b.add_edge(h, out);
    b.inputs = {in};
    b.outputs = {out};
    return b.build();
}

// small random open diagram generator shared with other suites via copy
Diagram random_diagram(std::mt19937_64& rng, int max_spiders = 5, int max_boundaries = 3) {
    std::uniform_int_distribution<int> nspiders(1, max_spiders);
    std::uniform_int_distribution<int> coin(0, 1);
    DiagramBuilder b;
    int n = nspiders(rng);
    std::vector<VertexId> spiders;
    for (int i = 0; i < n; ++i) {
        Phase p(static_cast<std::int64_t>(rng() % 4), 2);
        spiders.push_back(coin(rng) ? b.add_z(p) : b.add_x(p));
    }
    std::uniform_int_distribution<int> pick(0, n - 1);
    int nedges = static_cast<int>(rng() % static_cast<unsigned>(2 * n));
    for (int i = 0; i < nedges; ++i) {
        VertexId u = spiders[static_cast<std::size_t>(pick(rng))];
        VertexId v = spiders[static_cast<std::size_t>(pick(rng))];
        b.add_edge(u, v);
    }
    int nb = static_cast<int>(rng() % static_cast<unsigned>(max_boundaries + 1));
    for (int i = 0; i < nb; ++i) {
        VertexId s = spiders[static_cast<std::size_t>(pick(rng))];
        VertexId bd = b.add_boundary();
        b.add_edge(s, bd);
        (coin(rng) ? b.inputs : b.outputs).push_back(bd);
    }
    return b.build();
}

}  // namespace

TEST_CASE("validate: empty diagram is ok") {
    DiagramBuilder b;
    CHECK_FALSE(validate(b).has_value());
}

TEST_CASE("validate: degree-3 Hadamard rejected") {
    DiagramBuilder b;
    VertexId h = b.add_h();
    VertexId z = b.add_z();
    b.add_edge(h, z);
    b.add_edge(h, z);
    b.add_edge(h, z);
    auto v = validate(b);
    REQUIRE(v.has_value());
    CHECK(v->invariant == "Hadamard degree = 2");
    CHECK_THROWS_AS(b.build(), ValidationError);
}

TEST_CASE("validate: single wire is ok") {
    DiagramBuilder b;
    VertexId in = b.add_boundary();
    VertexId out = b.add_boundary();
    b.add_edge(in, out);
    b.inputs = {in};
    b.outputs = {out};
    CHECK_FALSE(validate(b).has_value());
}

TEST_CASE("validate: boundary bookkeeping") {
    DiagramBuilder b;
    VertexId z = b.add_z();
    VertexId bd = b.add_boundary();
    b.add_edge(z, bd);

    SUBCASE("unlisted boundary") { CHECK(validate(b).has_value()); }
    SUBCASE("listed twice") {
        b.inputs = {bd};
        b.outputs = {bd};
        CHECK(validate(b).has_value());
    }
    SUBCASE("listed once is fine") {
        b.outputs = {bd};
        CHECK_FALSE(validate(b).has_value());
    }
    SUBCASE("boundary degree 2") {
        b.outputs = {bd};
        b.add_edge(z, bd);
        auto v = validate(b);
        REQUIRE(v.has_value());
        CHECK(v->invariant == "Boundary degree = 1");
    }
}

TEST_CASE("validate: degree-0 spiders are permitted") {
    DiagramBuilder b;
    b.add_z(Phase::pi());
    CHECK_FALSE(validate(b).has_value());
}

TEST_CASE("compose_sequential: wire after wire is a wire") {
    Diagram c = compose_sequential(wire(), wire());
    CHECK(isomorphic(c, wire()).isomorphic);
}

TEST_CASE("compose_sequential: arity mismatch reports both signatures") {
    Diagram w = wire();
    Diagram two = compose_parallel(w, w);
    CHECK_THROWS_WITH_AS(compose_sequential(w, two), doctest::Contains("1->1"), CompositionError);
}

TEST_CASE("compose_sequential: H then H gives the two-box chain") {
    Diagram c = compose_sequential(h_gate(), h_gate());
    int hs = 0;
    for (const auto& [v, k] : c.vertices()) hs += k.is_h();
    CHECK(hs == 2);
    CHECK(c.signature() == Signature{1, 1});
}

TEST_CASE("compose_sequential: closed circle from cup and cap is dropped") {
    // cap: 0 -> 2, cup: 2 -> 0; their composite is a scalar circle
    DiagramBuilder cap;
    VertexId c1 = cap.add_boundary();
    VertexId c2 = cap.add_boundary();
    cap.add_edge(c1, c2);
    cap.outputs = {c1, c2};
    DiagramBuilder cup;
    VertexId u1 = cup.add_boundary();
    VertexId u2 = cup.add_boundary();
    cup.add_edge(u1, u2);
    cup.inputs = {u1, u2};
    Diagram circle = compose_sequential(cap.build(), cup.build());
    CHECK(circle.n_vertices() == 0);
    CHECK(circle.n_edges() == 0);
}

TEST_CASE("compose_parallel basics") {
    Diagram two = compose_parallel(wire(), wire());
    CHECK(two.signature() == Signature{2, 2});
    CHECK(two.n_edges() == 2);

    Diagram empty;
    {
        DiagramBuilder b;
        empty = b.build();
    }
    Diagram d = h_gate();
    CHECK(isomorphic(compose_parallel(empty, d), d).isomorphic);
    CHECK(isomorphic(compose_parallel(d, empty), d).isomorphic);
}

TEST_CASE("composition is associative up to isomorphism") {
    std::mt19937_64 rng(11);
    for (int i = 0; i < 40; ++i) {
        Diagram a = random_diagram(rng);
        Diagram b = random_diagram(rng);
        Diagram c = random_diagram(rng);
        CHECK(isomorphic(compose_parallel(compose_parallel(a, b), c),
                         compose_parallel(a, compose_parallel(b, c)))
                  .isomorphic);
        // sequential associativity on arity-compatible wire stacks
        Diagram w = wire();
        Diagram s1 = compose_sequential(compose_sequential(w, w), w);
        Diagram s2 = compose_sequential(w, compose_sequential(w, w));
        CHECK(isomorphic(s1, s2).isomorphic);
    }
}

TEST_CASE("sequential associativity on random 1->1 diagrams") {
    std::mt19937_64 rng(13);
    auto chain = [&rng]() {
        DiagramBuilder b;
        VertexId in = b.add_boundary();
        VertexId prev = in;
        int n = static_cast<int>(rng() % 3) + 1;
        for (int i = 0; i < n; ++i) {
            VertexId s = (rng() & 1) ? b.add_z(Phase(static_cast<std::int64_t>(rng() % 4), 2))
                                     : b.add_x(Phase(static_cast<std::int64_t>(rng() % 4), 2));
            b.add_edge(prev, s);
            prev = s;
        }
        VertexId out = b.add_boundary();
        b.add_edge(prev, out);
        b.inputs = {in};
        b.outputs = {out};
        return b.build();
    };
    for (int i = 0; i < 40; ++i) {
        Diagram a = chain(), b = chain(), c = chain();
        Diagram l = compose_sequential(compose_sequential(a, b), c);
        Diagram r = compose_sequential(a, compose_sequential(b, c));
        CHECK(isomorphic(l, r).isomorphic);
    }
}
