#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "specrad/graph.hpp"

#include <sstream>

using namespace specrad;
using namespace specrad::graph;

namespace {

fg::CoreAutomaton core_of(const char* gens, unsigned rank) {
    return fg::fold(fg::SubgroupSpec::parse(gens), rank);
}

void check_involution(const LabeledGraph& g) {
    for (VertexId v = 0; v < g.vertex_count(); ++v) {
        for (std::uint32_t s = 0; s < g.degree(); ++s) {
            if (!g.has_edge(v, s)) continue;
            EdgeRef e{v, s};
            EdgeRef r = g.reverse(e);
            REQUIRE(g.has_edge(r.v, r.slot));
            CHECK(g.reverse(r) == e);
            if (g.labeled()) {
                CHECK(fg::Letter(r.slot) == fg::Letter(s).inverse());
            }
            if (r == e) CHECK(g.is_half_loop(e));
        }
    }
}

}  // namespace

TEST_CASE("cayley ball sizes") {
    CHECK(cayley_ball(2, 0).vertex_count() == 1);
    CHECK(cayley_ball(2, 1).vertex_count() == 5);
    CHECK(cayley_ball(2, 2).vertex_count() == 17);  // 1 + 4 + 12
    CHECK(cayley_ball(1, 3).vertex_count() == 7);   // path of Z
    check_involution(cayley_ball(2, 3));
}

TEST_CASE("schreier ball of <a,b> in F3") {
    auto g = schreier_ball(core_of("a,b", 3), 3, 1);
    REQUIRE(g.vertex_count() == 3);  // root + two c-cosets
    // a, a^-1, b, b^-1 loop at the root
    for (unsigned c = 0; c < 4; ++c) CHECK(g.target(0, c) == 0);
    CHECK(g.target(0, 4) != 0);
    CHECK(g.target(0, 5) != 0);
    CHECK(g.target(0, 4) != g.target(0, 5));
    check_involution(g);
}

TEST_CASE("schreier ball of the trivial subgroup is the cayley ball") {
    auto sch = schreier_ball(core_of("", 2), 2, 4);
    auto cay = cayley_ball(2, 4);
    CHECK(sch == cay);
    CHECK(bfs_code(sch) == bfs_code(cay));
}

TEST_CASE("schreier ball of the full group is one vertex of loops") {
    auto g = schreier_ball(core_of("a,b", 2), 2, 5);
    CHECK(g.vertex_count() == 1);
    for (unsigned c = 0; c < 4; ++c) CHECK(g.target(0, c) == 0);
    auto space = schreier_space(core_of("a,b", 2), 2);
    CHECK(space.core_saturated());
}

TEST_CASE("vertex ids are stable under radius extension") {
    BallView b = schreier_space(core_of("aa,bb", 2), 2);
    b.ensure_radius(2);
    const auto snapshot = b.graph();
    b.ensure_radius(4);
    const auto& extended = b.graph();
    REQUIRE(extended.vertex_count() >= snapshot.vertex_count());
    for (VertexId v = 0; v < snapshot.vertex_count(); ++v) {
        CHECK(extended.depth(v) == snapshot.depth(v));
        for (std::uint32_t s = 0; s < snapshot.degree(); ++s) {
            if (snapshot.has_edge(v, s)) CHECK(extended.target(v, s) == snapshot.target(v, s));
        }
    }
}

TEST_CASE("lazy stepping agrees with word tracing") {
    BallView b = schreier_space(core_of("aa,bb", 2), 2);
    b.ensure_radius(1);
    // aa returns to the root coset, ab does not
    CHECK(b.trace(fg::Word::parse("aa")) == b.graph().root());
    CHECK(b.trace(fg::Word::parse("ab")) != b.graph().root());
    CHECK(b.vertex_word(b.trace(fg::Word::parse("a"))) == fg::Word::parse("a"));
}

TEST_CASE("finite graph loading") {
    SUBCASE("petersen") {
        auto g = petersen_graph();
        CHECK(g.vertex_count() == 10);
        CHECK(g.degree() == 3);
        CHECK(g.connected());
        CHECK(g.complete());
        check_involution(g);
    }
    SUBCASE("C5 from text") {
        std::istringstream in("vertices 5 degree 2\n0 1 1\n1 2 1\n2 3 1\n3 4 1\n4 0 1\n");
        auto g = load_finite_graph(in);
        CHECK(g.vertex_count() == 5);
        CHECK(g.degree() == 2);
        check_involution(g);
    }
    SUBCASE("non-regular input is rejected with the offending vertex") {
        // K4 minus an edge: vertices 0,1 have degree 2, vertices 2,3 degree 3
        std::istringstream in("vertices 4 degree 3\n0 2 1\n0 3 1\n1 2 1\n1 3 1\n2 3 1\n");
        CHECK_THROWS_WITH_AS(load_finite_graph(in), doctest::Contains("vertex"), std::invalid_argument);
    }
    SUBCASE("full loops count two toward the degree") {
        std::istringstream in("vertices 1 degree 4\n0 0 2\n");
        auto g = load_finite_graph(in);
        CHECK(g.vertex_count() == 1);
        CHECK(g.half_loop_count() == 0);
        check_involution(g);
    }
    SUBCASE("half loops count one") {
        std::istringstream in("vertices 1 degree 3\nloops half\n0 0 3\n");
        auto g = load_finite_graph(in);
        CHECK(g.half_loop_count() == 3);
        check_involution(g);
    }
    SUBCASE("round trip through serialization") {
        auto g = doubled_cycle_graph(4);
        std::string text = finite_graph_to_string(g);
        std::istringstream in(text);
        auto h = load_finite_graph(in);
        CHECK(multigraph_isomorphic(g, h));
    }
}

TEST_CASE("multigraph isomorphism") {
    CHECK(multigraph_isomorphic(petersen_graph(), petersen_graph()));
    // same degree and size, different structure: C6 vs two triangles
    auto c6 = cycle_graph(6);
    auto triangles = finite_from_pairs(6, 2, {{0, 1}, {1, 2}, {2, 0}, {3, 4}, {4, 5}, {5, 3}});
    CHECK(!multigraph_isomorphic(c6, triangles));
    CHECK(!triangles.connected());
    // relabeled petersen: rotate outer and inner rings
    std::vector<std::pair<VertexId, VertexId>> edges;
    auto rot = [](VertexId v) { return v < 5 ? (v + 2) % 5 : 5 + ((v - 5) + 2) % 5; };
    auto p = petersen_graph();
    for (VertexId v = 0; v < 10; ++v) {
        for (std::uint32_t s = 0; s < 3; ++s) {
            VertexId u = p.target(v, s);
            if (v < u) edges.emplace_back(rot(v), rot(u));
        }
    }
    CHECK(multigraph_isomorphic(p, finite_from_pairs(10, 3, edges)));
}

TEST_CASE("degree regularity of materialized balls") {
    auto g = schreier_ball(core_of("a,b", 3), 3, 3);
    for (VertexId v = 0; v < g.vertex_count(); ++v) {
        if (g.depth(v) == *g.ball_radius()) continue;
        for (std::uint32_t s = 0; s < g.degree(); ++s) CHECK(g.has_edge(v, s));
    }
    check_involution(g);
}
