#include "doctest.h"
#include "qwalk/graph.hpp"
#include "qwalk/io.hpp"

using namespace qwalk;

TEST_CASE("add_edge stores Hermitian pairs") {
    Graph g(2);
    g.add_edge(0, 1, Weight::One);
    auto a = g.adjacency();
    CHECK(a(0, 1) == cplx(1, 0));
    CHECK(a(1, 0) == cplx(1, 0));

    Graph h(2);
    h.add_edge(0, 1, Weight::PlusI);
    a = h.adjacency();
    CHECK(a(0, 1) == cplx(0, 1));
    CHECK(a(1, 0) == cplx(0, -1));
    CHECK(h.weight(1, 0) == Weight::MinusI);
}

TEST_CASE("add_edge rejects self-loops and duplicates") {
    Graph g(3);
    CHECK_THROWS_AS(g.add_edge(0, 0, Weight::One), ValidationError);
    g.add_edge(0, 1, Weight::One);
    CHECK_THROWS_AS(g.add_edge(1, 0, Weight::PlusI), ValidationError);
    CHECK_THROWS_AS(g.add_edge(0, 5, Weight::One), ValidationError);
}

TEST_CASE("conjugate flips imaginary weights and is an involution") {
    Graph g(3);
    g.add_edge(0, 1, Weight::PlusI);
    g.add_edge(1, 2, Weight::One);
    Graph c = conjugate(g);
    CHECK(c.weight(0, 1) == Weight::MinusI);
    CHECK(c.weight(1, 2) == Weight::One);
    CHECK(conjugate(c) == g);

    Graph real(3);
    real.add_edge(0, 2, Weight::One);
    CHECK(conjugate(real) == real);
}

TEST_CASE("roundabout regions") {
    for (int v = 1; v <= 3; ++v) {
        auto left = roundabout_region(v, Orientation::Left);
        auto right = roundabout_region(v, Orientation::Right);
        CHECK(left.terminals == std::vector<int>{0, 1, 2});
        CHECK(right.graph == conjugate(left.graph));
        CHECK((right.graph.adjacency() - left.graph.adjacency().conjugate()).norm() == 0.0);
        auto a = left.graph.adjacency();
        CHECK((a - a.adjoint()).norm() == 0.0);
        CHECK(a.diagonal().norm() == 0.0);
    }
    CHECK(roundabout_region(1, Orientation::Left).internal().size() == 3);
    CHECK(roundabout_region(2, Orientation::Left).internal().size() == 4);
    CHECK_THROWS_AS(roundabout_region(4, Orientation::Left), ValidationError);
}

TEST_CASE("partition and reassembly") {
    auto r = roundabout_region(1, Orientation::Left);
    auto p = partition(r);
    CHECK(p.A.rows() == 3);
    CHECK(p.D.rows() == 3);
    CHECK(p.B.rows() == 3);
    CHECK(p.B.cols() == 3);
    CHECK((p.A - p.A.adjoint()).norm() == 0.0);
    CHECK((p.D - p.D.adjoint()).norm() == 0.0);
    CHECK((assemble(p) - r.graph.adjacency()).norm() == 0.0);

    // Terminal order is honored.
    ScatteringRegion s{r.graph, {2, 0, 1}};
    auto q = partition(s);
    CHECK(q.A(0, 1) == r.graph.adjacency()(2, 0));

    ScatteringRegion bare{Graph(2), {0, 1}};
    bare.graph.add_edge(0, 1, Weight::One);
    auto pb = partition(bare);
    CHECK(pb.B.size() == 0);
    CHECK(pb.D.size() == 0);
}

TEST_CASE("graph json round trip") {
    auto r = roundabout_region(3, Orientation::Right);
    auto j = to_json(r);
    auto back = region_from_json(j);
    CHECK(back.graph == r.graph);
    CHECK(back.terminals == r.terminals);
    j["edges"][0][2] = {1, 1};
    CHECK_THROWS_AS(region_from_json(j), ValidationError);
}

TEST_CASE("induced subgraph and components") {
    Graph g(5);
    g.add_edge(0, 1, Weight::One);
    g.add_edge(1, 2, Weight::PlusI);
    g.add_edge(3, 4, Weight::One);
    auto lab = component_labels(g);
    CHECK(lab[0] == lab[2]);
    CHECK(lab[3] == lab[4]);
    CHECK(lab[0] != lab[3]);
    Graph h = g.induced({2, 1});
    CHECK(h.weight(0, 1) == Weight::MinusI);
}

TEST_CASE("seeded random regions") {
    std::mt19937_64 a(42), b(42);
    const ScatteringRegion r = random_region(a, 7, 3);
    const ScatteringRegion s = random_region(b, 7, 3);
    CHECK(to_json(r) == to_json(s));
    CHECK(r.terminals == std::vector<int>{0, 1, 2});
    CHECK(r.graph.edges().size() <= 21);
    const MatrixXc adj = r.graph.adjacency<double>();
    CHECK(adj.isApprox(adj.adjoint()));
    CHECK_THROWS_AS(random_region(a, 2, 3), ValidationError);
}
