#include <numbers>

#include "doctest.h"
#include "qwalk/errors.hpp"
#include "qwalk/simulate.hpp"

using namespace qwalk;
using std::numbers::pi;

namespace {

// |<out|exp(-iHt)|in>|^2 on the infinite line, with the input packet e^{-i pi p/2}
// on p in [-(2L-1), -L] and the ideal output packet `hops` sites further on,
// integrated in momentum space.
double free_line_fidelity(int L, int hops, double t) {
    const int grid = 1 << 14;
    cplx a = 0;
    for (int m = 0; m < grid; ++m) {
        const double k = -pi + 2 * pi * (m + 0.5) / grid;
        cplx fin = 0, fout = 0;
        for (int s = L; s < 2 * L; ++s) {
            const int pin = -s, pout = hops + s;
            fin += std::polar(1.0, -pi * pin / 2) * std::polar(1.0, -k * pin);
            fout += std::polar(1.0, -pi * (pout - hops) / 2) * std::polar(1.0, -k * pout);
        }
        a += std::conj(fout) * fin * std::polar(1.0, -2 * std::cos(k) * t) / static_cast<double>(L);
    }
    a /= static_cast<double>(grid);
    return std::norm(a);
}

CircuitRunOptions opts(int L) {
    CircuitRunOptions o;
    o.lower.L = L;
    return o;
}

}  // namespace

TEST_CASE("identity circuit against free propagation") {
    for (int L : {8, 16}) {
        auto run = simulate_circuit({1, {{"id", {0}, {}}}}, opts(L));
        const BlockGeometry& g = run.layout.blocks[0];
        const double oracle = free_line_fidelity(L, g.hops, g.tau);
        for (const BasisRun& r : run.runs) {
            CAPTURE(L);
            CHECK(r.fidelity == doctest::Approx(oracle).epsilon(1e-3));
            CHECK(r.logical_fidelity > 0.99);
            CHECK(r.rail_populations(r.input) > 0.8);
            CHECK(r.rail_populations(1 - r.input) < 1e-8);
        }
    }
    // An empty circuit runs as identity.
    auto empty = simulate_circuit({1, {}}, opts(16));
    CHECK(empty.runs[0].logical_fidelity > 0.99);
}

TEST_CASE("hadamard splits the walker evenly") {
    auto run = simulate_circuit({1, {{"h", {0}, {}}}}, opts(32));
    const auto& r = run.runs[0];
    CHECK(r.rail_populations(0) == doctest::Approx(0.5).epsilon(0.1));
    CHECK(r.rail_populations(1) == doctest::Approx(0.5).epsilon(0.1));
    CHECK(std::abs(r.rail_populations(0) - 0.5) < 0.05);
    CHECK(std::abs(r.rail_populations(1) - 0.5) < 0.05);
    CHECK(r.logical_fidelity > 0.999);
    // Relative phase: the logical amplitudes follow H|0> = (|0> + |1>)/sqrt2.
    CHECK(std::abs(std::arg(r.logical(1) / r.logical(0))) < 0.05);
}

TEST_CASE("single-qubit rotations follow the gate model") {
    auto run = simulate_circuit({1, {{"u3", {0}, {0.7, 0.4, -1.1}}}}, opts(16));
    for (const auto& r : run.runs) CHECK(r.logical_fidelity > 0.995);
}

TEST_CASE("component engine agrees with the symmetrized two-particle Hamiltonian") {
    for (Statistics s : {Statistics::Fermion, Statistics::Boson}) {
        CircuitRunOptions o = opts(4);
        o.lower.statistics = s;
        o.lower.u = s == Statistics::Fermion ? -2.0 : -4.0;
        o.inputs = {3, 1};
        auto run = simulate_circuit({2, {{"cp", {0, 1}, {}}}}, o);
        const PhysicalLayout& lay = run.layout;
        const BlockGeometry& g = lay.blocks[0];

        std::vector<int> verts;
        for (const auto& seg : g.input) verts.insert(verts.end(), seg.begin(), seg.end());
        verts.insert(verts.end(), g.interior.begin(), g.interior.end());
        for (const auto& seg : g.output) verts.insert(verts.end(), seg.begin(), seg.end());
        std::vector<int> local(lay.graph.num_vertices(), -1);
        for (std::size_t i = 0; i < verts.size(); ++i) local[verts[i]] = static_cast<int>(i);
        const Graph block = lay.graph.induced(verts);
        const Hamiltonian2P h2 = build_hamiltonian_2p(block, s, o.lower.u);

        for (const BasisRun& r : run.runs) {
            const int rail0 = r.input & 1, rail1 = 2 + ((r.input >> 1) & 1);
            VectorXc f0 = VectorXc::Zero(block.num_vertices()), f1 = f0;
            for (int x = 0; x < 3 * o.lower.L; ++x) {
                f0(local[g.input[rail0][x]]) = packet_amplitude(x, o.lower.L, PacketSign::Input);
                f1(local[g.input[rail1][x]]) = packet_amplitude(x, o.lower.L, PacketSign::Input);
            }
            const VectorXc psi = propagate(pair_state(h2, f0, f1), h2.matrix, g.tau, 1e-9);
            double worst = 0;
            const int len = 3 * o.lower.L;
            for (int i = 0; i < 2 * len; ++i)
                for (int j = 0; j < 2 * len; ++j) {
                    const int a = local[g.output[i / len][i % len]], b = local[g.output[2 + j / len][j % len]];
                    worst = std::max(worst, std::abs(std::abs(psi(h2.index(a, b))) - std::abs(r.output(i, j))));
                }
            CAPTURE(to_string(s));
            CHECK(worst < 1e-6);
        }
    }
}

TEST_CASE("CNOT routes every basis input") {
    CircuitRunOptions o = opts(8);
    auto run = simulate_circuit({2, {{"cnot", {0, 1}, {}}}}, o);
    const MatrixXc u = ideal_unitary({2, {{"cnot", {0, 1}, {}}}});
    REQUIRE(run.runs.size() == 4);
    for (const BasisRun& r : run.runs) {
        int expect = 0;
        u.col(r.input).cwiseAbs().maxCoeff(&expect);
        Eigen::Index best = 0;
        r.rail_populations.maxCoeff(&best);
        CAPTURE(r.input);
        CHECK(best == expect);
        CHECK(r.logical_fidelity > 0.99);
    }
    CHECK(run.max_dimension > 0);

    // Deterministic across thread counts.
    o.threads = 3;
    auto again = simulate_circuit({2, {{"cnot", {0, 1}, {}}}}, o);
    for (std::size_t i = 0; i < run.runs.size(); ++i) CHECK(again.runs[i].output == run.runs[i].output);
}

TEST_CASE("capacity and size limits") {
    CircuitRunOptions o = opts(8);
    o.capacity = 1000;
    CHECK_THROWS_AS(simulate_circuit({2, {{"cp", {0, 1}, {}}}}, o), CapacityError);
    CHECK_THROWS_AS(simulate_circuit({3, {{"h", {0}, {}}}}, opts(8)), CapacityError);
    CircuitRunOptions bad = opts(8);
    bad.inputs = {4};
    CHECK_THROWS_AS(simulate_circuit({2, {}}, bad), ValidationError);
}
