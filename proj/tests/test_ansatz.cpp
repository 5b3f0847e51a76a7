#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "qtour/ansatz.hpp"
#include "qtour/graph.hpp"
#include "qtour/propcheck.hpp"
#include "qtour/rng.hpp"

using namespace qtour;

namespace {

double state_distance(const Statevector& a, const Statevector& b) {
    REQUIRE(a.dim() == b.dim());
    double m = 0.0;
    for (std::size_t i = 0; i < a.dim(); ++i) {
        m = std::max(m, std::abs(a.amplitude(i) - b.amplitude(i)));
    }
    return m;
}

} // namespace

TEST_CASE("trainable parameter counts per family") {
    // Shared-parameter family: two per layer, independent of n.
    CHECK(trainable_count(AnsatzKind::eqc, 5, 1) == 2);
    CHECK(trainable_count(AnsatzKind::eqc, 20, 4) == 8);
    CHECK(trainable_count(AnsatzKind::eqc, 8, 3) == 6);

    // Per-gate family: edges plus nodes per layer.
    CHECK(trainable_count(AnsatzKind::neqc, 5, 1) == 15);
    CHECK(trainable_count(AnsatzKind::neqc, 20, 4) == 840);

    // Hardware-efficient: edges plus twice the nodes (trainable encoding),
    // or nodes only (frozen encoding).
    CHECK(trainable_count(AnsatzKind::hwete, 5, 1) == 20);
    CHECK(trainable_count(AnsatzKind::hwe, 5, 1) == 5);

    for (int n = 4; n <= 20; n += 4) {
        for (int p = 1; p <= 4; ++p) {
            const int e = n * (n - 1) / 2;
            CHECK(trainable_count(AnsatzKind::eqc, n, p) == 2 * p);
            CHECK(trainable_count(AnsatzKind::neqc, n, p) == p * (e + n));
            CHECK(trainable_count(AnsatzKind::hwete, n, p) == p * (e + 2 * n));
            CHECK(trainable_count(AnsatzKind::hwe, n, p) == p * n);
        }
    }
}

TEST_CASE("family names round-trip") {
    for (auto kind : {AnsatzKind::eqc, AnsatzKind::neqc, AnsatzKind::hwete, AnsatzKind::hwe}) {
        CHECK(ansatz_from_string(to_string(kind)) == kind);
    }
    CHECK_THROWS_AS(ansatz_from_string("nope"), std::invalid_argument);
}

TEST_CASE("gate inventory at five nodes, depth one") {
    auto rng = make_rng(21, 0);
    const WeightedGraph g = random_graph(5, rng);
    const AnnotatedGraph s = AnnotatedGraph::initial(g, 0);

    auto count = [](const AnsatzProgram& p, GateKind k) {
        int c = 0;
        for (const auto& gate : p.gates()) c += (gate.kind == k) ? 1 : 0;
        return c;
    };

    const AnsatzProgram eqc = build_eqc(s, 1);
    CHECK(eqc.gates().size() == 20); // 5 H + 10 RZZ + 5 RX
    CHECK(count(eqc, GateKind::H) == 5);
    CHECK(count(eqc, GateKind::RZZ) == 10);
    CHECK(count(eqc, GateKind::RX) == 5);
    CHECK(eqc.n_trainable() == 2);

    const AnsatzProgram neqc = build_neqc(s, 1);
    CHECK(neqc.gates().size() == 20);
    CHECK(neqc.n_trainable() == 15);

    const AnsatzProgram hwete = build_hwete(s, 1);
    CHECK(hwete.gates().size() == 24); // 5 RX + 10 RZZ + 5 RY + 4 CZ, no H
    CHECK(count(hwete, GateKind::H) == 0);
    CHECK(count(hwete, GateKind::RX) == 5);
    CHECK(count(hwete, GateKind::RZZ) == 10);
    CHECK(count(hwete, GateKind::RY) == 5);
    CHECK(count(hwete, GateKind::CZ) == 4);
    CHECK(hwete.n_trainable() == 20);

    const AnsatzProgram hwe = build_hwe(s, 1);
    CHECK(hwe.gates().size() == 24);
    CHECK(hwe.n_trainable() == 5);
}

TEST_CASE("every parameter site maps back to a gate it drives") {
    auto rng = make_rng(22, 0);
    const WeightedGraph g = random_graph(5, rng);
    const AnnotatedGraph s = AnnotatedGraph::initial(g, 0);
    for (auto kind : {AnsatzKind::eqc, AnsatzKind::neqc, AnsatzKind::hwete, AnsatzKind::hwe}) {
        const AnsatzProgram p = build_ansatz(kind, s, 2);
        REQUIRE(static_cast<int>(p.param_sites().size()) == p.n_trainable());
        for (int k = 0; k < p.n_trainable(); ++k) {
            CHECK(!p.param_sites()[static_cast<std::size_t>(k)].empty());
            for (int gi : p.param_sites()[static_cast<std::size_t>(k)]) {
                CHECK(p.gates()[static_cast<std::size_t>(gi)].param == k);
            }
        }
    }
}

TEST_CASE("the shared-parameter circuit equals the per-gate circuit with tied values") {
    auto rng = make_rng(23, 0);
    for (int trial = 0; trial < 5; ++trial) {
        const WeightedGraph g = random_graph(5, rng);
        AnnotatedGraph s = AnnotatedGraph::initial(g, 0);
        if (trial % 2 == 1) s.mark_visited(2);
        const int depth = 1 + trial % 2;

        std::vector<double> shared(static_cast<std::size_t>(2 * depth));
        for (auto& v : shared) v = uniform_real(rng, -2.0, 2.0);

        // Per-gate layout per layer: all edge parameters, then all node
        // parameters, in gate order.
        const int e = 5 * 4 / 2;
        std::vector<double> tied;
        for (int l = 0; l < depth; ++l) {
            for (int k = 0; k < e; ++k) tied.push_back(shared[static_cast<std::size_t>(2 * l)]);
            for (int k = 0; k < 5; ++k) tied.push_back(shared[static_cast<std::size_t>(2 * l + 1)]);
        }

        const Statevector a = build_eqc(s, depth).evaluate(shared);
        const Statevector b = build_neqc(s, depth).evaluate(tied);
        CHECK(state_distance(a, b) < 1e-12);
    }
}

TEST_CASE("zero parameters leave the shared-parameter circuit uniform") {
    auto rng = make_rng(24, 0);
    const WeightedGraph g = random_graph(5, rng);
    const AnnotatedGraph s = AnnotatedGraph::initial(g, 0);
    const Statevector v = build_eqc(s, 2).evaluate(std::vector<double>{0, 0, 0, 0});
    const double want = 1.0 / std::sqrt(32.0);
    for (std::size_t i = 0; i < v.dim(); ++i) {
        CHECK(std::abs(v.amplitude(i) - cxd{want, 0.0}) < 1e-12);
    }
}

TEST_CASE("zero parameters leave the trainable-encoding circuit at |0...0>") {
    auto rng = make_rng(25, 0);
    const WeightedGraph g = random_graph(5, rng);
    const AnnotatedGraph s = AnnotatedGraph::initial(g, 0);
    const Statevector v =
        build_hwete(s, 1).evaluate(std::vector<double>(20, 0.0));
    CHECK(std::abs(v.amplitude(0) - cxd{1.0, 0.0}) < 1e-12);
    for (std::size_t i = 1; i < v.dim(); ++i) CHECK(std::abs(v.amplitude(i)) < 1e-12);
}

TEST_CASE("the frozen-encoding circuit senses edge weights and annotations") {
    auto rng = make_rng(26, 0);
    const WeightedGraph g = random_graph(5, rng);
    WeightedGraph g2 = g;
    {
        auto coords = g.coords();
        coords[4].x += 0.31;
        coords[4].y -= 0.17;
        g2 = WeightedGraph(coords);
    }
    const AnnotatedGraph s1 = AnnotatedGraph::initial(g, 0);
    const AnnotatedGraph s2 = AnnotatedGraph::initial(g2, 0);
    AnnotatedGraph s3 = AnnotatedGraph::initial(g, 0);
    s3.mark_visited(3);

    const std::vector<double> params(5, 0.25);
    const Statevector a = build_hwe(s1, 1).evaluate(params);
    const Statevector b = build_hwe(s2, 1).evaluate(params);
    const Statevector c = build_hwe(s3, 1).evaluate(params);
    CHECK(state_distance(a, b) > 1e-3); // weights enter through fixed angles
    CHECK(state_distance(a, c) > 1e-3); // annotations enter through RX angles
}

TEST_CASE("parameter count mismatches are rejected") {
    auto rng = make_rng(27, 0);
    const WeightedGraph g = random_graph(4, rng);
    const AnnotatedGraph s = AnnotatedGraph::initial(g, 0);
    const AnsatzProgram p = build_eqc(s, 1);
    CHECK_THROWS_AS(p.evaluate(std::vector<double>{0.1}), std::invalid_argument);
    CHECK_THROWS_AS(p.evaluate(std::vector<double>{0.1, 0.2, 0.3}), std::invalid_argument);
    CHECK_THROWS_AS(build_eqc(s, 0), std::invalid_argument);
}

TEST_CASE("shifting a gate adds the offset to exactly that gate's angle") {
    // At depth 1 with parameters (gamma, beta), shifting one RZZ gate by
    // delta must equal rebuilding the circuit with that edge's angle offset.
    auto rng = make_rng(28, 0);
    const WeightedGraph g = random_graph(4, rng);
    const AnnotatedGraph s = AnnotatedGraph::initial(g, 0);
    const AnsatzProgram p = build_eqc(s, 1);
    const std::vector<double> params{0.37, -0.81};
    const double delta = 0.59;

    int rzz_index = -1;
    for (std::size_t i = 0; i < p.gates().size(); ++i) {
        if (p.gates()[i].kind == GateKind::RZZ) {
            rzz_index = static_cast<int>(i);
            break;
        }
    }
    REQUIRE(rzz_index >= 0);
    const Statevector shifted = p.evaluate_shifted(params, rzz_index, delta);

    // Reference: apply the gate list manually with the one angle offset.
    Statevector manual(4);
    for (std::size_t i = 0; i < p.gates().size(); ++i) {
        const auto& gate = p.gates()[i];
        double angle = gate.param >= 0
                           ? gate.coeff * params[static_cast<std::size_t>(gate.param)]
                           : gate.coeff;
        if (static_cast<int>(i) == rzz_index) angle += delta;
        switch (gate.kind) {
        case GateKind::H: manual.apply_h(gate.q0); break;
        case GateKind::RX: manual.apply_rx(gate.q0, angle); break;
        case GateKind::RY: manual.apply_ry(gate.q0, angle); break;
        case GateKind::RZZ: manual.apply_rzz(gate.q0, gate.q1, angle); break;
        case GateKind::CZ: manual.apply_cz(gate.q0, gate.q1); break;
        }
    }
    CHECK(state_distance(shifted, manual) == 0.0);
}
