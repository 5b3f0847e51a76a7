#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "qtour/baselines.hpp"
#include "qtour/errors.hpp"
#include "qtour/graph.hpp"
#include "qtour/propcheck.hpp"
#include "qtour/qaoa.hpp"
#include "qtour/rng.hpp"
#include "test_helpers.hpp"

using namespace qtour;

namespace {

// All (n-1)! directed tours starting at node 0.
std::vector<Tour> all_tours(int n) {
    std::vector<int> rest;
    for (int i = 1; i < n; ++i) rest.push_back(i);
    std::vector<Tour> out;
    do {
        std::vector<int> order{0};
        order.insert(order.end(), rest.begin(), rest.end());
        out.push_back(Tour{std::move(order)});
    } while (std::next_permutation(rest.begin(), rest.end()));
    return out;
}

} // namespace

TEST_CASE("variable counts and the capacity cap") {
    auto rng = make_rng(61, 0);
    CHECK(build_qubo(random_graph(4, rng)).n_vars() == 9);
    CHECK(build_qubo(random_graph(5, rng)).n_vars() == 16);
    CHECK_THROWS_AS(build_qubo(random_graph(6, rng)), capacity_error);
    CHECK_THROWS_AS(build_qubo(random_graph(4, rng), 0.0), std::invalid_argument);
}

TEST_CASE("feasible assignments score the normalized tour cost") {
    auto rng = make_rng(62, 0);
    for (int n : {4, 5}) {
        const WeightedGraph g = random_graph(n, rng);
        const QuboProblem q = build_qubo(g);
        const double w = g.max_weight();
        for (const Tour& t : all_tours(n)) {
            const std::uint32_t x = q.encode(t);
            CHECK(q.feasible(x));
            CHECK(std::abs(w * q.objective(x) - tour_cost(g, t)) < 1e-9);
        }
    }
}

TEST_CASE("decode inverts encode on every directed tour") {
    auto rng = make_rng(63, 0);
    const WeightedGraph g = random_graph(5, rng);
    const QuboProblem q = build_qubo(g);
    const auto tours = all_tours(5);
    CHECK(tours.size() == 24);
    for (const Tour& t : tours) {
        const std::uint32_t x = q.encode(t);
        const Tour back = q.decode(x);
        CHECK(back.order == t.order);
    }
    CHECK_THROWS_AS(q.decode(0), std::invalid_argument);
}

TEST_CASE("constraint violations pay at least one penalty unit") {
    auto rng = make_rng(64, 0);
    const WeightedGraph g = random_graph(4, rng);
    const double lambda = 1.0;
    const QuboProblem q = build_qubo(g, lambda);

    // Empty assignment: every city and every slot unassigned.
    CHECK_FALSE(q.feasible(0));
    CHECK(q.objective(0) == doctest::Approx(2.0 * lambda * 3).epsilon(1e-12));

    // A doubly-assigned slot is infeasible and pays more than a feasible one.
    const std::uint32_t x = q.encode(Tour{{0, 1, 2, 3}});
    std::uint32_t y = x;
    for (int b = 0; b < q.n_vars(); ++b) {
        if (!((x >> b) & 1)) {
            y = x | (std::uint32_t{1} << b);
            break;
        }
    }
    CHECK_FALSE(q.feasible(y));
    CHECK(q.objective(y) > q.objective(x) + 0.5 * lambda);
}

TEST_CASE("the diagonal table equals the objective on every basis state") {
    auto rng = make_rng(65, 0);
    const WeightedGraph g = random_graph(4, rng);
    const QuboProblem q = build_qubo(g);
    const auto diag = q.cost_diagonal();
    REQUIRE(diag.size() == std::size_t{1} << 9);
    for (std::size_t s = 0; s < diag.size(); ++s) {
        CHECK(diag[s] == doctest::Approx(q.objective(static_cast<std::uint32_t>(s))).epsilon(1e-12));
    }
}

TEST_CASE("zero angles leave the uniform superposition; expected cost is the diagonal mean") {
    auto rng = make_rng(66, 0);
    const WeightedGraph g = random_graph(4, rng);
    const QuboProblem q = build_qubo(g);
    const QaoaCircuit c(q, 1);

    const std::vector<double> zero{0.0, 0.0};
    const Statevector s = c.state(zero);
    const double want_amp = 1.0 / std::sqrt(512.0);
    for (std::size_t i = 0; i < s.dim(); ++i) {
        CHECK(std::abs(s.amplitude(i) - cxd{want_amp, 0.0}) < 1e-12);
    }

    const auto diag = q.cost_diagonal();
    double mean = 0.0;
    for (double d : diag) mean += d;
    mean /= static_cast<double>(diag.size());
    CHECK(c.expected_cost(zero) == doctest::Approx(mean).epsilon(1e-9));

    CHECK_THROWS_AS(c.state(std::vector<double>{0.1}), std::invalid_argument);
}

TEST_CASE("appending a zero layer preserves the state exactly") {
    auto rng = make_rng(67, 0);
    const WeightedGraph g = random_graph(4, rng);
    const QuboProblem q = build_qubo(g);
    const QaoaCircuit c1(q, 1);
    const QaoaCircuit c2(q, 2);

    const double gamma = 0.83, beta = -0.41;
    const Statevector a = c1.state(std::vector<double>{gamma, beta});
    const Statevector b = c2.state(std::vector<double>{gamma, 0.0, beta, 0.0});
    REQUIRE(a.dim() == b.dim());
    for (std::size_t i = 0; i < a.dim(); ++i) {
        CHECK(std::abs(a.amplitude(i) - b.amplitude(i)) < 1e-13);
    }
}

TEST_CASE("the most likely feasible outcome is reported with its tour") {
    auto rng = make_rng(68, 0);
    const WeightedGraph g = random_graph(4, rng);
    const QuboProblem q = build_qubo(g);
    const QaoaCircuit c(q, 1);
    const Statevector s = c.state(std::vector<double>{0.0, 0.0});
    const MeasuredOutcome o = best_feasible_outcome(q, s);
    REQUIRE(o.feasible);
    // On the uniform state every feasible outcome ties at 1/512; the lowest
    // QUBO value must win the tie.
    double best = std::numeric_limits<double>::infinity();
    for (const Tour& t : all_tours(4)) best = std::min(best, q.objective(q.encode(t)));
    CHECK(o.qubo_value == doctest::Approx(best).epsilon(1e-12));
    CHECK(o.probability == doctest::Approx(1.0 / 512.0).epsilon(1e-12));
    validate_tour(g, o.tour);
    CHECK(std::abs(g.max_weight() * o.qubo_value - tour_cost(g, o.tour)) < 1e-9);
}

TEST_CASE("simplex search improves a convex quadratic within budget") {
    const std::vector<double> target{0.3, -1.2, 0.8, 2.1};
    int calls = 0;
    auto f = [&](std::span<const double> x) {
        ++calls;
        double acc = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) {
            acc += (x[i] - target[i]) * (x[i] - target[i]);
        }
        return acc;
    };
    const std::vector<double> x0(4, 0.0);
    const SimplexResult r = nelder_mead(f, x0, 0.25, 500);
    CHECK(r.evaluations <= 500);
    CHECK(r.evaluations == calls);
    const double f0 = 0.3 * 0.3 + 1.2 * 1.2 + 0.8 * 0.8 + 2.1 * 2.1;
    CHECK(r.value < f0);
    CHECK(r.value < 1e-3); // converges tightly on a smooth quadratic
    CHECK_THROWS_AS(nelder_mead(f, x0, 0.25, 3), std::invalid_argument); // budget < d + 1
}

TEST_CASE("depth-one search uses exactly the stated budget and is deterministic") {
    auto rng = make_rng(69, 0);
    const WeightedGraph g = random_graph(4, rng);
    const QuboProblem q = build_qubo(g);
    const QaoaResult a = optimize_qaoa(q, 1, 64, 123, 1);
    const QaoaResult b = optimize_qaoa(q, 1, 64, 123, 4); // threads must not matter
    CHECK(a.evaluations == 64);
    CHECK(a.depth == 1);
    REQUIRE(a.params.size() == 2);
    CHECK(a.params == b.params);
    CHECK(a.expected_cost == b.expected_cost);

    // The searched point can only improve on the zero-angle expected cost.
    const QaoaCircuit c(q, 1);
    CHECK(a.expected_cost <= c.expected_cost(std::vector<double>{0.0, 0.0}) + 1e-12);
}

TEST_CASE("deeper pipelines keep improving the expected cost") {
    auto rng = make_rng(70, 0);
    const WeightedGraph g = random_graph(4, rng);
    const QuboProblem q = build_qubo(g);
    const QaoaResult r1 = optimize_qaoa(q, 1, 200, 5, 1);
    const QaoaResult r2 = optimize_qaoa(q, 2, 200, 5, 1);
    const QaoaResult r3 = optimize_qaoa(q, 3, 200, 5, 1);
    CHECK(r2.expected_cost <= r1.expected_cost + 1e-9); // zero-extension can't hurt
    CHECK(r3.expected_cost <= r2.expected_cost + 1e-9);
    CHECK(r3.depth == 3);
    CHECK(r3.params.size() == 6);
    CHECK(r2.evaluations > r1.evaluations);

    if (r1.outcome.feasible) {
        const double opt = tour_cost(g, solve_exact(g));
        CHECK(tour_cost(g, r1.outcome.tour) >= opt - 1e-12);
    }
}

TEST_CASE("fixed-parameter evaluation reports a single evaluation") {
    auto rng = make_rng(71, 0);
    const WeightedGraph g = random_graph(4, rng);
    const QuboProblem q = build_qubo(g);
    const std::vector<double> params{0.7, 0.2, -0.3, 0.9};
    const QaoaResult r = evaluate_qaoa(q, 2, params);
    CHECK(r.evaluations == 1);
    CHECK(r.depth == 2);
    const QaoaCircuit c(q, 2);
    CHECK(r.expected_cost == doctest::Approx(c.expected_cost(params)).epsilon(1e-12));
}
