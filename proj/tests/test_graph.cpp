#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "doctest.h"
#include "qtour/graph.hpp"
#include "qtour/propcheck.hpp"
#include "qtour/rng.hpp"
#include "test_helpers.hpp"

using namespace qtour;

namespace {

WeightedGraph unit_square() {
    return WeightedGraph({{0, 0}, {1, 0}, {1, 1}, {0, 1}});
}

std::string temp_path(const char* name) {
    return (std::filesystem::temp_directory_path() / name).string();
}

} // namespace

TEST_CASE("unit square tour costs") {
    const WeightedGraph g = unit_square();
    CHECK(g.size() == 4);
    CHECK(g.weight(0, 1) == 1.0);
    CHECK(g.weight(0, 2) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
    CHECK(g.max_weight() == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));

    CHECK(tour_cost(g, Tour{{0, 1, 2, 3}}) == 4.0);
    // The crossing tour pays both diagonals.
    CHECK(tour_cost(g, Tour{{0, 2, 1, 3}}) ==
          doctest::Approx(2.0 + 2.0 * std::sqrt(2.0)).epsilon(1e-15));
    CHECK(path_cost(g, std::vector<int>{0, 1}) == 1.0);
    CHECK(approximation_ratio(g, Tour{{0, 2, 1, 3}}, Tour{{0, 1, 2, 3}}) ==
          doctest::Approx((2.0 + 2.0 * std::sqrt(2.0)) / 4.0).epsilon(1e-15));
}

TEST_CASE("graph construction validation") {
    CHECK_THROWS_AS(WeightedGraph({{0, 0}}), std::invalid_argument);
    CHECK_THROWS_AS(WeightedGraph({{0, 0}, {0, 0}, {1, 1}}), std::invalid_argument);
}

TEST_CASE("tour validation rejects malformed orders") {
    const WeightedGraph g = unit_square();
    CHECK_NOTHROW(validate_tour(g, Tour{{0, 3, 1, 2}}));
    CHECK_THROWS_AS(validate_tour(g, Tour{{1, 2, 3, 0}}), std::invalid_argument); // wrong start
    CHECK_THROWS_AS(validate_tour(g, Tour{{0, 1, 2}}), std::invalid_argument);    // too short
    CHECK_THROWS_AS(validate_tour(g, Tour{{0, 1, 1, 2}}), std::invalid_argument); // repeat
    CHECK_THROWS_AS(validate_tour(g, Tour{{0, 1, 2, 4}}), std::invalid_argument); // out of range
}

TEST_CASE("step rewards telescope to minus the closed tour cost") {
    auto rng = make_rng(314, 0);
    for (int trial = 0; trial < 30; ++trial) {
        const WeightedGraph g = random_graph(6, rng);
        std::vector<int> perm = random_permutation(6, rng);
        // Rotate so the partial tour starts at 0, matching episode usage.
        const auto zero = std::find(perm.begin(), perm.end(), 0);
        std::rotate(perm.begin(), zero, perm.end());

        std::vector<int> partial{0};
        double total = 0.0;
        for (std::size_t k = 1; k < perm.size(); ++k) {
            total += step_reward(g, partial, perm[k]);
            partial.push_back(perm[k]);
        }
        const double cost = tour_cost(g, Tour{perm});
        CHECK(std::abs(total + cost) < 1e-12);
    }
}

TEST_CASE("step reward validation") {
    const WeightedGraph g = unit_square();
    CHECK(step_reward(g, std::vector<int>{0}, 1) == -1.0);
    CHECK_THROWS_AS(step_reward(g, std::vector<int>{0, 1}, 1), std::invalid_argument);
    CHECK_THROWS_AS(step_reward(g, std::vector<int>{}, 1), std::invalid_argument);
    CHECK_THROWS_AS(step_reward(g, std::vector<int>{0}, 4), std::invalid_argument);
}

TEST_CASE("relabeling moves node data onto the new labels") {
    const WeightedGraph g = unit_square();
    const std::vector<int> sigma{2, 0, 3, 1};
    const WeightedGraph h = relabel(g, sigma);
    for (int i = 0; i < 4; ++i) {
        CHECK(h.coords()[static_cast<std::size_t>(sigma[i])].x == g.coords()[static_cast<std::size_t>(i)].x);
        CHECK(h.coords()[static_cast<std::size_t>(sigma[i])].y == g.coords()[static_cast<std::size_t>(i)].y);
        for (int j = 0; j < 4; ++j) {
            if (i == j) continue;
            CHECK(h.weight(sigma[i], sigma[j]) == g.weight(i, j));
        }
    }
    CHECK_THROWS_AS(relabel(g, std::vector<int>{0, 1, 2}), std::invalid_argument);
    CHECK_THROWS_AS(relabel(g, std::vector<int>{0, 1, 2, 2}), std::invalid_argument);
}

TEST_CASE("annotated graph tracks availability with exact angle values") {
    const WeightedGraph g = unit_square();
    AnnotatedGraph s = AnnotatedGraph::initial(g, 0);
    CHECK(s.alpha(0) == kAlphaVisited);
    CHECK(kAlphaAvailable == std::numbers::pi);
    for (int i = 1; i < 4; ++i) CHECK(s.alpha(i) == kAlphaAvailable);
    CHECK(s.available_count() == 3);
    CHECK_FALSE(s.available(0));

    s.mark_visited(2);
    CHECK(s.available_count() == 2);
    CHECK_FALSE(s.available(2));
    CHECK_NOTHROW(s.mark_visited(2)); // idempotent; episodes enforce strictness
    CHECK_THROWS_AS(s.mark_visited(7), std::out_of_range);

    // Annotations other than exactly 0 or pi are rejected.
    CHECK_THROWS_AS(AnnotatedGraph(g, {0.0, 0.5, std::numbers::pi, 0.0}), std::invalid_argument);
    CHECK_THROWS_AS(AnnotatedGraph(g, {0.0, std::numbers::pi}), std::invalid_argument);
}

TEST_CASE("instance generation is deterministic and produces distinct points") {
    const auto a = generate_instances(5, 10, 77);
    const auto b = generate_instances(5, 10, 77);
    const auto c = generate_instances(5, 10, 78);
    REQUIRE(a.size() == 10);
    bool all_equal = true;
    bool any_differs_from_c = false;
    for (int k = 0; k < 10; ++k) {
        for (int i = 0; i < 5; ++i) {
            const auto sk = static_cast<std::size_t>(k);
            const auto si = static_cast<std::size_t>(i);
            all_equal = all_equal && a[sk].coords()[si].x == b[sk].coords()[si].x &&
                        a[sk].coords()[si].y == b[sk].coords()[si].y;
            any_differs_from_c = any_differs_from_c || a[sk].coords()[si].x != c[sk].coords()[si].x;
            CHECK(a[sk].coords()[si].x >= 0.0);
            CHECK(a[sk].coords()[si].x < 1.0);
        }
    }
    CHECK(all_equal);
    CHECK(any_differs_from_c);
    CHECK_THROWS_AS(generate_instances(3, 1, 1), std::invalid_argument);
    CHECK_THROWS_AS(generate_instances(5, 0, 1), std::invalid_argument);
}

TEST_CASE("instance files round-trip exactly") {
    const std::string path = temp_path("qtour_test_roundtrip.txt");
    std::vector<Instance> insts;
    auto graphs = generate_instances(5, 4, 123);
    for (std::size_t k = 0; k < graphs.size(); ++k) {
        std::optional<Tour> t;
        if (k % 2 == 0) t = Tour{{0, 2, 4, 1, 3}};
        insts.push_back(Instance{std::move(graphs[k]), t});
    }
    save_instances(path, insts);
    const auto back = load_instances(path);
    REQUIRE(back.size() == insts.size());
    for (std::size_t k = 0; k < back.size(); ++k) {
        for (int i = 0; i < 5; ++i) {
            const auto si = static_cast<std::size_t>(i);
            CHECK(back[k].graph.coords()[si].x == insts[k].graph.coords()[si].x);
            CHECK(back[k].graph.coords()[si].y == insts[k].graph.coords()[si].y);
        }
        REQUIRE(back[k].optimal.has_value() == insts[k].optimal.has_value());
        if (back[k].optimal) CHECK(back[k].optimal->order == insts[k].optimal->order);
    }
    std::filesystem::remove(path);
}

TEST_CASE("the reader accepts the published corpus conventions") {
    const std::string path = temp_path("qtour_test_corpus.txt");
    {
        std::ofstream out(path);
        // "output" separator, 1-based tour, trailing repeat of the start.
        out << "0 0 1 0 1 1 0 1 output 1 2 3 4 1\n";
        // Pipe separator, 0-based, rotated so the tour does not start at 0.
        out << "0 0 1 0 1 1 0 1 | 2 3 0 1\n";
        // No tour at all.
        out << "0 0 1 0 1 1 0 1\n";
    }
    const auto insts = load_instances(path);
    REQUIRE(insts.size() == 3);
    REQUIRE(insts[0].optimal.has_value());
    CHECK(insts[0].optimal->order == std::vector<int>{0, 1, 2, 3});
    REQUIRE(insts[1].optimal.has_value());
    CHECK(insts[1].optimal->order == std::vector<int>{0, 1, 2, 3});
    CHECK_FALSE(insts[2].optimal.has_value());
    std::filesystem::remove(path);
}

TEST_CASE("the reader rejects malformed lines with the line number") {
    const std::string path = temp_path("qtour_test_bad.txt");

    auto expect_error = [&](const char* line, const char* needle) {
        {
            std::ofstream out(path);
            out << "0 0 1 0 1 1 0 1\n"; // line 1 is fine
            out << line << "\n";
        }
        bool threw = false;
        try {
            load_instances(path);
        } catch (const std::exception& e) {
            threw = true;
            const std::string msg = e.what();
            CHECK(msg.find(":2") != std::string::npos);
            CHECK(msg.find(needle) != std::string::npos);
        }
        CHECK(threw);
    };

    expect_error("0 0 1 0 1 1 0", "coordinate");          // odd coordinate count
    expect_error("0 0 1 0", "coordinate");                // below the 3-node floor
    expect_error("0 0 1 0 1 1 0 x", "coordinate");        // junk token
    expect_error("0 0 1 0 1 1 0 1 | 1 2 3", "tour");      // short tour
    expect_error("0 0 1 0 1 1 0 1 | 0 1 2 2", "tour");    // repeated node
    CHECK_THROWS_AS(load_instances(temp_path("qtour_does_not_exist.txt")), std::runtime_error);
    std::filesystem::remove(path);
}

TEST_CASE("cycle cost is rotation and direction invariant") {
    auto rng = make_rng(2718, 0);
    const WeightedGraph g = random_graph(7, rng);
    const std::vector<int> order = random_permutation(7, rng);
    std::vector<int> rotated = order;
    std::rotate(rotated.begin(), rotated.begin() + 3, rotated.end());
    std::vector<int> reversed(order.rbegin(), order.rend());
    CHECK(cycle_cost(g, order) == doctest::Approx(cycle_cost(g, rotated)).epsilon(1e-12));
    CHECK(cycle_cost(g, order) == doctest::Approx(cycle_cost(g, reversed)).epsilon(1e-12));
}
