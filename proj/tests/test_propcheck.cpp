#include "doctest.h"
#include "qtour/propcheck.hpp"

using namespace qtour;

namespace {

void expect_pass(const CheckReport& r) {
    INFO(r.name << ": max_deviation=" << r.max_deviation << " failures=" << r.failures);
    CHECK(r.passed);
    CHECK(r.failures == 0);
    CHECK(r.max_deviation <= r.tolerance);
}

} // namespace

TEST_CASE("relabeling a graph permutes the circuit state") {
    expect_pass(check_state_equivariance(40, 2024));
}

TEST_CASE("relabeling a graph permutes the action values") {
    expect_pass(check_qvalue_equivariance(40, 2025));
}

TEST_CASE("relabeling a graph relabels the greedy tour") {
    expect_pass(check_tour_equivariance(40, 2026));
}

TEST_CASE("the depth-one closed form tracks the simulator") {
    expect_pass(check_analytic_oracle(80, 2027));
}

TEST_CASE("shift-rule gradients agree with central differences everywhere") {
    expect_pass(check_gradients(3, 2028));
}
