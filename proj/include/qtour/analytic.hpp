#pragma once

#include <vector>

#include "qtour/graph.hpp"

namespace qtour {

// Closed-form value of the depth-1 equivariant circuit's edge observable,
// with the factors broken out for diagnostics:
//
//   value = eps_{last,v} * sin(pi*beta) * sin(2*gamma*eps_{last,v})
//           * prod_{k != last, k != v} cos(2*gamma*eps_{v,k})
//
// where last is the most recently visited node (annotation 0) and v is an
// available candidate (annotation pi). The cosine product runs over every
// other node adjacent to v, available or not.
struct AnalyticExpectation {
    double value = 0.0;
    double sin_beta = 0.0;
    double sin_edge = 0.0;
    double cos_product = 1.0;
};

AnalyticExpectation depth1_expectation_terms(const AnnotatedGraph& s, int last, int v,
                                             double beta, double gamma);
double depth1_expectation(const AnnotatedGraph& s, int last, int v, double beta, double gamma);

// Greedy tour construction driven entirely by the closed form: at each step
// pick the available node with the largest analytic value (ties toward the
// lowest index), then append the final remaining node. Matches the simulator
// rollout at depth 1 exactly on tie-free instances.
std::vector<int> depth1_greedy_order(const WeightedGraph& g, double beta, double gamma,
                                     int start);
Tour depth1_greedy_tour(const WeightedGraph& g, double beta, double gamma);

} // namespace qtour
