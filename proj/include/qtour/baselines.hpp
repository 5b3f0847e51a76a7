#pragma once

#include <random>

#include "qtour/graph.hpp"

namespace qtour {

inline constexpr int kExactSolverMaxCities = 20;

// Exact minimum tour by Held-Karp dynamic programming, O(n^2 2^n) time and
// O(n 2^n) memory. Guarded at n <= 20 (about 90 MB of tables at the cap).
Tour solve_exact(const WeightedGraph& g);

// Greedy nearest-neighbor heuristic from the given start node, distance ties
// broken toward the lowest node index. The resulting cycle is rotated so the
// returned tour starts at node 0 (same cycle, same cost).
Tour nearest_neighbor(const WeightedGraph& g, int start = 0);

// Uniformly random tour (node 0 fixed first).
Tour random_tour(const WeightedGraph& g, std::mt19937_64& rng);

// 1.5 times the optimal tour cost: the Christofides worst-case guarantee for
// metric instances, used as a sanity upper bound for learned heuristics.
double christofides_bound(const WeightedGraph& g);

} // namespace qtour
