#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "qtour/graph.hpp"

namespace qtour {

// Randomized property sweeps used both by the CLI's `check` subcommand and
// by the acceptance suite. Each check runs `trials` random configurations
// and reports the worst deviation (or mismatch count for exact checks).
struct CheckReport {
    std::string name;
    int trials = 0;
    double max_deviation = 0.0;
    double tolerance = 0.0;
    int failures = 0;
    bool passed = false;
};

// Random instance helper: n uniform points on the unit square (duplicates
// redrawn), usable below the 4-city floor of generate_instances.
WeightedGraph random_graph(int n, std::mt19937_64& rng);

// Random bijection on 0..n-1.
std::vector<int> random_permutation(int n, std::mt19937_64& rng);

// Statevector equivariance of the shared-parameter family: relabeling the
// annotated graph by sigma permutes the state's qubits by sigma. Random
// n in 3..8, depth in 1..3, annotations, parameters, and sigma per trial.
CheckReport check_state_equivariance(int trials, std::uint64_t seed);

// Same statement one level up: relabeling permutes the action values of
// available nodes and keeps masked slots masked.
CheckReport check_qvalue_equivariance(int trials, std::uint64_t seed);

// Greedy tours commute with relabeling exactly (integer comparison),
// including a relabeled start node.
CheckReport check_tour_equivariance(int trials, std::uint64_t seed);

// Depth-1 simulator values against the closed form, random graphs with 3..6
// nodes, random partial tours and parameters.
CheckReport check_analytic_oracle(int trials, std::uint64_t seed);

// Per-gate shift-rule gradients against central differences for all four
// circuit families at 4 cities, depths 1 and 2. `trials` random parameter
// draws per family/depth combination.
CheckReport check_gradients(int trials, std::uint64_t seed);

} // namespace qtour
