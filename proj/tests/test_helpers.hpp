#pragma once

// Independent reference implementations used only by the tests: dense
// matrix gate application (no butterfly tricks) and exhaustive tour
// enumeration (no dynamic programming). Deliberately written in the most
// literal way possible so they can serve as oracles for the optimized code.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <span>
#include <vector>

#include "qtour/graph.hpp"
#include "qtour/statevector.hpp"

namespace testref {

using qtour::cxd;

using Mat2 = std::array<std::array<cxd, 2>, 2>;

inline Mat2 mat_h() {
    const double s = 1.0 / std::sqrt(2.0);
    return {{{cxd{s, 0}, cxd{s, 0}}, {cxd{s, 0}, cxd{-s, 0}}}};
}

inline Mat2 mat_rx(double theta) {
    const double c = std::cos(0.5 * theta);
    const double s = std::sin(0.5 * theta);
    return {{{cxd{c, 0}, cxd{0, -s}}, {cxd{0, -s}, cxd{c, 0}}}};
}

inline Mat2 mat_ry(double theta) {
    const double c = std::cos(0.5 * theta);
    const double s = std::sin(0.5 * theta);
    return {{{cxd{c, 0}, cxd{-s, 0}}, {cxd{s, 0}, cxd{c, 0}}}};
}

// out[x] = sum_b u[bit_q(x)][b] * in[x with bit q set to b]
inline std::vector<cxd> apply_one_qubit(std::span<const cxd> in, int q, const Mat2& u) {
    std::vector<cxd> out(in.size());
    const std::size_t bit = std::size_t{1} << q;
    for (std::size_t x = 0; x < in.size(); ++x) {
        const int b = (x >> q) & 1;
        out[x] = u[b][0] * in[x & ~bit] + u[b][1] * in[x | bit];
    }
    return out;
}

// Diagonal two-qubit gate given by its four eigenvalues indexed by
// (bit_q1 << 1) | bit_q0.
inline std::vector<cxd> apply_two_qubit_diag(std::span<const cxd> in, int q0, int q1,
                                             const std::array<cxd, 4>& d) {
    std::vector<cxd> out(in.size());
    for (std::size_t x = 0; x < in.size(); ++x) {
        const int b0 = (x >> q0) & 1;
        const int b1 = (x >> q1) & 1;
        out[x] = d[(b1 << 1) | b0] * in[x];
    }
    return out;
}

inline std::array<cxd, 4> diag_rzz(double theta) {
    const cxd same = std::polar(1.0, -0.5 * theta);
    const cxd diff = std::polar(1.0, 0.5 * theta);
    return {same, diff, diff, same};
}

inline std::array<cxd, 4> diag_cz() {
    return {cxd{1, 0}, cxd{1, 0}, cxd{1, 0}, cxd{-1, 0}};
}

// <Z_a Z_b> computed amplitude by amplitude.
inline double zz_expectation(std::span<const cxd> amps, int a, int b) {
    double acc = 0.0;
    for (std::size_t x = 0; x < amps.size(); ++x) {
        const int sign = (((x >> a) & 1) == ((x >> b) & 1)) ? 1 : -1;
        acc += sign * std::norm(amps[x]);
    }
    return acc;
}

struct BruteForce {
    qtour::Tour tour;           // cheapest tour found, starting at node 0
    double cost = 0.0;          // its cost
    std::size_t enumerated = 0; // distinct cycles examined: (n-1)!/2
};

// Exhaustive minimum over all distinct undirected cycles. Node 0 is pinned
// first and each direction pair is counted once by requiring the second
// node's label to be below the last node's label.
inline BruteForce brute_force_tour(const qtour::WeightedGraph& g) {
    const int n = g.size();
    std::vector<int> rest;
    for (int i = 1; i < n; ++i) rest.push_back(i);
    BruteForce best;
    best.cost = std::numeric_limits<double>::infinity();
    std::vector<int> order(static_cast<std::size_t>(n));
    order[0] = 0;
    do {
        if (rest.front() > rest.back()) continue; // mirror image already seen
        ++best.enumerated;
        for (int i = 1; i < n; ++i) order[static_cast<std::size_t>(i)] = rest[i - 1];
        const double c = qtour::cycle_cost(g, order);
        if (c < best.cost) {
            best.cost = c;
            best.tour.order = order;
        }
    } while (std::next_permutation(rest.begin(), rest.end()));
    return best;
}

// Canonical form of a closed tour: rotated to start at node 0, direction
// chosen so the second node has the smaller label. Two orders describe the
// same cycle exactly when their canonical forms are equal.
inline std::vector<int> canonical_cycle(std::span<const int> order) {
    const auto n = order.size();
    std::vector<int> out(order.begin(), order.end());
    const auto zero = std::find(out.begin(), out.end(), 0);
    std::rotate(out.begin(), zero, out.end());
    if (n > 2 && out[1] > out[n - 1]) {
        std::reverse(out.begin() + 1, out.end());
    }
    return out;
}

} // namespace testref
