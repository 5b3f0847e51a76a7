#include "qtour/baselines.hpp"

#include <algorithm>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>

#include "qtour/errors.hpp"
#include "qtour/rng.hpp"

namespace qtour {

Tour solve_exact(const WeightedGraph& g) {
    const int n = g.size();
    if (n > kExactSolverMaxCities) {
        throw capacity_error("exact solver limited to " + std::to_string(kExactSolverMaxCities) +
                             " cities, got " + std::to_string(n));
    }
    if (n == 2) return Tour{{0, 1}};

    // dp[mask][j]: cheapest path 0 -> ... -> node j+1 visiting exactly the
    // node set encoded by mask (bit k = node k+1), with j in mask.
    const int m = n - 1;
    const std::size_t n_masks = std::size_t{1} << m;
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<double> dp(n_masks * m, inf);
    std::vector<std::int8_t> parent(n_masks * m, -1);

    for (int j = 0; j < m; ++j) {
        dp[(std::size_t{1} << j) * m + j] = g.weight(0, j + 1);
    }
    for (std::size_t mask = 1; mask < n_masks; ++mask) {
        for (int j = 0; j < m; ++j) {
            if (!(mask & (std::size_t{1} << j))) continue;
            const double base = dp[mask * m + j];
            if (base == inf) continue;
            for (int k = 0; k < m; ++k) {
                if (mask & (std::size_t{1} << k)) continue;
                const std::size_t next = mask | (std::size_t{1} << k);
                const double cand = base + g.weight(j + 1, k + 1);
                if (cand < dp[next * m + k]) {
                    dp[next * m + k] = cand;
                    parent[next * m + k] = static_cast<std::int8_t>(j);
                }
            }
        }
    }

    const std::size_t full = n_masks - 1;
    double best = inf;
    int best_j = -1;
    for (int j = 0; j < m; ++j) {
        const double cand = dp[full * m + j] + g.weight(j + 1, 0);
        if (cand < best) {
            best = cand;
            best_j = j;
        }
    }

    std::vector<int> order(n);
    std::size_t mask = full;
    int j = best_j;
    for (int pos = n - 1; pos >= 1; --pos) {
        order[pos] = j + 1;
        const int pj = parent[mask * m + j];
        mask &= ~(std::size_t{1} << j);
        j = pj;
    }
    order[0] = 0;
    return Tour{std::move(order)};
}

Tour nearest_neighbor(const WeightedGraph& g, int start) {
    const int n = g.size();
    if (start < 0 || start >= n) throw std::out_of_range("start node out of range");
    std::vector<bool> visited(n, false);
    std::vector<int> order;
    order.reserve(n);
    order.push_back(start);
    visited[start] = true;
    for (int step = 1; step < n; ++step) {
        const int last = order.back();
        int best = -1;
        double best_w = std::numeric_limits<double>::infinity();
        for (int v = 0; v < n; ++v) {
            if (visited[v]) continue;
            const double w = g.weight(last, v);
            if (w < best_w) {
                best_w = w;
                best = v;
            }
        }
        order.push_back(best);
        visited[best] = true;
    }
    // Canonicalize: rotate the cycle so node 0 comes first.
    auto zero = std::find(order.begin(), order.end(), 0);
    std::rotate(order.begin(), zero, order.end());
    return Tour{std::move(order)};
}

Tour random_tour(const WeightedGraph& g, std::mt19937_64& rng) {
    const int n = g.size();
    std::vector<int> rest(n - 1);
    for (int i = 0; i < n - 1; ++i) rest[i] = i + 1;
    shuffle_inplace(rest, rng);
    std::vector<int> order;
    order.reserve(n);
    order.push_back(0);
    order.insert(order.end(), rest.begin(), rest.end());
    return Tour{std::move(order)};
}

double christofides_bound(const WeightedGraph& g) {
    return 1.5 * tour_cost(g, solve_exact(g));
}

} // namespace qtour
