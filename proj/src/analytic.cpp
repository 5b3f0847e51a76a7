#include "qtour/analytic.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace qtour {

AnalyticExpectation depth1_expectation_terms(const AnnotatedGraph& s, int last, int v,
                                             double beta, double gamma) {
    const int n = s.size();
    if (last < 0 || last >= n || v < 0 || v >= n) {
        throw std::out_of_range("node index out of range");
    }
    if (last == v) throw std::invalid_argument("candidate equals the last visited node");
    if (s.available(last)) {
        throw std::invalid_argument("last node " + std::to_string(last) +
                                    " must be part of the tour");
    }
    if (!s.available(v)) {
        throw std::invalid_argument("candidate node " + std::to_string(v) + " is not available");
    }
    const WeightedGraph& g = s.graph();
    const double eps = g.weight(last, v);
    AnalyticExpectation out;
    out.sin_beta = std::sin(std::numbers::pi * beta);
    out.sin_edge = std::sin(2.0 * gamma * eps);
    out.cos_product = 1.0;
    for (int k = 0; k < n; ++k) {
        if (k == last || k == v) continue;
        out.cos_product *= std::cos(2.0 * gamma * g.weight(v, k));
    }
    out.value = eps * out.sin_beta * out.sin_edge * out.cos_product;
    return out;
}

double depth1_expectation(const AnnotatedGraph& s, int last, int v, double beta, double gamma) {
    return depth1_expectation_terms(s, last, v, beta, gamma).value;
}

std::vector<int> depth1_greedy_order(const WeightedGraph& g, double beta, double gamma,
                                     int start) {
    const int n = g.size();
    if (n < 3) throw std::invalid_argument("greedy construction needs at least 3 nodes");
    AnnotatedGraph s = AnnotatedGraph::initial(g, start);
    std::vector<int> order{start};
    while (s.available_count() > 1) {
        const int last = order.back();
        int best = -1;
        double best_v = 0.0;
        for (int v = 0; v < n; ++v) {
            if (!s.available(v)) continue;
            const double q = depth1_expectation(s, last, v, beta, gamma);
            if (best < 0 || q > best_v) {
                best = v;
                best_v = q;
            }
        }
        order.push_back(best);
        s.mark_visited(best);
    }
    for (int v = 0; v < n; ++v) {
        if (s.available(v)) {
            order.push_back(v);
            s.mark_visited(v);
        }
    }
    return order;
}

Tour depth1_greedy_tour(const WeightedGraph& g, double beta, double gamma) {
    Tour t{depth1_greedy_order(g, beta, gamma, 0)};
    validate_tour(g, t);
    return t;
}

} // namespace qtour
