#include "qtour/propcheck.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <span>

#include "qtour/agent.hpp"
#include "qtour/analytic.hpp"
#include "qtour/ansatz.hpp"
#include "qtour/rng.hpp"
#include "qtour/statevector.hpp"
#include "qtour/trainer.hpp"

namespace qtour {

WeightedGraph random_graph(int n, std::mt19937_64& rng) {
    std::vector<Point> pts;
    pts.reserve(n);
    while (static_cast<int>(pts.size()) < n) {
        Point p{uniform01(rng), uniform01(rng)};
        bool dup = false;
        for (const auto& q : pts) {
            if (q.x == p.x && q.y == p.y) { dup = true; break; }
        }
        if (!dup) pts.push_back(p);
    }
    return WeightedGraph(std::move(pts));
}

std::vector<int> random_permutation(int n, std::mt19937_64& rng) {
    std::vector<int> sigma(n);
    for (int i = 0; i < n; ++i) sigma[i] = i;
    shuffle_inplace(sigma, rng);
    return sigma;
}

namespace {

// Random {0, pi} annotation with node `fixed_visited` forced into the tour
// and at least one node left available.
std::vector<double> random_alpha(int n, int fixed_visited, std::mt19937_64& rng) {
    std::vector<double> alpha(n, kAlphaAvailable);
    alpha[fixed_visited] = kAlphaVisited;
    for (int i = 0; i < n; ++i) {
        if (i != fixed_visited && uniform01(rng) < 0.5) alpha[i] = kAlphaVisited;
    }
    bool any = false;
    for (double a : alpha) any = any || a == kAlphaAvailable;
    if (!any) alpha[fixed_visited == 0 ? n - 1 : 0] = kAlphaAvailable;
    return alpha;
}

std::vector<double> random_params(int count, std::mt19937_64& rng) {
    std::vector<double> p(count);
    for (auto& v : p) v = uniform_real(rng, -2.0 * std::numbers::pi, 2.0 * std::numbers::pi);
    return p;
}

std::vector<double> permute_alpha(std::span<const double> alpha, std::span<const int> sigma) {
    std::vector<double> out(alpha.size());
    for (std::size_t i = 0; i < alpha.size(); ++i) out[sigma[i]] = alpha[i];
    return out;
}

CheckReport finish(CheckReport r) {
    r.passed = r.failures == 0 && r.max_deviation <= r.tolerance;
    return r;
}

} // namespace

CheckReport check_state_equivariance(int trials, std::uint64_t seed) {
    CheckReport report{.name = "state-equivariance", .trials = trials, .tolerance = 1e-10};
    auto rng = make_rng(seed, 10);
    for (int t = 0; t < trials; ++t) {
        const int n = 3 + static_cast<int>(uniform_index(rng, 6));
        const int depth = 1 + static_cast<int>(uniform_index(rng, 3));
        const WeightedGraph g = random_graph(n, rng);
        const auto alpha = random_alpha(n, static_cast<int>(uniform_index(rng, n)), rng);
        const auto params = random_params(2 * depth, rng);
        const auto sigma = random_permutation(n, rng);

        const AnnotatedGraph state(g, alpha);
        const Statevector direct = build_eqc(state, depth).evaluate(params);

        const WeightedGraph gp = relabel(g, sigma);
        const AnnotatedGraph state_p(gp, permute_alpha(alpha, sigma));
        const Statevector relabeled = build_eqc(state_p, depth).evaluate(params);

        const Statevector permuted = direct.permuted(sigma);
        for (std::size_t x = 0; x < permuted.dim(); ++x) {
            const double dev = std::abs(permuted.amplitude(x) - relabeled.amplitude(x));
            report.max_deviation = std::max(report.max_deviation, dev);
        }
    }
    return finish(report);
}

CheckReport check_qvalue_equivariance(int trials, std::uint64_t seed) {
    CheckReport report{.name = "qvalue-equivariance", .trials = trials, .tolerance = 1e-10};
    auto rng = make_rng(seed, 11);
    for (int t = 0; t < trials; ++t) {
        const int n = 4 + static_cast<int>(uniform_index(rng, 5));
        const int depth = 1 + static_cast<int>(uniform_index(rng, 2));
        const WeightedGraph g = random_graph(n, rng);
        const int last = static_cast<int>(uniform_index(rng, n));
        const auto alpha = random_alpha(n, last, rng);
        const auto params = random_params(2 * depth, rng);
        const auto sigma = random_permutation(n, rng);

        const AnnotatedGraph state(g, alpha);
        const QValues q = q_values(build_eqc(state, depth), params, state, last);

        const WeightedGraph gp = relabel(g, sigma);
        const AnnotatedGraph state_p(gp, permute_alpha(alpha, sigma));
        const QValues qp = q_values(build_eqc(state_p, depth), params, state_p, sigma[last]);

        for (int v = 0; v < n; ++v) {
            if (q.available[v] != qp.available[sigma[v]]) {
                ++report.failures;
                continue;
            }
            if (q.available[v]) {
                report.max_deviation =
                    std::max(report.max_deviation, std::abs(q.values[v] - qp.values[sigma[v]]));
            } else if (q.values[v] != kQValueMask || qp.values[sigma[v]] != kQValueMask) {
                ++report.failures;
            }
        }
    }
    return finish(report);
}

CheckReport check_tour_equivariance(int trials, std::uint64_t seed) {
    CheckReport report{.name = "tour-equivariance", .trials = trials, .tolerance = 0.0};
    auto rng = make_rng(seed, 12);
    for (int t = 0; t < trials; ++t) {
        const int n = 4 + static_cast<int>(uniform_index(rng, 4));
        const int depth = 1 + static_cast<int>(uniform_index(rng, 2));
        const WeightedGraph g = random_graph(n, rng);
        const auto params = random_params(2 * depth, rng);
        const auto sigma = random_permutation(n, rng);

        const auto order = greedy_order(AnsatzKind::eqc, depth, params, g, 0);
        const WeightedGraph gp = relabel(g, sigma);
        const auto order_p = greedy_order(AnsatzKind::eqc, depth, params, gp, sigma[0]);

        bool ok = order.size() == order_p.size();
        for (std::size_t k = 0; ok && k < order.size(); ++k) {
            ok = order_p[k] == sigma[order[k]];
        }
        if (!ok) ++report.failures;
    }
    return finish(report);
}

CheckReport check_analytic_oracle(int trials, std::uint64_t seed) {
    CheckReport report{.name = "analytic-depth1", .trials = trials, .tolerance = 1e-9};
    auto rng = make_rng(seed, 13);
    for (int t = 0; t < trials; ++t) {
        const int n = 3 + static_cast<int>(uniform_index(rng, 4));
        const WeightedGraph g = random_graph(n, rng);
        const int last = static_cast<int>(uniform_index(rng, n));
        const auto alpha = random_alpha(n, last, rng);
        const double beta = uniform_real(rng, -2.0, 2.0);
        const double gamma = uniform_real(rng, -2.0, 2.0);

        const AnnotatedGraph state(g, alpha);
        const QValues q = q_values(build_eqc(state, 1), std::array{gamma, beta}, state, last);
        for (int v = 0; v < n; ++v) {
            if (!q.available[v]) continue;
            const double closed = depth1_expectation(state, last, v, beta, gamma);
            report.max_deviation = std::max(report.max_deviation, std::abs(q.values[v] - closed));
        }
    }
    return finish(report);
}

CheckReport check_gradients(int trials, std::uint64_t seed) {
    CheckReport report{.name = "gradient-consistency", .trials = 0, .tolerance = 1e-5};
    auto rng = make_rng(seed, 14);
    const int n = 4;
    for (AnsatzKind kind :
         {AnsatzKind::eqc, AnsatzKind::neqc, AnsatzKind::hwete, AnsatzKind::hwe}) {
        for (int depth : {1, 2}) {
            for (int t = 0; t < trials; ++t) {
                const WeightedGraph g = random_graph(n, rng);
                const int last = static_cast<int>(uniform_index(rng, n));
                const auto alpha = random_alpha(n, last, rng);
                const AnnotatedGraph state(g, alpha);
                const std::uint32_t avail = mask_from_state(state);
                int action = -1;
                for (int v = 0; v < n; ++v) {
                    if (state.available(v)) { action = v; break; }
                }
                const auto params = random_params(trainable_count(kind, n, depth), rng);

                const auto shift = q_gradient(g, kind, depth, params, avail, last, action,
                                              GradientMethod::parameter_shift);
                const auto central = q_gradient(g, kind, depth, params, avail, last, action,
                                                GradientMethod::central_difference);
                for (std::size_t p = 0; p < shift.size(); ++p) {
                    const double scale = std::max({1.0, std::abs(shift[p]), std::abs(central[p])});
                    report.max_deviation = std::max(report.max_deviation,
                                                    std::abs(shift[p] - central[p]) / scale);
                }
                ++report.trials;
            }
        }
    }
    return finish(report);
}

} // namespace qtour
