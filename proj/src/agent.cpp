#include "qtour/agent.hpp"

#include <stdexcept>
#include <string>

#include "qtour/rng.hpp"

namespace qtour {

int QValues::best_available() const {
    int best = -1;
    for (std::size_t v = 0; v < values.size(); ++v) {
        if (!available[v]) continue;
        if (best < 0 || values[v] > values[best]) best = static_cast<int>(v);
    }
    if (best < 0) throw std::logic_error("no available action: episode is complete");
    return best;
}

int QValues::available_count() const {
    int c = 0;
    for (auto a : available) c += a ? 1 : 0;
    return c;
}

QValues q_values(const AnsatzProgram& program, std::span<const double> params,
                 const AnnotatedGraph& state, int last) {
    const int n = state.size();
    if (program.n_qubits() != n) {
        throw std::invalid_argument("circuit qubit count does not match graph size");
    }
    if (last < 0 || last >= n) throw std::out_of_range("last node out of range");
    if (state.available(last)) {
        throw std::invalid_argument("last node must already be part of the tour");
    }
    if (state.available_count() == 0) {
        throw std::logic_error("no available node: episode is complete");
    }
    const Statevector psi = program.evaluate(params);
    QValues q;
    q.values.assign(n, kQValueMask);
    q.available.assign(n, 0);
    for (int v = 0; v < n; ++v) {
        if (!state.available(v)) continue;
        q.available[v] = 1;
        q.values[v] = state.graph().weight(last, v) * psi.expectation_zz(last, v);
    }
    return q;
}

int select_action(const QValues& q, double epsilon_explore, std::mt19937_64& rng) {
    if (epsilon_explore < 0.0 || epsilon_explore > 1.0) {
        throw std::invalid_argument("exploration rate must lie in [0, 1]");
    }
    const int avail = q.available_count();
    if (avail == 0) throw std::logic_error("no available action: episode is complete");
    if (epsilon_explore > 0.0 && uniform01(rng) < epsilon_explore) {
        auto pick = static_cast<int>(uniform_index(rng, static_cast<std::uint64_t>(avail)));
        for (std::size_t v = 0; v < q.available.size(); ++v) {
            if (q.available[v] && pick-- == 0) return static_cast<int>(v);
        }
        throw std::logic_error("unreachable: exploration pick out of range");
    }
    return q.best_available();
}

TspEpisode::TspEpisode(const WeightedGraph& g, int start)
    : g_(&g), state_(AnnotatedGraph::initial(g, start)), order_{start} {
    if (g.size() < 4) throw std::invalid_argument("episodes need at least 4 cities");
}

double TspEpisode::step(int action) {
    if (done()) throw std::logic_error("episode is already complete");
    if (action < 0 || action >= g_->size()) throw std::out_of_range("action out of range");
    if (!state_.available(action)) {
        throw std::invalid_argument("node " + std::to_string(action) + " is not available");
    }
    if (state_.available_count() < 2) {
        throw std::logic_error("final node is appended automatically, not chosen");
    }
    double r = step_reward(*g_, order_, action);
    order_.push_back(action);
    state_.mark_visited(action);
    if (state_.available_count() == 1) {
        // Auto-append the only remaining node; its edge and the closing edge
        // belong to this step's reward.
        for (int v = 0; v < g_->size(); ++v) {
            if (state_.available(v)) {
                r += step_reward(*g_, order_, v);
                order_.push_back(v);
                state_.mark_visited(v);
                break;
            }
        }
    }
    ++steps_;
    return r;
}

Tour TspEpisode::tour() const {
    if (!done()) throw std::logic_error("episode is not complete");
    Tour t{order_};
    validate_tour(*g_, t);
    return t;
}

EpisodeResult rollout(AnsatzKind kind, int depth, std::span<const double> params,
                      const WeightedGraph& g, double epsilon_explore, std::mt19937_64& rng,
                      const Tour* optimal) {
    TspEpisode ep(g);
    EpisodeResult res;
    while (!ep.done()) {
        const AnsatzProgram program = build_ansatz(kind, ep.state(), depth);
        const QValues q = q_values(program, params, ep.state(), ep.last());
        const int a = select_action(q, epsilon_explore, rng);
        res.rewards.push_back(ep.step(a));
    }
    res.tour = ep.tour();
    if (optimal) res.ratio = approximation_ratio(g, res.tour, *optimal);
    return res;
}

std::vector<int> greedy_order(AnsatzKind kind, int depth, std::span<const double> params,
                              const WeightedGraph& g, int start) {
    TspEpisode ep(g, start);
    auto rng = make_rng(0); // never drawn from: epsilon = 0
    while (!ep.done()) {
        const AnsatzProgram program = build_ansatz(kind, ep.state(), depth);
        const QValues q = q_values(program, params, ep.state(), ep.last());
        ep.step(select_action(q, 0.0, rng));
    }
    return ep.order();
}

} // namespace qtour
