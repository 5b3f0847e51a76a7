#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <vector>

#include "qtour/ansatz.hpp"
#include "qtour/graph.hpp"

namespace qtour {

// Sentinel written into the Q-value slot of every node that is already part
// of the partial tour, so it can never win an argmax.
inline constexpr double kQValueMask = -10000.0;

// Per-node action values for one decision step. Unavailable nodes hold
// exactly kQValueMask; available nodes hold eps_{last,v} * <Z_last Z_v>.
struct QValues {
    std::vector<double> values;
    std::vector<std::uint8_t> available;

    // Argmax over available nodes, ties toward the lowest index.
    int best_available() const;
    int available_count() const;
};

// Evaluate the circuit once and read off the value of every available node.
// `last` must be part of the tour and at least one node must be available.
QValues q_values(const AnsatzProgram& program, std::span<const double> params,
                 const AnnotatedGraph& state, int last);

// Epsilon-greedy: with probability epsilon_explore pick uniformly among the
// available nodes, otherwise the argmax (ties toward the lowest index).
int select_action(const QValues& q, double epsilon_explore, std::mt19937_64& rng);

// Tour construction as an episode: one node appended per step, reward equal
// to the negated new edge length. When a step leaves only one node available
// that node is appended automatically and its edges (including the closing
// edge back to the start) are charged to the same step, so rewards over an
// episode always sum to minus the closed tour cost.
class TspEpisode {
public:
    explicit TspEpisode(const WeightedGraph& g, int start = 0);

    const WeightedGraph& graph() const { return *g_; }
    const AnnotatedGraph& state() const { return state_; }
    int last() const { return order_.back(); }
    bool done() const { return static_cast<int>(order_.size()) == g_->size(); }
    int steps_taken() const { return steps_; }
    const std::vector<int>& order() const { return order_; }

    // Append `action` (must be available), return the reward. Throws
    // std::logic_error if the episode is already complete.
    double step(int action);

    // The finished tour; valid only when done and started at node 0.
    Tour tour() const;

private:
    const WeightedGraph* g_;
    AnnotatedGraph state_;
    std::vector<int> order_;
    int steps_ = 0;
};

struct EpisodeResult {
    Tour tour;
    std::vector<double> rewards; // one entry per agent decision: n - 2 of them
    std::optional<double> ratio; // set when an optimal tour was supplied
};

// Run one full episode with the given circuit family and parameters,
// rebuilding the circuit for the current annotation at every step.
EpisodeResult rollout(AnsatzKind kind, int depth, std::span<const double> params,
                      const WeightedGraph& g, double epsilon_explore, std::mt19937_64& rng,
                      const Tour* optimal = nullptr);

// Greedy (epsilon = 0) tour from an arbitrary start node, as a raw order.
std::vector<int> greedy_order(AnsatzKind kind, int depth, std::span<const double> params,
                              const WeightedGraph& g, int start = 0);

} // namespace qtour
