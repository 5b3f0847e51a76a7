#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace qtour {

struct Point {
    double x = 0.0;
    double y = 0.0;
};

double euclidean(Point a, Point b);

// Complete weighted graph over n planar points; the weight of edge (i, j) is
// the Euclidean distance between points i and j. Points must be pairwise
// distinct so that all off-diagonal weights are positive.
class WeightedGraph {
public:
    explicit WeightedGraph(std::vector<Point> coords);

    int size() const { return n_; }
    const std::vector<Point>& coords() const { return coords_; }
    double weight(int i, int j) const { return weights_[static_cast<std::size_t>(i) * n_ + j]; }
    std::span<const double> weights() const { return weights_; }
    double max_weight() const { return max_weight_; }

private:
    int n_ = 0;
    std::vector<Point> coords_;
    std::vector<double> weights_; // row-major n x n, zero diagonal, symmetric
    double max_weight_ = 0.0;
};

// New graph in which old node i carries the new label sigma[i]. sigma must be
// a bijection on 0..n-1.
WeightedGraph relabel(const WeightedGraph& g, std::span<const int> sigma);

inline constexpr double kAlphaVisited = 0.0;
extern const double kAlphaAvailable; // pi

// Node-annotated graph: each node carries an angle that is 0 when the node is
// already part of the partial tour and pi when it is still available. The
// graph is referenced, not owned.
class AnnotatedGraph {
public:
    AnnotatedGraph(const WeightedGraph& g, std::vector<double> alpha);

    // All nodes available except the start node.
    static AnnotatedGraph initial(const WeightedGraph& g, int start = 0);

    const WeightedGraph& graph() const { return *graph_; }
    int size() const { return static_cast<int>(alpha_.size()); }
    std::span<const double> alpha() const { return alpha_; }
    double alpha(int i) const { return alpha_[static_cast<std::size_t>(i)]; }
    bool available(int i) const { return alpha_[static_cast<std::size_t>(i)] != kAlphaVisited; }
    int available_count() const;
    void mark_visited(int i);

private:
    const WeightedGraph* graph_;
    std::vector<double> alpha_;
};

// Closed tour through all nodes, stored as the visiting order. Always starts
// at node 0 and contains every node exactly once; the closing edge back to
// node 0 is implicit.
struct Tour {
    std::vector<int> order;
};

// Throws std::invalid_argument unless t visits every node of g exactly once
// and starts at node 0.
void validate_tour(const WeightedGraph& g, const Tour& t);

// Total length of the closed tour, including the edge back to the start.
double tour_cost(const WeightedGraph& g, const Tour& t);

// Length of an open path (no closing edge). Nodes must be distinct.
double path_cost(const WeightedGraph& g, std::span<const int> path);

// Cost of a cyclic node sequence (closing edge included) without requiring
// the canonical start; used for raw orders produced with arbitrary starts.
double cycle_cost(const WeightedGraph& g, std::span<const int> order);

// Reward for appending node v to the partial tour: the negated new edge
// length. When v is the last remaining node the closing edge back to the
// start is charged too, so rewards over a full episode sum to minus the
// closed tour cost.
double step_reward(const WeightedGraph& g, std::span<const int> partial, int v);

// tour_cost(t) / tour_cost(optimal); >= 1 up to rounding when optimal is
// in fact optimal.
double approximation_ratio(const WeightedGraph& g, const Tour& t, const Tour& optimal);

// count random instances on the unit square, coordinates i.i.d. uniform in
// [0, 1). Deterministic for a fixed seed. Duplicate points are redrawn.
std::vector<WeightedGraph> generate_instances(int n, int count, std::uint64_t seed);

struct Instance {
    WeightedGraph graph;
    std::optional<Tour> optimal;
};

// One instance per line: "x1 y1 x2 y2 ... xn yn" optionally followed by
// "| i1 i2 ... in" giving the optimal tour. The reader also accepts the
// word "output" as separator, 1-based tours, and a trailing repeat of the
// first node; tours are normalized to 0-based order starting at node 0.
std::vector<Instance> load_instances(const std::string& path);
void save_instances(const std::string& path, std::span<const Instance> instances);

} // namespace qtour
