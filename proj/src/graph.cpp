#include "qtour/graph.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "qtour/rng.hpp"

namespace qtour {

const double kAlphaAvailable = std::numbers::pi;

double euclidean(Point a, Point b) {
    return std::hypot(a.x - b.x, a.y - b.y);
}

WeightedGraph::WeightedGraph(std::vector<Point> coords) : coords_(std::move(coords)) {
    n_ = static_cast<int>(coords_.size());
    if (n_ < 2) {
        throw std::invalid_argument("graph needs at least 2 nodes, got " + std::to_string(n_));
    }
    weights_.assign(static_cast<std::size_t>(n_) * n_, 0.0);
    for (int i = 0; i < n_; ++i) {
        for (int j = i + 1; j < n_; ++j) {
            const double w = euclidean(coords_[i], coords_[j]);
            if (w <= 0.0) {
                throw std::invalid_argument("nodes " + std::to_string(i) + " and " +
                                            std::to_string(j) + " coincide; points must be distinct");
            }
            weights_[static_cast<std::size_t>(i) * n_ + j] = w;
            weights_[static_cast<std::size_t>(j) * n_ + i] = w;
            max_weight_ = std::max(max_weight_, w);
        }
    }
}

namespace {

void check_bijection(int n, std::span<const int> sigma) {
    if (static_cast<int>(sigma.size()) != n) {
        throw std::invalid_argument("permutation length does not match node count");
    }
    std::vector<bool> seen(n, false);
    for (int v : sigma) {
        if (v < 0 || v >= n || seen[v]) {
            throw std::invalid_argument("node permutation is not a bijection on 0..n-1");
        }
        seen[v] = true;
    }
}

} // namespace

WeightedGraph relabel(const WeightedGraph& g, std::span<const int> sigma) {
    const int n = g.size();
    check_bijection(n, sigma);
    std::vector<Point> coords(n);
    for (int i = 0; i < n; ++i) coords[sigma[i]] = g.coords()[i];
    return WeightedGraph(std::move(coords));
}

AnnotatedGraph::AnnotatedGraph(const WeightedGraph& g, std::vector<double> alpha)
    : graph_(&g), alpha_(std::move(alpha)) {
    if (static_cast<int>(alpha_.size()) != g.size()) {
        throw std::invalid_argument("annotation length does not match node count");
    }
    for (double a : alpha_) {
        if (a != kAlphaVisited && a != kAlphaAvailable) {
            throw std::invalid_argument("node annotations must be 0 (visited) or pi (available)");
        }
    }
}

AnnotatedGraph AnnotatedGraph::initial(const WeightedGraph& g, int start) {
    if (start < 0 || start >= g.size()) {
        throw std::out_of_range("start node out of range");
    }
    std::vector<double> alpha(g.size(), kAlphaAvailable);
    alpha[start] = kAlphaVisited;
    return AnnotatedGraph(g, std::move(alpha));
}

int AnnotatedGraph::available_count() const {
    int c = 0;
    for (double a : alpha_) c += (a != kAlphaVisited) ? 1 : 0;
    return c;
}

void AnnotatedGraph::mark_visited(int i) {
    if (i < 0 || i >= size()) throw std::out_of_range("node index out of range");
    alpha_[static_cast<std::size_t>(i)] = kAlphaVisited;
}

void validate_tour(const WeightedGraph& g, const Tour& t) {
    const int n = g.size();
    if (static_cast<int>(t.order.size()) != n) {
        throw std::invalid_argument("tour visits " + std::to_string(t.order.size()) +
                                    " nodes, expected " + std::to_string(n));
    }
    if (t.order[0] != 0) {
        throw std::invalid_argument("tours start at node 0");
    }
    std::vector<bool> seen(n, false);
    for (int v : t.order) {
        if (v < 0 || v >= n) throw std::invalid_argument("tour node out of range");
        if (seen[v]) throw std::invalid_argument("tour repeats node " + std::to_string(v));
        seen[v] = true;
    }
}

double cycle_cost(const WeightedGraph& g, std::span<const int> order) {
    if (order.size() != static_cast<std::size_t>(g.size())) {
        throw std::invalid_argument("cycle must visit every node");
    }
    double c = 0.0;
    for (std::size_t k = 0; k + 1 < order.size(); ++k) c += g.weight(order[k], order[k + 1]);
    c += g.weight(order.back(), order.front());
    return c;
}

double tour_cost(const WeightedGraph& g, const Tour& t) {
    validate_tour(g, t);
    return cycle_cost(g, t.order);
}

double path_cost(const WeightedGraph& g, std::span<const int> path) {
    const int n = g.size();
    std::vector<bool> seen(n, false);
    for (int v : path) {
        if (v < 0 || v >= n) throw std::invalid_argument("path node out of range");
        if (seen[v]) throw std::invalid_argument("path repeats node " + std::to_string(v));
        seen[v] = true;
    }
    double c = 0.0;
    for (std::size_t k = 0; k + 1 < path.size(); ++k) c += g.weight(path[k], path[k + 1]);
    return c;
}

double step_reward(const WeightedGraph& g, std::span<const int> partial, int v) {
    const int n = g.size();
    if (partial.empty()) throw std::invalid_argument("partial tour is empty");
    if (v < 0 || v >= n) throw std::invalid_argument("node index out of range");
    std::vector<bool> seen(n, false);
    for (int u : partial) {
        if (u < 0 || u >= n) throw std::invalid_argument("partial tour node out of range");
        if (seen[u]) throw std::invalid_argument("partial tour repeats a node");
        seen[u] = true;
    }
    if (seen[v]) throw std::invalid_argument("node " + std::to_string(v) + " already visited");
    double r = -g.weight(partial.back(), v);
    if (partial.size() == static_cast<std::size_t>(n) - 1) {
        // v completes the tour: charge the closing edge back to the start.
        r -= g.weight(v, partial.front());
    }
    return r;
}

double approximation_ratio(const WeightedGraph& g, const Tour& t, const Tour& optimal) {
    return tour_cost(g, t) / tour_cost(g, optimal);
}

std::vector<WeightedGraph> generate_instances(int n, int count, std::uint64_t seed) {
    if (n < 4) throw std::invalid_argument("instances need at least 4 cities");
    if (count < 1) throw std::invalid_argument("instance count must be positive");
    auto rng = make_rng(seed);
    std::vector<WeightedGraph> out;
    out.reserve(count);
    for (int c = 0; c < count; ++c) {
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
        out.emplace_back(std::move(pts));
    }
    return out;
}

namespace {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

// Normalize a raw tour token list: accept 1-based indices and a trailing
// repeat of the first node, then rotate so the tour starts at node 0.
Tour normalize_tour(std::vector<int> idx, int n, const std::string& path, std::size_t lineno) {
    const auto fail = [&](const std::string& what) {
        throw std::runtime_error(path + ":" + std::to_string(lineno) + ": " + what);
    };
    if (idx.size() == static_cast<std::size_t>(n) + 1 && idx.front() == idx.back()) {
        idx.pop_back();
    }
    if (idx.size() != static_cast<std::size_t>(n)) {
        fail("tour lists " + std::to_string(idx.size()) + " nodes, expected " + std::to_string(n));
    }
    const auto [lo, hi] = std::minmax_element(idx.begin(), idx.end());
    if (*lo == 1 && *hi == n) {
        for (int& v : idx) --v;
    }
    std::vector<bool> seen(n, false);
    for (int v : idx) {
        if (v < 0 || v >= n || seen[v]) fail("tour is not a permutation of the nodes");
        seen[v] = true;
    }
    auto zero = std::find(idx.begin(), idx.end(), 0);
    std::rotate(idx.begin(), zero, idx.end());
    return Tour{std::move(idx)};
}

} // namespace

std::vector<Instance> load_instances(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open instance file: " + path);
    std::vector<Instance> out;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.find_first_not_of(" \t\r\n") == std::string::npos) continue;
        std::string coord_part = line;
        std::string tour_part;
        if (auto bar = line.find('|'); bar != std::string::npos) {
            coord_part = line.substr(0, bar);
            tour_part = line.substr(bar + 1);
        } else if (auto kw = line.find(" output "); kw != std::string::npos) {
            coord_part = line.substr(0, kw);
            tour_part = line.substr(kw + 8);
        }
        const auto fail = [&](const std::string& what) {
            throw std::runtime_error(path + ":" + std::to_string(lineno) + ": " + what);
        };
        std::istringstream cs(coord_part);
        std::vector<double> vals;
        double v;
        while (cs >> v) vals.push_back(v);
        if (!cs.eof()) fail("malformed coordinate token");
        if (vals.size() < 6 || vals.size() % 2 != 0) {
            fail("expected an even number (>= 6) of coordinates, got " + std::to_string(vals.size()));
        }
        std::vector<Point> pts(vals.size() / 2);
        for (std::size_t i = 0; i < pts.size(); ++i) pts[i] = Point{vals[2 * i], vals[2 * i + 1]};
        WeightedGraph g(std::move(pts));
        std::optional<Tour> opt;
        if (!tour_part.empty()) {
            std::istringstream ts(tour_part);
            std::vector<int> idx;
            int t;
            while (ts >> t) idx.push_back(t);
            if (!ts.eof()) fail("malformed tour token");
            if (!idx.empty()) opt = normalize_tour(std::move(idx), g.size(), path, lineno);
        }
        out.push_back(Instance{std::move(g), std::move(opt)});
    }
    return out;
}

void save_instances(const std::string& path, std::span<const Instance> instances) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write instance file: " + path);
    for (const auto& inst : instances) {
        const auto& pts = inst.graph.coords();
        for (std::size_t i = 0; i < pts.size(); ++i) {
            if (i) out << ' ';
            out << format_double(pts[i].x) << ' ' << format_double(pts[i].y);
        }
        if (inst.optimal) {
            out << " |";
            for (int v : inst.optimal->order) out << ' ' << v;
        }
        out << '\n';
    }
    if (!out) throw std::runtime_error("write failed: " + path);
}

} // namespace qtour
