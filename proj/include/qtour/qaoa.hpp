#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "qtour/graph.hpp"
#include "qtour/statevector.hpp"

namespace qtour {

inline constexpr int kQaoaMaxVariables = 16;

// Quadratic binary program for a tour: one variable per (city, time) pair
// with city 0 fixed at time 0, so an n-city instance has (n-1)^2 variables.
// The objective is
//
//   sum over consecutive assignments of eps_ij / W   (W = largest weight)
// + penalty_weight * sum_i (1 - sum_t x_{i,t})^2
// + penalty_weight * sum_t (1 - sum_i x_{i,t})^2
//
// expanded to constant + linear + pairwise form. For every feasible
// assignment, W * objective equals the closed tour cost exactly.
class QuboProblem {
public:
    QuboProblem(const WeightedGraph& g, double penalty_weight);

    int n_cities() const { return n_cities_; }
    int n_vars() const { return n_vars_; }
    double max_weight() const { return max_weight_; }
    double penalty_weight() const { return penalty_weight_; }
    double constant() const { return constant_; }
    std::span<const double> linear() const { return linear_; }
    double quad(int a, int b) const { return quad_[static_cast<std::size_t>(a) * n_vars_ + b]; }

    // Flat index of the variable "city v sits at time t", v, t in 1..n-1.
    int var_index(int city, int time) const;

    double objective(std::uint32_t assignment) const;

    // One-hot feasibility: exactly one city per time and one time per city.
    bool feasible(std::uint32_t assignment) const;

    // Tour from a feasible assignment; throws std::invalid_argument on an
    // infeasible one.
    Tour decode(std::uint32_t assignment) const;
    std::uint32_t encode(const Tour& t) const;

    // objective() tabulated over all 2^n_vars assignments.
    std::vector<double> cost_diagonal() const;

private:
    void add_quad(int a, int b, double w);

    int n_cities_ = 0;
    int n_vars_ = 0;
    double max_weight_ = 0.0;
    double penalty_weight_ = 1.0;
    double constant_ = 0.0;
    std::vector<double> linear_;
    std::vector<double> quad_; // full symmetric matrix, zero diagonal
    std::vector<std::uint32_t> time_masks_;
    std::vector<std::uint32_t> city_masks_;
};

QuboProblem build_qubo(const WeightedGraph& g, double penalty_weight = 1.0);

// Alternating phase-separator / mixer circuit over the QUBO diagonal.
// Parameters are laid out as [gamma_1..gamma_p, beta_1..beta_p]; one layer
// applies exp(-i gamma C) followed by RX(2 beta) on every qubit, starting
// from the uniform superposition.
class QaoaCircuit {
public:
    QaoaCircuit(const QuboProblem& q, int depth);

    int depth() const { return depth_; }
    int n_params() const { return 2 * depth_; }
    Statevector state(std::span<const double> params) const;
    double expected_cost(std::span<const double> params) const;
    std::span<const double> cost_diagonal() const { return diag_; }

private:
    const QuboProblem* q_;
    int depth_;
    std::vector<double> diag_;
};

// The measurement readout: outcomes ranked by probability (descending), the
// first feasible one wins; probability ties break toward the lower QUBO
// value, then the lower index. feasible == false means no feasible
// assignment has nonzero probability.
struct MeasuredOutcome {
    bool feasible = false;
    std::uint32_t bits = 0;
    double probability = 0.0;
    double qubo_value = 0.0;
    Tour tour;
};

MeasuredOutcome best_feasible_outcome(const QuboProblem& q, const Statevector& s);

struct SimplexResult {
    std::vector<double> x;
    double value = 0.0;
    int evaluations = 0;
};

// Derivative-free Nelder-Mead minimization with a hard evaluation budget.
// Returns the best point seen across all evaluations, so the result is
// never worse than f(x0).
SimplexResult nelder_mead(const std::function<double(std::span<const double>)>& f,
                          std::span<const double> x0, double step, int max_evals,
                          double ftol = 1e-10);

struct QaoaResult {
    int depth = 1;
    std::vector<double> params;
    double expected_cost = 0.0;
    int evaluations = 0;
    MeasuredOutcome outcome;
};

// Depth 1 is optimized by uniform random search over [0, 2pi)^2 with
// `random_budget` evaluations; each further layer is initialized with zeros
// appended to the previous optimum (leaving the state unchanged) and locally
// optimized with at most 500 Nelder-Mead evaluations.
QaoaResult optimize_qaoa(const QuboProblem& q, int depth, int random_budget, std::uint64_t seed,
                         int threads = 1);

// Apply fixed parameters (no optimization), e.g. transferred from another
// instance's optimum.
QaoaResult evaluate_qaoa(const QuboProblem& q, int depth, std::span<const double> params);

} // namespace qtour
