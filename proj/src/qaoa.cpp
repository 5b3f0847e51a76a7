#include "qtour/qaoa.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

#include "qtour/errors.hpp"
#include "qtour/parallel.hpp"
#include "qtour/rng.hpp"

namespace qtour {

QuboProblem::QuboProblem(const WeightedGraph& g, double penalty_weight)
    : n_cities_(g.size()), penalty_weight_(penalty_weight) {
    if (n_cities_ < 4) throw std::invalid_argument("QUBO needs at least 4 cities");
    if (penalty_weight <= 0.0) throw std::invalid_argument("penalty weight must be positive");
    const int m = n_cities_ - 1;
    n_vars_ = m * m;
    if (n_vars_ > kQaoaMaxVariables) {
        throw capacity_error("QUBO limited to " + std::to_string(kQaoaMaxVariables) +
                             " variables (5 cities), got " + std::to_string(n_vars_) + " for " +
                             std::to_string(n_cities_) + " cities");
    }
    max_weight_ = g.max_weight();
    linear_.assign(n_vars_, 0.0);
    quad_.assign(static_cast<std::size_t>(n_vars_) * n_vars_, 0.0);

    // Distance terms, normalized by the largest weight. City 0 is pinned to
    // time 0, so the first and last legs are linear terms and interior legs
    // couple consecutive time slots.
    const double W = max_weight_;
    for (int j = 1; j < n_cities_; ++j) {
        linear_[var_index(j, 1)] += g.weight(0, j) / W;
        linear_[var_index(j, m)] += g.weight(j, 0) / W;
    }
    for (int t = 1; t <= m - 1; ++t) {
        for (int i = 1; i < n_cities_; ++i) {
            for (int j = 1; j < n_cities_; ++j) {
                if (i == j) continue;
                add_quad(var_index(i, t), var_index(j, t + 1), g.weight(i, j) / W);
            }
        }
    }

    // One-hot penalties: (1 - sum x)^2 per remaining city and per time slot.
    // With binary variables each expands to 1 - sum x + 2 * sum_{pairs} x x'.
    constant_ = penalty_weight_ * 2.0 * m;
    for (int v = 0; v < n_vars_; ++v) linear_[v] -= 2.0 * penalty_weight_;
    for (int i = 1; i < n_cities_; ++i) {
        for (int t = 1; t <= m; ++t) {
            for (int u = t + 1; u <= m; ++u) {
                add_quad(var_index(i, t), var_index(i, u), 2.0 * penalty_weight_);
            }
        }
    }
    for (int t = 1; t <= m; ++t) {
        for (int i = 1; i < n_cities_; ++i) {
            for (int j = i + 1; j < n_cities_; ++j) {
                add_quad(var_index(i, t), var_index(j, t), 2.0 * penalty_weight_);
            }
        }
    }

    time_masks_.assign(m + 1, 0);
    city_masks_.assign(n_cities_, 0);
    for (int i = 1; i < n_cities_; ++i) {
        for (int t = 1; t <= m; ++t) {
            const std::uint32_t bit = 1u << var_index(i, t);
            time_masks_[t] |= bit;
            city_masks_[i] |= bit;
        }
    }
}

void QuboProblem::add_quad(int a, int b, double w) {
    quad_[static_cast<std::size_t>(a) * n_vars_ + b] += w;
    quad_[static_cast<std::size_t>(b) * n_vars_ + a] += w;
}

int QuboProblem::var_index(int city, int time) const {
    const int m = n_cities_ - 1;
    if (city < 1 || city >= n_cities_ || time < 1 || time > m) {
        throw std::out_of_range("variable (city " + std::to_string(city) + ", time " +
                                std::to_string(time) + ") out of range");
    }
    return (city - 1) * m + (time - 1);
}

double QuboProblem::objective(std::uint32_t assignment) const {
    double acc = constant_;
    for (int a = 0; a < n_vars_; ++a) {
        if (!(assignment & (1u << a))) continue;
        acc += linear_[a];
        for (int b = a + 1; b < n_vars_; ++b) {
            if (assignment & (1u << b)) acc += quad_[static_cast<std::size_t>(a) * n_vars_ + b];
        }
    }
    return acc;
}

bool QuboProblem::feasible(std::uint32_t assignment) const {
    const int m = n_cities_ - 1;
    for (int t = 1; t <= m; ++t) {
        if (std::popcount(assignment & time_masks_[t]) != 1) return false;
    }
    for (int i = 1; i < n_cities_; ++i) {
        if (std::popcount(assignment & city_masks_[i]) != 1) return false;
    }
    return true;
}

Tour QuboProblem::decode(std::uint32_t assignment) const {
    if (!feasible(assignment)) {
        throw std::invalid_argument("assignment is not a one-hot tour encoding");
    }
    const int m = n_cities_ - 1;
    std::vector<int> order{0};
    for (int t = 1; t <= m; ++t) {
        for (int i = 1; i < n_cities_; ++i) {
            if (assignment & (1u << var_index(i, t))) {
                order.push_back(i);
                break;
            }
        }
    }
    return Tour{std::move(order)};
}

std::uint32_t QuboProblem::encode(const Tour& t) const {
    if (static_cast<int>(t.order.size()) != n_cities_ || t.order[0] != 0) {
        throw std::invalid_argument("tour does not match the QUBO's city count");
    }
    std::uint32_t bits = 0;
    for (int k = 1; k < n_cities_; ++k) bits |= 1u << var_index(t.order[k], k);
    return bits;
}

std::vector<double> QuboProblem::cost_diagonal() const {
    std::vector<double> diag(std::size_t{1} << n_vars_);
    for (std::size_t x = 0; x < diag.size(); ++x) {
        diag[x] = objective(static_cast<std::uint32_t>(x));
    }
    return diag;
}

QuboProblem build_qubo(const WeightedGraph& g, double penalty_weight) {
    return QuboProblem(g, penalty_weight);
}

QaoaCircuit::QaoaCircuit(const QuboProblem& q, int depth)
    : q_(&q), depth_(depth), diag_(q.cost_diagonal()) {
    if (depth < 1) throw std::invalid_argument("depth must be at least 1");
}

Statevector QaoaCircuit::state(std::span<const double> params) const {
    if (static_cast<int>(params.size()) != 2 * depth_) {
        throw std::invalid_argument("expected " + std::to_string(2 * depth_) +
                                    " parameters, got " + std::to_string(params.size()));
    }
    Statevector s = Statevector::uniform(q_->n_vars());
    for (int l = 0; l < depth_; ++l) {
        s.apply_diagonal_evolution(diag_, params[l]);
        for (int qubit = 0; qubit < q_->n_vars(); ++qubit) {
            s.apply_rx(qubit, 2.0 * params[depth_ + l]);
        }
    }
    return s;
}

double QaoaCircuit::expected_cost(std::span<const double> params) const {
    const Statevector s = state(params);
    double acc = 0.0;
    const auto amps = s.amplitudes();
    for (std::size_t x = 0; x < amps.size(); ++x) acc += std::norm(amps[x]) * diag_[x];
    return acc;
}

MeasuredOutcome best_feasible_outcome(const QuboProblem& q, const Statevector& s) {
    MeasuredOutcome best;
    const auto amps = s.amplitudes();
    for (std::size_t x = 0; x < amps.size(); ++x) {
        const double p = std::norm(amps[x]);
        if (p <= 0.0) continue;
        const auto bits = static_cast<std::uint32_t>(x);
        if (!q.feasible(bits)) continue;
        const double value = q.objective(bits);
        const bool better = !best.feasible || p > best.probability ||
                            (p == best.probability && value < best.qubo_value);
        if (better) {
            best.feasible = true;
            best.bits = bits;
            best.probability = p;
            best.qubo_value = value;
        }
    }
    if (best.feasible) best.tour = q.decode(best.bits);
    return best;
}

SimplexResult nelder_mead(const std::function<double(std::span<const double>)>& f,
                          std::span<const double> x0, double step, int max_evals, double ftol) {
    const int d = static_cast<int>(x0.size());
    if (d < 1) throw std::invalid_argument("need at least one dimension");
    if (max_evals < d + 1) throw std::invalid_argument("evaluation budget too small");

    SimplexResult best;
    best.value = std::numeric_limits<double>::infinity();
    int evals = 0;
    auto eval = [&](const std::vector<double>& x) {
        const double v = f(x);
        ++evals;
        if (v < best.value) {
            best.value = v;
            best.x = x;
        }
        return v;
    };

    std::vector<std::vector<double>> pts(d + 1, std::vector<double>(x0.begin(), x0.end()));
    std::vector<double> fv(d + 1);
    for (int i = 1; i <= d; ++i) pts[i][i - 1] += step;
    for (int i = 0; i <= d; ++i) fv[i] = eval(pts[i]);

    while (evals < max_evals) {
        std::vector<int> idx(d + 1);
        for (int i = 0; i <= d; ++i) idx[i] = i;
        std::sort(idx.begin(), idx.end(), [&](int a, int b) { return fv[a] < fv[b]; });
        const int lo = idx[0], hi = idx[d], second_hi = idx[d - 1];
        if (fv[hi] - fv[lo] < ftol) break;

        std::vector<double> centroid(d, 0.0);
        for (int i = 0; i <= d; ++i) {
            if (i == hi) continue;
            for (int k = 0; k < d; ++k) centroid[k] += pts[i][k];
        }
        for (int k = 0; k < d; ++k) centroid[k] /= d;

        auto blend = [&](double w) {
            std::vector<double> x(d);
            for (int k = 0; k < d; ++k) x[k] = centroid[k] + w * (pts[hi][k] - centroid[k]);
            return x;
        };

        const auto xr = blend(-1.0); // reflection
        const double fr = eval(xr);
        if (fr < fv[lo]) {
            if (evals < max_evals) {
                const auto xe = blend(-2.0); // expansion
                const double fe = eval(xe);
                if (fe < fr) {
                    pts[hi] = xe;
                    fv[hi] = fe;
                    continue;
                }
            }
            pts[hi] = xr;
            fv[hi] = fr;
            continue;
        }
        if (fr < fv[second_hi]) {
            pts[hi] = xr;
            fv[hi] = fr;
            continue;
        }
        if (evals >= max_evals) break;
        const bool outside = fr < fv[hi];
        const auto xc = blend(outside ? -0.5 : 0.5); // contraction
        const double fc = eval(xc);
        if (fc < std::min(fr, fv[hi])) {
            pts[hi] = xc;
            fv[hi] = fc;
            continue;
        }
        // Shrink toward the best vertex; stop early if the budget runs out.
        for (int i = 0; i <= d && evals < max_evals; ++i) {
            if (i == lo) continue;
            for (int k = 0; k < d; ++k) pts[i][k] = pts[lo][k] + 0.5 * (pts[i][k] - pts[lo][k]);
            fv[i] = eval(pts[i]);
        }
    }
    best.evaluations = evals;
    return best;
}

namespace {

QaoaResult finish_result(const QuboProblem& q, int depth, std::vector<double> params,
                         double expected, int evaluations) {
    QaoaCircuit circuit(q, depth);
    QaoaResult res;
    res.depth = depth;
    res.params = std::move(params);
    res.expected_cost = expected;
    res.evaluations = evaluations;
    res.outcome = best_feasible_outcome(q, circuit.state(res.params));
    return res;
}

} // namespace

QaoaResult optimize_qaoa(const QuboProblem& q, int depth, int random_budget, std::uint64_t seed,
                         int threads) {
    if (depth < 1) throw std::invalid_argument("depth must be at least 1");
    if (random_budget < 1) throw std::invalid_argument("random search budget must be positive");

    int evaluations = 0;

    // Depth 1: uniform random search over [0, 2pi)^2.
    QaoaCircuit c1(q, 1);
    auto rng = make_rng(seed, 100);
    std::vector<std::array<double, 2>> cand(random_budget);
    for (auto& c : cand) {
        c[0] = uniform_real(rng, 0.0, 2.0 * std::numbers::pi);
        c[1] = uniform_real(rng, 0.0, 2.0 * std::numbers::pi);
    }
    std::vector<double> value(random_budget, 0.0);
    parallel_for(cand.size(), threads, [&](std::size_t i) {
        value[i] = c1.expected_cost(std::array{cand[i][0], cand[i][1]});
    });
    evaluations += random_budget;
    std::size_t best_i = 0;
    for (std::size_t i = 1; i < cand.size(); ++i) {
        if (value[i] < value[best_i]) best_i = i;
    }
    std::vector<double> params{cand[best_i][0], cand[best_i][1]};
    double expected = value[best_i];

    // Deeper layers: append zeros (state-preserving) and locally optimize.
    for (int p = 2; p <= depth; ++p) {
        std::vector<double> x0(2 * p, 0.0);
        for (int l = 0; l < p - 1; ++l) {
            x0[l] = params[l];
            x0[p + l] = params[p - 1 + l];
        }
        QaoaCircuit cp(q, p);
        const auto res = nelder_mead(
            [&](std::span<const double> x) { return cp.expected_cost(x); }, x0, 0.25, 500);
        evaluations += res.evaluations;
        params = res.x;
        expected = res.value;
    }
    return finish_result(q, depth, std::move(params), expected, evaluations);
}

QaoaResult evaluate_qaoa(const QuboProblem& q, int depth, std::span<const double> params) {
    QaoaCircuit circuit(q, depth);
    return finish_result(q, depth, std::vector<double>(params.begin(), params.end()),
                         circuit.expected_cost(params), 1);
}

} // namespace qtour
