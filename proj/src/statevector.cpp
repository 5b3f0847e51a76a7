#include "qtour/statevector.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace qtour {

Statevector::Statevector(int n_qubits) : n_(n_qubits) {
    if (n_qubits < 1 || n_qubits > kMaxQubits) {
        throw capacity_error("statevector size out of range: n = " + std::to_string(n_qubits) +
                             " (supported: 1.." + std::to_string(kMaxQubits) + ")");
    }
    amps_.assign(std::size_t{1} << n_qubits, cxd{0.0, 0.0});
    amps_[0] = cxd{1.0, 0.0};
}

Statevector Statevector::uniform(int n_qubits) {
    Statevector s(n_qubits);
    const double a = 1.0 / std::sqrt(static_cast<double>(s.dim()));
    for (auto& amp : s.amps_) amp = cxd{a, 0.0};
    return s;
}

void Statevector::check_target(int q) const {
    if (q < 0 || q >= n_) {
        throw std::out_of_range("gate target " + std::to_string(q) + " out of range for " +
                                std::to_string(n_) + " qubits");
    }
}

void Statevector::check_pair(int a, int b) const {
    check_target(a);
    check_target(b);
    if (a == b) {
        throw std::invalid_argument("two-qubit gate targets must be distinct (got " +
                                    std::to_string(a) + ", " + std::to_string(b) + ")");
    }
}

void Statevector::apply(const Gate& g) {
    switch (g.kind) {
        case GateKind::H: apply_h(g.q0); break;
        case GateKind::RX: apply_rx(g.q0, g.angle); break;
        case GateKind::RY: apply_ry(g.q0, g.angle); break;
        case GateKind::RZZ: apply_rzz(g.q0, g.q1, g.angle); break;
        case GateKind::CZ: apply_cz(g.q0, g.q1); break;
    }
}

namespace {

// Visit every (|..0_q..>, |..1_q..>) amplitude pair for one target qubit.
template <typename F>
inline void for_each_pair(std::vector<cxd>& amps, int q, F&& f) {
    const std::size_t step = std::size_t{1} << q;
    const std::size_t dim = amps.size();
    for (std::size_t base = 0; base < dim; base += 2 * step) {
        for (std::size_t off = 0; off < step; ++off) {
            f(amps[base + off], amps[base + off + step]);
        }
    }
}

} // namespace

void Statevector::apply_h(int q) {
    check_target(q);
    static constexpr double inv_sqrt2 = 0.70710678118654752440;
    for_each_pair(amps_, q, [](cxd& a0, cxd& a1) {
        const cxd t0 = a0, t1 = a1;
        a0 = inv_sqrt2 * (t0 + t1);
        a1 = inv_sqrt2 * (t0 - t1);
    });
}

void Statevector::apply_rx(int q, double theta) {
    check_target(q);
    const double c = std::cos(0.5 * theta);
    const cxd mis{0.0, -std::sin(0.5 * theta)};
    for_each_pair(amps_, q, [&](cxd& a0, cxd& a1) {
        const cxd t0 = a0, t1 = a1;
        a0 = c * t0 + mis * t1;
        a1 = mis * t0 + c * t1;
    });
}

void Statevector::apply_ry(int q, double theta) {
    check_target(q);
    const double c = std::cos(0.5 * theta);
    const double s = std::sin(0.5 * theta);
    for_each_pair(amps_, q, [&](cxd& a0, cxd& a1) {
        const cxd t0 = a0, t1 = a1;
        a0 = c * t0 - s * t1;
        a1 = s * t0 + c * t1;
    });
}

void Statevector::apply_rzz(int a, int b, double theta) {
    check_pair(a, b);
    // Diagonal in the computational basis: equal bits pick up e^{-i theta/2},
    // unequal bits e^{+i theta/2}.
    const cxd phase_eq = std::polar(1.0, -0.5 * theta);
    const cxd phase_ne = std::conj(phase_eq);
    const std::size_t ma = std::size_t{1} << a;
    const std::size_t mb = std::size_t{1} << b;
    const std::size_t dim = amps_.size();
    for (std::size_t x = 0; x < dim; ++x) {
        const bool equal = ((x & ma) != 0) == ((x & mb) != 0);
        amps_[x] *= equal ? phase_eq : phase_ne;
    }
}

void Statevector::apply_cz(int a, int b) {
    check_pair(a, b);
    const std::size_t both = (std::size_t{1} << a) | (std::size_t{1} << b);
    const std::size_t dim = amps_.size();
    for (std::size_t x = 0; x < dim; ++x) {
        if ((x & both) == both) amps_[x] = -amps_[x];
    }
}

void Statevector::apply_diagonal_evolution(std::span<const double> diag, double t) {
    if (diag.size() != amps_.size()) {
        throw std::invalid_argument("diagonal length " + std::to_string(diag.size()) +
                                    " does not match statevector dimension " +
                                    std::to_string(amps_.size()));
    }
    const std::size_t dim = amps_.size();
    for (std::size_t x = 0; x < dim; ++x) {
        amps_[x] *= std::polar(1.0, -t * diag[x]);
    }
}

double Statevector::expectation_zz(int a, int b) const {
    check_pair(a, b);
    const std::size_t ma = std::size_t{1} << a;
    const std::size_t mb = std::size_t{1} << b;
    const std::size_t dim = amps_.size();
    double acc = 0.0;
    for (std::size_t x = 0; x < dim; ++x) {
        const double p = std::norm(amps_[x]);
        const bool equal = ((x & ma) != 0) == ((x & mb) != 0);
        acc += equal ? p : -p;
    }
    return acc;
}

double Statevector::norm_squared() const {
    double acc = 0.0;
    for (const auto& a : amps_) acc += std::norm(a);
    return acc;
}

Statevector Statevector::permuted(std::span<const int> sigma) const {
    if (static_cast<int>(sigma.size()) != n_) {
        throw std::invalid_argument("permutation length does not match qubit count");
    }
    std::vector<bool> seen(n_, false);
    for (int v : sigma) {
        if (v < 0 || v >= n_ || seen[v]) {
            throw std::invalid_argument("qubit permutation is not a bijection on 0..n-1");
        }
        seen[v] = true;
    }
    Statevector out(n_);
    const std::size_t dim = amps_.size();
    for (std::size_t x = 0; x < dim; ++x) {
        std::size_t y = 0;
        for (int i = 0; i < n_; ++i) {
            y |= ((x >> i) & 1u) << sigma[i];
        }
        out.amps_[y] = amps_[x];
    }
    return out;
}

} // namespace qtour
