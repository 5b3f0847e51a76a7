#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "qtour/errors.hpp"

namespace qtour {

using cxd = std::complex<double>;

inline constexpr int kMaxQubits = 24;

enum class GateKind { H, RX, RY, RZZ, CZ };

// One gate application. q1 is used by the two-qubit kinds (RZZ, CZ) and must
// stay -1 for the single-qubit kinds. The angle is ignored for H and CZ.
struct Gate {
    GateKind kind = GateKind::H;
    int q0 = 0;
    int q1 = -1;
    double angle = 0.0;

    static Gate h(int q) { return {GateKind::H, q, -1, 0.0}; }
    static Gate rx(int q, double theta) { return {GateKind::RX, q, -1, theta}; }
    static Gate ry(int q, double theta) { return {GateKind::RY, q, -1, theta}; }
    static Gate rzz(int a, int b, double theta) { return {GateKind::RZZ, a, b, theta}; }
    static Gate cz(int a, int b) { return {GateKind::CZ, a, b, 0.0}; }
};

// Dense statevector over n qubits, n <= 24 (2^24 amplitudes, ~256 MB as
// complex<double>). Qubit i is bit i of the basis-state index.
//
// Rotation conventions: RX(t) = exp(-i t X / 2), RY(t) = exp(-i t Y / 2),
// RZZ(t) = exp(-i t Z(x)Z / 2). RZZ and CZ are applied as diagonal phase
// passes over the amplitudes, never as a dense two-qubit matrix.
class Statevector {
public:
    // |0...0>
    explicit Statevector(int n_qubits);
    // |+>^n, the uniform superposition over all 2^n basis states
    static Statevector uniform(int n_qubits);

    int n_qubits() const { return n_; }
    std::size_t dim() const { return amps_.size(); }
    std::span<const cxd> amplitudes() const { return amps_; }
    std::span<cxd> amplitudes() { return amps_; }
    cxd amplitude(std::size_t i) const { return amps_[i]; }

    void apply(const Gate& g);
    void apply_h(int q);
    void apply_rx(int q, double theta);
    void apply_ry(int q, double theta);
    void apply_rzz(int a, int b, double theta);
    void apply_cz(int a, int b);

    // exp(-i t D) for a diagonal operator D given by its value on every
    // basis state (diag.size() must equal dim()).
    void apply_diagonal_evolution(std::span<const double> diag, double t);

    // <Z_a Z_b>, a != b. Sum of |amp|^2 weighted by the parity of bits a, b.
    double expectation_zz(int a, int b) const;

    double norm_squared() const;

    // Relabel qubits by the permutation sigma: the amplitude of basis state
    // x moves to the index y with bit sigma[i] of y equal to bit i of x.
    // For any state s:  s.permuted(sigma).expectation_zz(sigma[a], sigma[b])
    // equals s.expectation_zz(a, b).
    Statevector permuted(std::span<const int> sigma) const;

private:
    void check_target(int q) const;
    void check_pair(int a, int b) const;

    int n_;
    std::vector<cxd> amps_;
};

} // namespace qtour
