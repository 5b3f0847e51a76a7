#include "qtour/ansatz.hpp"

#include <stdexcept>
#include <string>

namespace qtour {

AnsatzKind ansatz_from_string(std::string_view name) {
    if (name == "eqc") return AnsatzKind::eqc;
    if (name == "neqc") return AnsatzKind::neqc;
    if (name == "hwete") return AnsatzKind::hwete;
    if (name == "hwe") return AnsatzKind::hwe;
    throw std::invalid_argument("unknown ansatz '" + std::string(name) +
                                "' (expected eqc, neqc, hwete, or hwe)");
}

std::string_view to_string(AnsatzKind kind) {
    switch (kind) {
        case AnsatzKind::eqc: return "eqc";
        case AnsatzKind::neqc: return "neqc";
        case AnsatzKind::hwete: return "hwete";
        case AnsatzKind::hwe: return "hwe";
    }
    throw std::logic_error("unreachable ansatz kind");
}

int trainable_count(AnsatzKind kind, int n, int depth) {
    if (n < 2) throw std::invalid_argument("need at least 2 nodes");
    if (depth < 1) throw std::invalid_argument("depth must be at least 1");
    const int edges = n * (n - 1) / 2;
    switch (kind) {
        case AnsatzKind::eqc: return 2 * depth;
        case AnsatzKind::neqc: return depth * (edges + n);
        case AnsatzKind::hwete: return depth * (edges + 2 * n);
        case AnsatzKind::hwe: return depth * n;
    }
    throw std::logic_error("unreachable ansatz kind");
}

AnsatzProgram::AnsatzProgram(AnsatzKind kind, int n_qubits, int depth, int n_trainable,
                             std::vector<AnsatzGate> gates)
    : kind_(kind), n_qubits_(n_qubits), depth_(depth), n_trainable_(n_trainable),
      gates_(std::move(gates)), sites_(n_trainable) {
    for (int gi = 0; gi < static_cast<int>(gates_.size()); ++gi) {
        const int p = gates_[gi].param;
        if (p >= n_trainable_) throw std::logic_error("gate references a missing parameter");
        if (p >= 0) sites_[p].push_back(gi);
    }
}

Statevector AnsatzProgram::run(std::span<const double> params, int shifted_gate,
                               double delta) const {
    if (static_cast<int>(params.size()) != n_trainable_) {
        throw std::invalid_argument("expected " + std::to_string(n_trainable_) +
                                    " parameters, got " + std::to_string(params.size()));
    }
    Statevector s(n_qubits_);
    for (int gi = 0; gi < static_cast<int>(gates_.size()); ++gi) {
        const AnsatzGate& ag = gates_[gi];
        double angle = ag.param >= 0 ? ag.coeff * params[ag.param] : ag.coeff;
        if (gi == shifted_gate) angle += delta;
        s.apply(Gate{ag.kind, ag.q0, ag.q1, angle});
    }
    return s;
}

Statevector AnsatzProgram::evaluate(std::span<const double> params) const {
    return run(params, -1, 0.0);
}

Statevector AnsatzProgram::evaluate_shifted(std::span<const double> params, int gate_index,
                                            double delta) const {
    if (gate_index < 0 || gate_index >= static_cast<int>(gates_.size())) {
        throw std::out_of_range("gate index out of range");
    }
    return run(params, gate_index, delta);
}

namespace {

void append_zz_block(std::vector<AnsatzGate>& gates, const WeightedGraph& g,
                     int shared_param, int* next_param) {
    const int n = g.size();
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            const int p = shared_param >= 0 ? shared_param
                        : (next_param ? (*next_param)++ : -1);
            gates.push_back({GateKind::RZZ, i, j, 2.0 * g.weight(i, j), p});
        }
    }
}

void append_x_block(std::vector<AnsatzGate>& gates, const AnnotatedGraph& ag,
                    int shared_param, int* next_param) {
    const int n = ag.size();
    for (int i = 0; i < n; ++i) {
        const int p = shared_param >= 0 ? shared_param
                    : (next_param ? (*next_param)++ : -1);
        gates.push_back({GateKind::RX, i, -1, ag.alpha(i), p});
    }
}

void check_depth(int depth) {
    if (depth < 1) throw std::invalid_argument("depth must be at least 1");
}

} // namespace

AnsatzProgram build_eqc(const AnnotatedGraph& ag, int depth) {
    check_depth(depth);
    const int n = ag.size();
    std::vector<AnsatzGate> gates;
    gates.reserve(static_cast<std::size_t>(n) +
                  static_cast<std::size_t>(depth) * (n * (n - 1) / 2 + n));
    for (int i = 0; i < n; ++i) gates.push_back({GateKind::H, i, -1, 0.0, -1});
    for (int l = 0; l < depth; ++l) {
        const int gamma = 2 * l;
        const int beta = 2 * l + 1;
        append_zz_block(gates, ag.graph(), gamma, nullptr);
        append_x_block(gates, ag, beta, nullptr);
    }
    return AnsatzProgram(AnsatzKind::eqc, n, depth, 2 * depth, std::move(gates));
}

AnsatzProgram build_neqc(const AnnotatedGraph& ag, int depth) {
    check_depth(depth);
    const int n = ag.size();
    std::vector<AnsatzGate> gates;
    int next = 0;
    for (int i = 0; i < n; ++i) gates.push_back({GateKind::H, i, -1, 0.0, -1});
    for (int l = 0; l < depth; ++l) {
        append_zz_block(gates, ag.graph(), -1, &next);
        append_x_block(gates, ag, -1, &next);
    }
    return AnsatzProgram(AnsatzKind::neqc, n, depth, next, std::move(gates));
}

namespace {

// Shared skeleton of the two hardware-efficient families. They start from
// |0...0>, so the X block comes before the ZZ block; each layer ends with a
// trainable RY on every node and a CZ ladder. When `trainable_encoding` is
// false the X/ZZ angles are the fixed constants alpha_i and 2*eps_ij.
AnsatzProgram build_hardware_efficient(const AnnotatedGraph& ag, int depth,
                                       bool trainable_encoding) {
    const int n = ag.size();
    std::vector<AnsatzGate> gates;
    int next = 0;
    for (int l = 0; l < depth; ++l) {
        if (trainable_encoding) {
            append_x_block(gates, ag, -1, &next);
            append_zz_block(gates, ag.graph(), -1, &next);
        } else {
            append_x_block(gates, ag, -1, nullptr);
            append_zz_block(gates, ag.graph(), -1, nullptr);
        }
        for (int i = 0; i < n; ++i) gates.push_back({GateKind::RY, i, -1, 1.0, next++});
        for (int i = 0; i + 1 < n; ++i) gates.push_back({GateKind::CZ, i, i + 1, 0.0, -1});
    }
    return AnsatzProgram(trainable_encoding ? AnsatzKind::hwete : AnsatzKind::hwe, n, depth,
                         next, std::move(gates));
}

} // namespace

AnsatzProgram build_hwete(const AnnotatedGraph& ag, int depth) {
    check_depth(depth);
    return build_hardware_efficient(ag, depth, true);
}

AnsatzProgram build_hwe(const AnnotatedGraph& ag, int depth) {
    check_depth(depth);
    return build_hardware_efficient(ag, depth, false);
}

AnsatzProgram build_ansatz(AnsatzKind kind, const AnnotatedGraph& g, int depth) {
    switch (kind) {
        case AnsatzKind::eqc: return build_eqc(g, depth);
        case AnsatzKind::neqc: return build_neqc(g, depth);
        case AnsatzKind::hwete: return build_hwete(g, depth);
        case AnsatzKind::hwe: return build_hwe(g, depth);
    }
    throw std::logic_error("unreachable ansatz kind");
}

} // namespace qtour
