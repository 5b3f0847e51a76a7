#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "qtour/graph.hpp"
#include "qtour/statevector.hpp"

namespace qtour {

// The circuit families. All four act on one qubit per graph node and encode
// the instance through gate-angle coefficients:
//
//   eqc    graph-equivariant circuit: H on every qubit, then per layer a
//          ZZ-rotation RZZ(2*eps_ij*gamma) on every edge followed by an
//          X-rotation RX(alpha_i*beta) on every node. One shared (gamma,
//          beta) pair per layer: 2p trainable parameters.
//   neqc   same gate skeleton, but every gate carries its own trainable
//          parameter (coefficients 2*eps_ij / alpha_i retained):
//          p*(n(n-1)/2 + n) parameters.
//   hwete  hardware-efficient circuit with trainable encoding. Starts from
//          |0...0> (no H layer), so each layer applies the X-rotations
//          first, then the ZZ-rotations, each with its own parameter, then a
//          trainable RY on every node and a CZ ladder (0,1)...(n-2,n-1):
//          p*(n(n-1)/2 + 2n) parameters.
//   hwe    same skeleton as hwete with the encoding frozen at scale 1
//          (angles alpha_i and 2*eps_ij); only the RY angles are trainable:
//          p*n parameters.
enum class AnsatzKind { eqc, neqc, hwete, hwe };

AnsatzKind ansatz_from_string(std::string_view name);
std::string_view to_string(AnsatzKind kind);

// Number of trainable parameters of each family at n nodes, depth p.
int trainable_count(AnsatzKind kind, int n, int depth);

// One gate whose angle is either coeff * params[param] (param >= 0) or the
// fixed constant coeff (param == -1). Coefficients come only from the edge
// weights eps_ij, the node annotations alpha_i, and the literal 1.
struct AnsatzGate {
    GateKind kind = GateKind::H;
    int q0 = 0;
    int q1 = -1;
    double coeff = 0.0;
    int param = -1;
};

// A circuit built for one annotated graph: a flat gate list plus the map
// from each trainable parameter to the gates it drives.
class AnsatzProgram {
public:
    AnsatzProgram(AnsatzKind kind, int n_qubits, int depth, int n_trainable,
                  std::vector<AnsatzGate> gates);

    AnsatzKind kind() const { return kind_; }
    int n_qubits() const { return n_qubits_; }
    int depth() const { return depth_; }
    int n_trainable() const { return n_trainable_; }
    const std::vector<AnsatzGate>& gates() const { return gates_; }

    // Gate indices driven by each trainable parameter.
    const std::vector<std::vector<int>>& param_sites() const { return sites_; }

    // Run the circuit from |0...0> with all angles materialized.
    Statevector evaluate(std::span<const double> params) const;

    // Same, with `delta` added to the materialized angle of one gate; used
    // by the per-gate shift rule for gradients.
    Statevector evaluate_shifted(std::span<const double> params, int gate_index,
                                 double delta) const;

private:
    Statevector run(std::span<const double> params, int shifted_gate, double delta) const;

    AnsatzKind kind_;
    int n_qubits_;
    int depth_;
    int n_trainable_;
    std::vector<AnsatzGate> gates_;
    std::vector<std::vector<int>> sites_;
};

AnsatzProgram build_eqc(const AnnotatedGraph& g, int depth);
AnsatzProgram build_neqc(const AnnotatedGraph& g, int depth);
AnsatzProgram build_hwete(const AnnotatedGraph& g, int depth);
AnsatzProgram build_hwe(const AnnotatedGraph& g, int depth);
AnsatzProgram build_ansatz(AnsatzKind kind, const AnnotatedGraph& g, int depth);

} // namespace qtour
