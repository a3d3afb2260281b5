#pragma once

// Compiles a fault tree into a quantum circuit: one RY rotation per basic
// event encodes its failure probability, one MCNOT-based block per gate
// writes the gate's output into a fresh qubit. Measuring the result gives
// [x_BE, x_IE, x_TOP] with x_BE distributed by the product law and the rest
// a deterministic function of x_BE.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "qftmcs/circuit.hpp"
#include "qftmcs/fault_tree.hpp"

namespace qftmcs {

/// Angle with sin^2(theta/2) = p. p = 1 maps to pi; other inputs are clamped
/// to [0, 1 - 1e-15] before 2 atan(sqrt(p / (1 - p))).
inline double rotation_angle(double p) {
    if (p >= 1.0) return std::numbers::pi;
    p = std::clamp(p, 0.0, 1.0 - 1e-15);
    return 2.0 * std::atan(std::sqrt(p / (1.0 - p)));
}

/// Appends the AND/OR block computing `op(inputs)` into `output`, which is
/// expected to hold |0>. OR uses NOT(AND(NOT inputs)) and restores the inputs.
inline void append_gate_encoding(Circuit &c, GateOp op, std::span<const Qubit> inputs, Qubit output) {
    if (inputs.size() < 2) throw std::invalid_argument("gate encoding needs at least 2 inputs");
    for (Qubit q : inputs)
        if (q == output) throw std::invalid_argument("gate output qubit collides with an input");
    std::vector<Qubit> controls(inputs.begin(), inputs.end());
    if (op == GateOp::And) {
        c.mcnot(std::move(controls), output);
        return;
    }
    for (Qubit q : inputs) c.x(q);
    c.mcnot(std::move(controls), output);
    c.x(output);
    for (Qubit q : inputs) c.x(q);
}

inline Circuit encode_gate(GateOp op, std::span<const Qubit> inputs, Qubit output, unsigned n_qubits) {
    Circuit c(n_qubits);
    append_gate_encoding(c, op, inputs, output);
    return c;
}

/// Where each event of a tree lives in a register. Substituting an entry
/// (a basic event read from a different qubit, TOP written elsewhere) is how
/// the MCS oracle reuses these builders.
struct EventQubits {
    std::vector<Qubit> basic;
    std::vector<Qubit> intermediate;
    Qubit top = 0;
};

namespace detail {

inline std::vector<Qubit> gate_input_qubits(const FaultTree &tree, std::size_t gate, const EventQubits &eq) {
    std::vector<Qubit> qs;
    for (const auto &ref : tree.inputs(gate)) qs.push_back(ref.is_gate ? eq.intermediate.at(ref.index) : eq.basic.at(ref.index));
    return qs;
}

}  // namespace detail

/// U_IE: every intermediary gate in topological order.
inline void append_intermediates(Circuit &c, const FaultTree &tree, const EventQubits &eq) {
    for (std::size_t g = 0; g < tree.n_ie(); ++g) {
        const auto inputs = detail::gate_input_qubits(tree, g, eq);
        append_gate_encoding(c, tree.gate_events()[g].op, inputs, eq.intermediate.at(g));
    }
}

/// U_TOP: the TOP gate into eq.top.
inline void append_top(Circuit &c, const FaultTree &tree, const EventQubits &eq) {
    const auto inputs = detail::gate_input_qubits(tree, tree.top_index(), eq);
    append_gate_encoding(c, tree.top_gate().op, inputs, eq.top);
}

/// Register order: basic events, intermediary events, TOP.
struct QftLayout {
    std::vector<Qubit> be_qubits;
    std::vector<Qubit> ie_qubits;
    Qubit top_qubit = 0;
    unsigned n_qubits = 0;

    static QftLayout for_tree(const FaultTree &tree) {
        QftLayout l;
        Qubit next = 0;
        for (std::size_t i = 0; i < tree.n_be(); ++i) l.be_qubits.push_back(next++);
        for (std::size_t i = 0; i < tree.n_ie(); ++i) l.ie_qubits.push_back(next++);
        l.top_qubit = next++;
        l.n_qubits = next;
        return l;
    }

    EventQubits events() const { return {be_qubits, ie_qubits, top_qubit}; }
};

struct QftCircuit {
    QftLayout layout;
    Circuit u_be;
    Circuit u_ie;
    Circuit u_top;
    /// u_be, then u_ie, then u_top.
    Circuit u_ft;
};

/// Failure probabilities of 0.5 for every basic event, which makes every
/// configuration equally likely.
inline std::vector<double> uniform_probabilities(const FaultTree &tree) { return std::vector<double>(tree.n_be(), 0.5); }

inline QftCircuit encode_fault_tree(const FaultTree &tree, std::span<const double> probabilities) {
    if (probabilities.size() != tree.n_be())
        throw std::invalid_argument("encode_fault_tree: expected " + std::to_string(tree.n_be()) + " probabilities");
    QftCircuit out;
    out.layout = QftLayout::for_tree(tree);
    const unsigned n = out.layout.n_qubits;
    out.u_be = Circuit(n);
    out.u_ie = Circuit(n);
    out.u_top = Circuit(n);
    for (std::size_t i = 0; i < tree.n_be(); ++i) {
        const double p = probabilities[i];
        if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("probability out of range");
        out.u_be.ry(out.layout.be_qubits[i], rotation_angle(p));
    }
    const EventQubits eq = out.layout.events();
    append_intermediates(out.u_ie, tree, eq);
    append_top(out.u_top, tree, eq);
    out.u_ft = Circuit(n);
    out.u_ft.append(out.u_be).append(out.u_ie).append(out.u_top);
    return out;
}

inline QftCircuit encode_fault_tree(const FaultTree &tree) {
    const auto p = tree.probabilities();
    return encode_fault_tree(tree, p);
}

}  // namespace qftmcs
