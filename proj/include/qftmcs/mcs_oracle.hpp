#pragma once

// Circuit U_MCS marking minimal cut sets.
//
//   f_MCS(x) = f_FT(x) AND  AND_{i : x_i = 1} NOT f_FT(x with bit i cleared)
//
// Register: [BE (N_BE) | IE (N_IE) | TOP | TOP_1..TOP_N_BE | MCS | aux].
// TOP holds f_FT(x). Stage i recomputes the tree with basic event i read
// from the always-|0> aux qubit, writes TOP_i = f_FT(s(x, i)) XOR x_i, and
// uncomputes the IE block. MCS is the AND of TOP and every TOP_i. For x_i = 0
// the clause reduces to f_FT(x), which TOP already requires.

#include <stdexcept>
#include <vector>

#include "qftmcs/circuit.hpp"
#include "qftmcs/classical.hpp"
#include "qftmcs/encoder.hpp"

namespace qftmcs {

struct McsLayout {
    std::vector<Qubit> be_qubits;
    std::vector<Qubit> ie_qubits;
    Qubit top_qubit = 0;
    std::vector<Qubit> top_i_qubits;
    Qubit mcs_qubit = 0;
    Qubit aux_qubit = 0;
    /// 2 N_BE + N_IE + 3.
    unsigned n_qubits = 0;

    static McsLayout for_tree(const FaultTree &tree) {
        McsLayout l;
        Qubit next = 0;
        for (std::size_t i = 0; i < tree.n_be(); ++i) l.be_qubits.push_back(next++);
        for (std::size_t i = 0; i < tree.n_ie(); ++i) l.ie_qubits.push_back(next++);
        l.top_qubit = next++;
        for (std::size_t i = 0; i < tree.n_be(); ++i) l.top_i_qubits.push_back(next++);
        l.mcs_qubit = next++;
        l.aux_qubit = next++;
        l.n_qubits = next;
        return l;
    }
};

struct McsOracleCircuit {
    McsLayout layout;
    /// RY(pi/2) on every basic-event qubit.
    Circuit preparation;
    /// Everything after the preparation; a basis-state permutation.
    Circuit logic;
    /// preparation followed by logic: U_MCS.
    Circuit circuit;
};

namespace detail {

/// Step i of the oracle: TOP_i <- f_FT(s(x, i)) XOR x_i, IE block restored.
inline Circuit clause_stage(const FaultTree &tree, const McsLayout &l, std::size_t i) {
    Circuit stage(l.n_qubits);
    EventQubits eq{l.be_qubits, l.ie_qubits, l.top_i_qubits[i]};
    eq.basic[i] = l.aux_qubit;
    Circuit u_ie(l.n_qubits);
    append_intermediates(u_ie, tree, eq);
    stage.append(u_ie);
    append_top(stage, tree, eq);
    stage.cnot(l.be_qubits[i], l.top_i_qubits[i]);
    stage.append(u_ie.adjoint());
    return stage;
}

}  // namespace detail

inline McsOracleCircuit build_mcs_oracle(const FaultTree &tree) {
    McsOracleCircuit out;
    out.layout = McsLayout::for_tree(tree);
    const McsLayout &l = out.layout;
    const unsigned n = l.n_qubits;

    out.preparation = Circuit(n);
    for (Qubit q : l.be_qubits) out.preparation.ry(q, rotation_angle(0.5));

    out.logic = Circuit(n);
    const EventQubits plain{l.be_qubits, l.ie_qubits, l.top_qubit};
    Circuit u_ie(n);
    append_intermediates(u_ie, tree, plain);
    out.logic.append(u_ie);
    append_top(out.logic, tree, plain);
    out.logic.append(u_ie.adjoint());

    for (std::size_t i = 0; i < tree.n_be(); ++i) out.logic.append(detail::clause_stage(tree, l, i));

    std::vector<Qubit> controls{l.top_qubit};
    controls.insert(controls.end(), l.top_i_qubits.begin(), l.top_i_qubits.end());
    out.logic.mcnot(std::move(controls), l.mcs_qubit);

    out.circuit = Circuit(n);
    out.circuit.append(out.preparation).append(out.logic);
    return out;
}

/// The TOP_i bit written by clause stage i when the basic events hold `cfg`
/// and every other qubit starts at 0. Runs the stage on a basis state.
inline bool clause_semantics_check(const FaultTree &tree, const Config &cfg, std::size_t i) {
    if (cfg.size() != tree.n_be()) throw std::invalid_argument("config length mismatch");
    if (i >= tree.n_be()) throw std::out_of_range("clause index out of range");
    const McsLayout l = McsLayout::for_tree(tree);
    std::uint64_t basis = 0;
    for (std::size_t b = 0; b < cfg.size(); ++b)
        if (cfg[b]) basis |= std::uint64_t{1} << l.be_qubits[b];
    const std::uint64_t out = apply_to_basis(detail::clause_stage(tree, l, i), basis);
    return (out >> l.top_i_qubits[i]) & 1U;
}

/// Final basis state of the oracle's logic for basic-event pattern `mask`.
inline std::uint64_t oracle_output(const McsOracleCircuit &oracle, std::uint64_t mask) {
    std::uint64_t basis = 0;
    for (std::size_t b = 0; b < oracle.layout.be_qubits.size(); ++b)
        if ((mask >> b) & 1U) basis |= std::uint64_t{1} << oracle.layout.be_qubits[b];
    return apply_to_basis(oracle.logic, basis);
}

}  // namespace qftmcs
