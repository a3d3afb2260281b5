#pragma once

#include <algorithm>
#include <cstdint>
#include <initializer_list>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "qftmcs/fault_tree.hpp"

namespace qftmcs {

using Qubit = std::uint32_t;

enum class GateKind { PauliX, PauliZ, Hadamard, RY, MCNOT };

inline std::string_view to_string(GateKind k) {
    switch (k) {
        case GateKind::PauliX: return "X";
        case GateKind::PauliZ: return "Z";
        case GateKind::Hadamard: return "H";
        case GateKind::RY: return "RY";
        case GateKind::MCNOT: return "MCNOT";
    }
    return "?";
}

/// One gate application. Single-qubit gates act on `target`; MCNOT flips
/// `target` when every qubit in `controls` reads 1.
struct Gate {
    GateKind kind = GateKind::PauliX;
    Qubit target = 0;
    std::vector<Qubit> controls;
    double theta = 0.0;

    static Gate x(Qubit q) { return {GateKind::PauliX, q, {}, 0.0}; }
    static Gate z(Qubit q) { return {GateKind::PauliZ, q, {}, 0.0}; }
    static Gate h(Qubit q) { return {GateKind::Hadamard, q, {}, 0.0}; }
    static Gate ry(Qubit q, double theta) { return {GateKind::RY, q, {}, theta}; }
    static Gate mcnot(std::vector<Qubit> controls, Qubit target) {
        return {GateKind::MCNOT, target, std::move(controls), 0.0};
    }

    Gate adjoint() const {
        Gate g = *this;
        if (kind == GateKind::RY) g.theta = -theta;
        return g;
    }

    bool operator==(const Gate &) const = default;
};

/// Ordered gate list over `n_qubits` qubits. Gates run front to back.
class Circuit {
  public:
    explicit Circuit(unsigned n_qubits = 0) : n_(n_qubits) {}

    unsigned n_qubits() const noexcept { return n_; }
    const std::vector<Gate> &gates() const noexcept { return gates_; }
    std::size_t size() const noexcept { return gates_.size(); }
    bool empty() const noexcept { return gates_.empty(); }

    Circuit &add(Gate g) {
        check(g);
        gates_.push_back(std::move(g));
        return *this;
    }
    Circuit &x(Qubit q) { return add(Gate::x(q)); }
    Circuit &z(Qubit q) { return add(Gate::z(q)); }
    Circuit &h(Qubit q) { return add(Gate::h(q)); }
    Circuit &ry(Qubit q, double theta) { return add(Gate::ry(q, theta)); }
    Circuit &mcnot(std::vector<Qubit> controls, Qubit target) { return add(Gate::mcnot(std::move(controls), target)); }
    Circuit &cnot(Qubit control, Qubit target) { return mcnot({control}, target); }

    Circuit &append(const Circuit &other) {
        if (other.n_ != n_)
            throw std::invalid_argument("Circuit::append: qubit count mismatch (" + std::to_string(n_) + " vs " +
                                        std::to_string(other.n_) + ")");
        gates_.insert(gates_.end(), other.gates_.begin(), other.gates_.end());
        return *this;
    }

    /// Reversed order, each gate conjugated.
    Circuit adjoint() const {
        Circuit out(n_);
        out.gates_.reserve(gates_.size());
        for (auto it = gates_.rbegin(); it != gates_.rend(); ++it) out.gates_.push_back(it->adjoint());
        return out;
    }

    bool operator==(const Circuit &) const = default;

  private:
    void check(const Gate &g) const {
        if (g.target >= n_) throw std::out_of_range("gate target " + std::to_string(g.target) + " out of range");
        if (g.kind != GateKind::MCNOT && !g.controls.empty())
            throw std::invalid_argument("only MCNOT takes control qubits");
        if (g.kind == GateKind::MCNOT && g.controls.empty())
            throw std::invalid_argument("MCNOT needs at least one control");
        for (std::size_t i = 0; i < g.controls.size(); ++i) {
            const Qubit c = g.controls[i];
            if (c >= n_) throw std::out_of_range("control qubit " + std::to_string(c) + " out of range");
            if (c == g.target) throw std::invalid_argument("control qubit " + std::to_string(c) + " equals target");
            if (std::find(g.controls.begin(), g.controls.begin() + i, c) != g.controls.begin() + i)
                throw std::invalid_argument("duplicate control qubit " + std::to_string(c));
        }
    }

    unsigned n_;
    std::vector<Gate> gates_;
};

/// Debug dump, one gate per line: `GATE <kind> <qubits...> [theta]`, MCNOT
/// lists controls then target.
inline void write_circuit(std::ostream &os, const Circuit &c) {
    os << "QUBITS " << c.n_qubits() << '\n';
    for (const auto &g : c.gates()) {
        os << "GATE " << to_string(g.kind);
        for (Qubit q : g.controls) os << ' ' << q;
        os << ' ' << g.target;
        if (g.kind == GateKind::RY) os << ' ' << format_double(g.theta);
        os << '\n';
    }
}

/// Runs the X/Z/MCNOT part of a circuit on a computational basis state and
/// returns the resulting basis index (Z only contributes a phase). Throws on
/// H or RY, which do not map basis states to basis states.
inline std::uint64_t apply_to_basis(const Circuit &c, std::uint64_t basis) {
    for (const auto &g : c.gates()) {
        const std::uint64_t t = std::uint64_t{1} << g.target;
        switch (g.kind) {
            case GateKind::PauliX: basis ^= t; break;
            case GateKind::PauliZ: break;
            case GateKind::MCNOT: {
                bool all = true;
                for (Qubit q : g.controls) all = all && ((basis >> q) & 1U);
                if (all) basis ^= t;
                break;
            }
            default: throw std::invalid_argument("apply_to_basis: gate is not a basis permutation");
        }
    }
    return basis;
}

}  // namespace qftmcs
