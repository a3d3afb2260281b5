#pragma once

// Shared generators and independent oracles for the test suites.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "qftmcs/circuit.hpp"
#include "qftmcs/fault_tree.hpp"
#include "qftmcs/statevector.hpp"

namespace qftmcs::test {

inline std::string data_path(const std::string &name) { return std::string(QFTMCS_DATA_DIR) + "/" + name; }

/// Random coherent tree with `n_be` >= 2 basic events. Gates take 2..4
/// fresh inputs plus, sometimes, an already consumed event (fan-out); the
/// gate list is shuffled so the builder has to re-sort it.
inline TreeDefinition random_tree(std::mt19937_64 &rng, std::size_t n_be, bool random_p = true) {
    TreeDefinition def;
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<std::string> open, consumed;
    for (std::size_t i = 0; i < n_be; ++i) {
        const std::string id = "B" + std::to_string(i);
        def.basic_events.push_back({id, random_p ? std::round(unit(rng) * 100.0) / 100.0 : 0.5});
        open.push_back(id);
    }
    std::size_t next_gate = 0;
    while (open.size() > 1) {
        std::shuffle(open.begin(), open.end(), rng);
        const std::size_t max_k = std::min<std::size_t>(4, open.size());
        const std::size_t k = 2 + rng() % (max_k - 1);
        GateEvent g;
        g.id = "G" + std::to_string(next_gate++);
        g.op = (rng() & 1U) ? GateOp::And : GateOp::Or;
        g.inputs.assign(open.end() - static_cast<std::ptrdiff_t>(k), open.end());
        open.resize(open.size() - k);
        if (!consumed.empty() && unit(rng) < 0.3) g.inputs.push_back(consumed[rng() % consumed.size()]);
        consumed.insert(consumed.end(), g.inputs.begin(), g.inputs.end());
        std::shuffle(g.inputs.begin(), g.inputs.end(), rng);
        open.push_back(g.id);
        def.gate_events.push_back(std::move(g));
    }
    def.top = open.front();
    std::shuffle(def.gate_events.begin(), def.gate_events.end(), rng);
    return def;
}

inline FaultTree random_fault_tree(std::mt19937_64 &rng, std::size_t n_be, bool random_p = true) {
    return FaultTree::build(random_tree(rng, n_be, random_p));
}

using Matrix = std::vector<std::vector<Amplitude>>;

inline Matrix identity(std::size_t dim) {
    Matrix m(dim, std::vector<Amplitude>(dim));
    for (std::size_t i = 0; i < dim; ++i) m[i][i] = 1.0;
    return m;
}

inline Matrix kron(const Matrix &a, const Matrix &b) {
    const std::size_t ra = a.size(), rb = b.size();
    Matrix out(ra * rb, std::vector<Amplitude>(ra * rb));
    for (std::size_t i = 0; i < ra; ++i)
        for (std::size_t j = 0; j < ra; ++j)
            for (std::size_t k = 0; k < rb; ++k)
                for (std::size_t l = 0; l < rb; ++l) out[i * rb + k][j * rb + l] = a[i][j] * b[k][l];
    return out;
}

/// Kronecker product over all qubits, most significant (qubit n-1) first;
/// `factor(q)` gives the 2x2 block on qubit q.
template <class F>
Matrix kron_all(unsigned n, F factor) {
    Matrix m = identity(1);
    for (unsigned q = n; q-- > 0;) m = kron(m, factor(q));
    return m;
}

inline Matrix add(const Matrix &a, const Matrix &b, double sb = 1.0) {
    Matrix out = a;
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < a.size(); ++j) out[i][j] += sb * b[i][j];
    return out;
}

inline Matrix matmul(const Matrix &a, const Matrix &b) {
    const std::size_t n = a.size();
    Matrix out(n, std::vector<Amplitude>(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < n; ++k)
            if (a[i][k] != Amplitude{})
                for (std::size_t j = 0; j < n; ++j) out[i][j] += a[i][k] * b[k][j];
    return out;
}

/// Full 2^n matrix of a gate built from Kronecker products only.
inline Matrix dense_gate(const Gate &g, unsigned n) {
    const Matrix I = identity(2);
    const double r = 1.0 / std::sqrt(2.0);
    const Matrix X{{0.0, 1.0}, {1.0, 0.0}};
    const Matrix P1{{0.0, 0.0}, {0.0, 1.0}};
    Matrix u;
    switch (g.kind) {
        case GateKind::PauliX: u = X; break;
        case GateKind::PauliZ: u = {{1.0, 0.0}, {0.0, -1.0}}; break;
        case GateKind::Hadamard: u = {{r, r}, {r, -r}}; break;
        case GateKind::RY: {
            const double c = std::cos(g.theta / 2), s = std::sin(g.theta / 2);
            u = {{c, -s}, {s, c}};
            break;
        }
        case GateKind::MCNOT: {
            auto is_control = [&](unsigned q) {
                return std::find(g.controls.begin(), g.controls.end(), q) != g.controls.end();
            };
            const Matrix proj = kron_all(n, [&](unsigned q) { return is_control(q) ? P1 : I; });
            const Matrix proj_x = kron_all(n, [&](unsigned q) {
                if (is_control(q)) return P1;
                return q == g.target ? X : I;
            });
            return add(add(identity(std::size_t{1} << n), proj, -1.0), proj_x);
        }
    }
    return kron_all(n, [&](unsigned q) { return q == g.target ? u : I; });
}

inline std::vector<Amplitude> matvec(const Matrix &m, const std::vector<Amplitude> &v) {
    std::vector<Amplitude> out(v.size());
    for (std::size_t i = 0; i < m.size(); ++i)
        for (std::size_t j = 0; j < v.size(); ++j) out[i] += m[i][j] * v[j];
    return out;
}

inline Gate random_gate(std::mt19937_64 &rng, unsigned n) {
    std::uniform_real_distribution<double> angle(-2 * std::numbers::pi, 2 * std::numbers::pi);
    const Qubit t = static_cast<Qubit>(rng() % n);
    switch (rng() % (n >= 2 ? 5 : 4)) {
        case 0: return Gate::x(t);
        case 1: return Gate::z(t);
        case 2: return Gate::h(t);
        case 3: return Gate::ry(t, angle(rng));
        default: {
            std::vector<Qubit> others;
            for (Qubit q = 0; q < n; ++q)
                if (q != t) others.push_back(q);
            std::shuffle(others.begin(), others.end(), rng);
            others.resize(1 + rng() % others.size());
            return Gate::mcnot(std::move(others), t);
        }
    }
}

inline Circuit random_circuit(std::mt19937_64 &rng, unsigned n, std::size_t length) {
    Circuit c(n);
    for (std::size_t i = 0; i < length; ++i) c.add(random_gate(rng, n));
    return c;
}

inline std::vector<Amplitude> random_state(std::mt19937_64 &rng, unsigned n) {
    std::normal_distribution<double> gauss;
    std::vector<Amplitude> v(std::size_t{1} << n);
    double norm = 0.0;
    for (auto &a : v) {
        a = {gauss(rng), gauss(rng)};
        norm += std::norm(a);
    }
    for (auto &a : v) a /= std::sqrt(norm);
    return v;
}

inline double max_abs_diff(const std::vector<Amplitude> &a, const std::vector<Amplitude> &b) {
    double d = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
    return d;
}

}  // namespace qftmcs::test
