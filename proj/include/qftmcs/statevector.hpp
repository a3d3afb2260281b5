#pragma once

// Dense statevector simulator for the gate set {X, Z, H, RY, MCNOT}.
//
// Qubit j is bit j of the amplitude index (least significant bit first).
//
// Pauli-X is never applied to memory: the state keeps an XOR frame and
// logical amplitude i lives at physical slot i ^ frame. Every other kernel
// folds the frame into its index arithmetic, so X costs O(1) and the
// observable state is exactly that of the Kronecker-padded gate matrices.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "qftmcs/capacity.hpp"
#include "qftmcs/circuit.hpp"
#include "qftmcs/random.hpp"

namespace qftmcs {

using Amplitude = std::complex<double>;

class StateVector {
  public:
    /// |0...0> on `n_qubits` qubits.
    explicit StateVector(unsigned n_qubits, unsigned max_qubits = kDefaultMaxQubits) : n_(n_qubits) {
        check_qubit_capacity(n_qubits, max_qubits);
        amp_.assign(std::size_t{1} << n_qubits, Amplitude{0.0, 0.0});
        amp_[0] = 1.0;
    }

    static StateVector basis_state(unsigned n_qubits, std::uint64_t index, unsigned max_qubits = kDefaultMaxQubits) {
        StateVector s(n_qubits, max_qubits);
        if (index >= s.size()) throw std::out_of_range("basis index out of range");
        s.amp_[0] = 0.0;
        s.amp_[index] = 1.0;
        return s;
    }

    /// Amplitudes in index order; the length must be a power of two.
    static StateVector from_amplitudes(std::vector<Amplitude> amplitudes) {
        const std::size_t len = amplitudes.size();
        if (len == 0 || (len & (len - 1)) != 0) throw std::invalid_argument("amplitude count must be a power of two");
        unsigned n = 0;
        while ((std::size_t{1} << n) < len) ++n;
        StateVector s(0);
        s.n_ = n;
        s.amp_ = std::move(amplitudes);
        return s;
    }

    unsigned n_qubits() const noexcept { return n_; }
    std::size_t size() const noexcept { return amp_.size(); }

    Amplitude amplitude(std::uint64_t index) const { return amp_.at(index ^ frame_); }

    std::vector<Amplitude> amplitudes() const {
        std::vector<Amplitude> out(amp_.size());
        for (std::size_t i = 0; i < out.size(); ++i) out[i] = amp_[i ^ frame_];
        return out;
    }

    void reset() {
        frame_ = 0;
        std::fill(amp_.begin(), amp_.end(), Amplitude{0.0, 0.0});
        amp_[0] = 1.0;
    }

    void apply(const Gate &g) {
        if (g.target >= n_) throw std::out_of_range("gate target " + std::to_string(g.target) + " out of range");
        switch (g.kind) {
            case GateKind::PauliX: frame_ ^= std::uint64_t{1} << g.target; break;
            case GateKind::PauliZ: apply_z(g.target); break;
            case GateKind::Hadamard: {
                const double r = 1.0 / std::sqrt(2.0);
                apply_real_2x2(g.target, r, r, r, -r);
                break;
            }
            case GateKind::RY: {
                const double c = std::cos(g.theta / 2), s = std::sin(g.theta / 2);
                apply_real_2x2(g.target, c, -s, s, c);
                break;
            }
            case GateKind::MCNOT: apply_mcnot(g.controls, g.target); break;
        }
    }

    void apply(const Circuit &c) {
        if (c.n_qubits() != n_)
            throw std::invalid_argument("circuit has " + std::to_string(c.n_qubits()) + " qubits; state has " +
                                        std::to_string(n_));
        for (const auto &g : c.gates()) apply(g);
    }

    double norm_squared() const {
        double total = 0.0;
        for (const auto &a : amp_) total += std::norm(a);
        return total;
    }

    /// Born-rule probabilities |c_i|^2 in index order.
    std::vector<double> probabilities() const {
        std::vector<double> out(amp_.size());
        for (std::size_t i = 0; i < out.size(); ++i) out[i] = std::norm(amp_[i ^ frame_]);
        return out;
    }

    double marginal_probability(Qubit q, bool value) const {
        if (q >= n_) throw std::out_of_range("qubit " + std::to_string(q) + " out of range");
        const std::uint64_t stride = std::uint64_t{1} << q;
        // physical half holding logical `value`
        const std::uint64_t offset = (((frame_ >> q) & 1U) != static_cast<std::uint64_t>(value)) ? stride : 0;
        double total = 0.0;
        for (std::uint64_t base = 0; base < amp_.size(); base += 2 * stride)
            for (std::uint64_t i = base + offset; i < base + offset + stride; ++i) total += std::norm(amp_[i]);
        return total;
    }

  private:
    // Logical matrix [[m00, m01], [m10, m11]] on qubit q. A set frame bit
    // swaps the physical halves, i.e. conjugates the matrix by X.
    void apply_real_2x2(Qubit q, double m00, double m01, double m10, double m11) {
        if ((frame_ >> q) & 1U) {
            std::swap(m00, m11);
            std::swap(m01, m10);
        }
        const std::uint64_t stride = std::uint64_t{1} << q;
        const std::uint64_t dim = amp_.size();
        Amplitude *a = amp_.data();
        for (std::uint64_t base = 0; base < dim; base += 2 * stride) {
            for (std::uint64_t i = base; i < base + stride; ++i) {
                const Amplitude a0 = a[i], a1 = a[i + stride];
                a[i] = m00 * a0 + m01 * a1;
                a[i + stride] = m10 * a0 + m11 * a1;
            }
        }
    }

    void apply_z(Qubit q) {
        const std::uint64_t stride = std::uint64_t{1} << q;
        const std::uint64_t offset = ((frame_ >> q) & 1U) ? 0 : stride;
        Amplitude *a = amp_.data();
        for (std::uint64_t base = 0; base < amp_.size(); base += 2 * stride)
            for (std::uint64_t i = base + offset; i < base + offset + stride; ++i) a[i] = -a[i];
    }

    // Swaps the target pair of every index whose controls read 1 logically.
    void apply_mcnot(std::span<const Qubit> controls, Qubit target) {
        std::uint64_t ctrl = 0;
        for (Qubit c : controls) {
            if (c >= n_) throw std::out_of_range("control qubit " + std::to_string(c) + " out of range");
            ctrl |= std::uint64_t{1} << c;
        }
        const std::uint64_t tbit = std::uint64_t{1} << target;
        if (ctrl & tbit) throw std::invalid_argument("control qubit equals target");
        const std::uint64_t required = ctrl & ~frame_;
        const std::uint64_t free = (amp_.size() - 1) & ~(ctrl | tbit);
        Amplitude *a = amp_.data();
        std::uint64_t x = 0;
        do {
            const std::uint64_t p0 = x | required;
            std::swap(a[p0], a[p0 | tbit]);
            x = (x - free) & free;
        } while (x != 0);
    }

    unsigned n_;
    std::uint64_t frame_ = 0;
    std::vector<Amplitude> amp_;
};

inline void apply_gate(StateVector &state, const Gate &g) { state.apply(g); }
inline void apply_circuit(StateVector &state, const Circuit &c) { state.apply(c); }
inline std::vector<double> probabilities(const StateVector &state) { return state.probabilities(); }
inline double marginal_probability(const StateVector &state, Qubit q, bool value) {
    return state.marginal_probability(q, value);
}

/// Categorical sampler over measurement outcomes via inverse CDF. Outcome
/// bit j is qubit j.
class OutcomeSampler {
  public:
    explicit OutcomeSampler(const StateVector &state) : n_(state.n_qubits()) {
        cdf_.resize(state.size());
        double acc = 0.0;
        for (std::size_t i = 0; i < cdf_.size(); ++i) {
            acc += std::norm(state.amplitude(i));
            cdf_[i] = acc;
        }
    }

    explicit OutcomeSampler(std::span<const double> probabilities) : cdf_(probabilities.size()) {
        while ((std::size_t{1} << n_) < probabilities.size()) ++n_;
        double acc = 0.0;
        for (std::size_t i = 0; i < cdf_.size(); ++i) cdf_[i] = (acc += probabilities[i]);
    }

    std::uint64_t draw(Rng &rng) const {
        const double u = rng.uniform() * cdf_.back();
        auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
        if (it == cdf_.end()) --it;
        return static_cast<std::uint64_t>(it - cdf_.begin());
    }

    unsigned n_qubits() const noexcept { return n_; }

  private:
    unsigned n_ = 0;
    std::vector<double> cdf_;
};

inline std::vector<std::uint64_t> sample(const StateVector &state, std::size_t shots, std::uint64_t seed) {
    if (shots == 0) throw std::invalid_argument("sample: shots must be >= 1");
    OutcomeSampler sampler(state);
    Rng rng(seed);
    std::vector<std::uint64_t> out(shots);
    for (auto &o : out) o = sampler.draw(rng);
    return out;
}

/// Outcome as text, qubit 0 first.
inline std::string bitstring(std::uint64_t outcome, unsigned n_qubits) {
    std::string s(n_qubits, '0');
    for (unsigned j = 0; j < n_qubits; ++j)
        if ((outcome >> j) & 1U) s[j] = '1';
    return s;
}

/// `index,re,im` rows; refuses states above 10 qubits.
inline void write_statevector_csv(std::ostream &os, const StateVector &state) {
    if (state.n_qubits() > 10) throw CapacityError("statevector dump limited to 10 qubits");
    os << "index,re,im\n";
    for (std::uint64_t i = 0; i < state.size(); ++i) {
        const Amplitude a = state.amplitude(i);
        os << i << ',' << format_double(a.real()) << ',' << format_double(a.imag()) << '\n';
    }
}

}  // namespace qftmcs
