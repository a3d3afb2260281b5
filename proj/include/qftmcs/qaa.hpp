#pragma once

// Quantum amplitude amplification over a fault-tree circuit.
//
// The Grover operator is applied in temporal order S_f, A^dagger, S_0, A, so
// after j applications the flag qubit reads 1 with probability
// sin^2((2j+1) asin(sqrt(a))), where a is the flag probability of A|0>.
// Two state preparations are supported: the plain encoded tree with the TOP
// qubit as flag (marks cut sets) and the MCS oracle with the MCS qubit as
// flag (marks minimal cut sets).

#include <cmath>
#include <cstdint>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "qftmcs/classical.hpp"
#include "qftmcs/encoder.hpp"
#include "qftmcs/mcs_oracle.hpp"
#include "qftmcs/random.hpp"
#include "qftmcs/statevector.hpp"

namespace qftmcs {

/// Pauli-Z on the flag qubit: negates every amplitude whose flag bit is 1.
inline Circuit s_f_circuit(Qubit flag_qubit, unsigned n_qubits) {
    Circuit c(n_qubits);
    c.z(flag_qubit);
    return c;
}

/// Negates the amplitude of |0...0> only: X on all qubits, H-MCNOT-H on
/// qubit 0 controlled by the rest, X on all qubits.
inline Circuit s_0_circuit(unsigned n_qubits) {
    if (n_qubits < 2) throw std::invalid_argument("S_0 needs at least 2 qubits");
    Circuit c(n_qubits);
    for (Qubit q = 0; q < n_qubits; ++q) c.x(q);
    c.h(0);
    std::vector<Qubit> controls;
    for (Qubit q = 1; q < n_qubits; ++q) controls.push_back(q);
    c.mcnot(std::move(controls), 0);
    c.h(0);
    for (Qubit q = 0; q < n_qubits; ++q) c.x(q);
    return c;
}

struct GroverSetup {
    Circuit a_circuit;
    Qubit flag_qubit = 0;

    unsigned n_qubits() const noexcept { return a_circuit.n_qubits(); }
};

inline Circuit grover_operator(const GroverSetup &setup) {
    const unsigned n = setup.n_qubits();
    if (setup.flag_qubit >= n) throw std::out_of_range("flag qubit out of range");
    Circuit q(n);
    q.append(s_f_circuit(setup.flag_qubit, n));
    q.append(setup.a_circuit.adjoint());
    q.append(s_0_circuit(n));
    q.append(setup.a_circuit);
    return q;
}

/// sin^2((2j+1) asin(sqrt(a))).
inline double theoretical_probability(double a, unsigned j) {
    if (!(a >= 0.0 && a <= 1.0)) throw std::invalid_argument("initial probability must be in [0, 1]");
    const double s = std::sin((2.0 * j + 1.0) * std::asin(std::sqrt(a)));
    return s * s;
}

/// Iteration count in [0, j_max] maximizing the amplified probability;
/// ties go to the smaller count.
inline unsigned best_j(double a, unsigned j_max) {
    unsigned best = 0;
    double best_p = theoretical_probability(a, 0);
    for (unsigned j = 1; j <= j_max; ++j) {
        const double p = theoretical_probability(a, j);
        if (p > best_p + 1e-12) {
            best = j;
            best_p = p;
        }
    }
    return best;
}

enum class Variant { Naive, Proposed };

inline std::string_view to_string(Variant v) { return v == Variant::Naive ? "naive" : "proposed"; }

/// State preparation for the naive search: the encoded tree with every
/// failure probability overridden to 0.5; flag = TOP.
inline GroverSetup naive_setup(const FaultTree &tree) {
    const auto uniform = uniform_probabilities(tree);
    QftCircuit qft = encode_fault_tree(tree, uniform);
    return {std::move(qft.u_ft), qft.layout.top_qubit};
}

/// State preparation for the MCS search: U_MCS; flag = MCS qubit.
inline GroverSetup proposed_setup(const FaultTree &tree) {
    McsOracleCircuit oracle = build_mcs_oracle(tree);
    return {std::move(oracle.circuit), oracle.layout.mcs_qubit};
}

inline unsigned required_qubits(const FaultTree &tree, Variant v) {
    return v == Variant::Naive ? static_cast<unsigned>(tree.n_be() + tree.n_ie() + 1)
                               : static_cast<unsigned>(2 * tree.n_be() + tree.n_ie() + 3);
}

struct RunOptions {
    /// 0 = exact probabilities only.
    std::size_t shots = 0;
    std::uint64_t seed = 0;
    /// Rebuild and re-evolve the circuit for every shot instead of sampling
    /// one evolved state K times.
    bool literal_shots = false;
    unsigned max_qubits = kDefaultMaxQubits;
};

struct AmplifiedRun {
    Variant variant = Variant::Naive;
    unsigned j = 0;
    /// Probability that the flag qubit reads 1.
    double exact_flag_probability = 0.0;
    /// Probability that the basic-event bits form a minimal cut set.
    double exact_mcs_probability = 0.0;
    std::uint64_t seed = 0;
    std::size_t shots = 0;
    std::vector<std::uint64_t> samples;
    std::size_t flag_hits = 0;
    std::size_t mcs_hits = 0;
    /// Samples flagged 1 whose basic-event bits fail the classical predicate
    /// (f_FT for naive, is_mcs for proposed).
    std::size_t false_positives = 0;

    double empirical_flag_probability() const {
        return shots ? static_cast<double>(flag_hits) / static_cast<double>(shots) : std::numeric_limits<double>::quiet_NaN();
    }
    double empirical_mcs_probability() const {
        return shots ? static_cast<double>(mcs_hits) / static_cast<double>(shots) : std::numeric_limits<double>::quiet_NaN();
    }
};

/// Holds one evolving state: A|0>, then one Grover application per advance().
class Amplifier {
  public:
    Amplifier(const FaultTree &tree, Variant variant, unsigned max_qubits = kDefaultMaxQubits)
        : variant_(variant),
          n_be_(tree.n_be()),
          setup_(variant == Variant::Naive ? naive_setup(tree) : proposed_setup(tree)),
          grover_(grover_operator(setup_)),
          classes_(enumerate_mcs(tree)),
          state_(setup_.n_qubits(), max_qubits),
          max_qubits_(max_qubits) {
        state_.apply(setup_.a_circuit);
    }

    unsigned iterations() const noexcept { return j_; }
    const StateVector &state() const noexcept { return state_; }
    const GroverSetup &setup() const noexcept { return setup_; }
    const Circuit &grover() const noexcept { return grover_; }
    const McsEnumeration &classes() const noexcept { return classes_; }
    std::uint64_t be_mask() const noexcept { return (std::uint64_t{1} << n_be_) - 1; }

    void advance() {
        state_.apply(grover_);
        ++j_;
    }

    /// Probability distribution over basic-event patterns (low N_BE bits).
    std::vector<double> pattern_distribution() const {
        std::vector<double> out(std::size_t{1} << n_be_, 0.0);
        const auto probs = state_.probabilities();
        const std::uint64_t m = be_mask();
        for (std::size_t i = 0; i < probs.size(); ++i) out[i & m] += probs[i];
        return out;
    }

    AmplifiedRun record(const RunOptions &opt) const {
        AmplifiedRun run;
        run.variant = variant_;
        run.j = j_;
        run.seed = opt.seed;
        run.exact_flag_probability = state_.marginal_probability(setup_.flag_qubit, true);
        const auto dist = pattern_distribution();
        for (std::size_t m = 0; m < dist.size(); ++m)
            if (classes_.is_mcs(m)) run.exact_mcs_probability += dist[m];
        if (opt.shots == 0) return run;

        run.shots = opt.shots;
        const std::uint64_t run_seed = derive_seed(opt.seed, j_);
        if (opt.literal_shots) {
            run.samples.reserve(opt.shots);
            for (std::size_t k = 0; k < opt.shots; ++k) {
                StateVector fresh(setup_.n_qubits(), max_qubits_);
                fresh.apply(setup_.a_circuit);
                for (unsigned it = 0; it < j_; ++it) fresh.apply(grover_);
                Rng rng(derive_seed(run_seed, k));
                run.samples.push_back(OutcomeSampler(fresh).draw(rng));
            }
        } else {
            run.samples = sample(state_, opt.shots, run_seed);
        }
        for (std::uint64_t s : run.samples) {
            const bool flag = (s >> setup_.flag_qubit) & 1U;
            const std::uint64_t pattern = s & be_mask();
            const bool mcs = classes_.is_mcs(pattern);
            run.flag_hits += flag;
            run.mcs_hits += mcs;
            const bool predicate = variant_ == Variant::Naive ? classes_.is_cut_set(pattern) : mcs;
            if (flag && !predicate) ++run.false_positives;
        }
        return run;
    }

  private:
    Variant variant_;
    std::size_t n_be_;
    GroverSetup setup_;
    Circuit grover_;
    McsEnumeration classes_;
    StateVector state_;
    unsigned max_qubits_;
    unsigned j_ = 0;
};

inline AmplifiedRun run_variant(const FaultTree &tree, Variant v, unsigned j, const RunOptions &opt) {
    Amplifier amp(tree, v, opt.max_qubits);
    for (unsigned k = 0; k < j; ++k) amp.advance();
    return amp.record(opt);
}

inline AmplifiedRun run_naive(const FaultTree &tree, unsigned j, const RunOptions &opt = {}) {
    return run_variant(tree, Variant::Naive, j, opt);
}

inline AmplifiedRun run_proposed(const FaultTree &tree, unsigned j, const RunOptions &opt = {}) {
    return run_variant(tree, Variant::Proposed, j, opt);
}

/// Runs for j = 0..j_max. One state is evolved incrementally; row j is
/// identical to run_variant(tree, v, j, opt).
inline std::vector<AmplifiedRun> sweep(const FaultTree &tree, Variant v, unsigned j_max, const RunOptions &opt) {
    Amplifier amp(tree, v, opt.max_qubits);
    std::vector<AmplifiedRun> out;
    out.reserve(j_max + 1);
    for (unsigned j = 0; j <= j_max; ++j) {
        if (j > 0) amp.advance();
        AmplifiedRun r = amp.record(opt);
        r.samples.clear();
        r.samples.shrink_to_fit();
        out.push_back(std::move(r));
    }
    return out;
}

/// `variant,j,exact_flag_prob,empirical_flag_prob,exact_mcs_prob,empirical_mcs_prob,shots,seed`.
/// Empirical cells are empty when no shots were taken.
inline void write_runs_csv(std::ostream &os, const std::vector<AmplifiedRun> &runs) {
    os << "variant,j,exact_flag_prob,empirical_flag_prob,exact_mcs_prob,empirical_mcs_prob,shots,seed\n";
    for (const auto &r : runs) {
        os << to_string(r.variant) << ',' << r.j << ',' << format_double(r.exact_flag_probability) << ',';
        if (r.shots) os << format_double(r.empirical_flag_probability());
        os << ',' << format_double(r.exact_mcs_probability) << ',';
        if (r.shots) os << format_double(r.empirical_mcs_probability());
        os << ',' << r.shots << ',' << r.seed << '\n';
    }
}

}  // namespace qftmcs
