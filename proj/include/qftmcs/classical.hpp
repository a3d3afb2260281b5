#pragma once

// Classical reference semantics for coherent fault trees: evaluation, the
// minimal-cut-set predicate, brute-force enumeration, the Bernoulli product
// law and Monte Carlo sampling. Every quantum result is checked against this.

#include <algorithm>
#include <cstdint>
#include <initializer_list>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "qftmcs/capacity.hpp"
#include "qftmcs/fault_tree.hpp"
#include "qftmcs/random.hpp"

namespace qftmcs {

/// Outcome of every basic event; bit i is basic event i (1 = failed).
class Config {
  public:
    Config() = default;
    explicit Config(std::size_t n) : bits_(n, 0) {}
    Config(std::initializer_list<int> bits) {
        bits_.reserve(bits.size());
        for (int b : bits) bits_.push_back(b ? 1 : 0);
    }

    /// Bit i of `mask` becomes basic event i.
    static Config from_mask(std::uint64_t mask, std::size_t n) {
        if (n > 64) throw std::invalid_argument("Config::from_mask: more than 64 events");
        Config c(n);
        for (std::size_t i = 0; i < n; ++i) c.bits_[i] = (mask >> i) & 1U;
        return c;
    }

    std::uint64_t mask() const {
        if (bits_.size() > 64) throw std::invalid_argument("Config::mask: more than 64 events");
        std::uint64_t m = 0;
        for (std::size_t i = 0; i < bits_.size(); ++i) m |= std::uint64_t{bits_[i]} << i;
        return m;
    }

    std::size_t size() const noexcept { return bits_.size(); }
    bool operator[](std::size_t i) const { return bits_.at(i) != 0; }
    void set(std::size_t i, bool value) { bits_.at(i) = value ? 1 : 0; }
    std::size_t count() const {
        std::size_t c = 0;
        for (auto b : bits_) c += b;
        return c;
    }

    /// "110001": basic event 1 first.
    std::string to_string() const {
        std::string s;
        s.reserve(bits_.size());
        for (auto b : bits_) s += b ? '1' : '0';
        return s;
    }

    bool operator==(const Config &) const = default;
    auto operator<=>(const Config &) const = default;

  private:
    std::vector<std::uint8_t> bits_;
};

inline std::ostream &operator<<(std::ostream &os, const Config &c) { return os << c.to_string(); }

struct EvaluationTrace {
    std::vector<std::uint8_t> ie_bits;
    bool top = false;

    bool operator==(const EvaluationTrace &) const = default;
};

namespace detail {

inline void check_length(const FaultTree &tree, const Config &cfg) {
    if (cfg.size() != tree.n_be())
        throw std::invalid_argument("config has " + std::to_string(cfg.size()) + " bits; tree has " +
                                    std::to_string(tree.n_be()) + " basic events");
}

/// Evaluates every gate on 64 configurations at once. `basic[i]` holds bit k =
/// outcome of basic event i in configuration k; `gates` receives the same
/// layout per gate.
inline void evaluate_sliced(const FaultTree &tree, std::span<const std::uint64_t> basic,
                            std::span<std::uint64_t> gates) {
    for (std::size_t g = 0; g < tree.gate_events().size(); ++g) {
        const bool is_and = tree.gate_events()[g].op == GateOp::And;
        std::uint64_t acc = is_and ? ~std::uint64_t{0} : 0;
        for (const auto &ref : tree.inputs(g)) {
            const std::uint64_t v = ref.is_gate ? gates[ref.index] : basic[ref.index];
            acc = is_and ? (acc & v) : (acc | v);
        }
        gates[g] = acc;
    }
}

}  // namespace detail

inline EvaluationTrace evaluate(const FaultTree &tree, const Config &cfg) {
    detail::check_length(tree, cfg);
    std::vector<std::uint64_t> basic(tree.n_be()), gates(tree.gate_events().size());
    for (std::size_t i = 0; i < basic.size(); ++i) basic[i] = cfg[i] ? 1 : 0;
    detail::evaluate_sliced(tree, basic, gates);
    EvaluationTrace trace;
    trace.ie_bits.reserve(tree.n_ie());
    for (std::size_t g = 0; g < tree.n_ie(); ++g) trace.ie_bits.push_back(static_cast<std::uint8_t>(gates[g] & 1U));
    trace.top = (gates[tree.top_index()] & 1U) != 0;
    return trace;
}

/// f_FT on a configuration packed as a bitmask (bit i = basic event i).
inline bool evaluate_top(const FaultTree &tree, std::uint64_t mask) {
    std::vector<std::uint64_t> basic(tree.n_be()), gates(tree.gate_events().size());
    for (std::size_t i = 0; i < basic.size(); ++i) basic[i] = (mask >> i) & 1U;
    detail::evaluate_sliced(tree, basic, gates);
    return (gates[tree.top_index()] & 1U) != 0;
}

inline Config turn_off(Config cfg, std::size_t i) {
    if (i >= cfg.size()) throw std::out_of_range("turn_off: index " + std::to_string(i) + " out of range");
    cfg.set(i, false);
    return cfg;
}

inline bool is_mcs(const FaultTree &tree, const Config &cfg) {
    if (!evaluate(tree, cfg).top) return false;
    for (std::size_t i = 0; i < cfg.size(); ++i)
        if (cfg[i] && evaluate(tree, turn_off(cfg, i)).top) return false;
    return true;
}

inline constexpr std::size_t kDefaultEnumerationCap = 24;

struct McsEnumeration {
    std::size_t n_be = 0;
    std::uint64_t configs = 0;
    std::uint64_t cut_sets = 0;
    /// MCS masks in increasing integer order.
    std::vector<std::uint64_t> mcs_masks;
    /// Per configuration mask: bit 0 = cut set, bit 1 = MCS.
    std::vector<std::uint8_t> flags;

    bool is_cut_set(std::uint64_t mask) const { return (flags[mask] & 1U) != 0; }
    bool is_mcs(std::uint64_t mask) const { return (flags[mask] & 2U) != 0; }

    std::vector<Config> mcs() const {
        std::vector<Config> out;
        out.reserve(mcs_masks.size());
        for (auto m : mcs_masks) out.push_back(Config::from_mask(m, n_be));
        return out;
    }
};

/// Exhaustive classification of all 2^N_BE configurations.
inline McsEnumeration enumerate_mcs(const FaultTree &tree, std::size_t cap = kDefaultEnumerationCap) {
    const std::size_t n = tree.n_be();
    if (n > cap || n > 40)
        throw CapacityError("enumeration of " + std::to_string(n) + " basic events exceeds the cap of " +
                            std::to_string(cap));
    McsEnumeration out;
    out.n_be = n;
    out.configs = std::uint64_t{1} << n;
    out.flags.assign(out.configs, 0);

    std::vector<std::uint64_t> basic(n), gates(tree.gate_events().size());
    constexpr std::uint64_t lane_pattern[6] = {
        0xaaaaaaaaaaaaaaaaULL, 0xccccccccccccccccULL, 0xf0f0f0f0f0f0f0f0ULL,
        0xff00ff00ff00ff00ULL, 0xffff0000ffff0000ULL, 0xffffffff00000000ULL,
    };
    for (std::uint64_t base = 0; base < out.configs; base += 64) {
        for (std::size_t i = 0; i < n; ++i)
            basic[i] = i < 6 ? lane_pattern[i] : (((base >> i) & 1U) ? ~std::uint64_t{0} : 0);
        detail::evaluate_sliced(tree, basic, gates);
        const std::uint64_t top = gates[tree.top_index()];
        const std::uint64_t lanes = std::min<std::uint64_t>(64, out.configs - base);
        for (std::uint64_t k = 0; k < lanes; ++k) out.flags[base + k] = static_cast<std::uint8_t>((top >> k) & 1U);
    }

    for (std::uint64_t m = 0; m < out.configs; ++m) {
        if (!(out.flags[m] & 1U)) continue;
        ++out.cut_sets;
        bool minimal = true;
        for (std::uint64_t rest = m; rest && minimal; rest &= rest - 1) {
            const std::uint64_t bit = rest & (~rest + 1);
            minimal = !(out.flags[m ^ bit] & 1U);
        }
        if (minimal) {
            out.flags[m] |= 2U;
            out.mcs_masks.push_back(m);
        }
    }
    return out;
}

/// Product law g(x) = prod p_i^x_i (1 - p_i)^(1 - x_i).
inline double config_probability(std::span<const double> p, std::uint64_t mask) {
    double prob = 1.0;
    for (std::size_t i = 0; i < p.size(); ++i) prob *= ((mask >> i) & 1U) ? p[i] : 1.0 - p[i];
    return prob;
}

inline double config_probability(const FaultTree &tree, const Config &cfg) {
    detail::check_length(tree, cfg);
    double prob = 1.0;
    for (std::size_t i = 0; i < cfg.size(); ++i) {
        const double p = tree.basic_events()[i].p;
        prob *= cfg[i] ? p : 1.0 - p;
    }
    return prob;
}

struct TreeSample {
    Config config;
    EvaluationTrace trace;
};

/// Draws iid basic-event configurations (bit i ~ Bernoulli(p_i), one uniform
/// per event in index order) and propagates them through the tree.
class MonteCarloSampler {
  public:
    MonteCarloSampler(const FaultTree &tree, std::uint64_t seed)
        : MonteCarloSampler(tree, tree.probabilities(), seed) {}

    MonteCarloSampler(const FaultTree &tree, std::vector<double> probabilities, std::uint64_t seed)
        : tree_(&tree), p_(std::move(probabilities)), rng_(seed) {
        if (p_.size() != tree.n_be()) throw std::invalid_argument("MonteCarloSampler: probability count mismatch");
    }

    Config next_config() {
        Config c(p_.size());
        for (std::size_t i = 0; i < p_.size(); ++i) c.set(i, rng_.bernoulli(p_[i]));
        return c;
    }

    TreeSample next() {
        Config c = next_config();
        EvaluationTrace t = evaluate(*tree_, c);
        return {std::move(c), std::move(t)};
    }

  private:
    const FaultTree *tree_;
    std::vector<double> p_;
    Rng rng_;
};

inline std::vector<TreeSample> monte_carlo_sample(const FaultTree &tree, std::size_t shots, std::uint64_t seed) {
    if (shots == 0) throw std::invalid_argument("monte_carlo_sample: shots must be >= 1");
    MonteCarloSampler sampler(tree, seed);
    std::vector<TreeSample> out;
    out.reserve(shots);
    for (std::size_t s = 0; s < shots; ++s) out.push_back(sampler.next());
    return out;
}

/// Shortest round-trip text for CSV cells.
inline std::string csv_number(double v) { return format_double(v); }

/// `config_bits,is_cut_set,is_mcs,probability`, one row per configuration.
inline void write_enumeration_csv(std::ostream &os, const FaultTree &tree, const McsEnumeration &e) {
    const auto p = tree.probabilities();
    os << "config_bits,is_cut_set,is_mcs,probability\n";
    for (std::uint64_t m = 0; m < e.configs; ++m) {
        os << Config::from_mask(m, e.n_be).to_string() << ',' << (e.is_cut_set(m) ? 1 : 0) << ','
           << (e.is_mcs(m) ? 1 : 0) << ',' << csv_number(config_probability(p, m)) << '\n';
    }
}

/// Same columns for a Monte Carlo stream; is_mcs is looked up in `e`.
inline void write_samples_csv(std::ostream &os, const FaultTree &tree, std::span<const TreeSample> samples,
                              const McsEnumeration &e) {
    os << "config_bits,is_cut_set,is_mcs,probability\n";
    for (const auto &s : samples) {
        const std::uint64_t m = s.config.mask();
        os << s.config.to_string() << ',' << (s.trace.top ? 1 : 0) << ',' << (e.is_mcs(m) ? 1 : 0) << ','
           << csv_number(config_probability(tree, s.config)) << '\n';
    }
}

}  // namespace qftmcs
