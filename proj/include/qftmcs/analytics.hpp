#pragma once

// Expected number of samples needed to observe every minimal cut set, for
// plain Monte Carlo and for amplified sampling, plus an empirical
// coupon-collection check of those closed forms.
//
// With N_MCS equally likely targets and per-sample success probability p,
// collecting all of them takes (N_MCS / p) * H(N_MCS) draws in expectation.
// Monte Carlo at p_i = 0.5 has p = N_MCS / 2^N_BE.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <iomanip>
#include <limits>
#include <memory>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "qftmcs/classical.hpp"
#include "qftmcs/qaa.hpp"
#include "qftmcs/random.hpp"
#include "qftmcs/statevector.hpp"

namespace qftmcs {

inline double harmonic(std::uint64_t n) {
    if (n == 0) throw std::invalid_argument("harmonic: n must be >= 1");
    double h = 0.0;
    for (std::uint64_t k = n; k >= 1; --k) h += 1.0 / static_cast<double>(k);
    return h;
}

inline double expected_samples_mc(unsigned n_be, std::uint64_t n_mcs) {
    if (n_mcs == 0) throw std::invalid_argument("expected_samples_mc: no minimal cut sets to collect");
    const double configs = std::ldexp(1.0, static_cast<int>(n_be));
    if (static_cast<double>(n_mcs) > configs) throw std::invalid_argument("expected_samples_mc: n_mcs exceeds 2^n_be");
    return configs * harmonic(n_mcs);
}

inline double expected_samples_qaa(std::uint64_t n_mcs, double p_qaa) {
    if (n_mcs == 0) throw std::invalid_argument("expected_samples_qaa: no minimal cut sets to collect");
    if (!(p_qaa > 0.0 && p_qaa <= 1.0)) throw std::invalid_argument("expected_samples_qaa: probability must be in (0, 1]");
    return static_cast<double>(n_mcs) / p_qaa * harmonic(n_mcs);
}

/// E[X_MC] / E[X_QAA] = p_qaa 2^n_be / n_mcs.
inline double improvement_ratio(unsigned n_be, std::uint64_t n_mcs, double p_qaa) {
    if (n_mcs == 0) throw std::invalid_argument("improvement_ratio: n_mcs must be >= 1");
    return p_qaa * std::ldexp(1.0, static_cast<int>(n_be)) / static_cast<double>(n_mcs);
}

/// Amplified MCS probability predicted from the Monte Carlo rate.
inline double qaa_probability(double p_mc, unsigned j) { return theoretical_probability(p_mc, j); }

/// Draws one basic-event pattern (bit i = basic event i).
using PatternSampler = std::function<std::uint64_t(Rng &)>;

struct SamplerSpec {
    enum class Kind { MonteCarlo, Naive, Proposed } kind = Kind::MonteCarlo;
    unsigned j = 0;

    static SamplerSpec monte_carlo() { return {Kind::MonteCarlo, 0}; }
    static SamplerSpec naive(unsigned j) { return {Kind::Naive, j}; }
    static SamplerSpec proposed(unsigned j) { return {Kind::Proposed, j}; }
};

struct CouponStats {
    std::size_t trials = 0;
    double mean = std::numeric_limits<double>::quiet_NaN();
    double standard_error = std::numeric_limits<double>::quiet_NaN();
};

/// Per trial t (seeded derive_seed(seed, t)), draws until every pattern in
/// `targets.mcs_masks` has been seen; returns mean and standard error of the
/// draw counts. A trial exceeding `max_draws` throws.
inline CouponStats coupon_collection_experiment(const McsEnumeration &targets, const PatternSampler &sampler,
                                                std::size_t trials, std::uint64_t seed,
                                                std::uint64_t max_draws = 100'000'000) {
    CouponStats out;
    out.trials = trials;
    if (trials == 0) return out;
    if (targets.mcs_masks.empty()) throw std::invalid_argument("coupon collection: tree has no minimal cut sets");
    std::vector<double> counts;
    counts.reserve(trials);
    std::vector<std::uint8_t> seen(targets.configs);
    for (std::size_t t = 0; t < trials; ++t) {
        Rng rng(derive_seed(seed, t));
        std::fill(seen.begin(), seen.end(), 0);
        std::size_t missing = targets.mcs_masks.size();
        std::uint64_t draws = 0;
        while (missing > 0) {
            if (++draws > max_draws) throw std::runtime_error("coupon collection: draw limit exceeded");
            const std::uint64_t m = sampler(rng);
            if (targets.is_mcs(m) && !seen[m]) {
                seen[m] = 1;
                --missing;
            }
        }
        counts.push_back(static_cast<double>(draws));
    }
    double sum = 0.0;
    for (double c : counts) sum += c;
    out.mean = sum / static_cast<double>(trials);
    if (trials > 1) {
        double ss = 0.0;
        for (double c : counts) ss += (c - out.mean) * (c - out.mean);
        out.standard_error = std::sqrt(ss / static_cast<double>(trials - 1) / static_cast<double>(trials));
    }
    return out;
}

/// Sampler plus the exact distribution over basic-event patterns it draws from.
struct BuiltSampler {
    PatternSampler draw;
    std::vector<double> pattern_distribution;
};

/// Monte Carlo draws use p_i = 0.5 for every basic event; amplified draws
/// come from the evolved statevector after `spec.j` Grover applications.
inline BuiltSampler make_pattern_sampler(const FaultTree &tree, const SamplerSpec &spec,
                                         unsigned max_qubits = kDefaultMaxQubits) {
    const std::size_t n = tree.n_be();
    if (spec.kind == SamplerSpec::Kind::MonteCarlo) {
        BuiltSampler out;
        out.pattern_distribution.assign(std::size_t{1} << n, std::ldexp(1.0, -static_cast<int>(n)));
        out.draw = [n](Rng &rng) {
            std::uint64_t m = 0;
            for (std::size_t i = 0; i < n; ++i)
                if (rng.bernoulli(0.5)) m |= std::uint64_t{1} << i;
            return m;
        };
        return out;
    }
    Amplifier amp(tree, spec.kind == SamplerSpec::Kind::Naive ? Variant::Naive : Variant::Proposed, max_qubits);
    for (unsigned k = 0; k < spec.j; ++k) amp.advance();
    auto outcomes = std::make_shared<OutcomeSampler>(amp.state());
    const std::uint64_t mask = amp.be_mask();
    return {[outcomes, mask](Rng &rng) { return outcomes->draw(rng) & mask; }, amp.pattern_distribution()};
}

inline CouponStats coupon_collection_experiment(const FaultTree &tree, const SamplerSpec &spec, std::size_t trials,
                                                std::uint64_t seed, unsigned max_qubits = kDefaultMaxQubits) {
    const auto targets = enumerate_mcs(tree);
    if (trials == 0) return CouponStats{};
    const auto sampler = make_pattern_sampler(tree, spec, max_qubits);
    return coupon_collection_experiment(targets, sampler.draw, trials, seed);
}

/// Largest |P(m | MCS) * N_MCS - 1| over minimal cut sets m: 0 when the
/// sampler, conditioned on hitting an MCS, is uniform over them.
inline double mcs_uniformity_deviation(const McsEnumeration &targets, const std::vector<double> &pattern_distribution) {
    double total = 0.0;
    for (auto m : targets.mcs_masks) total += pattern_distribution[m];
    if (total <= 0.0) return std::numeric_limits<double>::quiet_NaN();
    const double n = static_cast<double>(targets.mcs_masks.size());
    double worst = 0.0;
    for (auto m : targets.mcs_masks) worst = std::max(worst, std::abs(pattern_distribution[m] / total * n - 1.0));
    return worst;
}

struct MethodSummary {
    std::string name;
    std::optional<unsigned> j;
    /// Per-sample probability of drawing an MCS.
    double p_mcs = 0.0;
    double expected_samples = 0.0;
    long long expected_samples_rounded = 0;
    double ratio_vs_mc = 1.0;
    CouponStats empirical;
    double uniformity_deviation = std::numeric_limits<double>::quiet_NaN();
};

struct ComparisonReport {
    unsigned n_be = 0;
    std::uint64_t n_mcs = 0;
    double p_mc = 0.0;
    std::uint64_t seed = 0;
    std::size_t trials = 0;
    MethodSummary monte_carlo;
    MethodSummary naive;
    MethodSummary proposed;
};

struct CompareOptions {
    /// Unset: pick the j in [0, j_search_max] with the largest exact MCS probability.
    std::optional<unsigned> j_naive;
    std::optional<unsigned> j_proposed;
    unsigned j_search_max = 12;
    std::size_t trials = 0;
    std::uint64_t seed = 0;
    unsigned max_qubits = kDefaultMaxQubits;
};

namespace detail {

inline unsigned best_measured_j(const FaultTree &tree, Variant v, unsigned j_max, unsigned max_qubits) {
    RunOptions opt;
    opt.max_qubits = max_qubits;
    const auto runs = sweep(tree, v, j_max, opt);
    unsigned best = 0;
    for (const auto &r : runs)
        if (r.exact_mcs_probability > runs[best].exact_mcs_probability + 1e-12) best = r.j;
    return best;
}

inline void finish(MethodSummary &m, unsigned n_be, std::uint64_t n_mcs) {
    m.expected_samples = expected_samples_qaa(n_mcs, m.p_mcs);
    m.expected_samples_rounded = std::llround(m.expected_samples);
    m.ratio_vs_mc = improvement_ratio(n_be, n_mcs, m.p_mcs);
}

}  // namespace detail

/// Closed-form comparison of Monte Carlo, naive and proposed sampling, with
/// amplified MCS probabilities measured from exact statevectors. trials > 0
/// adds the empirical coupon-collection check for all three samplers.
inline ComparisonReport compare_methods(const FaultTree &tree, const CompareOptions &opt) {
    const auto targets = enumerate_mcs(tree);
    if (targets.mcs_masks.empty()) throw std::invalid_argument("compare: tree has no minimal cut sets");
    ComparisonReport r;
    r.n_be = static_cast<unsigned>(tree.n_be());
    r.n_mcs = targets.mcs_masks.size();
    r.p_mc = static_cast<double>(r.n_mcs) / static_cast<double>(targets.configs);
    r.seed = opt.seed;
    r.trials = opt.trials;

    r.monte_carlo.name = "monte_carlo";
    r.monte_carlo.p_mcs = r.p_mc;
    detail::finish(r.monte_carlo, r.n_be, r.n_mcs);
    r.monte_carlo.expected_samples = expected_samples_mc(r.n_be, r.n_mcs);
    r.monte_carlo.expected_samples_rounded = std::llround(r.monte_carlo.expected_samples);

    auto amplified = [&](MethodSummary &m, const char *name, Variant v, std::optional<unsigned> j) {
        m.name = name;
        m.j = j ? *j : detail::best_measured_j(tree, v, opt.j_search_max, opt.max_qubits);
        RunOptions ro;
        ro.max_qubits = opt.max_qubits;
        m.p_mcs = run_variant(tree, v, *m.j, ro).exact_mcs_probability;
        detail::finish(m, r.n_be, r.n_mcs);
    };
    amplified(r.naive, "naive", Variant::Naive, opt.j_naive);
    amplified(r.proposed, "proposed", Variant::Proposed, opt.j_proposed);

    std::uint64_t stream = 0;
    for (MethodSummary *m : {&r.monte_carlo, &r.naive, &r.proposed}) {
        const SamplerSpec spec = m == &r.monte_carlo ? SamplerSpec::monte_carlo()
                                 : m == &r.naive     ? SamplerSpec::naive(*m->j)
                                                     : SamplerSpec::proposed(*m->j);
        const std::uint64_t method_seed = derive_seed(opt.seed, stream++);
        if (opt.trials == 0) continue;
        const auto sampler = make_pattern_sampler(tree, spec, opt.max_qubits);
        m->uniformity_deviation = mcs_uniformity_deviation(targets, sampler.pattern_distribution);
        m->empirical = coupon_collection_experiment(targets, sampler.draw, opt.trials, method_seed);
    }
    return r;
}

namespace detail {

inline std::string fixed(double v, int digits) {
    if (std::isnan(v)) return "-";
    std::ostringstream os;
    os << std::fixed << std::setprecision(digits) << v;
    return os.str();
}

}  // namespace detail

/// `method,j,p_mcs,expected_samples,expected_samples_rounded,ratio_vs_mc,empirical_mean,empirical_stderr,trials,uniformity_deviation`.
inline void write_report_csv(std::ostream &os, const ComparisonReport &r) {
    os << "method,j,p_mcs,expected_samples,expected_samples_rounded,ratio_vs_mc,empirical_mean,empirical_stderr,"
          "trials,uniformity_deviation\n";
    for (const MethodSummary *m : {&r.monte_carlo, &r.naive, &r.proposed}) {
        os << m->name << ',' << (m->j ? std::to_string(*m->j) : "") << ',' << format_double(m->p_mcs) << ','
           << format_double(m->expected_samples) << ',' << m->expected_samples_rounded << ','
           << format_double(m->ratio_vs_mc) << ',';
        if (m->empirical.trials) os << format_double(m->empirical.mean);
        os << ',';
        if (m->empirical.trials > 1) os << format_double(m->empirical.standard_error);
        os << ',' << m->empirical.trials << ',';
        if (!std::isnan(m->uniformity_deviation)) os << format_double(m->uniformity_deviation);
        os << '\n';
    }
}

/// Aligned text table: one column per method.
inline void write_report_table(std::ostream &os, const ComparisonReport &r) {
    os << "Expected samples to collect all " << r.n_mcs << " MCS (N_BE=" << r.n_be << ", p_MC=" << r.p_mc << ")\n\n";
    const MethodSummary *ms[] = {&r.monte_carlo, &r.naive, &r.proposed};
    auto row = [&](const std::string &label, auto cell) {
        os << std::left << std::setw(22) << label;
        for (const auto *m : ms) os << std::right << std::setw(16) << cell(*m);
        os << '\n';
    };
    row("", [](const MethodSummary &m) { return m.name; });
    row("j", [](const MethodSummary &m) { return m.j ? std::to_string(*m.j) : std::string("-"); });
    row("p(MCS)", [](const MethodSummary &m) { return detail::fixed(m.p_mcs, 6); });
    row("E[X]", [](const MethodSummary &m) { return detail::fixed(m.expected_samples, 3); });
    row("E[X] rounded", [](const MethodSummary &m) { return std::to_string(m.expected_samples_rounded); });
    row("ratio vs MC", [](const MethodSummary &m) { return detail::fixed(m.ratio_vs_mc, 3); });
    if (r.trials) {
        row("empirical mean", [](const MethodSummary &m) { return detail::fixed(m.empirical.mean, 2); });
        row("empirical std err", [](const MethodSummary &m) { return detail::fixed(m.empirical.standard_error, 2); });
        row("MCS uniformity dev", [](const MethodSummary &m) { return detail::fixed(m.uniformity_deviation, 6); });
        os << "\ntrials=" << r.trials << " seed=" << r.seed << '\n';
    }
}

}  // namespace qftmcs
