#include <gtest/gtest.h>

#include <cmath>
#include <fstream>
#include <map>
#include <random>
#include <set>
#include <sstream>

#include "qftmcs/classical.hpp"
#include "support.hpp"

using namespace qftmcs;

namespace {

FaultTree load(const char *name) {
    std::ifstream in(test::data_path(name));
    return parse_fault_tree(in);
}

// Independent f_FT: recursive evaluation by id lookup on the raw definition.
bool reference_eval(const TreeDefinition &def, const std::string &id, const Config &cfg) {
    for (std::size_t i = 0; i < def.basic_events.size(); ++i)
        if (def.basic_events[i].id == id) return cfg[i];
    for (const auto &g : def.gate_events) {
        if (g.id != id) continue;
        bool acc = g.op == GateOp::And;
        for (const auto &in : g.inputs) {
            const bool v = reference_eval(def, in, cfg);
            acc = g.op == GateOp::And ? (acc && v) : (acc || v);
        }
        return acc;
    }
    throw std::logic_error("unknown id " + id);
}

}  // namespace

TEST(Evaluate, SixEventListedMcsFailTheSystem) {
    const auto t = load("six_event_and.ft");
    const auto tr = evaluate(t, Config{1, 1, 1, 0, 0, 1});
    EXPECT_TRUE(tr.top);
    EXPECT_EQ(tr.ie_bits, (std::vector<std::uint8_t>{1, 1, 1}));
    EXPECT_FALSE(evaluate(t, Config(6)).top);
    EXPECT_THROW(evaluate(t, Config{1, 0}), std::invalid_argument);
}

TEST(Evaluate, FourEventTruthTable) {
    const auto t = load("four_event_mixed.ft");
    for (std::uint64_t m = 0; m < 16; ++m) {
        const auto c = Config::from_mask(m, 4);
        const bool expected = (c[0] || c[1]) || (c[2] && c[3]);
        EXPECT_EQ(evaluate(t, c).top, expected) << c;
        EXPECT_EQ(evaluate_top(t, m), expected);
    }
}

TEST(TurnOff, Examples) {
    EXPECT_EQ(turn_off(Config{1, 1, 0}, 0), (Config{0, 1, 0}));
    EXPECT_EQ(turn_off(Config{0, 1, 0}, 0), (Config{0, 1, 0}));
    EXPECT_EQ(turn_off(Config{1, 1, 1, 0, 0, 1}, 5), (Config{1, 1, 1, 0, 0, 0}));
    EXPECT_THROW(turn_off(Config{1, 1}, 2), std::out_of_range);
}

TEST(IsMcs, Examples) {
    const auto t = load("six_event_and.ft");
    EXPECT_TRUE(is_mcs(t, Config{1, 1, 1, 0, 0, 1}));
    EXPECT_FALSE(is_mcs(t, Config{1, 1, 1, 1, 0, 1}));
    EXPECT_FALSE(is_mcs(t, Config(6)));
}

TEST(Enumerate, SixEventTreeHasThreeListedMcs) {
    const auto e = enumerate_mcs(load("six_event_and.ft"));
    std::set<std::string> got;
    for (const auto &c : e.mcs()) got.insert(c.to_string());
    EXPECT_EQ(got, (std::set<std::string>{"111001", "110101", "110011"}));
}

TEST(Enumerate, EightEventPairs) {
    const auto e = enumerate_mcs(load("eight_event_pairs.ft"));
    EXPECT_EQ(e.configs, 256u);
    EXPECT_EQ(e.cut_sets, 81u);
    EXPECT_EQ(e.mcs_masks.size(), 16u);
}

TEST(Enumerate, SingleAnd) {
    const auto t = parse_fault_tree(std::string_view("basic A p=0.5\nbasic B p=0.5\ngate T AND A B\ntop T\n"));
    const auto e = enumerate_mcs(t);
    ASSERT_EQ(e.mcs().size(), 1u);
    EXPECT_EQ(e.mcs()[0], (Config{1, 1}));
}

TEST(Enumerate, CapIsEnforced) {
    std::mt19937_64 rng(3);
    const auto t = test::random_fault_tree(rng, 6);
    EXPECT_THROW(enumerate_mcs(t, 5), CapacityError);
}

TEST(ConfigProbability, Examples) {
    const auto four = load("four_event_mixed.ft");
    EXPECT_NEAR(config_probability(four, Config(4)), 0.9 * 0.8 * 0.7 * 0.6, 1e-15);
    const auto eight = load("eight_event_pairs.ft");
    EXPECT_DOUBLE_EQ(config_probability(eight, Config{1, 0, 1, 0, 1, 0, 1, 0}), 1.0 / 256);
    const std::vector<double> p{0.3};
    EXPECT_DOUBLE_EQ(config_probability(p, 1), 0.3);
}

TEST(ClassicalProperty, AgreesWithRecursiveReference) {
    std::mt19937_64 rng(21);
    for (int trial = 0; trial < 100; ++trial) {
        const auto t = test::random_fault_tree(rng, 2 + rng() % 7);
        for (std::uint64_t m = 0; m < (std::uint64_t{1} << t.n_be()); ++m) {
            const auto c = Config::from_mask(m, t.n_be());
            ASSERT_EQ(evaluate(t, c).top, reference_eval(t.definition(), t.definition().top, c));
        }
    }
}

TEST(ClassicalProperty, MonotoneAndProbabilitiesSumToOne) {
    std::mt19937_64 rng(22);
    for (int trial = 0; trial < 100; ++trial) {
        const auto t = test::random_fault_tree(rng, 2 + rng() % 7);
        const auto p = t.probabilities();
        double total = 0.0;
        for (std::uint64_t m = 0; m < (std::uint64_t{1} << t.n_be()); ++m) {
            total += config_probability(p, m);
            for (std::size_t i = 0; i < t.n_be(); ++i)
                ASSERT_GE(evaluate_top(t, m), evaluate_top(t, m & ~(std::uint64_t{1} << i)));
        }
        EXPECT_NEAR(total, 1.0, 1e-12);
    }
}

TEST(ClassicalProperty, EnumerationMatchesDefinitionAndIsAntichain) {
    std::mt19937_64 rng(23);
    for (int trial = 0; trial < 100; ++trial) {
        const auto t = test::random_fault_tree(rng, 2 + rng() % 8);
        const auto e = enumerate_mcs(t);
        std::uint64_t cuts = 0;
        for (std::uint64_t m = 0; m < e.configs; ++m) {
            const auto c = Config::from_mask(m, t.n_be());
            cuts += evaluate(t, c).top;
            ASSERT_EQ(e.is_mcs(m), is_mcs(t, c));
            ASSERT_EQ(e.is_cut_set(m), evaluate(t, c).top);
        }
        EXPECT_EQ(e.cut_sets, cuts);
        for (auto a : e.mcs_masks) {
            for (auto b : e.mcs_masks) {
                if (a != b) {
                    ASSERT_NE(a & b, a) << "MCS " << a << " dominated by " << b;
                }
            }
        }
    }
}

TEST(MonteCarlo, EightEventMcsFrequency) {
    const auto t = load("eight_event_pairs.ft");
    const auto e = enumerate_mcs(t);
    const std::size_t shots = 100000;
    const auto samples = monte_carlo_sample(t, shots, 99);
    std::size_t hits = 0;
    for (const auto &s : samples) {
        hits += e.is_mcs(s.config.mask());
        ASSERT_EQ(s.trace, evaluate(t, s.config));
    }
    const double p = 0.0625, sigma = std::sqrt(p * (1 - p) / shots);
    EXPECT_NEAR(static_cast<double>(hits) / shots, p, 3 * sigma);
}

TEST(MonteCarlo, ZeroProbabilitiesGiveAllZeros) {
    const auto t = parse_fault_tree(std::string_view("basic A p=0\nbasic B p=0\ngate T OR A B\ntop T\n"));
    for (const auto &s : monte_carlo_sample(t, 500, 4)) {
        EXPECT_EQ(s.config, (Config{0, 0}));
        EXPECT_FALSE(s.trace.top);
    }
}

TEST(MonteCarlo, SeedDeterminesStream) {
    const auto t = load("four_event_mixed.ft");
    const auto a = monte_carlo_sample(t, 1000, 42), b = monte_carlo_sample(t, 1000, 42),
               c = monte_carlo_sample(t, 1000, 43);
    std::ostringstream sa, sb, sc;
    const auto e = enumerate_mcs(t);
    write_samples_csv(sa, t, a, e);
    write_samples_csv(sb, t, b, e);
    write_samples_csv(sc, t, c, e);
    EXPECT_EQ(sa.str(), sb.str());
    EXPECT_NE(sa.str(), sc.str());
}

TEST(MonteCarlo, ChiSquareAgainstProductLaw) {
    const auto t = load("four_event_mixed.ft");
    const std::size_t shots = 100000;
    std::vector<double> counts(16, 0.0);
    for (const auto &s : monte_carlo_sample(t, shots, 7)) counts[s.config.mask()] += 1;
    double chi2 = 0.0;
    const auto p = t.probabilities();
    for (std::uint64_t m = 0; m < 16; ++m) {
        const double expected = shots * config_probability(p, m);
        chi2 += (counts[m] - expected) * (counts[m] - expected) / expected;
    }
    // 15 degrees of freedom; 37.7 is the 0.999 quantile.
    EXPECT_LT(chi2, 37.7);
}

TEST(Rng, UniformIsInUnitIntervalAndDerivedSeedsDiffer) {
    Rng rng(5);
    for (int i = 0; i < 10000; ++i) {
        const double u = rng.uniform();
        ASSERT_GE(u, 0.0);
        ASSERT_LT(u, 1.0);
    }
    EXPECT_NE(derive_seed(1, 0), derive_seed(1, 1));
    EXPECT_NE(derive_seed(1, 0), derive_seed(2, 0));
    EXPECT_EQ(derive_seed(9, 3), derive_seed(9, 3));
}

TEST(EnumerationCsv, HeaderAndRowCount) {
    const auto t = load("four_event_mixed.ft");
    std::ostringstream os;
    write_enumeration_csv(os, t, enumerate_mcs(t));
    std::istringstream in(os.str());
    std::string line;
    std::getline(in, line);
    EXPECT_EQ(line, "config_bits,is_cut_set,is_mcs,probability");
    int rows = 0;
    while (std::getline(in, line)) ++rows;
    EXPECT_EQ(rows, 16);
}
