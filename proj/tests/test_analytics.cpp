#include <gtest/gtest.h>

#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

#include "qftmcs/analytics.hpp"
#include "support.hpp"

using namespace qftmcs;

namespace {

FaultTree load(const char *name) {
    std::ifstream in(test::data_path(name));
    return parse_fault_tree(in);
}

}  // namespace

TEST(Harmonic, Values) {
    EXPECT_EQ(harmonic(1), 1.0);
    EXPECT_EQ(harmonic(2), 1.5);
    double sum = 0.0;
    for (int k = 1; k <= 16; ++k) sum += 1.0 / k;
    EXPECT_NEAR(harmonic(16), sum, 1e-14);
    EXPECT_NEAR(harmonic(16), 3.380729, 1e-6);
    EXPECT_THROW(harmonic(0), std::invalid_argument);
}

TEST(ExpectedSamples, MonteCarlo) {
    EXPECT_NEAR(expected_samples_mc(8, 16), 865.4666, 1e-3);
    EXPECT_EQ(std::llround(expected_samples_mc(8, 16)), 865);
    EXPECT_EQ(expected_samples_mc(7, 1), 128.0);
    EXPECT_NEAR(expected_samples_mc(2, 4), 4 * (1 + 0.5 + 1.0 / 3 + 0.25), 1e-12);
    EXPECT_THROW(expected_samples_mc(8, 0), std::invalid_argument);
    EXPECT_THROW(expected_samples_mc(2, 5), std::invalid_argument);
}

TEST(ExpectedSamples, Amplified) {
    EXPECT_EQ(std::llround(expected_samples_qaa(16, 0.196)), 276);
    EXPECT_EQ(std::llround(expected_samples_qaa(16, 0.992)), 55);
    EXPECT_NEAR(expected_samples_qaa(16, 1.0), 16 * harmonic(16), 1e-12);
    EXPECT_THROW(expected_samples_qaa(16, 0.0), std::invalid_argument);
    EXPECT_THROW(expected_samples_qaa(16, 1.1), std::invalid_argument);
}

TEST(ImprovementRatio, Values) {
    EXPECT_NEAR(improvement_ratio(8, 16, 0.992), 15.872, 1e-9);
    EXPECT_NEAR(improvement_ratio(8, 16, 16.0 / 256), 1.0, 1e-15);
    EXPECT_EQ(improvement_ratio(10, 1, 1.0), 1024.0);
}

TEST(AnalyticsProperty, RatioIsQuotientOfExpectations) {
    std::mt19937_64 rng(501);
    std::uniform_real_distribution<double> unit(1e-6, 1.0);
    for (int trial = 0; trial < 1000; ++trial) {
        const unsigned n_be = 1 + rng() % 20;
        const std::uint64_t n_mcs = 1 + rng() % std::min<std::uint64_t>(std::uint64_t{1} << n_be, 5000);
        const double p = unit(rng);
        const double lhs = improvement_ratio(n_be, n_mcs, p);
        const double rhs = expected_samples_mc(n_be, n_mcs) / expected_samples_qaa(n_mcs, p);
        ASSERT_NEAR(lhs, rhs, 1e-12 * std::max(1.0, rhs));
        ASSERT_GE(expected_samples_qaa(n_mcs, p), n_mcs * harmonic(n_mcs) * (1 - 1e-12));
    }
    for (double a : {0.01, 0.0625, 0.3}) EXPECT_EQ(qaa_probability(a, 0), theoretical_probability(a, 0));
}

TEST(CouponCollection, TwoEventsFourTargets) {
    // Every pattern of a 2-event tree is an MCS when all four are targets;
    // build the target set directly.
    McsEnumeration targets;
    targets.n_be = 2;
    targets.configs = 4;
    targets.flags.assign(4, 3);
    targets.mcs_masks = {0, 1, 2, 3};
    const PatternSampler uniform = [](Rng &rng) { return rng.next_u64() & 3U; };
    const auto stats = coupon_collection_experiment(targets, uniform, 10000, 3);
    const double expected = expected_samples_mc(2, 4);
    EXPECT_NEAR(stats.mean, expected, 0.05 * expected);
    EXPECT_NEAR(stats.mean, expected, 3 * stats.standard_error);
}

TEST(CouponCollection, SingleCertainMcs) {
    const auto t = parse_fault_tree(std::string_view("basic A p=0.5\nbasic B p=0.5\ngate T AND A B\ntop T\n"));
    // p_MC = 1/4, so j = 1 lifts the MCS probability to exactly 1
    const auto stats = coupon_collection_experiment(t, SamplerSpec::proposed(1), 100, 8);
    EXPECT_NEAR(stats.mean, 1.0, 1e-9);
}

TEST(CouponCollection, MonteCarloMatchesClosedForm) {
    const auto t = load("six_event_and.ft");
    const auto stats = coupon_collection_experiment(t, SamplerSpec::monte_carlo(), 2000, 12);
    const double expected = expected_samples_mc(6, 3);
    EXPECT_NEAR(stats.mean, expected, 3 * stats.standard_error);
}

TEST(CouponCollection, Deterministic) {
    const auto t = load("six_event_and.ft");
    const auto a = coupon_collection_experiment(t, SamplerSpec::naive(1), 50, 4);
    const auto b = coupon_collection_experiment(t, SamplerSpec::naive(1), 50, 4);
    EXPECT_EQ(a.mean, b.mean);
    EXPECT_EQ(a.standard_error, b.standard_error);
    EXPECT_EQ(coupon_collection_experiment(t, SamplerSpec::naive(1), 0, 4).trials, 0u);
}

TEST(Uniformity, AmplifiedSamplersAreUniformOverMcsAtHalfProbability) {
    const auto t = load("six_event_and.ft");
    const auto e = enumerate_mcs(t);
    for (const auto spec : {SamplerSpec::monte_carlo(), SamplerSpec::naive(2), SamplerSpec::proposed(3)}) {
        const auto s = make_pattern_sampler(t, spec);
        EXPECT_LT(mcs_uniformity_deviation(e, s.pattern_distribution), 1e-9);
    }
}

TEST(Compare, ClosedFormOnly) {
    const auto t = load("six_event_and.ft");
    CompareOptions opt;
    opt.trials = 0;
    const auto r = compare_methods(t, opt);
    EXPECT_EQ(r.n_mcs, 3u);
    EXPECT_EQ(r.monte_carlo.empirical.trials, 0u);
    EXPECT_NEAR(r.monte_carlo.expected_samples, expected_samples_mc(6, 3), 1e-12);
    EXPECT_GE(r.proposed.ratio_vs_mc, 1.0);
    std::ostringstream csv;
    write_report_csv(csv, r);
    EXPECT_EQ(csv.str().substr(0, csv.str().find('\n')),
              "method,j,p_mcs,expected_samples,expected_samples_rounded,ratio_vs_mc,empirical_mean,empirical_stderr,"
              "trials,uniformity_deviation");

    // MCS of OR(A, B) are {A} and {B}.
    const auto small = parse_fault_tree(std::string_view("basic A p=0.5\nbasic B p=0.5\ngate T OR A B\ntop T\n"));
    const auto rs = compare_methods(small, opt);
    EXPECT_EQ(rs.n_mcs, 2u);
    EXPECT_NEAR(rs.proposed.ratio_vs_mc, rs.proposed.p_mcs / rs.p_mc, 1e-12);
}

TEST(Compare, AllMarkedRatioEqualsProbability) {
    // n_mcs = 2^n_be: amplification cannot help, r = p_qaa.
    EXPECT_NEAR(improvement_ratio(3, 8, 0.7), 0.7, 1e-15);
    EXPECT_NEAR(improvement_ratio(3, 8, 1.0), 1.0, 1e-15);
}
