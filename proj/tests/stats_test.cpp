#include <pspso/stats.hpp>

#include "oracles.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace pspso;
using namespace pspso::stats;

TEST(Summarize, ConstantSample) {
    const std::vector<double> v{5, 5, 5};
    const auto s = summarize(v);
    EXPECT_DOUBLE_EQ(s.mean, 5.0);
    EXPECT_DOUBLE_EQ(s.std_error, 0.0);
    EXPECT_EQ(s.n, 3u);
}

TEST(Summarize, TwoValues) {
    // sd = sqrt(2), se = sqrt(2) / sqrt(2) = 1
    const std::vector<double> v{1, 3};
    const auto s = summarize(v);
    EXPECT_DOUBLE_EQ(s.mean, 2.0);
    EXPECT_DOUBLE_EQ(s.std_error, 1.0);
}

TEST(Summarize, SingleValueAndEmpty) {
    const std::vector<double> one{7};
    EXPECT_DOUBLE_EQ(summarize(one).std_error, 0.0);
    EXPECT_THROW(summarize(std::vector<double>{}), ContractViolation);
}

TEST(MannWhitney, IdenticalSamples) {
    const std::vector<double> a{1, 2, 3, 4, 5};
    const auto r = mann_whitney_u(a, a);
    EXPECT_DOUBLE_EQ(r.u, 12.5);
    EXPECT_NEAR(r.p_two_sided, 1.0, 1e-12);
}

TEST(MannWhitney, CompleteSeparation) {
    const std::vector<double> a{1, 2, 3}, b{4, 5, 6};
    EXPECT_DOUBLE_EQ(mann_whitney_u(a, b).u, 0.0);
    EXPECT_DOUBLE_EQ(mann_whitney_u(b, a).u, 9.0);
}

TEST(MannWhitney, AllTiedHasNoVariance) {
    const std::vector<double> a{2, 2}, b{2, 2, 2};
    const auto r = mann_whitney_u(a, b);
    EXPECT_DOUBLE_EQ(r.u, 3.0);
    EXPECT_DOUBLE_EQ(r.p_two_sided, 1.0);
}

TEST(MannWhitney, KnownNormalApproximation) {
    // U = 0, mu = 12.5, var = 25*11/12, z = 12/sqrt(22.9167)
    const std::vector<double> a{1, 2, 3, 4, 5}, b{6, 7, 8, 9, 10};
    const double z = 12.0 / std::sqrt(25.0 * 11.0 / 12.0);
    EXPECT_NEAR(mann_whitney_u(a, b).p_two_sided, std::erfc(z / std::sqrt(2.0)), 1e-15);
}

TEST(MannWhitney, RejectsEmptySample) {
    const std::vector<double> a{1};
    EXPECT_THROW(mann_whitney_u(a, std::vector<double>{}), ContractViolation);
}

TEST(MannWhitney, PropertiesOnRandomSamples) {
    std::mt19937_64 rng(31);
    std::uniform_int_distribution<int> size(1, 20), level(0, 6);
    std::normal_distribution<double> noise(0.0, 1.0);
    for (int trial = 0; trial < 2000; ++trial) {
        std::vector<double> a(size(rng)), b(size(rng));
        const bool ties = trial % 2 == 0;
        for (auto& x : a) x = ties ? level(rng) : noise(rng);
        for (auto& x : b) x = ties ? level(rng) : noise(rng);
        const auto ab = mann_whitney_u(a, b), ba = mann_whitney_u(b, a);
        EXPECT_DOUBLE_EQ(ab.u, oracle::u_by_pairs(a, b));
        EXPECT_DOUBLE_EQ(ab.u + ba.u, double(a.size() * b.size()));
        EXPECT_DOUBLE_EQ(ab.p_two_sided, ba.p_two_sided);
        EXPECT_GE(ab.p_two_sided, 0.0);
        EXPECT_LE(ab.p_two_sided, 1.0);
    }
}

TEST(MannWhitney, LargeShiftIsSignificant) {
    std::mt19937_64 rng(5);
    std::normal_distribution<double> noise(0.0, 1.0);
    std::vector<double> a(31), b(31);
    for (auto& x : a) x = noise(rng);
    for (auto& x : b) x = noise(rng) + 5.0;
    EXPECT_LT(mann_whitney_u(a, b).p_two_sided, 1e-9);
}

TEST(MannWhitney, CloseToPermutationOracleAtEightVsEight) {
    std::mt19937_64 rng(8);
    std::normal_distribution<double> noise(0.0, 1.0);
    for (int trial = 0; trial < 10; ++trial) {
        std::vector<double> a(8), b(8);
        for (auto& x : a) x = noise(rng);
        for (auto& x : b) x = noise(rng) + 0.3 * trial;
        EXPECT_NEAR(mann_whitney_u(a, b).p_two_sided, oracle::permutation_p(a, b), 0.02);
    }
}

TEST(AverageRanks, TieGroups) {
    const std::vector<double> v{10, 20, 10, 30, 20, 20};
    double tie_term = 0.0;
    const auto r = average_ranks(v, tie_term);
    EXPECT_EQ(r, (std::vector<double>{1.5, 4, 1.5, 6, 4, 4}));
    EXPECT_DOUBLE_EQ(tie_term, (8 - 2) + (27 - 3));
}
