#include <aclag/series.hpp>

#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <vector>

using namespace aclag;

TEST(TimeSeries, RejectsShortAndNonFinite) {
    EXPECT_THROW(TimeSeries({1.0}), Error);
    EXPECT_THROW(TimeSeries({1.0, NAN}), Error);
    EXPECT_THROW(TimeSeries({1.0, INFINITY}), Error);
    try {
        TimeSeries({1.0});
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::TooShort);
    }
}

TEST(Normalize, UsesSampleStandardDeviation) {
    const auto z = normalize(TimeSeries({1.0, 2.0, 3.0}, "s"));
    EXPECT_DOUBLE_EQ(z[0], -1.0);
    EXPECT_DOUBLE_EQ(z[1], 0.0);
    EXPECT_DOUBLE_EQ(z[2], 1.0);
    EXPECT_EQ(z.label(), "s");
}

TEST(Normalize, ConstantSeriesIsZeroVariance) {
    try {
        (void)normalize(TimeSeries({4.0, 4.0, 4.0}));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::ZeroVariance);
        EXPECT_EQ(exit_code(e.kind()), 3);
    }
}

TEST(Normalize, ResultHasZeroMeanUnitSd) {
    std::mt19937_64 rng(3);
    std::normal_distribution<double> g(5.0, 3.0);
    std::vector<double> v(500);
    for (auto& x : v) x = g(rng);
    const auto z = normalize(TimeSeries(v));
    EXPECT_NEAR(mean(z.values()), 0.0, 1e-12);
    EXPECT_NEAR(sample_sd(z.values()), 1.0, 1e-12);
}

TEST(Returns, FirstDifferences) {
    const auto r = returns(TimeSeries({1.0, 4.0, 2.0, 2.5}));
    ASSERT_EQ(r.size(), 3u);
    EXPECT_DOUBLE_EQ(r[0], 3.0);
    EXPECT_DOUBLE_EQ(r[1], -2.0);
    EXPECT_DOUBLE_EQ(r[2], 0.5);
}

TEST(PaddedReturns, ZeroOutsideRange) {
    PaddedReturnSeries p(ReturnSeries({1.0, 2.0}), 3);
    EXPECT_EQ(p.padded_size(), 8u);
    EXPECT_EQ(p.at(-1), 0.0);
    EXPECT_EQ(p.at(0), 1.0);
    EXPECT_EQ(p.at(1), 2.0);
    EXPECT_EQ(p.at(2), 0.0);
}

TEST(Correlation, PearsonAndUncentered) {
    const std::vector<double> a{1, 2, 3, 4};
    const std::vector<double> b{2, 4, 6, 8};
    const std::vector<double> c{4, 3, 2, 1};
    EXPECT_NEAR(pearson(a, b), 1.0, 1e-15);
    EXPECT_NEAR(pearson(a, c), -1.0, 1e-15);
    EXPECT_NEAR(uncentered_corr(a, b), 1.0, 1e-15);
    // uncentered: 20 / 30
    EXPECT_NEAR(uncentered_corr(a, c), 20.0 / 30.0, 1e-15);
    EXPECT_THROW((void)uncentered_corr(std::vector<double>{0, 0}, std::vector<double>{1, 2}), Error);
    EXPECT_THROW((void)pearson(std::vector<double>{1, 1}, std::vector<double>{1, 2}), Error);
}
