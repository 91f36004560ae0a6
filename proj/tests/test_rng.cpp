#include <gtest/gtest.h>

#include <cmath>
#include <set>
#include <vector>

#include "tvqc/rng.hpp"

using namespace tvqc;

TEST(Rng, SameSeedAndStreamRepeat) {
    RngStream a(42, 7), b(42, 7);
    for (int i = 0; i < 1000; ++i) ASSERT_EQ(a.next_u64(), b.next_u64());
}

TEST(Rng, StreamsDiffer) {
    std::set<std::uint64_t> firsts;
    for (std::uint64_t s = 0; s < 1000; ++s) firsts.insert(RngStream(1, s).next_u64());
    EXPECT_EQ(firsts.size(), 1000u);
    EXPECT_NE(RngStream(1, 0).next_u64(), RngStream(2, 0).next_u64());
}

TEST(Rng, MixSeedIsOrderSensitive) {
    EXPECT_NE(mix_seed(1, 2, 3), mix_seed(1, 3, 2));
    EXPECT_EQ(mix_seed(9, 1, 2, 3), mix_seed(9, 1, 2, 3));
}

TEST(Rng, UniformMoments) {
    RngStream r(3, 0);
    const int n = 200000;
    double s = 0, s2 = 0;
    for (int i = 0; i < n; ++i) {
        const double u = r.uniform();
        ASSERT_GE(u, 0.0);
        ASSERT_LT(u, 1.0);
        s += u;
        s2 += u * u;
    }
    EXPECT_NEAR(s / n, 0.5, 5 * std::sqrt(1.0 / 12 / n));
    EXPECT_NEAR(s2 / n, 1.0 / 3.0, 0.005);
}

TEST(Rng, NormalMoments) {
    RngStream r(4, 0);
    const int n = 200000;
    double s = 0, s2 = 0, s4 = 0;
    for (int i = 0; i < n; ++i) {
        const double z = r.normal();
        s += z;
        s2 += z * z;
        s4 += z * z * z * z;
    }
    EXPECT_NEAR(s / n, 0.0, 5 / std::sqrt(double(n)));
    EXPECT_NEAR(s2 / n, 1.0, 0.02);
    EXPECT_NEAR(s4 / n, 3.0, 0.1);
}

TEST(Rng, BinomialMeanAndEdges) {
    RngStream r(5, 0);
    EXPECT_EQ(r.binomial(100, 0.0), 0u);
    EXPECT_EQ(r.binomial(100, 1.0), 100u);
    const int n = 20000;
    double s = 0;
    for (int i = 0; i < n; ++i) s += double(r.binomial(40, 0.3));
    EXPECT_NEAR(s / n, 12.0, 5 * std::sqrt(40 * 0.3 * 0.7 / n));
}

TEST(Rng, BelowIsUniform) {
    RngStream r(6, 0);
    std::vector<int> counts(7, 0);
    const int n = 70000;
    for (int i = 0; i < n; ++i) {
        const auto v = r.below(7);
        ASSERT_LT(v, 7u);
        ++counts[v];
    }
    // Chi-square with 6 degrees of freedom; 22.46 is the 0.999 quantile.
    double chi2 = 0;
    for (int c : counts) chi2 += (c - 10000.0) * (c - 10000.0) / 10000.0;
    EXPECT_LT(chi2, 22.46);
}
