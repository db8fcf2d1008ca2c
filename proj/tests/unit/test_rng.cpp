#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "slicing4meta/rng.hpp"

using namespace slicing4meta;

// Vectors from an independent Python implementation (tests/oracles/oracles.py).
TEST(Rng, SplitMix64Vectors)
{
    std::uint64_t s = 0;
    EXPECT_EQ(splitmix64(s), 0xe220a8397b1dcdafULL);
    EXPECT_EQ(splitmix64(s), 0x6e789e6aa1b965f4ULL);
    EXPECT_EQ(splitmix64(s), 0x06c45d188009454fULL);
}

TEST(Rng, XoshiroVectors)
{
    Rng zero(0);
    for (std::uint64_t v : {0x99ec5f36cb75f2b4ULL, 0xbf6e1f784956452aULL, 0x1a5f849d4933e6e0ULL,
                            0x6aa594f1262d2d2cULL, 0xbba5ad4a1f842e59ULL})
        EXPECT_EQ(zero.next(), v);
    Rng answer(42);
    for (std::uint64_t v : {0x15780b2e0c2ec716ULL, 0x6104d9866d113a7eULL, 0xae17533239e499a1ULL,
                            0xecb8ad4703b360a1ULL, 0xfde6dc7fe2ec5e64ULL})
        EXPECT_EQ(answer.next(), v);
}

TEST(Rng, UniformIntRangeAndDegenerate)
{
    Rng r(5);
    for (int i = 0; i < 1000; ++i) EXPECT_EQ(r.uniform_int(5, 5), 5);
    for (int i = 0; i < 10000; ++i) {
        const auto v = r.uniform_int(1, 56);
        EXPECT_GE(v, 1);
        EXPECT_LE(v, 56);
    }
}

TEST(Rng, Uniform01AndExponential)
{
    Rng r(9);
    double sum = 0.0;
    const int n = 200000;
    for (int i = 0; i < n; ++i) {
        const double u = r.uniform01();
        ASSERT_GE(u, 0.0);
        ASSERT_LT(u, 1.0);
        sum += r.exponential(10.0);
    }
    // mean 10, sd 10/sqrt(n)
    EXPECT_NEAR(sum / n, 10.0, 5.0 * 10.0 / std::sqrt(n));
}
