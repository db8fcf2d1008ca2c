#include <gtest/gtest.h>

#include <cmath>
#include <numeric>
#include <random>

#include "oracles.hpp"
#include "test_support.hpp"
#include "slicing4meta/error.hpp"
#include "slicing4meta/qoe.hpp"

using namespace slicing4meta;

namespace {

UserSession user(double rate, double bep, double demand)
{
    UserSession u;
    u.id = "u";
    u.rate = rate;
    u.bep = bep;
    u.demand = demand;
    u.n_objects = std::max(1, static_cast<int>(demand / 20.0));
    return u;
}

}  // namespace

TEST(Perception, BelowThresholdIsZero)
{
    EXPECT_EQ(rendering_perception(0.0, 20.0, {}), 0.0);
    EXPECT_EQ(rendering_perception(0.5, 20.0, {}), 0.0);
}

TEST(Perception, MatchesQuadratureOfWeberFechner)
{
    const double quad = oracle::integrate_inverse(1.0, 1.0, 20.0);
    EXPECT_NEAR(quad, 2.995732273553991, 1e-9);
    EXPECT_NEAR(rendering_perception(20.0, 20.0, {}), 2.995732273553991, 1e-12);
}

TEST(Perception, SaturatesAtDemand)
{
    EXPECT_DOUBLE_EQ(rendering_perception(100.0, 20.0, {}), rendering_perception(20.0, 20.0, {}));
}

TEST(Perception, RejectsBadParams)
{
    QoEParams p;
    p.k = 0.0;
    EXPECT_EQ(error_code([&] { rendering_perception(1.0, 1.0, p); }), Errc::InvalidParams);
    p = {};
    p.c0 = -1.0;
    EXPECT_EQ(error_code([&] { rendering_perception(1.0, 1.0, p); }), Errc::InvalidParams);
}

TEST(Perception, LogDifferenceLaw)
{
    std::mt19937_64 gen(7);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int i = 0; i < 200; ++i) {
        QoEParams p;
        p.k = 0.1 + 5.0 * unit(gen);
        p.c0 = 0.1 + 10.0 * unit(gen);
        const double demand = p.c0 * (1.0 + 500.0 * unit(gen));
        double c1 = p.c0 + (demand - p.c0) * unit(gen);
        double c2 = p.c0 + (demand - p.c0) * unit(gen);
        if (c1 > c2) std::swap(c1, c2);
        const double diff = rendering_perception(c2, demand, p) - rendering_perception(c1, demand, p);
        const double expected = p.k * std::log(c2 / c1);
        EXPECT_LE(std::abs(diff - expected), 1e-12 * std::max(1.0, std::abs(expected)));
    }
}

TEST(ObjectiveQuality, Examples)
{
    EXPECT_EQ(objective_quality(0.0, 0.0, {}), 0.0);
    EXPECT_EQ(objective_quality(100.0, 1.0, {}), 0.0);
    EXPECT_NEAR(objective_quality(100.0, 0.0, {}), 1.0 - 1.0 / oracle::exp_series(1.0), 1e-15);
    EXPECT_NEAR(objective_quality(100.0, 0.0, {}), 0.632121, 1e-6);
}

TEST(ObjectiveQuality, Errors)
{
    EXPECT_EQ(error_code([] { objective_quality(1.0, 1.5, {}); }), Errc::DomainError);
    EXPECT_EQ(error_code([] { objective_quality(1.0, -0.1, {}); }), Errc::DomainError);
    QoEParams p;
    p.r_ref = 0.0;
    EXPECT_EQ(error_code([&] { objective_quality(1.0, 0.0, p); }), Errc::InvalidParams);
}

TEST(ObjectiveQuality, StrictlyMonotone)
{
    double prev = objective_quality(0.0, 0.01, {});
    for (double r = 10.0; r <= 2000.0; r += 10.0) {
        const double q = objective_quality(r, 0.01, {});
        EXPECT_GT(q, prev);
        EXPECT_LT(q, 1.0);
        prev = q;
    }
    EXPECT_GT(objective_quality(100.0, 0.1, {}), objective_quality(100.0, 0.2, {}));
}

TEST(MetaImmersion, ProductOfComponents)
{
    const auto u = UserSession::make("a", 100.0, 0.0, 1, {});
    EXPECT_EQ(u.demand, 20.0);
    const MIResult r = meta_immersion(u, 20.0, {});
    EXPECT_EQ(r.user_id, "a");
    // 0.632121 * 2.995732 from the two component oracles
    const double expected = (1.0 - 1.0 / oracle::exp_series(1.0)) * oracle::integrate_inverse(1.0, 1.0, 20.0);
    EXPECT_NEAR(r.mi, expected, 1e-9);
    EXPECT_NEAR(r.mi, 1.893664, 1e-6);
}

TEST(MetaImmersion, ZeroRateAnnihilates)
{
    EXPECT_EQ(meta_immersion(UserSession::make("a", 0.0, 0.0, 5, {}), 100.0, {}).mi, 0.0);
}

TEST(MetaImmersion, HigherRateWins)
{
    const auto slow = UserSession::make("s", 50.0, 0.001, 3, {});
    const auto fast = UserSession::make("f", 200.0, 0.001, 3, {});
    EXPECT_GT(meta_immersion(fast, 40.0, {}).mi, meta_immersion(slow, 40.0, {}).mi);
}

TEST(MetaImmersion, MonotoneAndSaturating)
{
    const auto u = UserSession::make("a", 150.0, 0.01, 4, {});
    double prev = 0.0;
    for (double c = 0.0; c <= 200.0; c += 0.5) {
        const double mi = meta_immersion(u, c, {}).mi;
        EXPECT_GE(mi, prev);
        if (c >= u.demand) EXPECT_EQ(mi, meta_immersion(u, u.demand, {}).mi);
        prev = mi;
    }
}

TEST(EvenAllocation, SplitsBudget)
{
    std::vector<UserSession> users(40, user(100.0, 0.0, 20.0));
    for (double c : even_allocation(4000.0, users)) EXPECT_EQ(c, 100.0);
    std::vector<UserSession> one(1, user(100.0, 0.0, 20.0));
    EXPECT_EQ(even_allocation(4000.0, one).front(), 4000.0);
    EXPECT_EQ(error_code([] { even_allocation(10.0, {}); }), Errc::EmptyUserSet);
}

TEST(MiMaxAllocation, SingleUserCappedAtDemand)
{
    std::vector<UserSession> users{user(100.0, 0.0, 100.0)};
    EXPECT_DOUBLE_EQ(mi_max_allocation(4000.0, users, {}).front(), 100.0);
}

TEST(MiMaxAllocation, SymmetricUsersSplitEvenly)
{
    std::vector<UserSession> users{user(100.0, 0.0, 100.0), user(100.0, 0.0, 100.0)};
    const auto a = mi_max_allocation(100.0, users, {});
    EXPECT_NEAR(a[0], 50.0, 1e-9);
    EXPECT_NEAR(a[1], 50.0, 1e-9);
}

TEST(MiMaxAllocation, MatchesGridSearchOnThreeUsers)
{
    const QoEParams p;
    std::vector<UserSession> users{user(50.0, 0.0, 40.0), user(100.0, 0.0, 60.0), user(200.0, 0.0, 80.0)};
    std::vector<oracle::GridUser> grid;
    for (const auto& u : users) grid.push_back({(1.0 - 1.0 / oracle::exp_series(u.rate / 100.0)), static_cast<int>(u.demand)});
    const double grid_best = oracle::grid_optimum(grid, 120, p.c0);
    EXPECT_NEAR(grid_best, 7.0633451028490875, 1e-9);  // frozen from tests/oracles/oracles.py

    const auto a = mi_max_allocation(120.0, users, p);
    const double got = allocation_objective(users, a, p);
    EXPECT_LE(std::abs(got - grid_best), 1e-3 * grid_best);
    EXPECT_NEAR(a[0] + a[1] + a[2], 120.0, 1e-9);
}

TEST(MiMaxAllocation, ZeroQualityUsersGetNothing)
{
    std::vector<UserSession> users{user(0.0, 0.0, 100.0), user(100.0, 0.0, 100.0)};
    const auto a = mi_max_allocation(100.0, users, {});
    EXPECT_EQ(a[0], 0.0);
    EXPECT_NEAR(a[1], 100.0, 1e-9);
}

TEST(MiMaxAllocation, ZeroBudget)
{
    std::vector<UserSession> users{user(100.0, 0.0, 100.0), user(50.0, 0.0, 60.0)};
    for (double c : mi_max_allocation(0.0, users, {})) EXPECT_EQ(c, 0.0);
}

TEST(MiMaxAllocation, TinyBudgetDropsWeakUsers)
{
    // Two users cannot both get past the perception threshold usefully.
    std::vector<UserSession> users{user(400.0, 0.0, 100.0), user(50.0, 0.0, 100.0)};
    const auto a = mi_max_allocation(2.5, users, {});
    EXPECT_NEAR(a[0], 2.5, 1e-9);
    EXPECT_EQ(a[1], 0.0);
}

TEST(MiMaxAllocation, RandomInstancesRespectBudgetAndDominateEven)
{
    std::mt19937_64 gen(2024);
    std::uniform_real_distribution<double> rate(10.0, 500.0);
    std::uniform_real_distribution<double> bep(0.0, 0.2);
    std::uniform_int_distribution<int> objects(1, 56);
    std::uniform_int_distribution<int> count(1, 30);
    std::uniform_real_distribution<double> budget(0.0, 5000.0);
    const QoEParams p;
    for (int trial = 0; trial < 300; ++trial) {
        std::vector<UserSession> users;
        const int n = count(gen);
        for (int i = 0; i < n; ++i) users.push_back(UserSession::make("u", rate(gen), bep(gen), objects(gen), p));
        const double total = budget(gen);
        const auto a = mi_max_allocation(total, users, p);
        const double sum = std::accumulate(a.begin(), a.end(), 0.0);
        EXPECT_LE(sum, total + 1e-9 * total);
        for (std::size_t i = 0; i < users.size(); ++i) {
            EXPECT_GE(a[i], 0.0);
            EXPECT_LE(a[i], users[i].demand);
        }
        const auto even = even_allocation(total, users);
        EXPECT_GE(mean_mi(users, a, p), mean_mi(users, even, p) - 1e-9);
    }
}

TEST(MiMaxAllocation, ArgmaxInvariantUnderWeightScaling)
{
    std::mt19937_64 gen(99);
    std::uniform_real_distribution<double> rate(20.0, 300.0);
    std::uniform_int_distribution<int> objects(1, 30);
    for (int trial = 0; trial < 50; ++trial) {
        QoEParams p;
        std::vector<UserSession> users;
        for (int i = 0; i < 6; ++i) users.push_back(UserSession::make("u", rate(gen), 0.01, objects(gen), p));
        const auto base = mi_max_allocation(500.0, users, p);
        // Scaling k multiplies every weight G_i k by the same constant.
        QoEParams scaled = p;
        scaled.k = 7.5;
        const auto other = mi_max_allocation(500.0, users, scaled);
        for (std::size_t i = 0; i < users.size(); ++i) EXPECT_NEAR(base[i], other[i], 1e-9 * 500.0);
    }
}

TEST(MiMaxAllocation, Errors)
{
    EXPECT_EQ(error_code([] { mi_max_allocation(10.0, {}, {}); }), Errc::EmptyUserSet);
}

TEST(Readjustment, Threshold)
{
    const QoEParams p;
    EXPECT_FALSE(needs_readjustment(100.0, 100.0, p));
    EXPECT_TRUE(needs_readjustment(100.0, 111.0, p));
    EXPECT_FALSE(needs_readjustment(100.0, 109.9, p));
    EXPECT_TRUE(needs_readjustment(100.0, 80.0, p));
    EXPECT_EQ(error_code([&] { needs_readjustment(0.0, 1.0, p); }), Errc::DomainError);
}
