// Copyright 2026 The staterent Authors
// SPDX-License-Identifier: Apache-2.0

#include <staterent/cache_sim.hpp>
#include <staterent/config.hpp>
#include <staterent/errors.hpp>
#include <staterent/scenario.hpp>

#include <gtest/gtest.h>

#include <limits>

using namespace staterent;

TEST(cache_sim, classify_boundaries)
{
    const TierPolicy p;
    const Timestamp now = 100'000'000;
    EXPECT_EQ(classify(now, now, p), 0u);
    EXPECT_EQ(classify(now - (30 * 86'400 - 1), now, p), 0u);
    EXPECT_EQ(classify(now - 30 * 86'400, now, p), 1u);
    EXPECT_EQ(classify(now - (31'536'000 - 1), now, p), 1u);
    EXPECT_EQ(classify(now - 31'536'000, now, p), 2u);
    EXPECT_EQ(classify(0, now, p), 2u);
}

TEST(cache_sim, tier_monotone_in_age)
{
    const TierPolicy p;
    const Timestamp now = 200'000'000;
    std::size_t prev = 0;
    for (Timestamp age = 0; age < 100'000'000; age += 997)
    {
        const auto t = classify(now - age, now, p);
        EXPECT_GE(t, prev);
        prev = t;
    }
}

TEST(cache_sim, costs_accumulate)
{
    CacheSimulator sim{TierPolicy{}};
    sim.observe(0);
    sim.observe(1);
    sim.observe(2);
    sim.observe(2);
    const auto s = sim.summarize();
    EXPECT_EQ(s.total_cost, 1 + 10 + 100 + 100u);
    EXPECT_EQ(s.total_accesses(), 4u);
    EXPECT_EQ(s.accesses_per_tier, (std::vector<std::uint64_t>{1, 1, 2}));
    EXPECT_THROW(sim.observe(3), std::out_of_range);
}

TEST(cache_sim, residency)
{
    StateTrie trie;
    trie.put(Key::from_logical("a"), Bytes{1}, 1000);
    trie.put(Key::from_logical("b"), Bytes{1}, 0);
    CacheSimulator sim{TierPolicy{}};
    sim.record_residency(trie, 40'000'000);
    EXPECT_EQ(sim.summarize().residency, (std::vector<std::uint64_t>{0, 0, 2}));
}

TEST(cache_sim, policy_validation)
{
    TierPolicy p;
    p.boundaries = {10, 5};
    EXPECT_THROW(p.validate(), ConfigError);
    p = {};
    p.costs = {1, 2};
    EXPECT_THROW(p.validate(), ConfigError);
}

// Keeping rent fresh moves accesses into hotter tiers. With rent always
// collected (zero thresholds, unbounded cap) every written node is refreshed
// on touch; with rent never collected the timestamps stay at genesis.
TEST(cache_sim, fresh_rent_lowers_cost)
{
    ScenarioConfig base;
    base.workload.kind = WorkloadKind::uniform_random;
    base.workload.n_accounts = 50;
    base.workload.n_txs = 2000;
    base.workload.block_interval_seconds = 86'400;
    base.workload.start_offset_seconds = 400 * 86'400;

    auto fresh = base;
    fresh.rent.read_threshold_gas = 0;
    fresh.rent.write_threshold_gas = 0;
    fresh.rent.cap_gas_per_node = std::numeric_limits<Gas>::max();

    auto stale = base;
    stale.rent.read_threshold_gas = std::numeric_limits<Gas>::max();
    stale.rent.write_threshold_gas = std::numeric_limits<Gas>::max();
    stale.rent.cap_gas_per_node = std::numeric_limits<Gas>::max();

    const auto a = run_scenario(fresh).metrics.cache.total_cost;
    const auto b = run_scenario(stale).metrics.cache.total_cost;
    EXPECT_LT(a, b);
}
