// Copyright 2026 The staterent Authors
// SPDX-License-Identifier: Apache-2.0

#include <staterent/cache_sim.hpp>
#include <staterent/errors.hpp>

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace staterent
{
void TierPolicy::validate() const
{
    if (costs.size() != boundaries.size() + 1)
        throw ConfigError{"cache.costs", "need exactly one more cost than boundaries"};
    if (std::adjacent_find(boundaries.begin(), boundaries.end(), std::greater_equal<>{}) !=
        boundaries.end())
        throw ConfigError{"cache.boundaries", "must be strictly ascending"};
    if (std::adjacent_find(costs.begin(), costs.end(), std::greater_equal<>{}) != costs.end())
        throw ConfigError{"cache.costs", "must be strictly increasing"};
}

std::size_t classify(Timestamp rent_paid_ts, Timestamp now, const TierPolicy& policy)
{
    if (now < rent_paid_ts)
        throw std::invalid_argument{"classify: now precedes the rent timestamp"};
    const auto age = now - rent_paid_ts;
    // First boundary strictly greater than age.
    return static_cast<std::size_t>(
        std::upper_bound(policy.boundaries.begin(), policy.boundaries.end(), age) -
        policy.boundaries.begin());
}

std::uint64_t CacheStats::total_accesses() const noexcept
{
    return std::accumulate(accesses_per_tier.begin(), accesses_per_tier.end(), std::uint64_t{0});
}

CacheSimulator::CacheSimulator(TierPolicy policy) : policy_{std::move(policy)}
{
    policy_.validate();
    stats_.accesses_per_tier.assign(policy_.tier_count(), 0);
    stats_.residency.assign(policy_.tier_count(), 0);
}

void CacheSimulator::observe(std::size_t tier)
{
    if (tier >= policy_.tier_count())
        throw std::out_of_range{"observe: tier index out of range"};
    ++stats_.accesses_per_tier[tier];
    stats_.total_cost += policy_.costs[tier];
}

void CacheSimulator::record_residency(const StateTrie& trie, Timestamp now)
{
    std::fill(stats_.residency.begin(), stats_.residency.end(), 0);
    trie.for_each_leaf([&](const LeafNode& leaf) {
        ++stats_.residency[classify(leaf.rent_paid_ts, now, policy_)];
    });
}
}  // namespace staterent
