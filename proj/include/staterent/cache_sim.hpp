// Copyright 2026 The staterent Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <staterent/state_trie.hpp>

#include <cstdint>
#include <vector>

namespace staterent
{
/// Tiering by rent-timestamp age. k boundaries give k+1 tiers, tier 0 hottest.
/// The defaults (30 days / 1 year, costs 1/10/100) are illustrative only.
struct TierPolicy
{
    std::vector<std::uint64_t> boundaries{30 * 86'400, 31'536'000};
    std::vector<std::uint64_t> costs{1, 10, 100};

    /// Throws ConfigError.
    void validate() const;

    std::size_t tier_count() const noexcept { return boundaries.size() + 1; }

    friend bool operator==(const TierPolicy&, const TierPolicy&) = default;
};

/// Smallest i with age < boundaries[i], else the last tier.
/// Throws std::invalid_argument when now < rent_paid_ts.
std::size_t classify(Timestamp rent_paid_ts, Timestamp now, const TierPolicy& policy);

struct CacheStats
{
    std::vector<std::uint64_t> accesses_per_tier;
    std::uint64_t total_cost = 0;
    /// Leaves per tier when the scenario ended.
    std::vector<std::uint64_t> residency;

    std::uint64_t total_accesses() const noexcept;

    friend bool operator==(const CacheStats&, const CacheStats&) = default;
};

class CacheSimulator
{
public:
    explicit CacheSimulator(TierPolicy policy);

    const TierPolicy& policy() const noexcept { return policy_; }

    void observe(std::size_t tier);
    void observe_leaf(Timestamp rent_paid_ts, Timestamp now) { observe(classify(rent_paid_ts, now, policy_)); }

    /// Tier occupancy of every leaf in `trie` as of `now`.
    void record_residency(const StateTrie& trie, Timestamp now);

    std::uint64_t total_cost() const noexcept { return stats_.total_cost; }

    CacheStats summarize() const { return stats_; }

private:
    TierPolicy policy_;
    CacheStats stats_;
};
}  // namespace staterent
