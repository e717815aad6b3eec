// Copyright 2026 The staterent Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <staterent/cache_sim.hpp>
#include <staterent/rent.hpp>
#include <staterent/tx_executor.hpp>

#include <array>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace staterent
{
struct BlockRow
{
    std::uint64_t block_number = 0;
    Timestamp block_timestamp = 0;
    std::uint64_t txs = 0;
    Gas rent_gas = 0;
    Gas penalty_gas = 0;
    std::uint64_t rent_paying_txs = 0;
    std::uint64_t state_leaves = 0;
    std::uint64_t state_bytes_effective = 0;
    std::uint64_t cache_cost = 0;

    friend bool operator==(const BlockRow&, const BlockRow&) = default;
};

/// Column order of the CSV output; also the JSON field order of each block row.
inline constexpr std::array<std::string_view, 9> kCsvColumns{"block_number", "block_timestamp",
    "txs", "rent_gas", "penalty_gas", "rent_paying_txs", "state_leaves", "state_bytes_effective",
    "cache_cost"};

struct ScenarioMetrics
{
    std::vector<BlockRow> blocks;

    std::uint64_t total_txs = 0;
    Gas total_rent_gas = 0;
    Gas total_penalty_gas = 0;
    std::uint64_t rent_paying_txs = 0;
    std::array<std::uint64_t, 3> txs_by_status{};
    std::array<std::uint64_t, kRentReasonCount> collections_by_reason{};
    Hash256 final_root;
    Hash256 params_digest;
    std::string rng_name;
    std::string workload;
    std::uint64_t seed = 0;
    CacheStats cache;
    TierPolicy cache_policy;

    /// rent_paying_txs / total_txs in lowest terms; 0/1 when there were no transactions.
    std::string rent_paying_fraction() const;
    double rent_paying_fraction_value() const noexcept;
};

/// Accumulates per-block rows during a run.
class MetricsCollector
{
public:
    void begin_block(const BlockContext& block);
    void record_tx(const TxOutcome& outcome, const RentReceipt& receipt);
    /// Closes the open block with end-of-block state figures.
    void end_block(std::uint64_t state_leaves, std::uint64_t state_bytes_effective,
        std::uint64_t cache_cost);

    /// Throws UsageError when called twice or with a block still open.
    ScenarioMetrics finalize(const Hash256& final_root, const Hash256& params_digest,
        const CacheStats& cache, const TierPolicy& policy);

    bool block_open() const noexcept { return open_.has_value(); }

    // Labels carried into the output.
    std::string rng_name{"mt19937_64"};
    std::string workload;
    std::uint64_t seed = 0;

private:
    ScenarioMetrics metrics_;
    std::optional<BlockRow> open_;
    bool finalized_ = false;
};

void write_csv(const ScenarioMetrics& m, std::ostream& out);
std::string to_json(const ScenarioMetrics& m);
/// Short human-readable table.
void write_summary(const ScenarioMetrics& m, std::ostream& out);

enum class MetricsFormat : std::uint8_t
{
    csv,
    json,
};

/// Throws std::runtime_error if the path cannot be written.
void emit(const ScenarioMetrics& m, MetricsFormat format, const std::filesystem::path& path);
}  // namespace staterent
