// Copyright 2026 The staterent Authors
// SPDX-License-Identifier: Apache-2.0

#include <staterent/scenario.hpp>
#include <staterent/tx_executor.hpp>
#include <staterent/workload.hpp>

#include <fstream>
#include <ostream>

namespace staterent
{
namespace
{
std::uint64_t effective_bytes(const StateTrie& trie, const RentParams& params)
{
    return trie.total_value_bytes() + trie.size() * params.storage_overhead_bytes;
}
}  // namespace

ScenarioResult run_scenario(const ScenarioConfig& config, std::ostream* stream_dump)
{
    config.validate();
    const auto digest = params_digest(config);

    WorkloadGenerator gen{config.workload};
    StateTrie trie;
    if (config.snapshot_in)
        trie = read_snapshot(*config.snapshot_in).trie;
    else
        gen.apply_genesis(trie);

    CacheSimulator cache{config.cache};
    MetricsCollector collector;
    collector.rng_name = std::string{kRngName};
    collector.workload = std::string{workload_kind_name(config.workload.kind)};
    collector.seed = config.workload.seed;

    Timestamp now = config.workload.genesis_timestamp;
    std::uint64_t current_block = 0;
    std::uint64_t block_cost_start = 0;
    const LeafAccessObserver observe = [&](const LeafNode& leaf) {
        cache.observe_leaf(leaf.rent_paid_ts, now);
    };

    const auto close_block = [&] {
        collector.end_block(trie.size(), effective_bytes(trie, config.rent),
            cache.total_cost() - block_cost_start);
    };

    while (auto btx = gen.next())
    {
        if (!collector.block_open() || btx->block.number != current_block)
        {
            if (collector.block_open())
                close_block();
            collector.begin_block(btx->block);
            current_block = btx->block.number;
            block_cost_start = cache.total_cost();
        }
        now = btx->block.timestamp;
        if (stream_dump != nullptr)
            *stream_dump << format_block_tx(*btx) << '\n';
        const auto [outcome, receipt] = execute_tx(btx->tx, trie, btx->block, config.rent, observe);
        collector.record_tx(outcome, receipt);
    }
    if (collector.block_open())
        close_block();

    cache.record_residency(trie, now);
    auto metrics = collector.finalize(trie.root_hash(), digest, cache.summarize(), config.cache);
    return ScenarioResult{std::move(metrics), std::move(trie)};
}

std::vector<std::filesystem::path> write_outputs(
    const ScenarioConfig& config, const ScenarioResult& result)
{
    std::vector<std::filesystem::path> written;
    const auto& dir = config.output.dir;
    std::filesystem::create_directories(dir);
    for (const auto format : config.output.formats)
    {
        auto path = dir / (config.output.prefix + (format == MetricsFormat::csv ? ".csv" : ".json"));
        emit(result.metrics, format, path);
        written.push_back(std::move(path));
    }
    if (config.snapshot_out)
    {
        auto path = config.snapshot_out->is_relative() ? dir / *config.snapshot_out :
                                                         *config.snapshot_out;
        write_snapshot(result.trie, result.metrics.params_digest, path);
        written.push_back(std::move(path));
    }
    return written;
}
}  // namespace staterent
