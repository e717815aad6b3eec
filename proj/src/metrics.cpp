// Copyright 2026 The staterent Authors
// SPDX-License-Identifier: Apache-2.0

#include <staterent/errors.hpp>
#include <staterent/metrics.hpp>

#include <nlohmann/json.hpp>

#include <cstdio>
#include <fstream>
#include <numeric>
#include <ostream>

namespace staterent
{
std::string ScenarioMetrics::rent_paying_fraction() const
{
    if (total_txs == 0)
        return "0/1";
    const auto g = std::gcd(rent_paying_txs, total_txs);
    return std::to_string(rent_paying_txs / g) + "/" + std::to_string(total_txs / g);
}

double ScenarioMetrics::rent_paying_fraction_value() const noexcept
{
    return total_txs == 0 ? 0.0 :
                            static_cast<double>(rent_paying_txs) / static_cast<double>(total_txs);
}

void MetricsCollector::begin_block(const BlockContext& block)
{
    if (finalized_)
        throw UsageError{"metrics already finalized"};
    if (open_)
        throw UsageError{"begin_block while a block is open"};
    open_ = BlockRow{};
    open_->block_number = block.number;
    open_->block_timestamp = block.timestamp;
}

void MetricsCollector::record_tx(const TxOutcome& outcome, const RentReceipt& receipt)
{
    if (finalized_)
        throw UsageError{"metrics already finalized"};
    if (!open_)
        throw UsageError{"record_tx outside a block"};
    auto& row = *open_;
    ++row.txs;
    row.rent_gas += receipt.total_rent_gas;
    row.penalty_gas += receipt.total_penalty_gas;
    if (receipt.total_rent_gas > 0)
        ++row.rent_paying_txs;

    ++metrics_.total_txs;
    metrics_.total_rent_gas += receipt.total_rent_gas;
    metrics_.total_penalty_gas += receipt.total_penalty_gas;
    if (receipt.total_rent_gas > 0)
        ++metrics_.rent_paying_txs;
    ++metrics_.txs_by_status[static_cast<std::size_t>(outcome.status)];
    for (const auto& item : receipt.items)
        ++metrics_.collections_by_reason[static_cast<std::size_t>(item.rent.reason)];
}

void MetricsCollector::end_block(
    std::uint64_t state_leaves, std::uint64_t state_bytes_effective, std::uint64_t cache_cost)
{
    if (!open_)
        throw UsageError{"end_block without begin_block"};
    open_->state_leaves = state_leaves;
    open_->state_bytes_effective = state_bytes_effective;
    open_->cache_cost = cache_cost;
    metrics_.blocks.push_back(*open_);
    open_.reset();
}

ScenarioMetrics MetricsCollector::finalize(const Hash256& final_root, const Hash256& params_digest,
    const CacheStats& cache, const TierPolicy& policy)
{
    if (finalized_)
        throw UsageError{"metrics already finalized"};
    if (open_)
        throw UsageError{"finalize with a block still open"};
    finalized_ = true;
    metrics_.final_root = final_root;
    metrics_.params_digest = params_digest;
    metrics_.cache = cache;
    metrics_.cache_policy = policy;
    metrics_.rng_name = rng_name;
    metrics_.workload = workload;
    metrics_.seed = seed;
    return metrics_;
}

void write_csv(const ScenarioMetrics& m, std::ostream& out)
{
    for (std::size_t i = 0; i < kCsvColumns.size(); ++i)
        out << (i ? "," : "") << kCsvColumns[i];
    out << '\n';
    for (const auto& r : m.blocks)
        out << r.block_number << ',' << r.block_timestamp << ',' << r.txs << ',' << r.rent_gas
            << ',' << r.penalty_gas << ',' << r.rent_paying_txs << ',' << r.state_leaves << ','
            << r.state_bytes_effective << ',' << r.cache_cost << '\n';
}

std::string to_json(const ScenarioMetrics& m)
{
    using nlohmann::ordered_json;

    ordered_json status = ordered_json::object();
    for (const auto s : {TxStatus::success, TxStatus::reverted, TxStatus::out_of_gas})
        status[std::string{status_name(s)}] = m.txs_by_status[static_cast<std::size_t>(s)];

    ordered_json reasons = ordered_json::object();
    for (std::size_t i = 0; i < kRentReasonCount; ++i)
        reasons[std::string{reason_name(static_cast<RentReason>(i))}] =
            m.collections_by_reason[i];

    ordered_json blocks = ordered_json::array();
    for (const auto& r : m.blocks)
    {
        const std::array<std::uint64_t, kCsvColumns.size()> values{r.block_number,
            r.block_timestamp, r.txs, r.rent_gas, r.penalty_gas, r.rent_paying_txs,
            r.state_leaves, r.state_bytes_effective, r.cache_cost};
        ordered_json row = ordered_json::object();
        for (std::size_t i = 0; i < values.size(); ++i)
            row[std::string{kCsvColumns[i]}] = values[i];
        blocks.push_back(std::move(row));
    }

    ordered_json j;
    j["schema"] = "staterent-metrics/1";
    j["workload"] = m.workload;
    j["seed"] = m.seed;
    j["rng"] = m.rng_name;
    j["hash"] = std::string{kHashName};
    j["params_digest"] = to_hex(m.params_digest);
    j["final_root"] = to_hex(m.final_root);
    j["totals"] = {
        {"txs", m.total_txs},
        {"rent_gas", m.total_rent_gas},
        {"penalty_gas", m.total_penalty_gas},
        {"rent_paying_txs", m.rent_paying_txs},
        {"rent_paying_fraction", m.rent_paying_fraction()},
        {"rent_paying_fraction_decimal", m.rent_paying_fraction_value()},
        {"status", status},
    };
    j["collections_by_reason"] = reasons;
    j["cache"] = {
        {"policy_note", "illustrative tier boundaries and costs"},
        {"boundaries", m.cache_policy.boundaries},
        {"costs", m.cache_policy.costs},
        {"accesses_per_tier", m.cache.accesses_per_tier},
        {"total_cost", m.cache.total_cost},
        {"residency", m.cache.residency},
    };
    j["blocks"] = std::move(blocks);
    return j.dump(2) + "\n";
}

void write_summary(const ScenarioMetrics& m, std::ostream& out)
{
    char fraction[32];
    std::snprintf(fraction, sizeof fraction, "%.6f", m.rent_paying_fraction_value());
    out << "workload            " << m.workload << " (seed " << m.seed << ", " << m.rng_name
        << ")\n"
        << "blocks              " << m.blocks.size() << '\n'
        << "transactions        " << m.total_txs << " (success "
        << m.txs_by_status[0] << ", reverted " << m.txs_by_status[1] << ", out_of_gas "
        << m.txs_by_status[2] << ")\n"
        << "rent gas            " << m.total_rent_gas << '\n'
        << "penalty gas         " << m.total_penalty_gas << '\n'
        << "rent-paying txs     " << m.rent_paying_txs << " (" << m.rent_paying_fraction() << " = "
        << fraction << ")\n"
        << "cache cost          " << m.cache.total_cost << " (illustrative tiers)\n"
        << "final root          " << to_hex(m.final_root) << '\n'
        << "params digest       " << to_hex(m.params_digest) << '\n';
}

void emit(const ScenarioMetrics& m, MetricsFormat format, const std::filesystem::path& path)
{
    std::ofstream out{path, std::ios::binary | std::ios::trunc};
    if (!out)
        throw std::runtime_error{"cannot open " + path.string() + " for writing"};
    if (format == MetricsFormat::csv)
        write_csv(m, out);
    else
        out << to_json(m);
    out.flush();
    if (!out)
        throw std::runtime_error{"failed writing " + path.string()};
}
}  // namespace staterent
