// Copyright 2026 The staterent Authors
// SPDX-License-Identifier: Apache-2.0

// staterent: run rent scenarios, spot-check the rent pipeline, inspect snapshots.
//
// Exit codes: 0 success, 1 runtime failure, 2 usage or config error.

#include <staterent/cache_sim.hpp>
#include <staterent/config.hpp>
#include <staterent/errors.hpp>
#include <staterent/rent.hpp>
#include <staterent/scenario.hpp>
#include <staterent/state_trie.hpp>

#include <CLI11.hpp>

#include <algorithm>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

namespace
{
using namespace staterent;

constexpr int kExitRuntime = 1;
constexpr int kExitUsage = 2;

struct RunArgs
{
    std::string config;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> output_dir;
    std::optional<std::string> format;
};

struct OracleArgs
{
    std::uint64_t size = 0;
    std::uint64_t last_ts = 0;
    std::uint64_t now = 0;
    RentParams params;
    std::string horizon;
};

struct InspectArgs
{
    std::string snapshot;
    std::optional<std::uint64_t> now;
    std::uint64_t overhead = RentParams{}.storage_overhead_bytes;
};

int cmd_run(const RunArgs& args)
{
    ScenarioConfig config;
    try
    {
        config = load_config(args.config);
        if (args.seed)
            config.workload.seed = *args.seed;
        if (args.output_dir)
            config.output.dir = *args.output_dir;
        if (args.format)
        {
            if (*args.format == "csv")
                config.output.formats = {MetricsFormat::csv};
            else if (*args.format == "json")
                config.output.formats = {MetricsFormat::json};
            else
                config.output.formats = {MetricsFormat::csv, MetricsFormat::json};
        }
        config.validate();
    }
    catch (const ConfigError& e)
    {
        std::cerr << args.config << ": " << e.what() << '\n';
        return kExitUsage;
    }

    try
    {
        std::ofstream stream_file;
        std::ostream* stream_dump = nullptr;
        if (config.output.dump_stream)
        {
            std::filesystem::create_directories(config.output.dir);
            stream_file.open(config.output.dir / (config.output.prefix + ".stream.txt"),
                std::ios::binary | std::ios::trunc);
            if (!stream_file)
                throw std::runtime_error{"cannot open stream dump file"};
            stream_dump = &stream_file;
        }
        const auto result = run_scenario(config, stream_dump);
        const auto written = write_outputs(config, result);
        write_summary(result.metrics, std::cout);
        for (const auto& path : written)
            std::cout << "wrote               " << path.string() << '\n';
    }
    catch (const std::exception& e)
    {
        std::cerr << "run failed: " << e.what() << '\n';
        return kExitRuntime;
    }
    return 0;
}

int cmd_oracle(OracleArgs args)
{
    if (args.now < args.last_ts)
    {
        std::cerr << "oracle: --now must not precede --last-ts\n";
        return kExitUsage;
    }
    if (args.size == 0)
    {
        std::cerr << "oracle: --size must be positive\n";
        return kExitUsage;
    }
    if (args.horizon == "disabled")
        args.params.accrual_horizon_seconds.reset();
    else
    {
        try
        {
            std::size_t pos = 0;
            const auto v = std::stoull(args.horizon, &pos);
            if (pos != args.horizon.size() || args.horizon.front() == '-')
                throw std::invalid_argument{"trailing characters"};
            args.params.accrual_horizon_seconds = v;
        }
        catch (const std::exception&)
        {
            std::cerr << "oracle: --horizon must be an integer or 'disabled'\n";
            return kExitUsage;
        }
    }
    if (args.params.rate_denominator_log2 > 63)
    {
        std::cerr << "oracle: --rate-log2 must be at most 63\n";
        return kExitUsage;
    }

    const auto due = rent_due(args.size, args.last_ts, args.now, args.params);
    const auto cap = apply_cap(due, args.params);
    const auto new_ts = advance_timestamp(
        args.last_ts, args.now, cap.collected, cap.fully_paid, args.size, args.params);
    std::cout << "due " << due << '\n'
              << "collected " << cap.collected << '\n'
              << "new_ts " << new_ts << '\n';
    return 0;
}

int cmd_inspect(const InspectArgs& args)
{
    Snapshot snap;
    try
    {
        snap = read_snapshot(std::filesystem::path{args.snapshot});
    }
    catch (const SnapshotError& e)
    {
        std::cerr << args.snapshot << ": " << e.what() << '\n';
        return kExitRuntime;
    }

    Timestamp max_ts = 0;
    snap.trie.for_each_leaf(
        [&](const LeafNode& leaf) { max_ts = std::max(max_ts, leaf.rent_paid_ts); });
    const auto now = args.now.value_or(max_ts);
    if (now < max_ts)
    {
        std::cerr << "inspect: --now precedes the newest rent timestamp " << max_ts << '\n';
        return kExitUsage;
    }

    const TierPolicy policy;
    CacheSimulator cache{policy};
    cache.record_residency(snap.trie, now);
    const auto stats = cache.summarize();

    std::cout << "leaves " << snap.trie.size() << '\n'
              << "effective_bytes "
              << snap.trie.total_value_bytes() + snap.trie.size() * args.overhead << '\n'
              << "now " << now << '\n';
    for (std::size_t t = 0; t < policy.tier_count(); ++t)
    {
        std::cout << "age_tier_" << t << ' ';
        if (t < policy.boundaries.size())
            std::cout << "<" << policy.boundaries[t] << "s ";
        else
            std::cout << ">=" << policy.boundaries.back() << "s ";
        std::cout << stats.residency[t] << '\n';
    }
    std::cout << "params " << to_hex(snap.params_digest) << '\n'
              << "root " << to_hex(snap.trie.root_hash()) << '\n';
    return 0;
}
}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Storage-rent simulator for trie-based blockchain state"};
    app.require_subcommand(1);

    RunArgs run_args;
    auto* run = app.add_subcommand("run", "Run a scenario config and write metrics");
    run->add_option("config", run_args.config, "Scenario YAML file")->required();
    run->add_option("--seed", run_args.seed, "Override workload.seed");
    run->add_option("--output-dir", run_args.output_dir, "Override output.dir");
    run->add_option("--format", run_args.format, "csv, json or both")
        ->check(CLI::IsMember({"csv", "json", "both"}));

    OracleArgs oracle_args;
    oracle_args.horizon = std::to_string(*RentParams{}.accrual_horizon_seconds);
    auto* oracle = app.add_subcommand("oracle", "Print due, capped collection and new timestamp");
    oracle->add_option("--size", oracle_args.size, "Effective size in bytes")->required();
    oracle->add_option("--last-ts", oracle_args.last_ts, "Rent-paid timestamp")->required();
    oracle->add_option("--now", oracle_args.now, "Settlement timestamp")->required();
    oracle->add_option("--rate-log2", oracle_args.params.rate_denominator_log2,
        "Rate is 2^-N gas/byte/s")->capture_default_str();
    oracle->add_option("--cap", oracle_args.params.cap_gas_per_node, "Per-node cap in gas")
        ->capture_default_str();
    oracle->add_option("--horizon", oracle_args.horizon, "Accrual horizon seconds or 'disabled'")
        ->capture_default_str();

    InspectArgs inspect_args;
    auto* inspect = app.add_subcommand("inspect", "Summarize a snapshot file");
    inspect->add_option("snapshot", inspect_args.snapshot, "Snapshot path")->required();
    inspect->add_option("--now", inspect_args.now, "Reference time for ages (default: newest leaf)");
    inspect->add_option("--overhead", inspect_args.overhead, "Per-leaf overhead bytes")
        ->capture_default_str();

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::CallForHelp& e)
    {
        return app.exit(e);
    }
    catch (const CLI::ParseError& e)
    {
        app.exit(e);
        return kExitUsage;
    }

    try
    {
        if (*run)
            return cmd_run(run_args);
        if (*oracle)
            return cmd_oracle(oracle_args);
        return cmd_inspect(inspect_args);
    }
    catch (const std::exception& e)
    {
        std::cerr << "error: " << e.what() << '\n';
        return kExitRuntime;
    }
}
