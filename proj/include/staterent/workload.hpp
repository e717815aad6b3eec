// Copyright 2026 The staterent Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <staterent/state_trie.hpp>
#include <staterent/tx_executor.hpp>

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

namespace staterent
{
enum class WorkloadKind : std::uint8_t
{
    erc20,
    uniform_random,
    dormant_reader,
    selfdestruct_sweep,
    dos_missing_keys,
};

std::string_view workload_kind_name(WorkloadKind kind) noexcept;
/// Throws ConfigError for an unknown name.
WorkloadKind parse_workload_kind(std::string_view name);

struct WorkloadSpec
{
    WorkloadKind kind = WorkloadKind::erc20;
    std::uint64_t seed = 1;
    std::uint64_t n_accounts = 1000;
    std::uint64_t n_txs = 1000;
    std::uint64_t txs_per_block = 10;
    /// Zipf exponent for erc20 receivers; 0 is uniform.
    double skew = 1.0;
    std::uint64_t block_interval_seconds = 30;
    Timestamp genesis_timestamp = 1'600'000'000;
    /// Extra idle time between genesis and block 1.
    std::uint64_t start_offset_seconds = 0;
    /// Idle period before dormant reads and before self-destruct sweeps.
    std::uint64_t dormancy_seconds = 31'536'000;
    std::uint64_t cells_per_contract = 100;
    /// Accesses per transaction for uniform_random, dormant_reader and dos_missing_keys.
    std::uint64_t keys_per_tx = 4;
    Gas gas_limit = 10'000'000;
    Gas exec_gas = 50'000;

    /// Throws ConfigError naming the field.
    void validate() const;

    friend bool operator==(const WorkloadSpec&, const WorkloadSpec&) = default;
};

struct GenesisLeaf
{
    std::string logical_key;
    Bytes value;
    NodeKind kind = NodeKind::storage_cell;
};

struct BlockTx
{
    BlockContext block;
    Transaction tx;

    friend bool operator==(const BlockTx&, const BlockTx&) = default;
};

/// Portable source behind every generator; its name is recorded in outputs.
inline constexpr std::string_view kRngName = "mt19937_64";

// ERC20 layout. The token's code, parameter and balance cells share the
// "erc20/" prefix; externally owned accounts live under "acct/".
inline constexpr std::size_t kErc20CodeBytes = 10'000;
inline constexpr std::size_t kErc20ParamCells = 2;
std::string account_key(std::uint64_t index);
std::string erc20_code_key();
std::string erc20_param_key(std::uint64_t index);
std::string erc20_balance_key(std::uint64_t index);

/// Seeded, deterministic transaction stream. Same spec, same stream.
class WorkloadGenerator
{
public:
    explicit WorkloadGenerator(WorkloadSpec spec);

    const WorkloadSpec& spec() const noexcept { return spec_; }

    /// Initial state, inserted with rent_paid_ts = genesis_timestamp.
    std::vector<GenesisLeaf> genesis() const;
    void apply_genesis(StateTrie& trie) const;

    std::optional<BlockTx> next();

    /// Every logical key the workload may touch matches one of these prefixes.
    std::vector<std::string> key_prefixes() const;

private:
    std::uint64_t uniform(std::uint64_t bound);
    double unit();
    std::uint64_t zipf();
    BlockContext block_for(std::uint64_t tx_index) const;
    Transaction make_erc20();
    Transaction make_uniform();
    Transaction make_dormant();
    Transaction make_selfdestruct(std::uint64_t tx_index);
    Transaction make_dos(std::uint64_t tx_index);
    Transaction base_tx(std::uint64_t sender);

    WorkloadSpec spec_;
    std::mt19937_64 rng_;
    std::uint64_t emitted_ = 0;
    std::vector<double> zipf_cdf_;
    std::vector<std::uint64_t> balances_;
    std::vector<std::uint64_t> read_order_;
    std::uint64_t read_cursor_ = 0;
};

/// Materializes a whole stream. Intended for small specs.
std::vector<BlockTx> generate(const WorkloadSpec& spec);

/// One-line text form of a transaction, for cross-implementation diffing:
///   <block> <timestamp> <sender> <gas_limit> <exec_gas> <revert 0|1> <op>[;<op>...]
/// ops: R:key  W:key:hex  C:key:A|C|S:hex  D:key  P:prefix  B:budget  E:0|1
/// An empty op list is written as "-".
std::string format_block_tx(const BlockTx& btx);
}  // namespace staterent
