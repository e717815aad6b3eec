// Copyright 2026 The staterent Authors
// SPDX-License-Identifier: Apache-2.0

#include <staterent/errors.hpp>
#include <staterent/workload.hpp>

#include <algorithm>
#include <cmath>

namespace staterent
{
namespace
{
constexpr std::uint64_t kInitialBalance = 1'000'000'000'000;
constexpr std::uint64_t kGenesisStreamSalt = 0x9e3779b97f4a7c15;

std::string hex_id(std::uint64_t v)
{
    static constexpr char digits[] = "0123456789abcdef";
    std::string s(8, '0');
    for (int i = 7; i >= 0 && v != 0; --i, v >>= 4)
        s[static_cast<std::size_t>(i)] = digits[v & 0xf];
    if (v != 0)  // wider than 8 hex digits
        s = hex_id(v) + s;
    return s;
}

Bytes be32(std::uint64_t v)
{
    Bytes out(32, 0);
    for (int i = 0; i < 8; ++i)
        out[31 - static_cast<std::size_t>(i)] = static_cast<std::uint8_t>(v >> (8 * i));
    return out;
}

Bytes random_bytes(std::mt19937_64& rng, std::size_t n)
{
    Bytes out(n);
    for (std::size_t i = 0; i < n; i += 8)
    {
        const auto word = rng();
        for (std::size_t j = 0; j < 8 && i + j < n; ++j)
            out[i + j] = static_cast<std::uint8_t>(word >> (8 * j));
    }
    return out;
}

std::string uniform_cell_key(std::uint64_t i)
{
    return "ur/cell/" + hex_id(i);
}

std::string dormant_cell_key(std::uint64_t i)
{
    return "dr/cell/" + hex_id(i);
}

std::string contract_key(std::uint64_t c)
{
    return "sd/" + hex_id(c);
}

std::string contract_cell_key(std::uint64_t c, std::uint64_t j)
{
    return contract_key(c) + "/s/" + hex_id(j);
}
}  // namespace

std::string account_key(std::uint64_t index)
{
    return "acct/" + hex_id(index);
}

std::string erc20_code_key()
{
    return "erc20/code";
}

std::string erc20_param_key(std::uint64_t index)
{
    return "erc20/param/" + hex_id(index);
}

std::string erc20_balance_key(std::uint64_t index)
{
    return "erc20/bal/" + hex_id(index);
}

std::string_view workload_kind_name(WorkloadKind kind) noexcept
{
    switch (kind)
    {
    case WorkloadKind::erc20:
        return "erc20";
    case WorkloadKind::uniform_random:
        return "uniform_random";
    case WorkloadKind::dormant_reader:
        return "dormant_reader";
    case WorkloadKind::selfdestruct_sweep:
        return "selfdestruct_sweep";
    case WorkloadKind::dos_missing_keys:
        return "dos_missing_keys";
    }
    return "unknown";
}

WorkloadKind parse_workload_kind(std::string_view name)
{
    for (const auto k : {WorkloadKind::erc20, WorkloadKind::uniform_random,
             WorkloadKind::dormant_reader, WorkloadKind::selfdestruct_sweep,
             WorkloadKind::dos_missing_keys})
        if (workload_kind_name(k) == name)
            return k;
    throw ConfigError{"workload.kind", "unknown workload kind '" + std::string{name} + "'"};
}

void WorkloadSpec::validate() const
{
    if (n_accounts == 0)
        throw ConfigError{"workload.n_accounts", "must be positive"};
    if (kind == WorkloadKind::erc20 && n_accounts < 2)
        throw ConfigError{"workload.n_accounts", "erc20 needs at least 2 accounts"};
    if (n_txs == 0)
        throw ConfigError{"workload.n_txs", "must be positive"};
    if (txs_per_block == 0)
        throw ConfigError{"workload.txs_per_block", "must be positive"};
    if (block_interval_seconds == 0)
        throw ConfigError{"workload.block_interval_seconds", "must be positive"};
    if (!std::isfinite(skew) || skew < 0)
        throw ConfigError{"workload.skew", "must be a finite non-negative number"};
    if (cells_per_contract == 0)
        throw ConfigError{"workload.cells_per_contract", "must be positive"};
    if (keys_per_tx == 0)
        throw ConfigError{"workload.keys_per_tx", "must be positive"};
    if (exec_gas > gas_limit)
        throw ConfigError{"workload.exec_gas", "must not exceed gas_limit"};
}

WorkloadGenerator::WorkloadGenerator(WorkloadSpec spec) : spec_{spec}, rng_{spec.seed}
{
    spec_.validate();
    if (spec_.kind == WorkloadKind::erc20)
    {
        zipf_cdf_.resize(spec_.n_accounts);
        double total = 0;
        for (std::uint64_t k = 0; k < spec_.n_accounts; ++k)
        {
            total += std::pow(static_cast<double>(k + 1), -spec_.skew);
            zipf_cdf_[k] = total;
        }
        balances_.assign(spec_.n_accounts, kInitialBalance);
    }
    if (spec_.kind == WorkloadKind::dormant_reader)
    {
        read_order_.resize(spec_.n_accounts);
        for (std::uint64_t i = 0; i < spec_.n_accounts; ++i)
            read_order_[i] = i;
        for (std::uint64_t i = spec_.n_accounts; i > 1; --i)
            std::swap(read_order_[i - 1], read_order_[uniform(i)]);
    }
}

std::uint64_t WorkloadGenerator::uniform(std::uint64_t bound)
{
    // Rejection sampling keeps the mapping portable and unbiased.
    const std::uint64_t threshold = (0 - bound) % bound;
    for (;;)
    {
        const auto x = rng_();
        if (x >= threshold)
            return x % bound;
    }
}

double WorkloadGenerator::unit()
{
    return static_cast<double>(rng_() >> 11) * 0x1.0p-53;
}

std::uint64_t WorkloadGenerator::zipf()
{
    const double target = unit() * zipf_cdf_.back();
    const auto it = std::upper_bound(zipf_cdf_.begin(), zipf_cdf_.end(), target);
    return std::min<std::uint64_t>(
        static_cast<std::uint64_t>(it - zipf_cdf_.begin()), spec_.n_accounts - 1);
}

std::vector<GenesisLeaf> WorkloadGenerator::genesis() const
{
    std::vector<GenesisLeaf> leaves;
    std::mt19937_64 rng{spec_.seed ^ kGenesisStreamSalt};
    for (std::uint64_t i = 0; i < spec_.n_accounts; ++i)
        leaves.push_back({account_key(i), be32(kInitialBalance), NodeKind::account});

    switch (spec_.kind)
    {
    case WorkloadKind::erc20:
        leaves.push_back({erc20_code_key(), random_bytes(rng, kErc20CodeBytes), NodeKind::code});
        for (std::uint64_t p = 0; p < kErc20ParamCells; ++p)
            leaves.push_back({erc20_param_key(p), random_bytes(rng, 32), NodeKind::storage_cell});
        for (std::uint64_t i = 0; i < spec_.n_accounts; ++i)
            leaves.push_back({erc20_balance_key(i), be32(kInitialBalance), NodeKind::storage_cell});
        break;
    case WorkloadKind::uniform_random:
        for (std::uint64_t i = 0; i < spec_.n_accounts; ++i)
            leaves.push_back({uniform_cell_key(i), random_bytes(rng, 32), NodeKind::storage_cell});
        break;
    case WorkloadKind::dormant_reader:
        for (std::uint64_t i = 0; i < spec_.n_accounts; ++i)
            leaves.push_back({dormant_cell_key(i), random_bytes(rng, 32), NodeKind::storage_cell});
        break;
    case WorkloadKind::selfdestruct_sweep:
    case WorkloadKind::dos_missing_keys:
        break;
    }
    return leaves;
}

void WorkloadGenerator::apply_genesis(StateTrie& trie) const
{
    for (auto& leaf : genesis())
        trie.put(Key::from_logical(std::move(leaf.logical_key)), std::move(leaf.value),
            spec_.genesis_timestamp, leaf.kind);
}

std::vector<std::string> WorkloadGenerator::key_prefixes() const
{
    switch (spec_.kind)
    {
    case WorkloadKind::erc20:
        return {"acct/", "erc20/"};
    case WorkloadKind::uniform_random:
        return {"acct/", "ur/cell/"};
    case WorkloadKind::dormant_reader:
        return {"acct/", "dr/cell/"};
    case WorkloadKind::selfdestruct_sweep:
        return {"acct/", "sd/"};
    case WorkloadKind::dos_missing_keys:
        return {"acct/", "dos/"};
    }
    return {};
}

BlockContext WorkloadGenerator::block_for(std::uint64_t tx_index) const
{
    const auto tpb = spec_.txs_per_block;
    std::uint64_t number = tx_index / tpb + 1;
    std::uint64_t extra = 0;
    if (spec_.kind == WorkloadKind::dormant_reader)
        extra = spec_.dormancy_seconds;
    else if (spec_.kind == WorkloadKind::selfdestruct_sweep)
    {
        const auto n_contracts = (spec_.n_txs + 1) / 2;
        if (tx_index >= n_contracts)
        {
            // Sweeps start in a fresh block after the dormancy gap.
            const auto creation_blocks = (n_contracts + tpb - 1) / tpb;
            number = creation_blocks + 1 + (tx_index - n_contracts) / tpb;
            extra = spec_.dormancy_seconds;
        }
    }
    return {number, spec_.genesis_timestamp + spec_.start_offset_seconds +
                        number * spec_.block_interval_seconds + extra};
}

Transaction WorkloadGenerator::base_tx(std::uint64_t sender)
{
    Transaction tx;
    tx.sender = account_key(sender);
    tx.gas_limit = spec_.gas_limit;
    tx.exec_gas = spec_.exec_gas;
    return tx;
}

Transaction WorkloadGenerator::make_erc20()
{
    const auto from = uniform(spec_.n_accounts);
    auto to = zipf();
    while (to == from)
        to = zipf();
    const auto amount = std::min(balances_[from], 1 + uniform(1000));
    balances_[from] -= amount;
    balances_[to] += amount;

    auto tx = base_tx(from);
    tx.ops.emplace_back(op::Read{erc20_code_key()});
    for (std::uint64_t p = 0; p < kErc20ParamCells; ++p)
        tx.ops.emplace_back(op::Read{erc20_param_key(p)});
    tx.ops.emplace_back(op::Write{erc20_balance_key(from), be32(balances_[from])});
    tx.ops.emplace_back(op::Write{erc20_balance_key(to), be32(balances_[to])});
    return tx;
}

Transaction WorkloadGenerator::make_uniform()
{
    auto tx = base_tx(uniform(spec_.n_accounts));
    for (std::uint64_t k = 0; k < spec_.keys_per_tx; ++k)
    {
        const auto cell = uniform_cell_key(uniform(spec_.n_accounts));
        if (unit() < 0.5)
            tx.ops.emplace_back(op::Read{cell});
        else
            tx.ops.emplace_back(op::Write{cell, random_bytes(rng_, 32)});
    }
    return tx;
}

Transaction WorkloadGenerator::make_dormant()
{
    auto tx = base_tx(uniform(spec_.n_accounts));
    for (std::uint64_t k = 0; k < spec_.keys_per_tx; ++k)
    {
        tx.ops.emplace_back(op::Read{dormant_cell_key(read_order_[read_cursor_])});
        read_cursor_ = (read_cursor_ + 1) % read_order_.size();
    }
    return tx;
}

Transaction WorkloadGenerator::make_selfdestruct(std::uint64_t tx_index)
{
    const auto n_contracts = (spec_.n_txs + 1) / 2;
    auto tx = base_tx(uniform(spec_.n_accounts));
    if (tx_index < n_contracts)
    {
        tx.ops.emplace_back(op::Create{contract_key(tx_index), Bytes(32, 0), NodeKind::account});
        for (std::uint64_t j = 0; j < spec_.cells_per_contract; ++j)
            tx.ops.emplace_back(op::Create{
                contract_cell_key(tx_index, j), random_bytes(rng_, 32), NodeKind::storage_cell});
        return tx;
    }
    const auto c = tx_index - n_contracts;
    for (std::uint64_t j = 0; j < spec_.cells_per_contract; ++j)
        tx.ops.emplace_back(op::Read{contract_cell_key(c, j)});
    tx.ops.emplace_back(op::DeletePrefix{contract_key(c)});
    return tx;
}

Transaction WorkloadGenerator::make_dos(std::uint64_t tx_index)
{
    auto tx = base_tx(uniform(spec_.n_accounts));
    for (std::uint64_t k = 0; k < spec_.keys_per_tx; ++k)
        tx.ops.emplace_back(op::Read{"dos/" + hex_id(tx_index) + "/" + hex_id(k)});
    return tx;
}

std::optional<BlockTx> WorkloadGenerator::next()
{
    if (emitted_ >= spec_.n_txs)
        return std::nullopt;
    const auto index = emitted_++;
    BlockTx out{block_for(index), {}};
    switch (spec_.kind)
    {
    case WorkloadKind::erc20:
        out.tx = make_erc20();
        break;
    case WorkloadKind::uniform_random:
        out.tx = make_uniform();
        break;
    case WorkloadKind::dormant_reader:
        out.tx = make_dormant();
        break;
    case WorkloadKind::selfdestruct_sweep:
        out.tx = make_selfdestruct(index);
        break;
    case WorkloadKind::dos_missing_keys:
        out.tx = make_dos(index);
        break;
    }
    return out;
}

std::vector<BlockTx> generate(const WorkloadSpec& spec)
{
    WorkloadGenerator gen{spec};
    std::vector<BlockTx> stream;
    while (auto btx = gen.next())
        stream.push_back(std::move(*btx));
    return stream;
}

namespace
{
struct OpFormatter
{
    std::string& out;

    void operator()(const op::Read& o) const { out += "R:" + o.key; }
    void operator()(const op::Write& o) const { out += "W:" + o.key + ":" + to_hex(o.value); }
    void operator()(const op::Create& o) const
    {
        out += "C:" + o.key + ":" + kind_code(o.kind) + ":" + to_hex(o.value);
    }
    void operator()(const op::Delete& o) const { out += "D:" + o.key; }
    void operator()(const op::DeletePrefix& o) const { out += "P:" + o.prefix; }
    void operator()(const op::FrameBegin& o) const { out += "B:" + std::to_string(o.gas_budget); }
    void operator()(const op::FrameEnd& o) const { out += o.revert ? "E:1" : "E:0"; }
};
}  // namespace

std::string format_block_tx(const BlockTx& btx)
{
    const auto& tx = btx.tx;
    std::string line = std::to_string(btx.block.number) + ' ' +
                       std::to_string(btx.block.timestamp) + ' ' + tx.sender + ' ' +
                       std::to_string(tx.gas_limit) + ' ' + std::to_string(tx.exec_gas) + ' ' +
                       (tx.reverts ? '1' : '0') + ' ';
    if (tx.ops.empty())
        line += '-';
    for (std::size_t i = 0; i < tx.ops.size(); ++i)
    {
        if (i != 0)
            line += ';';
        std::visit(OpFormatter{line}, tx.ops[i]);
    }
    return line;
}
}  // namespace staterent
