// Copyright 2026 The staterent Authors
// SPDX-License-Identifier: Apache-2.0

#include <staterent/errors.hpp>
#include <staterent/workload.hpp>

#include <gtest/gtest.h>

#include <set>

using namespace staterent;

namespace
{
WorkloadSpec spec_of(WorkloadKind kind, std::uint64_t n_txs = 200)
{
    WorkloadSpec s;
    s.kind = kind;
    s.n_accounts = 50;
    s.n_txs = n_txs;
    s.cells_per_contract = 10;
    return s;
}

std::vector<std::string> op_keys(const Transaction& tx)
{
    std::vector<std::string> keys;
    for (const auto& o : tx.ops)
        std::visit(
            [&](const auto& x) {
                if constexpr (requires { x.key; })
                    keys.push_back(x.key);
                else if constexpr (requires { x.prefix; })
                    keys.push_back(x.prefix);
            },
            o);
    return keys;
}

constexpr WorkloadKind kAllKinds[] = {WorkloadKind::erc20, WorkloadKind::uniform_random,
    WorkloadKind::dormant_reader, WorkloadKind::selfdestruct_sweep,
    WorkloadKind::dos_missing_keys};
}  // namespace

TEST(workload, deterministic_for_seed)
{
    for (const auto kind : kAllKinds)
    {
        const auto spec = spec_of(kind);
        EXPECT_EQ(generate(spec), generate(spec)) << workload_kind_name(kind);
        auto other = spec;
        other.seed = 2;
        EXPECT_NE(generate(spec), generate(other)) << workload_kind_name(kind);
    }
}

TEST(workload, stream_prefix_stable)
{
    // Shorter runs are a prefix of longer ones for per-tx generators.
    const auto a = generate(spec_of(WorkloadKind::erc20, 50));
    const auto b = generate(spec_of(WorkloadKind::erc20, 200));
    EXPECT_TRUE(std::equal(a.begin(), a.end(), b.begin()));
}

TEST(workload, erc20_single_tx_touches_expected_nodes)
{
    WorkloadGenerator gen{spec_of(WorkloadKind::erc20, 1)};
    const auto btx = *gen.next();
    const auto keys = op_keys(btx.tx);
    ASSERT_EQ(keys.size(), 5u);
    EXPECT_EQ(keys[0], erc20_code_key());
    EXPECT_EQ(keys[1], erc20_param_key(0));
    EXPECT_EQ(keys[2], erc20_param_key(1));
    EXPECT_TRUE(keys[3].starts_with("erc20/bal/"));
    EXPECT_TRUE(keys[4].starts_with("erc20/bal/"));
    EXPECT_NE(keys[3], keys[4]);
    EXPECT_TRUE(std::holds_alternative<op::Write>(btx.tx.ops[3]));
    EXPECT_TRUE(btx.tx.sender.starts_with("acct/"));
    EXPECT_FALSE(gen.next().has_value());
}

TEST(workload, erc20_genesis_sizes)
{
    StateTrie trie;
    WorkloadGenerator{spec_of(WorkloadKind::erc20)}.apply_genesis(trie);
    EXPECT_EQ(trie.size(), 50u + 1 + 2 + 50);
    EXPECT_EQ(trie.get(Key::from_logical(erc20_code_key()))->value.size(), kErc20CodeBytes);
    EXPECT_EQ(trie.get(Key::from_logical(erc20_balance_key(3)))->value.size(), 32u);
}

TEST(workload, block_numbering_and_time)
{
    auto spec = spec_of(WorkloadKind::uniform_random, 25);
    spec.txs_per_block = 10;
    const auto txs = generate(spec);
    EXPECT_EQ(txs[0].block.number, 1u);
    EXPECT_EQ(txs[9].block.number, 1u);
    EXPECT_EQ(txs[10].block.number, 2u);
    EXPECT_EQ(txs[24].block.number, 3u);
    EXPECT_EQ(txs[10].block.timestamp, spec.genesis_timestamp + 2 * spec.block_interval_seconds);
}

TEST(workload, dos_only_missing_keys)
{
    const auto spec = spec_of(WorkloadKind::dos_missing_keys);
    StateTrie trie;
    WorkloadGenerator gen{spec};
    gen.apply_genesis(trie);
    std::set<std::string> seen;
    while (auto btx = gen.next())
        for (const auto& k : op_keys(btx->tx))
        {
            EXPECT_TRUE(std::holds_alternative<op::Read>(btx->tx.ops.front()));
            EXPECT_EQ(trie.get(Key::from_logical(k)), nullptr);
            EXPECT_TRUE(seen.insert(k).second) << k;
        }
    EXPECT_EQ(seen.size(), spec.n_txs * spec.keys_per_tx);
}

TEST(workload, selfdestruct_sweeps_after_dormancy)
{
    const auto spec = spec_of(WorkloadKind::selfdestruct_sweep, 10);
    const auto txs = generate(spec);
    const auto& create = txs[0];
    const auto& sweep = txs[5];
    EXPECT_TRUE(std::holds_alternative<op::Create>(create.tx.ops.front()));
    EXPECT_TRUE(std::holds_alternative<op::DeletePrefix>(sweep.tx.ops.back()));
    EXPECT_GE(sweep.block.timestamp - create.block.timestamp, spec.dormancy_seconds);
    EXPECT_GT(sweep.block.number, txs[4].block.number);
}

TEST(workload, keys_stay_within_declared_prefixes)
{
    for (const auto kind : kAllKinds)
    {
        WorkloadGenerator gen{spec_of(kind)};
        const auto prefixes = gen.key_prefixes();
        const auto covered = [&](const std::string& k) {
            return std::any_of(prefixes.begin(), prefixes.end(),
                [&](const auto& p) { return k.starts_with(p); });
        };
        for (const auto& leaf : gen.genesis())
            EXPECT_TRUE(covered(leaf.logical_key)) << leaf.logical_key;
        while (auto btx = gen.next())
        {
            EXPECT_TRUE(covered(btx->tx.sender));
            for (const auto& k : op_keys(btx->tx))
                EXPECT_TRUE(covered(k)) << k;
        }
    }
}

TEST(workload, stream_format)
{
    BlockTx btx{{3, 1000}, {"acct/00000001", 100, 10,
                               {op::Read{"a"}, op::Write{"b", Bytes{0xab}}, op::FrameBegin{5},
                                   op::Delete{"c"}, op::FrameEnd{true}, op::DeletePrefix{"p/"}},
                               false}};
    EXPECT_EQ(format_block_tx(btx), "3 1000 acct/00000001 100 10 0 R:a;W:b:ab;B:5;D:c;E:1;P:p/");
    btx.tx.ops.clear();
    btx.tx.reverts = true;
    EXPECT_EQ(format_block_tx(btx), "3 1000 acct/00000001 100 10 1 -");
}

TEST(workload, rejects_bad_specs)
{
    auto s = spec_of(WorkloadKind::erc20);
    s.n_accounts = 1;
    EXPECT_THROW(WorkloadGenerator{s}, ConfigError);
    s = spec_of(WorkloadKind::erc20);
    s.txs_per_block = 0;
    EXPECT_THROW(WorkloadGenerator{s}, ConfigError);
    EXPECT_THROW(parse_workload_kind("bogus"), ConfigError);
}
