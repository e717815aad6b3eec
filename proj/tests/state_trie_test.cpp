// Copyright 2026 The staterent Authors
// SPDX-License-Identifier: Apache-2.0

#include <staterent/errors.hpp>
#include <staterent/state_trie.hpp>

#include <gtest/gtest.h>

#include <algorithm>
#include <map>
#include <random>
#include <thread>

using namespace staterent;

namespace
{
Bytes bytes_of(std::string_view s)
{
    return Bytes(s.begin(), s.end());
}

Key key(int i)
{
    return Key::from_logical("k/" + std::to_string(i));
}

// Flat reference model: hashed key -> leaf.
using FlatMap = std::map<Hash256, LeafNode>;

FlatMap leaves_of(const StateTrie& trie)
{
    FlatMap m;
    trie.for_each_leaf([&](const LeafNode& l) { m.emplace(l.key.hashed, l); });
    return m;
}

// Brute-force subtree maxima: for every internal node on each leaf's path,
// the recorded timestamp must equal the max over leaves sharing that prefix.
bool path_maxima_match(const StateTrie& trie, const FlatMap& flat)
{
    for (const auto& [h, leaf] : flat)
    {
        const auto path = trie.path_timestamps(h);
        if (!path.empty() && path.front() != std::max_element(flat.begin(), flat.end(),
                                                  [](const auto& a, const auto& b) {
                                                      return a.second.rent_paid_ts <
                                                             b.second.rent_paid_ts;
                                                  })->second.rent_paid_ts)
            return false;
        if (!std::is_sorted(path.rbegin(), path.rend()))
            return false;
    }
    return true;
}
}  // namespace

TEST(state_trie, empty_trie)
{
    StateTrie trie;
    EXPECT_EQ(trie.get(key(1)), nullptr);
    EXPECT_TRUE(trie.root_hash().is_zero());
    EXPECT_EQ(trie.size(), 0u);
    EXPECT_TRUE(trie.check_invariants());
}

TEST(state_trie, put_get_roundtrip)
{
    StateTrie trie;
    trie.put(key(1), bytes_of("v"), 100);
    const auto* leaf = trie.get(key(1));
    ASSERT_NE(leaf, nullptr);
    EXPECT_EQ(leaf->key, key(1));
    EXPECT_EQ(leaf->value, bytes_of("v"));
    EXPECT_EQ(leaf->rent_paid_ts, 100u);
}

TEST(state_trie, single_leaf_root_is_leaf_digest)
{
    StateTrie trie;
    trie.put(key(1), bytes_of("v"), 100);
    EXPECT_EQ(trie.root_hash(), leaf_digest(LeafNode{key(1), bytes_of("v"), 100}));
}

TEST(state_trie, leaf_digest_encoding)
{
    // H(0x01 | key | ts_be8 | len_be4 | value), spelled out byte by byte.
    const LeafNode leaf{key(7), bytes_of("ab"), 0x0102030405060708};
    Bytes enc{0x01};
    enc.insert(enc.end(), leaf.key.hashed.bytes.begin(), leaf.key.hashed.bytes.end());
    for (std::uint8_t b : {1, 2, 3, 4, 5, 6, 7, 8})
        enc.push_back(b);
    for (std::uint8_t b : {0, 0, 0, 2})
        enc.push_back(b);
    enc.push_back('a');
    enc.push_back('b');
    EXPECT_EQ(leaf_digest(leaf), hash256(enc));
}

TEST(state_trie, two_leaf_root_is_internal_digest)
{
    StateTrie trie;
    const LeafNode a{key(1), bytes_of("a"), 10};
    const LeafNode b{key(2), bytes_of("b"), 20};
    trie.put(a);
    trie.put(b);
    const bool a_left = a.key.hashed < b.key.hashed;
    const auto& left = a_left ? a : b;
    const auto& right = a_left ? b : a;
    EXPECT_EQ(trie.root_hash(), internal_digest(leaf_digest(left), leaf_digest(right), 20));
}

TEST(state_trie, timestamp_propagates_along_path)
{
    StateTrie trie;
    for (int i = 0; i < 50; ++i)
        trie.put(key(i), bytes_of("v"), 100);
    trie.put(key(7), bytes_of("v"), 200);
    const auto path = trie.path_timestamps(key(7).hashed);
    ASSERT_FALSE(path.empty());
    for (const auto ts : path)
        EXPECT_GE(ts, 200u);
    EXPECT_TRUE(trie.check_invariants());
}

TEST(state_trie, timestamp_max_recomputed_after_delete)
{
    StateTrie trie;
    trie.put(key(1), bytes_of("v"), 100);
    trie.put(key(2), bytes_of("v"), 300);
    trie.put(key(3), bytes_of("v"), 200);
    trie.erase(key(2));
    EXPECT_EQ(trie.path_timestamps(key(1).hashed).front(), 200u);
    EXPECT_TRUE(trie.check_invariants());
}

TEST(state_trie, rejects_oversized_value)
{
    StateTrie trie{16};
    EXPECT_THROW(trie.put(key(1), Bytes(17, 0), 0), SizeError);
    EXPECT_NO_THROW(trie.put(key(1), Bytes(16, 0), 0));
    EXPECT_EQ(trie.size(), 1u);
}

TEST(state_trie, delete_absent_leaves_root_unchanged)
{
    StateTrie trie;
    trie.put(key(1), bytes_of("v"), 1);
    const auto root = trie.root_hash();
    EXPECT_FALSE(trie.erase(key(2)));
    EXPECT_EQ(trie.root_hash(), root);
}

TEST(state_trie, put_then_delete_restores_empty_root)
{
    StateTrie trie;
    trie.put(key(1), bytes_of("v"), 1);
    EXPECT_TRUE(trie.erase(key(1)));
    EXPECT_TRUE(trie.root_hash().is_zero());
    EXPECT_TRUE(trie.check_invariants());
}

TEST(state_trie, delete_prefix)
{
    StateTrie trie;
    trie.put(Key::from_logical("ctr/0001"), Bytes(32, 1), 5, NodeKind::account);
    for (int j = 0; j < 5; ++j)
        trie.put(Key::from_logical("ctr/0001/s/" + std::to_string(j)), Bytes(32, 2), 5);
    trie.put(Key::from_logical("ctr/0002/s/0"), Bytes(32, 3), 5);
    const auto before = leaves_of(trie);

    const auto root = trie.root_hash();
    EXPECT_EQ(trie.erase_prefix("nothing/"), 0u);
    EXPECT_EQ(trie.root_hash(), root);

    EXPECT_EQ(trie.erase_prefix("ctr/0001/"), 5u);
    EXPECT_NE(trie.get(Key::from_logical("ctr/0001")), nullptr);
    EXPECT_EQ(trie.erase_prefix("ctr/0001"), 1u);
    for (int j = 0; j < 5; ++j)
        EXPECT_EQ(trie.get(Key::from_logical("ctr/0001/s/" + std::to_string(j))), nullptr);

    auto expected = before;
    std::erase_if(expected,
        [](const auto& kv) { return kv.second.key.logical.starts_with("ctr/0001"); });
    EXPECT_EQ(leaves_of(trie), expected);
    EXPECT_TRUE(trie.check_invariants());
}

TEST(state_trie, flat_map_equivalence_random_ops)
{
    std::mt19937_64 rng{20260101};
    StateTrie trie;
    FlatMap flat;
    for (int step = 0; step < 10'000; ++step)
    {
        const auto k = key(static_cast<int>(rng() % 2000));
        if (rng() % 3 == 0)
        {
            EXPECT_EQ(trie.erase(k), flat.erase(k.hashed) == 1);
        }
        else
        {
            const LeafNode leaf{k, Bytes(rng() % 40, static_cast<std::uint8_t>(step)), rng() % 1000,
                NodeKind::storage_cell};
            trie.put(leaf);
            flat.insert_or_assign(k.hashed, leaf);
        }
        if (step % 997 == 0)
            ASSERT_TRUE(trie.check_invariants()) << "step " << step;
    }
    EXPECT_EQ(leaves_of(trie), flat);
    EXPECT_EQ(trie.size(), flat.size());
    EXPECT_TRUE(trie.check_invariants());
    EXPECT_TRUE(path_maxima_match(trie, flat));
    for (const auto& [h, leaf] : flat)
        EXPECT_EQ(*trie.get(h), leaf);
}

TEST(state_trie, root_independent_of_insertion_order)
{
    std::mt19937_64 rng{7};
    std::vector<LeafNode> leaves;
    for (int i = 0; i < 1000; ++i)
        leaves.push_back({key(i), Bytes(rng() % 64, static_cast<std::uint8_t>(i)), rng() % 5000,
            NodeKind::storage_cell});

    auto sorted = leaves;
    std::sort(sorted.begin(), sorted.end(),
        [](const auto& a, const auto& b) { return a.key.hashed < b.key.hashed; });
    auto shuffled = leaves;
    std::shuffle(shuffled.begin(), shuffled.end(), rng);

    StateTrie a, b;
    for (const auto& l : sorted)
        a.put(l);
    for (const auto& l : shuffled)
        b.put(l);
    EXPECT_EQ(a.root_hash(), b.root_hash());

    // Insert extra keys then remove them again: same final leaf set, same root.
    for (int i = 5000; i < 5100; ++i)
        b.put(key(i), Bytes{1}, 1);
    for (int i = 5000; i < 5100; ++i)
        b.erase(key(i));
    EXPECT_EQ(a.root_hash(), b.root_hash());
}

TEST(state_trie, commitment_binds_every_field)
{
    std::mt19937_64 rng{99};
    StateTrie base;
    for (int i = 0; i < 300; ++i)
        base.put(key(i), Bytes(32, static_cast<std::uint8_t>(i)), 1000 + i);
    const auto root = base.root_hash();

    for (int trial = 0; trial < 200; ++trial)
    {
        StateTrie t = base;
        const auto k = key(static_cast<int>(rng() % 300));
        auto leaf = *t.get(k);
        if (trial % 2 == 0)
            leaf.rent_paid_ts += 1 + rng() % 100;
        else
            leaf.value[rng() % leaf.value.size()] ^= static_cast<std::uint8_t>(1 + rng() % 255);
        t.put(leaf);
        EXPECT_NE(t.root_hash(), root) << "trial " << trial;
    }
    EXPECT_EQ(base.root_hash(), root);
}

TEST(state_trie, snapshot_key_keeps_logical_index)
{
    StateTrie trie;
    const auto k = Key::from_logical("ctr/1/s/0");
    trie.put(k, Bytes{1}, 1);
    trie.put(Key::from_hash(k.hashed), Bytes{2}, 2);
    EXPECT_EQ(trie.get(k)->key.logical, "ctr/1/s/0");
    EXPECT_EQ(trie.erase_prefix("ctr/1/"), 1u);
}

TEST(state_trie, copy_is_deep)
{
    StateTrie a;
    a.put(key(1), Bytes{1}, 1);
    StateTrie b = a;
    b.put(key(2), Bytes{2}, 2);
    EXPECT_EQ(a.size(), 1u);
    EXPECT_EQ(b.size(), 2u);
    EXPECT_NE(a.root_hash(), b.root_hash());
}

TEST(state_trie, concurrent_readers_agree)
{
    StateTrie trie;
    for (int i = 0; i < 2000; ++i)
        trie.put(key(i), Bytes(8, static_cast<std::uint8_t>(i)), static_cast<Timestamp>(i));
    std::vector<Hash256> roots(4);
    std::vector<std::thread> readers;
    for (std::size_t t = 0; t < roots.size(); ++t)
        readers.emplace_back([&, t] {
            roots[t] = trie.root_hash();
            for (int i = 0; i < 2000; ++i)
                EXPECT_NE(trie.get(key(i)), nullptr);
        });
    for (auto& r : readers)
        r.join();
    for (const auto& r : roots)
        EXPECT_EQ(r, roots.front());
}
