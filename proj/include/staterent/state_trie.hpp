// Copyright 2026 The staterent Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <staterent/hash.hpp>

#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace staterent
{
using Timestamp = std::uint64_t;
using Gas = std::uint64_t;

enum class NodeKind : std::uint8_t
{
    account,
    code,
    storage_cell,
};

/// Single-letter tag used by the snapshot format: A, C or S.
char kind_code(NodeKind kind) noexcept;
std::optional<NodeKind> kind_from_code(char c) noexcept;
std::string_view kind_name(NodeKind kind) noexcept;

struct Key
{
    /// Application-level identifier. Empty when the key was recovered from a snapshot.
    std::string logical;
    Hash256 hashed;

    static Key from_logical(std::string logical);
    static Key from_hash(const Hash256& hashed) { return Key{{}, hashed}; }

    friend bool operator==(const Key&, const Key&) = default;
};

struct LeafNode
{
    Key key;
    Bytes value;
    Timestamp rent_paid_ts = 0;
    NodeKind kind = NodeKind::storage_cell;

    friend bool operator==(const LeafNode&, const LeafNode&) = default;
};

inline constexpr std::size_t kDefaultMaxValueBytes = std::size_t{1} << 24;

/// Authenticated binary radix trie keyed by 256-bit hashed keys.
///
/// Internal nodes exist only at branching points (crit-bit layout), so the
/// shape is a function of the leaf set alone. Every internal node carries the
/// maximum rent timestamp of the leaves beneath it. Digests are computed
/// lazily on `root_hash()`; a mutex guards the digest cache so concurrent
/// readers are safe between mutations.
class StateTrie
{
public:
    explicit StateTrie(std::size_t max_value_bytes = kDefaultMaxValueBytes);
    ~StateTrie();

    StateTrie(const StateTrie& other);
    StateTrie& operator=(const StateTrie& other);
    StateTrie(StateTrie&& other) noexcept;
    StateTrie& operator=(StateTrie&& other) noexcept;

    /// Pointer stays valid until the next mutation; nullptr when absent.
    const LeafNode* get(const Hash256& hashed) const noexcept;
    const LeafNode* get(const Key& key) const noexcept { return get(key.hashed); }

    /// Inserts or replaces a leaf. Throws SizeError when the value is too large.
    /// A key without a logical part keeps the logical key of the leaf it replaces.
    void put(const Key& key, Bytes value, Timestamp rent_paid_ts,
        NodeKind kind = NodeKind::storage_cell);
    void put(LeafNode leaf);

    /// Rewrites only the rent timestamp. Returns false when the key is absent.
    bool set_timestamp(const Hash256& hashed, Timestamp rent_paid_ts);

    bool erase(const Hash256& hashed);
    bool erase(const Key& key) { return erase(key.hashed); }

    /// Removes every leaf whose logical key starts with `logical_prefix`.
    std::size_t erase_prefix(std::string_view logical_prefix);

    /// Keys currently indexed under a logical prefix, in logical-key order.
    std::vector<Key> keys_with_prefix(std::string_view logical_prefix) const;

    Hash256 root_hash() const;

    std::size_t size() const noexcept { return leaf_count_; }
    bool empty() const noexcept { return leaf_count_ == 0; }
    std::uint64_t total_value_bytes() const noexcept { return value_bytes_; }
    std::size_t max_value_bytes() const noexcept { return max_value_bytes_; }

    /// Timestamps of the internal nodes from the root down to `hashed`'s leaf.
    std::vector<Timestamp> path_timestamps(const Hash256& hashed) const;

    /// Recomputes every internal timestamp and branching bit from scratch.
    bool check_invariants() const;

    /// Visits leaves in ascending hashed-key order.
    void for_each_leaf(const std::function<void(const LeafNode&)>& fn) const;

    void clear() noexcept;

    struct Node;  // defined in state_trie.cpp

private:
    static std::unique_ptr<Node> clone(const Node* node);

    std::unique_ptr<Node> root_;
    std::map<std::string, Hash256, std::less<>> logical_index_;
    std::size_t leaf_count_ = 0;
    std::uint64_t value_bytes_ = 0;
    std::size_t max_value_bytes_;
    mutable std::mutex digest_mutex_;
};

/// Leaf digest as committed: H(0x01 | key | ts_be8 | len_be4 | value).
Hash256 leaf_digest(const LeafNode& leaf);
/// Internal digest as committed: H(0x00 | left | right | ts_be8).
Hash256 internal_digest(const Hash256& left, const Hash256& right, Timestamp last_update_ts);

inline constexpr std::string_view kSnapshotMagic = "STATERENT-SNAPSHOT";
inline constexpr std::string_view kSnapshotVersion = "v1";

struct Snapshot
{
    StateTrie trie;
    Hash256 params_digest;
};

void write_snapshot(const StateTrie& trie, const Hash256& params_digest, std::ostream& out);
void write_snapshot(
    const StateTrie& trie, const Hash256& params_digest, const std::filesystem::path& path);

/// Throws SnapshotError naming the offending line. Nothing is returned on failure.
Snapshot read_snapshot(std::istream& in, std::size_t max_value_bytes = kDefaultMaxValueBytes);
Snapshot read_snapshot(
    const std::filesystem::path& path, std::size_t max_value_bytes = kDefaultMaxValueBytes);
}  // namespace staterent
