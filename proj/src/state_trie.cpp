// Copyright 2026 The staterent Authors
// SPDX-License-Identifier: Apache-2.0

#include <staterent/errors.hpp>
#include <staterent/state_trie.hpp>

#include <algorithm>
#include <bit>

namespace staterent
{
char kind_code(NodeKind kind) noexcept
{
    switch (kind)
    {
    case NodeKind::account:
        return 'A';
    case NodeKind::code:
        return 'C';
    case NodeKind::storage_cell:
        return 'S';
    }
    return '?';
}

std::optional<NodeKind> kind_from_code(char c) noexcept
{
    switch (c)
    {
    case 'A':
        return NodeKind::account;
    case 'C':
        return NodeKind::code;
    case 'S':
        return NodeKind::storage_cell;
    default:
        return std::nullopt;
    }
}

std::string_view kind_name(NodeKind kind) noexcept
{
    switch (kind)
    {
    case NodeKind::account:
        return "account";
    case NodeKind::code:
        return "code";
    case NodeKind::storage_cell:
        return "storage_cell";
    }
    return "unknown";
}

Key Key::from_logical(std::string logical)
{
    const auto hashed = hash256(std::string_view{logical});
    return Key{std::move(logical), hashed};
}

namespace
{
void append_be(Bytes& out, std::uint64_t v, int width)
{
    for (int i = width - 1; i >= 0; --i)
        out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

/// Index of the first bit (MSB first) where the two digests differ; 256 if equal.
unsigned first_diff_bit(const Hash256& a, const Hash256& b) noexcept
{
    for (unsigned i = 0; i < a.bytes.size(); ++i)
    {
        const auto x = static_cast<std::uint8_t>(a.bytes[i] ^ b.bytes[i]);
        if (x != 0)
            return i * 8 + static_cast<unsigned>(std::countl_zero(x));
    }
    return 256;
}
}  // namespace

Hash256 leaf_digest(const LeafNode& leaf)
{
    Bytes buf;
    buf.reserve(1 + 32 + 8 + 4 + leaf.value.size());
    buf.push_back(0x01);
    buf.insert(buf.end(), leaf.key.hashed.bytes.begin(), leaf.key.hashed.bytes.end());
    append_be(buf, leaf.rent_paid_ts, 8);
    append_be(buf, leaf.value.size(), 4);
    buf.insert(buf.end(), leaf.value.begin(), leaf.value.end());
    return hash256(buf);
}

Hash256 internal_digest(const Hash256& left, const Hash256& right, Timestamp last_update_ts)
{
    Bytes buf;
    buf.reserve(1 + 32 + 32 + 8);
    buf.push_back(0x00);
    buf.insert(buf.end(), left.bytes.begin(), left.bytes.end());
    buf.insert(buf.end(), right.bytes.begin(), right.bytes.end());
    append_be(buf, last_update_ts, 8);
    return hash256(buf);
}

struct StateTrie::Node
{
    // Leaf iff `leaf` is set; internal nodes always have both children.
    std::optional<LeafNode> leaf;
    std::unique_ptr<Node> child[2];
    unsigned bit = 0;
    Timestamp ts = 0;
    mutable Hash256 digest;
    mutable bool dirty = true;

    bool is_leaf() const noexcept { return leaf.has_value(); }

    void refresh() noexcept
    {
        ts = std::max(child[0]->ts, child[1]->ts);
        dirty = true;
    }

    const Hash256& compute_digest() const
    {
        if (dirty)
        {
            digest = is_leaf() ? leaf_digest(*leaf) :
                                 internal_digest(child[0]->compute_digest(),
                                     child[1]->compute_digest(), ts);
            dirty = false;
        }
        return digest;
    }
};

namespace
{
using NodePtr = std::unique_ptr<StateTrie::Node>;
}

StateTrie::StateTrie(std::size_t max_value_bytes) : max_value_bytes_{max_value_bytes} {}

StateTrie::~StateTrie() = default;

std::unique_ptr<StateTrie::Node> StateTrie::clone(const Node* node)
{
    if (node == nullptr)
        return nullptr;
    auto copy = std::make_unique<Node>();
    copy->leaf = node->leaf;
    copy->bit = node->bit;
    copy->ts = node->ts;
    copy->digest = node->digest;
    copy->dirty = node->dirty;
    copy->child[0] = clone(node->child[0].get());
    copy->child[1] = clone(node->child[1].get());
    return copy;
}

StateTrie::StateTrie(const StateTrie& other)
  : root_{clone(other.root_.get())},
    logical_index_{other.logical_index_},
    leaf_count_{other.leaf_count_},
    value_bytes_{other.value_bytes_},
    max_value_bytes_{other.max_value_bytes_}
{}

StateTrie& StateTrie::operator=(const StateTrie& other)
{
    if (this != &other)
    {
        StateTrie tmp{other};
        *this = std::move(tmp);
    }
    return *this;
}

StateTrie::StateTrie(StateTrie&& other) noexcept
  : root_{std::move(other.root_)},
    logical_index_{std::move(other.logical_index_)},
    leaf_count_{std::exchange(other.leaf_count_, 0)},
    value_bytes_{std::exchange(other.value_bytes_, 0)},
    max_value_bytes_{other.max_value_bytes_}
{}

StateTrie& StateTrie::operator=(StateTrie&& other) noexcept
{
    root_ = std::move(other.root_);
    logical_index_ = std::move(other.logical_index_);
    leaf_count_ = std::exchange(other.leaf_count_, 0);
    value_bytes_ = std::exchange(other.value_bytes_, 0);
    max_value_bytes_ = other.max_value_bytes_;
    return *this;
}

const LeafNode* StateTrie::get(const Hash256& hashed) const noexcept
{
    const Node* n = root_.get();
    if (n == nullptr)
        return nullptr;
    while (!n->is_leaf())
        n = n->child[hashed.bit(n->bit)].get();
    return n->leaf->key.hashed == hashed ? &*n->leaf : nullptr;
}

void StateTrie::put(const Key& key, Bytes value, Timestamp rent_paid_ts, NodeKind kind)
{
    put(LeafNode{key, std::move(value), rent_paid_ts, kind});
}

namespace
{
// Descends to the leaf for `hashed`, applies `fn` to it, then refreshes the path.
template <typename Fn>
bool modify_leaf(NodePtr& slot, const Hash256& hashed, Fn&& fn)
{
    auto& n = *slot;
    if (n.is_leaf())
    {
        if (n.leaf->key.hashed != hashed)
            return false;
        fn(*n.leaf);
        n.ts = n.leaf->rent_paid_ts;
        n.dirty = true;
        return true;
    }
    if (!modify_leaf(n.child[hashed.bit(n.bit)], hashed, fn))
        return false;
    n.refresh();
    return true;
}

void insert_at(NodePtr& slot, unsigned diff, NodePtr& fresh)
{
    auto& n = *slot;
    if (n.is_leaf() || n.bit > diff)
    {
        auto inner = std::make_unique<StateTrie::Node>();
        inner->bit = diff;
        const unsigned dir = fresh->leaf->key.hashed.bit(diff);
        inner->child[dir] = std::move(fresh);
        inner->child[1 - dir] = std::move(slot);
        inner->refresh();
        slot = std::move(inner);
        return;
    }
    insert_at(n.child[fresh->leaf->key.hashed.bit(n.bit)], diff, fresh);
    n.refresh();
}

// Returns the removed leaf, if any.
std::optional<LeafNode> erase_from(NodePtr& slot, const Hash256& hashed)
{
    auto& n = *slot;
    if (n.is_leaf())
    {
        if (n.leaf->key.hashed != hashed)
            return std::nullopt;
        auto removed = std::move(n.leaf);
        slot.reset();
        return removed;
    }
    const unsigned dir = hashed.bit(n.bit);
    auto removed = erase_from(n.child[dir], hashed);
    if (!removed)
        return std::nullopt;
    if (!n.child[dir])
    {
        auto sibling = std::move(n.child[1 - dir]);
        slot = std::move(sibling);
    }
    else
        n.refresh();
    return removed;
}
}  // namespace

void StateTrie::put(LeafNode leaf)
{
    if (leaf.value.size() > max_value_bytes_)
        throw SizeError{"value of " + std::to_string(leaf.value.size()) +
                        " bytes exceeds the maximum of " + std::to_string(max_value_bytes_)};

    const std::lock_guard lock{digest_mutex_};
    const auto hashed = leaf.key.hashed;

    if (root_)
    {
        const Node* n = root_.get();
        while (!n->is_leaf())
            n = n->child[hashed.bit(n->bit)].get();
        const auto diff = first_diff_bit(n->leaf->key.hashed, hashed);
        if (diff == 256)
        {
            modify_leaf(root_, hashed, [&](LeafNode& existing) {
                if (leaf.key.logical.empty())
                    leaf.key.logical = existing.key.logical;
                else if (leaf.key.logical != existing.key.logical && !existing.key.logical.empty())
                    logical_index_.erase(existing.key.logical);
                value_bytes_ = value_bytes_ - existing.value.size() + leaf.value.size();
                existing = std::move(leaf);
                if (!existing.key.logical.empty())
                    logical_index_.insert_or_assign(existing.key.logical, hashed);
            });
            return;
        }
        if (!leaf.key.logical.empty())
            logical_index_.insert_or_assign(leaf.key.logical, hashed);
        value_bytes_ += leaf.value.size();
        ++leaf_count_;
        auto fresh = std::make_unique<Node>();
        fresh->ts = leaf.rent_paid_ts;
        fresh->leaf = std::move(leaf);
        insert_at(root_, diff, fresh);
        return;
    }

    if (!leaf.key.logical.empty())
        logical_index_.insert_or_assign(leaf.key.logical, hashed);
    value_bytes_ += leaf.value.size();
    ++leaf_count_;
    root_ = std::make_unique<Node>();
    root_->ts = leaf.rent_paid_ts;
    root_->leaf = std::move(leaf);
}

bool StateTrie::set_timestamp(const Hash256& hashed, Timestamp rent_paid_ts)
{
    const std::lock_guard lock{digest_mutex_};
    if (!root_)
        return false;
    return modify_leaf(root_, hashed, [&](LeafNode& leaf) { leaf.rent_paid_ts = rent_paid_ts; });
}

bool StateTrie::erase(const Hash256& hashed)
{
    const std::lock_guard lock{digest_mutex_};
    if (!root_)
        return false;
    auto removed = erase_from(root_, hashed);
    if (!removed)
        return false;
    --leaf_count_;
    value_bytes_ -= removed->value.size();
    if (!removed->key.logical.empty())
        logical_index_.erase(removed->key.logical);
    return true;
}

std::vector<Key> StateTrie::keys_with_prefix(std::string_view logical_prefix) const
{
    std::vector<Key> keys;
    for (auto it = logical_index_.lower_bound(logical_prefix);
         it != logical_index_.end() && std::string_view{it->first}.starts_with(logical_prefix); ++it)
        keys.push_back(Key{it->first, it->second});
    return keys;
}

std::size_t StateTrie::erase_prefix(std::string_view logical_prefix)
{
    std::size_t count = 0;
    for (const auto& key : keys_with_prefix(logical_prefix))
        count += erase(key.hashed) ? 1 : 0;
    return count;
}

Hash256 StateTrie::root_hash() const
{
    const std::lock_guard lock{digest_mutex_};
    return root_ ? root_->compute_digest() : Hash256{};
}

std::vector<Timestamp> StateTrie::path_timestamps(const Hash256& hashed) const
{
    std::vector<Timestamp> path;
    for (const Node* n = root_.get(); n != nullptr && !n->is_leaf();
         n = n->child[hashed.bit(n->bit)].get())
        path.push_back(n->ts);
    return path;
}

namespace
{
struct Subtree
{
    bool ok;
    Timestamp max_ts;
    Hash256 any_key;
};

Subtree check(const StateTrie::Node& n, unsigned min_bit)
{
    if (n.is_leaf())
        return {n.ts == n.leaf->rent_paid_ts, n.leaf->rent_paid_ts, n.leaf->key.hashed};
    if (!n.child[0] || !n.child[1] || n.bit < min_bit || n.bit > 255)
        return {false, 0, {}};
    const auto l = check(*n.child[0], n.bit + 1);
    const auto r = check(*n.child[1], n.bit + 1);
    // Both subtrees agree on every bit above the branching bit and split on it.
    const bool split = l.any_key.bit(n.bit) == 0 && r.any_key.bit(n.bit) == 1 &&
                       first_diff_bit(l.any_key, r.any_key) == n.bit;
    const auto max_ts = std::max(l.max_ts, r.max_ts);
    return {l.ok && r.ok && split && n.ts == max_ts, max_ts, l.any_key};
}

void visit(const StateTrie::Node* n, const std::function<void(const LeafNode&)>& fn)
{
    if (n == nullptr)
        return;
    if (n->is_leaf())
    {
        fn(*n->leaf);
        return;
    }
    visit(n->child[0].get(), fn);
    visit(n->child[1].get(), fn);
}
}  // namespace

bool StateTrie::check_invariants() const
{
    if (!root_)
        return leaf_count_ == 0 && logical_index_.empty();
    std::size_t count = 0;
    std::uint64_t bytes = 0;
    bool index_ok = true;
    visit(root_.get(), [&](const LeafNode& leaf) {
        ++count;
        bytes += leaf.value.size();
        if (!leaf.key.logical.empty())
        {
            const auto it = logical_index_.find(leaf.key.logical);
            index_ok = index_ok && it != logical_index_.end() && it->second == leaf.key.hashed;
        }
    });
    return check(*root_, 0).ok && count == leaf_count_ && bytes == value_bytes_ && index_ok;
}

void StateTrie::for_each_leaf(const std::function<void(const LeafNode&)>& fn) const
{
    visit(root_.get(), fn);
}

void StateTrie::clear() noexcept
{
    root_.reset();
    logical_index_.clear();
    leaf_count_ = 0;
    value_bytes_ = 0;
}
}  // namespace staterent
