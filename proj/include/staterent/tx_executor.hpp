// Copyright 2026 The staterent Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <staterent/rent.hpp>
#include <staterent/state_trie.hpp>

#include <cstdint>
#include <functional>
#include <string>
#include <unordered_map>
#include <variant>
#include <vector>

namespace staterent
{
struct BlockContext
{
    std::uint64_t number = 0;
    Timestamp timestamp = 0;

    friend bool operator==(const BlockContext&, const BlockContext&) = default;
};

namespace op
{
struct Read
{
    std::string key;
    friend bool operator==(const Read&, const Read&) = default;
};
struct Write
{
    std::string key;
    Bytes value;
    friend bool operator==(const Write&, const Write&) = default;
};
struct Create
{
    std::string key;
    Bytes value;
    NodeKind kind = NodeKind::storage_cell;
    friend bool operator==(const Create&, const Create&) = default;
};
struct Delete
{
    std::string key;
    friend bool operator==(const Delete&, const Delete&) = default;
};
struct DeletePrefix
{
    std::string prefix;
    friend bool operator==(const DeletePrefix&, const DeletePrefix&) = default;
};
struct FrameBegin
{
    Gas gas_budget = 0;
    friend bool operator==(const FrameBegin&, const FrameBegin&) = default;
};
struct FrameEnd
{
    bool revert = false;
    friend bool operator==(const FrameEnd&, const FrameEnd&) = default;
};
}  // namespace op

using TxOp = std::variant<op::Read, op::Write, op::Create, op::Delete, op::DeletePrefix,
    op::FrameBegin, op::FrameEnd>;

struct Transaction
{
    /// Logical key of the sender's account leaf; always written.
    std::string sender;
    Gas gas_limit = 0;
    /// Abstract execution cost, consumed before any op runs.
    Gas exec_gas = 0;
    std::vector<TxOp> ops;
    /// Execution ends in a top-level revert.
    bool reverts = false;

    friend bool operator==(const Transaction&, const Transaction&) = default;
};

enum class AccessKind : std::uint8_t
{
    missing,
    read,
    write,
    create,
    del,
};

std::string_view access_kind_name(AccessKind kind) noexcept;

using FrameId = std::uint32_t;

struct AccessRecord
{
    Key key;
    AccessKind strongest = AccessKind::read;
    /// Distinct frames that touched the key, in first-touch order.
    std::vector<FrameId> frames;
    bool reverted_only = false;

    // State of the leaf before this transaction first touched it.
    bool existed_at_start = false;
    Timestamp original_ts = 0;
    std::uint64_t original_value_len = 0;
    NodeKind original_kind = NodeKind::storage_cell;
};

/// Keys touched by a transaction with their strongest access kind.
/// Records keep first-touch order so settlement is deterministic.
class AccessSet
{
public:
    /// `current` is the leaf as seen right before this access (nullptr if absent).
    /// Throws std::invalid_argument if the frame is unknown or already closed.
    void record(const Key& key, AccessKind kind, FrameId frame, const LeafNode* current);

    FrameId open_frame(FrameId parent);
    void close_frame(FrameId frame, bool revert);

    /// Computes `reverted_only` from the frame tree; no records may be added afterward.
    void finalize();

    const std::vector<AccessRecord>& records() const noexcept { return records_; }
    const AccessRecord* find(const Hash256& hashed) const;
    bool finalized() const noexcept { return finalized_; }

    /// A frame's effects persist iff neither it nor any ancestor reverted.
    bool frame_effective(FrameId frame) const;

private:
    struct Frame
    {
        FrameId parent;
        bool open;
        bool reverted;
    };

    std::vector<Frame> frames_{{0, true, false}};
    std::vector<AccessRecord> records_;
    std::unordered_map<Hash256, std::size_t, Hash256Hasher> index_;
    bool finalized_ = false;
};

/// Lattice update: missing < read < {write, create, delete}; among the
/// dominant kinds the most recent wins.
void record_access(AccessSet& access_set, const Key& key, AccessKind kind, FrameId frame,
    const LeafNode* current = nullptr);

enum class TxStatus : std::uint8_t
{
    success,
    reverted,
    out_of_gas,
};

std::string_view status_name(TxStatus status) noexcept;

struct ReceiptItem
{
    Key key;
    RentComputation rent;
    /// Settlement writes `rent.new_ts` back into the trie.
    bool writes_timestamp = false;
};

struct RentReceipt
{
    std::vector<ReceiptItem> items;
    Gas total_rent_gas = 0;
    Gas total_penalty_gas = 0;
    TxStatus status = TxStatus::success;
};

struct TxOutcome
{
    TxStatus status = TxStatus::success;
    Gas gas_used = 0;
};

/// Rent accounting for a finalized access set. Reads the trie, never mutates it.
RentReceipt settle_rent(
    const AccessSet& access_set, const StateTrie& trie, Timestamp now, const RentParams& params);

/// Called for every access of a leaf present in the trie, with the leaf's
/// rent timestamp before settlement.
using LeafAccessObserver = std::function<void(const LeafNode& leaf)>;

/// Checks frame nesting and budgets; throws StructureError.
void validate_transaction(const Transaction& tx);

/// Executes ops, settles rent at the end and charges it to the gas limit.
/// Throws StructureError before touching the trie if the ops are malformed.
std::pair<TxOutcome, RentReceipt> execute_tx(const Transaction& tx, StateTrie& trie,
    const BlockContext& block, const RentParams& params,
    const LeafAccessObserver& on_leaf_access = {});
}  // namespace staterent
