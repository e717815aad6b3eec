// Copyright 2026 The staterent Authors
// SPDX-License-Identifier: Apache-2.0

#include <staterent/errors.hpp>
#include <staterent/tx_executor.hpp>

#include <algorithm>
#include <limits>
#include <optional>
#include <stdexcept>

namespace staterent
{
std::string_view access_kind_name(AccessKind kind) noexcept
{
    switch (kind)
    {
    case AccessKind::missing:
        return "missing";
    case AccessKind::read:
        return "read";
    case AccessKind::write:
        return "write";
    case AccessKind::create:
        return "create";
    case AccessKind::del:
        return "delete";
    }
    return "unknown";
}

std::string_view status_name(TxStatus status) noexcept
{
    switch (status)
    {
    case TxStatus::success:
        return "success";
    case TxStatus::reverted:
        return "reverted";
    case TxStatus::out_of_gas:
        return "out_of_gas";
    }
    return "unknown";
}

namespace
{
int rank(AccessKind kind) noexcept
{
    switch (kind)
    {
    case AccessKind::missing:
        return 0;
    case AccessKind::read:
        return 1;
    default:
        return 2;
    }
}

bool is_rent_collection(RentReason reason) noexcept
{
    return reason == RentReason::collected_full || reason == RentReason::collected_capped;
}

Gas add_saturating(Gas a, Gas b) noexcept
{
    return b > std::numeric_limits<Gas>::max() - a ? std::numeric_limits<Gas>::max() : a + b;
}
}  // namespace

FrameId AccessSet::open_frame(FrameId parent)
{
    if (parent >= frames_.size() || !frames_[parent].open)
        throw std::invalid_argument{"open_frame: parent frame is not open"};
    frames_.push_back({parent, true, false});
    return static_cast<FrameId>(frames_.size() - 1);
}

void AccessSet::close_frame(FrameId frame, bool revert)
{
    if (frame >= frames_.size() || !frames_[frame].open)
        throw std::invalid_argument{"close_frame: frame is not open"};
    frames_[frame].open = false;
    frames_[frame].reverted = revert;
}

bool AccessSet::frame_effective(FrameId frame) const
{
    for (;;)
    {
        const auto& f = frames_.at(frame);
        if (f.reverted)
            return false;
        if (frame == 0)
            return true;
        frame = f.parent;
    }
}

void AccessSet::record(const Key& key, AccessKind kind, FrameId frame, const LeafNode* current)
{
    if (finalized_)
        throw UsageError{"access set already finalized"};
    if (frame >= frames_.size() || !frames_[frame].open)
        throw std::invalid_argument{"record: frame is not open"};

    const auto [it, inserted] = index_.try_emplace(key.hashed, records_.size());
    if (inserted)
    {
        AccessRecord r;
        r.key = key;
        r.strongest = kind;
        r.frames.push_back(frame);
        if (current != nullptr)
        {
            r.existed_at_start = true;
            r.original_ts = current->rent_paid_ts;
            r.original_value_len = current->value.size();
            r.original_kind = current->kind;
            if (r.key.logical.empty())
                r.key.logical = current->key.logical;
        }
        records_.push_back(std::move(r));
        return;
    }

    auto& r = records_[it->second];
    const int old_rank = rank(r.strongest);
    const int new_rank = rank(kind);
    if (new_rank > old_rank || (new_rank == 2 && old_rank == 2))
        r.strongest = kind;
    if (std::find(r.frames.begin(), r.frames.end(), frame) == r.frames.end())
        r.frames.push_back(frame);
}

void AccessSet::finalize()
{
    for (auto& r : records_)
        r.reverted_only = std::none_of(
            r.frames.begin(), r.frames.end(), [&](FrameId f) { return frame_effective(f); });
    finalized_ = true;
}

const AccessRecord* AccessSet::find(const Hash256& hashed) const
{
    const auto it = index_.find(hashed);
    return it == index_.end() ? nullptr : &records_[it->second];
}

void record_access(
    AccessSet& access_set, const Key& key, AccessKind kind, FrameId frame, const LeafNode* current)
{
    access_set.record(key, kind, frame, current);
}

RentReceipt settle_rent(
    const AccessSet& access_set, const StateTrie& trie, Timestamp now, const RentParams& params)
{
    if (!access_set.finalized())
        throw UsageError{"settle_rent requires a finalized access set"};

    RentReceipt receipt;
    receipt.items.reserve(access_set.records().size());
    for (const auto& rec : access_set.records())
    {
        ReceiptItem item{rec.key, {}, false};
        const LeafNode* current = trie.get(rec.key.hashed);

        if (!rec.existed_at_start)
        {
            if (rec.strongest == AccessKind::missing)
            {
                const auto penalty = missing_key_penalty(params);
                item.rent.due = penalty;
                item.rent.collected = penalty;
                item.rent.new_ts = now;
                item.rent.reason = RentReason::penalty_missing_key;
                receipt.total_penalty_gas = add_saturating(receipt.total_penalty_gas, penalty);
            }
            else
            {
                item.rent.effective_size =
                    current != nullptr ? effective_size(current->value.size(), params) : 0;
                item.rent.new_ts = now;
                item.rent.reason = RentReason::created_no_rent;
            }
            receipt.items.push_back(std::move(item));
            continue;
        }

        const auto size = effective_size(rec.original_value_len, params);
        // Deletions settle at the write threshold even though the leaf is gone.
        const auto strength = (rank(rec.strongest) == 2 || current == nullptr) ?
                                  AccessStrength::write :
                                  AccessStrength::read;
        item.rent = compute_rent(size, rec.original_ts, now, strength, params);

        if (rec.reverted_only)
        {
            if (is_rent_collection(item.rent.reason))
            {
                item.rent.collected = params.revert_fraction.floor_mul(item.rent.collected);
                item.rent.new_ts = rec.original_ts;
                item.rent.duration_charged = 0;
                item.rent.reason = RentReason::reverted_fraction;
            }
        }
        else if (current != nullptr && is_rent_collection(item.rent.reason))
            item.writes_timestamp = current->rent_paid_ts < item.rent.new_ts;

        receipt.total_rent_gas = add_saturating(receipt.total_rent_gas, item.rent.collected);
        receipt.items.push_back(std::move(item));
    }
    return receipt;
}

void validate_transaction(const Transaction& tx)
{
    if (tx.sender.empty())
        throw StructureError{"transaction sender is empty"};
    if (tx.exec_gas > tx.gas_limit)
        throw StructureError{"exec_gas exceeds gas_limit"};

    std::vector<Gas> budgets{tx.gas_limit - tx.exec_gas};
    for (std::size_t i = 0; i < tx.ops.size(); ++i)
    {
        const auto& o = tx.ops[i];
        if (const auto* begin = std::get_if<op::FrameBegin>(&o))
        {
            if (begin->gas_budget > budgets.back())
                throw StructureError{"op " + std::to_string(i) +
                                     ": frame gas budget exceeds the enclosing frame's"};
            budgets.push_back(begin->gas_budget);
        }
        else if (std::holds_alternative<op::FrameEnd>(o))
        {
            if (budgets.size() == 1)
                throw StructureError{"op " + std::to_string(i) + ": frame_end without frame_begin"};
            budgets.pop_back();
        }
    }
    if (budgets.size() != 1)
        throw StructureError{"unterminated call frame"};
}

namespace
{
/// Executes one transaction's ops with an undo journal for frame reverts.
class Execution
{
public:
    Execution(StateTrie& trie, Timestamp now, const LeafAccessObserver& observer)
      : trie_{trie}, now_{now}, observer_{observer}
    {}

    AccessSet& access() noexcept { return access_; }

    void run(const Transaction& tx)
    {
        const auto sender = Key::from_logical(tx.sender);
        if (touch(sender, AccessKind::write) == nullptr)
        {
            access_.record(sender, AccessKind::create, frames_.back(), nullptr);
            put_leaf(LeafNode{sender, Bytes(32, 0), now_, NodeKind::account});
        }

        for (const auto& o : tx.ops)
            std::visit([this](const auto& x) { apply(x); }, o);
    }

    void undo_to(std::size_t mark)
    {
        while (journal_.size() > mark)
        {
            auto& e = journal_.back();
            if (e.previous)
                trie_.put(std::move(*e.previous));
            else
                trie_.erase(e.hashed);
            journal_.pop_back();
        }
    }

private:
    struct JournalEntry
    {
        Hash256 hashed;
        std::optional<LeafNode> previous;
    };

    // Records an access to a key; returns the current leaf if present.
    const LeafNode* touch(const Key& key, AccessKind kind_if_present)
    {
        const LeafNode* current = trie_.get(key.hashed);
        if (current == nullptr)
            return nullptr;
        if (current->rent_paid_ts > now_)
            throw std::invalid_argument{"block timestamp precedes a leaf's rent timestamp"};
        if (observer_)
            observer_(*current);
        access_.record(key, kind_if_present, frames_.back(), current);
        return current;
    }

    void put_leaf(LeafNode leaf)
    {
        const auto* prev = trie_.get(leaf.key.hashed);
        journal_.push_back({leaf.key.hashed, prev ? std::optional{*prev} : std::nullopt});
        trie_.put(std::move(leaf));
    }

    void erase_leaf(const LeafNode& current)
    {
        journal_.push_back({current.key.hashed, current});
        trie_.erase(current.key.hashed);
    }

    void upsert(const std::string& logical, const Bytes& value, std::optional<NodeKind> kind)
    {
        const auto key = Key::from_logical(logical);
        if (const auto* current = touch(key, AccessKind::write))
        {
            LeafNode next{current->key, value, current->rent_paid_ts, kind.value_or(current->kind)};
            put_leaf(std::move(next));
            return;
        }
        access_.record(key, AccessKind::create, frames_.back(), nullptr);
        put_leaf(LeafNode{key, value, now_, kind.value_or(NodeKind::storage_cell)});
    }

    void apply(const op::Read& o)
    {
        const auto key = Key::from_logical(o.key);
        if (!touch(key, AccessKind::read))
            access_.record(key, AccessKind::missing, frames_.back(), nullptr);
    }

    void apply(const op::Write& o) { upsert(o.key, o.value, std::nullopt); }

    void apply(const op::Create& o) { upsert(o.key, o.value, o.kind); }

    void apply(const op::Delete& o)
    {
        const auto key = Key::from_logical(o.key);
        if (const auto* current = touch(key, AccessKind::del))
            erase_leaf(*current);
        else
            access_.record(key, AccessKind::missing, frames_.back(), nullptr);
    }

    void apply(const op::DeletePrefix& o)
    {
        for (const auto& key : trie_.keys_with_prefix(o.prefix))
            if (const auto* current = touch(key, AccessKind::del))
                erase_leaf(*current);
    }

    void apply(const op::FrameBegin&)
    {
        frames_.push_back(access_.open_frame(frames_.back()));
        marks_.push_back(journal_.size());
    }

    void apply(const op::FrameEnd& o)
    {
        access_.close_frame(frames_.back(), o.revert);
        if (o.revert)
            undo_to(marks_.back());
        frames_.pop_back();
        marks_.pop_back();
    }

    StateTrie& trie_;
    Timestamp now_;
    const LeafAccessObserver& observer_;
    AccessSet access_;
    std::vector<JournalEntry> journal_;
    std::vector<FrameId> frames_{0};
    std::vector<std::size_t> marks_{0};
};
}  // namespace

std::pair<TxOutcome, RentReceipt> execute_tx(const Transaction& tx, StateTrie& trie,
    const BlockContext& block, const RentParams& params, const LeafAccessObserver& on_leaf_access)
{
    validate_transaction(tx);
    const auto now = block.timestamp;

    Execution exec{trie, now, on_leaf_access};
    try
    {
        exec.run(tx);
    }
    catch (...)
    {
        exec.undo_to(0);
        throw;
    }

    auto& access = exec.access();
    access.close_frame(0, tx.reverts);
    access.finalize();
    if (tx.reverts)
        exec.undo_to(0);

    auto receipt = settle_rent(access, trie, now, params);
    const Gas available = tx.gas_limit - tx.exec_gas;
    const Gas charged = add_saturating(receipt.total_rent_gas, receipt.total_penalty_gas);

    if (charged > available)
    {
        exec.undo_to(0);
        receipt = RentReceipt{};
        receipt.status = TxStatus::out_of_gas;
        return {TxOutcome{TxStatus::out_of_gas, tx.gas_limit}, std::move(receipt)};
    }

    for (const auto& item : receipt.items)
        if (item.writes_timestamp)
            trie.set_timestamp(item.key.hashed, item.rent.new_ts);

    receipt.status = tx.reverts ? TxStatus::reverted : TxStatus::success;
    return {TxOutcome{receipt.status, tx.exec_gas + charged}, std::move(receipt)};
}
}  // namespace staterent
