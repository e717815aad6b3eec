// Copyright 2026 The staterent Authors
// SPDX-License-Identifier: Apache-2.0

#include <staterent/errors.hpp>
#include <staterent/rent.hpp>

#include <algorithm>
#include <limits>
#include <stdexcept>

namespace staterent
{
namespace
{
__extension__ typedef unsigned __int128 u128;

constexpr auto kMaxU64 = std::numeric_limits<std::uint64_t>::max();

std::uint64_t saturate(u128 v) noexcept
{
    return v > kMaxU64 ? kMaxU64 : static_cast<std::uint64_t>(v);
}
}  // namespace

std::uint64_t Rational::floor_mul(std::uint64_t value) const noexcept
{
    return saturate(static_cast<u128>(value) * num / den);
}

std::string_view reason_name(RentReason reason) noexcept
{
    switch (reason)
    {
    case RentReason::skipped_below_threshold:
        return "skipped_below_threshold";
    case RentReason::collected_full:
        return "collected_full";
    case RentReason::collected_capped:
        return "collected_capped";
    case RentReason::penalty_missing_key:
        return "penalty_missing_key";
    case RentReason::reverted_fraction:
        return "reverted_fraction";
    case RentReason::holiday_paused:
        return "holiday_paused";
    case RentReason::created_no_rent:
        return "created_no_rent";
    }
    return "unknown";
}

void RentParams::validate() const
{
    if (rate_denominator_log2 > 63)
        throw ConfigError{"rent.rate_denominator_log2", "must be at most 63"};
    if (write_threshold_gas > read_threshold_gas)
        throw ConfigError{"rent.write_threshold_gas", "must not exceed read_threshold_gas"};
    if (cap_gas_per_node < read_threshold_gas)
        throw ConfigError{"rent.cap_gas_per_node", "must be at least read_threshold_gas"};
    if (revert_fraction.den == 0 || revert_fraction.num > revert_fraction.den)
        throw ConfigError{"rent.revert_fraction", "must be a fraction in [0, 1]"};
    if (seconds_per_year == 0)
        throw ConfigError{"rent.seconds_per_year", "must be positive"};

    auto sorted = holidays;
    std::sort(sorted.begin(), sorted.end(),
        [](const auto& a, const auto& b) { return a.start_ts < b.start_ts; });
    for (std::size_t i = 0; i < sorted.size(); ++i)
    {
        const auto& h = sorted[i];
        if (h.start_ts >= h.end_ts)
            throw ConfigError{"rent.holidays", "window start must precede its end"};
        if (h.mode == HolidayMode::discount &&
            (h.discount.den == 0 || h.discount.num == 0 || h.discount.num >= h.discount.den))
            throw ConfigError{"rent.holidays", "discount must lie strictly between 0 and 1"};
        if (i > 0 && sorted[i - 1].end_ts > h.start_ts)
            throw ConfigError{"rent.holidays", "windows must not overlap"};
    }
}

std::uint64_t effective_size(std::uint64_t value_len, const RentParams& params) noexcept
{
    return saturate(static_cast<u128>(value_len) + params.storage_overhead_bytes);
}

Gas rent_due(std::uint64_t effective_size, Timestamp last_paid_ts, Timestamp now,
    const RentParams& params)
{
    if (now < last_paid_ts)
        throw std::invalid_argument{"rent_due: now precedes the last payment"};
    auto duration = now - last_paid_ts;
    if (params.accrual_horizon_seconds)
        duration = std::min(duration, *params.accrual_horizon_seconds);
    return saturate(
        (static_cast<u128>(effective_size) * duration) >> params.rate_denominator_log2);
}

bool collection_decision(Gas due, AccessStrength strongest, const RentParams& params) noexcept
{
    const auto threshold = strongest == AccessStrength::write ? params.write_threshold_gas :
                                                                params.read_threshold_gas;
    return due >= threshold;
}

CapResult apply_cap(Gas due, const RentParams& params) noexcept
{
    return {std::min(due, params.cap_gas_per_node), due <= params.cap_gas_per_node};
}

Timestamp advance_timestamp(Timestamp last_paid_ts, Timestamp now, Gas collected,
    bool fully_paid, std::uint64_t effective_size, const RentParams& params)
{
    if (effective_size == 0)
        throw std::invalid_argument{"advance_timestamp: effective size must be positive"};
    if (fully_paid)
        return now;
    const u128 covered =
        (static_cast<u128>(collected) << params.rate_denominator_log2) / effective_size;
    return saturate(std::min<u128>(now, static_cast<u128>(last_paid_ts) + covered));
}

Gas one_year_rent(std::uint64_t value_len, const RentParams& params)
{
    auto unclamped = params;
    unclamped.accrual_horizon_seconds.reset();
    return rent_due(effective_size(value_len, params), 0, params.seconds_per_year, unclamped);
}

Gas missing_key_penalty(const RentParams& params)
{
    return params.missing_key_penalty_gas.value_or(one_year_rent(32, params));
}

const HolidayWindow* holiday_at(Timestamp ts, const RentParams& params) noexcept
{
    for (const auto& h : params.holidays)
        if (h.start_ts <= ts && ts < h.end_ts)
            return &h;
    return nullptr;
}

HolidayResult holiday_adjust(Gas collected, Timestamp settle_ts, const RentParams& params) noexcept
{
    const auto* h = holiday_at(settle_ts, params);
    if (h == nullptr)
        return {collected, true};
    if (h->mode == HolidayMode::pause)
        return {0, false};
    // Charged share is (1 - d) = (den - num) / den.
    const Rational charged{h->discount.den - h->discount.num, h->discount.den};
    return {charged.floor_mul(collected), true};
}

RentComputation compute_rent(std::uint64_t effective_size, Timestamp last_paid_ts, Timestamp now,
    AccessStrength strongest, const RentParams& params)
{
    RentComputation c;
    c.effective_size = effective_size;
    c.due = rent_due(effective_size, last_paid_ts, now, params);
    c.new_ts = last_paid_ts;

    if (!collection_decision(c.due, strongest, params))
    {
        c.reason = RentReason::skipped_below_threshold;
        return c;
    }
    const auto cap = apply_cap(c.due, params);
    const auto holiday = holiday_adjust(cap.collected, now, params);
    if (!holiday.advance_allowed)
    {
        c.reason = RentReason::holiday_paused;
        return c;
    }
    // A discount forgives the remainder: the timestamp moves as if the
    // pre-discount amount had been paid.
    c.new_ts = advance_timestamp(
        last_paid_ts, now, cap.collected, cap.fully_paid, effective_size, params);
    c.duration_charged = c.new_ts - last_paid_ts;
    c.collected = holiday.adjusted;
    c.reason = cap.fully_paid ? RentReason::collected_full : RentReason::collected_capped;
    return c;
}
}  // namespace staterent
