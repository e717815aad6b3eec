// Copyright 2026 The staterent Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <staterent/state_trie.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace staterent
{
/// Non-negative exact fraction num/den.
struct Rational
{
    std::uint64_t num = 0;
    std::uint64_t den = 1;

    friend bool operator==(const Rational&, const Rational&) = default;

    /// floor(value * num / den) without intermediate overflow.
    std::uint64_t floor_mul(std::uint64_t value) const noexcept;

    std::string to_string() const { return std::to_string(num) + "/" + std::to_string(den); }
};

enum class HolidayMode : std::uint8_t
{
    pause,
    discount,
};

/// Half-open window [start_ts, end_ts) during which collections are paused or discounted.
struct HolidayWindow
{
    Timestamp start_ts = 0;
    Timestamp end_ts = 0;
    HolidayMode mode = HolidayMode::pause;
    Rational discount{};  // discount mode only, in (0, 1)

    friend bool operator==(const HolidayWindow&, const HolidayWindow&) = default;
};

inline constexpr std::uint64_t kSecondsPerYear = 31'536'000;
inline constexpr std::uint64_t kDefaultAccrualHorizon = 3 * kSecondsPerYear;

struct RentParams
{
    /// Rental rate is 2^-rate_denominator_log2 gas per byte per second.
    unsigned rate_denominator_log2 = 21;
    std::uint64_t storage_overhead_bytes = 64;
    Gas read_threshold_gas = 5000;
    Gas write_threshold_gas = 1000;
    Gas cap_gas_per_node = 10000;
    /// Unset means one year of rent for a 32-byte cell.
    std::optional<Gas> missing_key_penalty_gas;
    Rational revert_fraction{1, 4};
    /// Unset disables the clamp: rent accrues without bound.
    std::optional<std::uint64_t> accrual_horizon_seconds = kDefaultAccrualHorizon;
    std::uint64_t seconds_per_year = kSecondsPerYear;
    std::vector<HolidayWindow> holidays;

    /// Throws ConfigError naming the offending field.
    void validate() const;

    friend bool operator==(const RentParams&, const RentParams&) = default;
};

enum class AccessStrength : std::uint8_t
{
    read,
    write,
};

enum class RentReason : std::uint8_t
{
    skipped_below_threshold,
    collected_full,
    collected_capped,
    penalty_missing_key,
    reverted_fraction,
    holiday_paused,
    created_no_rent,
};

inline constexpr std::size_t kRentReasonCount = 7;

std::string_view reason_name(RentReason reason) noexcept;

struct RentComputation
{
    std::uint64_t effective_size = 0;
    std::uint64_t duration_charged = 0;
    Gas due = 0;
    Gas collected = 0;
    Timestamp new_ts = 0;
    RentReason reason = RentReason::skipped_below_threshold;

    friend bool operator==(const RentComputation&, const RentComputation&) = default;
};

struct CapResult
{
    Gas collected = 0;
    bool fully_paid = true;
};

struct HolidayResult
{
    Gas adjusted = 0;
    bool advance_allowed = true;
};

std::uint64_t effective_size(std::uint64_t value_len, const RentParams& params) noexcept;

/// floor(size * min(now - last_paid, horizon) / 2^k), saturating at UINT64_MAX.
/// Throws std::invalid_argument when now < last_paid.
Gas rent_due(std::uint64_t effective_size, Timestamp last_paid_ts, Timestamp now,
    const RentParams& params);

/// Inclusive thresholds: collect iff due >= the threshold for the access strength.
bool collection_decision(Gas due, AccessStrength strongest, const RentParams& params) noexcept;

CapResult apply_cap(Gas due, const RentParams& params) noexcept;

/// Where the rent timestamp lands after collecting `collected` gas. A fully
/// paid node settles at `now`; a capped one moves forward by the time the
/// payment covers, never past `now`.
Timestamp advance_timestamp(Timestamp last_paid_ts, Timestamp now, Gas collected,
    bool fully_paid, std::uint64_t effective_size, const RentParams& params);

/// Rent for one year of a value of this length, ignoring the accrual horizon.
Gas one_year_rent(std::uint64_t value_len, const RentParams& params);

Gas missing_key_penalty(const RentParams& params);

/// The holiday window containing `ts`, if any.
const HolidayWindow* holiday_at(Timestamp ts, const RentParams& params) noexcept;

HolidayResult holiday_adjust(Gas collected, Timestamp settle_ts, const RentParams& params) noexcept;

/// Full per-node pipeline: due, threshold, cap, holiday, timestamp advance.
RentComputation compute_rent(std::uint64_t effective_size, Timestamp last_paid_ts, Timestamp now,
    AccessStrength strongest, const RentParams& params);
}  // namespace staterent
