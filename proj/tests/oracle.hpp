// Copyright 2026 The staterent Authors
// SPDX-License-Identifier: Apache-2.0

// Independent arbitrary-precision reference for the rent arithmetic. Shares
// no code with the library: every quantity is an exact rational and the
// floor is taken only at the end.

#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <algorithm>
#include <cstdint>
#include <optional>

namespace staterent::oracle
{
using boost::multiprecision::cpp_int;
using boost::multiprecision::cpp_rational;

inline cpp_int floor_div(const cpp_rational& r)
{
    const cpp_int n = numerator(r);
    const cpp_int d = denominator(r);
    cpp_int q = n / d;
    if (n < 0 && q * d != n)
        --q;
    return q;
}

inline cpp_rational rate(unsigned log2_denominator)
{
    return cpp_rational{cpp_int{1}, cpp_int{1} << log2_denominator};
}

inline std::uint64_t due(std::uint64_t size, std::uint64_t dt, unsigned log2_denominator,
    std::optional<std::uint64_t> horizon)
{
    const std::uint64_t charged = horizon ? std::min(dt, *horizon) : dt;
    return floor_div(cpp_rational{cpp_int{size} * cpp_int{charged}} * rate(log2_denominator))
        .convert_to<std::uint64_t>();
}

inline std::uint64_t capped(std::uint64_t due, std::uint64_t cap)
{
    return due < cap ? due : cap;
}

/// Seconds of rent that `collected` gas buys for a node of `size` bytes.
inline std::uint64_t seconds_covered(std::uint64_t collected, std::uint64_t size,
    unsigned log2_denominator)
{
    return floor_div(cpp_rational{cpp_int{collected}} / (cpp_rational{cpp_int{size}} *
                                                            rate(log2_denominator)))
        .convert_to<std::uint64_t>();
}

inline std::uint64_t advanced(std::uint64_t last, std::uint64_t now, std::uint64_t due,
    std::uint64_t cap, std::uint64_t size, unsigned log2_denominator)
{
    if (due <= cap)
        return now;
    const cpp_int target = cpp_int{last} + seconds_covered(cap, size, log2_denominator);
    return target < cpp_int{now} ? target.convert_to<std::uint64_t>() : now;
}
}  // namespace staterent::oracle
